//! A time index over arc extents.
//!
//! Built once per graph: every arc whose extent is fully bounded goes in,
//! sorted by extent start. A window query binary-searches the start
//! column and filters the prefix, returning exactly the arcs whose extent
//! intersects the window (closed intervals) — the same answer a linear
//! scan gives, which is how the tests check it. Arcs with an unbounded
//! extent are not indexed and never match a window.

use std::collections::BTreeSet;

use crate::graph::{AnnotationGraph, Arc, TimeInterval};
use crate::query::{extent_intersects_window, ArcSet};
use crate::time::TimePoint;

#[derive(Debug, Clone)]
pub struct TimeIndex<'g> {
    graph: &'g AnnotationGraph,
    /// (extent lo, extent hi, arc), sorted by lo then hi then arc
    entries: Vec<(TimePoint, TimePoint, Arc)>,
}

impl<'g> TimeIndex<'g> {
    pub fn build(graph: &'g AnnotationGraph) -> TimeIndex<'g> {
        let mut entries: Vec<(TimePoint, TimePoint, Arc)> = graph
            .arcs()
            .filter_map(|arc| {
                let extent = graph.arc_extent(arc);
                match (extent.lo, extent.hi) {
                    (Some(lo), Some(hi)) => Some((lo, hi, arc.clone())),
                    _ => None,
                }
            })
            .collect();
        entries.sort();
        TimeIndex { graph, entries }
    }

    pub fn graph(&self) -> &'g AnnotationGraph {
        self.graph
    }

    /// Number of indexed arcs.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The arcs whose extent intersects the window. Missing window sides
    /// mean unbounded on that side.
    pub fn query_window(&self, window: &TimeInterval) -> ArcSet<'g> {
        // entries are sorted by lo; everything past the window's hi is out
        let cut = match &window.hi {
            Some(w_hi) => self
                .entries
                .partition_point(|(lo, _, _)| lo <= w_hi),
            None => self.entries.len(),
        };
        let members: BTreeSet<Arc> = self.entries[..cut]
            .iter()
            .filter(|(lo, hi, _)| {
                let extent = TimeInterval {
                    lo: Some(lo.clone()),
                    hi: Some(hi.clone()),
                };
                extent_intersects_window(&extent, window)
            })
            .map(|(_, _, arc)| arc.clone())
            .collect();
        ArcSet::from_members(self.graph, members)
    }
}
