//! Arc-set selection and the query algebra.
//!
//! Any subset of one graph's arcs induces a well-formed annotation graph,
//! so the power set of the arc set is closed under union, intersection
//! and relative complement — that closure is the whole query model. On
//! top of it sit three temporal relations (precedes, includes, overlaps)
//! between arcs of one graph.
//!
//! The relations are tri-state. Extents on a partially anchored graph are
//! outer brackets, not exact spans, so a relation only answers `true` or
//! `false` when every consistent assignment of times to the unanchored
//! nodes gives that answer; otherwise it says `unknown`. Structural
//! evidence (reachability through shared nodes) is consulted before
//! temporal evidence, so unanchored hierarchies still answer inclusion
//! queries.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{AnnotationGraph, Arc, NodeId, TimeInterval};
use crate::time::TimePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("arc sets belong to different graphs")]
    GraphMismatch,
    #[error("arc {0} is not part of the owning graph")]
    ForeignArc(String),
}

/// Three-valued query answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    True,
    False,
    Unknown,
}

impl TriState {
    pub fn is_true(self) -> bool {
        self == TriState::True
    }

    pub fn is_known(self) -> bool {
        self != TriState::Unknown
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::True => "true",
            TriState::False => "false",
            TriState::Unknown => "unknown",
        })
    }
}

/// A subset of one graph's arcs. The owning graph is part of the set's
/// identity: combining sets from two different graphs is an error, even
/// if the graphs happen to be equal.
#[derive(Debug, Clone)]
pub struct ArcSet<'g> {
    graph: &'g AnnotationGraph,
    members: BTreeSet<Arc>,
}

impl<'g> ArcSet<'g> {
    pub(crate) fn from_members(graph: &'g AnnotationGraph, members: BTreeSet<Arc>) -> ArcSet<'g> {
        debug_assert!(members.iter().all(|a| graph.contains_arc(a)));
        ArcSet { graph, members }
    }

    pub fn empty(graph: &'g AnnotationGraph) -> ArcSet<'g> {
        ArcSet {
            graph,
            members: BTreeSet::new(),
        }
    }

    /// Every arc of the graph.
    pub fn all(graph: &'g AnnotationGraph) -> ArcSet<'g> {
        ArcSet {
            graph,
            members: graph.arcs().cloned().collect(),
        }
    }

    /// An explicit member list; every arc must belong to the graph.
    pub fn from_arcs(
        graph: &'g AnnotationGraph,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Result<ArcSet<'g>, QueryError> {
        let mut members = BTreeSet::new();
        for arc in arcs {
            if !graph.contains_arc(&arc) {
                return Err(QueryError::ForeignArc(arc.to_string()));
            }
            members.insert(arc);
        }
        Ok(ArcSet { graph, members })
    }

    pub fn graph(&self) -> &'g AnnotationGraph {
        self.graph
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, arc: &Arc) -> bool {
        self.members.contains(arc)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc> {
        self.members.iter()
    }

    /// The annotation graph this set induces.
    pub fn to_graph(&self) -> AnnotationGraph {
        self.graph.subgraph(|a| self.members.contains(a))
    }

    fn check_same_graph(&self, other: &ArcSet<'g>) -> Result<(), QueryError> {
        if std::ptr::eq(self.graph, other.graph) {
            Ok(())
        } else {
            Err(QueryError::GraphMismatch)
        }
    }

    pub fn union(&self, other: &ArcSet<'g>) -> Result<ArcSet<'g>, QueryError> {
        self.check_same_graph(other)?;
        Ok(ArcSet {
            graph: self.graph,
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    pub fn intersect(&self, other: &ArcSet<'g>) -> Result<ArcSet<'g>, QueryError> {
        self.check_same_graph(other)?;
        Ok(ArcSet {
            graph: self.graph,
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    /// Relative complement: the members of `self` not in `other`.
    pub fn complement(&self, other: &ArcSet<'g>) -> Result<ArcSet<'g>, QueryError> {
        self.check_same_graph(other)?;
        Ok(ArcSet {
            graph: self.graph,
            members: self.members.difference(&other.members).cloned().collect(),
        })
    }
}

impl PartialEq for ArcSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.members == other.members
    }
}

impl Eq for ArcSet<'_> {}

/// Exact-match label pattern, or a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelPattern {
    Exact(String),
    Prefix(String),
}

impl LabelPattern {
    fn matches(&self, label: &str) -> bool {
        match self {
            LabelPattern::Exact(s) => label == s,
            LabelPattern::Prefix(p) => label.starts_with(p.as_str()),
        }
    }
}

/// Conjunctive arc filter: every set field must match. The time window
/// matches arcs whose extent is fully bounded and intersects it (closed
/// intervals; an arc with an unbounded extent never matches a window).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selector {
    pub type_tag: Option<String>,
    pub label: Option<LabelPattern>,
    pub class: Option<String>,
    pub window: Option<TimeInterval>,
}

impl Selector {
    pub fn new() -> Selector {
        Selector::default()
    }

    pub fn with_type(mut self, t: impl Into<String>) -> Selector {
        self.type_tag = Some(t.into());
        self
    }

    pub fn with_label(mut self, l: impl Into<String>) -> Selector {
        self.label = Some(LabelPattern::Exact(l.into()));
        self
    }

    pub fn with_label_prefix(mut self, p: impl Into<String>) -> Selector {
        self.label = Some(LabelPattern::Prefix(p.into()));
        self
    }

    pub fn with_class(mut self, c: impl Into<String>) -> Selector {
        self.class = Some(c.into());
        self
    }

    pub fn with_window(mut self, w: TimeInterval) -> Selector {
        self.window = Some(w);
        self
    }

    pub fn is_empty(&self) -> bool {
        *self == Selector::default()
    }

    fn matches(&self, g: &AnnotationGraph, arc: &Arc) -> bool {
        if let Some(t) = &self.type_tag {
            if arc.record.type_tag != *t {
                return false;
            }
        }
        if let Some(l) = &self.label {
            if !l.matches(&arc.record.label) {
                return false;
            }
        }
        if let Some(c) = &self.class {
            if arc.record.class.as_deref() != Some(c.as_str()) {
                return false;
            }
        }
        if let Some(w) = &self.window {
            if !extent_intersects_window(&g.arc_extent(arc), w) {
                return false;
            }
        }
        true
    }
}

/// Closed-interval intersection of a (fully bounded) extent with a
/// window whose missing sides mean unbounded.
pub(crate) fn extent_intersects_window(extent: &TimeInterval, window: &TimeInterval) -> bool {
    let (Some(lo), Some(hi)) = (&extent.lo, &extent.hi) else {
        return false;
    };
    if let Some(w_hi) = &window.hi {
        if lo > w_hi {
            return false;
        }
    }
    if let Some(w_lo) = &window.lo {
        if hi < w_lo {
            return false;
        }
    }
    true
}

/// All arcs matching the selector (conjunction of its set fields; an
/// empty selector matches everything vacuously).
pub fn select<'g>(g: &'g AnnotationGraph, selector: &Selector) -> ArcSet<'g> {
    let members = g
        .arcs()
        .filter(|a| selector.matches(g, a))
        .cloned()
        .collect();
    ArcSet::from_members(g, members)
}

/// All arcs coindexed under `class_name`.
pub fn coindexed<'g>(g: &'g AnnotationGraph, class_name: &str) -> ArcSet<'g> {
    select(g, &Selector::new().with_class(class_name))
}

struct NodeBounds {
    lb: Option<TimePoint>,
    ub: Option<TimePoint>,
}

fn bounds(g: &AnnotationGraph, n: &NodeId) -> NodeBounds {
    NodeBounds {
        lb: g.node_lower_bound(n),
        ub: g.node_upper_bound(n),
    }
}

fn le(a: &Option<TimePoint>, b: &Option<TimePoint>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x <= y)
}

fn lt(a: &Option<TimePoint>, b: &Option<TimePoint>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x < y)
}

fn ge(a: &Option<TimePoint>, b: &Option<TimePoint>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x >= y)
}

/// Both endpoints anchored with strictly increasing times: the arc has
/// positive width under every completion.
fn certainly_wide(g: &AnnotationGraph, arc: &Arc) -> bool {
    match (g.node_time(&arc.src), g.node_time(&arc.dst)) {
        (Some(s), Some(e)) => s < e,
        _ => false,
    }
}

/// Does `a` lie entirely at-or-before `b`?
///
/// True when a's end provably never passes b's start (with a tie broken
/// by either arc having certain positive width — two coincident points
/// do not precede one another); false when the opposite is provable;
/// unknown when the anchors cannot settle it.
pub fn precedes(g: &AnnotationGraph, a: &Arc, b: &Arc) -> TriState {
    if a == b {
        return TriState::False;
    }
    // structural evidence first
    if g.reaches(&a.dst, &b.src) {
        return TriState::True;
    }
    if g.reaches(&b.dst, &a.src) {
        return TriState::False;
    }

    let a_src = bounds(g, &a.src);
    let a_dst = bounds(g, &a.dst);
    let b_src = bounds(g, &b.src);
    let b_dst = bounds(g, &b.dst);

    // a's latest possible end vs b's earliest possible start
    if lt(&a_dst.ub, &b_src.lb) {
        return TriState::True;
    }
    if a_dst.ub.is_some() && a_dst.ub == b_src.lb && (certainly_wide(g, a) || certainly_wide(g, b))
    {
        return TriState::True;
    }
    // b ends at or before a begins: a cannot precede b
    if le(&b_dst.ub, &a_src.lb) {
        return TriState::False;
    }
    // a is still running when b has already started, in every completion
    if matches!((&a_dst.lb, &b_src.ub), (Some(x), Some(y)) if x > y) {
        return TriState::False;
    }
    TriState::Unknown
}

/// Does `a`'s span contain `b`'s? Reflexive; start and end containment
/// may each be proved structurally (shared-node reachability) or
/// temporally (node bounds), independently.
pub fn includes(g: &AnnotationGraph, a: &Arc, b: &Arc) -> TriState {
    let a_src = bounds(g, &a.src);
    let a_dst = bounds(g, &a.dst);
    let b_src = bounds(g, &b.src);
    let b_dst = bounds(g, &b.dst);

    let start_ok = g.reaches(&a.src, &b.src) || le(&a_src.ub, &b_src.lb);
    let end_ok = g.reaches(&b.dst, &a.dst) || le(&b_dst.ub, &a_dst.lb);
    if start_ok && end_ok {
        return TriState::True;
    }
    // b provably starts before a, or ends after it
    if lt(&b_src.ub, &a_src.lb) {
        return TriState::False;
    }
    if lt(&a_dst.ub, &b_dst.lb) {
        return TriState::False;
    }
    TriState::Unknown
}

/// Do the spans share more than a point? Zero-width arcs overlap
/// nothing; plain boundary touching is not overlap.
pub fn overlaps(g: &AnnotationGraph, a: &Arc, b: &Arc) -> TriState {
    let a_src = bounds(g, &a.src);
    let a_dst = bounds(g, &a.dst);
    let b_src = bounds(g, &b.src);
    let b_dst = bounds(g, &b.dst);

    // an arc pinched to a point in every completion
    if ge(&a_src.lb, &a_dst.ub) || ge(&b_src.lb, &b_dst.ub) {
        return TriState::False;
    }
    // separated in every completion
    if ge(&a_src.lb, &b_dst.ub) || ge(&b_src.lb, &a_dst.ub) {
        return TriState::False;
    }
    // the latest possible start is before the earliest possible end
    if let (Some(a_s), Some(b_s), Some(a_e), Some(b_e)) =
        (&a_src.ub, &b_src.ub, &a_dst.lb, &b_dst.lb)
    {
        let latest_start = a_s.max(b_s);
        let earliest_end = a_e.min(b_e);
        if latest_start < earliest_end {
            return TriState::True;
        }
    }
    TriState::Unknown
}

/// Interval logic on fully bounded extents; used by window queries and,
/// in tests, as the oracle the graph-aware relations must agree with.
pub fn interval_overlaps(a: &TimeInterval, b: &TimeInterval) -> Option<bool> {
    let (Some(a_lo), Some(a_hi), Some(b_lo), Some(b_hi)) = (&a.lo, &a.hi, &b.lo, &b.hi) else {
        return None;
    };
    Some(a_lo.max(b_lo) < a_hi.min(b_hi))
}

impl AnnotationGraph {
    /// Convenience wrappers over the module-level relation functions.
    pub fn precedes(&self, a: &Arc, b: &Arc) -> TriState {
        precedes(self, a, b)
    }

    pub fn includes_arc(&self, a: &Arc, b: &Arc) -> TriState {
        includes(self, a, b)
    }

    pub fn overlaps_arc(&self, a: &Arc, b: &Arc) -> TriState {
        overlaps(self, a, b)
    }
}
