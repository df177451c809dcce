//! ToBI tone and break-index tiers.
//!
//! Break indices characterize the disjuncture at a word boundary, and the
//! only thing connecting them to the word strand is the decimal time
//! value both files spell out. Matching is therefore exact-decimal: a
//! break whose time equals no word-boundary time is an error naming the
//! offending text, never a silent drop. Tones are point events; each
//! becomes a zero-width `Tone/` arc, attached to a word-boundary node
//! when one matches its time exactly and free-standing otherwise.

use std::collections::BTreeMap;

use super::xwaves::PointLabel;
use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, NodeId, Record};
use crate::time::TimePoint;

/// Attach tone and break tiers to an anchored word graph. The result is
/// the word graph plus one zero-width arc per event.
pub fn attach_tobi(
    word_graph: &AnnotationGraph,
    tones: &[PointLabel],
    breaks: &[PointLabel],
    id_prefix: &str,
) -> Result<AnnotationGraph, FormatError> {
    let mut g = word_graph.clone();

    // word-boundary nodes by exact decimal time; first id wins ties
    let mut by_time: BTreeMap<TimePoint, NodeId> = BTreeMap::new();
    for node in word_graph.nodes() {
        if let Some(t) = node.time {
            by_time.entry(t).or_insert(node.id);
        }
    }

    for (i, brk) in breaks.iter().enumerate() {
        let src = by_time
            .get(&brk.time)
            .ok_or_else(|| FormatError::UnmatchedTime(brk.time.to_string()))?
            .clone();
        let dst = format!("{id_prefix}brk{i}");
        g.add_node(dst.as_str(), Some(brk.time.clone()))?;
        g.add_arc(Arc::new(
            src,
            Record::new(tags::BREAK, brk.label.clone()),
            dst.as_str(),
        ));
    }

    for (i, tone) in tones.iter().enumerate() {
        let src = match by_time.get(&tone.time) {
            Some(node) => node.clone(),
            None => {
                let id = format!("{id_prefix}ton{i}s");
                g.add_node(id.as_str(), Some(tone.time.clone()))?;
                NodeId::from(id.as_str())
            }
        };
        let dst = format!("{id_prefix}ton{i}");
        g.add_node(dst.as_str(), Some(tone.time.clone()))?;
        g.add_arc(Arc::new(
            src,
            Record::new(tags::TONE, tone.label.clone()),
            dst.as_str(),
        ));
    }
    Ok(g)
}
