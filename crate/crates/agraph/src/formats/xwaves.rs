//! xwaves label files.
//!
//! Each nonblank line is `offset color label`: the offset (decimal
//! seconds) ends the interval the label describes, so record *i* covers
//! `[offset(i-1), offset(i)]`, with the very first interval starting at
//! 0.0. Silence is marked explicitly (conventionally `<sil>`), which is
//! what makes gaps recoverable. Labels keep the whole remainder of the
//! line, comments and all.

use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};
use crate::time::TimePoint;

/// One reconstructed interval: `[start, end]` labeled, with the xwaves
/// display color along for the ride.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInterval {
    pub start: TimePoint,
    pub end: TimePoint,
    pub color: i64,
    pub label: String,
}

/// A point event from a label file read as event times rather than
/// interval ends (ToBI tone and break-index tiers use this).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointLabel {
    pub time: TimePoint,
    pub label: String,
}

fn split_line(line: &str) -> Option<(&str, &str, &str)> {
    // offset, color, then the remainder of the line verbatim as the label
    let rest = line.trim_start();
    let offset_end = rest.find(char::is_whitespace)?;
    let (offset, rest) = rest.split_at(offset_end);
    let rest = rest.trim_start();
    let color_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    let (color, label) = rest.split_at(color_end);
    Some((offset, color, label.trim()))
}

/// Reconstruct intervals from a label file. Offsets must be nondecreasing.
pub fn parse_xwaves(text: &str) -> Result<Vec<LabeledInterval>, FormatError> {
    let mut out = Vec::new();
    let mut prev = TimePoint::parse("0.0").expect("constant");
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = || FormatError::MalformedLine {
            line: line_no,
            content: line.to_string(),
        };
        let (offset_text, color_text, label) = split_line(line).ok_or_else(malformed)?;
        let offset = TimePoint::parse(offset_text).map_err(|_| malformed())?;
        let color: i64 = color_text.parse().map_err(|_| malformed())?;
        if label.is_empty() {
            return Err(malformed());
        }
        if offset < prev {
            return Err(FormatError::NonmonotonicTime {
                line: line_no,
                offset: offset_text.to_string(),
                previous: prev.to_string(),
            });
        }
        out.push(LabeledInterval {
            start: prev.clone(),
            end: offset.clone(),
            color,
            label: label.to_string(),
        });
        prev = offset;
    }
    Ok(out)
}

/// Read a label file as point events (time, label).
pub fn parse_point_labels(text: &str) -> Result<Vec<PointLabel>, FormatError> {
    Ok(parse_xwaves(text)?
        .into_iter()
        .map(|iv| PointLabel {
            time: iv.end,
            label: iv.label,
        })
        .collect())
}

/// Build a graph from reconstructed intervals: one arc per non-silence
/// interval between nodes anchored at its boundaries. Adjacent non-silence
/// intervals share their common node; a silence interval produces a gap,
/// so the word before it and the word after it touch distinct nodes.
pub fn xwaves_to_graph(
    intervals: &[LabeledInterval],
    type_tag: &str,
    silence_label: &str,
    id_prefix: &str,
) -> AnnotationGraph {
    let mut g = AnnotationGraph::new();
    let mut counter = 0usize;
    let mut open_end: Option<(String, TimePoint)> = None; // node carried from the previous word

    for iv in intervals {
        if iv.label == silence_label {
            open_end = None;
            continue;
        }
        let src = match open_end.take() {
            Some((id, end)) if end == iv.start => id,
            _ => {
                let id = format!("{id_prefix}n{counter}");
                counter += 1;
                g.add_node(id.as_str(), Some(iv.start.clone()))
                    .expect("fresh node");
                id
            }
        };
        let dst = format!("{id_prefix}n{counter}");
        counter += 1;
        g.add_node(dst.as_str(), Some(iv.end.clone())).expect("fresh node");
        g.add_arc(Arc::new(
            src.as_str(),
            Record::new(type_tag, iv.label.clone()),
            dst.as_str(),
        ));
        open_end = Some((dst, iv.end.clone()));
    }
    g
}

/// Convenience: parse a label file straight into a word graph.
pub fn parse_xwaves_to_graph(
    text: &str,
    type_tag: &str,
    silence_label: &str,
    id_prefix: &str,
) -> Result<AnnotationGraph, FormatError> {
    let intervals = parse_xwaves(text)?;
    Ok(xwaves_to_graph(&intervals, type_tag, silence_label, id_prefix))
}

pub const DEFAULT_SILENCE: &str = "<sil>";
pub const DEFAULT_TYPE_TAG: &str = tags::WORD;
