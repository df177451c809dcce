//! COCONUT-style dialogue coding tables.
//!
//! The table layout puts discourse tags on the left, then an optional
//! speaker, then a parenthesized piece id, then the utterance text:
//!
//! ```text
//! Accept, Commit              S1:   (a)  Let's take the blue rug for 250,
//!                                   (b)  my rug wouldn't match
//! ```
//!
//! A missing speaker continues the previous one. The graph has three
//! layers over one chain of nodes: `Sp/` (one arc per maximal same-speaker
//! run), `Utt/` (one arc per piece, its piece id in the class field), and
//! `D/` (one arc per tag, unordered among themselves). A tag written
//! `Accept(d)` refers to piece (d) by class coindexing: the arc gets class
//! `d`, the same class piece (d)'s utterance arc carries — no pointers.

use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoconutRow {
    /// Raw tag strings, e.g. `Accept` or `Accept(d)`.
    pub tags: Vec<String>,
    /// Speaker id when the row names one; empty rows continue the last.
    pub speaker: Option<String>,
    pub piece_id: String,
    pub text: String,
}

/// Parse the textual table into rows.
pub fn parse_coconut_table(text: &str) -> Result<Vec<CoconutRow>, FormatError> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let malformed = |detail: String| FormatError::ParseError {
            line: line_no,
            detail,
        };

        // locate the piece marker token "(x)"
        let mut marker: Option<(usize, usize, &str)> = None;
        let mut offset = 0;
        for tok in line.split_whitespace() {
            let start = line[offset..].find(tok).unwrap() + offset;
            offset = start + tok.len();
            if tok.len() >= 3 && tok.starts_with('(') && tok.ends_with(')') {
                let inner = &tok[1..tok.len() - 1];
                if inner.chars().all(|c| c.is_ascii_alphanumeric()) {
                    marker = Some((start, offset, inner));
                    break;
                }
            }
        }
        let (marker_start, marker_end, piece_id) =
            marker.ok_or_else(|| malformed(format!("no (piece-id) marker in {line:?}")))?;

        let mut left = line[..marker_start].trim();
        let speaker = match left.split_whitespace().last() {
            Some(tok) if tok.ends_with(':') => {
                let sp = tok[..tok.len() - 1].to_string();
                left = left[..left.rfind(tok).unwrap()].trim();
                if sp.is_empty() {
                    return Err(malformed("empty speaker name".into()));
                }
                Some(sp)
            }
            _ => None,
        };
        let tag_list: Vec<String> = left
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();

        rows.push(CoconutRow {
            tags: tag_list,
            speaker,
            piece_id: piece_id.to_string(),
            text: line[marker_end..].trim().to_string(),
        });
    }
    Ok(rows)
}

fn split_tag(tag: &str) -> (String, Option<String>) {
    if let Some(open) = tag.find('(') {
        if let Some(stripped) = tag[open..].strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            return (tag[..open].to_string(), Some(stripped.to_string()));
        }
    }
    (tag.to_string(), None)
}

/// Build the three-layer graph from parsed rows.
pub fn coconut_to_graph(
    rows: &[CoconutRow],
    id_prefix: &str,
) -> Result<AnnotationGraph, FormatError> {
    let mut g = AnnotationGraph::new();
    if rows.is_empty() {
        return Ok(g);
    }

    let node = |i: usize| format!("{id_prefix}u{i}");
    for i in 0..=rows.len() {
        g.add_node(node(i).as_str(), None)?;
    }

    // utterance layer, piece ids as classes
    for (i, row) in rows.iter().enumerate() {
        g.add_arc(Arc::new(
            node(i).as_str(),
            Record::with_class(tags::UTT, row.text.clone(), row.piece_id.clone()),
            node(i + 1).as_str(),
        ));
    }

    // discourse layer: one arc per tag, coindexed when the tag refers
    for (i, row) in rows.iter().enumerate() {
        for tag in &row.tags {
            let (name, reference) = split_tag(tag);
            if name.is_empty() {
                return Err(FormatError::ParseError {
                    line: 0,
                    detail: format!("empty tag name in {tag:?}"),
                });
            }
            if let Some(target) = &reference {
                if !rows.iter().any(|r| r.piece_id == *target) {
                    return Err(FormatError::UnknownPieceRef {
                        tag: tag.clone(),
                        target: target.clone(),
                    });
                }
            }
            let record = match reference {
                Some(class) => Record::with_class(tags::DISCOURSE, name, class),
                None => Record::new(tags::DISCOURSE, name),
            };
            g.add_arc(Arc::new(node(i).as_str(), record, node(i + 1).as_str()));
        }
    }

    // speaker layer: one arc per maximal run of the same speaker
    let mut run_start = 0;
    let mut current = match &rows[0].speaker {
        Some(sp) => sp.clone(),
        None => {
            return Err(FormatError::ParseError {
                line: 0,
                detail: "first piece names no speaker".into(),
            })
        }
    };
    for i in 1..=rows.len() {
        let next = rows.get(i).map(|r| r.speaker.clone().unwrap_or_else(|| current.clone()));
        match next {
            Some(sp) if sp == current => continue,
            _ => {
                g.add_arc(Arc::new(
                    node(run_start).as_str(),
                    Record::new(tags::SP, current.clone()),
                    node(i).as_str(),
                ));
                if let Some(sp) = next {
                    run_start = i;
                    current = sp;
                }
            }
        }
    }

    Ok(g)
}

/// Parse a COCONUT table straight into a graph.
pub fn parse_coconut(text: &str, id_prefix: &str) -> Result<AnnotationGraph, FormatError> {
    let rows = parse_coconut_table(text)?;
    coconut_to_graph(&rows, id_prefix)
}
