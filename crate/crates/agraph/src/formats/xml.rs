//! The AG-XML exchange encoding.
//!
//! One `<annotation>` element holding one `<arc>` per arc; each arc names
//! its endpoints and label:
//!
//! ```text
//! <annotation>
//!   <arc>
//!     <begin id="1" time="52.46"/>
//!     <label type="W" name="oh"/>
//!     <end id="2"/>
//!   </arc>
//! </annotation>
//! ```
//!
//! The writer always quotes attribute values and self-closes the empty
//! elements, so its output is well-formed XML. The lenient reader also
//! accepts the older style with unquoted values (`id=1`) and bare empty
//! elements (`<begin id=1 time=52.46>` with no `/>`).
//!
//! Only arcs are encoded: a node with no incident arc has no place in this
//! document, so isolated nodes do not survive a round trip. Time
//! attribution must be consistent per id across the whole document —
//! either every occurrence anchors the id to the same decimal value, or
//! none does. Anything else is a conflict, reported with both spellings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::sgml::{self, Event, Tag};
use super::FormatError;
use crate::graph::{AnnotationGraph, Arc, NodeId, Record};
use crate::time::TimePoint;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Serialize a graph. Arcs are emitted in a deterministic order:
/// topological position of the source node, then record, then topological
/// position of the destination (plain node-id order when the graph is not
/// acyclic, though serializing an invalid graph is the caller's problem).
pub fn to_xml(g: &AnnotationGraph) -> String {
    if g.arc_count() == 0 {
        return "<annotation/>\n".to_string();
    }

    let position: BTreeMap<NodeId, usize> = match g.topological_order() {
        Ok(order) => order.into_iter().enumerate().map(|(i, n)| (n, i)).collect(),
        Err(_) => g
            .node_ids()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect(),
    };

    let mut arcs: Vec<&Arc> = g.arcs().collect();
    arcs.sort_by_key(|a| {
        (
            position.get(&a.src).copied().unwrap_or(usize::MAX),
            &a.record,
            position.get(&a.dst).copied().unwrap_or(usize::MAX),
        )
    });

    let mut out = String::new();
    out.push_str("<annotation>\n");
    for arc in arcs {
        out.push_str("  <arc>\n");
        write_endpoint(&mut out, "begin", &arc.src, g);
        let mut label = format!(
            "    <label type=\"{}\" name=\"{}\"",
            escape(&arc.record.type_tag),
            escape(&arc.record.label)
        );
        if let Some(class) = &arc.record.class {
            let _ = write!(label, " class=\"{}\"", escape(class));
        }
        label.push_str("/>\n");
        out.push_str(&label);
        write_endpoint(&mut out, "end", &arc.dst, g);
        out.push_str("  </arc>\n");
    }
    out.push_str("</annotation>\n");
    out
}

fn write_endpoint(out: &mut String, element: &str, id: &NodeId, g: &AnnotationGraph) {
    let _ = write!(out, "    <{element} id=\"{}\"", escape(id.as_str()));
    if let Some(t) = g.node_time(id) {
        let _ = write!(out, " time=\"{}\"", escape(t.canonical_text()));
    }
    out.push_str("/>\n");
}

/// Parse a strict AG-XML document (quoted attributes, self-closing empty
/// elements) — everything [`to_xml`] emits.
pub fn from_xml(doc: &str) -> Result<AnnotationGraph, FormatError> {
    parse(doc, false)
}

/// Parse leniently, additionally accepting unquoted attribute values and
/// non-self-closed `begin`/`label`/`end` elements.
pub fn from_xml_lenient(doc: &str) -> Result<AnnotationGraph, FormatError> {
    parse(doc, true)
}

#[derive(Default)]
struct ArcParts {
    begin: Option<(NodeId, Option<TimePoint>)>,
    label: Option<Record>,
    end: Option<(NodeId, Option<TimePoint>)>,
    line: usize,
}

fn parse(doc: &str, lenient: bool) -> Result<AnnotationGraph, FormatError> {
    let events = sgml::scan(doc)?;
    let mut g = AnnotationGraph::new();
    // time attribution per id: fixed by the first occurrence
    let mut anchors: BTreeMap<NodeId, Option<TimePoint>> = BTreeMap::new();

    let mut saw_root = false;
    let mut in_root = false;
    let mut current: Option<ArcParts> = None;

    for event in events {
        let tag = match event {
            Event::Text { text, line } => {
                return Err(FormatError::SchemaError {
                    line,
                    detail: format!("unexpected text content {:?}", text.trim()),
                })
            }
            Event::Tag(tag) => tag,
        };
        if !lenient && !tag.quoted_only {
            return Err(FormatError::ParseError {
                line: tag.line,
                detail: format!("unquoted attribute value in <{}> (strict mode)", tag.name),
            });
        }
        match tag.name.as_str() {
            "annotation" if !tag.closing => {
                if saw_root {
                    return Err(FormatError::SchemaError {
                        line: tag.line,
                        detail: "multiple <annotation> roots".into(),
                    });
                }
                saw_root = true;
                in_root = !tag.self_closing;
            }
            "annotation" => {
                in_root = false;
            }
            "arc" if !tag.closing => {
                if !in_root {
                    return Err(FormatError::SchemaError {
                        line: tag.line,
                        detail: "<arc> outside <annotation>".into(),
                    });
                }
                if current.is_some() {
                    return Err(FormatError::SchemaError {
                        line: tag.line,
                        detail: "nested <arc>".into(),
                    });
                }
                current = Some(ArcParts {
                    line: tag.line,
                    ..ArcParts::default()
                });
            }
            "arc" => {
                let parts = current.take().ok_or(FormatError::SchemaError {
                    line: tag.line,
                    detail: "</arc> without <arc>".into(),
                })?;
                finish_arc(parts, &mut g, &mut anchors)?;
            }
            "begin" | "end" | "label" => {
                if tag.closing {
                    continue; // harmless </begin> style closers
                }
                if !lenient && !tag.self_closing {
                    return Err(FormatError::ParseError {
                        line: tag.line,
                        detail: format!("<{}> must be self-closing (strict mode)", tag.name),
                    });
                }
                let parts = current.as_mut().ok_or(FormatError::SchemaError {
                    line: tag.line,
                    detail: format!("<{}> outside <arc>", tag.name),
                })?;
                fill_part(parts, &tag)?;
            }
            other => {
                return Err(FormatError::SchemaError {
                    line: tag.line,
                    detail: format!("unknown element <{other}>"),
                })
            }
        }
    }

    if !saw_root {
        return Err(FormatError::SchemaError {
            line: 1,
            detail: "no <annotation> root".into(),
        });
    }
    if current.is_some() {
        return Err(FormatError::SchemaError {
            line: 1,
            detail: "unterminated <arc>".into(),
        });
    }
    Ok(g)
}

fn fill_part(parts: &mut ArcParts, tag: &Tag) -> Result<(), FormatError> {
    let dup = |line| FormatError::SchemaError {
        line,
        detail: format!("duplicate <{}> in one arc", tag.name),
    };
    if tag.name_is("label") {
        if parts.label.is_some() {
            return Err(dup(tag.line));
        }
        let type_tag = tag.attr("type").unwrap_or("");
        if type_tag.is_empty() {
            return Err(FormatError::SchemaError {
                line: tag.line,
                detail: "label has no type".into(),
            });
        }
        let mut record = Record::new(type_tag, tag.attr("name").unwrap_or(""));
        record.class = tag.attr("class").map(str::to_string);
        parts.label = Some(record);
        return Ok(());
    }

    let id = tag.attr("id").ok_or(FormatError::SchemaError {
        line: tag.line,
        detail: format!("<{}> has no id", tag.name),
    })?;
    let time = match tag.attr("time") {
        Some(text) => Some(TimePoint::parse(text).map_err(|_| FormatError::ParseError {
            line: tag.line,
            detail: format!("bad time attribute {text:?}"),
        })?),
        None => None,
    };
    let slot = if tag.name_is("begin") {
        &mut parts.begin
    } else {
        &mut parts.end
    };
    if slot.is_some() {
        return Err(dup(tag.line));
    }
    *slot = Some((NodeId::from(id), time));
    Ok(())
}

fn finish_arc(
    parts: ArcParts,
    g: &mut AnnotationGraph,
    anchors: &mut BTreeMap<NodeId, Option<TimePoint>>,
) -> Result<(), FormatError> {
    let missing = |what: &str| FormatError::SchemaError {
        line: parts.line,
        detail: format!("arc has no <{what}>"),
    };
    let (begin_id, begin_time) = parts.begin.ok_or_else(|| missing("begin"))?;
    let record = parts.label.ok_or_else(|| missing("label"))?;
    let (end_id, end_time) = parts.end.ok_or_else(|| missing("end"))?;

    for (id, time) in [(begin_id.clone(), begin_time), (end_id.clone(), end_time)] {
        match anchors.get(&id) {
            None => {
                anchors.insert(id.clone(), time.clone());
                g.add_node(id, time).expect("first occurrence cannot conflict");
            }
            Some(known) if *known != time => {
                let show = |t: &Option<TimePoint>| match t {
                    Some(t) => t.to_string(),
                    None => "(none)".to_string(),
                };
                return Err(FormatError::AnchorConflict {
                    id: id.to_string(),
                    first: show(known),
                    second: show(&time),
                });
            }
            Some(_) => {}
        }
    }
    g.add_arc(Arc {
        src: begin_id,
        record,
        dst: end_id,
    });
    Ok(())
}
