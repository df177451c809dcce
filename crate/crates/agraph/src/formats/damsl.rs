//! DAMSL dialogue-act markup.
//!
//! A dialog file is a flat sequence of `<Turn ...>` and `<Utt ...>` tags
//! with the utterance text on the lines between; attribute values may be
//! quoted or bare. Times come from `Speech="-s BEGIN -e END"` attributes.
//!
//! Tags are fielded records already, but packing all the attributes into
//! one label would make every search predicate parse label internals, so
//! records are maximally split: each attribute=value pair on an utterance
//! becomes its own `D/Attr:Value` arc over the utterance's span,
//! coindexed with the utterance via its Id in the class field.
//! `Influence-on-speaker` alone is abbreviated `IOS`; other attribute
//! names are kept whole. `Response-to="uttK"` carries no label payload —
//! it becomes a `D/Response-to` arc whose class is `uttK`, linking it to
//! utterance K the same way a COCONUT `Accept(d)` tag links to piece (d).
//!
//! Within one turn, boundaries with equal decimal times share a node
//! (the turn hierarchy is chart-constructed); distinct turns never share
//! nodes, whatever their times, matching how overlapping contributions
//! stay structurally disconnected.

use std::collections::BTreeMap;

use super::sgml::{self, Event, Tag};
use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};
use crate::time::TimePoint;

#[derive(Debug, Clone, Default)]
pub struct DamslOptions {
    /// Also emit `W/` arcs for the utterance text tokens. Off by default:
    /// when a time-aligned word strand is merged in separately, duplicate
    /// word arcs are worse than none.
    pub with_words: bool,
    /// Drop attributes whose value is `None` instead of keeping them as
    /// annotations of absence.
    pub drop_none: bool,
    pub id_prefix: String,
}

#[derive(Debug)]
struct UttData {
    id: String,
    begin: TimePoint,
    end: TimePoint,
    attrs: Vec<(String, String)>,
    response_to: Option<String>,
    text: String,
}

#[derive(Debug)]
struct TurnData {
    speaker: String,
    begin: TimePoint,
    end: TimePoint,
    utts: Vec<UttData>,
}

fn parse_speech_attr(tag: &Tag, label: &str) -> Result<(TimePoint, TimePoint), FormatError> {
    let value = tag.attr("Speech").ok_or_else(|| FormatError::MalformedSpeechAttr {
        tag: label.to_string(),
        value: "(missing)".into(),
    })?;
    let malformed = || FormatError::MalformedSpeechAttr {
        tag: label.to_string(),
        value: value.to_string(),
    };
    let mut begin = None;
    let mut end = None;
    let mut tokens = value.split_whitespace();
    while let Some(flag) = tokens.next() {
        let slot = match flag {
            "-s" => &mut begin,
            "-e" => &mut end,
            _ => return Err(malformed()),
        };
        let time_text = tokens.next().ok_or_else(malformed)?;
        *slot = Some(TimePoint::parse(time_text).map_err(|_| malformed())?);
    }
    let (begin, end) = match (begin, end) {
        (Some(b), Some(e)) => (b, e),
        _ => return Err(malformed()),
    };
    if end < begin {
        return Err(malformed());
    }
    Ok((begin, end))
}

pub fn parse_damsl(text: &str, options: &DamslOptions) -> Result<AnnotationGraph, FormatError> {
    let events = sgml::scan(text)?;
    let mut turns: Vec<TurnData> = Vec::new();

    for event in events {
        match event {
            Event::Tag(tag) if tag.name_is("Dialog") => {} // file metadata
            Event::Tag(tag) if tag.name_is("Turn") && !tag.closing => {
                let speaker = tag
                    .attr("Speaker")
                    .ok_or_else(|| FormatError::SchemaError {
                        line: tag.line,
                        detail: "<Turn> has no Speaker".into(),
                    })?
                    .to_string();
                let label = format!("Turn {}", tag.attr("Id").unwrap_or("?"));
                let (begin, end) = parse_speech_attr(&tag, &label)?;
                turns.push(TurnData {
                    speaker,
                    begin,
                    end,
                    utts: Vec::new(),
                });
            }
            Event::Tag(tag) if tag.name_is("Utt") && !tag.closing => {
                let id = tag
                    .attr("Id")
                    .ok_or_else(|| FormatError::SchemaError {
                        line: tag.line,
                        detail: "<Utt> has no Id".into(),
                    })?
                    .to_string();
                let (begin, end) = parse_speech_attr(&tag, &format!("Utt {id}"))?;
                let mut attrs = Vec::new();
                let mut response_to = None;
                for (name, value) in &tag.attrs {
                    let value = match value {
                        Some(v) => v.clone(),
                        None => continue,
                    };
                    if name.eq_ignore_ascii_case("Id") || name.eq_ignore_ascii_case("Speech") {
                        continue;
                    }
                    if name.eq_ignore_ascii_case("Response-to") {
                        if !value.is_empty() {
                            response_to = Some(value);
                        }
                        continue;
                    }
                    attrs.push((name.clone(), value));
                }
                let turn = turns.last_mut().ok_or_else(|| FormatError::SchemaError {
                    line: tag.line,
                    detail: format!("<Utt {id}> outside any <Turn>"),
                })?;
                turn.utts.push(UttData {
                    id,
                    begin,
                    end,
                    attrs,
                    response_to,
                    text: String::new(),
                });
            }
            Event::Tag(tag) if tag.closing => {} // only </Dialog> occurs
            Event::Tag(tag) => {
                return Err(FormatError::SchemaError {
                    line: tag.line,
                    detail: format!("unexpected tag <{}> in DAMSL markup", tag.name),
                })
            }
            Event::Text { text, .. } => {
                // utterance text; anything before the first Utt is prose
                if let Some(utt) = turns.last_mut().and_then(|t| t.utts.last_mut()) {
                    if !utt.text.is_empty() {
                        utt.text.push(' ');
                    }
                    utt.text.push_str(text.trim());
                }
            }
        }
    }

    let known_utts: Vec<String> = turns
        .iter()
        .flat_map(|t| t.utts.iter().map(|u| u.id.clone()))
        .collect();
    for turn in &turns {
        for utt in &turn.utts {
            if let Some(target) = &utt.response_to {
                if !known_utts.contains(target) {
                    return Err(FormatError::UnknownResponseTarget {
                        tag: format!("Utt {}", utt.id),
                        target: target.clone(),
                    });
                }
            }
        }
    }

    let mut g = AnnotationGraph::new();
    for (ti, turn) in turns.iter().enumerate() {
        let prefix = &options.id_prefix;

        // one node per distinct decimal time inside this turn
        let mut times: Vec<TimePoint> = vec![turn.begin.clone(), turn.end.clone()];
        for utt in &turn.utts {
            times.push(utt.begin.clone());
            times.push(utt.end.clone());
        }
        times.sort();
        times.dedup();
        let node_at: BTreeMap<TimePoint, String> = times
            .iter()
            .enumerate()
            .map(|(j, t)| (t.clone(), format!("{prefix}d{ti}.{j}")))
            .collect();
        for (t, id) in &node_at {
            g.add_node(id.as_str(), Some(t.clone()))?;
        }
        let mut zero_width = 0usize;
        let mut span = |g: &mut AnnotationGraph,
                        begin: &TimePoint,
                        end: &TimePoint|
         -> Result<(String, String), FormatError> {
            let src = node_at[begin].clone();
            if begin == end {
                // zero-width: a fresh destination at the same instant
                let dst = format!("{prefix}d{ti}.z{zero_width}");
                zero_width += 1;
                g.add_node(dst.as_str(), Some(end.clone()))?;
                Ok((src, dst))
            } else {
                Ok((src, node_at[end].clone()))
            }
        };

        let (turn_src, turn_dst) = span(&mut g, &turn.begin, &turn.end)?;
        g.add_arc(Arc::new(
            turn_src.as_str(),
            Record::new(tags::TURN, turn.speaker.clone()),
            turn_dst.as_str(),
        ));

        for utt in &turn.utts {
            let (src, dst) = span(&mut g, &utt.begin, &utt.end)?;
            g.add_arc(Arc::new(
                src.as_str(),
                Record::with_class(tags::UTT, utt.text.clone(), utt.id.clone()),
                dst.as_str(),
            ));
            for (name, value) in &utt.attrs {
                if options.drop_none && value == "None" {
                    continue;
                }
                let shown = if name.eq_ignore_ascii_case("Influence-on-speaker") {
                    "IOS"
                } else {
                    name.as_str()
                };
                g.add_arc(Arc::new(
                    src.as_str(),
                    Record::with_class(
                        tags::DISCOURSE,
                        format!("{shown}:{value}"),
                        utt.id.clone(),
                    ),
                    dst.as_str(),
                ));
            }
            if let Some(target) = &utt.response_to {
                g.add_arc(Arc::new(
                    src.as_str(),
                    Record::with_class(tags::DISCOURSE, "Response-to", target.clone()),
                    dst.as_str(),
                ));
            }
            if options.with_words {
                let words: Vec<&str> = utt
                    .text
                    .split_whitespace()
                    .filter(|w| *w != "+" && *w != "[sil]")
                    .collect();
                let mut cur = src.clone();
                for (wi, word) in words.iter().enumerate() {
                    let next = if wi + 1 == words.len() {
                        dst.clone()
                    } else {
                        let id = format!("{prefix}d{ti}.{}w{wi}", utt.id);
                        g.add_node(id.as_str(), None)?;
                        id
                    };
                    g.add_arc(Arc::new(
                        cur.as_str(),
                        Record::new(tags::WORD, (*word).to_string()),
                        next.as_str(),
                    ));
                    cur = next;
                }
            }
        }
    }
    Ok(g)
}
