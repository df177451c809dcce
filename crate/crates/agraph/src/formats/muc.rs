//! MUC-7 style coreference and named-entity markup.
//!
//! Coreferring noun phrases are wrapped in `<COREF ID=.. REF=.. MIN=..>`
//! tags; the ID→REF links form equivalence classes (only the identity
//! relation is marked). Each class is named by its smallest member. The
//! graph holds the word tokens as a `W/` chain plus one `coref/` arc per
//! entity over its token span, class field set to its class name; nesting
//! needs nothing special, the spans just share nodes.
//!
//! Named entities use paired empty tags (`<b_numex TYPE="MONEY"> ...
//! <e_numex>`), each balanced pair becoming one `NE/` arc labeled with the
//! TYPE value.

use std::collections::{BTreeMap, BTreeSet};

use super::sgml::{self, Event};
use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};

/// One `<COREF>` element: its attributes and the token range it wraps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorefEntity {
    pub id: u64,
    pub reference: Option<u64>,
    pub min: Option<String>,
    /// The TYPE attribute is accepted and preserved, not interpreted.
    pub type_attr: Option<String>,
    /// Half-open token range `[start, end)`.
    pub span: (usize, usize),
}

/// The parsed document: entities in document order, equivalence classes
/// sorted by their name (smallest member), and the annotation graph.
#[derive(Debug, Clone)]
pub struct CorefDocument {
    pub entities: Vec<CorefEntity>,
    pub classes: Vec<BTreeSet<u64>>,
    pub graph: AnnotationGraph,
}

impl CorefDocument {
    /// The class containing `id`, if any.
    pub fn class_of(&self, id: u64) -> Option<&BTreeSet<u64>> {
        self.classes.iter().find(|c| c.contains(&id))
    }
}

/// Disjoint sets over arbitrary u64 keys, path-halved.
struct UnionFind {
    parent: BTreeMap<u64, u64>,
}

impl UnionFind {
    fn new(keys: impl IntoIterator<Item = u64>) -> UnionFind {
        UnionFind {
            parent: keys.into_iter().map(|k| (k, k)).collect(),
        }
    }

    fn find(&mut self, mut x: u64) -> u64 {
        loop {
            let p = self.parent[&x];
            if p == x {
                return x;
            }
            let gp = self.parent[&p];
            self.parent.insert(x, gp);
            x = gp;
        }
    }

    fn union(&mut self, a: u64, b: u64) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // smaller representative wins, so roots are class names
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

fn parse_int_attr(tag: &sgml::Tag, name: &str) -> Result<Option<u64>, FormatError> {
    match tag.attr(name) {
        None => Ok(None),
        Some(text) => text.trim().parse().map(Some).map_err(|_| {
            FormatError::SchemaError {
                line: tag.line,
                detail: format!("{name} attribute {text:?} is not an integer"),
            }
        }),
    }
}

pub fn parse_muc_coref(text: &str, id_prefix: &str) -> Result<CorefDocument, FormatError> {
    let events = sgml::scan(text)?;
    let mut tokens: Vec<String> = Vec::new();
    let mut open: Vec<(sgml::Tag, usize)> = Vec::new();
    let mut entities: Vec<CorefEntity> = Vec::new();
    let mut seen_ids: BTreeSet<u64> = BTreeSet::new();

    for event in events {
        match event {
            Event::Text { text, .. } => {
                tokens.extend(text.split_whitespace().map(str::to_string));
            }
            Event::Tag(tag) if tag.name_is("coref") => {
                if tag.closing {
                    let (open_tag, start) =
                        open.pop().ok_or_else(|| FormatError::ParseError {
                            line: tag.line,
                            detail: "</COREF> without matching <COREF>".into(),
                        })?;
                    let id = parse_int_attr(&open_tag, "ID")?.ok_or_else(|| {
                        FormatError::SchemaError {
                            line: open_tag.line,
                            detail: "<COREF> has no ID".into(),
                        }
                    })?;
                    if !seen_ids.insert(id) {
                        return Err(FormatError::DuplicateId(id));
                    }
                    entities.push(CorefEntity {
                        id,
                        reference: parse_int_attr(&open_tag, "REF")?,
                        min: open_tag.attr("MIN").map(str::to_string),
                        type_attr: open_tag.attr("TYPE").map(str::to_string),
                        span: (start, tokens.len()),
                    });
                } else {
                    open.push((tag, tokens.len()));
                }
            }
            Event::Tag(tag) => {
                return Err(FormatError::SchemaError {
                    line: tag.line,
                    detail: format!("unexpected tag <{}> in coreference markup", tag.name),
                })
            }
        }
    }
    if let Some((tag, _)) = open.last() {
        return Err(FormatError::ParseError {
            line: tag.line,
            detail: "unclosed <COREF>".into(),
        });
    }

    // referential integrity, then the equivalence classes
    let ids: BTreeSet<u64> = entities.iter().map(|e| e.id).collect();
    for e in &entities {
        if let Some(target) = e.reference {
            if !ids.contains(&target) {
                return Err(FormatError::DanglingRef {
                    referrer: e.id,
                    target,
                });
            }
        }
    }
    let mut uf = UnionFind::new(ids.iter().copied());
    for e in &entities {
        if let Some(target) = e.reference {
            uf.union(e.id, target);
        }
    }
    let mut by_root: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for id in &ids {
        by_root.entry(uf.find(*id)).or_default().insert(*id);
    }
    let classes: Vec<BTreeSet<u64>> = by_root.into_values().collect();
    let class_name = |id: u64| -> u64 {
        classes
            .iter()
            .find(|c| c.contains(&id))
            .and_then(|c| c.first().copied())
            .expect("every entity is in a class")
    };

    let mut graph = word_chain(&tokens, id_prefix);
    let node = |i: usize| format!("{id_prefix}t{i}");
    for e in &entities {
        if e.span.0 == e.span.1 {
            continue; // an empty wrap spans no tokens, nothing to anchor
        }
        graph.add_arc(Arc::new(
            node(e.span.0).as_str(),
            Record::with_class(
                tags::COREF,
                e.id.to_string(),
                class_name(e.id).to_string(),
            ),
            node(e.span.1).as_str(),
        ));
    }

    Ok(CorefDocument {
        entities,
        classes,
        graph,
    })
}

fn word_chain(tokens: &[String], id_prefix: &str) -> AnnotationGraph {
    let mut g = AnnotationGraph::new();
    if tokens.is_empty() {
        return g;
    }
    let node = |i: usize| format!("{id_prefix}t{i}");
    for i in 0..=tokens.len() {
        g.add_node(node(i).as_str(), None).expect("fresh node");
    }
    for (i, tok) in tokens.iter().enumerate() {
        g.add_arc(Arc::new(
            node(i).as_str(),
            Record::new(tags::WORD, tok.clone()),
            node(i + 1).as_str(),
        ));
    }
    g
}

pub fn parse_muc_ne(text: &str, id_prefix: &str) -> Result<AnnotationGraph, FormatError> {
    let events = sgml::scan(text)?;
    let mut tokens: Vec<String> = Vec::new();
    let mut open: BTreeMap<String, Vec<(String, usize, usize)>> = BTreeMap::new(); // kind -> (type, start, line)
    let mut spans: Vec<(String, usize, usize)> = Vec::new(); // type, start, end

    for event in events {
        match event {
            Event::Text { text, .. } => {
                tokens.extend(text.split_whitespace().map(str::to_string));
            }
            Event::Tag(tag) => {
                let lower = tag.name.to_ascii_lowercase();
                if let Some(kind) = lower.strip_prefix("b_") {
                    let type_value =
                        tag.attr("TYPE")
                            .ok_or_else(|| FormatError::SchemaError {
                                line: tag.line,
                                detail: format!("<{}> has no TYPE", tag.name),
                            })?;
                    open.entry(kind.to_string()).or_default().push((
                        type_value.to_string(),
                        tokens.len(),
                        tag.line,
                    ));
                } else if let Some(kind) = lower.strip_prefix("e_") {
                    let (type_value, start, _) = open
                        .entry(kind.to_string())
                        .or_default()
                        .pop()
                        .ok_or_else(|| FormatError::UnbalancedTags {
                            kind: kind.to_string(),
                            detail: format!("line {}: <e_{kind}> with no open <b_{kind}>", tag.line),
                        })?;
                    spans.push((type_value, start, tokens.len()));
                } else {
                    return Err(FormatError::SchemaError {
                        line: tag.line,
                        detail: format!("unexpected tag <{}> in named-entity markup", tag.name),
                    });
                }
            }
        }
    }
    for (kind, stack) in &open {
        if let Some((_, _, line)) = stack.last() {
            return Err(FormatError::UnbalancedTags {
                kind: kind.clone(),
                detail: format!("line {line}: <b_{kind}> never closed"),
            });
        }
    }

    let mut g = word_chain(&tokens, id_prefix);
    let node = |i: usize| format!("{id_prefix}t{i}");
    for (type_value, start, end) in spans {
        if start == end {
            continue;
        }
        g.add_arc(Arc::new(
            node(start).as_str(),
            Record::new(tags::NE, type_value),
            node(end).as_str(),
        ));
    }
    Ok(g)
}
