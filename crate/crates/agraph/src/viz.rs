//! Deterministic DOT rendering.
//!
//! Arcs are grouped into one subgraph per type — the same layered look
//! the visualizations use, types on the left, time running rightward —
//! and nodes show their time text when asked. Identical input yields
//! byte-identical output, so diagrams can live in golden tests. Compile
//! the output with any Graphviz tool.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::AnnotationGraph;

#[derive(Debug, Clone)]
pub struct VizOptions {
    /// Types rendered as layers, top to bottom; types not listed are
    /// appended in lexicographic order. Duplicates are ignored.
    pub layer_order: Vec<String>,
    /// Print each anchored node's time under its id.
    pub show_times: bool,
    /// Show the class field, in the `type/label/class` notation (with a
    /// trailing slash when a layer mixes classed and classless arcs).
    pub show_classes: bool,
}

impl Default for VizOptions {
    fn default() -> VizOptions {
        VizOptions {
            layer_order: Vec::new(),
            show_times: true,
            show_classes: false,
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Render the graph as a DOT document.
pub fn render(g: &AnnotationGraph, options: &VizOptions) -> String {
    let mut out = String::new();
    out.push_str("digraph annotation {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle fontsize=10];\n");

    for node in g.nodes() {
        let label = match (&node.time, options.show_times) {
            (Some(t), true) => format!("{}\n{}", node.id, t.canonical_text()),
            _ => node.id.to_string(),
        };
        let _ = writeln!(out, "  {} [label={}];", quote(node.id.as_str()), quote(&label));
    }

    let mut layers: Vec<String> = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for t in &options.layer_order {
        if seen.insert(t.as_str()) {
            layers.push(t.clone());
        }
    }
    for t in g.type_tags() {
        if seen.insert(t) {
            layers.push(t.to_string());
        }
    }

    for layer in layers {
        let arcs: Vec<_> = g
            .arcs()
            .filter(|a| a.record.type_tag == layer)
            .collect();
        if arcs.is_empty() {
            continue;
        }
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("layer_{layer}")));
        for arc in arcs {
            let text = if options.show_classes {
                match &arc.record.class {
                    Some(c) => format!("{}/{}/{}", arc.record.type_tag, arc.record.label, c),
                    None => format!("{}/{}/", arc.record.type_tag, arc.record.label),
                }
            } else {
                format!("{}/{}", arc.record.type_tag, arc.record.label)
            };
            let _ = writeln!(
                out,
                "    {} -> {} [label={}];",
                quote(arc.src.as_str()),
                quote(arc.dst.as_str()),
                quote(&text)
            );
        }
        out.push_str("  }\n");
    }

    out.push_str("}\n");
    out
}
