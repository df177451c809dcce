//! Synthetic graph builders for the benchmarks.

use agraph::graph::{AnnotationGraph, Arc, Record};
use agraph::time::TimePoint;

/// A layered annotation over one chain: `words` anchored word arcs, one
/// turn arc per eight words, one discourse tag per turn. Roughly the
/// shape a real transcript strand takes after import.
pub fn transcript_graph(words: usize) -> AnnotationGraph {
    let mut g = AnnotationGraph::new();
    let time = |i: usize| TimePoint::parse(&format!("{}.{:02}", i / 4, (i % 4) * 25)).unwrap();
    for i in 0..=words {
        g.add_node(format!("n{i}").as_str(), Some(time(i))).unwrap();
    }
    for i in 0..words {
        g.add_arc(Arc::new(
            format!("n{i}").as_str(),
            Record::new("W", format!("w{i}")),
            format!("n{}", i + 1).as_str(),
        ));
    }
    let mut start = 0;
    while start < words {
        let end = (start + 8).min(words);
        g.add_arc(Arc::new(
            format!("n{start}").as_str(),
            Record::new("speaker", if (start / 8) % 2 == 0 { "A" } else { "B" }),
            format!("n{end}").as_str(),
        ));
        g.add_arc(Arc::new(
            format!("n{start}").as_str(),
            Record::with_class("D", "Statement:Assert", format!("utt{}", start / 8)),
            format!("n{end}").as_str(),
        ));
        start = end;
    }
    g
}

/// Same chain with every fourth node unanchored, for extent computation.
pub fn sparse_transcript_graph(words: usize) -> AnnotationGraph {
    let full = transcript_graph(words);
    let nodes = full.nodes().enumerate().map(|(i, mut n)| {
        if i % 4 == 2 {
            n.time = None;
        }
        n
    });
    AnnotationGraph::build(nodes, full.arcs().cloned()).unwrap()
}
