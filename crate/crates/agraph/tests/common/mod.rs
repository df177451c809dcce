//! Shared helpers for the integration suites: a deterministic RNG, random
//! valid-graph generation, consistent time completions, and brute-force
//! oracles kept deliberately independent of the library's own algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use agraph::graph::{AnnotationGraph, Arc, Node, NodeId, Record};
use agraph::time::TimePoint;
use agraph::rust_decimal::Decimal;

/// xorshift64*: tiny, seedable, good enough to spray test cases around.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, permille: u32) -> bool {
        self.next_u64() % 1000 < permille as u64
    }
}

#[derive(Debug, Clone)]
pub struct GraphSpec {
    /// Node count is drawn from `2..=max_nodes`.
    pub max_nodes: usize,
    /// Probability (per mille) that a node is anchored.
    pub anchored_permille: u32,
    /// Strictly increasing anchored times (no zero-width arcs possible).
    pub strict_times: bool,
    /// Drop nodes untouched by any arc (every AG-XML graph is like this).
    pub arc_induced: bool,
}

impl Default for GraphSpec {
    fn default() -> GraphSpec {
        GraphSpec {
            max_nodes: 12,
            anchored_permille: 500,
            strict_times: false,
            arc_induced: false,
        }
    }
}

const TYPE_POOL: [&str; 5] = ["W", "D", "speaker", "Syn", "Tone"];

/// A random valid annotation graph: arcs only ever run from a lower node
/// index to a higher one and anchored times are nondecreasing in index,
/// so both validity conditions hold by construction.
pub fn random_valid_graph(rng: &mut Rng, spec: &GraphSpec) -> AnnotationGraph {
    let n = 2 + rng.below(spec.max_nodes.max(3) - 1);

    // nondecreasing times in hundredths, rendered with scale jitter
    let mut cents: i64 = rng.below(500) as i64;
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        let step = if spec.strict_times {
            1 + rng.below(300) as i64
        } else {
            rng.below(300) as i64
        };
        cents += step;
        let base = Decimal::new(cents, 2).to_string();
        let text = match rng.below(3) {
            0 if base.contains('.') => format!("{base}0"),
            1 if base.contains('.') => format!("{base}00"),
            _ => base,
        };
        times.push(TimePoint::parse(&text).unwrap());
    }

    let node_id = |i: usize| NodeId::from(format!("n{i:03}").as_str());
    let nodes: Vec<Node> = (0..n)
        .map(|i| {
            if rng.chance(spec.anchored_permille) {
                Node::anchored(node_id(i), times[i].clone())
            } else {
                Node::unanchored(node_id(i))
            }
        })
        .collect();

    let arc_count = 1 + rng.below(2 * n);
    let mut arcs = Vec::with_capacity(arc_count);
    for k in 0..arc_count {
        let i = rng.below(n - 1);
        let j = i + 1 + rng.below(n - i - 1);
        let type_tag = TYPE_POOL[rng.below(TYPE_POOL.len())];
        let mut record = Record::new(type_tag, format!("l{k}"));
        if rng.chance(200) {
            record.class = Some(format!("c{}", rng.below(4)));
        }
        arcs.push(Arc::new(node_id(i), record, node_id(j)));
    }

    let g = if spec.arc_induced {
        let touched: BTreeSet<NodeId> = arcs
            .iter()
            .flat_map(|a| [a.src.clone(), a.dst.clone()])
            .collect();
        AnnotationGraph::build(
            nodes.into_iter().filter(|nd| touched.contains(&nd.id)),
            arcs,
        )
    } else {
        AnnotationGraph::build(nodes, arcs)
    }
    .expect("generator ids never collide");
    debug_assert!(g.validate().ok(), "generator produced an invalid graph");
    g
}

/// Anchor every node with times consistent with the existing anchors and
/// the arc structure: processed in topological order, each unanchored
/// node picks a value between the largest assigned predecessor time and
/// its least anchored descendant time.
pub fn random_completion(g: &AnnotationGraph, rng: &mut Rng) -> AnnotationGraph {
    let order = g.topological_order().expect("valid graphs are acyclic");
    let mut completed: Vec<Node> = Vec::with_capacity(order.len());
    let mut assigned: std::collections::BTreeMap<NodeId, TimePoint> =
        std::collections::BTreeMap::new();

    let preds: std::collections::BTreeMap<NodeId, Vec<NodeId>> = {
        let mut m: std::collections::BTreeMap<NodeId, Vec<NodeId>> = order
            .iter()
            .map(|id| (id.clone(), Vec::new()))
            .collect();
        for arc in g.arcs() {
            if arc.src != arc.dst {
                m.get_mut(&arc.dst).unwrap().push(arc.src.clone());
            }
        }
        m
    };

    let mut fallback = Decimal::ZERO;
    for id in &order {
        let time = match g.node_time(id) {
            Some(t) => t.clone(),
            None => {
                let lo: Option<Decimal> = preds[id]
                    .iter()
                    .map(|p| assigned[p].value())
                    .max();
                let hi: Option<Decimal> = g.node_upper_bound(id).map(|t| t.value());
                let value = match (lo, hi) {
                    (Some(lo), Some(hi)) => match rng.below(3) {
                        0 => lo,
                        1 => hi,
                        _ => (lo + hi) / Decimal::new(2, 0),
                    },
                    (Some(lo), None) => lo + Decimal::new(rng.below(300) as i64, 2),
                    (None, Some(hi)) => hi,
                    (None, None) => {
                        fallback += Decimal::ONE;
                        fallback
                    }
                };
                TimePoint::parse(&value.to_string()).unwrap()
            }
        };
        assigned.insert(id.clone(), time.clone());
        completed.push(Node::anchored(id.clone(), time));
    }

    let done = AnnotationGraph::build(completed, g.arcs().cloned())
        .expect("completion keeps ids");
    assert!(
        done.validate().ok(),
        "completion broke validity: {}",
        done.validate()
    );
    done
}

/// Exact anchored span of an arc in a fully anchored graph.
pub fn anchored_span(g: &AnnotationGraph, arc: &Arc) -> (TimePoint, TimePoint) {
    (
        g.node_time(&arc.src).expect("anchored").clone(),
        g.node_time(&arc.dst).expect("anchored").clone(),
    )
}

/// Interval-logic oracles over exact spans. `precedes` breaks the
/// boundary tie in favor of any positive-width arc; two coincident
/// points do not precede one another.
pub fn oracle_precedes(a: &(TimePoint, TimePoint), b: &(TimePoint, TimePoint)) -> bool {
    if a.1 < b.0 {
        return true;
    }
    a.1 == b.0 && (a.0 < a.1 || b.0 < b.1)
}

pub fn oracle_includes(a: &(TimePoint, TimePoint), b: &(TimePoint, TimePoint)) -> bool {
    a.0 <= b.0 && b.1 <= a.1
}

pub fn oracle_overlaps(a: &(TimePoint, TimePoint), b: &(TimePoint, TimePoint)) -> bool {
    let lo = if a.0 >= b.0 { &a.0 } else { &b.0 };
    let hi = if a.1 <= b.1 { &a.1 } else { &b.1 };
    lo < hi
}

/// Brute-force extent: grow ancestor/descendant sets by repeated passes
/// over the raw arc list (no shared code with the library's DFS).
pub fn brute_extent(g: &AnnotationGraph, arc: &Arc) -> (Option<TimePoint>, Option<TimePoint>) {
    let lo = match g.node_time(&arc.src) {
        Some(t) => Some(t.clone()),
        None => {
            let ancestors = grow(g, &arc.src, false);
            ancestors
                .iter()
                .filter_map(|n| g.node_time(n))
                .max()
                .cloned()
        }
    };
    let hi = match g.node_time(&arc.dst) {
        Some(t) => Some(t.clone()),
        None => {
            let descendants = grow(g, &arc.dst, true);
            descendants
                .iter()
                .filter_map(|n| g.node_time(n))
                .min()
                .cloned()
        }
    };
    (lo, hi)
}

fn grow(g: &AnnotationGraph, start: &NodeId, forward: bool) -> BTreeSet<NodeId> {
    let mut set: BTreeSet<NodeId> = BTreeSet::new();
    loop {
        let mut grew = false;
        for arc in g.arcs() {
            if arc.src == arc.dst {
                continue;
            }
            let (from, to) = if forward {
                (&arc.src, &arc.dst)
            } else {
                (&arc.dst, &arc.src)
            };
            if (from == start || set.contains(from)) && set.insert(to.clone()) {
                grew = true;
            }
        }
        if !grew {
            return set;
        }
    }
}

/// The worked minimal example: two word arcs and a discourse tag.
pub fn minimal_graph() -> AnnotationGraph {
    AnnotationGraph::build(
        [
            Node::anchored("1", TimePoint::parse("52.46").unwrap()),
            Node::unanchored("2"),
            Node::anchored("3", TimePoint::parse("53.14").unwrap()),
        ],
        [
            Arc::new("1", Record::new("W", "oh"), "2"),
            Arc::new("2", Record::new("W", "okay"), "3"),
            Arc::new("1", Record::new("D", "IOS:Commit"), "3"),
        ],
    )
    .unwrap()
}

/// Pick a random subset of a graph's arcs.
pub fn random_arc_subset(g: &AnnotationGraph, rng: &mut Rng) -> BTreeSet<Arc> {
    g.arcs().filter(|_| rng.chance(500)).cloned().collect()
}

#[derive(Debug, Clone, PartialEq)]
enum DotToken {
    Ident(String),
    Symbol(char),
    Edge, // ->
}

fn dot_tokens(src: &str) -> Option<Vec<DotToken>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            loop {
                match chars.next()? {
                    '"' => break,
                    '\\' => {
                        chars.next()?;
                    }
                    _ => {}
                }
            }
            out.push(DotToken::Ident("quoted".into()));
        } else if c == '-' {
            chars.next();
            if chars.next()? != '>' {
                return None;
            }
            out.push(DotToken::Edge);
        } else if "{}[];=".contains(c) {
            chars.next();
            out.push(DotToken::Symbol(c));
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(DotToken::Ident(word));
        } else {
            return None;
        }
    }
    Some(out)
}

/// A small DOT syntax validator: tokenizes and checks the statement
/// grammar the renderer is allowed to emit.
pub fn dot_syntax_ok(src: &str) -> bool {
    let Some(tokens) = dot_tokens(src) else {
        return false;
    };
    let mut pos = 0;
    let ident = |t: &DotToken| matches!(t, DotToken::Ident(_));

    // digraph [name] { ... }
    match tokens.get(pos) {
        Some(DotToken::Ident(w)) if w == "digraph" => pos += 1,
        _ => return false,
    }
    if tokens.get(pos).map(ident) == Some(true)
        && !matches!(tokens.get(pos), Some(DotToken::Symbol('{')))
    {
        pos += 1;
    }
    fn block(tokens: &[DotToken], mut pos: usize) -> Option<usize> {
        if !matches!(tokens.get(pos), Some(DotToken::Symbol('{'))) {
            return None;
        }
        pos += 1;
        loop {
            match tokens.get(pos)? {
                DotToken::Symbol('}') => return Some(pos + 1),
                DotToken::Ident(w) if w == "subgraph" => {
                    pos += 1;
                    if matches!(tokens.get(pos)?, DotToken::Ident(_)) {
                        pos += 1;
                    }
                    pos = block(tokens, pos)?;
                }
                DotToken::Ident(_) => {
                    pos += 1;
                    // a = b; | id [attrs]; | id -> id [attrs];
                    if matches!(tokens.get(pos)?, DotToken::Symbol('=')) {
                        pos += 1;
                        if !matches!(tokens.get(pos)?, DotToken::Ident(_)) {
                            return None;
                        }
                        pos += 1;
                    } else {
                        if matches!(tokens.get(pos)?, DotToken::Edge) {
                            pos += 1;
                            if !matches!(tokens.get(pos)?, DotToken::Ident(_)) {
                                return None;
                            }
                            pos += 1;
                        }
                        if matches!(tokens.get(pos)?, DotToken::Symbol('[')) {
                            pos += 1;
                            while !matches!(tokens.get(pos)?, DotToken::Symbol(']')) {
                                if !matches!(tokens.get(pos)?, DotToken::Ident(_)) {
                                    return None;
                                }
                                pos += 1;
                                if matches!(tokens.get(pos)?, DotToken::Symbol('=')) {
                                    pos += 1;
                                    if !matches!(tokens.get(pos)?, DotToken::Ident(_)) {
                                        return None;
                                    }
                                    pos += 1;
                                }
                            }
                            pos += 1;
                        }
                    }
                    if matches!(tokens.get(pos), Some(DotToken::Symbol(';'))) {
                        pos += 1;
                    }
                }
                _ => return None,
            }
        }
    }
    match block(&tokens, pos) {
        Some(end) => end == tokens.len(),
        None => false,
    }
}
