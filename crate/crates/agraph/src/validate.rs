//! Validity checking.
//!
//! A graph is valid when its underlying digraph is acyclic, its time map is
//! order-preserving (times never decrease along a directed path; equal
//! times are fine, zero-width events need them), every arc endpoint names
//! an existing node, and no arc is a self-loop. Failures are reported, not
//! thrown, and the report enumerates every violation rather than stopping
//! at the first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::graph::{AnnotationGraph, Arc, NodeId};
use crate::time::TimePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    Cycle,
    TimeOrder,
    DanglingEndpoint,
    SelfLoop,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Cycle => "CYCLE",
            ViolationKind::TimeOrder => "TIME_ORDER",
            ViolationKind::DanglingEndpoint => "DANGLING_ENDPOINT",
            ViolationKind::SelfLoop => "SELF_LOOP",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A set of mutually reachable nodes.
    Cycle { nodes: Vec<NodeId> },
    /// `from` provably precedes `to` structurally, yet carries a later time.
    TimeOrder {
        from: NodeId,
        from_time: TimePoint,
        to: NodeId,
        to_time: TimePoint,
    },
    /// An arc endpoint that names no node.
    DanglingEndpoint { arc: Arc, endpoint: NodeId },
    SelfLoop { arc: Arc },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::Cycle { .. } => ViolationKind::Cycle,
            Violation::TimeOrder { .. } => ViolationKind::TimeOrder,
            Violation::DanglingEndpoint { .. } => ViolationKind::DanglingEndpoint,
            Violation::SelfLoop { .. } => ViolationKind::SelfLoop,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { nodes } => {
                let ids: Vec<&str> = nodes.iter().map(|n| n.as_str()).collect();
                write!(f, "CYCLE through nodes {}", ids.join(", "))
            }
            Violation::TimeOrder {
                from,
                from_time,
                to,
                to_time,
            } => write!(
                f,
                "TIME_ORDER: {from} at {from_time} precedes {to} at {to_time}"
            ),
            Violation::DanglingEndpoint { arc, endpoint } => {
                write!(f, "DANGLING_ENDPOINT: arc {arc} names unknown node {endpoint}")
            }
            Violation::SelfLoop { arc } => write!(f, "SELF_LOOP: arc {arc}"),
        }
    }
}

/// The verdict: `ok()` holds exactly when no violations were found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn kinds(&self) -> BTreeSet<ViolationKind> {
        self.violations.iter().map(Violation::kind).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl AnnotationGraph {
    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

pub fn validate(g: &AnnotationGraph) -> ValidationReport {
    let mut violations = Vec::new();

    for arc in g.arcs() {
        if arc.src == arc.dst {
            violations.push(Violation::SelfLoop { arc: arc.clone() });
        }
        for end in [&arc.src, &arc.dst] {
            if !g.contains_node(end) {
                violations.push(Violation::DanglingEndpoint {
                    arc: arc.clone(),
                    endpoint: end.clone(),
                });
            }
        }
    }

    // reachability over clean arcs (self-loops and dangling arcs excluded)
    let succ = g.successors();
    let mut reach: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
    for start in g.node_ids() {
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut stack: Vec<&NodeId> = succ[start].clone();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            stack.extend(succ[n].iter().copied());
        }
        reach.insert(start, seen);
    }

    // cycles: group mutually reachable nodes, one violation per group
    let mut on_cycle: BTreeSet<&NodeId> =
        g.node_ids().filter(|n| reach[*n].contains(*n)).collect();
    while let Some(&rep) = on_cycle.iter().next() {
        let group: Vec<NodeId> = on_cycle
            .iter()
            .filter(|n| reach[rep].contains(**n) && reach[**n].contains(rep))
            .map(|n| (*n).clone())
            .collect();
        for n in &group {
            on_cycle.remove(n);
        }
        violations.push(Violation::Cycle { nodes: group });
    }

    // order preservation: a node must not carry a later time than any node
    // it one-way reaches (mutually reachable pairs are already cycles)
    let anchored: Vec<(&NodeId, &TimePoint)> = g
        .node_ids()
        .filter_map(|n| g.node_time(n).map(|t| (n, t)))
        .collect();
    for (from, from_time) in &anchored {
        for (to, to_time) in &anchored {
            if from == to || from_time <= to_time {
                continue;
            }
            if reach[*from].contains(*to) && !reach[*to].contains(*from) {
                violations.push(Violation::TimeOrder {
                    from: (*from).clone(),
                    from_time: (*from_time).clone(),
                    to: (*to).clone(),
                    to_time: (*to_time).clone(),
                });
            }
        }
    }

    ValidationReport { violations }
}
