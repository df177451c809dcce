//! The annotation-graph data model.
//!
//! An annotation graph is a set of nodes, some of which carry exact decimal
//! times, plus a set of arcs labeled with fielded records. Hierarchy is
//! expressed by arcs sharing endpoint nodes (the chart construction);
//! coincident times on distinct nodes deliberately do not imply shared
//! structure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::time::TimePoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("duplicate node id {id} with conflicting times ({first} vs {second})")]
    DuplicateNodeId {
        id: NodeId,
        first: String,
        second: String,
    },
    #[error("anchor conflict on shared node {id}: {left} vs {right}")]
    AnchorConflict {
        id: NodeId,
        left: String,
        right: String,
    },
    #[error("graph is cyclic (nodes {0:?} lie on cycles)")]
    Cycle(Vec<NodeId>),
}

/// Node identifier, unique within one graph. Ordering is plain byte order,
/// which is all the determinism contracts need.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> NodeId {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> NodeId {
        NodeId(s.to_string())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> NodeId {
        NodeId(s)
    }
}

/// A node with its optional time anchor. Unanchored nodes are legal and
/// common: interior word boundaries in a speaker turn, for instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub time: Option<TimePoint>,
}

impl Node {
    pub fn unanchored(id: impl Into<NodeId>) -> Node {
        Node {
            id: id.into(),
            time: None,
        }
    }

    pub fn anchored(id: impl Into<NodeId>, time: TimePoint) -> Node {
        Node {
            id: id.into(),
            time: Some(time),
        }
    }
}

/// The fielded arc label: a type (annotation level), a contentful label,
/// and an optional equivalence class used for coindexing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub type_tag: String,
    pub label: String,
    pub class: Option<String>,
}

impl Record {
    pub fn new(type_tag: impl Into<String>, label: impl Into<String>) -> Record {
        let type_tag = type_tag.into();
        debug_assert!(!type_tag.is_empty(), "record type must be nonempty");
        Record {
            type_tag,
            label: label.into(),
            class: None,
        }
    }

    pub fn with_class(
        type_tag: impl Into<String>,
        label: impl Into<String>,
        class: impl Into<String>,
    ) -> Record {
        Record {
            class: Some(class.into()),
            ..Record::new(type_tag, label)
        }
    }

    /// `type/label` or `type/label/class`, the notation used by the query
    /// output and accepted back as an arc spec.
    pub fn notation(&self) -> String {
        match &self.class {
            Some(c) => format!("{}/{}/{}", self.type_tag, self.label, c),
            None => format!("{}/{}", self.type_tag, self.label),
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

/// A directed arc `src --record--> dst`. Arcs have no identity beyond the
/// triple itself; identical triples collapse to one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub src: NodeId,
    pub record: Record,
    pub dst: NodeId,
}

impl Arc {
    pub fn new(src: impl Into<NodeId>, record: Record, dst: impl Into<NodeId>) -> Arc {
        Arc {
            src: src.into(),
            record,
            dst: dst.into(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.src, self.record, self.dst)
    }
}

/// A time interval with possibly missing endpoints. Produced by
/// [`AnnotationGraph::arc_extent`], where a missing bound means no anchored
/// ancestor/descendant constrains that side.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimeInterval {
    pub lo: Option<TimePoint>,
    pub hi: Option<TimePoint>,
}

impl TimeInterval {
    pub fn new(lo: Option<TimePoint>, hi: Option<TimePoint>) -> Option<TimeInterval> {
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return None;
            }
        }
        Some(TimeInterval { lo, hi })
    }

    pub fn bounded(lo: TimePoint, hi: TimePoint) -> Option<TimeInterval> {
        TimeInterval::new(Some(lo), Some(hi))
    }

    pub fn unbounded() -> TimeInterval {
        TimeInterval::default()
    }

    pub fn is_fully_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |t: &Option<TimePoint>| match t {
            Some(t) => t.to_string(),
            None => "-".to_string(),
        };
        write!(f, "[{},{}]", side(&self.lo), side(&self.hi))
    }
}

/// A labeled acyclic digraph with fielded records on the arcs and optional
/// exact decimal times on the nodes.
///
/// Construction accepts anything; [`crate::validate::validate`] checks the
/// two validity conditions (acyclicity, order-preserving times) plus
/// referential integrity. Node and arc storage is ordered, so equality and
/// iteration ignore insertion order. A built graph is immutable from the
/// outside and safe to share across readers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotationGraph {
    nodes: BTreeMap<NodeId, Option<TimePoint>>,
    arcs: BTreeSet<Arc>,
}

impl AnnotationGraph {
    pub fn new() -> AnnotationGraph {
        AnnotationGraph::default()
    }

    /// Build a graph from explicit node and arc lists. Duplicate arcs
    /// collapse; duplicate node ids are fine if their times agree and an
    /// error otherwise.
    pub fn build(
        nodes: impl IntoIterator<Item = Node>,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Result<AnnotationGraph, CoreError> {
        let mut g = AnnotationGraph::new();
        for n in nodes {
            g.add_node(n.id, n.time)?;
        }
        for a in arcs {
            g.add_arc(a);
        }
        Ok(g)
    }

    /// Insert a node. Re-adding an id is allowed when the time agrees
    /// (an anchored entry wins over an unanchored one).
    pub fn add_node(
        &mut self,
        id: impl Into<NodeId>,
        time: Option<TimePoint>,
    ) -> Result<(), CoreError> {
        let id = id.into();
        match self.nodes.get_mut(&id) {
            None => {
                self.nodes.insert(id, time);
            }
            Some(existing) => match (existing.as_ref(), time) {
                (_, None) => {}
                (None, Some(t)) => *existing = Some(t),
                (Some(old), Some(new)) => {
                    if *old != new {
                        return Err(CoreError::DuplicateNodeId {
                            id,
                            first: old.to_string(),
                            second: new.to_string(),
                        });
                    }
                }
            },
        }
        Ok(())
    }

    /// Insert an arc. Endpoints are not required to exist yet; validation
    /// reports dangling endpoints.
    pub fn add_arc(&mut self, arc: Arc) {
        self.arcs.insert(arc);
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.arcs.is_empty()
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node_time(&self, id: &NodeId) -> Option<&TimePoint> {
        self.nodes.get(id).and_then(|t| t.as_ref())
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.nodes.iter().map(|(id, time)| Node {
            id: id.clone(),
            time: time.clone(),
        })
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter()
    }

    pub fn contains_arc(&self, arc: &Arc) -> bool {
        self.arcs.contains(arc)
    }

    /// Distinct record types present, in order.
    pub fn type_tags(&self) -> BTreeSet<&str> {
        self.arcs.iter().map(|a| a.record.type_tag.as_str()).collect()
    }

    /// Distinct class names present, in order.
    pub fn class_names(&self) -> BTreeSet<&str> {
        self.arcs
            .iter()
            .filter_map(|a| a.record.class.as_deref())
            .collect()
    }

    /// Set union of nodes and arcs. Shared node ids must denote the same
    /// node: equal times, or an anchor on at most one side (the anchor
    /// wins). Union is commutative, associative and idempotent up to graph
    /// equality; when both sides anchor a shared node with different
    /// spellings of the same value, the lexicographically smaller spelling
    /// is kept so output stays deterministic either way around.
    pub fn union(&self, other: &AnnotationGraph) -> Result<AnnotationGraph, CoreError> {
        let mut g = self.clone();
        for (id, time) in &other.nodes {
            match (g.nodes.get(id), time) {
                (None, t) => {
                    g.nodes.insert(id.clone(), t.clone());
                }
                (Some(None), t @ Some(_)) => {
                    g.nodes.insert(id.clone(), t.clone());
                }
                (Some(Some(mine)), Some(theirs)) => {
                    if mine != theirs {
                        return Err(CoreError::AnchorConflict {
                            id: id.clone(),
                            left: mine.to_string(),
                            right: theirs.to_string(),
                        });
                    }
                    if theirs.canonical_text() < mine.canonical_text() {
                        g.nodes.insert(id.clone(), Some(theirs.clone()));
                    }
                }
                (Some(_), None) => {}
            }
        }
        g.arcs.extend(other.arcs.iter().cloned());
        Ok(g)
    }

    /// The subgraph induced by the arcs satisfying `keep`: kept arcs plus
    /// exactly their endpoint nodes. Any arc subset of a valid graph is
    /// again a valid graph.
    pub fn subgraph(&self, mut keep: impl FnMut(&Arc) -> bool) -> AnnotationGraph {
        let mut g = AnnotationGraph::new();
        for arc in self.arcs.iter().filter(|a| keep(a)) {
            for end in [&arc.src, &arc.dst] {
                if let Some(time) = self.nodes.get(end) {
                    g.nodes.insert(end.clone(), time.clone());
                }
            }
            g.arcs.insert(arc.clone());
        }
        g
    }

    /// Rebuild the graph with node ids substituted per `map`. Ids not in
    /// the map are kept. Two old ids may collapse onto one new id only if
    /// their times agree.
    pub fn rename_nodes(
        &self,
        map: &BTreeMap<NodeId, NodeId>,
    ) -> Result<AnnotationGraph, CoreError> {
        let rename = |id: &NodeId| map.get(id).unwrap_or(id).clone();
        let mut g = AnnotationGraph::new();
        for (id, time) in &self.nodes {
            g.add_node(rename(id), time.clone())?;
        }
        for arc in &self.arcs {
            g.arcs.insert(Arc {
                src: rename(&arc.src),
                record: arc.record.clone(),
                dst: rename(&arc.dst),
            });
        }
        Ok(g)
    }

    pub(crate) fn successors(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut succ: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.nodes.keys().map(|n| (n, Vec::new())).collect();
        for arc in &self.arcs {
            if arc.src == arc.dst {
                continue; // self-loops are validation errors, not edges
            }
            if self.nodes.contains_key(&arc.src) && self.nodes.contains_key(&arc.dst) {
                succ.get_mut(&arc.src).unwrap().push(&arc.dst);
            }
        }
        succ
    }

    pub(crate) fn predecessors(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut pred: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.nodes.keys().map(|n| (n, Vec::new())).collect();
        for arc in &self.arcs {
            if arc.src == arc.dst {
                continue;
            }
            if self.nodes.contains_key(&arc.src) && self.nodes.contains_key(&arc.dst) {
                pred.get_mut(&arc.dst).unwrap().push(&arc.src);
            }
        }
        pred
    }

    /// Reflexive reachability along arc direction. Arcs with unknown
    /// endpoints and self-loops carry no reachability.
    pub fn reaches(&self, from: &NodeId, to: &NodeId) -> bool {
        if from == to {
            return self.nodes.contains_key(from);
        }
        if !self.nodes.contains_key(from) || !self.nodes.contains_key(to) {
            return false;
        }
        let succ = self.successors();
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            if n == to {
                return true;
            }
            if !seen.insert(n) {
                continue;
            }
            if let Some(next) = succ.get(n) {
                stack.extend(next.iter().copied());
            }
        }
        false
    }

    /// Deterministic topological order: Kahn's algorithm with ties broken
    /// by node id order.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, CoreError> {
        let succ = self.successors();
        let mut indegree: BTreeMap<&NodeId, usize> =
            self.nodes.keys().map(|n| (n, 0)).collect();
        for outs in succ.values() {
            for d in outs {
                *indegree.get_mut(*d).unwrap() += 1;
            }
        }
        let mut ready: BTreeSet<&NodeId> = indegree
            .iter()
            .filter(|(_, deg)| **deg == 0)
            .map(|(n, _)| *n)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(&n) = ready.iter().next() {
            ready.remove(n);
            order.push(n.clone());
            for d in &succ[n] {
                let deg = indegree.get_mut(*d).unwrap();
                *deg -= 1;
                if *deg == 0 {
                    ready.insert(*d);
                }
            }
        }
        if order.len() != self.nodes.len() {
            let leftover = indegree
                .into_iter()
                .filter(|(_, deg)| *deg > 0)
                .map(|(n, _)| n.clone())
                .collect();
            return Err(CoreError::Cycle(leftover));
        }
        // self-loops mean cycles even though they were skipped as edges
        if let Some(arc) = self.arcs.iter().find(|a| a.src == a.dst) {
            return Err(CoreError::Cycle(vec![arc.src.clone()]));
        }
        Ok(order)
    }

    /// Greatest anchored time at or upstream of `id`: the node's own time,
    /// else the max over anchored proper ancestors.
    pub fn node_lower_bound(&self, id: &NodeId) -> Option<TimePoint> {
        if let Some(t) = self.node_time(id) {
            return Some(t.clone());
        }
        self.extreme_anchor(id, &self.predecessors(), |best, t| t > best)
    }

    /// Least anchored time at or downstream of `id`.
    pub fn node_upper_bound(&self, id: &NodeId) -> Option<TimePoint> {
        if let Some(t) = self.node_time(id) {
            return Some(t.clone());
        }
        self.extreme_anchor(id, &self.successors(), |best, t| t < best)
    }

    fn extreme_anchor(
        &self,
        start: &NodeId,
        step: &BTreeMap<&NodeId, Vec<&NodeId>>,
        better: impl Fn(&TimePoint, &TimePoint) -> bool,
    ) -> Option<TimePoint> {
        if !self.nodes.contains_key(start) {
            return None;
        }
        let mut best: Option<TimePoint> = None;
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut stack: Vec<&NodeId> = step.get(start).cloned().unwrap_or_default();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if let Some(t) = self.node_time(n) {
                match &best {
                    Some(b) if !better(b, t) => {}
                    _ => best = Some(t.clone()),
                }
            }
            if let Some(next) = step.get(n) {
                stack.extend(next.iter().copied());
            }
        }
        best
    }

    /// The tightest provable time bracket around an arc: the source's time
    /// (or greatest anchored ancestor time) below, the destination's time
    /// (or least anchored descendant time) above.
    pub fn arc_extent(&self, arc: &Arc) -> TimeInterval {
        TimeInterval {
            lo: self.node_lower_bound(&arc.src),
            hi: self.node_upper_bound(&arc.dst),
        }
    }

    /// Weakly connected components, each a sorted node set, ordered by
    /// smallest member. Arcs with unknown endpoints do not connect.
    pub fn components(&self) -> Vec<BTreeSet<NodeId>> {
        let succ = self.successors();
        let pred = self.predecessors();
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.nodes.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(n) = stack.pop() {
                if !seen.insert(n) {
                    continue;
                }
                comp.insert(n.clone());
                stack.extend(succ[n].iter().copied());
                stack.extend(pred[n].iter().copied());
            }
            out.push(comp);
        }
        out
    }
}
