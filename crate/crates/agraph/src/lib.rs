//! Annotation graphs: labeled acyclic digraphs with fielded records on the
//! arcs and an order-preserving partial time map on the nodes.
//!
//! The crate has four parts:
//!
//! * [`graph`] / [`validate`] — the data model, its two validity
//!   conditions, construction, union, subgraph extraction and temporal
//!   extents. Times are exact decimals ([`time::TimePoint`]) that keep
//!   their source spelling; binary floats never enter the picture.
//! * [`formats`] — a bidirectional XML exchange encoding plus one-way
//!   importers for several speech/discourse annotation formats (xwaves
//!   label files, LDC telephone transcripts, COCONUT dialogue tables,
//!   MUC coreference and named-entity SGML, DAMSL dialogue acts, ToBI
//!   tiers, Tilt events, Penn-style bracketed trees).
//! * [`query`] / [`index`] — arc-set selection closed under union,
//!   intersection and relative complement, tri-state temporal relations
//!   (precedes / includes / overlaps), coindexing lookup and a time index
//!   for window queries.
//! * [`viz`] — deterministic DOT rendering with one layer per arc type.
//!
//! Graphs are plain values: cheap to clone at annotation scale, immutable
//! once built, and safe to share across threads for reading.

pub mod formats;
pub mod graph;
pub mod index;
pub mod query;
pub mod time;
pub mod validate;
pub mod viz;

// TimePoint::value exposes Decimal, so callers get the crate with us
pub use rust_decimal;

pub use graph::{AnnotationGraph, Arc, CoreError, Node, NodeId, Record, TimeInterval};
pub use index::TimeIndex;
pub use query::{ArcSet, QueryError, Selector, TriState};
pub use time::{TimeError, TimePoint};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};
pub use viz::{render, VizOptions};
