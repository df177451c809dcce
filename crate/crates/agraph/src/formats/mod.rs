//! Importers and the XML exchange encoding.
//!
//! Each importer is a pure function from source text to an
//! [`AnnotationGraph`](crate::graph::AnnotationGraph); different documents
//! can be imported in parallel. Importers never share nodes across
//! independently produced graphs — registration of multi-strand data is
//! the caller's job, via pre-unified node ids or an explicit mapping at
//! merge time — so node ids take an `id_prefix` wherever a strand may
//! later be combined with another.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::CoreError;

pub mod callhome;
pub mod coconut;
pub mod damsl;
pub mod muc;
pub mod sgml;
pub mod tilt;
pub mod tobi;
pub mod treebank;
pub mod xml;
pub mod xwaves;

/// The fixed type-tag spellings shared by importers and queries.
pub mod tags {
    pub const SPEAKER: &str = "speaker";
    pub const WORD: &str = "W";
    pub const TURN: &str = "Turn";
    pub const UTT: &str = "Utt";
    pub const DISCOURSE: &str = "D";
    pub const SP: &str = "Sp";
    pub const COREF: &str = "coref";
    pub const NE: &str = "NE";
    pub const BREAK: &str = "Break";
    pub const TONE: &str = "Tone";
    pub const TILT: &str = "Tilt";
    pub const SYN: &str = "Syn";
}

/// The source formats the toolkit can ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatKind {
    AgXml,
    Xwaves,
    Callhome,
    Coconut,
    MucCoref,
    MucNe,
    Damsl,
    Tobi,
    Tilt,
    Treebank,
}

impl FormatKind {
    pub const ALL: [FormatKind; 10] = [
        FormatKind::AgXml,
        FormatKind::Xwaves,
        FormatKind::Callhome,
        FormatKind::Coconut,
        FormatKind::MucCoref,
        FormatKind::MucNe,
        FormatKind::Damsl,
        FormatKind::Tobi,
        FormatKind::Tilt,
        FormatKind::Treebank,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FormatKind::AgXml => "agxml",
            FormatKind::Xwaves => "xwaves",
            FormatKind::Callhome => "callhome",
            FormatKind::Coconut => "coconut",
            FormatKind::MucCoref => "muc-coref",
            FormatKind::MucNe => "muc-ne",
            FormatKind::Damsl => "damsl",
            FormatKind::Tobi => "tobi",
            FormatKind::Tilt => "tilt",
            FormatKind::Treebank => "treebank",
        }
    }
}

impl fmt::Display for FormatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormatKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FormatKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown format {s:?}"))
    }
}

/// Errors shared by the importers. Messages echo the offending line, tag
/// or decimal text so diagnostics survive the trip to the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: malformed document: {detail}")]
    ParseError { line: usize, detail: String },
    #[error("line {line}: schema violation: {detail}")]
    SchemaError { line: usize, detail: String },
    #[error("node {id} given conflicting times {first} and {second}")]
    AnchorConflict {
        id: String,
        first: String,
        second: String,
    },
    #[error("line {line}: malformed label line {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: offset {offset} is earlier than the previous offset {previous}")]
    NonmonotonicTime {
        line: usize,
        offset: String,
        previous: String,
    },
    #[error("line {line}: malformed transcript record {content:?}")]
    MalformedRecord { line: usize, content: String },
    #[error("line {line}: end time {end} is earlier than begin time {begin}")]
    EndBeforeBegin {
        line: usize,
        begin: String,
        end: String,
    },
    #[error("tag {tag:?} references unknown piece {target:?}")]
    UnknownPieceRef { tag: String, target: String },
    #[error("COREF id {referrer} has REF={target} but no COREF declares ID={target}")]
    DanglingRef { referrer: u64, target: u64 },
    #[error("duplicate COREF ID={0}")]
    DuplicateId(u64),
    #[error("unbalanced {kind} tags: {detail}")]
    UnbalancedTags { kind: String, detail: String },
    #[error("{tag}: malformed Speech attribute {value:?}")]
    MalformedSpeechAttr { tag: String, value: String },
    #[error("{tag}: Response-to target {target:?} names no utterance")]
    UnknownResponseTarget { tag: String, target: String },
    #[error("no word boundary at time {0} (exact decimal match required)")]
    UnmatchedTime(String),
    #[error("negative duration {dur} on event at {t0}")]
    NegativeDuration { t0: String, dur: String },
    #[error("alignment mismatch at position {position}: tree token {tree_token:?} vs word {word_token:?}")]
    AlignmentMismatch {
        position: usize,
        tree_token: String,
        word_token: String,
    },
    #[error("malformed bracketing: {0}")]
    MalformedBracketing(String),
    #[error("word graph is not a single chain of word arcs: {0}")]
    WordGraphNotChain(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
