//! Penn-style bracketed parses, aligned against a word strand.
//!
//! The tree's terminal string and the orthographic word strand never quite
//! agree: the tree carries material with no duration (traces), the
//! transcript carries material the parser never saw (breaths). Alignment
//! therefore takes two skip lists — tree-side terminal categories and
//! word-side labels — and matches what remains left to right, reporting
//! the first mismatching pair. Every nonterminal becomes a `Syn/` arc
//! from the start node of its first aligned terminal to the end node of
//! its last; hierarchy comes from sharing nodes. A nonterminal whose span
//! is entirely skipped material attaches to the nearest enclosing span.

use std::collections::BTreeSet;

use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, NodeId, Record};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Leaf(String),
    Inner {
        label: String,
        children: Vec<ParseTree>,
    },
}

impl ParseTree {
    /// The terminal string, in order.
    pub fn terminals(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_terminals(&mut out);
        out
    }

    fn collect_terminals<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ParseTree::Leaf(tok) => out.push(tok),
            ParseTree::Inner { children, .. } => {
                for c in children {
                    c.collect_terminals(out);
                }
            }
        }
    }
}

pub fn parse_bracketed(text: &str) -> Result<ParseTree, FormatError> {
    let mut tokens = tokenize(text).into_iter().peekable();
    let tree = parse_node(&mut tokens)?;
    if let Some(extra) = tokens.next() {
        return Err(FormatError::MalformedBracketing(format!(
            "trailing material {extra:?} after the tree"
        )));
    }
    Ok(tree)
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if !word.is_empty() {
                out.push(Token::Word(std::mem::take(&mut word)));
            }
            if c == '(' {
                out.push(Token::Open);
            } else if c == ')' {
                out.push(Token::Close);
            }
        } else {
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push(Token::Word(word));
    }
    out
}

fn parse_node(
    tokens: &mut std::iter::Peekable<std::vec::IntoIter<Token>>,
) -> Result<ParseTree, FormatError> {
    match tokens.next() {
        Some(Token::Open) => {
            let label = match tokens.peek() {
                Some(Token::Word(_)) => {
                    let Some(Token::Word(w)) = tokens.next() else {
                        unreachable!()
                    };
                    w
                }
                _ => String::new(), // PTB outer wrapper: "( (S ...) )"
            };
            let mut children = Vec::new();
            loop {
                match tokens.peek() {
                    Some(Token::Close) => {
                        tokens.next();
                        break;
                    }
                    Some(_) => children.push(parse_node(tokens)?),
                    None => {
                        return Err(FormatError::MalformedBracketing(format!(
                            "unclosed constituent ({label}"
                        )))
                    }
                }
            }
            Ok(ParseTree::Inner { label, children })
        }
        Some(Token::Word(w)) => Ok(ParseTree::Leaf(w)),
        Some(Token::Close) => Err(FormatError::MalformedBracketing(
            "unexpected ')'".into(),
        )),
        None => Err(FormatError::MalformedBracketing("empty input".into())),
    }
}

#[derive(Debug, Clone, Default)]
pub struct TreebankOptions {
    /// Tree-side skips: preterminal categories (e.g. `-NONE-`) or raw
    /// terminal tokens whose subtrees align to nothing.
    pub skip_terminals: BTreeSet<String>,
    /// Word-side skips: word labels invisible to alignment (e.g. breaths).
    pub skip_words: BTreeSet<String>,
}

struct ChainWord {
    label: String,
    src: NodeId,
    dst: NodeId,
}

fn word_chain_of(word_graph: &AnnotationGraph) -> Result<Vec<ChainWord>, FormatError> {
    let words: Vec<&Arc> = word_graph
        .arcs()
        .filter(|a| a.record.type_tag == tags::WORD)
        .collect();
    if words.is_empty() {
        return Ok(Vec::new());
    }
    let dsts: BTreeSet<&NodeId> = words.iter().map(|a| &a.dst).collect();
    let mut starts = words.iter().filter(|a| !dsts.contains(&a.src));
    let first = starts.next().ok_or_else(|| {
        FormatError::WordGraphNotChain("no start word (the word arcs form a cycle?)".into())
    })?;
    if starts.next().is_some() {
        return Err(FormatError::WordGraphNotChain(
            "multiple chain starts".into(),
        ));
    }
    let mut chain = Vec::with_capacity(words.len());
    let mut cursor = first;
    loop {
        chain.push(ChainWord {
            label: cursor.record.label.clone(),
            src: cursor.src.clone(),
            dst: cursor.dst.clone(),
        });
        let mut nexts = words.iter().filter(|a| a.src == cursor.dst);
        match (nexts.next(), nexts.next()) {
            (Some(next), None) => cursor = next,
            (None, _) => break,
            (Some(_), Some(_)) => {
                return Err(FormatError::WordGraphNotChain(format!(
                    "word chain branches at node {}",
                    cursor.dst
                )))
            }
        }
    }
    if chain.len() != words.len() {
        return Err(FormatError::WordGraphNotChain(
            "word arcs do not form a single chain".into(),
        ));
    }
    Ok(chain)
}

/// (span, homeless labels) for one constituent
type Alignment = (Option<(NodeId, NodeId)>, Vec<String>);

struct Aligner<'a> {
    words: &'a [ChainWord],
    cursor: usize,
    options: &'a TreebankOptions,
    /// (label, src, dst) for every aligned nonterminal
    spans: Vec<(String, NodeId, NodeId)>,
}

impl<'a> Aligner<'a> {
    fn skip_words(&mut self) {
        while let Some(w) = self.words.get(self.cursor) {
            if self.options.skip_words.contains(&w.label) {
                self.cursor += 1;
            } else {
                break;
            }
        }
    }

    /// Returns the aligned span plus the labels of descendants that
    /// aligned to nothing and still need a home.
    fn align(&mut self, tree: &ParseTree) -> Result<Alignment, FormatError> {
        match tree {
            ParseTree::Leaf(token) => {
                if self.options.skip_terminals.contains(token) {
                    return Ok((None, Vec::new()));
                }
                self.skip_words();
                let word = self.words.get(self.cursor).ok_or_else(|| {
                    FormatError::AlignmentMismatch {
                        position: self.cursor,
                        tree_token: token.clone(),
                        word_token: "(end of words)".into(),
                    }
                })?;
                if word.label != *token {
                    return Err(FormatError::AlignmentMismatch {
                        position: self.cursor,
                        tree_token: token.clone(),
                        word_token: word.label.clone(),
                    });
                }
                self.cursor += 1;
                Ok((Some((word.src.clone(), word.dst.clone())), Vec::new()))
            }
            ParseTree::Inner { label, children } => {
                if self.options.skip_terminals.contains(label) {
                    return Ok((None, Vec::new()));
                }
                let mut span: Option<(NodeId, NodeId)> = None;
                let mut pending = Vec::new();
                for child in children {
                    let (child_span, child_pending) = self.align(child)?;
                    pending.extend(child_pending);
                    if let Some((s, e)) = child_span {
                        span = Some(match span {
                            None => (s, e),
                            Some((start, _)) => (start, e),
                        });
                    }
                }
                match span {
                    Some((s, e)) => {
                        // homeless descendants land on this span
                        for lbl in pending.drain(..) {
                            self.spans.push((lbl, s.clone(), e.clone()));
                        }
                        if !label.is_empty() {
                            self.spans.push((label.clone(), s.clone(), e.clone()));
                        }
                        Ok((Some((s, e)), Vec::new()))
                    }
                    None => {
                        if !label.is_empty() {
                            pending.push(label.clone());
                        }
                        Ok((None, pending))
                    }
                }
            }
        }
    }
}

/// Align a parse tree against a word strand (a single `W/` chain) and
/// return the strand plus one `Syn/` arc per aligned nonterminal.
pub fn align_treebank(
    tree: &ParseTree,
    word_graph: &AnnotationGraph,
    options: &TreebankOptions,
) -> Result<AnnotationGraph, FormatError> {
    let words = word_chain_of(word_graph)?;
    let mut aligner = Aligner {
        words: &words,
        cursor: 0,
        options,
        spans: Vec::new(),
    };
    let (_, _unattached) = aligner.align(tree)?;
    // words after the last aligned terminal may be skippable leftovers
    aligner.skip_words();
    if aligner.cursor != words.len() {
        let word = &words[aligner.cursor];
        return Err(FormatError::AlignmentMismatch {
            position: aligner.cursor,
            tree_token: "(end of tree)".into(),
            word_token: word.label.clone(),
        });
    }

    let mut g = word_graph.clone();
    for (label, src, dst) in aligner.spans {
        g.add_arc(Arc::new(src, Record::new(tags::SYN, label), dst));
    }
    Ok(g)
}

/// Parse and align in one go.
pub fn parse_treebank(
    bracketed: &str,
    word_graph: &AnnotationGraph,
    options: &TreebankOptions,
) -> Result<AnnotationGraph, FormatError> {
    align_treebank(&parse_bracketed(bracketed)?, word_graph, options)
}
