//! Command-line frontend: convert source formats to AG-XML, validate,
//! merge strands, query, render and inspect annotation graphs.
//!
//! Exit codes: 0 success, 1 parse/import error, 2 validation failure
//! (including anchor conflicts), 3 usage error.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use agraph::formats::callhome::{parse_callhome, CallhomeOptions};
use agraph::formats::coconut::parse_coconut;
use agraph::formats::damsl::{parse_damsl, DamslOptions};
use agraph::formats::muc::{parse_muc_coref, parse_muc_ne};
use agraph::formats::tilt::{parse_tilt_file, tilt_to_graph};
use agraph::formats::tobi::attach_tobi;
use agraph::formats::treebank::{parse_treebank, TreebankOptions};
use agraph::formats::xml::{from_xml, from_xml_lenient, to_xml};
use agraph::formats::xwaves::{parse_point_labels, parse_xwaves_to_graph};
use agraph::formats::{FormatError, FormatKind};
use agraph::graph::{AnnotationGraph, Arc, CoreError, NodeId, TimeInterval};
use agraph::index::TimeIndex;
use agraph::query::{self, Selector};
use agraph::time::TimePoint;
use agraph::viz::{render, VizOptions};

#[derive(Parser)]
#[command(
    name = "agraph",
    version,
    about = "Annotation graph toolkit: import, validate, merge, query and render multi-level linguistic annotation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Import a source file and emit AG-XML
    Convert(ConvertArgs),
    /// Check the two validity conditions plus referential integrity
    Validate(InputArgs),
    /// Union two or more AG-XML graphs, optionally sharing mapped nodes
    Merge(MergeArgs),
    /// Select arcs or evaluate a temporal relation
    Query(QueryArgs),
    /// Render an AG-XML graph as a layered DOT diagram
    Viz(VizArgs),
    /// Summarize an AG-XML graph
    Info(InputArgs),
}

#[derive(Args)]
struct ConvertArgs {
    /// Input file (for --from tobi this is the word strand in AG-XML)
    input: PathBuf,
    /// Source format: agxml, xwaves, callhome, coconut, muc-coref,
    /// muc-ne, damsl, tobi, tilt, treebank
    #[arg(long = "from")]
    from: String,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Prefix for generated node ids (namespacing strands before a merge)
    #[arg(long, default_value = "")]
    id_prefix: String,
    /// xwaves: arc type for the intervals
    #[arg(long, default_value = "W")]
    type_tag: String,
    /// xwaves: label that marks silence
    #[arg(long, default_value = "<sil>")]
    silence: String,
    /// callhome: join consecutive same-speaker records at equal times
    #[arg(long)]
    join_same_speaker: bool,
    /// damsl: also emit word arcs from the utterance text
    #[arg(long)]
    with_words: bool,
    /// damsl: drop attributes whose value is None
    #[arg(long)]
    drop_none: bool,
    /// tobi: tone tier label file
    #[arg(long)]
    tones: Option<PathBuf>,
    /// tobi: break-index tier label file
    #[arg(long)]
    breaks: Option<PathBuf>,
    /// treebank: the word strand in AG-XML
    #[arg(long)]
    word_graph: Option<PathBuf>,
    /// treebank: tree-side terminal category to skip (repeatable)
    #[arg(long = "skip-terminal")]
    skip_terminals: Vec<String>,
    /// treebank: word label to skip (repeatable)
    #[arg(long = "skip-word")]
    skip_words: Vec<String>,
    /// agxml: accept unquoted attributes and bare empty elements
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// Accept the older unquoted-attribute AG-XML style
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct MergeArgs {
    /// Two or more AG-XML files
    #[arg(required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Node-id mapping file: one "keep-id<TAB>merge-id" pair per line
    #[arg(long = "map")]
    map: Option<PathBuf>,
    /// Merge mapped node pairs whose decimal times are exactly equal
    #[arg(long)]
    unify_times: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct QueryArgs {
    input: PathBuf,
    /// Exact arc type
    #[arg(long = "type")]
    type_tag: Option<String>,
    /// Exact label
    #[arg(long)]
    label: Option<String>,
    /// Label prefix
    #[arg(long)]
    label_prefix: Option<String>,
    /// Exact class (coindexing lookup)
    #[arg(long)]
    class: Option<String>,
    /// Time window LO:HI (either side may be empty)
    #[arg(long)]
    window: Option<String>,
    /// Temporal relation: precedes, includes or overlaps
    #[arg(long)]
    rel: Option<String>,
    /// First arc, as "SRC DST TYPE/LABEL[/CLASS]"
    #[arg(long)]
    a: Option<String>,
    /// Second arc, same form
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    lenient: bool,
}

#[derive(Args)]
struct VizArgs {
    input: PathBuf,
    /// Layer order, top to bottom (repeatable); unlisted types follow
    #[arg(long = "layer")]
    layers: Vec<String>,
    /// Leave node times off the diagram
    #[arg(long)]
    no_times: bool,
    /// Show class fields in arc labels
    #[arg(long)]
    show_classes: bool,
    /// Output format (only "dot" is available)
    #[arg(long, default_value = "dot")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lenient: bool,
}

enum CliError {
    Usage(String),
    Parse(String),
    Validation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        match e {
            FormatError::AnchorConflict { .. } | FormatError::Core(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path, lenient: bool) -> Result<AnnotationGraph, CliError> {
    let text = read_file(path)?;
    let parse = if lenient { from_xml_lenient } else { from_xml };
    parse(&text).map_err(CliError::from)
}

/// Print a line of results; a closed pipe downstream is a normal way
/// for a consumer to stop reading, not an error.
fn say(text: impl fmt::Display) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Ok(()) => Ok(()),
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Parse(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn cmd_convert(args: &ConvertArgs) -> Result<(), CliError> {
    let kind: FormatKind = args.from.parse().map_err(CliError::Usage)?;
    let prefix = args.id_prefix.as_str();
    let graph = match kind {
        FormatKind::AgXml => read_graph(&args.input, args.lenient)?,
        FormatKind::Xwaves => {
            let text = read_file(&args.input)?;
            parse_xwaves_to_graph(&text, &args.type_tag, &args.silence, prefix)?
        }
        FormatKind::Callhome => {
            let text = read_file(&args.input)?;
            parse_callhome(
                &text,
                &CallhomeOptions {
                    join_same_speaker: args.join_same_speaker,
                    id_prefix: prefix.to_string(),
                },
            )?
        }
        FormatKind::Coconut => parse_coconut(&read_file(&args.input)?, prefix)?,
        FormatKind::MucCoref => parse_muc_coref(&read_file(&args.input)?, prefix)?.graph,
        FormatKind::MucNe => parse_muc_ne(&read_file(&args.input)?, prefix)?,
        FormatKind::Damsl => parse_damsl(
            &read_file(&args.input)?,
            &DamslOptions {
                with_words: args.with_words,
                drop_none: args.drop_none,
                id_prefix: prefix.to_string(),
            },
        )?,
        FormatKind::Tobi => {
            let words = read_graph(&args.input, args.lenient)?;
            let tones = match &args.tones {
                Some(p) => parse_point_labels(&read_file(p)?)?,
                None => Vec::new(),
            };
            let breaks = match &args.breaks {
                Some(p) => parse_point_labels(&read_file(p)?)?,
                None => Vec::new(),
            };
            attach_tobi(&words, &tones, &breaks, prefix)?
        }
        FormatKind::Tilt => tilt_to_graph(&parse_tilt_file(&read_file(&args.input)?)?, prefix)?,
        FormatKind::Treebank => {
            let word_path = args
                .word_graph
                .as_ref()
                .ok_or_else(|| CliError::Usage("--from treebank requires --word-graph".into()))?;
            let words = read_graph(word_path, args.lenient)?;
            let mut options = TreebankOptions::default();
            options
                .skip_terminals
                .extend(args.skip_terminals.iter().cloned());
            options.skip_words.extend(args.skip_words.iter().cloned());
            parse_treebank(&read_file(&args.input)?, &words, &options)?
        }
    };
    emit(&to_xml(&graph), args.out.as_deref())
}

fn cmd_validate(args: &InputArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input, args.lenient)?;
    let report = g.validate();
    if report.ok() {
        say(format_args!("ok: {} nodes, {} arcs", g.node_count(), g.arc_count()));
        Ok(())
    } else {
        Err(CliError::Validation(report.to_string()))
    }
}

fn parse_mapping(path: &Path) -> Result<BTreeMap<NodeId, NodeId>, CliError> {
    let text = read_file(path)?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (keep, merge) = line.split_once('\t').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected \"keep-id<TAB>merge-id\", got {line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        map.insert(NodeId::from(merge.trim()), NodeId::from(keep.trim()));
    }
    Ok(map)
}

fn cmd_merge(args: &MergeArgs) -> Result<(), CliError> {
    let mut graphs = Vec::new();
    for path in &args.inputs {
        graphs.push(read_graph(path, args.lenient)?);
    }

    if let Some(map_path) = &args.map {
        if !args.unify_times {
            return Err(CliError::Usage(
                "--map only takes effect with --unify-times".into(),
            ));
        }
        let mapping = parse_mapping(map_path)?;
        // each mapped pair must be anchored to exactly equal decimals
        for (merge_id, keep_id) in &mapping {
            let time_of =
                |id: &NodeId| graphs.iter().find_map(|g| g.node_time(id).cloned());
            match (time_of(keep_id), time_of(merge_id)) {
                (Some(a), Some(b)) if a == b => {}
                (Some(a), Some(b)) => {
                    return Err(CliError::Validation(format!(
                        "mapped nodes {keep_id} and {merge_id} carry different times {a} and {b}"
                    )))
                }
                _ => {
                    return Err(CliError::Validation(format!(
                        "mapped nodes {keep_id} / {merge_id} must both be anchored to merge"
                    )))
                }
            }
        }
        for g in &mut graphs {
            *g = g.rename_nodes(&mapping)?;
        }
    } else if args.unify_times {
        return Err(CliError::Usage(
            "--unify-times needs a --map file naming the node pairs".into(),
        ));
    }

    let mut merged = AnnotationGraph::new();
    for g in &graphs {
        merged = merged.union(g)?;
    }
    emit(&to_xml(&merged), args.out.as_deref())
}

fn parse_window(text: &str) -> Result<TimeInterval, CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("window must be LO:HI, got {text:?}")))?;
    let side = |s: &str| -> Result<Option<TimePoint>, CliError> {
        if s.is_empty() {
            return Ok(None);
        }
        TimePoint::parse(s)
            .map(Some)
            .map_err(|e| CliError::Usage(e.to_string()))
    };
    TimeInterval::new(side(lo)?, side(hi)?)
        .ok_or_else(|| CliError::Usage(format!("window {text:?} is inverted")))
}

fn find_arc(g: &AnnotationGraph, spec: &str) -> Result<Arc, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "arc spec {spec:?} must be \"SRC DST TYPE/LABEL[/CLASS]\" naming an existing arc"
        ))
    };
    let mut tokens = spec.splitn(3, char::is_whitespace);
    let src = tokens.next().ok_or_else(bad)?;
    let dst = tokens.next().ok_or_else(bad)?;
    let notation = tokens.next().ok_or_else(bad)?.trim();
    g.arcs()
        .find(|a| {
            a.src.as_str() == src && a.dst.as_str() == dst && a.record.notation() == notation
        })
        .cloned()
        .ok_or_else(bad)
}

fn cmd_query(args: &QueryArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input, args.lenient)?;

    if let Some(rel) = &args.rel {
        let (Some(a_spec), Some(b_spec)) = (&args.a, &args.b) else {
            return Err(CliError::Usage("--rel needs both --a and --b".into()));
        };
        let a = find_arc(&g, a_spec)?;
        let b = find_arc(&g, b_spec)?;
        let answer = match rel.as_str() {
            "precedes" => query::precedes(&g, &a, &b),
            "includes" => query::includes(&g, &a, &b),
            "overlaps" => query::overlaps(&g, &a, &b),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown relation {other:?} (expected precedes, includes or overlaps)"
                )))
            }
        };
        say(answer);
        return Ok(());
    }

    if args.label.is_some() && args.label_prefix.is_some() {
        return Err(CliError::Usage(
            "--label and --label-prefix are mutually exclusive".into(),
        ));
    }
    let mut selector = Selector::new();
    if let Some(t) = &args.type_tag {
        selector = selector.with_type(t.clone());
    }
    if let Some(l) = &args.label {
        selector = selector.with_label(l.clone());
    }
    if let Some(p) = &args.label_prefix {
        selector = selector.with_label_prefix(p.clone());
    }
    if let Some(c) = &args.class {
        selector = selector.with_class(c.clone());
    }
    if let Some(w) = &args.window {
        selector = selector.with_window(parse_window(w)?);
    }
    if selector.is_empty() {
        return Err(CliError::Usage(
            "give at least one selection criterion (--type/--label/--label-prefix/--class/--window) or a --rel query".into(),
        ));
    }

    for arc in query::select(&g, &selector).iter() {
        say(format_args!(
            "{} {} {} {}",
            arc.src,
            arc.dst,
            arc.record.notation(),
            g.arc_extent(arc)
        ));
    }
    Ok(())
}

fn cmd_viz(args: &VizArgs) -> Result<(), CliError> {
    if args.format != "dot" {
        return Err(CliError::Usage(format!(
            "unknown output format {:?} (only \"dot\" is available)",
            args.format
        )));
    }
    let g = read_graph(&args.input, args.lenient)?;
    let dot = render(
        &g,
        &VizOptions {
            layer_order: args.layers.clone(),
            show_times: !args.no_times,
            show_classes: args.show_classes,
        },
    );
    emit(&dot, args.out.as_deref())
}

fn cmd_info(args: &InputArgs) -> Result<(), CliError> {
    let g = read_graph(&args.input, args.lenient)?;
    let anchored = g.nodes().filter(|n| n.time.is_some()).count();
    say(format_args!("nodes: {}", g.node_count()));
    say(format_args!("anchored: {anchored}"));
    say(format_args!("arcs: {}", g.arc_count()));
    let types: Vec<String> = g
        .type_tags()
        .iter()
        .map(|t| {
            let count = g.arcs().filter(|a| a.record.type_tag == *t).count();
            format!("{t}={count}")
        })
        .collect();
    say(format_args!("types: {}", types.join(" ")));
    say(format_args!("classes: {}", g.class_names().len()));
    say(format_args!("components: {}", g.components().len()));
    let idx = TimeIndex::build(&g);
    say(format_args!("indexed arcs: {}", idx.len()));
    say(format_args!("valid: {}", g.validate().ok()));
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Merge(args) => cmd_merge(args),
        Command::Query(args) => cmd_query(args),
        Command::Viz(args) => cmd_viz(args),
        Command::Info(args) => cmd_info(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("agraph: {e}");
            ExitCode::from(e.code())
        }
    }
}
