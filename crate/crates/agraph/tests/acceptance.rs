//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `--nocapture` to see them). Everything here is exact — no
//! tolerances, the values are either reproduced or the suite is red.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use agraph::formats::callhome::{parse_callhome, CallhomeOptions};
use agraph::formats::damsl::{parse_damsl, DamslOptions};
use agraph::formats::muc::parse_muc_coref;
use agraph::formats::treebank::{parse_treebank, TreebankOptions};
use agraph::formats::xml::{from_xml, from_xml_lenient, to_xml};
use agraph::formats::xwaves::{parse_xwaves, parse_xwaves_to_graph};
use agraph::formats::FormatError;
use agraph::graph::{AnnotationGraph, Arc, NodeId, Record};
use agraph::index::TimeIndex;
use agraph::query::{self, ArcSet, TriState};
use agraph::time::TimePoint;
use common::{
    anchored_span, minimal_graph, oracle_includes, oracle_overlaps, oracle_precedes,
    random_valid_graph, GraphSpec, Rng,
};

const CALLHOME: &str = include_str!("fixtures/callhome.txt");
const WORDS: &str = include_str!("fixtures/speaker0.words");
const MUC_COREF: &str = include_str!("fixtures/muc_coref.sgml");
const DAMSL: &str = include_str!("fixtures/damsl.sgml");
const HYBRID_DISCOURSE: &str = include_str!("fixtures/hybrid_discourse.sgml");

/// The minimal example in the older unquoted-attribute XML style that
/// predates strict quoting.
const MINIMAL_XML: &str = "<annotation>
  <arc>
    <begin id=1 time=52.46>
    <label type=\"W\" name=\"oh\">
    <end id=2>
  </arc>
  <arc>
    <begin id=2>
    <label type=\"W\" name=\"okay\">
    <end id=3 time=53.14>
  </arc>
  <arc>
    <begin id=1 time=52.46>
    <label type=\"D\" name=\"IOS:Commit\">
    <end id=3 time=53.14>
  </arc>
</annotation>
";

#[test]
fn acceptance_1_minimal_example_reproduction() {
    let g = minimal_graph();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.arc_count(), 3);
    assert_eq!(g.node_time(&"1".into()).unwrap().canonical_text(), "52.46");
    assert_eq!(g.node_time(&"2".into()), None);
    assert_eq!(g.node_time(&"3".into()).unwrap().canonical_text(), "53.14");
    assert_eq!(g.type_tags(), BTreeSet::from(["D", "W"]));
    assert!(g.class_names().is_empty());
    assert!(g.validate().ok());

    // the same discourse tag, recovered from its source utterance by the
    // DAMSL importer, carries the exact attribute times (the 52.46 of the
    // worked example is a display rounding of 52.466781)
    let full = parse_damsl(DAMSL, &DamslOptions::default()).unwrap();
    let ios = full
        .arcs()
        .find(|a| a.record.label == "IOS:Commit" && a.record.class.as_deref() == Some("utt19"))
        .unwrap();
    assert_eq!(
        full.node_time(&ios.src).unwrap().canonical_text(),
        "52.466781"
    );
    assert_eq!(full.node_time(&ios.dst).unwrap().canonical_text(), "53.14");
    println!("acceptance 1 PASS: minimal example reproduced exactly (|N|=3, |A|=3, T={{W,D}}, C=∅)");
}

#[test]
fn acceptance_2_xml_fidelity() {
    // the legacy-style document, lenient mode
    let g = from_xml_lenient(MINIMAL_XML).unwrap();
    assert_eq!(g, minimal_graph());
    assert_eq!(g.node_time(&"1".into()).unwrap().canonical_text(), "52.46");

    // strict round trip on 1000 random valid graphs
    let mut rng = Rng::new(101);
    for case in 0..1000 {
        let g = random_valid_graph(
            &mut rng,
            &GraphSpec {
                arc_induced: true,
                ..GraphSpec::default()
            },
        );
        let xml = to_xml(&g);
        let back = from_xml(&xml).unwrap_or_else(|e| panic!("case {case}: {e}\n{xml}"));
        assert_eq!(back, g, "case {case} failed to round-trip:\n{xml}");
    }
    println!("acceptance 2 PASS: legacy-style XML reproduces the minimal graph; 1000/1000 round trips exact");
}

#[test]
fn acceptance_3_muc7_coreference_classes() {
    let doc = parse_muc_coref(MUC_COREF, "").unwrap();
    let expected = vec![
        BTreeSet::from([2, 3, 4]),
        BTreeSet::from([5, 6, 7, 8]),
        BTreeSet::from([11, 12]),
        BTreeSet::from([13, 15]),
    ];
    assert_eq!(doc.classes, expected);
    let names: Vec<u64> = doc.classes.iter().map(|c| *c.first().unwrap()).collect();
    assert_eq!(names, vec![2, 5, 11, 13]);
    // the class name is what coindexes the arcs
    for (class, name) in doc.classes.iter().zip(&names) {
        let arcs = query::coindexed(&doc.graph, &name.to_string());
        assert_eq!(arcs.len(), class.len());
    }
    println!("acceptance 3 PASS: coreference classes {{2,3,4}} {{5,6,7,8}} {{11,12}} {{13,15}} named 2, 5, 11, 13");
}

#[test]
fn acceptance_4_xwaves_interval_reconstruction() {
    let intervals = parse_xwaves(WORDS).unwrap();
    let hello = intervals.iter().find(|iv| iv.label == "hello").unwrap();
    assert_eq!(hello.start.canonical_text(), "0.110000");
    assert_eq!(hello.end.canonical_text(), "0.488555");

    let g = parse_xwaves_to_graph(WORDS, "W", "<sil>", "").unwrap();
    let arc = g.arcs().find(|a| a.record.label == "hello").unwrap();
    assert_eq!(g.node_time(&arc.src).unwrap().canonical_text(), "0.110000");
    assert_eq!(g.node_time(&arc.dst).unwrap().canonical_text(), "0.488555");
    println!("acceptance 4 PASS: hello occupies [0.110000, 0.488555] with canonical decimal texts");
}

#[test]
fn acceptance_5_callhome_overlap_structure() {
    let g = parse_callhome(CALLHOME, &CallhomeOptions::default()).unwrap();
    assert!(g.validate().ok());
    assert_eq!(g.components().len(), 13, "one component per record");

    let turn = |begin: &str, end: &str| -> Arc {
        g.arcs()
            .find(|a| {
                a.record.type_tag == "speaker"
                    && g.node_time(&a.src).map(|t| t.canonical_text()) == Some(begin)
                    && g.node_time(&a.dst).map(|t| t.canonical_text()) == Some(end)
            })
            .unwrap_or_else(|| panic!("no speaker turn [{begin}, {end}]"))
            .clone()
    };
    let a_turn = turn("962.68", "970.21");
    let b_turn = turn("968.71", "969.00");
    assert_eq!(a_turn.record.label, "A");
    assert_eq!(b_turn.record.label, "B");
    assert_eq!(query::includes(&g, &a_turn, &b_turn), TriState::True);

    let first = turn("989.42", "991.86");
    let second = turn("991.75", "994.65");
    assert_eq!(query::overlaps(&g, &first, &second), TriState::True);
    println!("acceptance 5 PASS: 13 disjoint records; total overlap included; partial overlap detected");
}

#[test]
fn acceptance_6_power_set_closure() {
    let mut rng = Rng::new(103);
    let mut failures = 0;
    for _ in 0..1000 {
        let g = random_valid_graph(&mut rng, &GraphSpec::default());
        assert!(g.validate().ok());
        let keep = common::random_arc_subset(&g, &mut rng);
        let sub = g.subgraph(|a| keep.contains(a));
        if !sub.validate().ok() {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
    println!("acceptance 6 PASS: 1000/1000 random arc subsets induce valid graphs");
}

#[test]
fn acceptance_7_query_algebra_laws() {
    // De Morgan and complement laws on 1000 random pairs
    let mut rng = Rng::new(107);
    for _ in 0..1000 {
        let g = random_valid_graph(&mut rng, &GraphSpec::default());
        let all = ArcSet::all(&g);
        let a = ArcSet::from_arcs(&g, common::random_arc_subset(&g, &mut rng)).unwrap();
        let b = ArcSet::from_arcs(&g, common::random_arc_subset(&g, &mut rng)).unwrap();
        let not_a = all.complement(&a).unwrap();
        let not_b = all.complement(&b).unwrap();
        assert_eq!(
            all.complement(&a.union(&b).unwrap()).unwrap(),
            not_a.intersect(&not_b).unwrap()
        );
        assert_eq!(
            all.complement(&a.intersect(&b).unwrap()).unwrap(),
            not_a.union(&not_b).unwrap()
        );
        assert_eq!(a.union(&not_a).unwrap(), all);
        assert!(a.intersect(&not_a).unwrap().is_empty());
    }

    // temporal relations against the brute-force interval oracle on
    // anchored fixtures (≤ 200 arcs); zero discrepancies allowed
    let mut anchored_fixtures: Vec<AnnotationGraph> = Vec::new();
    let callhome = parse_callhome(CALLHOME, &CallhomeOptions::default()).unwrap();
    anchored_fixtures.push(callhome.subgraph(|a| a.record.type_tag == "speaker"));
    for _ in 0..60 {
        anchored_fixtures.push(random_valid_graph(
            &mut rng,
            &GraphSpec {
                max_nodes: 24,
                anchored_permille: 1000,
                strict_times: true,
                ..GraphSpec::default()
            },
        ));
    }
    let mut pairs_checked = 0usize;
    for g in &anchored_fixtures {
        assert!(g.arc_count() <= 200);
        let arcs: Vec<&Arc> = g.arcs().collect();
        for a in &arcs {
            for b in &arcs {
                let sa = anchored_span(g, a);
                let sb = anchored_span(g, b);
                let want_precedes = if a == b { false } else { oracle_precedes(&sa, &sb) };
                assert_eq!(query::precedes(g, a, b).is_true(), want_precedes);
                assert!(query::precedes(g, a, b).is_known());
                assert_eq!(query::includes(g, a, b).is_true(), oracle_includes(&sa, &sb));
                assert_eq!(query::overlaps(g, a, b).is_true(), oracle_overlaps(&sa, &sb));
                pairs_checked += 1;
            }
        }
        // window queries equal a linear scan on the same fixture
        let idx = TimeIndex::build(g);
        let mut times: Vec<TimePoint> = g.nodes().filter_map(|n| n.time).collect();
        times.sort();
        times.dedup();
        for w in times.windows(2) {
            let window = agraph::graph::TimeInterval::bounded(w[0].clone(), w[1].clone()).unwrap();
            let fast = idx.query_window(&window);
            let scan: Vec<&Arc> = g
                .arcs()
                .filter(|a| {
                    let e = g.arc_extent(a);
                    match (&e.lo, &e.hi) {
                        (Some(lo), Some(hi)) => lo <= &w[1] && hi >= &w[0],
                        _ => false,
                    }
                })
                .collect();
            assert_eq!(fast.len(), scan.len());
        }
    }
    assert!(pairs_checked > 1000);
    println!("acceptance 7 PASS: algebra laws on 1000 pairs; {pairs_checked} relation pairs match the interval oracle");
}

#[test]
fn acceptance_8_hybrid_merge() {
    // word strand: the utterance-1 fragment of the words file
    let fragment: String = WORDS.lines().take(7).collect::<Vec<_>>().join("\n");
    let words = parse_xwaves_to_graph(&fragment, "W", "<sil>", "w").unwrap();
    assert_eq!(words.arc_count(), 5);
    // discourse strand, independently converted
    let discourse = parse_damsl(
        HYBRID_DISCOURSE,
        &DamslOptions {
            id_prefix: "disc.".into(),
            ..Default::default()
        },
    )
    .unwrap();

    // explicit boundary registration: turn start = start of "hello",
    // turn end = end of "you"
    let hello = words.arcs().find(|a| a.record.label == "hello").unwrap();
    let you = words.arcs().find(|a| a.record.label == "you").unwrap();
    let turn = discourse
        .arcs()
        .find(|a| a.record.type_tag == "Turn")
        .unwrap()
        .clone();
    let mapping: BTreeMap<NodeId, NodeId> = BTreeMap::from([
        (turn.src.clone(), hello.src.clone()),
        (turn.dst.clone(), you.dst.clone()),
    ]);
    // mapped boundaries carry identical decimal times
    for (from, to) in &mapping {
        assert_eq!(discourse.node_time(from), words.node_time(to));
    }

    let renamed = discourse.rename_nodes(&mapping).unwrap();
    let merged = words.union(&renamed).unwrap();
    assert!(merged.validate().ok());
    assert_eq!(
        merged.node_count(),
        words.node_count() + discourse.node_count() - mapping.len()
    );
    // one shared node per mapped pair
    let merged_turn = merged
        .arcs()
        .find(|a| a.record.type_tag == "Turn")
        .unwrap();
    assert_eq!(merged_turn.src, hello.src);
    assert_eq!(merged_turn.dst, you.dst);

    // projecting by type recovers each strand's arc set exactly
    let word_arcs: BTreeSet<Arc> = words.arcs().cloned().collect();
    let back_words: BTreeSet<Arc> = merged
        .subgraph(|a| a.record.type_tag == "W")
        .arcs()
        .cloned()
        .collect();
    assert_eq!(back_words, word_arcs);
    let discourse_arcs: BTreeSet<Arc> = renamed.arcs().cloned().collect();
    let back_discourse: BTreeSet<Arc> = merged
        .subgraph(|a| a.record.type_tag != "W")
        .arcs()
        .cloned()
        .collect();
    assert_eq!(back_discourse, discourse_arcs);
    println!("acceptance 8 PASS: hybrid merge shares the mapped boundary nodes and projects back losslessly");
}

#[test]
fn acceptance_9_treebank_alignment() {
    // 20 word tokens, one of them a breath
    let words_20 = [
        "the", "state", "will", "save", "about", "one", "million", "dollars", "a", "year",
        "if", "illegal", "aliens", "are", "denied", "General", "Relief", "<breath>", "they",
        "said",
    ];
    let mut chain = AnnotationGraph::new();
    for i in 0..=words_20.len() {
        chain.add_node(format!("t{i}").as_str(), None).unwrap();
    }
    for (i, w) in words_20.iter().enumerate() {
        chain.add_arc(Arc::new(
            format!("t{i}").as_str(),
            Record::new("W", (*w).to_string()),
            format!("t{}", i + 1).as_str(),
        ));
    }

    // the tree carries one trace the transcript lacks
    let tree = "(S (NP-SBJ-1 (DT the) (NN state))
   (VP (MD will)
       (VP (VB save)
           (NP (QP (RB about) (CD one) (CD million)) (NNS dollars))
           (NP-TMP (DT a) (NN year))
           (SBAR (IN if)
               (S (NP-SBJ (JJ illegal) (NNS aliens))
                  (VP (VBP are)
                      (VP (VBN denied)
                          (NP (-NONE- *-1))
                          (NP (NNP General) (NNP Relief))))))))
   (PRN (S (NP (PRP they)) (VP (VBD said)))))";
    let mut options = TreebankOptions::default();
    options.skip_terminals.insert("-NONE-".into());
    options.skip_words.insert("<breath>".into());

    let g = parse_treebank(tree, &chain, &options).unwrap();
    assert!(g.validate().ok());

    let span = |label: &str, src: &str, dst: &str| {
        assert!(
            g.arcs().any(|a| a.record.type_tag == "Syn"
                && a.record.label == label
                && a.src == src.into()
                && a.dst == dst.into()),
            "missing Syn/{label} over [{src}, {dst}]"
        );
    };
    // hand-verified nonterminal spans
    span("S", "t0", "t20"); // the whole sentence, breath skipped inside
    span("NP-SBJ-1", "t0", "t2"); // the state
    span("QP", "t4", "t7"); // about one million
    span("NP-TMP", "t8", "t10"); // a year
    span("SBAR", "t10", "t17"); // if ... Relief
    span("VP", "t14", "t17"); // denied (trace) General Relief
    span("NP", "t14", "t17"); // the trace NP lands on the enclosing span
    span("PRN", "t18", "t20"); // they said, past the breath
    span("NP", "t18", "t19"); // they

    // the mismatch case names position 0 and both tokens
    let err = parse_treebank(
        "(S (NP cat))",
        &{
            let mut g = AnnotationGraph::new();
            g.add_node("a", None).unwrap();
            g.add_node("b", None).unwrap();
            g.add_arc(Arc::new("a", Record::new("W", "dog"), "b"));
            g
        },
        &TreebankOptions::default(),
    )
    .unwrap_err();
    assert_eq!(
        err,
        FormatError::AlignmentMismatch {
            position: 0,
            tree_token: "cat".into(),
            word_token: "dog".into(),
        }
    );
    println!("acceptance 9 PASS: 20-word tree aligned through trace and breath; mismatch reported at position 0");
}
