//! Tilt intonation events.
//!
//! A Tilt event is a quantitative description of an F0 obtrusion: start
//! time, duration, total F0 change in Hz, and the Hz difference at the
//! end. Each event becomes one `Tilt/` arc from a node at `t0` to a node
//! at `t0 + dur`, the sum computed in exact decimal arithmetic. The label
//! packs the parameters as `kind;a=AMP;d=DUR;l=FINAL` with the source
//! spellings intact.

use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};
use crate::time::TimePoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiltEvent {
    pub t0: TimePoint,
    pub dur: TimePoint,
    pub amp: TimePoint,
    pub final_delta: TimePoint,
    pub kind: String,
}

/// Parse an events file: `t0 dur amp final kind` per line, `#` comments.
pub fn parse_tilt_file(text: &str) -> Result<Vec<TiltEvent>, FormatError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || FormatError::MalformedLine {
            line: idx + 1,
            content: line.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(malformed());
        }
        let time = |s: &str| TimePoint::parse(s).map_err(|_| malformed());
        out.push(TiltEvent {
            t0: time(fields[0])?,
            dur: time(fields[1])?,
            amp: time(fields[2])?,
            final_delta: time(fields[3])?,
            kind: fields[4].to_string(),
        });
    }
    Ok(out)
}

pub fn tilt_to_graph(
    events: &[TiltEvent],
    id_prefix: &str,
) -> Result<AnnotationGraph, FormatError> {
    let zero = TimePoint::parse("0").expect("constant");
    let mut g = AnnotationGraph::new();
    for (i, ev) in events.iter().enumerate() {
        if ev.dur < zero {
            return Err(FormatError::NegativeDuration {
                t0: ev.t0.to_string(),
                dur: ev.dur.to_string(),
            });
        }
        let end = ev
            .t0
            .checked_add(&ev.dur)
            .map_err(|_| FormatError::MalformedLine {
                line: 0,
                content: format!("{} + {}", ev.t0, ev.dur),
            })?;
        let src = format!("{id_prefix}tilt{i}s");
        let dst = format!("{id_prefix}tilt{i}e");
        g.add_node(src.as_str(), Some(ev.t0.clone()))?;
        g.add_node(dst.as_str(), Some(end))?;
        g.add_arc(Arc::new(
            src.as_str(),
            Record::new(
                tags::TILT,
                format!(
                    "{};a={};d={};l={}",
                    ev.kind, ev.amp, ev.dur, ev.final_delta
                ),
            ),
            dst.as_str(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TimePoint {
        TimePoint::parse(s).unwrap()
    }

    #[test]
    fn event_spans_t0_to_t0_plus_dur() {
        let g = tilt_to_graph(
            &[TiltEvent {
                t0: t("1.25"),
                dur: t("0.30"),
                amp: t("40"),
                final_delta: t("-5"),
                kind: "accent".into(),
            }],
            "",
        )
        .unwrap();
        let arc = g.arcs().next().unwrap();
        assert_eq!(arc.record.label, "accent;a=40;d=0.30;l=-5");
        assert_eq!(g.node_time(&arc.src).unwrap().canonical_text(), "1.25");
        assert_eq!(g.node_time(&arc.dst).unwrap().canonical_text(), "1.55");
        assert!(g.validate().ok());
    }

    #[test]
    fn zero_duration_is_a_zero_width_arc() {
        let g = tilt_to_graph(
            &[TiltEvent {
                t0: t("2.0"),
                dur: t("0"),
                amp: t("10"),
                final_delta: t("0"),
                kind: "boundary".into(),
            }],
            "",
        )
        .unwrap();
        let arc = g.arcs().next().unwrap();
        assert_ne!(arc.src, arc.dst);
        assert_eq!(g.node_time(&arc.src), g.node_time(&arc.dst));
        assert!(g.validate().ok());
    }

    #[test]
    fn negative_duration_is_an_error() {
        let err = tilt_to_graph(
            &[TiltEvent {
                t0: t("1.0"),
                dur: t("-0.1"),
                amp: t("1"),
                final_delta: t("1"),
                kind: "accent".into(),
            }],
            "",
        )
        .unwrap_err();
        assert!(matches!(err, FormatError::NegativeDuration { .. }));
    }

    #[test]
    fn empty_event_list() {
        assert!(tilt_to_graph(&[], "").unwrap().is_empty());
    }

    #[test]
    fn events_file_parses() {
        let events = parse_tilt_file("# tilt params\n1.25 0.30 40 -5 accent\n2.0 0 10 0 boundary\n").unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].kind, "accent");
        assert_eq!(events[1].dur.canonical_text(), "0");
    }

    #[test]
    fn malformed_event_line() {
        assert!(matches!(
            parse_tilt_file("1.0 0.2 40\n"),
            Err(FormatError::MalformedLine { line: 1, .. })
        ));
    }
}
