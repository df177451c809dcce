//! LDC telephone-speech transcripts.
//!
//! Each record is `[+|*] begin end SPK: words...`, possibly wrapped over
//! indented continuation lines. `+` and `*` mark partial and total overlap
//! with the previous turn. Every record becomes a disjoint piece of graph:
//! a `speaker/` arc over the anchored begin/end nodes, the word tokens
//! chained between the same two anchors (chart construction), and the
//! overlap marker, when present, kept as a `D/overlap:...` arc. Records
//! from different speakers never share nodes even when their times
//! coincide — coincident times and shared structure are different claims.

use super::{tags, FormatError};
use crate::graph::{AnnotationGraph, Arc, Record};
use crate::time::TimePoint;

#[derive(Debug, Clone, Default)]
pub struct CallhomeOptions {
    /// Join consecutive records of the same speaker at their boundary when
    /// the end/begin times are equal as decimals. Off by default: turns
    /// stay disjoint.
    pub join_same_speaker: bool,
    pub id_prefix: String,
}

#[derive(Debug)]
struct TranscriptRecord {
    overlap: Option<&'static str>,
    begin: TimePoint,
    end: TimePoint,
    speaker: String,
    text: String,
}

fn take_token(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_start();
    if s.is_empty() {
        return None;
    }
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    Some((&s[..end], &s[end..]))
}

fn parse_header(line: &str, line_no: usize) -> Result<Option<TranscriptRecord>, FormatError> {
    let mut rest = line.trim_start();
    let mut overlap = None;
    if let Some((tok, after)) = take_token(rest) {
        match tok {
            "+" => overlap = Some("partial"),
            "*" => overlap = Some("total"),
            _ => {}
        }
        if overlap.is_some() {
            rest = after;
        }
    }

    let malformed = || FormatError::MalformedRecord {
        line: line_no,
        content: line.to_string(),
    };
    let (first, rest) = match take_token(rest) {
        Some(pair) => pair,
        None if overlap.is_some() => return Err(malformed()),
        None => return Ok(None),
    };
    let begin = match TimePoint::parse(first) {
        Ok(t) => t,
        // a line that does not open with a time is a continuation,
        // unless it claimed to be an overlap record
        Err(_) if overlap.is_none() => return Ok(None),
        Err(_) => return Err(malformed()),
    };
    let (end_text, rest) = take_token(rest).ok_or_else(malformed)?;
    let end = TimePoint::parse(end_text).map_err(|_| malformed())?;
    let (speaker_tok, rest) = take_token(rest).ok_or_else(malformed)?;
    let speaker = speaker_tok.strip_suffix(':').ok_or_else(malformed)?;
    if speaker.is_empty() {
        return Err(malformed());
    }
    if end < begin {
        return Err(FormatError::EndBeforeBegin {
            line: line_no,
            begin: begin.to_string(),
            end: end.to_string(),
        });
    }
    Ok(Some(TranscriptRecord {
        overlap,
        begin,
        end,
        speaker: speaker.to_string(),
        text: rest.trim().to_string(),
    }))
}

/// Split transcript text into word tokens. Trailing punctuation becomes
/// its own token (words, punctuation and disfluencies all end up with the
/// word type), apostrophes and word-internal marks stay put.
fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let mut core = raw;
        let mut punct = Vec::new();
        while let Some(last) = core.chars().last() {
            if matches!(last, '.' | ',' | '?' | '!' | ';' | ':') && core.chars().count() > 1 {
                punct.push(last.to_string());
                core = &core[..core.len() - last.len_utf8()];
            } else {
                break;
            }
        }
        if !core.is_empty() {
            out.push(core.to_string());
        }
        out.extend(punct.into_iter().rev());
    }
    out
}

pub fn parse_callhome(
    text: &str,
    options: &CallhomeOptions,
) -> Result<AnnotationGraph, FormatError> {
    let mut records: Vec<TranscriptRecord> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_header(line, idx + 1)? {
            Some(record) => records.push(record),
            None => match records.last_mut() {
                Some(current) => {
                    current.text.push(' ');
                    current.text.push_str(line.trim());
                }
                None => {
                    return Err(FormatError::MalformedRecord {
                        line: idx + 1,
                        content: line.to_string(),
                    })
                }
            },
        }
    }

    let mut g = AnnotationGraph::new();
    let mut prev: Option<(String, TimePoint, String)> = None; // end node id, end time, speaker
    for (r, record) in records.iter().enumerate() {
        let p = &options.id_prefix;
        let begin_id = match &prev {
            Some((end_id, end_time, speaker))
                if options.join_same_speaker
                    && *speaker == record.speaker
                    && *end_time == record.begin =>
            {
                end_id.clone()
            }
            _ => {
                let id = format!("{p}t{r}.b");
                g.add_node(id.as_str(), Some(record.begin.clone()))?;
                id
            }
        };
        let end_id = format!("{p}t{r}.e");
        g.add_node(end_id.as_str(), Some(record.end.clone()))?;

        g.add_arc(Arc::new(
            begin_id.as_str(),
            Record::new(tags::SPEAKER, record.speaker.clone()),
            end_id.as_str(),
        ));
        if let Some(kind) = record.overlap {
            g.add_arc(Arc::new(
                begin_id.as_str(),
                Record::new(tags::DISCOURSE, format!("overlap:{kind}")),
                end_id.as_str(),
            ));
        }

        let words = tokenize(&record.text);
        let mut src = begin_id;
        for (i, word) in words.iter().enumerate() {
            let dst = if i + 1 == words.len() {
                end_id.clone()
            } else {
                let id = format!("{p}t{r}.m{}", i + 1);
                g.add_node(id.as_str(), None)?;
                id
            };
            g.add_arc(Arc::new(
                src.as_str(),
                Record::new(tags::WORD, word.clone()),
                dst.as_str(),
            ));
            src = dst;
        }
        prev = Some((end_id, record.end.clone(), record.speaker.clone()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record_chart_construction() {
        let g = parse_callhome(
            "996.51 997.61 B: Whatever's helpful.\n",
            &CallhomeOptions::default(),
        )
        .unwrap();
        assert!(g.validate().ok());
        let speaker: Vec<_> = g
            .arcs()
            .filter(|a| a.record.type_tag == "speaker")
            .collect();
        assert_eq!(speaker.len(), 1);
        assert_eq!(speaker[0].record.label, "B");
        assert_eq!(
            g.node_time(&speaker[0].src).unwrap().canonical_text(),
            "996.51"
        );
        assert_eq!(
            g.node_time(&speaker[0].dst).unwrap().canonical_text(),
            "997.61"
        );
        let words: Vec<_> = g
            .arcs()
            .filter(|a| a.record.type_tag == "W")
            .map(|a| a.record.label.clone())
            .collect();
        assert_eq!(words, vec!["Whatever's", "helpful", "."]);
        // word chain shares the speaker arc's anchors
        let first = g
            .arcs()
            .find(|a| a.record.label == "Whatever's")
            .unwrap();
        let last = g.arcs().find(|a| a.record.label == ".").unwrap();
        assert_eq!(first.src, speaker[0].src);
        assert_eq!(last.dst, speaker[0].dst);
    }

    #[test]
    fn overlapping_turns_stay_disjoint() {
        let text = "\
  962.68 970.21 A: He was changing projects
* 968.71 969.00 B:
";
        let g = parse_callhome(text, &CallhomeOptions::default()).unwrap();
        assert_eq!(g.components().len(), 2);
        let total = g
            .arcs()
            .find(|a| a.record.label == "overlap:total")
            .unwrap();
        assert_eq!(total.record.type_tag, "D");
        assert_eq!(g.node_time(&total.src).unwrap().canonical_text(), "968.71");
    }

    #[test]
    fn empty_transcript() {
        let g = parse_callhome("", &CallhomeOptions::default()).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn continuation_lines_fold_into_the_record() {
        let text = "  1.0 2.0 A: he said he\n    couldn't keep up.\n";
        let g = parse_callhome(text, &CallhomeOptions::default()).unwrap();
        let words: Vec<_> = g
            .arcs()
            .filter(|a| a.record.type_tag == "W")
            .map(|a| a.record.label.clone())
            .collect();
        assert_eq!(words, vec!["he", "said", "he", "couldn't", "keep", "up", "."]);
    }

    #[test]
    fn end_before_begin_is_an_error() {
        assert!(matches!(
            parse_callhome("2.0 1.0 A: x\n", &CallhomeOptions::default()),
            Err(FormatError::EndBeforeBegin { .. })
        ));
    }

    #[test]
    fn malformed_record_is_an_error() {
        assert!(matches!(
            parse_callhome("1.0 huh A: x\n", &CallhomeOptions::default()),
            Err(FormatError::MalformedRecord { .. })
        ));
        // continuation with no open record
        assert!(matches!(
            parse_callhome("stray words\n", &CallhomeOptions::default()),
            Err(FormatError::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn join_option_shares_the_boundary_node() {
        let text = "1.0 2.0 A: one\n2.0 3.0 A: two\n";
        let disjoint = parse_callhome(text, &CallhomeOptions::default()).unwrap();
        assert_eq!(disjoint.components().len(), 2);
        let joined = parse_callhome(
            text,
            &CallhomeOptions {
                join_same_speaker: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(joined.components().len(), 1);
        // different speakers never join, equal times or not
        let cross = parse_callhome(
            "1.0 2.0 A: one\n2.0 3.0 B: two\n",
            &CallhomeOptions {
                join_same_speaker: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(cross.components().len(), 2);
    }

    #[test]
    fn ampersand_marked_names_stay_whole() {
        let g = parse_callhome(
            "1.0 2.0 A: degree at &Tufts and all,\n",
            &CallhomeOptions::default(),
        )
        .unwrap();
        assert!(g.arcs().any(|a| a.record.label == "&Tufts"));
        assert!(g.arcs().any(|a| a.record.label == ","));
    }
}
