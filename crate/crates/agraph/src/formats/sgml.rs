//! A minimal tag scanner for the SGML-ish dialects in this corpus.
//!
//! The source formats never need real SGML processing: no DTDs, no
//! catalogs, no marked sections. What they do need is tolerance the XML
//! crates refuse to provide — unquoted attribute values (`Id=utt19`),
//! empty elements written without `/>` (`<begin id=1 time=52.46>`), tags
//! spanning several lines. The scanner produces a flat event stream;
//! structure is each caller's business.

use super::FormatError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// Character data between tags, entity-decoded, with the line it began on.
    Text { text: String, line: usize },
    Tag(Tag),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tag {
    pub name: String,
    pub attrs: Vec<(String, Option<String>)>,
    pub closing: bool,
    pub self_closing: bool,
    pub line: usize,
    /// true when every attribute value was quoted (strict XML style)
    pub quoted_only: bool,
}

impl Tag {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .and_then(|(_, v)| v.as_deref())
    }

    pub fn name_is(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name)
    }
}

fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        let mut replaced = false;
        for (entity, ch) in [
            ("&amp;", '&'),
            ("&lt;", '<'),
            ("&gt;", '>'),
            ("&quot;", '"'),
            ("&apos;", '\''),
        ] {
            if let Some(tail) = rest.strip_prefix(entity) {
                out.push(ch);
                rest = tail;
                replaced = true;
                break;
            }
        }
        if !replaced {
            // unknown entity or bare ampersand: keep it literally
            out.push('&');
            rest = &rest[1..];
        }
    }
    out.push_str(rest);
    out
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.' | b':')
}

/// Scan a document into events. Mechanical errors (tag never closed,
/// value quote never closed) are reported with their line number.
pub fn scan(input: &str) -> Result<Vec<Event>, FormatError> {
    let bytes = input.as_bytes();
    let mut events = Vec::new();
    let mut pos = 0;
    let mut line = 1;

    let count_lines = |s: &str| s.bytes().filter(|b| *b == b'\n').count();

    while pos < bytes.len() {
        if bytes[pos] == b'<' {
            let start_line = line;
            let (tag, end) = scan_tag(input, pos, start_line)?;
            line += count_lines(&input[pos..end]);
            pos = end;
            events.push(Event::Tag(tag));
        } else {
            let next_tag = input[pos..]
                .find('<')
                .map(|off| pos + off)
                .unwrap_or(bytes.len());
            let raw = &input[pos..next_tag];
            if !raw.trim().is_empty() {
                events.push(Event::Text {
                    text: decode_entities(raw),
                    line,
                });
            }
            line += count_lines(raw);
            pos = next_tag;
        }
    }
    Ok(events)
}

fn scan_tag(input: &str, start: usize, line: usize) -> Result<(Tag, usize), FormatError> {
    let bytes = input.as_bytes();
    let mut pos = start + 1; // past '<'
    let closing = bytes.get(pos) == Some(&b'/');
    if closing {
        pos += 1;
    }

    let name_start = pos;
    while pos < bytes.len() && is_name_byte(bytes[pos]) {
        pos += 1;
    }
    let name = input[name_start..pos].to_string();
    if name.is_empty() {
        return Err(FormatError::ParseError {
            line,
            detail: format!("'<' not followed by a tag name near byte {start}"),
        });
    }

    let mut attrs = Vec::new();
    let mut self_closing = false;
    let mut quoted_only = true;
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        match bytes.get(pos) {
            None => {
                return Err(FormatError::ParseError {
                    line,
                    detail: format!("tag <{name} never closed"),
                })
            }
            Some(b'>') => {
                pos += 1;
                break;
            }
            Some(b'/') if bytes.get(pos + 1) == Some(&b'>') => {
                self_closing = true;
                pos += 2;
                break;
            }
            Some(_) => {
                let attr_start = pos;
                while pos < bytes.len() && is_name_byte(bytes[pos]) {
                    pos += 1;
                }
                if pos == attr_start {
                    return Err(FormatError::ParseError {
                        line,
                        detail: format!(
                            "unexpected character {:?} in tag <{name}",
                            input[pos..].chars().next().unwrap_or('?')
                        ),
                    });
                }
                let attr_name = input[attr_start..pos].to_string();
                if bytes.get(pos) == Some(&b'=') {
                    pos += 1;
                    let value = match bytes.get(pos) {
                        Some(&q) if q == b'"' || q == b'\'' => {
                            pos += 1;
                            let val_start = pos;
                            while pos < bytes.len() && bytes[pos] != q {
                                pos += 1;
                            }
                            if pos >= bytes.len() {
                                return Err(FormatError::ParseError {
                                    line,
                                    detail: format!(
                                        "unterminated quoted value for {attr_name} in <{name}"
                                    ),
                                });
                            }
                            let v = decode_entities(&input[val_start..pos]);
                            pos += 1;
                            v
                        }
                        _ => {
                            quoted_only = false;
                            let val_start = pos;
                            while pos < bytes.len()
                                && !bytes[pos].is_ascii_whitespace()
                                && bytes[pos] != b'>'
                            {
                                pos += 1;
                            }
                            decode_entities(&input[val_start..pos])
                        }
                    };
                    attrs.push((attr_name, Some(value)));
                } else {
                    attrs.push((attr_name, None));
                }
            }
        }
    }

    Ok((
        Tag {
            name,
            attrs,
            closing,
            self_closing,
            line,
            quoted_only,
        },
        pos,
    ))
}
