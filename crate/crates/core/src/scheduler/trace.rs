// SPDX-License-Identifier: Apache-2.0

//! Execution traces and their tab-separated file form.
//!
//! One entry per line, six tab-separated columns:
//!
//! ```text
//! t_ms  kind  window  vk_name  action  scancode_hex
//! ```
//!
//! `-` marks an empty column. For `KeyEmit` the action column holds `press`
//! or `release` and the last column the encoded bytes (`E0 F0 6B`). Other
//! kinds carry their detail in the action column: the wait length in ms for
//! `WaitStart`/`WaitEnd`, the 1-based iteration for `CycleStart` and the
//! message for `Error`. Backslash, tab, CR and LF inside text are escaped as
//! `\\`, `\t`, `\r`, `\n`; a text field that is literally `-` is written `\-`.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::keycode::{Action, KeyEvent, VirtualKey};

use super::ExecError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    FocusRequest,
    KeyEmit,
    WaitStart,
    WaitEnd,
    CycleStart,
    Error,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::FocusRequest => "FocusRequest",
            TraceKind::KeyEmit => "KeyEmit",
            TraceKind::WaitStart => "WaitStart",
            TraceKind::WaitEnd => "WaitEnd",
            TraceKind::CycleStart => "CycleStart",
            TraceKind::Error => "Error",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraceKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "FocusRequest" => TraceKind::FocusRequest,
            "KeyEmit" => TraceKind::KeyEmit,
            "WaitStart" => TraceKind::WaitStart,
            "WaitEnd" => TraceKind::WaitEnd,
            "CycleStart" => TraceKind::CycleStart,
            "Error" => TraceKind::Error,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceDetail {
    FocusRequest { title: String },
    KeyEmit { event: KeyEvent, bytes: Vec<u8> },
    WaitStart { ms: u64 },
    WaitEnd { ms: u64 },
    CycleStart { index: u64 },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub t: u64,
    /// Focused window title when the entry was recorded; for
    /// `FocusRequest`, the requested title.
    pub window: Option<String>,
    pub detail: TraceDetail,
}

impl TraceEntry {
    pub fn kind(&self) -> TraceKind {
        match self.detail {
            TraceDetail::FocusRequest { .. } => TraceKind::FocusRequest,
            TraceDetail::KeyEmit { .. } => TraceKind::KeyEmit,
            TraceDetail::WaitStart { .. } => TraceKind::WaitStart,
            TraceDetail::WaitEnd { .. } => TraceKind::WaitEnd,
            TraceDetail::CycleStart { .. } => TraceKind::CycleStart,
            TraceDetail::Error { .. } => TraceKind::Error,
        }
    }

    pub fn key_event(&self) -> Option<&KeyEvent> {
        match &self.detail {
            TraceDetail::KeyEmit { event, .. } => Some(event),
            _ => None,
        }
    }

    /// The six columns of this entry's line, unescaped.
    fn columns(&self) -> [Option<String>; 4] {
        let window = self.window.clone();
        match &self.detail {
            TraceDetail::FocusRequest { .. } => [window, None, None, None],
            TraceDetail::KeyEmit { event, bytes } => [
                window,
                Some(event.key.name().to_string()),
                Some(event.action.as_str().to_string()),
                Some(hex(bytes)),
            ],
            TraceDetail::WaitStart { ms } | TraceDetail::WaitEnd { ms } => {
                [window, None, Some(ms.to_string()), None]
            }
            TraceDetail::CycleStart { index } => [window, None, Some(index.to_string()), None],
            TraceDetail::Error { message } => [window, None, Some(message.clone()), None],
        }
    }

    pub fn to_line(&self) -> String {
        let cols = self.columns();
        let mut line = format!("{}\t{}", self.t, self.kind());
        for col in &cols {
            line.push('\t');
            line.push_str(&escape(col.as_deref()));
        }
        line
    }

    pub fn from_line(line: &str) -> Result<Self, TraceParseError> {
        let err = |what: &str| TraceParseError::Malformed(format!("{what} in {line:?}"));
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(err("expected 6 columns"));
        }
        let t: u64 = fields[0].parse().map_err(|_| err("bad timestamp"))?;
        let kind: TraceKind = fields[1].parse().map_err(|_| err("bad kind"))?;
        let window = unescape(fields[2]).map_err(|_| err("bad window"))?;
        let vk = unescape(fields[3]).map_err(|_| err("bad key"))?;
        let action = unescape(fields[4]).map_err(|_| err("bad action"))?;
        let bytes = unescape(fields[5]).map_err(|_| err("bad bytes"))?;
        let number = |s: Option<String>| -> Result<u64, TraceParseError> {
            s.as_deref()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad number"))
        };
        let detail = match kind {
            TraceKind::FocusRequest => TraceDetail::FocusRequest {
                title: window.clone().ok_or_else(|| err("missing window"))?,
            },
            TraceKind::KeyEmit => {
                let key = vk
                    .as_deref()
                    .and_then(|n| VirtualKey::from_name(n).ok())
                    .ok_or_else(|| err("bad key"))?;
                let action = match action.as_deref() {
                    Some("press") => Action::Press,
                    Some("release") => Action::Release,
                    _ => return Err(err("bad action")),
                };
                let bytes = bytes
                    .as_deref()
                    .map(parse_hex)
                    .transpose()
                    .map_err(|_| err("bad hex"))?
                    .ok_or_else(|| err("missing bytes"))?;
                TraceDetail::KeyEmit {
                    event: KeyEvent { key, action, t },
                    bytes,
                }
            }
            TraceKind::WaitStart => TraceDetail::WaitStart {
                ms: number(action)?,
            },
            TraceKind::WaitEnd => TraceDetail::WaitEnd {
                ms: number(action)?,
            },
            TraceKind::CycleStart => TraceDetail::CycleStart {
                index: number(action)?,
            },
            TraceKind::Error => TraceDetail::Error {
                message: action.unwrap_or_default(),
            },
        };
        Ok(TraceEntry { t, window, detail })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    Aborted(ExecError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub entries: Vec<TraceEntry>,
    pub outcome: Outcome,
}

#[derive(Debug, Error)]
pub enum TraceParseError {
    #[error("malformed trace line: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ExecutionTrace {
    pub fn is_completed(&self) -> bool {
        self.outcome == Outcome::Completed
    }

    pub fn of_kind(&self, kind: TraceKind) -> impl Iterator<Item = &TraceEntry> {
        self.entries.iter().filter(move |e| e.kind() == kind)
    }

    pub fn key_events(&self) -> impl Iterator<Item = &KeyEvent> {
        self.entries.iter().filter_map(TraceEntry::key_event)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for entry in &self.entries {
            writeln!(out, "{}", entry.to_line())?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = Vec::new();
        self.write_tsv(&mut out)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("trace lines are UTF-8")
    }

    /// Reads a trace file. A trace whose last entry is an `Error` reads back
    /// as aborted with that entry's message.
    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self, TraceParseError> {
        let mut entries = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            entries.push(TraceEntry::from_line(&line)?);
        }
        let outcome = match entries.last().map(|e| &e.detail) {
            Some(TraceDetail::Error { message }) => {
                Outcome::Aborted(ExecError::Recorded(message.clone()))
            }
            _ => Outcome::Completed,
        };
        Ok(ExecutionTrace { entries, outcome })
    }
}

/// True iff both traces hold the same entries, field for field.
pub fn replay_check(a: &ExecutionTrace, b: &ExecutionTrace) -> bool {
    a.entries == b.entries
}

pub fn hex(bytes: &[u8]) -> String {
    bytes
        .iter()
        .map(|b| format!("{b:02X}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses whitespace-separated hex byte pairs such as `E0 F0 6B`.
pub fn parse_hex(text: &str) -> Result<Vec<u8>, String> {
    text.split_whitespace()
        .map(|tok| {
            let tok = tok
                .strip_prefix("0x")
                .or_else(|| tok.strip_prefix("0X"))
                .unwrap_or(tok);
            if tok.len() > 2 {
                return Err(format!("`{tok}` is not a single byte"));
            }
            u8::from_str_radix(tok, 16).map_err(|_| format!("`{tok}` is not a hex byte"))
        })
        .collect()
}

fn escape(field: Option<&str>) -> String {
    let Some(text) = field else {
        return "-".to_string();
    };
    if text == "-" {
        return "\\-".to_string();
    }
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(field: &str) -> Result<Option<String>, ()> {
    if field == "-" {
        return Ok(None);
    }
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('-') => out.push('-'),
            _ => return Err(()),
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key_entry(t: u64, action: Action) -> TraceEntry {
        let key = VirtualKey::from_name("VK_LEFT").unwrap();
        let bytes = match action {
            Action::Press => vec![0xE0, 0x6B],
            Action::Release => vec![0xE0, 0xF0, 0x6B],
        };
        TraceEntry {
            t,
            window: Some("DAQ".into()),
            detail: TraceDetail::KeyEmit {
                event: KeyEvent { key, action, t },
                bytes,
            },
        }
    }

    #[test]
    fn key_emit_line_format() {
        assert_eq!(
            key_entry(14000, Action::Release).to_line(),
            "14000\tKeyEmit\tDAQ\tVK_LEFT\trelease\tE0 F0 6B"
        );
    }

    #[test]
    fn other_kinds_line_format() {
        let wait = TraceEntry {
            t: 0,
            window: None,
            detail: TraceDetail::WaitStart { ms: 2000 },
        };
        assert_eq!(wait.to_line(), "0\tWaitStart\t-\t-\t2000\t-");
        let err = TraceEntry {
            t: 5,
            window: Some("-".into()),
            detail: TraceDetail::Error {
                message: "bad\tthing\n".into(),
            },
        };
        assert_eq!(err.to_line(), "5\tError\t\\-\t-\tbad\\tthing\\n\t-");
        assert_eq!(TraceEntry::from_line(&err.to_line()).unwrap(), err);
    }

    #[test]
    fn replay_check_compares_fields() {
        let a = ExecutionTrace {
            entries: vec![key_entry(0, Action::Press), key_entry(0, Action::Release)],
            outcome: Outcome::Completed,
        };
        assert!(replay_check(&a, &a));
        let mut b = a.clone();
        b.entries[1] = key_entry(1, Action::Release);
        assert!(!replay_check(&a, &b));
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(TraceEntry::from_line("x\tKeyEmit\t-\t-\t-\t-").is_err());
        assert!(TraceEntry::from_line("0\tBogus\t-\t-\t-\t-").is_err());
        assert!(TraceEntry::from_line("0\tKeyEmit\tDAQ\tVK_A\tpress").is_err());
        assert!(TraceEntry::from_line("0\tWaitEnd\t-\t-\tsoon\t-").is_err());
    }

    #[test]
    fn hex_helpers() {
        assert_eq!(hex(&[0x1C, 0xF0, 0x1C]), "1C F0 1C");
        assert_eq!(parse_hex("1c f0 0x1C").unwrap(), vec![0x1C, 0xF0, 0x1C]);
        assert!(parse_hex("1C0").is_err());
        assert!(parse_hex("GG").is_err());
    }

    fn entry_strategy() -> impl Strategy<Value = TraceEntry> {
        let text = "[ -~\t\n\\\\-]{0,12}";
        let window = proptest::option::of(text);
        let detail = prop_oneof![
            text.prop_map(|title| TraceDetail::FocusRequest { title }),
            any::<u64>().prop_map(|ms| TraceDetail::WaitStart { ms }),
            any::<u64>().prop_map(|ms| TraceDetail::WaitEnd { ms }),
            any::<u64>().prop_map(|index| TraceDetail::CycleStart { index }),
            text.prop_map(|message| TraceDetail::Error { message }),
            Just(TraceDetail::KeyEmit {
                event: KeyEvent::press(VirtualKey::SPACE, 0),
                bytes: vec![0x29],
            }),
        ];
        (any::<u32>(), window, detail).prop_map(|(t, window, detail)| {
            let t = u64::from(t);
            let detail = match detail {
                TraceDetail::KeyEmit { mut event, bytes } => {
                    event.t = t;
                    TraceDetail::KeyEmit { event, bytes }
                }
                TraceDetail::FocusRequest { title } => {
                    return TraceEntry {
                        t,
                        window: Some(title.clone()),
                        detail: TraceDetail::FocusRequest { title },
                    };
                }
                d => d,
            };
            TraceEntry { t, window, detail }
        })
    }

    proptest! {
        #[test]
        fn tsv_lines_round_trip(entry in entry_strategy()) {
            let line = entry.to_line();
            prop_assert!(!line.contains('\n'));
            prop_assert_eq!(TraceEntry::from_line(&line).unwrap(), entry);
        }
    }
}
