// SPDX-License-Identifier: Apache-2.0

//! The `.vus` keystroke automation language.
//!
//! ```text
//! # one measurement cycle every 12 seconds
//! let T1 = 2s
//! let T0 = 10s
//! window "DAQ"
//! repeat 3 {
//!     keys "M"
//!     tap ENTER
//!     wait T1
//!     keys "S"
//!     tap ENTER
//!     wait T0
//! }
//! ```
//!
//! Statements are one per line; `repeat` and `loop` take a braced block.
//! [`Script`]'s `Display` impl prints canonical source that parses back to an
//! equal AST.

mod lexer;
mod parser;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::keycode::{KeyChord, VirtualKey};

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, resolve_key_name};
pub use validate::validate;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl Default for Pos {
    fn default() -> Self {
        Pos { line: 1, column: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseIssue {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl ParseIssue {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseIssue {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WaitSpec {
    Millis(u64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StatementKind {
    Focus(String),
    Tap(KeyChord),
    Press(VirtualKey),
    Release(VirtualKey),
    Keys(String),
    Wait(WaitSpec),
    Repeat { count: u64, body: Vec<Statement> },
    Loop(Vec<Statement>),
}

/// A statement and where it started in the source.
///
/// Equality ignores the position so that re-parsed pretty-printed output
/// compares equal to the original.
#[derive(Debug, Clone, Eq)]
pub struct Statement {
    pub pos: Pos,
    pub kind: StatementKind,
}

impl Statement {
    pub fn new(kind: StatementKind) -> Self {
        Statement {
            pos: Pos::default(),
            kind,
        }
    }

    pub fn at(pos: Pos, kind: StatementKind) -> Self {
        Statement { pos, kind }
    }
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Hash for Statement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl From<StatementKind> for Statement {
    fn from(kind: StatementKind) -> Self {
        Statement::new(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
    pub durations: BTreeMap<String, u64>,
}

impl Script {
    pub fn duration(&self, wait: &WaitSpec) -> Option<u64> {
        match wait {
            WaitSpec::Millis(ms) => Some(*ms),
            WaitSpec::Named(name) => self.durations.get(name).copied(),
        }
    }
}

/// Number of acquisition cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cycles {
    Count(u64),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("T1 must be positive")]
    ZeroMeasureInterval,
    #[error("cycle count must be at least 1")]
    ZeroCycles,
}

/// Parameters of the canonical acquisition program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcquisitionPlan {
    pub window: String,
    pub measure_keys: String,
    pub save_keys: String,
    /// Measurement time between the measure and save sequences.
    pub t1: u64,
    /// Idle time after each save.
    pub t0: u64,
    pub cycles: Cycles,
}

impl Default for AcquisitionPlan {
    fn default() -> Self {
        AcquisitionPlan {
            window: "DAQ".into(),
            measure_keys: "M".into(),
            save_keys: "S".into(),
            t1: 2000,
            t0: 10_000,
            cycles: Cycles::Count(3),
        }
    }
}

impl AcquisitionPlan {
    pub fn to_script(&self) -> Result<Script, ScriptError> {
        acquisition_script(
            &self.window,
            &self.measure_keys,
            &self.save_keys,
            self.t1,
            self.t0,
            self.cycles,
        )
    }
}

/// Builds the measure / wait T1 / save / wait T0 acquisition loop.
///
/// The window is focused once, before the first cycle. `T1` starts after the
/// last measurement keystroke.
pub fn acquisition_script(
    window: &str,
    measure_keys: &str,
    save_keys: &str,
    t1: u64,
    t0: u64,
    cycles: Cycles,
) -> Result<Script, ScriptError> {
    if t1 == 0 {
        return Err(ScriptError::ZeroMeasureInterval);
    }
    let enter = KeyChord::plain(VirtualKey::RETURN);
    let body: Vec<Statement> = vec![
        StatementKind::Keys(measure_keys.to_string()).into(),
        StatementKind::Tap(enter.clone()).into(),
        StatementKind::Wait(WaitSpec::Named("T1".into())).into(),
        StatementKind::Keys(save_keys.to_string()).into(),
        StatementKind::Tap(enter).into(),
        StatementKind::Wait(WaitSpec::Named("T0".into())).into(),
    ];
    let block = match cycles {
        Cycles::Count(0) => return Err(ScriptError::ZeroCycles),
        Cycles::Count(count) => StatementKind::Repeat { count, body },
        Cycles::Unbounded => StatementKind::Loop(body),
    };
    let mut durations = BTreeMap::new();
    durations.insert("T1".to_string(), t1);
    durations.insert("T0".to_string(), t0);
    Ok(Script {
        statements: vec![
            StatementKind::Focus(window.to_string()).into(),
            block.into(),
        ],
        durations,
    })
}

/// Formats a duration with the largest unit that divides it exactly.
pub fn format_duration(ms: u64) -> String {
    if ms != 0 && ms.is_multiple_of(60_000) {
        format!("{}m", ms / 60_000)
    } else if ms != 0 && ms.is_multiple_of(1000) {
        format!("{}s", ms / 1000)
    } else {
        format!("{ms}ms")
    }
}

/// Parses a duration literal (`250ms`, `2s`, `5m`); a bare integer is taken
/// as milliseconds.
pub fn parse_duration(text: &str) -> Option<u64> {
    let split = text
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(text.len());
    let (digits, unit) = text.split_at(split);
    if digits.is_empty() {
        return None;
    }
    let n: u64 = digits.parse().ok()?;
    let scale = match unit {
        "" | "ms" => 1,
        "s" => 1000,
        "m" => 60_000,
        _ => return None,
    };
    n.checked_mul(scale)
}

pub(crate) fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_block(f: &mut fmt::Formatter<'_>, statements: &[Statement], depth: usize) -> fmt::Result {
    for stmt in statements {
        let indent = "    ".repeat(depth);
        match &stmt.kind {
            StatementKind::Focus(title) => writeln!(f, "{indent}window {}", quote(title))?,
            StatementKind::Tap(chord) => writeln!(f, "{indent}tap {chord}")?,
            StatementKind::Press(key) => writeln!(f, "{indent}press {key}")?,
            StatementKind::Release(key) => writeln!(f, "{indent}release {key}")?,
            StatementKind::Keys(text) => writeln!(f, "{indent}keys {}", quote(text))?,
            StatementKind::Wait(WaitSpec::Millis(ms)) => {
                writeln!(f, "{indent}wait {}", format_duration(*ms))?
            }
            StatementKind::Wait(WaitSpec::Named(name)) => writeln!(f, "{indent}wait {name}")?,
            StatementKind::Repeat { count, body } => {
                writeln!(f, "{indent}repeat {count} {{")?;
                write_block(f, body, depth + 1)?;
                writeln!(f, "{indent}}}")?;
            }
            StatementKind::Loop(body) => {
                writeln!(f, "{indent}loop {{")?;
                write_block(f, body, depth + 1)?;
                writeln!(f, "{indent}}}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ms) in &self.durations {
            writeln!(f, "let {name} = {}", format_duration(*ms))?;
        }
        write_block(f, &self.statements, 0)
    }
}
