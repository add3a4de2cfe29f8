// SPDX-License-Identifier: Apache-2.0

//! Runs a [`Script`] against a clock and a key target, recording every
//! action in an [`ExecutionTrace`].
//!
//! With a [`VirtualClock`] a run is a pure function of the script and
//! configuration: the same inputs always give the same trace.

mod clock;
mod trace;

use thiserror::Error;

use crate::keycode::{chord_to_events, KeyChord, KeyEvent, VirtualKey};
use crate::scancode::{encode_event, CodecError};
use crate::script::{validate, ParseIssue, Script, Statement, StatementKind};
use crate::sink::{KeySink, SinkError, WindowService};

pub use clock::{Clock, RealClock, VirtualClock};
pub use trace::{
    hex, parse_hex, replay_check, ExecutionTrace, Outcome, TraceDetail, TraceEntry, TraceKind,
    TraceParseError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("script has {} validation issue(s), first: {}", .0.len(), .0[0])]
    InvalidScript(Vec<ParseIssue>),
    #[error("window not found: {0}")]
    WindowNotFound(String),
    #[error(transparent)]
    Sink(SinkError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    /// An error read back from a persisted trace.
    #[error("{0}")]
    Recorded(String),
}

impl From<SinkError> for ExecError {
    fn from(e: SinkError) -> Self {
        match e {
            SinkError::WindowNotFound(title) => ExecError::WindowNotFound(title),
            other => ExecError::Sink(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecConfig {
    /// Pause between consecutive keystrokes not separated by a `wait`.
    pub inter_key_delay: u64,
    /// Stop a `loop` after this many iterations. `None` runs it forever.
    pub loop_limit: Option<u64>,
}

impl ExecConfig {
    pub const VIRTUAL_DEFAULT_DELAY: u64 = 0;
    pub const REAL_DEFAULT_DELAY: u64 = 20;
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            inter_key_delay: Self::VIRTUAL_DEFAULT_DELAY,
            loop_limit: None,
        }
    }
}

/// Executes `script`. Validation issues, a missing window, or a failing sink
/// abort the run; the trace then ends with an `Error` entry.
pub fn execute<T>(
    script: &Script,
    clock: &mut dyn Clock,
    target: &mut T,
    config: &ExecConfig,
) -> ExecutionTrace
where
    T: WindowService + KeySink + ?Sized,
{
    let mut run = Run {
        script,
        clock,
        target,
        config,
        entries: Vec::new(),
        window: None,
        keys_adjacent: false,
    };
    let issues = validate(script);
    let result = if issues.is_empty() {
        run.block(&script.statements)
    } else {
        Err(ExecError::InvalidScript(issues))
    };
    let outcome = match result {
        Ok(()) => Outcome::Completed,
        Err(err) => {
            let t = run.clock.now();
            run.entries.push(TraceEntry {
                t,
                window: run.window.clone(),
                detail: TraceDetail::Error {
                    message: err.to_string(),
                },
            });
            Outcome::Aborted(err)
        }
    };
    ExecutionTrace {
        entries: run.entries,
        outcome,
    }
}

struct Run<'a, T: ?Sized> {
    script: &'a Script,
    clock: &'a mut dyn Clock,
    target: &'a mut T,
    config: &'a ExecConfig,
    entries: Vec<TraceEntry>,
    window: Option<String>,
    /// The previous action was a keystroke, so the next one is paced.
    keys_adjacent: bool,
}

impl<T: WindowService + KeySink + ?Sized> Run<'_, T> {
    fn record(&mut self, detail: TraceDetail) {
        let t = self.clock.now();
        self.entries.push(TraceEntry {
            t,
            window: self.window.clone(),
            detail,
        });
    }

    fn block(&mut self, statements: &[Statement]) -> Result<(), ExecError> {
        statements.iter().try_for_each(|s| self.statement(&s.kind))
    }

    fn statement(&mut self, kind: &StatementKind) -> Result<(), ExecError> {
        match kind {
            StatementKind::Focus(title) => {
                self.entries.push(TraceEntry {
                    t: self.clock.now(),
                    window: Some(title.clone()),
                    detail: TraceDetail::FocusRequest {
                        title: title.clone(),
                    },
                });
                let handle = self.target.find_window(title)?;
                self.target.focus(handle)?;
                self.window = Some(title.clone());
            }
            StatementKind::Tap(chord) => self.chord(chord)?,
            StatementKind::Keys(text) => {
                for ch in text.chars() {
                    let chord = crate::keycode::chord_for_char(ch)
                        .expect("validated scripts only contain typeable text");
                    self.chord(&chord)?;
                }
            }
            StatementKind::Press(key) => self.single(KeyEvent::press, *key)?,
            StatementKind::Release(key) => self.single(KeyEvent::release, *key)?,
            StatementKind::Wait(spec) => {
                let ms = self
                    .script
                    .duration(spec)
                    .expect("validated scripts only reference declared durations");
                self.record(TraceDetail::WaitStart { ms });
                self.clock.sleep(ms);
                self.record(TraceDetail::WaitEnd { ms });
                self.keys_adjacent = false;
            }
            StatementKind::Repeat { count, body } => {
                for index in 1..=*count {
                    self.record(TraceDetail::CycleStart { index });
                    self.block(body)?;
                }
            }
            StatementKind::Loop(body) => {
                let mut index = 1;
                while self.config.loop_limit.is_none_or(|limit| index <= limit) {
                    self.record(TraceDetail::CycleStart { index });
                    self.block(body)?;
                    index += 1;
                }
            }
        }
        Ok(())
    }

    fn pace(&mut self) {
        if self.keys_adjacent && self.config.inter_key_delay > 0 {
            self.clock.sleep(self.config.inter_key_delay);
        }
        self.keys_adjacent = true;
    }

    fn chord(&mut self, chord: &KeyChord) -> Result<(), ExecError> {
        self.pace();
        for event in chord_to_events(chord, self.clock.now()) {
            self.emit(event)?;
        }
        Ok(())
    }

    fn single(
        &mut self,
        make: fn(VirtualKey, u64) -> KeyEvent,
        key: VirtualKey,
    ) -> Result<(), ExecError> {
        self.pace();
        let event = make(key, self.clock.now());
        self.emit(event)
    }

    /// The sink sees the event before the trace does, so a rejected event
    /// never shows up as emitted.
    fn emit(&mut self, event: KeyEvent) -> Result<(), ExecError> {
        let bytes = encode_event(&event)?;
        self.target.send(&event)?;
        self.entries.push(TraceEntry {
            t: event.t,
            window: self.window.clone(),
            detail: TraceDetail::KeyEmit { event, bytes },
        });
        Ok(())
    }
}
