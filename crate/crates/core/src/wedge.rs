// SPDX-License-Identifier: Apache-2.0

//! Keyboard-wedge bridge: turns delimited device records (barcode reads,
//! scale weights) and controller buttons into keystrokes.
//!
//! [`OutputForm::ScanBytes`] models a hardware wedge that puts Set 2 scan
//! codes on the keyboard port; [`OutputForm::KeyEvents`] models a software
//! wedge handing key events straight to the application.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Read, Write};
use std::net::TcpListener;
use std::path::PathBuf;

use log::warn;
use thiserror::Error;

use crate::keycode::{
    chord_to_events, chords_for_text, Action, KeyChord, KeyError, KeyEvent, VirtualKey,
};
use crate::scancode::{decode_all, encode_events, CodecError, DecodeError};
use crate::scheduler::hex;
use crate::sink::{KeySink, SinkError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WedgeError {
    #[error("record longer than {limit} bytes")]
    RecordTooLong { limit: usize },
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("button {0} is not mapped")]
    UnmappedButton(u32),
    #[error(transparent)]
    Sink(#[from] SinkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputForm {
    #[default]
    KeyEvents,
    ScanBytes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeConfig {
    pub delimiter: u8,
    /// Chord typed after every record.
    pub terminator: KeyChord,
    pub max_record_len: usize,
    pub output: OutputForm,
}

impl Default for WedgeConfig {
    fn default() -> Self {
        WedgeConfig {
            delimiter: b'\r',
            terminator: KeyChord::plain(VirtualKey::RETURN),
            max_record_len: 256,
            output: OutputForm::KeyEvents,
        }
    }
}

/// Partial record carried between [`frame`] calls.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameState {
    buf: Vec<u8>,
    /// Skipping the rest of an over-long record up to its delimiter.
    discarding: bool,
}

impl FrameState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pending(&self) -> &[u8] {
        &self.buf
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty() && !self.discarding
    }
}

/// Splits `input` into delimiter-terminated records (delimiter dropped).
///
/// A record growing past `max_record_len` yields one `RecordTooLong`; its
/// bytes are skipped up to the next delimiter. Output does not depend on how
/// the stream is chunked.
pub fn frame(
    state: &mut FrameState,
    input: &[u8],
    cfg: &WedgeConfig,
) -> Vec<Result<Vec<u8>, WedgeError>> {
    let mut out = Vec::new();
    for &b in input {
        if b == cfg.delimiter {
            if !std::mem::take(&mut state.discarding) {
                out.push(Ok(std::mem::take(&mut state.buf)));
            }
        } else if state.discarding {
            continue;
        } else if state.buf.len() >= cfg.max_record_len {
            state.buf.clear();
            state.discarding = true;
            out.push(Err(WedgeError::RecordTooLong {
                limit: cfg.max_record_len,
            }));
        } else {
            state.buf.push(b);
        }
    }
    out
}

/// Chords typed for one record: its text under the US layout, then the
/// terminator. Only printable ASCII is accepted.
pub fn record_to_chords(record: &[u8], cfg: &WedgeConfig) -> Result<Vec<KeyChord>, WedgeError> {
    if let Some(position) = record.iter().position(|b| !(0x20..=0x7E).contains(b)) {
        let ch = record[position] as char;
        return Err(KeyError::UnmappableCharacter { ch, position }.into());
    }
    let text: String = record.iter().map(|&b| b as char).collect();
    let mut chords = chords_for_text(&text)?;
    chords.push(cfg.terminator.clone());
    Ok(chords)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WedgeOutput {
    Events(Vec<KeyEvent>),
    Bytes(Vec<u8>),
}

/// Translates one record into key events (stamped `t`) or scan bytes,
/// depending on `cfg.output`.
pub fn record_to_keys(record: &[u8], cfg: &WedgeConfig, t: u64) -> Result<WedgeOutput, WedgeError> {
    let events: Vec<KeyEvent> = record_to_chords(record, cfg)?
        .iter()
        .flat_map(|c| chord_to_events(c, t))
        .collect();
    Ok(match cfg.output {
        OutputForm::KeyEvents => WedgeOutput::Events(events),
        OutputForm::ScanBytes => WedgeOutput::Bytes(encode_events(&events)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ButtonEvent {
    pub button: u32,
    pub action: Action,
}

/// Controller button -> chord table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ButtonMapping {
    map: BTreeMap<u32, KeyChord>,
}

impl ButtonMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, button: u32, chord: KeyChord) -> &mut Self {
        self.map.insert(button, chord);
        self
    }

    pub fn get(&self, button: u32) -> Option<&KeyChord> {
        self.map.get(&button)
    }
}

/// A button press presses its chord, a release releases it, so holding the
/// button holds the keys.
pub fn remap_button(
    event: ButtonEvent,
    mapping: &ButtonMapping,
    t: u64,
) -> Result<Vec<KeyEvent>, WedgeError> {
    let chord = mapping
        .get(event.button)
        .ok_or(WedgeError::UnmappedButton(event.button))?;
    Ok(match event.action {
        Action::Press => chord.press_events(t),
        Action::Release => chord.release_events(t),
    })
}

/// Receives translated records from [`serve`].
pub trait WedgeSink {
    fn deliver(&mut self, output: WedgeOutput) -> Result<(), WedgeError>;
}

impl WedgeSink for Vec<WedgeOutput> {
    fn deliver(&mut self, output: WedgeOutput) -> Result<(), WedgeError> {
        self.push(output);
        Ok(())
    }
}

/// Feeds records into a [`KeySink`]. Scan bytes are decoded first, as a
/// host keyboard controller would.
pub struct KeySinkWedge<K>(pub K);

impl<K: KeySink> WedgeSink for KeySinkWedge<K> {
    fn deliver(&mut self, output: WedgeOutput) -> Result<(), WedgeError> {
        let events = match output {
            WedgeOutput::Events(events) => events,
            WedgeOutput::Bytes(bytes) => decode_all(&bytes)?
                .into_iter()
                .map(|s| KeyEvent {
                    key: s.key,
                    action: s.action,
                    t: 0,
                })
                .collect(),
        };
        for e in &events {
            self.0.send(e)?;
        }
        Ok(())
    }
}

/// Writes each record's scan codes as one line of hex.
pub struct HexLines<W>(pub W);

impl<W: Write> WedgeSink for HexLines<W> {
    fn deliver(&mut self, output: WedgeOutput) -> Result<(), WedgeError> {
        let bytes = match output {
            WedgeOutput::Bytes(bytes) => bytes,
            WedgeOutput::Events(events) => encode_events(&events)?,
        };
        writeln!(self.0, "{}", hex(&bytes))
            .and_then(|_| self.0.flush())
            .map_err(|e| SinkError::Other(e.to_string()).into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ServeSummary {
    pub records: u64,
    pub errors: u64,
}

impl fmt::Display for ServeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "records={} errors={}", self.records, self.errors)
    }
}

#[derive(Debug, Error)]
#[error("endpoint read failed after {summary}: {source}")]
pub struct ServeError {
    pub summary: ServeSummary,
    #[source]
    pub source: io::Error,
}

/// Pumps `endpoint` to end of stream through frame -> translate -> sink.
///
/// Per-record failures (over-long, untypeable, rejected by the sink) are
/// counted and logged. An unterminated tail at end of stream is counted as
/// an error and not delivered. Events are stamped `t = 0`.
pub fn serve<R: Read, S: WedgeSink + ?Sized>(
    mut endpoint: R,
    cfg: &WedgeConfig,
    sink: &mut S,
) -> Result<ServeSummary, ServeError> {
    let mut summary = ServeSummary::default();
    let mut state = FrameState::new();
    let mut chunk = [0u8; 4096];
    loop {
        let n = match endpoint.read(&mut chunk) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(source) => return Err(ServeError { summary, source }),
        };
        for item in frame(&mut state, &chunk[..n], cfg) {
            summary.records += 1;
            let result = item
                .and_then(|record| record_to_keys(&record, cfg, 0))
                .and_then(|out| sink.deliver(out));
            if let Err(e) = result {
                summary.errors += 1;
                warn!("record {}: {e}", summary.records);
            }
        }
    }
    if !state.is_empty() {
        summary.errors += 1;
        warn!(
            "discarding {} bytes of unterminated record at end of stream",
            state.pending().len()
        );
    }
    Ok(summary)
}

/// Where wedge input comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Stdin,
    File(PathBuf),
    /// Listen address; one connection is accepted per run.
    Tcp(String),
}

impl Endpoint {
    /// `-` is standard input, `tcp://host:port` a listen address, anything
    /// else a file path.
    pub fn parse(spec: &str) -> Endpoint {
        if spec == "-" {
            Endpoint::Stdin
        } else if let Some(addr) = spec.strip_prefix("tcp://") {
            Endpoint::Tcp(addr.to_string())
        } else {
            Endpoint::File(PathBuf::from(spec))
        }
    }

    pub fn open(&self) -> io::Result<Box<dyn Read + Send>> {
        match self {
            Endpoint::Stdin => Ok(Box::new(io::stdin())),
            Endpoint::File(path) => Ok(Box::new(std::fs::File::open(path)?)),
            Endpoint::Tcp(addr) => {
                let listener = TcpListener::bind(addr.as_str())?;
                Ok(Box::new(accept_one(&listener)?))
            }
        }
    }
}

pub fn accept_one(listener: &TcpListener) -> io::Result<std::net::TcpStream> {
    let (stream, peer) = listener.accept()?;
    log::info!("wedge connection from {peer}");
    Ok(stream)
}
