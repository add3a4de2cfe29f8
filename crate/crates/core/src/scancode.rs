// SPDX-License-Identifier: Apache-2.0

//! Scan Code Set 2 encoder, incremental decoder and typematic expander.
//!
//! Base keys make with a single byte and break with `F0 <make>`. Extended
//! keys make with `E0 <code>` and break with `E0 F0 <code>`. Pause and
//! Print Screen use longer sequences and are not part of the table.

use std::fmt;

use thiserror::Error;

use crate::keycode::{Action, KeyEvent, Stroke, VirtualKey};

pub const EXTENDED_PREFIX: u8 = 0xE0;
pub const BREAK_PREFIX: u8 = 0xF0;

/// Set 2 make code of one virtual key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanCodeEntry {
    pub key: VirtualKey,
    pub code: u8,
    pub extended: bool,
}

impl ScanCodeEntry {
    pub fn make(&self) -> Vec<u8> {
        if self.extended {
            vec![EXTENDED_PREFIX, self.code]
        } else {
            vec![self.code]
        }
    }

    pub fn break_code(&self) -> Vec<u8> {
        if self.extended {
            vec![EXTENDED_PREFIX, BREAK_PREFIX, self.code]
        } else {
            vec![BREAK_PREFIX, self.code]
        }
    }
}

// (virtual key code, set 2 code, extended)
const SCAN_TABLE: &[(u8, u8, bool)] = &[
    (0x08, 0x66, false), // backspace
    (0x09, 0x0D, false), // tab
    (0x0D, 0x5A, false), // enter
    (0x10, 0x12, false), // left shift
    (0x11, 0x14, false), // left ctrl
    (0x12, 0x11, false), // left alt
    (0x14, 0x58, false), // caps lock
    (0x1B, 0x76, false), // esc
    (0x20, 0x29, false), // space
    (0x21, 0x7D, true),  // page up
    (0x22, 0x7A, true),  // page down
    (0x23, 0x69, true),  // end
    (0x24, 0x6C, true),  // home
    (0x25, 0x6B, true),  // left arrow
    (0x26, 0x75, true),  // up arrow
    (0x27, 0x74, true),  // right arrow
    (0x28, 0x72, true),  // down arrow
    (0x2D, 0x70, true),  // insert
    (0x2E, 0x71, true),  // delete
    (0x30, 0x45, false),
    (0x31, 0x16, false),
    (0x32, 0x1E, false),
    (0x33, 0x26, false),
    (0x34, 0x25, false),
    (0x35, 0x2E, false),
    (0x36, 0x36, false),
    (0x37, 0x3D, false),
    (0x38, 0x3E, false),
    (0x39, 0x46, false),
    (0x41, 0x1C, false),
    (0x42, 0x32, false),
    (0x43, 0x21, false),
    (0x44, 0x23, false),
    (0x45, 0x24, false),
    (0x46, 0x2B, false),
    (0x47, 0x34, false),
    (0x48, 0x33, false),
    (0x49, 0x43, false),
    (0x4A, 0x3B, false),
    (0x4B, 0x42, false),
    (0x4C, 0x4B, false),
    (0x4D, 0x3A, false),
    (0x4E, 0x31, false),
    (0x4F, 0x44, false),
    (0x50, 0x4D, false),
    (0x51, 0x15, false),
    (0x52, 0x2D, false),
    (0x53, 0x1B, false),
    (0x54, 0x2C, false),
    (0x55, 0x3C, false),
    (0x56, 0x2A, false),
    (0x57, 0x1D, false),
    (0x58, 0x22, false),
    (0x59, 0x35, false),
    (0x5A, 0x1A, false),
    (0x70, 0x05, false), // F1
    (0x71, 0x06, false),
    (0x72, 0x04, false),
    (0x73, 0x0C, false),
    (0x74, 0x03, false),
    (0x75, 0x0B, false),
    (0x76, 0x83, false), // F7
    (0x77, 0x0A, false),
    (0x78, 0x01, false),
    (0x79, 0x09, false),
    (0x7A, 0x78, false),
    (0x7B, 0x07, false), // F12
    (0x90, 0x77, false), // num lock
    (0x91, 0x7E, false), // scroll lock
    (0xBA, 0x4C, false), // ; :
    (0xBB, 0x55, false), // = +
    (0xBC, 0x41, false), // , <
    (0xBD, 0x4E, false), // - _
    (0xBE, 0x49, false), // . >
    (0xBF, 0x4A, false), // / ?
    (0xC0, 0x0E, false), // ` ~
    (0xDB, 0x54, false), // [ {
    (0xDC, 0x5D, false), // \ |
    (0xDD, 0x5B, false), // ] }
    (0xDE, 0x52, false), // ' "
];

struct Tables {
    /// virtual key code -> (set 2 code, extended)
    by_vk: [Option<(u8, bool)>; 256],
    /// set 2 code -> virtual key code, base keys
    base: [Option<u8>; 256],
    /// set 2 code -> virtual key code, E0-prefixed keys
    extended: [Option<u8>; 256],
}

// Evaluated at compile time: duplicate make sequences or a make byte that
// collides with a prefix would break prefix-freedom and fail the build.
const fn build_tables() -> Tables {
    let mut t = Tables {
        by_vk: [None; 256],
        base: [None; 256],
        extended: [None; 256],
    };
    let mut i = 0;
    while i < SCAN_TABLE.len() {
        let (vk, code, ext) = SCAN_TABLE[i];
        assert!(
            code != EXTENDED_PREFIX && code != BREAK_PREFIX,
            "make byte collides with a prefix"
        );
        assert!(t.by_vk[vk as usize].is_none(), "virtual key mapped twice");
        t.by_vk[vk as usize] = Some((code, ext));
        if ext {
            assert!(
                t.extended[code as usize].is_none(),
                "duplicate extended make sequence"
            );
            t.extended[code as usize] = Some(vk);
        } else {
            assert!(t.base[code as usize].is_none(), "duplicate make sequence");
            t.base[code as usize] = Some(vk);
        }
        i += 1;
    }
    t
}

static TABLES: Tables = build_tables();

pub fn scan_code(key: VirtualKey) -> Option<ScanCodeEntry> {
    TABLES.by_vk[key.code() as usize].map(|(code, extended)| ScanCodeEntry {
        key,
        code,
        extended,
    })
}

/// All table entries in virtual key order.
pub fn scan_table() -> impl Iterator<Item = ScanCodeEntry> {
    VirtualKey::all().filter_map(scan_code)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("no Set 2 scan code for {0}")]
    NoScanCode(VirtualKey),
}

pub fn encode_event(e: &KeyEvent) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::with_capacity(3);
    encode_into(e.key, e.action, &mut out)?;
    Ok(out)
}

pub fn encode_into(key: VirtualKey, action: Action, out: &mut Vec<u8>) -> Result<(), CodecError> {
    let entry = scan_code(key).ok_or(CodecError::NoScanCode(key))?;
    if entry.extended {
        out.push(EXTENDED_PREFIX);
    }
    if action == Action::Release {
        out.push(BREAK_PREFIX);
    }
    out.push(entry.code);
    Ok(())
}

pub fn encode_events<'a>(
    events: impl IntoIterator<Item = &'a KeyEvent>,
) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::new();
    for e in events {
        encode_into(e.key, e.action, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("unexpected byte {byte:02X} at offset {offset}")]
    UnexpectedByte { byte: u8, offset: u64 },
    #[error("incomplete sequence at offset {offset}")]
    Incomplete { offset: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Pending {
    #[default]
    Empty,
    Extended,
    Break,
    ExtendedBreak,
}

/// Incremental decoder state. Holds at most the `E0`/`F0` prefixes of an
/// unfinished sequence plus the absolute stream offset.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct DecoderState {
    pending: Pending,
    offset: u64,
    pending_start: u64,
}

impl fmt::Debug for DecoderState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoderState")
            .field("pending", &self.pending_bytes())
            .field("offset", &self.offset)
            .finish()
    }
}

impl DecoderState {
    pub fn new() -> Self {
        Self::default()
    }

    /// The buffered prefix bytes.
    pub fn pending_bytes(&self) -> &'static [u8] {
        match self.pending {
            Pending::Empty => &[],
            Pending::Extended => &[EXTENDED_PREFIX],
            Pending::Break => &[BREAK_PREFIX],
            Pending::ExtendedBreak => &[EXTENDED_PREFIX, BREAK_PREFIX],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pending == Pending::Empty
    }

    /// Number of bytes consumed over the lifetime of this state.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Decodes `input`, appending complete strokes to `out`.
    ///
    /// On an invalid byte the pending prefix is dropped, strokes decoded
    /// before it stay in `out`, and the rest of `input` is not consumed.
    pub fn feed(&mut self, input: &[u8], out: &mut Vec<Stroke>) -> Result<(), DecodeError> {
        for &byte in input {
            let offset = self.offset;
            self.offset += 1;
            if self.pending == Pending::Empty {
                self.pending_start = offset;
            }
            let next = match (self.pending, byte) {
                (Pending::Empty, EXTENDED_PREFIX) => Some(Pending::Extended),
                (Pending::Empty, BREAK_PREFIX) => Some(Pending::Break),
                (Pending::Extended, BREAK_PREFIX) => Some(Pending::ExtendedBreak),
                _ => None,
            };
            if let Some(next) = next {
                self.pending = next;
                continue;
            }
            let (table, action) = match self.pending {
                Pending::Empty => (&TABLES.base, Action::Press),
                Pending::Break => (&TABLES.base, Action::Release),
                Pending::Extended => (&TABLES.extended, Action::Press),
                Pending::ExtendedBreak => (&TABLES.extended, Action::Release),
            };
            self.pending = Pending::Empty;
            match table[byte as usize] {
                Some(vk) => {
                    let key = VirtualKey::from_code(vk).expect("scan table only holds table keys");
                    out.push(Stroke { key, action });
                }
                None => return Err(DecodeError::UnexpectedByte { byte, offset }),
            }
        }
        Ok(())
    }

    /// Errors if the stream ended in the middle of a sequence.
    pub fn finish(&self) -> Result<(), DecodeError> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(DecodeError::Incomplete {
                offset: self.pending_start,
            })
        }
    }
}

/// Value-threading form of [`DecoderState::feed`].
pub fn decode_bytes(
    mut state: DecoderState,
    input: &[u8],
) -> Result<(Vec<Stroke>, DecoderState), DecodeError> {
    let mut out = Vec::new();
    state.feed(input, &mut out)?;
    Ok((out, state))
}

/// Decodes a complete stream, rejecting a dangling prefix.
pub fn decode_all(input: &[u8]) -> Result<Vec<Stroke>, DecodeError> {
    let mut state = DecoderState::new();
    let mut out = Vec::new();
    state.feed(input, &mut out)?;
    state.finish()?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TypematicError {
    #[error("typematic delay must be positive")]
    ZeroDelay,
    #[error("typematic rate must be positive")]
    ZeroRate,
}

/// Auto-repeat timing: first repeat after `delay` ms, then `rate` per second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypematicParams {
    delay: u64,
    rate: u32,
}

impl TypematicParams {
    pub fn new(delay: u64, rate: u32) -> Result<Self, TypematicError> {
        if delay == 0 {
            return Err(TypematicError::ZeroDelay);
        }
        if rate == 0 {
            return Err(TypematicError::ZeroRate);
        }
        Ok(TypematicParams { delay, rate })
    }

    pub fn delay(&self) -> u64 {
        self.delay
    }

    pub fn rate(&self) -> u32 {
        self.rate
    }

    /// Time of the `n`-th repeat (0-based), rounded down to the millisecond.
    fn repeat_at(&self, n: u64) -> u64 {
        self.delay + n * 1000 / u64::from(self.rate)
    }
}

impl Default for TypematicParams {
    fn default() -> Self {
        TypematicParams {
            delay: 500,
            rate: 10,
        }
    }
}

/// Expands holding `key` for `hold` ms into the press/repeat/release events a
/// keyboard would send.
pub fn typematic_expand(key: VirtualKey, hold: u64, p: TypematicParams) -> Vec<KeyEvent> {
    let mut events = vec![KeyEvent::press(key, 0)];
    events.extend(
        (0..)
            .map(|n| p.repeat_at(n))
            .take_while(|&t| t < hold)
            .map(|t| KeyEvent::press(key, t)),
    );
    events.push(KeyEvent::release(key, hold));
    events
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vk(name: &str) -> VirtualKey {
        VirtualKey::from_name(name).unwrap()
    }

    #[test]
    fn every_table_key_has_a_scan_code() {
        for key in VirtualKey::all() {
            assert!(scan_code(key).is_some(), "{key} has no scan code");
        }
    }

    #[test]
    fn encodes_make_and_break() {
        assert_eq!(
            encode_event(&KeyEvent::press(vk("VK_A"), 0)).unwrap(),
            [0x1C]
        );
        assert_eq!(
            encode_event(&KeyEvent::release(vk("VK_RETURN"), 0)).unwrap(),
            [0xF0, 0x5A]
        );
        assert_eq!(
            encode_event(&KeyEvent::release(vk("VK_LEFT"), 0)).unwrap(),
            [0xE0, 0xF0, 0x6B]
        );
        assert_eq!(
            encode_event(&KeyEvent::press(vk("VK_LEFT"), 0)).unwrap(),
            [0xE0, 0x6B]
        );
    }

    #[test]
    fn entry_break_matches_encoder() {
        for entry in scan_table() {
            let released = encode_event(&KeyEvent::release(entry.key, 0)).unwrap();
            assert_eq!(entry.break_code(), released);
            assert_eq!(
                entry.make(),
                encode_event(&KeyEvent::press(entry.key, 0)).unwrap()
            );
        }
    }

    #[test]
    fn decode_empty_and_prefix() {
        let (events, state) = decode_bytes(DecoderState::new(), &[]).unwrap();
        assert!(events.is_empty());
        assert!(state.is_empty());

        let (events, state) = decode_bytes(DecoderState::new(), &[0xF0]).unwrap();
        assert!(events.is_empty());
        assert_eq!(state.pending_bytes(), &[0xF0]);
        assert_eq!(state.finish(), Err(DecodeError::Incomplete { offset: 0 }));
    }

    #[test]
    fn decode_reports_bad_byte_and_resets() {
        let mut state = DecoderState::new();
        let mut out = Vec::new();
        let err = state.feed(&[0x1C, 0xE0, 0x1C], &mut out).unwrap_err();
        assert_eq!(
            err,
            DecodeError::UnexpectedByte {
                byte: 0x1C,
                offset: 2
            }
        );
        assert_eq!(
            out,
            vec![Stroke {
                key: vk("VK_A"),
                action: Action::Press
            }]
        );
        assert!(state.is_empty());
        // Offsets keep counting across the error.
        let err = state.feed(&[0x00], &mut out).unwrap_err();
        assert_eq!(
            err,
            DecodeError::UnexpectedByte {
                byte: 0x00,
                offset: 3
            }
        );
    }

    #[test]
    fn double_break_prefix_is_rejected() {
        assert_eq!(
            decode_all(&[0xF0, 0xF0]),
            Err(DecodeError::UnexpectedByte {
                byte: 0xF0,
                offset: 1
            })
        );
        assert_eq!(
            decode_all(&[0xF0, 0xE0, 0x6B]),
            Err(DecodeError::UnexpectedByte {
                byte: 0xE0,
                offset: 1
            })
        );
    }

    #[test]
    fn incomplete_offset_points_at_sequence_start() {
        assert_eq!(
            decode_all(&[0x1C, 0xE0, 0xF0]),
            Err(DecodeError::Incomplete { offset: 1 })
        );
    }

    #[test]
    fn typematic_examples() {
        let a = vk("VK_A");
        let p = TypematicParams::new(500, 10).unwrap();
        assert_eq!(
            typematic_expand(a, 0, p),
            vec![KeyEvent::press(a, 0), KeyEvent::release(a, 0)]
        );
        assert_eq!(
            typematic_expand(a, 400, p),
            vec![KeyEvent::press(a, 0), KeyEvent::release(a, 400)]
        );
        assert_eq!(
            typematic_expand(a, 700, p),
            vec![
                KeyEvent::press(a, 0),
                KeyEvent::press(a, 500),
                KeyEvent::press(a, 600),
                KeyEvent::release(a, 700),
            ]
        );
        // A repeat landing exactly on `hold` is not emitted.
        assert_eq!(typematic_expand(a, 500, p).len(), 2);
    }

    #[test]
    fn typematic_params_validated() {
        assert_eq!(TypematicParams::new(0, 10), Err(TypematicError::ZeroDelay));
        assert_eq!(TypematicParams::new(500, 0), Err(TypematicError::ZeroRate));
        assert_eq!(
            TypematicParams::default(),
            TypematicParams::new(500, 10).unwrap()
        );
    }
}
