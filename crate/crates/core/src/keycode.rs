// SPDX-License-Identifier: Apache-2.0

//! Virtual key codes, modifiers, chords and US-layout text translation.
//!
//! Every key the engine can synthesize lives in [`KEY_TABLE`]. A
//! [`VirtualKey`] can only be built from a code present in that table, so
//! name and scan-code lookups on it never fail.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

/// One row of the virtual key table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyTableEntry {
    pub name: &'static str,
    pub code: u8,
}

const fn entry(name: &'static str, code: u8) -> KeyTableEntry {
    KeyTableEntry { name, code }
}

/// US keyboard virtual key codes, ordered by code.
pub const KEY_TABLE: &[KeyTableEntry] = &[
    entry("VK_BACK", 0x08),
    entry("VK_TAB", 0x09),
    entry("VK_RETURN", 0x0D),
    entry("VK_SHIFT", 0x10),
    entry("VK_CONTROL", 0x11),
    entry("VK_MENU", 0x12),
    entry("VK_CAPITAL", 0x14),
    entry("VK_ESCAPE", 0x1B),
    entry("VK_SPACE", 0x20),
    entry("VK_PRIOR", 0x21),
    entry("VK_NEXT", 0x22),
    entry("VK_END", 0x23),
    entry("VK_HOME", 0x24),
    entry("VK_LEFT", 0x25),
    entry("VK_UP", 0x26),
    entry("VK_RIGHT", 0x27),
    entry("VK_DOWN", 0x28),
    entry("VK_INSERT", 0x2D),
    entry("VK_DELETE", 0x2E),
    entry("VK_0", 0x30),
    entry("VK_1", 0x31),
    entry("VK_2", 0x32),
    entry("VK_3", 0x33),
    entry("VK_4", 0x34),
    entry("VK_5", 0x35),
    entry("VK_6", 0x36),
    entry("VK_7", 0x37),
    entry("VK_8", 0x38),
    entry("VK_9", 0x39),
    entry("VK_A", 0x41),
    entry("VK_B", 0x42),
    entry("VK_C", 0x43),
    entry("VK_D", 0x44),
    entry("VK_E", 0x45),
    entry("VK_F", 0x46),
    entry("VK_G", 0x47),
    entry("VK_H", 0x48),
    entry("VK_I", 0x49),
    entry("VK_J", 0x4A),
    entry("VK_K", 0x4B),
    entry("VK_L", 0x4C),
    entry("VK_M", 0x4D),
    entry("VK_N", 0x4E),
    entry("VK_O", 0x4F),
    entry("VK_P", 0x50),
    entry("VK_Q", 0x51),
    entry("VK_R", 0x52),
    entry("VK_S", 0x53),
    entry("VK_T", 0x54),
    entry("VK_U", 0x55),
    entry("VK_V", 0x56),
    entry("VK_W", 0x57),
    entry("VK_X", 0x58),
    entry("VK_Y", 0x59),
    entry("VK_Z", 0x5A),
    entry("VK_F1", 0x70),
    entry("VK_F2", 0x71),
    entry("VK_F3", 0x72),
    entry("VK_F4", 0x73),
    entry("VK_F5", 0x74),
    entry("VK_F6", 0x75),
    entry("VK_F7", 0x76),
    entry("VK_F8", 0x77),
    entry("VK_F9", 0x78),
    entry("VK_F10", 0x79),
    entry("VK_F11", 0x7A),
    entry("VK_F12", 0x7B),
    entry("VK_NUMLOCK", 0x90),
    entry("VK_SCROLL", 0x91),
    entry("VK_OEM_1", 0xBA),
    entry("VK_OEM_PLUS", 0xBB),
    entry("VK_OEM_COMMA", 0xBC),
    entry("VK_OEM_MINUS", 0xBD),
    entry("VK_OEM_PERIOD", 0xBE),
    entry("VK_OEM_2", 0xBF),
    entry("VK_OEM_3", 0xC0),
    entry("VK_OEM_4", 0xDB),
    entry("VK_OEM_5", 0xDC),
    entry("VK_OEM_6", 0xDD),
    entry("VK_OEM_7", 0xDE),
];

const fn build_index() -> [Option<u8>; 256] {
    let mut index = [None; 256];
    let mut i = 0;
    while i < KEY_TABLE.len() {
        let code = KEY_TABLE[i].code as usize;
        assert!(index[code].is_none(), "duplicate virtual key code");
        assert!(i < 256);
        index[code] = Some(i as u8);
        i += 1;
    }
    index
}

/// Code -> position in `KEY_TABLE`.
static CODE_INDEX: [Option<u8>; 256] = build_index();

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("unknown key name `{0}`")]
    UnknownKeyName(String),
    #[error("unknown key code 0x{0:02X}")]
    UnknownKeyCode(u8),
    #[error("unmappable character {ch:?} at position {position}")]
    UnmappableCharacter { ch: char, position: usize },
    #[error("modifier {0} listed twice in chord")]
    DuplicateModifier(Modifier),
    #[error("chord key {0} is itself a modifier")]
    ModifierAsChordKey(VirtualKey),
}

/// A key from [`KEY_TABLE`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VirtualKey(u8);

impl VirtualKey {
    pub const BACK: VirtualKey = VirtualKey(0x08);
    pub const TAB: VirtualKey = VirtualKey(0x09);
    pub const RETURN: VirtualKey = VirtualKey(0x0D);
    pub const SHIFT: VirtualKey = VirtualKey(0x10);
    pub const ESCAPE: VirtualKey = VirtualKey(0x1B);
    pub const SPACE: VirtualKey = VirtualKey(0x20);
    pub const LEFT: VirtualKey = VirtualKey(0x25);
    pub const UP: VirtualKey = VirtualKey(0x26);
    pub const RIGHT: VirtualKey = VirtualKey(0x27);
    pub const DOWN: VirtualKey = VirtualKey(0x28);

    pub fn from_code(code: u8) -> Result<Self, KeyError> {
        match CODE_INDEX[code as usize] {
            Some(_) => Ok(VirtualKey(code)),
            None => Err(KeyError::UnknownKeyCode(code)),
        }
    }

    /// Exact, case-sensitive lookup by symbolic name.
    pub fn from_name(name: &str) -> Result<Self, KeyError> {
        KEY_TABLE
            .iter()
            .find(|e| e.name == name)
            .map(|e| VirtualKey(e.code))
            .ok_or_else(|| KeyError::UnknownKeyName(name.to_string()))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        let idx = CODE_INDEX[self.0 as usize].expect("VirtualKey always indexes the table");
        KEY_TABLE[idx as usize].name
    }

    pub fn is_modifier(self) -> bool {
        Modifier::from_key(self).is_some()
    }

    /// Iterates every key of the table in code order.
    pub fn all() -> impl Iterator<Item = VirtualKey> {
        KEY_TABLE.iter().map(|e| VirtualKey(e.code))
    }
}

impl fmt::Debug for VirtualKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(0x{:02X})", self.name(), self.0)
    }
}

impl fmt::Display for VirtualKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn vk_from_name(name: &str) -> Result<VirtualKey, KeyError> {
    VirtualKey::from_name(name)
}

pub fn vk_to_name(code: u8) -> Result<&'static str, KeyError> {
    VirtualKey::from_code(code).map(VirtualKey::name)
}

/// Writes the key table as `name<TAB>hex` lines.
pub fn export_key_table<W: Write>(mut out: W) -> io::Result<()> {
    for e in KEY_TABLE {
        writeln!(out, "{}\t{:02X}", e.name, e.code)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[non_exhaustive]
pub enum Modifier {
    Shift,
}

impl Modifier {
    pub fn key(self) -> VirtualKey {
        match self {
            Modifier::Shift => VirtualKey::SHIFT,
        }
    }

    pub fn from_key(key: VirtualKey) -> Option<Modifier> {
        match key {
            VirtualKey::SHIFT => Some(Modifier::Shift),
            _ => None,
        }
    }
}

impl fmt::Display for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key().name())
    }
}

/// A key together with the modifiers held around it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyChord {
    modifiers: Vec<Modifier>,
    key: VirtualKey,
}

impl KeyChord {
    pub fn new(modifiers: Vec<Modifier>, key: VirtualKey) -> Result<Self, KeyError> {
        if key.is_modifier() {
            return Err(KeyError::ModifierAsChordKey(key));
        }
        for (i, m) in modifiers.iter().enumerate() {
            if modifiers[..i].contains(m) {
                return Err(KeyError::DuplicateModifier(*m));
            }
        }
        Ok(KeyChord { modifiers, key })
    }

    /// Chord without modifiers.
    ///
    /// # Panics
    ///
    /// Panics if `key` is a modifier key.
    pub fn plain(key: VirtualKey) -> Self {
        KeyChord::new(Vec::new(), key).expect("plain chord key must not be a modifier")
    }

    /// # Panics
    ///
    /// Panics if `key` is a modifier key.
    pub fn shifted(key: VirtualKey) -> Self {
        KeyChord::new(vec![Modifier::Shift], key).expect("shifted chord key must not be a modifier")
    }

    pub fn modifiers(&self) -> &[Modifier] {
        &self.modifiers
    }

    pub fn key(&self) -> VirtualKey {
        self.key
    }

    pub fn has(&self, m: Modifier) -> bool {
        self.modifiers.contains(&m)
    }

    /// Modifier presses in declaration order followed by the key press.
    pub fn press_events(&self, t: u64) -> Vec<KeyEvent> {
        self.modifiers
            .iter()
            .map(|m| m.key())
            .chain(std::iter::once(self.key))
            .map(|k| KeyEvent::press(k, t))
            .collect()
    }

    /// Key release followed by modifier releases in reverse order.
    pub fn release_events(&self, t: u64) -> Vec<KeyEvent> {
        std::iter::once(self.key)
            .chain(self.modifiers.iter().rev().map(|m| m.key()))
            .map(|k| KeyEvent::release(k, t))
            .collect()
    }
}

impl fmt::Display for KeyChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.modifiers {
            write!(f, "{m}+")?;
        }
        write!(f, "{}", self.key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Press,
    Release,
}

impl Action {
    pub fn as_str(self) -> &'static str {
        match self {
            Action::Press => "press",
            Action::Release => "release",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A key transition without a timestamp, as recovered from a scan-code stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stroke {
    pub key: VirtualKey,
    pub action: Action,
}

/// A key transition at `t` milliseconds since the start of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyEvent {
    pub key: VirtualKey,
    pub action: Action,
    pub t: u64,
}

impl KeyEvent {
    pub fn press(key: VirtualKey, t: u64) -> Self {
        KeyEvent {
            key,
            action: Action::Press,
            t,
        }
    }

    pub fn release(key: VirtualKey, t: u64) -> Self {
        KeyEvent {
            key,
            action: Action::Release,
            t,
        }
    }

    pub fn stroke(&self) -> Stroke {
        Stroke {
            key: self.key,
            action: self.action,
        }
    }
}

pub fn chord_to_events(chord: &KeyChord, t: u64) -> Vec<KeyEvent> {
    let mut events = chord.press_events(t);
    events.extend(chord.release_events(t));
    events
}

/// US-layout chord for a single character: letters, digits, punctuation,
/// space, `\n` (Return) and `\t` (Tab).
pub fn chord_for_char(c: char) -> Option<KeyChord> {
    let (code, shift) = match c {
        'a'..='z' => (c as u8 - b'a' + 0x41, false),
        'A'..='Z' => (c as u8 - b'A' + 0x41, true),
        '0'..='9' => (c as u8, false),
        ' ' => (0x20, false),
        '\n' => (0x0D, false),
        '\t' => (0x09, false),
        ')' => (0x30, true),
        '!' => (0x31, true),
        '@' => (0x32, true),
        '#' => (0x33, true),
        '$' => (0x34, true),
        '%' => (0x35, true),
        '^' => (0x36, true),
        '&' => (0x37, true),
        '*' => (0x38, true),
        '(' => (0x39, true),
        ';' => (0xBA, false),
        ':' => (0xBA, true),
        '=' => (0xBB, false),
        '+' => (0xBB, true),
        ',' => (0xBC, false),
        '<' => (0xBC, true),
        '-' => (0xBD, false),
        '_' => (0xBD, true),
        '.' => (0xBE, false),
        '>' => (0xBE, true),
        '/' => (0xBF, false),
        '?' => (0xBF, true),
        '`' => (0xC0, false),
        '~' => (0xC0, true),
        '[' => (0xDB, false),
        '{' => (0xDB, true),
        '\\' => (0xDC, false),
        '|' => (0xDC, true),
        ']' => (0xDD, false),
        '}' => (0xDD, true),
        '\'' => (0xDE, false),
        '"' => (0xDE, true),
        _ => return None,
    };
    let key = VirtualKey(code);
    Some(if shift {
        KeyChord::shifted(key)
    } else {
        KeyChord::plain(key)
    })
}

/// Inverse of [`chord_for_char`]: the character typed by `key` with the
/// given shift state, if it produces one.
pub fn char_for_key(key: VirtualKey, shift: bool) -> Option<char> {
    const DIGIT_SHIFTED: &[u8; 10] = b")!@#$%^&*(";
    let code = key.code();
    let c = match (code, shift) {
        (0x41..=0x5A, false) => (code - 0x41 + b'a') as char,
        (0x41..=0x5A, true) => code as char,
        (0x30..=0x39, false) => code as char,
        (0x30..=0x39, true) => DIGIT_SHIFTED[(code - 0x30) as usize] as char,
        (0x20, _) => ' ',
        (0x0D, _) => '\n',
        (0x09, _) => '\t',
        (0xBA, s) => pick(s, ';', ':'),
        (0xBB, s) => pick(s, '=', '+'),
        (0xBC, s) => pick(s, ',', '<'),
        (0xBD, s) => pick(s, '-', '_'),
        (0xBE, s) => pick(s, '.', '>'),
        (0xBF, s) => pick(s, '/', '?'),
        (0xC0, s) => pick(s, '`', '~'),
        (0xDB, s) => pick(s, '[', '{'),
        (0xDC, s) => pick(s, '\\', '|'),
        (0xDD, s) => pick(s, ']', '}'),
        (0xDE, s) => pick(s, '\'', '"'),
        _ => return None,
    };
    Some(c)
}

fn pick(shift: bool, plain: char, shifted: char) -> char {
    if shift {
        shifted
    } else {
        plain
    }
}

pub fn chords_for_text(text: &str) -> Result<Vec<KeyChord>, KeyError> {
    text.chars()
        .enumerate()
        .map(|(position, ch)| {
            chord_for_char(ch).ok_or(KeyError::UnmappableCharacter { ch, position })
        })
        .collect()
}
