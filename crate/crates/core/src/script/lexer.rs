// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use super::{ParseIssue, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Window,
    Let,
    Tap,
    Press,
    Release,
    Keys,
    Wait,
    Repeat,
    Loop,
    LBrace,
    RBrace,
    Plus,
    Equals,
    Newline,
    Str(String),
    Int(u64),
    /// Duration literal, already converted to milliseconds.
    Duration(u64),
    Ident(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Window => f.write_str("`window`"),
            TokenKind::Let => f.write_str("`let`"),
            TokenKind::Tap => f.write_str("`tap`"),
            TokenKind::Press => f.write_str("`press`"),
            TokenKind::Release => f.write_str("`release`"),
            TokenKind::Keys => f.write_str("`keys`"),
            TokenKind::Wait => f.write_str("`wait`"),
            TokenKind::Repeat => f.write_str("`repeat`"),
            TokenKind::Loop => f.write_str("`loop`"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Equals => f.write_str("`=`"),
            TokenKind::Newline => f.write_str("end of line"),
            TokenKind::Str(_) => f.write_str("string"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Duration(_) => f.write_str("duration"),
            TokenKind::Ident(name) => write!(f, "`{name}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: u32,
    column: u32,
    tokens: Vec<Token>,
    issues: Vec<ParseIssue>,
}

impl<'a> Lexer<'a> {
    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_line(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    fn push(&mut self, kind: TokenKind, pos: Pos) {
        self.tokens.push(Token { kind, pos });
    }

    fn issue(&mut self, pos: Pos, message: impl Into<String>) {
        self.issues.push(ParseIssue::new(pos, message));
    }

    fn run(mut self) -> Result<Vec<Token>, Vec<ParseIssue>> {
        while let Some(&c) = self.chars.peek() {
            let pos = self.pos();
            match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '\n' => {
                    self.bump();
                    self.push(TokenKind::Newline, pos);
                }
                '#' => self.skip_line(),
                '{' | '}' | '+' | '=' => {
                    self.bump();
                    let kind = match c {
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        '+' => TokenKind::Plus,
                        _ => TokenKind::Equals,
                    };
                    self.push(kind, pos);
                }
                '"' => self.string(pos),
                '0'..='9' => self.number(pos),
                c if c.is_ascii_alphabetic() || c == '_' => self.word(pos),
                other => {
                    self.bump();
                    self.issue(pos, format!("unexpected character {other:?}"));
                }
            }
        }
        if self.issues.is_empty() {
            Ok(self.tokens)
        } else {
            Err(self.issues)
        }
    }

    fn string(&mut self, start: Pos) {
        self.bump();
        let mut text = String::new();
        loop {
            match self.chars.peek().copied() {
                None | Some('\n') => {
                    self.issue(start, "unterminated string");
                    return;
                }
                Some('"') => {
                    self.bump();
                    self.push(TokenKind::Str(text), start);
                    return;
                }
                Some('\\') => {
                    let esc_pos = self.pos();
                    self.bump();
                    match self.chars.peek().copied() {
                        Some('"') => text.push('"'),
                        Some('\\') => text.push('\\'),
                        Some('n') => text.push('\n'),
                        Some('t') => text.push('\t'),
                        None | Some('\n') => continue,
                        Some(other) => {
                            self.issue(esc_pos, format!("unknown escape `\\{other}`"));
                        }
                    }
                    self.bump();
                }
                Some(c) => {
                    text.push(c);
                    self.bump();
                }
            }
        }
    }

    fn number(&mut self, start: Pos) {
        let mut digits = String::new();
        while let Some(&c) = self.chars.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.bump();
        }
        let mut unit = String::new();
        while let Some(&c) = self.chars.peek() {
            if !c.is_ascii_alphanumeric() && c != '_' {
                break;
            }
            unit.push(c);
            self.bump();
        }
        let Ok(n) = digits.parse::<u64>() else {
            self.issue(start, format!("integer `{digits}` is too large"));
            return;
        };
        let scale = match unit.as_str() {
            "" => {
                self.push(TokenKind::Int(n), start);
                return;
            }
            "ms" => 1,
            "s" => 1000,
            "m" => 60_000,
            other => {
                self.issue(
                    start,
                    format!("invalid duration unit `{other}` (expected ms, s or m)"),
                );
                return;
            }
        };
        match n.checked_mul(scale) {
            Some(ms) => self.push(TokenKind::Duration(ms), start),
            None => self.issue(start, format!("duration `{digits}{unit}` is too large")),
        }
    }

    fn word(&mut self, start: Pos) {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if !c.is_ascii_alphanumeric() && c != '_' {
                break;
            }
            word.push(c);
            self.bump();
        }
        let kind = match word.as_str() {
            "window" => TokenKind::Window,
            "let" => TokenKind::Let,
            "tap" => TokenKind::Tap,
            "press" => TokenKind::Press,
            "release" => TokenKind::Release,
            "keys" => TokenKind::Keys,
            "wait" => TokenKind::Wait,
            "repeat" => TokenKind::Repeat,
            "loop" => TokenKind::Loop,
            _ => TokenKind::Ident(word),
        };
        self.push(kind, start);
    }
}

/// Splits source text into tokens. Every lexical error in the source is
/// reported.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Vec<ParseIssue>> {
    Lexer {
        chars: source.chars().peekable(),
        line: 1,
        column: 1,
        tokens: Vec::new(),
        issues: Vec::new(),
    }
    .run()
}
