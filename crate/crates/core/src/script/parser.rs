// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::keycode::{chords_for_text, KeyChord, KeyError, Modifier, VirtualKey};

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseIssue, Pos, Script, Statement, StatementKind, WaitSpec};

/// Key names that are accepted besides the table's `VK_*` names and their
/// prefix-less shorthands.
const ALIASES: &[(&str, &str)] = &[
    ("ENTER", "VK_RETURN"),
    ("ESC", "VK_ESCAPE"),
    ("SPACEBAR", "VK_SPACE"),
    ("PAGEUP", "VK_PRIOR"),
    ("PGUP", "VK_PRIOR"),
    ("PAGEDOWN", "VK_NEXT"),
    ("PGDN", "VK_NEXT"),
    ("BACKSPACE", "VK_BACK"),
    ("DEL", "VK_DELETE"),
    ("INS", "VK_INSERT"),
    ("CTRL", "VK_CONTROL"),
    ("ALT", "VK_MENU"),
    ("LEFTARROW", "VK_LEFT"),
    ("UPARROW", "VK_UP"),
    ("RIGHTARROW", "VK_RIGHT"),
    ("DOWNARROW", "VK_DOWN"),
];

/// Resolves `VK_RETURN`, `RETURN` or an alias such as `ENTER`.
pub fn resolve_key_name(name: &str) -> Result<VirtualKey, KeyError> {
    if let Ok(key) = VirtualKey::from_name(name) {
        return Ok(key);
    }
    if let Some((_, full)) = ALIASES.iter().find(|(alias, _)| *alias == name) {
        return VirtualKey::from_name(full);
    }
    VirtualKey::from_name(&format!("VK_{name}"))
        .map_err(|_| KeyError::UnknownKeyName(name.to_string()))
}

struct Parser {
    tokens: Vec<Token>,
    next: usize,
    end: Pos,
    issues: Vec<ParseIssue>,
    durations: BTreeMap<String, (u64, Pos)>,
    duration_uses: Vec<(String, Pos)>,
}

type Step<T> = Result<T, ParseIssue>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn here(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.next).cloned();
        if tok.is_some() {
            self.next += 1;
        }
        tok
    }

    fn found(&self) -> String {
        self.peek_kind()
            .map_or_else(|| "end of input".to_string(), |k| k.to_string())
    }

    fn expect(&mut self, want: TokenKind) -> Step<Pos> {
        match self.peek() {
            Some(t) if t.kind == want => {
                let pos = t.pos;
                self.next += 1;
                Ok(pos)
            }
            _ => Err(ParseIssue::new(
                self.here(),
                format!("expected {want}, found {}", self.found()),
            )),
        }
    }

    /// Skips the rest of a broken statement, including any block it opened.
    fn recover(&mut self) {
        let mut depth = 0usize;
        while let Some(kind) = self.peek_kind() {
            match kind {
                TokenKind::Newline if depth == 0 => return,
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace if depth == 0 => return,
                TokenKind::RBrace => depth -= 1,
                _ => {}
            }
            self.next += 1;
        }
    }

    fn block(&mut self, open: Option<Pos>) -> Vec<Statement> {
        let mut statements = Vec::new();
        loop {
            while self.peek_kind() == Some(&TokenKind::Newline) {
                self.next += 1;
            }
            match self.peek_kind() {
                None => {
                    if let Some(open) = open {
                        self.issues.push(ParseIssue::new(open, "unclosed `{`"));
                    }
                    return statements;
                }
                Some(TokenKind::RBrace) => {
                    let pos = self.here();
                    self.next += 1;
                    if open.is_some() {
                        return statements;
                    }
                    self.issues.push(ParseIssue::new(pos, "unmatched `}`"));
                    continue;
                }
                Some(_) => {}
            }
            match self.statement() {
                Ok(stmt) => {
                    if let Some(stmt) = stmt {
                        statements.push(stmt);
                    }
                    match self.peek_kind() {
                        None | Some(TokenKind::Newline) | Some(TokenKind::RBrace) => {}
                        Some(_) => {
                            let issue = ParseIssue::new(
                                self.here(),
                                format!("unexpected {} after statement", self.found()),
                            );
                            self.issues.push(issue);
                            self.recover();
                        }
                    }
                }
                Err(issue) => {
                    self.issues.push(issue);
                    // Don't swallow the line end or block end that tripped us.
                    if matches!(
                        self.tokens.get(self.next.wrapping_sub(1)).map(|t| &t.kind),
                        Some(TokenKind::Newline | TokenKind::RBrace)
                    ) {
                        self.next -= 1;
                    }
                    self.recover();
                }
            }
        }
    }

    fn statement(&mut self) -> Step<Option<Statement>> {
        let tok = self.bump().expect("statement called at end of input");
        let pos = tok.pos;
        let kind = match tok.kind {
            TokenKind::Window => {
                let (title, at) = self.string()?;
                if title.is_empty() {
                    return Err(ParseIssue::new(at, "window title must not be empty"));
                }
                StatementKind::Focus(title)
            }
            TokenKind::Let => {
                self.declaration()?;
                return Ok(None);
            }
            TokenKind::Tap => StatementKind::Tap(self.chord()?),
            TokenKind::Press => StatementKind::Press(self.key()?.0),
            TokenKind::Release => StatementKind::Release(self.key()?.0),
            TokenKind::Keys => {
                let (text, at) = self.string()?;
                if let Err(KeyError::UnmappableCharacter { ch, position }) = chords_for_text(&text)
                {
                    return Err(ParseIssue::new(
                        at,
                        format!(
                            "character {ch:?} at index {position} cannot be typed on a US keyboard"
                        ),
                    ));
                }
                StatementKind::Keys(text)
            }
            TokenKind::Wait => match self.bump() {
                Some(Token {
                    kind: TokenKind::Duration(ms),
                    ..
                }) => StatementKind::Wait(WaitSpec::Millis(ms)),
                Some(Token {
                    kind: TokenKind::Ident(name),
                    pos: at,
                }) => {
                    self.duration_uses.push((name.clone(), at));
                    StatementKind::Wait(WaitSpec::Named(name))
                }
                Some(Token {
                    kind: TokenKind::Int(_),
                    pos: at,
                }) => {
                    return Err(ParseIssue::new(at, "duration needs a unit (ms, s or m)"));
                }
                other => {
                    let at = other.as_ref().map_or(self.end, |t| t.pos);
                    let found = other.map_or_else(|| "end of input".into(), |t| t.kind.to_string());
                    return Err(ParseIssue::new(
                        at,
                        format!("expected duration or duration name, found {found}"),
                    ));
                }
            },
            TokenKind::Repeat => {
                let count = match self.bump() {
                    Some(Token {
                        kind: TokenKind::Int(n),
                        pos: at,
                    }) => {
                        if n == 0 {
                            self.issues
                                .push(ParseIssue::new(at, "repeat count must be ≥ 1"));
                        }
                        n
                    }
                    other => {
                        let at = other.as_ref().map_or(self.end, |t| t.pos);
                        return Err(ParseIssue::new(at, "expected repeat count"));
                    }
                };
                let open = self.expect(TokenKind::LBrace)?;
                let body = self.block(Some(open));
                StatementKind::Repeat { count, body }
            }
            TokenKind::Loop => {
                let open = self.expect(TokenKind::LBrace)?;
                StatementKind::Loop(self.block(Some(open)))
            }
            other => {
                return Err(ParseIssue::new(
                    pos,
                    format!("expected a statement, found {other}"),
                ));
            }
        };
        Ok(Some(Statement::at(pos, kind)))
    }

    fn declaration(&mut self) -> Step<()> {
        let (name, at) = match self.bump() {
            Some(Token {
                kind: TokenKind::Ident(name),
                pos,
            }) => (name, pos),
            other => {
                let at = other.as_ref().map_or(self.end, |t| t.pos);
                return Err(ParseIssue::new(at, "expected duration name after `let`"));
            }
        };
        self.expect(TokenKind::Equals)?;
        let ms = match self.bump() {
            Some(Token {
                kind: TokenKind::Duration(ms),
                ..
            }) => ms,
            Some(Token {
                kind: TokenKind::Int(_),
                pos,
            }) => {
                return Err(ParseIssue::new(pos, "duration needs a unit (ms, s or m)"));
            }
            other => {
                let pos = other.as_ref().map_or(self.end, |t| t.pos);
                return Err(ParseIssue::new(pos, "expected a duration such as `2s`"));
            }
        };
        if self.durations.contains_key(&name) {
            return Err(ParseIssue::new(
                at,
                format!("duration `{name}` declared twice"),
            ));
        }
        self.durations.insert(name, (ms, at));
        Ok(())
    }

    fn string(&mut self) -> Step<(String, Pos)> {
        match self.bump() {
            Some(Token {
                kind: TokenKind::Str(s),
                pos,
            }) => Ok((s, pos)),
            other => {
                let at = other.as_ref().map_or(self.end, |t| t.pos);
                let found = other.map_or_else(|| "end of input".into(), |t| t.kind.to_string());
                Err(ParseIssue::new(
                    at,
                    format!("expected string, found {found}"),
                ))
            }
        }
    }

    fn key(&mut self) -> Step<(VirtualKey, Pos)> {
        let at = self.here();
        let name = match self.bump().map(|t| t.kind) {
            Some(TokenKind::Ident(name)) => name,
            Some(TokenKind::Int(d)) if d <= 9 => d.to_string(),
            Some(other) => {
                return Err(ParseIssue::new(
                    at,
                    format!("expected key name, found {other}"),
                ))
            }
            None => return Err(ParseIssue::new(at, "expected key name, found end of input")),
        };
        resolve_key_name(&name)
            .map(|k| (k, at))
            .map_err(|_| ParseIssue::new(at, format!("unknown key `{name}`")))
    }

    fn chord(&mut self) -> Step<KeyChord> {
        let mut keys = vec![self.key()?];
        while self.peek_kind() == Some(&TokenKind::Plus) {
            self.next += 1;
            keys.push(self.key()?);
        }
        let (key, key_pos) = keys.pop().expect("at least one key");
        let mut modifiers = Vec::new();
        for (k, at) in keys {
            let m = Modifier::from_key(k)
                .ok_or_else(|| ParseIssue::new(at, format!("{k} is not a modifier")))?;
            if modifiers.contains(&m) {
                return Err(ParseIssue::new(at, format!("modifier {m} repeated")));
            }
            modifiers.push(m);
        }
        KeyChord::new(modifiers, key).map_err(|e| ParseIssue::new(key_pos, e.to_string()))
    }
}

/// Parses `.vus` source. All issues found are returned, sorted by position.
pub fn parse(source: &str) -> Result<Script, Vec<ParseIssue>> {
    let tokens = tokenize(source)?;
    let end = end_pos(source);
    let mut p = Parser {
        tokens,
        next: 0,
        end,
        issues: Vec::new(),
        durations: BTreeMap::new(),
        duration_uses: Vec::new(),
    };
    let statements = p.block(None);
    for (name, used_at) in &p.duration_uses {
        if let Some((_, declared_at)) = p.durations.get(name) {
            if declared_at > used_at {
                p.issues.push(ParseIssue::new(
                    *used_at,
                    format!(
                        "duration `{name}` used before its declaration on line {}",
                        declared_at.line
                    ),
                ));
            }
        }
    }
    if !p.issues.is_empty() {
        p.issues.sort_by_key(|i| (i.line, i.column));
        return Err(p.issues);
    }
    Ok(Script {
        statements,
        durations: p
            .durations
            .into_iter()
            .map(|(k, (ms, _))| (k, ms))
            .collect(),
    })
}

/// Position just past the last character, clamped to the last line so it
/// stays inside the source.
fn end_pos(source: &str) -> Pos {
    let mut line = 1u32;
    let mut column = 1u32;
    let mut last = Pos::default();
    for c in source.chars() {
        last = Pos::new(line, column);
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    if source.ends_with('\n') {
        last
    } else {
        Pos::new(line, column.saturating_sub(1).max(1))
    }
}
