// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use crate::keycode::VirtualKey;

use super::{ParseIssue, Pos, Script, Statement, StatementKind, WaitSpec};

/// Semantic checks on a parsed script: undeclared durations, unbalanced
/// press/release, misplaced `loop` and zero repeat counts.
pub fn validate(s: &Script) -> Vec<ParseIssue> {
    let mut v = Validator {
        script: s,
        issues: Vec::new(),
    };
    let mut held = Held::default();
    v.block(&s.statements, true, &mut held);
    held.report_unreleased(&mut v.issues);
    v.issues.sort_by_key(|i| (i.line, i.column));
    v.issues
}

/// Press depth per key along the current straight-line path.
#[derive(Default)]
struct Held {
    keys: BTreeMap<VirtualKey, Vec<Pos>>,
}

impl Held {
    fn press(&mut self, key: VirtualKey, at: Pos) {
        self.keys.entry(key).or_default().push(at);
    }

    fn release(&mut self, key: VirtualKey, at: Pos, issues: &mut Vec<ParseIssue>) {
        match self.keys.get_mut(&key).and_then(Vec::pop) {
            Some(_) => {}
            None => issues.push(ParseIssue::new(
                at,
                format!("release of {key} without a matching press"),
            )),
        }
    }

    fn report_unreleased(self, issues: &mut Vec<ParseIssue>) {
        for (key, presses) in self.keys {
            for at in presses {
                issues.push(ParseIssue::new(at, format!("unmatched press of {key}")));
            }
        }
    }
}

struct Validator<'a> {
    script: &'a Script,
    issues: Vec<ParseIssue>,
}

impl Validator<'_> {
    fn block(&mut self, statements: &[Statement], top_level: bool, held: &mut Held) {
        for (i, stmt) in statements.iter().enumerate() {
            let at = stmt.pos;
            match &stmt.kind {
                StatementKind::Press(key) => held.press(*key, at),
                StatementKind::Release(key) => held.release(*key, at, &mut self.issues),
                StatementKind::Wait(WaitSpec::Named(name)) => {
                    if !self.script.durations.contains_key(name) {
                        self.issues
                            .push(ParseIssue::new(at, format!("undeclared duration `{name}`")));
                    }
                }
                StatementKind::Repeat { count, body } => {
                    if *count == 0 {
                        self.issues
                            .push(ParseIssue::new(at, "repeat count must be ≥ 1"));
                    }
                    if *count == 1 {
                        // Runs once: same path as the enclosing block.
                        self.block(body, false, held);
                    } else {
                        self.isolated(body);
                    }
                }
                StatementKind::Loop(body) => {
                    if !top_level || i + 1 != statements.len() {
                        self.issues.push(ParseIssue::new(
                            at,
                            "loop must be the final statement of the script",
                        ));
                    }
                    self.isolated(body);
                }
                StatementKind::Focus(_)
                | StatementKind::Tap(_)
                | StatementKind::Keys(_)
                | StatementKind::Wait(WaitSpec::Millis(_)) => {}
            }
        }
    }

    /// A body that runs repeatedly must leave every key as it found it.
    fn isolated(&mut self, body: &[Statement]) {
        let mut held = Held::default();
        self.block(body, false, &mut held);
        held.report_unreleased(&mut self.issues);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::{acquisition_script, parse, Cycles};

    fn issues(src: &str) -> Vec<(u32, String)> {
        validate(&parse(src).unwrap())
            .into_iter()
            .map(|i| (i.line, i.message))
            .collect()
    }

    #[test]
    fn canonical_program_is_clean() {
        let s = acquisition_script("DAQ", "M", "S", 2000, 10_000, Cycles::Count(3)).unwrap();
        assert!(validate(&s).is_empty());
        let s = acquisition_script("DAQ", "M", "S", 2000, 10_000, Cycles::Unbounded).unwrap();
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn unmatched_press() {
        assert_eq!(
            issues("press A"),
            vec![(1, "unmatched press of VK_A".to_string())]
        );
        assert!(issues("press A\ntap B\nrelease A").is_empty());
    }

    #[test]
    fn release_without_press() {
        assert_eq!(issues("release A").len(), 1);
    }

    #[test]
    fn undeclared_duration() {
        assert_eq!(
            issues("wait T9"),
            vec![(1, "undeclared duration `T9`".to_string())]
        );
    }

    #[test]
    fn loop_position() {
        assert!(issues("tap A\nloop {\n tap B\n}").is_empty());
        assert_eq!(issues("loop {\n tap B\n}\ntap A").len(), 1);
        assert_eq!(issues("repeat 2 {\n loop {\n tap B\n }\n}").len(), 1);
    }

    #[test]
    fn repeated_bodies_must_balance() {
        assert_eq!(issues("repeat 2 {\n press A\n}\n").len(), 1);
        assert_eq!(issues("press A\nrepeat 2 {\n release A\n}\n").len(), 2);
        assert!(issues("press A\nrepeat 1 {\n release A\n}\n").is_empty());
    }

    #[test]
    fn zero_repeat_in_built_script() {
        let s = Script {
            statements: vec![StatementKind::Repeat {
                count: 0,
                body: vec![],
            }
            .into()],
            ..Script::default()
        };
        assert_eq!(validate(&s).len(), 1);
    }
}
