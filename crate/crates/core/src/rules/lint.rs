use std::collections::HashMap;

use serde::Serialize;

use crate::model::{GradeScale, StateIter, StateSpace, DEFAULT_ENUMERATION_CAP};
use crate::rules::assignment::{Assignment, Source};
use crate::rules::dsl::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Diagnostic {
    fn new(severity: Severity, code: &'static str, message: String) -> Self {
        Self {
            severity,
            code,
            message,
            rule: None,
            line: None,
            column: None,
        }
    }

    fn at_rule(mut self, k: usize, span: Span) -> Self {
        self.rule = Some(k);
        if span.line > 0 {
            self.line = Some(span.line);
            self.column = Some(span.column);
        }
        self
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let severity = match self.severity {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{severity}[{}]", self.code)?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " {l}:{c}")?;
        } else if let Some(k) = self.rule {
            write!(f, " rule {}", k + 1)?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LintOptions {
    /// Also report grade decreases along increasing levels (info only).
    pub monotonicity: bool,
    pub cap: u64,
}

impl Default for LintOptions {
    fn default() -> Self {
        Self {
            monotonicity: false,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

pub fn lint_rules(assignment: &Assignment, space: &StateSpace, scale: &GradeScale) -> Vec<Diagnostic> {
    lint_with(assignment, space, scale, LintOptions::default())
}

pub fn lint_with(
    assignment: &Assignment,
    space: &StateSpace,
    scale: &GradeScale,
    options: LintOptions,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut seen: HashMap<&[usize], usize> = HashMap::new();
    for (k, e) in assignment.entries.iter().enumerate() {
        match seen.get(e.state.as_slice()) {
            Some(&prev) if assignment.entries[prev].grade != e.grade => out.push(Diagnostic::new(
                Severity::Error,
                "L_ENTRY_CONFLICT",
                format!(
                    "entries #{prev} and #{k} assign {} different grades (`{}` vs `{}`)",
                    space.describe(&e.state),
                    scale.name(assignment.entries[prev].grade),
                    scale.name(e.grade)
                ),
            )),
            Some(&prev) => out.push(Diagnostic::new(
                Severity::Warning,
                "L_ENTRY_DUPLICATE",
                format!("entry #{k} repeats entry #{prev} for {}", space.describe(&e.state)),
            )),
            None => {
                seen.insert(&e.state, k);
            }
        }
    }

    for (k, rule) in assignment.rules.iter().enumerate() {
        let count = rule.match_count(space);
        if count == 0 {
            out.push(
                Diagnostic::new(
                    Severity::Warning,
                    "L_ZERO_MATCH",
                    format!("rule #{} matches no state", k + 1),
                )
                .at_rule(k, rule.span),
            );
            continue;
        }
        if count > options.cap as u128 || k == 0 {
            continue;
        }
        let sets = rule.match_sets(space);
        let radices: Vec<usize> = sets.iter().map(Vec::len).collect();
        let mut state = vec![0usize; sets.len()];
        let shadowed = StateIter::new(radices).all(|digits| {
            for (slot, (set, &d)) in state.iter_mut().zip(sets.iter().zip(&digits.0)) {
                *slot = set[d];
            }
            assignment.rules[..k].iter().any(|r| r.matches(&state))
        });
        if shadowed {
            out.push(
                Diagnostic::new(
                    Severity::Warning,
                    "L_UNREACHABLE",
                    format!("rule #{} is unreachable: earlier rules match all of its states", k + 1),
                )
                .at_rule(k, rule.span),
            );
        }
    }

    if options.monotonicity && space.size() <= options.cap as u128 {
        out.extend(monotonicity(assignment, space));
    }
    out
}

fn monotonicity(assignment: &Assignment, space: &StateSpace) -> Vec<Diagnostic> {
    let mut drops = vec![0usize; space.dims()];
    for state in StateIter::new(space.level_counts()) {
        let Some((here, _)) = assignment.resolve(&state.0) else {
            continue;
        };
        for (i, axis) in space.axes().iter().enumerate() {
            if state.0[i] + 1 < axis.levels() {
                let mut up = state.0.clone();
                up[i] += 1;
                if let Some((next, _)) = assignment.resolve(&up) {
                    if next < here {
                        drops[i] += 1;
                    }
                }
            }
        }
    }
    drops
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| {
            Diagnostic::new(
                Severity::Info,
                "L_NON_MONOTONE",
                format!(
                    "grade decreases {n} time(s) when stepping up axis `{}`",
                    space.axis(i).id()
                ),
            )
        })
        .collect()
}

/// Convenience used by the CLI: which source decides each state.
pub fn coverage(assignment: &Assignment, space: &StateSpace) -> HashMap<&'static str, usize> {
    let mut counts = HashMap::new();
    for state in StateIter::new(space.level_counts()) {
        let key = match assignment.resolve(&state.0) {
            Some((_, Source::Entry(_))) => "entry",
            Some((_, Source::Rule(_))) => "rule",
            Some((_, Source::Default)) => "default",
            None => "uncovered",
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}
