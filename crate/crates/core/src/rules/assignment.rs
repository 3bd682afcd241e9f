use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{GradeId, GradeScale, LevelRef, StateIter, StateSpace, DEFAULT_ENUMERATION_CAP};
use crate::rules::dsl::{parse_rules, Clause, Comparator, Rule, Span};

/// An explicit grade for one fully specified state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub state: Vec<usize>,
    pub grade: GradeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolvedClause {
    pub axis: usize,
    pub cmp: Comparator,
    pub level: usize,
}

/// A rule whose axis, level and grade references have been checked against a
/// state space and grade scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedRule {
    pub clauses: Vec<ResolvedClause>,
    pub grade: GradeId,
    pub span: Span,
}

impl ResolvedRule {
    pub fn resolve(rule: &Rule, space: &StateSpace, scale: &GradeScale) -> Result<Self> {
        let mut clauses = Vec::with_capacity(rule.clauses.len());
        for c in &rule.clauses {
            let axis = space.axis_index(&c.axis)?;
            if clauses.iter().any(|r: &ResolvedClause| r.axis == axis) {
                return Err(Error::Invalid(format!(
                    "rule at {}:{} constrains axis `{}` twice",
                    rule.span.line, rule.span.column, c.axis
                )));
            }
            let level = space.axis(axis).resolve(&c.level)?;
            clauses.push(ResolvedClause { axis, cmp: c.cmp, level });
        }
        Ok(Self {
            clauses,
            grade: scale.lookup(&rule.grade)?,
            span: rule.span,
        })
    }

    pub fn matches(&self, levels: &[usize]) -> bool {
        self.clauses.iter().all(|c| c.cmp.holds(levels[c.axis], c.level))
    }

    /// Per axis, which levels satisfy this rule's clauses. The match set of the
    /// rule is the Cartesian product of these.
    pub fn match_sets(&self, space: &StateSpace) -> Vec<Vec<usize>> {
        space
            .axes()
            .iter()
            .enumerate()
            .map(|(i, axis)| {
                (0..axis.levels())
                    .filter(|&l| {
                        self.clauses
                            .iter()
                            .filter(|c| c.axis == i)
                            .all(|c| c.cmp.holds(l, c.level))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn match_count(&self, space: &StateSpace) -> u128 {
        self.match_sets(space)
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Back to the textual form. With `labels` the levels are written as
    /// label strings, otherwise as indices.
    pub fn to_rule(&self, space: &StateSpace, scale: &GradeScale, labels: bool) -> Rule {
        Rule {
            clauses: self
                .clauses
                .iter()
                .map(|c| {
                    let axis = space.axis(c.axis);
                    Clause {
                        axis: axis.id().to_string(),
                        cmp: c.cmp,
                        level: if labels {
                            LevelRef::Label(axis.label(c.level).to_string())
                        } else {
                            LevelRef::Index(c.level)
                        },
                    }
                })
                .collect(),
            grade: scale.name(self.grade).to_string(),
            span: self.span,
        }
    }
}

/// Parses and resolves rule text in one step.
pub fn resolve_rules(src: &str, space: &StateSpace, scale: &GradeScale) -> Result<Vec<ResolvedRule>> {
    parse_rules(src)?
        .iter()
        .map(|r| ResolvedRule::resolve(r, space, scale))
        .collect()
}

/// Explicit entries, ordered rules and an optional default grade.
///
/// Resolution order is: explicit entry, then the first matching rule, then
/// the default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub entries: Vec<Entry>,
    pub rules: Vec<ResolvedRule>,
    pub default: Option<GradeId>,
}

/// Which part of an assignment decided a state's grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Source {
    /// Index into `entries`.
    Entry(usize),
    /// Index into `rules`.
    Rule(usize),
    Default,
}

impl Assignment {
    pub fn constant(grade: GradeId) -> Self {
        Self {
            default: Some(grade),
            ..Self::default()
        }
    }

    /// Resolution without a precomputed table. `None` if nothing covers the
    /// state.
    pub fn resolve(&self, levels: &[usize]) -> Option<(GradeId, Source)> {
        self.resolve_with(levels, None)
    }

    fn resolve_with(
        &self,
        levels: &[usize],
        index: Option<&HashMap<Vec<usize>, usize>>,
    ) -> Option<(GradeId, Source)> {
        let entry = match index {
            Some(map) => map.get(levels).copied(),
            None => self.entries.iter().position(|e| e.state == levels),
        };
        if let Some(k) = entry {
            return Some((self.entries[k].grade, Source::Entry(k)));
        }
        if let Some(k) = self.rules.iter().position(|r| r.matches(levels)) {
            return Some((self.rules[k].grade, Source::Rule(k)));
        }
        self.default.map(|g| (g, Source::Default))
    }

    pub fn compile(self, space: &StateSpace, scale: &GradeScale) -> Result<CompiledAssignment> {
        self.compile_with_cap(space, scale, DEFAULT_ENUMERATION_CAP)
    }

    /// Checks references, entry conflicts and totality. Spaces up to `cap`
    /// states are tabulated; larger spaces must declare a default.
    pub fn compile_with_cap(self, space: &StateSpace, scale: &GradeScale, cap: u64) -> Result<CompiledAssignment> {
        let grade_ok = |g: GradeId| {
            if g.0 < scale.len() {
                Ok(())
            } else {
                Err(Error::UnknownGrade(format!("#{}", g.0)))
            }
        };
        if let Some(g) = self.default {
            grade_ok(g)?;
        }
        let mut index: HashMap<Vec<usize>, usize> = HashMap::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            space.check_state(&e.state)?;
            grade_ok(e.grade)?;
            if let Some(&prev) = index.get(&e.state) {
                if self.entries[prev].grade != e.grade {
                    return Err(Error::Conflict(format!(
                        "{}: `{}` vs `{}`",
                        space.describe(&e.state),
                        scale.name(self.entries[prev].grade),
                        scale.name(e.grade)
                    )));
                }
            } else {
                index.insert(e.state.clone(), k);
            }
        }
        for r in &self.rules {
            grade_ok(r.grade)?;
            for c in &r.clauses {
                if c.axis >= space.dims() {
                    return Err(Error::UnknownAxis(format!("#{}", c.axis)));
                }
                space.axis(c.axis).check_level(c.level)?;
            }
        }

        let size = space.size();
        let table = if size <= cap as u128 {
            let mut grades = Vec::with_capacity(size as usize);
            let mut sources = Vec::with_capacity(size as usize);
            let mut uncovered = 0u64;
            let mut examples = Vec::new();
            for state in StateIter::new(space.level_counts()) {
                match self.resolve_with(&state.0, Some(&index)) {
                    Some((g, s)) => {
                        grades.push(g);
                        sources.push(s);
                    }
                    None => {
                        uncovered += 1;
                        if examples.len() < 10 {
                            examples.push(space.describe(&state.0));
                        }
                    }
                }
            }
            if uncovered > 0 {
                return Err(Error::NonTotal {
                    count: uncovered,
                    examples,
                });
            }
            Some(Table { grades, sources })
        } else if self.default.is_none() {
            return Err(Error::EnumerationCap { size, cap });
        } else {
            None
        };

        Ok(CompiledAssignment {
            assignment: self,
            index,
            table,
        })
    }
}

#[derive(Debug, Clone)]
struct Table {
    grades: Vec<GradeId>,
    sources: Vec<Source>,
}

/// An assignment proven total. Small spaces are served from a dense table,
/// large ones (which always have a default) are evaluated on demand.
#[derive(Debug, Clone)]
pub struct CompiledAssignment {
    assignment: Assignment,
    index: HashMap<Vec<usize>, usize>,
    table: Option<Table>,
}

impl CompiledAssignment {
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }

    /// Grade of an in-range state.
    pub fn grade(&self, space: &StateSpace, levels: &[usize]) -> GradeId {
        match &self.table {
            Some(t) => t.grades[space.linear_index(levels)],
            None => self.lazy(levels).0,
        }
    }

    pub fn source(&self, space: &StateSpace, levels: &[usize]) -> Source {
        match &self.table {
            Some(t) => t.sources[space.linear_index(levels)],
            None => self.lazy(levels).1,
        }
    }

    fn lazy(&self, levels: &[usize]) -> (GradeId, Source) {
        self.assignment
            .resolve_with(levels, Some(&self.index))
            .expect("compiled assignments without a table always have a default")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axis, AxisRole, Grade};

    fn two_by_two() -> (StateSpace, GradeScale) {
        let labels = || vec!["lo".to_string(), "hi".to_string()];
        let space = StateSpace::new(vec![
            Axis::new("p", AxisRole::Likelihood, labels()).unwrap(),
            Axis::new("i", AxisRole::Impact, labels()).unwrap(),
        ])
        .unwrap();
        let scale = GradeScale::new(vec![
            Grade { id: "green".into(), rank: 0, color: "#00ff00".into() },
            Grade { id: "red".into(), rank: 1, color: "#ff0000".into() },
        ])
        .unwrap();
        (space, scale)
    }

    #[test]
    fn constant_assignment_is_total() {
        let (space, scale) = two_by_two();
        let c = Assignment::constant(GradeId(0)).compile(&space, &scale).unwrap();
        for s in space.enumerate().unwrap() {
            assert_eq!(c.grade(&space, &s.0), GradeId(0));
            assert_eq!(c.source(&space, &s.0), Source::Default);
        }
    }

    #[test]
    fn non_total_names_the_uncovered_state() {
        let (space, scale) = two_by_two();
        // covers (0,0), (0,1), (1,0) but not (1,1)
        let rules = resolve_rules("when p == 0 then green;\nwhen i == 0 then green;", &space, &scale).unwrap();
        let err = Assignment { rules, ..Default::default() }
            .compile(&space, &scale)
            .unwrap_err();
        match &err {
            Error::NonTotal { count, examples } => {
                assert_eq!(*count, 1);
                assert_eq!(examples, &vec!["(1,1) [p=hi, i=hi]".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err.code(), "E_NON_TOTAL");
    }

    #[test]
    fn entries_beat_rules_beat_default() {
        let (space, scale) = two_by_two();
        let rules = resolve_rules("when p == 1 then red;", &space, &scale).unwrap();
        let a = Assignment {
            entries: vec![Entry { state: vec![1, 1], grade: GradeId(0) }],
            rules,
            default: Some(GradeId(0)),
        };
        let c = a.compile(&space, &scale).unwrap();
        assert_eq!(c.source(&space, &[1, 1]), Source::Entry(0));
        assert_eq!(c.grade(&space, &[1, 1]), GradeId(0));
        assert_eq!(c.source(&space, &[1, 0]), Source::Rule(0));
        assert_eq!(c.grade(&space, &[1, 0]), GradeId(1));
        assert_eq!(c.source(&space, &[0, 0]), Source::Default);
    }

    #[test]
    fn conflicting_entries_are_rejected() {
        let (space, scale) = two_by_two();
        let a = Assignment {
            entries: vec![
                Entry { state: vec![0, 1], grade: GradeId(0) },
                Entry { state: vec![0, 1], grade: GradeId(1) },
            ],
            rules: vec![],
            default: Some(GradeId(0)),
        };
        assert_eq!(a.compile(&space, &scale).unwrap_err().code(), "E_CONFLICT");
    }

    #[test]
    fn resolution_reports_unknown_names() {
        let (space, scale) = two_by_two();
        let e = resolve_rules("when bogus == 1 then red;", &space, &scale).unwrap_err();
        assert_eq!(e, Error::UnknownAxis("bogus".into()));
        let e = resolve_rules("when p == \"mid\" then red;", &space, &scale).unwrap_err();
        assert_eq!(e.code(), "E_UNKNOWN_LABEL");
        let e = resolve_rules("when p == 0 then pink;", &space, &scale).unwrap_err();
        assert_eq!(e, Error::UnknownGrade("pink".into()));
        let e = resolve_rules("when p == 2 then red;", &space, &scale).unwrap_err();
        assert_eq!(e.code(), "E_LEVEL_RANGE");
    }

    #[test]
    fn lazy_mode_above_cap() {
        let (space, scale) = two_by_two();
        let rules = resolve_rules("when p == 1 and i == 1 then red;", &space, &scale).unwrap();
        let no_default = Assignment { rules: rules.clone(), ..Default::default() };
        assert_eq!(
            no_default.compile_with_cap(&space, &scale, 3).unwrap_err().code(),
            "E_ENUM_CAP"
        );
        let c = Assignment { rules, default: Some(GradeId(0)), ..Default::default() }
            .compile_with_cap(&space, &scale, 3)
            .unwrap();
        assert!(!c.is_tabulated());
        assert_eq!(c.grade(&space, &[1, 1]), GradeId(1));
        assert_eq!(c.grade(&space, &[0, 1]), GradeId(0));
    }
}
