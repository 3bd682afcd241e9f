//! JSON model documents (`"format": "ndpolar/1"`).
//!
//! Labels are accepted anywhere an index is and resolved on load. Saving
//! writes the canonical form: sorted keys, indices instead of labels, rules as
//! DSL text.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Axis, AxisRole, Grade, GradeScale, LevelRef, PartialSlice, RiskModel, RiskPosition, SliceSelector, StateSpace,
};
use crate::rules::{print_rules, resolve_rules, Assignment, Clause, Comparator, Entry, ResolvedRule, Rule, Span};

pub const FORMAT: &str = "ndpolar/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format: String,
    pub name: String,
    pub grades: Vec<Grade>,
    pub axes: Vec<AxisDoc>,
    pub assignment: AssignmentDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk: Option<RiskDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_slice: Option<BTreeMap<String, LevelRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polar: Option<PolarDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub role: AxisRole,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<LevelRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<RulesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub state: Vec<LevelRef>,
    pub grade: String,
}

/// Rules either as DSL text or as structured JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RulesDoc {
    Text(String),
    Structured(Vec<RuleDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub when: Vec<ClauseDoc>,
    pub then: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseDoc {
    pub axis: String,
    pub op: String,
    pub level: LevelRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskDoc {
    pub likelihood: LevelRef,
    pub impact: LevelRef,
}

/// Polar rotation in degrees (the model stores radians).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarDoc {
    pub theta0_deg: f64,
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Validates every cross-reference and compiles the assignment.
    pub fn into_model(self) -> Result<RiskModel> {
        if self.format != FORMAT {
            return Err(Error::Schema(format!(
                "unsupported format `{}` (expected `{FORMAT}`)",
                self.format
            )));
        }
        let scale = GradeScale::new(self.grades)?;
        let mut axes = Vec::with_capacity(self.axes.len());
        for a in self.axes {
            let mut axis = Axis::new(a.id, a.role, a.labels)?;
            if let Some(t) = a.title {
                axis = axis.with_title(t);
            }
            if let Some(t) = a.threshold {
                let level = axis.resolve(&t)?;
                axis = axis.with_threshold(level)?;
            }
            if let Some(p) = a.profile {
                let grades = p.iter().map(|g| scale.lookup(g)).collect::<Result<Vec<_>>>()?;
                axis = axis.with_profile(grades)?;
            }
            axes.push(axis);
        }
        let space = StateSpace::new(axes)?;

        let mut entries = Vec::with_capacity(self.assignment.entries.len());
        for e in &self.assignment.entries {
            if e.state.len() != space.dims() {
                return Err(Error::StateArity {
                    expected: space.dims(),
                    got: e.state.len(),
                });
            }
            let state = e
                .state
                .iter()
                .zip(space.axes())
                .map(|(l, a)| a.resolve(l))
                .collect::<Result<Vec<_>>>()?;
            entries.push(Entry {
                state,
                grade: scale.lookup(&e.grade)?,
            });
        }
        let rules = match &self.assignment.rules {
            None => Vec::new(),
            Some(RulesDoc::Text(src)) => resolve_rules(src, &space, &scale)?,
            Some(RulesDoc::Structured(list)) => list
                .iter()
                .map(|r| ResolvedRule::resolve(&r.to_rule()?, &space, &scale))
                .collect::<Result<Vec<_>>>()?,
        };
        let default = self.assignment.default.as_deref().map(|g| scale.lookup(g)).transpose()?;
        let assignment = Assignment { entries, rules, default };

        let mut model = RiskModel::new(self.name, scale, space, assignment)?;
        if let Some(r) = self.risk {
            let space = model.space();
            let risk = RiskPosition::new(
                space,
                space.likelihood().resolve(&r.likelihood)?,
                space.impact().resolve(&r.impact)?,
            )?;
            model = model.with_risk(risk)?;
        }
        if let Some(ds) = self.default_slice {
            let mut partial = PartialSlice::default();
            for (axis, level) in &ds {
                partial.set(model.space(), axis, level)?;
            }
            let sigma = partial.complete(model.space(), None)?;
            model = model.with_default_slice(sigma)?;
        }
        if let Some(p) = self.polar {
            model = model.with_theta0(p.theta0_deg.to_radians());
        }
        Ok(model)
    }

    /// Canonical document for a model.
    pub fn from_model(model: &RiskModel) -> Self {
        let space = model.space();
        let scale = model.scale();
        let a = model.assignment().assignment();
        let name = |g| scale.name(g).to_string();
        let rules: Vec<Rule> = a.rules.iter().map(|r| r.to_rule(space, scale, false)).collect();
        Self {
            format: FORMAT.to_string(),
            name: model.name().to_string(),
            grades: scale.grades().to_vec(),
            axes: space
                .axes()
                .iter()
                .map(|ax| AxisDoc {
                    id: ax.id().to_string(),
                    title: ax.explicit_title().map(str::to_string),
                    role: ax.role(),
                    labels: ax.labels().to_vec(),
                    threshold: ax.threshold().map(LevelRef::Index),
                    profile: ax.profile().map(|p| p.iter().map(|&g| name(g)).collect()),
                })
                .collect(),
            assignment: AssignmentDoc {
                entries: a
                    .entries
                    .iter()
                    .map(|e| EntryDoc {
                        state: e.state.iter().map(|&l| LevelRef::Index(l)).collect(),
                        grade: name(e.grade),
                    })
                    .collect(),
                rules: (!rules.is_empty()).then(|| RulesDoc::Text(print_rules(&rules))),
                default: a.default.map(name),
            },
            risk: model.risk().map(|r| RiskDoc {
                likelihood: LevelRef::Index(r.likelihood),
                impact: LevelRef::Index(r.impact),
            }),
            default_slice: model.default_slice().map(|s| slice_doc(space, s)),
            polar: (model.theta0() != 0.0).then(|| PolarDoc {
                theta0_deg: model.theta0().to_degrees(),
            }),
        }
    }

    /// Pretty JSON with keys sorted.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents always serialize");
        let mut s = serde_json::to_string_pretty(&value).expect("values always serialize");
        s.push('\n');
        s
    }
}

fn slice_doc(space: &StateSpace, sigma: &SliceSelector) -> BTreeMap<String, LevelRef> {
    space
        .context_axes()
        .iter()
        .zip(sigma.levels())
        .map(|(a, &l)| (a.id().to_string(), LevelRef::Index(l)))
        .collect()
}

impl RuleDoc {
    fn to_rule(&self) -> Result<Rule> {
        let clauses = self
            .when
            .iter()
            .map(|c| {
                Ok(Clause {
                    axis: c.axis.clone(),
                    cmp: Comparator::from_symbol(&c.op)
                        .ok_or_else(|| Error::Schema(format!("unknown comparator `{}`", c.op)))?,
                    level: c.level.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if clauses.is_empty() {
            return Err(Error::Schema("a structured rule needs at least one `when` clause".into()));
        }
        Ok(Rule {
            clauses,
            grade: self.then.clone(),
            span: Span::default(),
        })
    }
}

pub fn load_model(text: &str) -> Result<RiskModel> {
    ModelDocument::parse(text)?.into_model()
}

pub fn load_model_path(path: impl AsRef<Path>) -> Result<RiskModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_model(&text)
}

pub fn save_model(model: &RiskModel) -> String {
    ModelDocument::from_model(model).to_canonical_json()
}

/// True when both models have the same axes, grades, risk, default slice,
/// rotation and the same grade for every state.
pub fn same_semantics(a: &RiskModel, b: &RiskModel) -> bool {
    if a.name() != b.name()
        || a.scale() != b.scale()
        || a.space() != b.space()
        || a.risk() != b.risk()
        || a.default_slice() != b.default_slice()
        || (a.theta0() - b.theta0()).abs() > 1e-12
    {
        return false;
    }
    match a.space().enumerate() {
        Ok(mut states) => states.all(|s| a.grade_of(&s).ok() == b.grade_of(&s).ok()),
        Err(_) => a.assignment().assignment() == b.assignment().assignment(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cooling_fixture_loads() {
        let m = load_model(fixtures::COOLING).unwrap();
        assert_eq!(m.space().dims(), 4);
        assert_eq!(m.space().size(), 300);
        assert_eq!(m.risk(), Some(RiskPosition { likelihood: 2, impact: 2 }));
        assert_eq!(m.default_slice().unwrap().levels(), &[1, 0]);
    }

    #[test]
    fn missing_grades_is_a_schema_error() {
        let mut v: serde_json::Value = serde_json::from_str(fixtures::COOLING).unwrap();
        v.as_object_mut().unwrap().remove("grades");
        let err = load_model(&v.to_string()).unwrap_err();
        assert_eq!(err.code(), "E_SCHEMA");
        assert!(err.to_string().contains("grades"), "{err}");
    }

    #[test]
    fn unknown_grade_in_rule() {
        let mut v: serde_json::Value = serde_json::from_str(fixtures::COOLING).unwrap();
        v["assignment"]["rules"] = serde_json::json!("when cooling == \"N\" then pink;");
        let err = load_model(&v.to_string()).unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_GRADE");
        assert!(err.to_string().contains("pink"));
    }

    #[test]
    fn wrong_format_and_unknown_keys() {
        let mut v: serde_json::Value = serde_json::from_str(fixtures::COOLING).unwrap();
        v["format"] = "ndpolar/9".into();
        assert_eq!(load_model(&v.to_string()).unwrap_err().code(), "E_SCHEMA");
        let mut v: serde_json::Value = serde_json::from_str(fixtures::COOLING).unwrap();
        v["colour"] = "x".into();
        assert_eq!(load_model(&v.to_string()).unwrap_err().code(), "E_SCHEMA");
    }

    #[test]
    fn structured_rules_match_text_rules() {
        let m = load_model(fixtures::STYLISED).unwrap();
        let saved = save_model(&m);
        assert!(saved.contains("\"rules\": \"when axis-1 >= 3 and axis-2 >= 2 then red;"));
        let again = load_model(&saved).unwrap();
        assert!(same_semantics(&m, &again));
    }

    #[test]
    fn canonical_form_uses_indices_and_sorted_keys() {
        let m = load_model(fixtures::COOLING).unwrap();
        let saved = save_model(&m);
        let v: serde_json::Value = serde_json::from_str(&saved).unwrap();
        assert_eq!(v["risk"]["likelihood"], 2);
        assert_eq!(v["default_slice"]["maintenance"], 0);
        assert_eq!(v["axes"][2]["threshold"], 2);
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let pos = |k: &str| saved.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("assignment") < pos("axes") && pos("axes") < pos("default_slice"));
        // saving the reloaded model is a fixpoint on the text as well
        assert_eq!(save_model(&load_model(&saved).unwrap()), saved);
    }

    #[test]
    fn entry_arity_is_checked() {
        let mut v: serde_json::Value = serde_json::from_str(fixtures::CLASSIC_2D).unwrap();
        v["assignment"]["entries"][0]["state"] = serde_json::json!([0, 0, 0]);
        assert_eq!(load_model(&v.to_string()).unwrap_err().code(), "E_STATE_ARITY");
    }
}
