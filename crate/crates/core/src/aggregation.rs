//! Per-level colors for the primary axes and single-axis context walks.
//!
//! For a slice `M` and risk cell `r = (r1, r2)`, the likelihood level `l1`
//! gets `M(r1, r2)` when `l1 == r1` and otherwise the most frequent grade of
//! column `l1`, ties going to the higher grade. Impact levels work the same
//! way over rows.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{GradeId, GradeScale, MatrixSlice, PartialSlice, RiskModel, RiskPosition, SliceSelector};

/// Most frequent grade; among equally frequent grades the highest one.
pub fn mode_with_tiebreak(scale: &GradeScale, values: &[GradeId]) -> Result<GradeId> {
    if values.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let mut counts = vec![0usize; scale.len()];
    for &g in values {
        let slot = counts
            .get_mut(g.0)
            .ok_or_else(|| Error::UnknownGrade(format!("#{}", g.0)))?;
        *slot += 1;
    }
    // max_by_key returns the last maximum, and ids ascend with rank
    let (best, _) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, &c)| c)
        .expect("scale is non-empty");
    Ok(GradeId(best))
}

/// Aggregated grade per level of one primary axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisAggregate {
    pub axis: String,
    pub per_level: Vec<GradeId>,
}

impl AxisAggregate {
    pub fn names<'a>(&self, scale: &'a GradeScale) -> Vec<&'a str> {
        self.per_level.iter().map(|&g| scale.name(g)).collect()
    }
}

/// Aggregates of both primary axes over a slice grid.
pub fn aggregate_slice(
    scale: &GradeScale,
    grid: &MatrixSlice,
    risk: RiskPosition,
) -> Result<(Vec<GradeId>, Vec<GradeId>)> {
    if risk.likelihood >= grid.likelihood_levels() || risk.impact >= grid.impact_levels() {
        return Err(Error::Slice(format!(
            "risk position ({}, {}) lies outside the {}x{} grid",
            risk.likelihood,
            risk.impact,
            grid.likelihood_levels(),
            grid.impact_levels()
        )));
    }
    let risk_grade = grid.get(risk.likelihood, risk.impact);
    let likelihood = (0..grid.likelihood_levels())
        .map(|l1| {
            if l1 == risk.likelihood {
                Ok(risk_grade)
            } else {
                mode_with_tiebreak(scale, grid.column(l1))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let impact = (0..grid.impact_levels())
        .map(|l2| {
            if l2 == risk.impact {
                Ok(risk_grade)
            } else {
                mode_with_tiebreak(scale, &grid.row(l2))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((likelihood, impact))
}

pub fn aggregate_axes(
    model: &RiskModel,
    sigma: &SliceSelector,
    risk: RiskPosition,
) -> Result<(AxisAggregate, AxisAggregate)> {
    let risk = RiskPosition::new(model.space(), risk.likelihood, risk.impact)?;
    let grid = model.slice(sigma)?;
    let (l, i) = aggregate_slice(model.scale(), &grid, risk)?;
    Ok((
        AxisAggregate {
            axis: model.space().likelihood().id().to_string(),
            per_level: l,
        },
        AxisAggregate {
            axis: model.space().impact().id().to_string(),
            per_level: i,
        },
    ))
}

/// Stable SHA-256 over the grid dimensions and grade names.
pub fn grid_digest(scale: &GradeScale, grid: &MatrixSlice) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}x{};", grid.likelihood_levels(), grid.impact_levels()).as_bytes());
    for l1 in 0..grid.likelihood_levels() {
        for &g in grid.column(l1) {
            h.update(scale.name(g).as_bytes());
            h.update(b",");
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStep {
    pub level: usize,
    pub sigma: SliceSelector,
    pub digest: String,
    /// Present only when grids were requested inline.
    pub grid: Option<MatrixSlice>,
    pub risk_grade: GradeId,
    pub likelihood: AxisAggregate,
    pub impact: AxisAggregate,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkResult {
    pub axis: String,
    pub risk: RiskPosition,
    pub steps: Vec<WalkStep>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WalkOptions {
    pub inline_grids: bool,
}

/// Steps one context axis through all of its levels with every other context
/// axis held at `fixed`, or at the model's default slice where `fixed` is
/// silent.
pub fn walk(model: &RiskModel, vary: &str, fixed: &PartialSlice, risk: RiskPosition) -> Result<WalkResult> {
    walk_with(model, vary, fixed, risk, WalkOptions::default())
}

pub fn walk_with(
    model: &RiskModel,
    vary: &str,
    fixed: &PartialSlice,
    risk: RiskPosition,
    options: WalkOptions,
) -> Result<WalkResult> {
    let space = model.space();
    let axis_index = space.axis_index(vary)?;
    if axis_index < 2 {
        return Err(Error::Slice(format!("`{vary}` is not a context axis and cannot be walked")));
    }
    let k = axis_index - 2;
    if fixed.contains(k) {
        return Err(Error::Slice(format!(
            "`{vary}` is both varied and fixed; drop it from the fixed levels"
        )));
    }
    let risk = RiskPosition::new(space, risk.likelihood, risk.impact)?;
    let mut steps = Vec::with_capacity(space.axis(axis_index).levels());
    for level in 0..space.axis(axis_index).levels() {
        let mut partial = fixed.clone();
        partial.set(space, vary, &crate::model::LevelRef::Index(level))?;
        let sigma = partial.complete(space, model.default_slice())?;
        let grid = model.slice(&sigma)?;
        let (l, i) = aggregate_slice(model.scale(), &grid, risk)?;
        let state = sigma.state(risk.likelihood, risk.impact);
        steps.push(WalkStep {
            level,
            digest: grid_digest(model.scale(), &grid),
            risk_grade: grid.get(risk.likelihood, risk.impact),
            likelihood: AxisAggregate {
                axis: space.likelihood().id().to_string(),
                per_level: l,
            },
            impact: AxisAggregate {
                axis: space.impact().id().to_string(),
                per_level: i,
            },
            violations: model.violations(&state)?.total,
            grid: options.inline_grids.then_some(grid),
            sigma,
        });
    }
    Ok(WalkResult {
        axis: vary.to_string(),
        risk,
        steps,
    })
}

/// JSON shape of a walk, with grade names instead of ids.
#[derive(Debug, Clone, Serialize)]
pub struct WalkReport {
    pub axis: String,
    pub risk: RiskPosition,
    pub steps: Vec<WalkStepReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkStepReport {
    pub level: usize,
    pub label: String,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Vec<String>>>,
    pub risk_grade: String,
    pub likelihood: Vec<String>,
    pub impact: Vec<String>,
    #[serde(rename = "V")]
    pub violations: usize,
}

impl WalkResult {
    pub fn report(&self, model: &RiskModel) -> WalkReport {
        let scale = model.scale();
        let axis = model
            .space()
            .axis_index(&self.axis)
            .map(|i| model.space().axis(i))
            .expect("walk axis comes from the same model");
        let names = |v: &[GradeId]| v.iter().map(|&g| scale.name(g).to_string()).collect();
        WalkReport {
            axis: self.axis.clone(),
            risk: self.risk,
            steps: self
                .steps
                .iter()
                .map(|s| WalkStepReport {
                    level: s.level,
                    label: axis.label(s.level).to_string(),
                    digest: s.digest.clone(),
                    grid: s.grid.as_ref().map(|g| g.to_names(scale)),
                    risk_grade: scale.name(s.risk_grade).to_string(),
                    likelihood: names(&s.likelihood.per_level),
                    impact: names(&s.impact.per_level),
                    violations: s.violations,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Grade;

    fn scale() -> GradeScale {
        let g = |id: &str, rank| Grade { id: id.into(), rank, color: "#123456".into() };
        GradeScale::new(vec![g("green", 0), g("lg", 1), g("yellow", 2), g("orange", 3), g("red", 4)]).unwrap()
    }

    fn ids(s: &GradeScale, names: &[&str]) -> Vec<GradeId> {
        names.iter().map(|n| s.lookup(n).unwrap()).collect()
    }

    #[test]
    fn mode_examples() {
        let s = scale();
        let m = |v: &[&str]| s.name(mode_with_tiebreak(&s, &ids(&s, v)).unwrap()).to_string();
        assert_eq!(m(&["green", "green", "lg", "lg", "lg"]), "lg");
        assert_eq!(m(&["green", "green", "orange", "orange", "lg"]), "orange");
        assert_eq!(m(&["red"]), "red");
        assert_eq!(mode_with_tiebreak(&s, &[]), Err(Error::EmptyMultiset));
    }

    #[test]
    fn risk_cell_overrides_its_row_and_column() {
        let s = scale();
        let g = ids(&s, &["green", "red"]);
        // 3x3 grid, all green except the centre
        let grid = MatrixSlice::from_fn(3, 3, |a, b| if (a, b) == (1, 1) { g[1] } else { g[0] });
        let (l, i) = aggregate_slice(&s, &grid, RiskPosition { likelihood: 1, impact: 1 }).unwrap();
        assert_eq!(l, vec![g[0], g[1], g[0]]);
        assert_eq!(i, vec![g[0], g[1], g[0]]);
        let err = aggregate_slice(&s, &grid, RiskPosition { likelihood: 3, impact: 0 }).unwrap_err();
        assert_eq!(err.code(), "E_SLICE");
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let s = scale();
        let a = MatrixSlice::from_fn(2, 2, |_, _| GradeId(0));
        let b = MatrixSlice::from_fn(2, 2, |x, y| GradeId(usize::from(x == 1 && y == 1)));
        assert_eq!(grid_digest(&s, &a), grid_digest(&s, &a.clone()));
        assert_ne!(grid_digest(&s, &a), grid_digest(&s, &b));
        assert_eq!(grid_digest(&s, &a).len(), 64);
    }
}
