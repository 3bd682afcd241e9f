//! JSON shapes shared by the command line, the HTTP API and the browser demo.

use serde::Serialize;

use crate::aggregation::aggregate_axes;
use crate::error::Result;
use crate::model::{RiskModel, RiskPosition, SliceSelector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectedLevel {
    pub axis: String,
    pub level: usize,
    pub label: String,
}

/// One slice. `grid[l1][l2]` is the grade at likelihood `l1`, impact `l2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub slice: Vec<SelectedLevel>,
    pub likelihood: String,
    pub impact: String,
    pub grid: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AggregateReport {
    pub slice: Vec<SelectedLevel>,
    pub risk: RiskPosition,
    pub risk_grade: String,
    pub likelihood: Vec<String>,
    pub impact: Vec<String>,
}

pub fn selected(model: &RiskModel, sigma: &SliceSelector) -> Vec<SelectedLevel> {
    model
        .space()
        .context_axes()
        .iter()
        .zip(sigma.levels())
        .map(|(a, &l)| SelectedLevel {
            axis: a.id().to_string(),
            level: l,
            label: a.label(l).to_string(),
        })
        .collect()
}

pub fn slice_report(model: &RiskModel, sigma: &SliceSelector) -> Result<SliceReport> {
    let grid = model.slice(sigma)?;
    Ok(SliceReport {
        slice: selected(model, sigma),
        likelihood: model.space().likelihood().id().to_string(),
        impact: model.space().impact().id().to_string(),
        grid: grid.to_names(model.scale()),
    })
}

pub fn aggregate_report(model: &RiskModel, sigma: &SliceSelector, risk: RiskPosition) -> Result<AggregateReport> {
    let (l, i) = aggregate_axes(model, sigma, risk)?;
    let cell = model.grade_of(&sigma.state(risk.likelihood, risk.impact))?;
    Ok(AggregateReport {
        slice: selected(model, sigma),
        risk,
        risk_grade: model.scale().name(cell).to_string(),
        likelihood: l.names(model.scale()).into_iter().map(String::from).collect(),
        impact: i.names(model.scale()).into_iter().map(String::from).collect(),
    })
}

/// CSV of a slice: one row per impact level, highest first, with the impact
/// label in the first column and a header row of likelihood labels.
pub fn slice_csv_rows(model: &RiskModel, report: &SliceReport) -> Vec<Vec<String>> {
    let space = model.space();
    let mut rows = Vec::with_capacity(space.impact().levels() + 1);
    let mut header = vec![format!("{}\\{}", space.impact().id(), space.likelihood().id())];
    header.extend(space.likelihood().labels().iter().cloned());
    rows.push(header);
    for l2 in (0..space.impact().levels()).rev() {
        let mut row = vec![space.impact().label(l2).to_string()];
        row.extend(report.grid.iter().map(|col| col[l2].clone()));
        rows.push(row);
    }
    rows
}
