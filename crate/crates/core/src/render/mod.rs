//! Deterministic SVG output for the matrix slice view and the polar view.
//!
//! All coordinates are written with exactly six decimals, so identical inputs
//! produce byte-identical documents.

mod matrix;
mod polar;
mod svg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_hex_color, GradeId, GradeScale, RiskModel, RiskPosition, SliceSelector};

pub use matrix::{matrix_hit, render_matrix};
pub use polar::{polar_hit, render_polar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum View {
    Matrix,
    Polar,
}

impl std::str::FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(View::Matrix),
            "polar" => Ok(View::Polar),
            other => Err(Error::Render(format!("unknown view `{other}` (expected matrix or polar)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub view: View,
    pub width: u32,
    pub height: u32,
    /// Grade id to `#rrggbb`, overriding the model's palette.
    pub theme: BTreeMap<String, String>,
    pub show_labels: bool,
    pub show_thresholds: bool,
    /// Overrides the model's polar rotation (radians).
    pub theta0: Option<f64>,
}

/// Width of the matrix view that stroke widths are calibrated against.
pub const MATRIX_REFERENCE_WIDTH: f64 = 640.0;
/// Side of the polar view that stroke widths are calibrated against.
pub const POLAR_REFERENCE_SIZE: f64 = 560.0;

impl RenderSpec {
    pub fn matrix() -> Self {
        Self {
            view: View::Matrix,
            width: 640,
            height: 420,
            theme: BTreeMap::new(),
            show_labels: true,
            show_thresholds: true,
            theta0: None,
        }
    }

    pub fn polar() -> Self {
        Self {
            view: View::Polar,
            width: 560,
            height: 560,
            ..Self::matrix()
        }
    }

    pub fn for_view(view: View) -> Self {
        match view {
            View::Matrix => Self::matrix(),
            View::Polar => Self::polar(),
        }
    }

    pub fn validate(&self, scale: &GradeScale) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Render("width and height must be positive".into()));
        }
        for (grade, color) in &self.theme {
            scale
                .lookup(grade)
                .map_err(|_| Error::Render(format!("theme names unknown grade `{grade}`")))?;
            if !is_hex_color(color) {
                return Err(Error::Render(format!("theme color `{color}` is not #rrggbb")));
            }
        }
        Ok(())
    }

    pub(crate) fn color<'a>(&'a self, scale: &'a GradeScale, g: GradeId) -> &'a str {
        self.theme
            .get(scale.name(g))
            .map(String::as_str)
            .unwrap_or_else(|| scale.color(g))
    }
}

/// Renders whichever view `spec` asks for.
pub fn render(model: &RiskModel, sigma: &SliceSelector, risk: RiskPosition, spec: &RenderSpec) -> Result<String> {
    match spec.view {
        View::Matrix => render_matrix(model, sigma, risk, spec),
        View::Polar => render_polar(model, sigma, risk, spec),
    }
}
