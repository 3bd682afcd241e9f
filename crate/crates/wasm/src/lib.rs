//! Browser bindings for the demo page in `www/`.
//!
//! [`Session`] holds everything the page needs between clicks and is plain
//! Rust so it can be tested natively; [`Explorer`] is the thin JS wrapper.

use ndpolar_core::aggregation::walk;
use ndpolar_core::model::{LevelRef, PartialSlice};
use ndpolar_core::render::{matrix_hit, polar_hit};
use ndpolar_core::report::aggregate_report;
use ndpolar_core::{fixtures, load_model, render_matrix, render_polar, RenderSpec, RiskModel, RiskPosition, SliceSelector};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// What a click landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picked {
    /// A context axis level; `axis` counts all axes, so it is at least 2.
    Level { axis: usize, level: usize },
    Risk(RiskPosition),
}

#[derive(Debug, Clone)]
pub struct Session {
    model: RiskModel,
    sigma: Vec<usize>,
    risk: RiskPosition,
    pub polar: RenderSpec,
    pub matrix: RenderSpec,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

impl Session {
    pub fn new(model: RiskModel) -> Self {
        let ctx = model.space().context_axes().len();
        let sigma = match model.default_slice() {
            Some(s) => s.levels().to_vec(),
            None => vec![0; ctx],
        };
        let risk = model.risk().unwrap_or(RiskPosition {
            likelihood: 0,
            impact: 0,
        });
        Self {
            model,
            sigma,
            risk,
            polar: RenderSpec::polar(),
            matrix: RenderSpec::matrix(),
        }
    }

    /// Accepts a built-in fixture name or a model document.
    pub fn open(source: &str) -> Result<Self, String> {
        let text = fixtures::by_name(source).unwrap_or(source);
        load_model(text).map(Self::new).map_err(err)
    }

    pub fn model(&self) -> &RiskModel {
        &self.model
    }

    pub fn sigma(&self) -> SliceSelector {
        SliceSelector::new(self.model.space(), self.sigma.clone()).expect("levels are checked on every update")
    }

    pub fn risk(&self) -> RiskPosition {
        self.risk
    }

    pub fn set_level(&mut self, axis: &str, level: &str) -> Result<(), String> {
        let space = self.model.space();
        let i = space.axis_index(axis).map_err(err)?;
        if i < 2 {
            return Err(format!("`{axis}` is not a context axis"));
        }
        self.sigma[i - 2] = space.axis(i).resolve_text(level).map_err(err)?;
        Ok(())
    }

    pub fn set_risk(&mut self, likelihood: usize, impact: usize) -> Result<(), String> {
        self.risk = RiskPosition::new(self.model.space(), likelihood, impact).map_err(err)?;
        Ok(())
    }

    /// Polar click: a context sector moves the slice, a likelihood or impact
    /// sector moves that half of the risk cell.
    pub fn click_polar(&mut self, x: f64, y: f64) -> Option<Picked> {
        let (axis, level) = polar_hit(&self.model, &self.polar, x, y)?;
        match axis {
            0 => self.risk.likelihood = level,
            1 => self.risk.impact = level,
            k => self.sigma[k - 2] = level,
        }
        Some(match axis {
            0 | 1 => Picked::Risk(self.risk),
            _ => Picked::Level { axis, level },
        })
    }

    pub fn click_matrix(&mut self, x: f64, y: f64) -> Option<Picked> {
        let p = matrix_hit(&self.model, &self.matrix, x, y)?;
        self.risk = p;
        Some(Picked::Risk(p))
    }

    pub fn polar_svg(&self) -> Result<String, String> {
        render_polar(&self.model, &self.sigma(), self.risk, &self.polar).map_err(err)
    }

    pub fn matrix_svg(&self) -> Result<String, String> {
        render_matrix(&self.model, &self.sigma(), self.risk, &self.matrix).map_err(err)
    }

    /// Axes with their labels and current levels, for building the controls.
    pub fn axes_json(&self) -> Value {
        let space = self.model.space();
        let axes: Vec<Value> = space
            .axes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let level = match i {
                    0 => self.risk.likelihood,
                    1 => self.risk.impact,
                    k => self.sigma[k - 2],
                };
                json!({
                    "id": a.id(),
                    "title": a.title(),
                    "labels": a.labels(),
                    "context": i >= 2,
                    "level": level,
                })
            })
            .collect();
        json!({ "name": self.model.name(), "axes": axes })
    }

    /// Aggregates, risk grade and threshold violations at the current state.
    pub fn state_json(&self) -> Result<Value, String> {
        let sigma = self.sigma();
        let report = aggregate_report(&self.model, &sigma, self.risk).map_err(err)?;
        let violations = self
            .model
            .violations(&sigma.state(self.risk.likelihood, self.risk.impact))
            .map_err(err)?;
        let mut v = serde_json::to_value(report).map_err(err)?;
        v["violations"] = serde_json::to_value(violations).map_err(err)?;
        Ok(v)
    }

    /// Steps `axis` through its levels from the current state.
    pub fn walk_json(&self, axis: &str) -> Result<Value, String> {
        let space = self.model.space();
        let vary = space.axis_index(axis).map_err(err)?;
        let mut fixed = PartialSlice::default();
        for (k, a) in space.context_axes().iter().enumerate() {
            if k + 2 != vary {
                fixed.set(space, a.id(), &LevelRef::Index(self.sigma[k])).map_err(err)?;
            }
        }
        let result = walk(&self.model, axis, &fixed, self.risk).map_err(err)?;
        serde_json::to_value(result.report(&self.model)).map_err(err)
    }
}

/// The demo page's handle on a [`Session`].
#[wasm_bindgen]
pub struct Explorer {
    inner: Session,
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new(source: &str) -> Result<Explorer, JsError> {
        Session::open(source).map(|inner| Explorer { inner }).map_err(js)
    }

    #[wasm_bindgen(js_name = fixtureNames)]
    pub fn fixture_names() -> Vec<String> {
        fixtures::ALL.iter().map(|(n, _)| n.to_string()).collect()
    }

    pub fn axes(&self) -> String {
        self.inner.axes_json().to_string()
    }

    pub fn state(&self) -> Result<String, JsError> {
        self.inner.state_json().map(|v| v.to_string()).map_err(js)
    }

    #[wasm_bindgen(js_name = setLevel)]
    pub fn set_level(&mut self, axis: &str, level: &str) -> Result<(), JsError> {
        self.inner.set_level(axis, level).map_err(js)
    }

    #[wasm_bindgen(js_name = setRisk)]
    pub fn set_risk(&mut self, likelihood: usize, impact: usize) -> Result<(), JsError> {
        self.inner.set_risk(likelihood, impact).map_err(js)
    }

    /// True when the click changed the state.
    #[wasm_bindgen(js_name = clickPolar)]
    pub fn click_polar(&mut self, x: f64, y: f64) -> bool {
        self.inner.click_polar(x, y).is_some()
    }

    #[wasm_bindgen(js_name = clickMatrix)]
    pub fn click_matrix(&mut self, x: f64, y: f64) -> bool {
        self.inner.click_matrix(x, y).is_some()
    }

    #[wasm_bindgen(js_name = polarSvg)]
    pub fn polar_svg(&self) -> Result<String, JsError> {
        self.inner.polar_svg().map_err(js)
    }

    #[wasm_bindgen(js_name = matrixSvg)]
    pub fn matrix_svg(&self) -> Result<String, JsError> {
        self.inner.matrix_svg().map_err(js)
    }

    pub fn walk(&self, axis: &str) -> Result<String, JsError> {
        self.inner.walk_json(axis).map(|v| v.to_string()).map_err(js)
    }
}
