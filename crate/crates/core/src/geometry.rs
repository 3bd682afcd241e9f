//! Polar embedding of a state space on the unit disk.
//!
//! Axis `i` (0-based) owns the angular sector `[theta0 + i*dt, theta0 + (i+1)*dt)`
//! with `dt = 2*pi/d`. Level `l` of an axis with `n` levels is the ring
//! `[l/n, (l+1)/n)`, and its marker radius is `(l + 1/2)/n`.
//!
//! Angles are radians measured from the +x axis toward +y. Renderers that
//! draw in a y-down frame (SVG) therefore see angles grow clockwise.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::StateSpace;

/// Boundary snapping tolerance for hit tests.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sector {
    pub start: f64,
    pub end: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ring {
    pub inner: f64,
    pub outer: f64,
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdArc {
    pub axis: usize,
    pub radius: f64,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarLayout {
    pub d: usize,
    pub theta0: f64,
    pub delta_theta: f64,
    pub sectors: Vec<Sector>,
    pub rings: Vec<Vec<Ring>>,
    pub threshold_arcs: Vec<ThresholdArc>,
}

/// Polar point in unit-disk coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub radius: f64,
    pub angle: f64,
}

pub fn layout(space: &StateSpace, theta0: f64) -> PolarLayout {
    let d = space.dims();
    let delta_theta = TAU / d as f64;
    let sectors = (0..d)
        .map(|i| Sector {
            start: theta0 + i as f64 * delta_theta,
            end: theta0 + (i + 1) as f64 * delta_theta,
            center: theta0 + (i as f64 + 0.5) * delta_theta,
        })
        .collect::<Vec<_>>();
    let rings = space
        .axes()
        .iter()
        .map(|a| {
            let n = a.levels() as f64;
            (0..a.levels())
                .map(|l| Ring {
                    inner: l as f64 / n,
                    outer: (l + 1) as f64 / n,
                    center: (l as f64 + 0.5) / n,
                })
                .collect()
        })
        .collect();
    let threshold_arcs = space
        .axes()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            a.threshold().map(|t| ThresholdArc {
                axis: i,
                radius: (t + 1) as f64 / a.levels() as f64,
                start: sectors[i].start,
                end: sectors[i].end,
            })
        })
        .collect();
    PolarLayout {
        d,
        theta0,
        delta_theta,
        sectors,
        rings,
        threshold_arcs,
    }
}

impl PolarLayout {
    /// Marker position for level `level` of axis `axis`: the ring's centre
    /// radius at the sector's centre angle.
    pub fn locate(&self, axis: usize, level: usize) -> Result<PolarPoint> {
        let ring = self
            .rings
            .get(axis)
            .ok_or_else(|| Error::UnknownAxis(format!("#{axis}")))?
            .get(level)
            .ok_or_else(|| Error::LevelOutOfRange {
                axis: format!("#{axis}"),
                index: level,
                levels: self.rings[axis].len(),
            })?;
        Ok(PolarPoint {
            radius: ring.center,
            angle: self.sectors[axis].center,
        })
    }

    /// The `(axis, level)` whose annular segment contains `point`, using
    /// half-open intervals in both angle and radius. `None` outside the
    /// unit disk.
    pub fn hit_test(&self, point: PolarPoint) -> Option<(usize, usize)> {
        if !(point.radius >= 0.0 && point.radius < 1.0) || !point.angle.is_finite() {
            return None;
        }
        let offset = (point.angle - self.theta0).rem_euclid(TAU);
        // a point just below a full turn wraps back into the first sector
        let axis = snapped_floor(offset / self.delta_theta) % self.d;
        let n = self.rings[axis].len();
        let level = snapped_floor(point.radius * n as f64).min(n - 1);
        Some((axis, level))
    }

    /// Converts a point in a Cartesian frame centred on the disk (unit radius)
    /// to polar coordinates.
    pub fn to_polar(x: f64, y: f64) -> PolarPoint {
        PolarPoint {
            radius: x.hypot(y),
            angle: y.atan2(x),
        }
    }
}

/// `floor(x)` for `x >= 0`, rounding up values within `SNAP` below an
/// integer so exact boundaries land in the upper cell.
fn snapped_floor(x: f64) -> usize {
    let mut k = x.floor();
    if x - k > 1.0 - SNAP {
        k += 1.0;
    }
    k.max(0.0) as usize
}
