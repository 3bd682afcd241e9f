//! Multidimensional polar risk heatmaps.
//!
//! A [`RiskModel`] assigns one grade to every state of a discrete state space
//! made of a likelihood axis, an impact axis and any number of context axes.
//! Fixing the context axes yields a classical 2D risk matrix (a slice);
//! the polar view lays every axis out as a sector of a disk with one ring per
//! level.

pub mod aggregation;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod model;
pub mod render;
pub mod report;
pub mod rules;

pub use aggregation::{aggregate_axes, mode_with_tiebreak, walk, AxisAggregate, WalkResult};
pub use document::{load_model, load_model_path, save_model, ModelDocument};
pub use error::{Error, Result};
pub use geometry::{layout, PolarLayout, PolarPoint};
pub use model::{
    Axis, AxisRole, ContextState, Grade, GradeId, GradeScale, LevelRef, MatrixSlice, PartialSlice, RiskModel,
    RiskPosition, SliceSelector, StateIter, StateSpace, Violations, DEFAULT_ENUMERATION_CAP,
};
pub use render::{render_matrix, render_polar, RenderSpec, View};
