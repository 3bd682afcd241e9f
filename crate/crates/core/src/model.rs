//! State space, grade scale and the grade mapping over it.
//!
//! A model has `d >= 2` axes. Axis 0 is the likelihood axis, axis 1 the impact
//! axis and every further axis is a context axis. Levels are 0-based indices
//! into each axis's ordered label list, ordered by increasing intensity.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{Assignment, CompiledAssignment, Source};

/// Default upper bound on `|L|` for anything that enumerates the state space.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Index of a grade in its [`GradeScale`]. Equal to the grade's rank, so the
/// derived ordering is the risk order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GradeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grade {
    pub id: String,
    pub rank: usize,
    pub color: String,
}

/// Finite, totally ordered set of risk grades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradeScale {
    grades: Vec<Grade>,
}

impl GradeScale {
    /// Builds a scale. Grades may be given in any order; ranks must be exactly
    /// `0..len` after sorting.
    pub fn new(mut grades: Vec<Grade>) -> Result<Self> {
        if grades.len() < 2 {
            return Err(Error::Invalid("a grade scale needs at least 2 grades".into()));
        }
        grades.sort_by_key(|g| g.rank);
        let mut ids = HashSet::new();
        for (expected, grade) in grades.iter().enumerate() {
            if grade.rank != expected {
                return Err(Error::Invalid(format!(
                    "grade ranks must be 0..{} without gaps or duplicates (grade `{}` has rank {})",
                    grades.len(),
                    grade.id,
                    grade.rank
                )));
            }
            if grade.id.is_empty() {
                return Err(Error::Invalid("grade ids must be non-empty".into()));
            }
            if !ids.insert(grade.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate grade id `{}`", grade.id)));
            }
            if !is_hex_color(&grade.color) {
                return Err(Error::Invalid(format!(
                    "grade `{}` has color `{}`, expected #rrggbb",
                    grade.id, grade.color
                )));
            }
        }
        Ok(Self { grades })
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn ids(&self) -> impl Iterator<Item = GradeId> + '_ {
        (0..self.grades.len()).map(GradeId)
    }

    pub fn get(&self, id: GradeId) -> &Grade {
        &self.grades[id.0]
    }

    pub fn name(&self, id: GradeId) -> &str {
        &self.grades[id.0].id
    }

    pub fn color(&self, id: GradeId) -> &str {
        &self.grades[id.0].color
    }

    pub fn lookup(&self, name: &str) -> Result<GradeId> {
        self.grades
            .iter()
            .position(|g| g.id == name)
            .map(GradeId)
            .ok_or_else(|| Error::UnknownGrade(name.to_string()))
    }
}

pub(crate) fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisRole {
    Likelihood,
    Impact,
    Context,
}

impl fmt::Display for AxisRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisRole::Likelihood => "likelihood",
            AxisRole::Impact => "impact",
            AxisRole::Context => "context",
        })
    }
}

/// A reference to a level, either by index or by label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelRef {
    Index(usize),
    Label(String),
}

impl fmt::Display for LevelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelRef::Index(i) => write!(f, "{i}"),
            LevelRef::Label(s) => write!(f, "{s:?}"),
        }
    }
}

/// One discrete, ordered dimension of the state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    id: String,
    title: Option<String>,
    role: AxisRole,
    labels: Vec<String>,
    threshold: Option<usize>,
    profile: Option<Vec<GradeId>>,
}

impl Axis {
    pub fn new(id: impl Into<String>, role: AxisRole, labels: Vec<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::Invalid("axis ids must be non-empty".into()));
        }
        if labels.len() < 2 {
            return Err(Error::Invalid(format!("axis `{id}` needs at least 2 levels")));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::Invalid(format!("axis `{id}` repeats level label `{label}`")));
            }
        }
        Ok(Self {
            id,
            title: None,
            role,
            labels,
            threshold: None,
            profile: None,
        })
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn with_threshold(mut self, level: usize) -> Result<Self> {
        self.check_level(level)?;
        self.threshold = Some(level);
        Ok(self)
    }

    pub fn with_profile(mut self, profile: Vec<GradeId>) -> Result<Self> {
        if profile.len() != self.labels.len() {
            return Err(Error::Invalid(format!(
                "profile of axis `{}` has {} entries, expected {}",
                self.id,
                profile.len(),
                self.labels.len()
            )));
        }
        self.profile = Some(profile);
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Human-readable name, falling back to the id.
    pub fn title(&self) -> &str {
        self.title.as_deref().unwrap_or(&self.id)
    }

    pub fn explicit_title(&self) -> Option<&str> {
        self.title.as_deref()
    }

    pub fn role(&self) -> AxisRole {
        self.role
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, level: usize) -> &str {
        &self.labels[level]
    }

    pub fn levels(&self) -> usize {
        self.labels.len()
    }

    pub fn threshold(&self) -> Option<usize> {
        self.threshold
    }

    pub fn profile(&self) -> Option<&[GradeId]> {
        self.profile.as_deref()
    }

    pub fn check_level(&self, level: usize) -> Result<usize> {
        if level < self.labels.len() {
            Ok(level)
        } else {
            Err(Error::LevelOutOfRange {
                axis: self.id.clone(),
                index: level,
                levels: self.labels.len(),
            })
        }
    }

    pub fn resolve(&self, level: &LevelRef) -> Result<usize> {
        match level {
            LevelRef::Index(i) => self.check_level(*i),
            LevelRef::Label(label) => self
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::UnknownLabel {
                    axis: self.id.clone(),
                    label: label.clone(),
                }),
        }
    }

    /// Resolves free text as typed on a command line or query string: an exact
    /// label match wins, otherwise the text is read as an index.
    pub fn resolve_text(&self, text: &str) -> Result<usize> {
        let text = text.trim();
        if let Some(pos) = self.labels.iter().position(|l| l == text) {
            return Ok(pos);
        }
        match text.parse::<usize>() {
            Ok(i) => self.check_level(i),
            Err(_) => Err(Error::UnknownLabel {
                axis: self.id.clone(),
                label: text.to_string(),
            }),
        }
    }
}

/// Ordered axes: likelihood, impact, then zero or more context axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    axes: Vec<Axis>,
}

impl StateSpace {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.len() < 2 {
            return Err(Error::Invalid("a state space needs at least 2 axes".into()));
        }
        if axes[0].role != AxisRole::Likelihood {
            return Err(Error::Invalid(format!(
                "the first axis must have role likelihood (found `{}` with role {})",
                axes[0].id, axes[0].role
            )));
        }
        if axes[1].role != AxisRole::Impact {
            return Err(Error::Invalid(format!(
                "the second axis must have role impact (found `{}` with role {})",
                axes[1].id, axes[1].role
            )));
        }
        if let Some(a) = axes[2..].iter().find(|a| a.role != AxisRole::Context) {
            return Err(Error::Invalid(format!(
                "axis `{}` must have role context (only one likelihood and one impact axis are allowed)",
                a.id
            )));
        }
        let mut ids = HashSet::new();
        for a in &axes {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate axis id `{}`", a.id)));
            }
        }
        Ok(Self { axes })
    }

    /// Number of axes `d`.
    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, index: usize) -> &Axis {
        &self.axes[index]
    }

    pub fn likelihood(&self) -> &Axis {
        &self.axes[0]
    }

    pub fn impact(&self) -> &Axis {
        &self.axes[1]
    }

    pub fn context_axes(&self) -> &[Axis] {
        &self.axes[2..]
    }

    pub fn axis_index(&self, id: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownAxis(id.to_string()))
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::levels).collect()
    }

    /// `|L|`, the product of all level counts. Saturates instead of
    /// overflowing.
    pub fn size(&self) -> u128 {
        self.axes
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.levels() as u128))
    }

    pub fn check_state(&self, levels: &[usize]) -> Result<()> {
        if levels.len() != self.axes.len() {
            return Err(Error::StateArity {
                expected: self.axes.len(),
                got: levels.len(),
            });
        }
        for (axis, &l) in self.axes.iter().zip(levels) {
            axis.check_level(l)?;
        }
        Ok(())
    }

    /// All states in lexicographic order (last axis varies fastest), refusing
    /// spaces larger than [`DEFAULT_ENUMERATION_CAP`].
    pub fn enumerate(&self) -> Result<StateIter> {
        self.enumerate_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(&self, cap: u64) -> Result<StateIter> {
        let size = self.size();
        if size > cap as u128 {
            return Err(Error::EnumerationCap { size, cap });
        }
        Ok(StateIter::new(self.level_counts()))
    }

    /// Row-major position of a state in enumeration order.
    pub(crate) fn linear_index(&self, levels: &[usize]) -> usize {
        levels
            .iter()
            .zip(&self.axes)
            .fold(0usize, |acc, (&l, a)| acc * a.levels() + l)
    }

    /// Formats a state as `(1,2,0) [probability=Low, ...]`.
    pub fn describe(&self, levels: &[usize]) -> String {
        let idx: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
        let named: Vec<String> = self
            .axes
            .iter()
            .zip(levels)
            .map(|(a, &l)| format!("{}={}", a.id, a.labels.get(l).map_or("?", |s| s.as_str())))
            .collect();
        format!("({}) [{}]", idx.join(","), named.join(", "))
    }
}

/// Odometer over a mixed-radix index space.
#[derive(Debug, Clone)]
pub struct StateIter {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl StateIter {
    pub fn new(radices: Vec<usize>) -> Self {
        let next = if radices.iter().all(|&r| r > 0) {
            Some(vec![0; radices.len()])
        } else {
            None
        };
        Self { radices, next }
    }
}

impl Iterator for StateIter {
    type Item = ContextState;

    fn next(&mut self) -> Option<ContextState> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for (digit, &radix) in succ.iter_mut().zip(&self.radices).rev() {
            *digit += 1;
            if *digit < radix {
                carried = false;
                break;
            }
            *digit = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(ContextState(current))
    }
}

/// A full state `l = (l_1, ..., l_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContextState(pub Vec<usize>);

impl ContextState {
    pub fn new(space: &StateSpace, levels: Vec<usize>) -> Result<Self> {
        space.check_state(&levels)?;
        Ok(Self(levels))
    }

    pub fn levels(&self) -> &[usize] {
        &self.0
    }
}

/// Fixing of every context axis to one level, stored in context-axis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SliceSelector {
    levels: Vec<usize>,
}

impl SliceSelector {
    /// From levels listed in context-axis order.
    pub fn new(space: &StateSpace, levels: Vec<usize>) -> Result<Self> {
        let ctx = space.context_axes();
        if levels.len() != ctx.len() {
            return Err(Error::Slice(format!(
                "expected {} context level(s), got {}",
                ctx.len(),
                levels.len()
            )));
        }
        for (axis, &l) in ctx.iter().zip(&levels) {
            axis.check_level(l)?;
        }
        Ok(Self { levels })
    }

    /// From `(axis id, level)` pairs. Every context axis must appear exactly
    /// once.
    pub fn from_pairs<'a, I>(space: &StateSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, LevelRef)>,
    {
        let mut partial = PartialSlice::default();
        for (axis, level) in pairs {
            partial.set(space, axis, &level)?;
        }
        partial.complete(space, None)
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// Level selected for context axis `k` (0-based among context axes).
    pub fn level(&self, k: usize) -> usize {
        self.levels[k]
    }

    /// The full state `(l1, l2, sigma...)`.
    pub fn state(&self, l1: usize, l2: usize) -> ContextState {
        let mut v = Vec::with_capacity(self.levels.len() + 2);
        v.push(l1);
        v.push(l2);
        v.extend_from_slice(&self.levels);
        ContextState(v)
    }

    /// `(axis id, label)` for each context axis.
    pub fn describe<'a>(&self, space: &'a StateSpace) -> Vec<(&'a str, &'a str)> {
        space
            .context_axes()
            .iter()
            .zip(&self.levels)
            .map(|(a, &l)| (a.id(), a.label(l)))
            .collect()
    }
}

/// Context-axis assignments collected one at a time; may be incomplete.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialSlice {
    levels: Vec<Option<usize>>,
}

impl PartialSlice {
    pub fn set(&mut self, space: &StateSpace, axis: &str, level: &LevelRef) -> Result<()> {
        let k = context_index(space, axis)?;
        let l = space.axis(k + 2).resolve(level)?;
        self.put(space, k, l)
    }

    /// Like [`set`](Self::set) but resolving free text (label or index).
    pub fn set_text(&mut self, space: &StateSpace, axis: &str, level: &str) -> Result<()> {
        let k = context_index(space, axis)?;
        let l = space.axis(k + 2).resolve_text(level)?;
        self.put(space, k, l)
    }

    fn put(&mut self, space: &StateSpace, k: usize, l: usize) -> Result<()> {
        if self.levels.len() < space.context_axes().len() {
            self.levels.resize(space.context_axes().len(), None);
        }
        if self.levels[k].is_some() {
            return Err(Error::Slice(format!(
                "context axis `{}` given more than once",
                space.axis(k + 2).id()
            )));
        }
        self.levels[k] = Some(l);
        Ok(())
    }

    pub fn get(&self, k: usize) -> Option<usize> {
        self.levels.get(k).copied().flatten()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.get(k).is_some()
    }

    /// Fills gaps from `fallback` and checks every context axis is covered.
    pub fn complete(&self, space: &StateSpace, fallback: Option<&SliceSelector>) -> Result<SliceSelector> {
        let ctx = space.context_axes();
        let mut levels = Vec::with_capacity(ctx.len());
        for (k, axis) in ctx.iter().enumerate() {
            match self.get(k).or_else(|| fallback.map(|f| f.level(k))) {
                Some(l) => levels.push(l),
                None => {
                    return Err(Error::Slice(format!(
                        "no level given for context axis `{}`",
                        axis.id()
                    )))
                }
            }
        }
        Ok(SliceSelector { levels })
    }
}

fn context_index(space: &StateSpace, axis: &str) -> Result<usize> {
    let i = space.axis_index(axis)?;
    if i < 2 {
        return Err(Error::Slice(format!("`{axis}` is not a context axis")));
    }
    Ok(i - 2)
}

/// Current risk cell `(likelihood level, impact level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RiskPosition {
    pub likelihood: usize,
    pub impact: usize,
}

impl RiskPosition {
    pub fn new(space: &StateSpace, likelihood: usize, impact: usize) -> Result<Self> {
        space.likelihood().check_level(likelihood)?;
        space.impact().check_level(impact)?;
        Ok(Self { likelihood, impact })
    }

    /// Parses `L,I` where each side is a label or an index.
    pub fn parse(space: &StateSpace, text: &str) -> Result<Self> {
        let (l, i) = text
            .split_once(',')
            .ok_or_else(|| Error::Slice(format!("risk position `{text}` must look like L,I")))?;
        Ok(Self {
            likelihood: space.likelihood().resolve_text(l)?,
            impact: space.impact().resolve_text(i)?,
        })
    }
}

/// A 2D grid of grades over likelihood x impact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixSlice {
    likelihood_levels: usize,
    impact_levels: usize,
    // likelihood-major: cells[l1 * impact_levels + l2]
    cells: Vec<GradeId>,
}

impl MatrixSlice {
    pub fn from_fn(likelihood_levels: usize, impact_levels: usize, mut f: impl FnMut(usize, usize) -> GradeId) -> Self {
        let mut cells = Vec::with_capacity(likelihood_levels * impact_levels);
        for l1 in 0..likelihood_levels {
            for l2 in 0..impact_levels {
                cells.push(f(l1, l2));
            }
        }
        Self {
            likelihood_levels,
            impact_levels,
            cells,
        }
    }

    pub fn likelihood_levels(&self) -> usize {
        self.likelihood_levels
    }

    pub fn impact_levels(&self) -> usize {
        self.impact_levels
    }

    pub fn get(&self, likelihood: usize, impact: usize) -> GradeId {
        self.cells[likelihood * self.impact_levels + impact]
    }

    /// Column multiset for one likelihood level (all impacts).
    pub fn column(&self, likelihood: usize) -> &[GradeId] {
        let start = likelihood * self.impact_levels;
        &self.cells[start..start + self.impact_levels]
    }

    /// Row multiset for one impact level (all likelihoods).
    pub fn row(&self, impact: usize) -> Vec<GradeId> {
        (0..self.likelihood_levels).map(|l1| self.get(l1, impact)).collect()
    }

    /// Grade names as `grid[l1][l2]`.
    pub fn to_names(&self, scale: &GradeScale) -> Vec<Vec<String>> {
        (0..self.likelihood_levels)
            .map(|l1| self.column(l1).iter().map(|&g| scale.name(g).to_string()).collect())
            .collect()
    }

    /// Rows in display order: highest impact first, each row by ascending
    /// likelihood.
    pub fn display_rows(&self) -> Vec<Vec<GradeId>> {
        (0..self.impact_levels).rev().map(|l2| self.row(l2)).collect()
    }
}

/// Per-axis threshold violations `v` and their sum `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    pub v: Vec<u8>,
    #[serde(rename = "V")]
    pub total: usize,
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.v.iter().map(|b| b.to_string()).collect();
        write!(f, "v=[{}] V={}", parts.join(","), self.total)
    }
}

/// A validated model: state space, grade scale and a total grade mapping.
#[derive(Debug, Clone)]
pub struct RiskModel {
    name: String,
    scale: GradeScale,
    space: StateSpace,
    assignment: CompiledAssignment,
    risk: Option<RiskPosition>,
    default_slice: Option<SliceSelector>,
    theta0: f64,
}

impl RiskModel {
    /// Compiles the assignment (checking conflicts and totality) and returns
    /// the model. `theta0` is the polar rotation in radians.
    pub fn new(
        name: impl Into<String>,
        scale: GradeScale,
        space: StateSpace,
        assignment: Assignment,
    ) -> Result<Self> {
        let assignment = assignment.compile(&space, &scale)?;
        Ok(Self {
            name: name.into(),
            scale,
            space,
            assignment,
            risk: None,
            default_slice: None,
            theta0: 0.0,
        })
    }

    pub fn with_risk(mut self, risk: RiskPosition) -> Result<Self> {
        RiskPosition::new(&self.space, risk.likelihood, risk.impact)?;
        self.risk = Some(risk);
        Ok(self)
    }

    pub fn with_default_slice(mut self, sigma: SliceSelector) -> Result<Self> {
        SliceSelector::new(&self.space, sigma.levels.clone())?;
        self.default_slice = Some(sigma);
        Ok(self)
    }

    pub fn with_theta0(mut self, theta0: f64) -> Self {
        self.theta0 = theta0;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scale(&self) -> &GradeScale {
        &self.scale
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn assignment(&self) -> &CompiledAssignment {
        &self.assignment
    }

    pub fn risk(&self) -> Option<RiskPosition> {
        self.risk
    }

    pub fn default_slice(&self) -> Option<&SliceSelector> {
        self.default_slice.as_ref()
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// `H(l)`.
    pub fn grade_of(&self, state: &ContextState) -> Result<GradeId> {
        self.space.check_state(&state.0)?;
        Ok(self.assignment.grade(&self.space, &state.0))
    }

    /// Which part of the assignment decided the grade of `state`.
    pub fn source_of(&self, state: &ContextState) -> Result<Source> {
        self.space.check_state(&state.0)?;
        Ok(self.assignment.source(&self.space, &state.0))
    }

    /// `M_sigma`: the likelihood x impact grid with context axes fixed.
    pub fn slice(&self, sigma: &SliceSelector) -> Result<MatrixSlice> {
        SliceSelector::new(&self.space, sigma.levels.clone())?;
        let (n1, n2) = (self.space.likelihood().levels(), self.space.impact().levels());
        let mut state = sigma.state(0, 0).0;
        Ok(MatrixSlice::from_fn(n1, n2, |l1, l2| {
            state[0] = l1;
            state[1] = l2;
            self.assignment.grade(&self.space, &state)
        }))
    }

    /// `v_i = [l_i > a_i]`, `V = sum v_i`. Axes without a threshold never
    /// count as violated.
    pub fn violations(&self, state: &ContextState) -> Result<Violations> {
        self.space.check_state(&state.0)?;
        Ok(violations(&self.space, &state.0))
    }

    /// Slice selector for text pairs, falling back to the model's default
    /// slice for axes that are not mentioned.
    pub fn slice_from_text<'a, I>(&self, pairs: I) -> Result<SliceSelector>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut partial = PartialSlice::default();
        for (axis, level) in pairs {
            partial.set_text(&self.space, axis, level)?;
        }
        partial.complete(&self.space, self.default_slice.as_ref())
    }

    /// Parses `l1,l2,...` with labels or indices per component.
    pub fn parse_state(&self, text: &str) -> Result<ContextState> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != self.space.dims() {
            return Err(Error::StateArity {
                expected: self.space.dims(),
                got: parts.len(),
            });
        }
        let levels = parts
            .iter()
            .zip(self.space.axes())
            .map(|(p, a)| a.resolve_text(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContextState(levels))
    }
}

pub(crate) fn violations(space: &StateSpace, levels: &[usize]) -> Violations {
    let v: Vec<u8> = space
        .axes()
        .iter()
        .zip(levels)
        .map(|(a, &l)| match a.threshold() {
            Some(t) if l > t => 1,
            _ => 0,
        })
        .collect();
    let total = v.iter().map(|&b| b as usize).sum();
    Violations { v, total }
}
