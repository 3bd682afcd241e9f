use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use ndpolar_core::rules::{Clause, Comparator, Entry, ResolvedRule, Rule, Span};
use ndpolar_core::{
    fixtures, layout, load_model, mode_with_tiebreak, Axis, AxisRole, ContextState, Grade, GradeId, GradeScale,
    LevelRef, RiskModel, SliceSelector, StateSpace,
};
use ndpolar_core::rules::Assignment;

fn scale(k: usize) -> GradeScale {
    GradeScale::new(
        (0..k)
            .map(|r| Grade { id: format!("g{r}"), rank: r, color: format!("#{:06x}", r * 0x111111) })
            .collect(),
    )
    .unwrap()
}

fn axis(id: &str, role: AxisRole, n: usize) -> Axis {
    Axis::new(id, role, (0..n).map(|l| format!("{id}-{l}")).collect()).unwrap()
}

// ---- 2D special case ------------------------------------------------------

/// (axis 0|1, comparator index, level)
type RawClause = (usize, usize, usize);

#[derive(Debug, Clone)]
struct Model2d {
    n1: usize,
    n2: usize,
    grades: usize,
    /// (l1, l2, grade) explicit entries; later duplicates are dropped.
    entries: Vec<(usize, usize, usize)>,
    /// Each rule: clauses and a grade.
    rules: Vec<(Vec<RawClause>, usize)>,
    default: usize,
}

const CMPS: [Comparator; 6] = [
    Comparator::Eq,
    Comparator::Ne,
    Comparator::Lt,
    Comparator::Le,
    Comparator::Gt,
    Comparator::Ge,
];

fn model_2d() -> impl Strategy<Value = Model2d> {
    (2usize..=6, 2usize..=6, 2usize..=5).prop_flat_map(|(n1, n2, k)| {
        let entry = (0..n1, 0..n2, 0..k);
        let clause = (0usize..2, 0usize..6, 0usize..6);
        let rule = (prop::collection::vec(clause, 1..=2), 0..k);
        (
            prop::collection::vec(entry, 0..=12),
            prop::collection::vec(rule, 0..=5),
            0..k,
        )
            .prop_map(move |(mut entries, rules, default)| {
                let mut seen = std::collections::HashSet::new();
                entries.retain(|&(a, b, _)| seen.insert((a, b)));
                let rules = rules
                    .into_iter()
                    .map(|(mut cs, g)| {
                        cs.sort_by_key(|c| c.0);
                        cs.dedup_by_key(|c| c.0);
                        for c in &mut cs {
                            c.2 %= if c.0 == 0 { n1 } else { n2 };
                        }
                        (cs, g)
                    })
                    .collect();
                Model2d { n1, n2, grades: k, entries, rules, default }
            })
    })
}

impl Model2d {
    fn build(&self) -> RiskModel {
        let space = StateSpace::new(vec![
            axis("x", AxisRole::Likelihood, self.n1),
            axis("y", AxisRole::Impact, self.n2),
        ])
        .unwrap();
        let scale = scale(self.grades);
        let rules = self
            .rules
            .iter()
            .map(|(cs, g)| {
                let rule = Rule {
                    clauses: cs
                        .iter()
                        .map(|&(a, c, l)| Clause {
                            axis: ["x", "y"][a].to_string(),
                            cmp: CMPS[c],
                            level: LevelRef::Index(l),
                        })
                        .collect(),
                    grade: format!("g{g}"),
                    span: Span::default(),
                };
                ResolvedRule::resolve(&rule, &space, &scale).unwrap()
            })
            .collect();
        let assignment = Assignment {
            entries: self
                .entries
                .iter()
                .map(|&(a, b, g)| Entry { state: vec![a, b], grade: GradeId(g) })
                .collect(),
            rules,
            default: Some(GradeId(self.default)),
        };
        RiskModel::new("random", scale, space, assignment).unwrap()
    }

    /// Straight evaluation of the precedence order.
    fn expected(&self, l1: usize, l2: usize) -> usize {
        if let Some(&(_, _, g)) = self.entries.iter().find(|e| e.0 == l1 && e.1 == l2) {
            return g;
        }
        for (cs, g) in &self.rules {
            let ok = cs.iter().all(|&(a, c, l)| {
                let v = if a == 0 { l1 } else { l2 };
                match c {
                    0 => v == l,
                    1 => v != l,
                    2 => v < l,
                    3 => v <= l,
                    4 => v > l,
                    _ => v >= l,
                }
            });
            if ok {
                return *g;
            }
        }
        self.default
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn empty_selection_slice_is_the_whole_mapping(spec in model_2d()) {
        let m = spec.build();
        let sigma = SliceSelector::new(m.space(), vec![]).unwrap();
        let grid = m.slice(&sigma).unwrap();
        for l1 in 0..spec.n1 {
            for l2 in 0..spec.n2 {
                let h = m.grade_of(&ContextState(vec![l1, l2])).unwrap();
                prop_assert_eq!(grid.get(l1, l2), h);
                prop_assert_eq!(h.0, spec.expected(l1, l2));
            }
        }
    }
}

// ---- mode ----------------------------------------------------------------

fn mode_oracle(k: usize, values: &[usize]) -> usize {
    let mut best = 0;
    let mut best_count = 0;
    for g in 0..k {
        let c = values.iter().filter(|&&v| v == g).count();
        if c > 0 && c >= best_count {
            best = g;
            best_count = c;
        }
    }
    best
}

#[test]
fn mode_matches_oracle_exhaustively() {
    let mut checked = 0u64;
    for k in 2..=5 {
        let s = scale(k);
        for len in 1..=7u32 {
            for code in 0..(k as u64).pow(len) {
                let mut c = code;
                let values: Vec<usize> = (0..len)
                    .map(|_| {
                        let v = (c % k as u64) as usize;
                        c /= k as u64;
                        v
                    })
                    .collect();
                let ids: Vec<GradeId> = values.iter().map(|&v| GradeId(v)).collect();
                assert_eq!(mode_with_tiebreak(&s, &ids).unwrap().0, mode_oracle(k, &values), "{values:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 90_000);
    assert_eq!(mode_with_tiebreak(&scale(3), &[]).unwrap_err().code(), "E_EMPTY");
}

// ---- violations ------------------------------------------------------------

#[derive(Debug, Clone)]
struct VioCase {
    levels: Vec<usize>,
    thresholds: Vec<Option<usize>>,
    state: Vec<usize>,
    bump: usize,
}

fn vio_case() -> impl Strategy<Value = VioCase> {
    prop::collection::vec(2usize..=6, 2..=6).prop_flat_map(|levels| {
        let d = levels.len();
        let th: Vec<_> = levels.iter().map(|&n| prop::option::of(0..n)).collect();
        let st: Vec<_> = levels.iter().map(|&n| 0..n).collect();
        (Just(levels), th, st, 0..d).prop_map(|(levels, thresholds, state, bump)| VioCase {
            levels,
            thresholds,
            state,
            bump,
        })
    })
}

impl VioCase {
    fn model(&self) -> RiskModel {
        let axes = self
            .levels
            .iter()
            .zip(&self.thresholds)
            .enumerate()
            .map(|(i, (&n, t))| {
                let role = match i {
                    0 => AxisRole::Likelihood,
                    1 => AxisRole::Impact,
                    _ => AxisRole::Context,
                };
                let a = axis(&format!("a{i}"), role, n);
                match t {
                    Some(t) => a.with_threshold(*t).unwrap(),
                    None => a,
                }
            })
            .collect();
        let space = StateSpace::new(axes).unwrap();
        RiskModel::new("v", scale(2), space, Assignment::constant(GradeId(0))).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn violation_count_is_bounded_and_monotone(case in vio_case()) {
        let m = case.model();
        let d = case.levels.len();
        let v = m.violations(&ContextState(case.state.clone())).unwrap();
        prop_assert!(v.total <= d);
        prop_assert_eq!(v.total, v.v.iter().map(|&b| b as usize).sum::<usize>());
        let oracle: Vec<u8> = case
            .state
            .iter()
            .zip(&case.thresholds)
            .map(|(&l, t)| u8::from(t.is_some_and(|t| l > t)))
            .collect();
        prop_assert_eq!(&v.v, &oracle);

        let mut up = case.state.clone();
        if up[case.bump] + 1 < case.levels[case.bump] {
            up[case.bump] += 1;
            let w = m.violations(&ContextState(up)).unwrap();
            prop_assert!(w.total >= v.total);
            prop_assert!(w.total <= v.total + 1);
        }
    }
}

// ---- geometry ----------------------------------------------------------------

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn fixture_layouts() {
    for (name, doc) in fixtures::ALL {
        let m = load_model(doc).unwrap();
        let g = layout(m.space(), m.theta0());
        assert!((g.delta_theta * g.d as f64 - TAU).abs() < 1e-12, "{name}");
        for (i, a) in m.space().axes().iter().enumerate() {
            for l in 0..a.levels() {
                let p = g.locate(i, l).unwrap();
                assert!(p.radius > 0.0 && p.radius < 1.0, "{name}");
                assert!((p.radius - (l as f64 + 0.5) / a.levels() as f64).abs() < 1e-15);
                assert_eq!(g.hit_test(p), Some((i, l)), "{name} axis {i} level {l}");
            }
            // sector centre angle, 1-based: theta0 + (i + 1 - 1/2) * delta
            let c = m.theta0() + (i as f64 + 0.5) * g.delta_theta;
            assert!(angle_diff(g.sectors[i].center, c) < 1e-12);
        }
        assert_eq!(
            g.threshold_arcs.len(),
            m.space().axes().iter().filter(|a| a.threshold().is_some()).count()
        );
    }
}

#[test]
fn cooling_layout_orientation() {
    // screen frame (y down): probability top, impact right, cooling bottom,
    // maintenance left
    let m = fixtures::cooling();
    let g = layout(m.space(), m.theta0());
    let expected = [-PI / 2.0, 0.0, PI / 2.0, PI];
    for (s, e) in g.sectors.iter().zip(expected) {
        assert!(angle_diff(s.center, e) < 1e-12, "{} vs {e}", s.center);
    }
    // threshold arc for cooling at level N: radius (2 + 1) / 4
    let arc = g.threshold_arcs.iter().find(|a| a.axis == 2).unwrap();
    assert!((arc.radius - 0.75).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn rotation_equivariance(theta in -10.0f64..10.0, probe_r in 0.0f64..0.999, probe_a in -PI..PI) {
        for (_, doc) in fixtures::ALL {
            let m = load_model(doc).unwrap();
            let base = layout(m.space(), 0.0);
            let rot = layout(m.space(), theta);
            for (i, a) in m.space().axes().iter().enumerate() {
                for l in 0..a.levels() {
                    let p = base.locate(i, l).unwrap();
                    let q = rot.locate(i, l).unwrap();
                    prop_assert!((p.radius - q.radius).abs() < 1e-15);
                    prop_assert!(angle_diff(q.angle, p.angle + theta) < 1e-9);
                    prop_assert_eq!(rot.hit_test(q), Some((i, l)));
                }
            }
            let probe = ndpolar_core::PolarPoint { radius: probe_r, angle: probe_a };
            let turned = ndpolar_core::PolarPoint { radius: probe_r, angle: probe_a + theta };
            // away from boundaries the hit is rotation-invariant
            let off = (probe_a).rem_euclid(base.delta_theta);
            if off > 1e-6 && base.delta_theta - off > 1e-6 {
                prop_assert_eq!(base.hit_test(probe), rot.hit_test(turned));
            }
        }
    }
}

#[test]
fn hit_test_boundaries() {
    let m = fixtures::stylised();
    let g = layout(m.space(), 0.0);
    let p = |radius, angle| ndpolar_core::PolarPoint { radius, angle };
    // sector starts belong to their own sector, ring inner radii to their ring
    assert_eq!(g.hit_test(p(0.5, 0.0)), Some((0, 2)));
    assert_eq!(g.hit_test(p(0.5, g.delta_theta)), Some((1, 2)));
    assert_eq!(g.hit_test(p(0.25, 0.1)), Some((0, 1)));
    assert_eq!(g.hit_test(p(0.0, 0.1)), Some((0, 0)));
    assert_eq!(g.hit_test(p(1.0, 0.1)), None);
    assert_eq!(g.hit_test(p(0.999_999, TAU - 1e-9)), Some((2, 3)));
    assert_eq!(g.hit_test(p(0.3, f64::NAN)), None);
}
