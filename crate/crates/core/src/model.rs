//! Potentials `V` and nonlinearities `f` with their primitives `F`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PotentialKind {
    Constant {
        value: f64,
    },
    /// Tiled from a fundamental cell of the given per-axis period.
    Periodic {
        period: Vec<usize>,
    },
    /// Equal to `vinf` except at finitely many dips; `v0` is the minimum.
    BoundedWell {
        v0: f64,
        vinf: f64,
    },
    /// Constant on each orbit of a preset's symmetry group.
    OrbitInvariant,
    Custom,
}

/// A strictly positive potential, one value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
    kind: PotentialKind,
}

impl Potential {
    pub fn constant(g: &Graph, value: f64) -> Result<Potential> {
        check_positive("value", value)?;
        Ok(Potential {
            values: vec![value; g.vertex_count()],
            kind: PotentialKind::Constant { value },
        })
    }

    /// Tiles `cell` (row-major over the period box) across a lattice graph.
    ///
    /// A single period is broadcast to every axis. On a torus every side
    /// must be a multiple of its period so the tiling stays periodic.
    pub fn periodic(g: &Graph, cell: &[f64], period: &[usize]) -> Result<Potential> {
        let dim = g
            .dimension()
            .ok_or_else(|| Error::Model("periodic potentials need a lattice graph".into()))?;
        let period: Vec<usize> = match period.len() {
            1 => vec![period[0]; dim],
            n if n == dim => period.to_vec(),
            n => {
                return Err(Error::Model(format!(
                    "period has {n} entries, lattice dimension is {dim}"
                )))
            }
        };
        if period.contains(&0) {
            return Err(Error::Model("period entries must be positive".into()));
        }
        let cell_size: usize = period.iter().product();
        if cell.len() != cell_size {
            return Err(Error::Model(format!(
                "cell has {} values, period box has {cell_size}",
                cell.len()
            )));
        }
        for (i, &v) in cell.iter().enumerate() {
            check_positive(&format!("cell[{i}]"), v)?;
        }
        if *g.mode() == GraphMode::PeriodicTorus {
            for (axis, (&s, &t)) in g.sides().iter().zip(&period).enumerate() {
                if s % t != 0 {
                    return Err(Error::Model(format!(
                        "torus side {s} on axis {axis} is not a multiple of period {t}"
                    )));
                }
            }
        }
        let values = (0..g.vertex_count())
            .map(|x| {
                let idx = g
                    .coordinates(x)
                    .iter()
                    .zip(&period)
                    .fold(0usize, |acc, (&c, &t)| acc * t + (c as usize % t));
                cell[idx]
            })
            .collect();
        Ok(Potential {
            values,
            kind: PotentialKind::Periodic { period },
        })
    }

    /// `V = vinf` everywhere except `V(x) = vinf - depth` at each dip.
    ///
    /// With no dips the potential is constant.
    pub fn well(g: &Graph, vinf: f64, dips: &BTreeMap<usize, f64>) -> Result<Potential> {
        check_positive("vinf", vinf)?;
        if dips.is_empty() {
            return Potential::constant(g, vinf);
        }
        let mut values = vec![vinf; g.vertex_count()];
        for (&x, &depth) in dips {
            if x >= g.vertex_count() {
                return Err(Error::Model(format!(
                    "dip at vertex {x} outside graph of {} vertices",
                    g.vertex_count()
                )));
            }
            if !(depth > 0.0 && depth < vinf) {
                return Err(Error::Model(format!(
                    "dip depth {depth} at vertex {x} must lie in (0, vinf = {vinf})"
                )));
            }
            values[x] = vinf - depth;
        }
        let v0 = values.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Potential {
            values,
            kind: PotentialKind::BoundedWell { v0, vinf },
        })
    }

    /// One value per orbit of the graph's symmetry group.
    pub fn orbit_invariant(g: &Graph, per_orbit: &[f64]) -> Result<Potential> {
        if per_orbit.len() != g.orbit_count() {
            return Err(Error::Model(format!(
                "{} orbit values for a graph with {} orbits",
                per_orbit.len(),
                g.orbit_count()
            )));
        }
        for (i, &v) in per_orbit.iter().enumerate() {
            check_positive(&format!("values[{i}]"), v)?;
        }
        Ok(Potential {
            values: (0..g.vertex_count())
                .map(|x| per_orbit[g.orbit_of(x)])
                .collect(),
            kind: PotentialKind::OrbitInvariant,
        })
    }

    pub fn from_values(g: &Graph, values: Vec<f64>) -> Result<Potential> {
        if values.len() != g.vertex_count() {
            return Err(Error::Mismatch(format!(
                "{} potential values for {} vertices",
                values.len(),
                g.vertex_count()
            )));
        }
        for (x, &v) in values.iter().enumerate() {
            check_positive(&format!("values[{x}]"), v)?;
        }
        Ok(Potential {
            values,
            kind: PotentialKind::Custom,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The limit value at infinity for constant and well potentials.
    pub fn limit_value(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Constant { value } => Some(value),
            PotentialKind::BoundedWell { vinf, .. } => Some(vinf),
            _ => None,
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Model(format!(
            "{name} = {v} must be finite and positive"
        )))
    }
}

/// A nonlinearity `f(x, u)` together with its primitive `F(x, u) = ∫_0^u f(x, t) dt`.
///
/// Implementations must be pure functions of their arguments.
pub trait Nonlinearity: Send + Sync + fmt::Debug {
    fn f(&self, x: usize, u: f64) -> f64;

    fn primitive(&self, x: usize, u: f64) -> f64;

    /// `true` when `f` does not depend on the vertex.
    fn is_x_independent(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Constant(f64),
    PerVertex(Vec<f64>),
}

impl From<f64> for Coefficient {
    fn from(a: f64) -> Self {
        Coefficient::Constant(a)
    }
}

impl Coefficient {
    fn at(&self, x: usize) -> f64 {
        match self {
            Coefficient::Constant(a) => *a,
            Coefficient::PerVertex(v) => v[x],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct PowerTerm {
    exponent: f64,
    int_exponent: Option<i32>,
    coefficient: Coefficient,
}

/// `f(x, u) = Σ_i a_i(x) |u|^{q_i - 2} u` and `F(x, u) = Σ_i a_i(x) |u|^{q_i} / q_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerNonlinearity {
    terms: Vec<PowerTerm>,
}

impl PowerNonlinearity {
    /// Validates `q_i > 2` and `a_i > 0`. Error messages name the offending
    /// entry as `exponents[i]` or `coefficients[i]`.
    pub fn new(coefficients: Vec<Coefficient>, exponents: Vec<f64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Model(
                "exponents: at least one term is required".into(),
            ));
        }
        if coefficients.len() != exponents.len() {
            return Err(Error::Model(format!(
                "coefficients: {} entries for {} exponents",
                coefficients.len(),
                exponents.len()
            )));
        }
        let mut terms = Vec::with_capacity(exponents.len());
        for (i, (q, a)) in exponents.into_iter().zip(coefficients).enumerate() {
            if !(q.is_finite() && q > 2.0) {
                return Err(Error::Model(format!(
                    "exponents[{i}] = {q} must be finite and greater than 2"
                )));
            }
            let ok = match &a {
                Coefficient::Constant(c) => c.is_finite() && *c > 0.0,
                Coefficient::PerVertex(v) => {
                    !v.is_empty() && v.iter().all(|c| c.is_finite() && *c > 0.0)
                }
            };
            if !ok {
                return Err(Error::Model(format!(
                    "coefficients[{i}] must be finite and positive everywhere"
                )));
            }
            let int_exponent = (q.fract() == 0.0 && q < 64.0).then_some(q as i32);
            terms.push(PowerTerm {
                exponent: q,
                int_exponent,
                coefficient: a,
            });
        }
        Ok(PowerNonlinearity { terms })
    }

    /// `a |u|^{q-2} u` with a constant coefficient.
    pub fn homogeneous(a: f64, q: f64) -> Result<Self> {
        PowerNonlinearity::new(vec![Coefficient::Constant(a)], vec![q])
    }

    /// Checks per-vertex coefficient arrays against the graph size.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        for (i, t) in self.terms.iter().enumerate() {
            if let Coefficient::PerVertex(v) = &t.coefficient {
                if v.len() != g.vertex_count() {
                    return Err(Error::Model(format!(
                        "coefficients[{i}] has {} values for {} vertices",
                        v.len(),
                        g.vertex_count()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    /// The largest exponent `q`, the one governing the growth bound.
    pub fn growth_exponent(&self) -> f64 {
        self.terms.iter().map(|t| t.exponent).fold(2.0, f64::max)
    }

    /// Constant `a` in `|f(x, u)| <= a (|u| + |u|^{q-1})`.
    pub fn growth_constant(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| match &t.coefficient {
                Coefficient::Constant(a) => *a,
                Coefficient::PerVertex(v) => v.iter().cloned().fold(0.0, f64::max),
            })
            .sum()
    }
}

fn abs_pow(u: f64, exp: f64, int_exp: Option<i32>) -> f64 {
    match int_exp {
        Some(k) => u.abs().powi(k),
        None => u.abs().powf(exp),
    }
}

impl Nonlinearity for PowerNonlinearity {
    fn f(&self, x: usize, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coefficient.at(x)
                    * abs_pow(u, t.exponent - 2.0, t.int_exponent.map(|k| k - 2))
                    * u
            })
            .sum()
    }

    fn primitive(&self, x: usize, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.at(x) * abs_pow(u, t.exponent, t.int_exponent) / t.exponent)
            .sum()
    }

    fn is_x_independent(&self) -> bool {
        self.terms
            .iter()
            .all(|t| matches!(t.coefficient, Coefficient::Constant(_)))
    }
}

type Evaluator = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// A user-supplied `(f, F)` pair. Admissibility is checked by
/// [`check_conditions`] when a problem is assembled.
#[derive(Clone)]
pub struct CustomNonlinearity {
    name: String,
    f: Evaluator,
    primitive: Evaluator,
    x_independent: bool,
}

impl CustomNonlinearity {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
        primitive: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
        x_independent: bool,
    ) -> Self {
        CustomNonlinearity {
            name: name.into(),
            f: Arc::new(f),
            primitive: Arc::new(primitive),
            x_independent,
        }
    }
}

impl fmt::Debug for CustomNonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNonlinearity")
            .field("name", &self.name)
            .field("x_independent", &self.x_independent)
            .finish()
    }
}

impl Nonlinearity for CustomNonlinearity {
    fn f(&self, x: usize, u: f64) -> f64 {
        (self.f)(x, u)
    }

    fn primitive(&self, x: usize, u: f64) -> f64 {
        (self.primitive)(x, u)
    }

    fn is_x_independent(&self) -> bool {
        self.x_independent
    }
}

/// Thresholds used by [`check_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConditionThresholds {
    /// Samples with `0 < |u| <= small_u` enter the `f = o(u)` check.
    pub small_u: f64,
    /// Largest admissible `|f / u|` on those samples.
    pub small_ratio_max: f64,
    /// Samples with `|u| >= large_u` enter the superquadratic check.
    pub large_u: f64,
    /// Smallest admissible `F / u^2` on those samples.
    pub large_ratio_min: f64,
    /// Relative tolerance of the `F' = f` finite-difference check.
    pub primitive_tol: f64,
}

impl Default for ConditionThresholds {
    fn default() -> Self {
        ConditionThresholds {
            small_u: 1e-3,
            small_ratio_max: 1e-3,
            large_u: 1e3,
            large_ratio_min: 10.0,
            primitive_tol: 1e-5,
        }
    }
}

/// Worst-case witnesses for the admissibility conditions on a sample grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `max |f(x, u) / u|` over small samples (`None` when the grid has none).
    pub small_ratio: Option<f64>,
    pub small_pass: bool,
    /// Number of adjacent sample pairs where `u -> f(x, u) / |u|` fails to
    /// increase strictly, on either half-line.
    pub monotonicity_violations: usize,
    pub monotone_pass: bool,
    /// `min F(x, u) / u^2` over large samples.
    pub large_ratio: Option<f64>,
    pub large_pass: bool,
    /// `max |dF/du - f| / max(1, |f|)` by central differences, plus `|F(x, 0)|`.
    pub primitive_error: f64,
    pub primitive_pass: bool,
    /// `min F(x, u)` over the grid.
    pub min_primitive: f64,
    /// Samples with `F > ½ f u` beyond rounding.
    pub half_fu_violations: usize,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.small_pass && self.monotone_pass && self.large_pass && self.primitive_pass
    }

    pub fn summary(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map_or("n/a".to_string(), |r| format!("{r:e}"));
        format!(
            "f=o(u): {} ({}), f/|u| increasing: {} ({} violations), F/u^2 -> inf: {} ({}), F'=f: {} ({:e})",
            pass_word(self.small_pass),
            fmt_opt(self.small_ratio),
            pass_word(self.monotone_pass),
            self.monotonicity_violations,
            pass_word(self.large_pass),
            fmt_opt(self.large_ratio),
            pass_word(self.primitive_pass),
            self.primitive_error
        )
    }
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// `±10^k` for `k` in `[-6, 4]` in steps of a quarter decade.
pub fn default_u_samples() -> Vec<f64> {
    let mut out = Vec::new();
    for k in -24..=16 {
        // exact decimal decades so threshold samples land on 1e-3 and 1e3
        let u = if k % 4 == 0 {
            format!("1e{}", k / 4).parse().expect("decade literal")
        } else {
            10f64.powf(k as f64 / 4.0)
        };
        out.push(u);
        out.push(-u);
    }
    out
}

/// Sample grid covering every vertex, or only vertex 0 for x-independent `f`.
pub fn default_grid(g: &Graph, nl: &dyn Nonlinearity) -> Vec<(usize, f64)> {
    let xs: Vec<usize> = if nl.is_x_independent() {
        vec![0]
    } else {
        (0..g.vertex_count()).collect()
    };
    let us = default_u_samples();
    xs.iter()
        .flat_map(|&x| us.iter().map(move |&u| (x, u)))
        .collect()
}

// relative slack for comparisons against thresholds that the canonical
// models hit exactly (q = 3 gives |f/u| = |u|)
const SLACK: f64 = 1e-9;

/// Spot-checks `f = o(u)`, strict monotonicity of `f/|u|`, `F/u^2 -> ∞`,
/// and that `F` is the primitive of `f`, on the given `(x, u)` samples.
pub fn check_conditions(
    nl: &dyn Nonlinearity,
    grid: &[(usize, f64)],
    thresholds: &ConditionThresholds,
) -> ConditionReport {
    let mut small_ratio: Option<f64> = None;
    let mut large_ratio: Option<f64> = None;
    let mut primitive_error: f64 = 0.0;
    let mut min_primitive = f64::INFINITY;
    let mut half_fu_violations = 0;
    let mut by_vertex: BTreeMap<usize, Vec<f64>> = BTreeMap::new();

    for &(x, u) in grid {
        let fu = nl.f(x, u);
        let big_f = nl.primitive(x, u);
        min_primitive = min_primitive.min(big_f);
        if big_f > 0.5 * fu * u * (1.0 + SLACK) + f64::MIN_POSITIVE {
            half_fu_violations += 1;
        }
        if u != 0.0 && u.abs() <= thresholds.small_u * (1.0 + SLACK) {
            let r = (fu / u).abs();
            small_ratio = Some(small_ratio.map_or(r, |m| m.max(r)));
        }
        if u.abs() >= thresholds.large_u * (1.0 - SLACK) {
            let r = big_f / (u * u);
            large_ratio = Some(large_ratio.map_or(r, |m| m.min(r)));
        }
        let h = 1e-5 * u.abs().max(1e-3);
        let deriv = (nl.primitive(x, u + h) - nl.primitive(x, u - h)) / (2.0 * h);
        primitive_error = primitive_error.max((deriv - fu).abs() / fu.abs().max(1.0));
        if u != 0.0 {
            by_vertex.entry(x).or_default().push(u);
        }
    }
    for &x in by_vertex.keys() {
        primitive_error = primitive_error.max(nl.primitive(x, 0.0).abs());
    }

    let mut monotonicity_violations = 0;
    for (&x, us) in &mut by_vertex {
        us.sort_by(f64::total_cmp);
        us.dedup();
        for half in [
            us.iter().copied().filter(|&u| u < 0.0).collect::<Vec<_>>(),
            us.iter().copied().filter(|&u| u > 0.0).collect::<Vec<_>>(),
        ] {
            for pair in half.windows(2) {
                let a = nl.f(x, pair[0]) / pair[0].abs();
                let b = nl.f(x, pair[1]) / pair[1].abs();
                if !(b > a) {
                    monotonicity_violations += 1;
                }
            }
        }
    }

    ConditionReport {
        small_ratio,
        small_pass: small_ratio.is_some_and(|r| r <= thresholds.small_ratio_max * (1.0 + SLACK)),
        monotonicity_violations,
        monotone_pass: monotonicity_violations == 0,
        large_ratio,
        large_pass: large_ratio.is_some_and(|r| r >= thresholds.large_ratio_min),
        primitive_error,
        primitive_pass: primitive_error <= thresholds.primitive_tol,
        min_primitive,
        half_fu_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Boundary;

    fn cubic() -> PowerNonlinearity {
        PowerNonlinearity::homogeneous(1.0, 4.0).unwrap()
    }

    #[test]
    fn quartic_primitive_values() {
        let nl = cubic();
        assert_eq!(nl.f(0, 2.0), 8.0);
        assert_eq!(nl.primitive(0, 2.0), 4.0);
        assert_eq!(nl.f(0, -2.0), -8.0);
    }

    #[test]
    fn superquadratic_ratio_grows() {
        let nl = cubic();
        let r: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&u| nl.primitive(0, u) / (u * u))
            .collect();
        // |u|^{q-2}/q = u^2/4
        assert_eq!(r, vec![25.0, 2500.0, 250000.0]);
    }

    #[test]
    fn rejects_inadmissible_parameters() {
        let err = PowerNonlinearity::homogeneous(1.0, 2.0).unwrap_err();
        assert!(err.to_string().contains("exponents[0]"));
        let err = PowerNonlinearity::new(
            vec![Coefficient::Constant(1.0), Coefficient::Constant(-1.0)],
            vec![4.0, 3.0],
        )
        .unwrap_err();
        assert!(err.to_string().contains("coefficients[1]"));
    }

    #[test]
    fn power_family_passes_all_conditions() {
        let g = Graph::lattice_box(1, &[4], Boundary::DirichletBox).unwrap();
        for q in [3.0, 4.0, 6.0, 3.5] {
            let nl = PowerNonlinearity::homogeneous(1.0, q).unwrap();
            let report = check_conditions(&nl, &default_grid(&g, &nl), &Default::default());
            assert!(report.passed(), "q = {q}: {}", report.summary());
            assert_eq!(report.half_fu_violations, 0);
            assert!(report.min_primitive >= 0.0);
        }
    }

    #[test]
    fn linear_f_fails_small_u_check() {
        let nl = CustomNonlinearity::new("linear", |_, u| u, |_, u| 0.5 * u * u, true);
        let g = Graph::from_edges(1, &[]).unwrap();
        let report = check_conditions(&nl, &default_grid(&g, &nl), &Default::default());
        assert!(!report.small_pass);
        assert!((report.small_ratio.unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn well_potential_values() {
        let g = Graph::lattice_box(1, &[5], Boundary::PeriodicTorus).unwrap();
        let dips = BTreeMap::from([(0, 0.5)]);
        let v = Potential::well(&g, 1.0, &dips).unwrap();
        assert_eq!(v.values(), &[0.5, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(v.kind(), &PotentialKind::BoundedWell { v0: 0.5, vinf: 1.0 });
        let flat = Potential::well(&g, 1.0, &BTreeMap::new()).unwrap();
        assert_eq!(flat.kind(), &PotentialKind::Constant { value: 1.0 });
        assert!(Potential::well(&g, 1.0, &BTreeMap::from([(1, 1.0)])).is_err());
    }

    #[test]
    fn periodic_tiling_on_cycle() {
        let g = Graph::lattice_box(1, &[8], Boundary::PeriodicTorus).unwrap();
        let v = Potential::periodic(&g, &[1.0, 2.0], &[2]).unwrap();
        assert_eq!(v.values(), &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        let odd = Graph::lattice_box(1, &[7], Boundary::PeriodicTorus).unwrap();
        assert!(Potential::periodic(&odd, &[1.0, 2.0], &[2]).is_err());
        assert!(Potential::periodic(&g, &[1.0, 0.0], &[2]).is_err());
    }

    #[test]
    fn nonpositive_potential_is_a_model_error() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            Potential::from_values(&g, vec![1.0, 0.0]),
            Err(Error::Model(_))
        ));
        assert!(Potential::constant(&g, -1.0).is_err());
    }
}
