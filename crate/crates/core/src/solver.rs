//! Ground states by descent of `Ψ = Φ ∘ m` on the unit sphere.
//!
//! Each iteration moves along the negative tangent gradient of `Ψ`,
//! renormalises onto the sphere and re-projects onto the Nehari set. Steps
//! are chosen by Barzilai-Borwein trial lengths with Armijo backtracking.
//! Once the predicted decrease falls below the rounding floor of `Ψ`, a
//! step is accepted if `Ψ` does not rise above that floor and the tangent
//! gradient shrinks; this lets the iteration reach gradients far smaller
//! than `sqrt(eps)`.
//!
//! The descent scheme, step rule and initialisation are choices of this
//! crate; they locate a minimiser but do not certify global optimality.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::field::Field;
use crate::functional::{phi, residuals, Problem, Residuals};
use crate::graph::{Boundary, Graph, GraphMode, Shift};
use crate::model::{Nonlinearity, Potential, PotentialKind};
use crate::nehari::{
    log_grid, normalize, project, ray_max_on_grid, sphere_point, ProjectionOptions, SpherePoint,
};

/// Rounding floor of `Ψ` in units of machine epsilon, relative to
/// `max(|Ψ|, ½‖u‖²)`. Accepted energies never rise by more than this.
pub const ENERGY_NOISE_ULPS: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepRule {
    pub initial_step: f64,
    /// Factor in `(0, 1)` applied on each rejected trial.
    pub backtrack: f64,
    /// Armijo constant `c` in `Ψ(w_new) <= Ψ(w) - c η ‖g‖²`.
    pub sufficient_decrease: f64,
    pub max_backtracks: usize,
    /// Use Barzilai-Borwein trial steps; otherwise grow the last accepted step.
    pub barzilai_borwein: bool,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule {
            initial_step: 1.0,
            backtrack: 0.5,
            sufficient_decrease: 1e-4,
            max_backtracks: 60,
            barzilai_borwein: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Init {
    /// Indicator of one vertex; the centre vertex when unset.
    Bump {
        vertex: Option<usize>,
    },
    /// Independent uniform values in `(0, 1]` drawn from the options' seed.
    RandomPositive,
    UserField {
        values: Vec<f64>,
    },
}

impl Default for Init {
    fn default() -> Self {
        Init::Bump { vertex: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Stop once the tangent gradient's sup norm is at most this.
    pub tol_grad: f64,
    /// Pointwise residual bound, relative to `max(1, ‖u‖_∞)`.
    pub tol_point: f64,
    /// Bound on `|Φ'(u) u|`, relative to `max(1, ‖u‖²)`.
    pub tol_nehari: f64,
    pub step: StepRule,
    pub seed: u64,
    pub init: Init,
    pub record_trace: bool,
    pub projection: ProjectionOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 100_000,
            tol_grad: 1e-9,
            tol_point: 1e-8,
            tol_nehari: 1e-10,
            step: StepRule::default(),
            seed: 0,
            init: Init::default(),
            record_trace: true,
            projection: ProjectionOptions::default(),
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol_grad", self.tol_grad),
            ("tol_point", self.tol_point),
            ("tol_nehari", self.tol_nehari),
            ("step.initial_step", self.step.initial_step),
            ("step.sufficient_decrease", self.step.sufficient_decrease),
            ("projection.tol", self.projection.tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Precondition(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        if !(self.step.backtrack > 0.0 && self.step.backtrack < 1.0) {
            return Err(Error::Precondition(format!(
                "step.backtrack = {} must lie in (0, 1)",
                self.step.backtrack
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// No trial step was accepted within the backtracking budget.
    Stalled,
}

/// One accepted iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub s_w: f64,
    pub psi: f64,
    pub tangent_grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub u_star: Field,
    /// `u_star / ‖u_star‖`.
    pub w_star: Field,
    /// `Φ(u_star)`.
    pub energy: f64,
    pub residuals: Residuals,
    /// Accepted iterates; only the final row when tracing is off.
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub wall_time: Duration,
}

impl GroundStateResult {
    pub fn energy_trace(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.psi).collect()
    }

    pub fn s_history(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.s_w).collect()
    }
}

fn initial_field(p: &Problem, opts: &SolverOptions) -> Result<Field> {
    let g = p.graph();
    let field = match &opts.init {
        Init::Bump { vertex } => {
            let x = vertex.unwrap_or_else(|| g.center_vertex());
            if x >= g.vertex_count() {
                return Err(Error::Precondition(format!(
                    "bump vertex {x} outside graph of {} vertices",
                    g.vertex_count()
                )));
            }
            Field::delta(g, x)
        }
        Init::RandomPositive => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            Field::from_fn(g, |_| 1.0 - rng.gen::<f64>())?
        }
        Init::UserField { values } => Field::from_values(g, values.clone())?,
    };
    if field.is_zero() {
        return Err(Error::ZeroField);
    }
    Ok(field)
}

struct Status {
    grad_sup: f64,
    pointwise: f64,
    nehari: f64,
}

fn status(point: &SpherePoint) -> Status {
    let u = point.u();
    Status {
        grad_sup: point.tangent_grad.sup_norm(),
        pointwise: point.phi_grad.sup_norm(),
        nehari: point.phi_grad.dot(u).abs(),
    }
}

fn is_converged(point: &SpherePoint, st: &Status, opts: &SolverOptions) -> bool {
    let u = point.u();
    let u_sup = u.sup_norm();
    let norm_sq = point.projection.s * point.projection.s;
    st.grad_sup <= opts.tol_grad
        && st.pointwise <= opts.tol_point * u_sup.max(1.0)
        && st.nehari <= opts.tol_nehari * norm_sq.max(1.0)
}

fn energy_floor(point: &SpherePoint) -> f64 {
    let s = point.projection.s;
    ENERGY_NOISE_ULPS * f64::EPSILON * point.psi.abs().max(0.5 * s * s)
}

/// Minimises `Ψ` over the unit sphere starting from `opts.init`.
///
/// Failure to converge is reported through `converged` and `stop_reason`
/// with the last accepted iterate; only an unusable start is an error.
pub fn minimize(p: &Problem, opts: &SolverOptions) -> Result<GroundStateResult> {
    opts.validate()?;
    let start = Instant::now();
    let w0 = normalize(p, &initial_field(p, opts)?)?;
    let mut point = sphere_point(p, &w0, &opts.projection)?;
    let mut trace = Vec::new();
    let mut eta = opts.step.initial_step;
    let mut iterations = 0;
    let mut stop_reason = StopReason::MaxIterations;

    loop {
        let st = status(&point);
        let row = TraceRow {
            iter: iterations,
            s_w: point.projection.s,
            psi: point.psi,
            tangent_grad_norm: st.grad_sup,
        };
        if opts.record_trace {
            trace.push(row);
        }
        if is_converged(&point, &st, opts) {
            stop_reason = StopReason::Converged;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }

        let gt = &point.tangent_grad;
        let g_sq = gt.dot(gt);
        let floor = energy_floor(&point);
        let mut step = eta;
        let mut accepted = None;
        for _ in 0..opts.step.max_backtracks {
            if let Ok(trial) = normalize(p, &point.w.axpy(-step, gt))
                .and_then(|w| sphere_point(p, &w, &opts.projection))
            {
                let decrease = point.psi - trial.psi;
                let predicted = opts.step.sufficient_decrease * step * g_sq;
                let armijo = decrease >= predicted;
                let in_noise = predicted <= floor
                    && decrease >= -floor
                    && trial.tangent_grad.sup_norm() < st.grad_sup;
                if armijo || in_noise {
                    accepted = Some((trial, step));
                    break;
                }
            }
            step *= opts.step.backtrack;
        }
        let Some((next, step)) = accepted else {
            stop_reason = StopReason::Stalled;
            break;
        };

        eta = if opts.step.barzilai_borwein {
            let dw = next.w.sub(&point.w);
            let dg = next.tangent_grad.sub(&point.tangent_grad);
            let sy = dw.dot(&dg);
            if sy > 0.0 {
                (dw.dot(&dw) / sy).clamp(1e-10, 1e6)
            } else {
                step / opts.step.backtrack
            }
        } else {
            step / opts.step.backtrack
        };
        point = next;
        iterations += 1;
        if iterations % 1000 == 0 {
            log::debug!(
                "iter {iterations}: psi = {:.16e}, |grad| = {:e}",
                point.psi,
                point.tangent_grad.sup_norm()
            );
        }
    }

    if !opts.record_trace {
        let st = status(&point);
        trace.push(TraceRow {
            iter: iterations,
            s_w: point.projection.s,
            psi: point.psi,
            tangent_grad_norm: st.grad_sup,
        });
    }

    let mut u_star = point.projection.u.clone();
    let mut w_star = point.w.clone();
    if p.is_odd() && u_star[u_star.argmax_abs()] < 0.0 {
        u_star = u_star.scaled(-1.0);
        w_star = w_star.scaled(-1.0);
    }
    let energy = phi(p, &u_star)?;
    let res = residuals(p, &u_star)?;
    Ok(GroundStateResult {
        u_star,
        w_star,
        energy,
        residuals: res,
        trace,
        iterations,
        converged: stop_reason == StopReason::Converged,
        stop_reason,
        wall_time: start.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyOptions {
    /// Number of random rays in the inf-max cross-check.
    pub rays: usize,
    pub seed: u64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_points: usize,
    /// Relative to `max(1, ‖u‖_∞)`.
    pub tol_point: f64,
    /// Relative to `max(1, ‖u‖²)`.
    pub tol_nehari: f64,
    /// A ray fails when its maximum is below `energy - inf_max_slack`.
    pub inf_max_slack: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            rays: 100,
            seed: 0x5eed,
            grid_lo: 1e-3,
            grid_hi: 1e3,
            grid_points: 200,
            tol_point: 1e-8,
            tol_nehari: 1e-10,
            inf_max_slack: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub converged: bool,
    pub energy: f64,
    pub pointwise_residual: f64,
    pub pointwise_limit: f64,
    pub pointwise_pass: bool,
    pub nehari_residual: f64,
    pub nehari_limit: f64,
    pub nehari_pass: bool,
    /// Smallest `max_s Φ(s w)` over the sampled rays.
    pub min_ray_max: f64,
    pub ray_violations: usize,
    pub inf_max_pass: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.pointwise_pass && self.nehari_pass && self.inf_max_pass
    }
}

/// Random directions with independent uniform entries in `[-1, 1]`.
pub fn random_directions(g: &Graph, count: usize, seed: u64) -> Vec<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let values: Vec<f64> = (0..g.vertex_count())
                .map(|_| rng.gen_range(-1.0..=1.0))
                .collect();
            if values.iter().any(|&v| v != 0.0) {
                break Field::from_values(g, values).expect("finite samples");
            }
        })
        .collect()
}

/// `max_s Φ(s w)` over a log grid together with the projected maximiser.
pub fn ray_maximum(p: &Problem, w: &Field, grid: &[f64], proj: &ProjectionOptions) -> Result<f64> {
    let on_grid = ray_max_on_grid(p, w, grid)?;
    Ok(match project(p, w, proj) {
        Ok(r) => on_grid.max(r.fiber_value),
        Err(_) => on_grid,
    })
}

/// Checks the pointwise equation, Nehari membership, and that no sampled
/// ray `s -> Φ(s w)` peaks below the claimed ground-state energy.
pub fn verify(p: &Problem, r: &GroundStateResult, opts: &VerifyOptions) -> Result<VerifyReport> {
    verify_state(p, &r.u_star, r.converged, opts)
}

/// [`verify`] for a stored state; `converged` is copied into the report.
pub fn verify_state(
    p: &Problem,
    u: &Field,
    converged: bool,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let res = residuals(p, u)?;
    let energy = phi(p, u)?;
    let pointwise_limit = opts.tol_point * u.sup_norm().max(1.0);
    let norm_sq = p.weighted_inner(u, u)?;
    let nehari_limit = opts.tol_nehari * norm_sq.max(1.0);
    let nehari_residual = res.nehari.unwrap_or(f64::INFINITY);

    let grid = log_grid(opts.grid_lo, opts.grid_hi, opts.grid_points);
    let dirs = random_directions(p.graph(), opts.rays, opts.seed);
    let proj = ProjectionOptions::default();
    let maxima: Vec<f64> = exec::map(&dirs, |w| ray_maximum(p, w, &grid, &proj))
        .into_iter()
        .collect::<Result<_>>()?;
    let min_ray_max = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
    let ray_violations = maxima
        .iter()
        .filter(|&&m| m < energy - opts.inf_max_slack)
        .count();

    Ok(VerifyReport {
        converged,
        energy,
        pointwise_residual: res.pointwise_sup,
        pointwise_limit,
        pointwise_pass: res.pointwise_sup <= pointwise_limit,
        nehari_residual,
        nehari_limit,
        nehari_pass: nehari_residual <= nehari_limit,
        min_ray_max,
        ray_violations,
        inf_max_pass: ray_violations == 0,
    })
}

#[derive(Debug, Clone)]
pub struct LimitComparison {
    /// Ground-state energy with the well potential.
    pub c: f64,
    /// Ground-state energy with `V ≡ V_∞`.
    pub c_inf: f64,
    /// `c_inf - c`.
    pub gap: f64,
    pub well: GroundStateResult,
    pub limit: GroundStateResult,
}

/// Solves the well problem and its limit problem `V ≡ V_∞` on the same graph.
///
/// The limit problem is solved first. The well problem then starts from the
/// limit ground state moved so that its peak sits at the deepest dip (when
/// the graph has the needed symmetry; otherwise from a bump at the dip).
/// Since `Φ < Φ_∞` pointwise away from zero, that start already has
/// `Ψ < c_∞`, and the descent only lowers it. With no dips both problems
/// are identical and solved identically, so `c = c_∞` exactly.
pub fn compare_limit_energy(p_well: &Problem, opts: &SolverOptions) -> Result<LimitComparison> {
    if !p_well.nonlinearity().is_x_independent() {
        return Err(Error::Precondition(
            "limit comparison needs an x-independent nonlinearity".into(),
        ));
    }
    let pot = p_well.potential();
    let vinf = match pot.kind() {
        PotentialKind::BoundedWell { vinf, .. } => *vinf,
        PotentialKind::Constant { value } => *value,
        other => {
            return Err(Error::Precondition(format!(
                "limit comparison needs a bounded-well potential, got {other:?}"
            )))
        }
    };
    let g = p_well.graph();
    let p_inf = p_well.with_potential(Potential::constant(g, vinf)?)?;
    let limit = minimize(&p_inf, opts)?;

    let well_opts = match pot.kind() {
        PotentialKind::Constant { .. } => opts.clone(),
        _ => {
            let dip = (0..g.vertex_count())
                .min_by(|&a, &b| pot.values()[a].total_cmp(&pot.values()[b]))
                .unwrap_or(0);
            let init = match move_peak_to(g, &limit.u_star, dip) {
                Some(moved) => Init::UserField {
                    values: moved.into_values(),
                },
                None => Init::Bump { vertex: Some(dip) },
            };
            SolverOptions {
                init,
                ..opts.clone()
            }
        }
    };
    let well = minimize(p_well, &well_opts)?;
    Ok(LimitComparison {
        c: well.energy,
        c_inf: limit.energy,
        gap: limit.energy - well.energy,
        well,
        limit,
    })
}

fn move_peak_to(g: &Graph, u: &Field, target: usize) -> Option<Field> {
    let peak = u.argmax_abs();
    let shift = match g.mode() {
        GraphMode::PeriodicTorus => Shift::Displacement(
            g.coordinates(target)
                .iter()
                .zip(g.coordinates(peak))
                .map(|(&t, &s)| t - s)
                .collect(),
        ),
        GraphMode::Preset(_) => {
            let k = (0..g.group_order()).find(|&k| {
                g.shift_map(&Shift::Element(k))
                    .map(|m| m[peak] == target)
                    .unwrap_or(false)
            })?;
            Shift::Element(k)
        }
        _ => return None,
    };
    g.translate(u, &shift).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub size: usize,
    pub energy: f64,
    /// `c_previous - c_this`; `None` for the first size.
    pub decrease: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct TruncationStudy {
    pub rows: Vec<TruncationRow>,
    pub results: Vec<GroundStateResult>,
}

impl TruncationStudy {
    /// `true` when energies never increase with the box size.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].energy <= w[0].energy)
    }
}

/// Ground-state energies on Dirichlet boxes `[L; dim]` for increasing `L`.
///
/// Zero extension embeds the trial space of each box into the next, so the
/// energies are non-increasing in `L` whenever each solve finds its ground state.
pub fn truncation_study(
    dim: usize,
    sizes: &[usize],
    potential: impl Fn(&Graph) -> Result<Potential> + Sync,
    nonlinearity: Arc<dyn Nonlinearity>,
    opts: &SolverOptions,
) -> Result<TruncationStudy> {
    if sizes.is_empty() {
        return Err(Error::Precondition(
            "truncation study needs at least one size".into(),
        ));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition(format!(
            "sizes {sizes:?} must be strictly increasing"
        )));
    }
    let problems = sizes
        .iter()
        .map(|&l| {
            let g = Graph::lattice_box(dim, &vec![l; dim], Boundary::DirichletBox)?;
            let v = potential(&g)?;
            Problem::new(g, v, Arc::clone(&nonlinearity))
        })
        .collect::<Result<Vec<_>>>()?;
    let results = exec::map(&problems, |p| minimize(p, opts))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let rows = sizes
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(i, (&size, r))| TruncationRow {
            size,
            energy: r.energy,
            decrease: (i > 0).then(|| results[i - 1].energy - r.energy),
            converged: r.converged,
            iterations: r.iterations,
        })
        .collect();
    Ok(TruncationStudy { rows, results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PowerNonlinearity;

    fn cubic() -> Arc<dyn Nonlinearity> {
        Arc::new(PowerNonlinearity::homogeneous(1.0, 4.0).unwrap())
    }

    fn problem(g: Graph) -> Problem {
        let v = Potential::constant(&g, 1.0).unwrap();
        Problem::new(g, v, cubic()).unwrap()
    }

    #[test]
    fn single_vertex_ground_state() {
        let p = problem(Graph::from_edges(1, &[]).unwrap());
        let r = minimize(&p, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 5);
        assert!((r.u_star[0] - 1.0).abs() < 1e-10);
        assert!((r.energy - 0.25).abs() < 1e-10);
    }

    #[test]
    fn options_are_validated() {
        let p = problem(Graph::from_edges(1, &[]).unwrap());
        let mut opts = SolverOptions::default();
        opts.step.backtrack = 1.5;
        assert!(minimize(&p, &opts).is_err());
        let opts = SolverOptions {
            init: Init::UserField { values: vec![0.0] },
            ..Default::default()
        };
        assert_eq!(minimize(&p, &opts).unwrap_err(), Error::ZeroField);
    }

    #[test]
    fn iteration_budget_exhaustion_is_data() {
        let p = problem(Graph::lattice_box(1, &[9], Boundary::DirichletBox).unwrap());
        let opts = SolverOptions {
            max_iters: 2,
            init: Init::RandomPositive,
            ..Default::default()
        };
        let r = minimize(&p, &opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.stop_reason, StopReason::MaxIterations);
        assert_eq!(r.iterations, 2);
        assert_eq!(r.trace.len(), 3);
    }

    #[test]
    fn sign_is_normalised() {
        let p = problem(Graph::lattice_box(1, &[5], Boundary::DirichletBox).unwrap());
        let opts = SolverOptions {
            init: Init::UserField {
                values: vec![0.0, -0.2, -1.0, -0.2, 0.0],
            },
            ..Default::default()
        };
        let r = minimize(&p, &opts).unwrap();
        assert!(r.converged);
        assert!(r.u_star[r.u_star.argmax_abs()] > 0.0);
    }

    #[test]
    fn corrupted_result_fails_verification() {
        let p = problem(Graph::from_edges(1, &[]).unwrap());
        let mut r = minimize(&p, &SolverOptions::default()).unwrap();
        let ok = verify(&p, &r, &VerifyOptions::default()).unwrap();
        assert!(ok.passed(), "{ok:?}");
        r.u_star = Field::constant(p.graph(), 1.1);
        let bad = verify(&p, &r, &VerifyOptions::default()).unwrap();
        assert!(!bad.pointwise_pass && !bad.nehari_pass);
        // 1.1 - 1.1^3 and 1.1^2 - 1.1^4
        assert!((bad.pointwise_residual - 0.231).abs() < 1e-12);
        assert!((bad.nehari_residual - 0.2541).abs() < 1e-12);
    }

    #[test]
    fn truncation_preconditions() {
        let v = |g: &Graph| Potential::constant(g, 1.0);
        let opts = SolverOptions::default();
        assert!(truncation_study(1, &[5, 3], v, cubic(), &opts).is_err());
        assert!(truncation_study(1, &[], v, cubic(), &opts).is_err());
        let single = truncation_study(1, &[3], v, cubic(), &opts).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert!(single.is_monotone());
        assert_eq!(single.rows[0].decrease, None);
    }

    #[test]
    fn comparison_needs_well_and_autonomous_f() {
        let g = Graph::lattice_box(1, &[8], Boundary::PeriodicTorus).unwrap();
        let v = Potential::periodic(&g, &[1.0, 2.0], &[2]).unwrap();
        let p = Problem::new(g.clone(), v, cubic()).unwrap();
        assert!(compare_limit_energy(&p, &SolverOptions::default()).is_err());

        let coeff = crate::model::Coefficient::PerVertex((0..8).map(|x| 1.0 + x as f64).collect());
        let nl = PowerNonlinearity::new(vec![coeff], vec![4.0]).unwrap();
        let p = Problem::new(
            g.clone(),
            Potential::constant(&g, 1.0).unwrap(),
            Arc::new(nl),
        )
        .unwrap();
        assert!(compare_limit_energy(&p, &SolverOptions::default()).is_err());
    }
}
