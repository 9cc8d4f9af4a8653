//! Ray projection onto the Nehari set and the reduced functional on the
//! unit sphere of the potential-weighted norm.
//!
//! For `w ≠ 0` the fibering map `α_w(s) = Φ(s w)` has derivative
//! `α'_w(s) = s (‖w‖² - I'(s w) w / s)`. The bracketed quantity is strictly
//! decreasing in `s` for admissible nonlinearities, so `α_w` has exactly one
//! critical point `s_w > 0`, a maximum, and `m(w) = s_w w` lies on the
//! Nehari set `{u ≠ 0 : Φ'(u) u = 0}`.

use serde::{Deserialize, Serialize};

use crate::calculus::{self, check};
use crate::error::{Error, Result};
use crate::exec;
use crate::field::Field;
use crate::functional::{phi, phi_gradient, Problem};

/// Accepted deviation of `‖w‖` from 1 before a direction is rejected.
pub const SPHERE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProjectionOptions {
    /// Stop when `|α'_w(s)| <= tol * max(1, ‖w‖²)`.
    pub tol: f64,
    /// Maximum number of doublings (or halvings) while bracketing.
    pub max_expand: usize,
    pub max_bisect: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            tol: 1e-12,
            max_expand: 200,
            max_bisect: 400,
        }
    }
}

/// Result of projecting a direction onto the Nehari set.
#[derive(Debug, Clone, PartialEq)]
pub struct RayProjection {
    /// The unique maximiser `s_w` of `s -> Φ(s w)`.
    pub s: f64,
    /// `s_w w`.
    pub u: Field,
    /// `Φ(s_w w)`.
    pub fiber_value: f64,
    /// Final bracket with `α'_w(lo) > 0 > α'_w(hi)`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Value and derivative of the fibering map: `(Φ(s w), d/ds Φ(s w))`.
pub fn fiber(p: &Problem, w: &Field, s: f64) -> Result<(f64, f64)> {
    check(p.graph(), w)?;
    if w.is_zero() {
        return Err(Error::ZeroField);
    }
    if !(s > 0.0) {
        return Err(Error::Precondition(format!(
            "fiber parameter s = {s} must be positive"
        )));
    }
    let sw = w.scaled(s);
    let value = phi(p, &sw)?;
    let norm_sq = p.weighted_inner(w, w)?;
    let derivative = s * norm_sq - p.nonlinear_pairing(&sw, w);
    Ok((value, derivative))
}

/// `g(s) = ‖w‖² - I'(s w) w / s`; `α'_w(s) = s g(s)`.
fn reduced_slope(p: &Problem, w: &Field, norm_sq: f64, s: f64) -> f64 {
    let nl = p.nonlinearity().as_ref();
    let pairing: f64 = w
        .values()
        .iter()
        .enumerate()
        .map(|(x, &wx)| nl.f(x, s * wx) * wx)
        .sum();
    norm_sq - pairing / s
}

/// Finds `s_w` by geometric bracketing from `s = 1` followed by bisection.
pub fn project(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<RayProjection> {
    check(p.graph(), w)?;
    if w.is_zero() {
        return Err(Error::ZeroField);
    }
    let norm_sq = p.weighted_inner(w, w)?;
    let slope = |s: f64| reduced_slope(p, w, norm_sq, s);
    let fail = |reason: &str, last_s: f64| Error::Projection {
        reason: reason.to_string(),
        norm_sq,
        last_s,
    };

    let mut iterations = 0;
    let mut lo = 1.0;
    let mut g_lo = slope(lo);
    while !(g_lo > 0.0) {
        if g_lo.is_nan() {
            return Err(fail("slope evaluated to NaN", lo));
        }
        iterations += 1;
        if iterations > opts.max_expand {
            return Err(fail("no positive slope found while shrinking s", lo));
        }
        lo *= 0.5;
        g_lo = slope(lo);
    }
    let mut expansions = 0;
    let mut hi = lo.max(1.0);
    let mut g_hi = slope(hi);
    while !(g_hi < 0.0) {
        if g_hi.is_nan() || !hi.is_finite() {
            return Err(fail("slope overflowed while growing s", hi));
        }
        expansions += 1;
        if expansions > opts.max_expand {
            return Err(fail("no negative slope found while growing s", hi));
        }
        lo = hi;
        hi *= 2.0;
        g_hi = slope(hi);
    }
    iterations += expansions;

    let target = opts.tol * norm_sq.max(1.0);
    let mut s = 0.5 * (lo + hi);
    for _ in 0..opts.max_bisect {
        iterations += 1;
        s = 0.5 * (lo + hi);
        if s <= lo || s >= hi {
            // bracket is down to adjacent doubles
            break;
        }
        let gs = slope(s);
        if (s * gs).abs() <= target {
            break;
        }
        if gs > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
    }
    if s <= lo || s >= hi {
        s = if lo * slope(lo).abs() <= hi * slope(hi).abs() {
            lo
        } else {
            hi
        };
    }

    let u = w.scaled(s);
    let fiber_value = phi(p, &u)?;
    Ok(RayProjection {
        s,
        u,
        fiber_value,
        bracket: (lo, hi),
        iterations,
    })
}

/// Projects a batch of directions, in parallel when the `parallel` feature is on.
pub fn project_many(
    p: &Problem,
    dirs: &[Field],
    opts: &ProjectionOptions,
) -> Vec<Result<RayProjection>> {
    exec::map(dirs, |w| project(p, w, opts))
}

/// Rescales `w` to the unit sphere when it is already within [`SPHERE_TOL`] of it.
pub fn on_sphere(p: &Problem, w: &Field) -> Result<Field> {
    let norm = p.weighted_norm(w)?;
    if (norm - 1.0).abs() > SPHERE_TOL {
        return Err(Error::OffSphere { norm });
    }
    Ok(w.scaled(1.0 / norm))
}

/// `w / ‖w‖`.
pub fn normalize(p: &Problem, w: &Field) -> Result<Field> {
    let norm = p.weighted_norm(w)?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(w.scaled(1.0 / norm))
}

/// `m : S -> N`, `w -> s_w w`.
pub fn sphere_to_nehari(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<Field> {
    let w = on_sphere(p, w)?;
    Ok(project(p, &w, opts)?.u)
}

/// `m^{-1} : N -> S`, `u -> u / ‖u‖`. Requires `|Φ'(u) u| <= tol * max(1, ‖u‖²)`.
pub fn nehari_to_sphere(p: &Problem, u: &Field, tol: f64) -> Result<Field> {
    check(p.graph(), u)?;
    if u.is_zero() {
        return Err(Error::ZeroField);
    }
    let norm_sq = p.weighted_inner(u, u)?;
    let nehari = norm_sq - p.nonlinear_pairing(u, u);
    if nehari.abs() > tol * norm_sq.max(1.0) {
        return Err(Error::Precondition(format!(
            "field is off the Nehari set: |Φ'(u)u| = {:e}",
            nehari.abs()
        )));
    }
    Ok(u.scaled(1.0 / norm_sq.sqrt()))
}

/// Everything the descent needs at one point of the sphere.
#[derive(Debug, Clone)]
pub struct SpherePoint {
    pub w: Field,
    pub projection: RayProjection,
    /// `Ψ(w) = Φ(m(w))`.
    pub psi: f64,
    /// Coordinate gradient of `Φ` at `m(w)`.
    pub phi_grad: Field,
    /// `l^2` field representing `Ψ'(w)` on the tangent space, itself tangent.
    pub tangent_grad: Field,
}

impl SpherePoint {
    pub fn u(&self) -> &Field {
        &self.projection.u
    }
}

/// Evaluates `Ψ` and its tangent gradient at a unit direction.
///
/// `Ψ'(w) z = ‖m(w)‖ Φ'(m(w)) z` for `z` in `T_w S = {z : ⟨w, z⟩ = 0}`.
/// Writing `G` for the coordinate gradient at `m(w)`, the returned field is
/// the `l^2`-orthogonal projection of `‖m(w)‖ G` onto `T_w S`, whose `l^2`
/// normal is `(-Δ + V) w`. It pairs with every tangent `z` exactly as `Ψ'(w)`
/// does and lies in `T_w S`, so `w - η g` leaves the sphere only to second order.
pub fn sphere_point(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<SpherePoint> {
    let w = on_sphere(p, w)?;
    let projection = project(p, &w, opts)?;
    let psi = projection.fiber_value;
    let phi_grad = phi_gradient(p, &projection.u)?;
    let scale = projection.s * p.weighted_norm(&w)?;
    let tangent_grad = tangent_projection(p, &w, &phi_grad.scaled(scale))?;
    Ok(SpherePoint {
        w,
        projection,
        psi,
        phi_grad,
        tangent_grad,
    })
}

/// `Ψ(w) = Φ(m(w))`.
pub fn psi(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<f64> {
    let w = on_sphere(p, w)?;
    Ok(project(p, &w, opts)?.fiber_value)
}

pub fn psi_gradient_tangent(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<Field> {
    Ok(sphere_point(p, w, opts)?.tangent_grad)
}

/// `l^2`-orthogonal projection of `g` onto `{z : ⟨w, z⟩ = 0}`.
pub fn tangent_projection(p: &Problem, w: &Field, g: &Field) -> Result<Field> {
    let normal = p.operator(w)?;
    let nn = normal.dot(&normal);
    if nn == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(g.axpy(-normal.dot(g) / nn, &normal))
}

const RIESZ_TOL: f64 = 1e-13;

/// Dual norm `‖Φ'(u)‖ = sup_{‖v‖=1} |Φ'(u) v|`, via the Riesz representative
/// `(-Δ + V)^{-1} G`.
pub fn phi_derivative_norm(p: &Problem, u: &Field) -> Result<f64> {
    let grad = phi_gradient(p, u)?;
    let riesz = calculus::solve_schrodinger(
        p.graph(),
        p.potential(),
        &grad,
        RIESZ_TOL,
        10 * p.graph().vertex_count() + 100,
    )?;
    Ok(grad.dot(&riesz).max(0.0).sqrt())
}

/// Dual norm of `Ψ'(w)` on `T_w S`: the tangential part of the Riesz
/// representative of `‖m(w)‖ Φ'(m(w))`.
pub fn psi_derivative_norm(p: &Problem, w: &Field, opts: &ProjectionOptions) -> Result<f64> {
    let point = sphere_point(p, w, opts)?;
    let scaled = point.phi_grad.scaled(p.weighted_norm(point.u())?);
    let riesz = calculus::solve_schrodinger(
        p.graph(),
        p.potential(),
        &scaled,
        RIESZ_TOL,
        10 * p.graph().vertex_count() + 100,
    )?;
    let radial = p.weighted_inner(&riesz, &point.w)?;
    let tangent = riesz.axpy(-radial, &point.w);
    p.weighted_norm(&tangent)
}

/// Lower estimates of `(‖Ψ'(w)‖, ‖Φ'(m(w))‖)` from a finite set of directions:
/// the largest `|Ψ'(w) z| / ‖z‖` over tangent parts `z` of the directions and
/// the largest `|Φ'(u) v| / ‖v‖` over the directions themselves.
pub fn sampled_derivative_norms(
    p: &Problem,
    w: &Field,
    dirs: &[Field],
    opts: &ProjectionOptions,
) -> Result<(f64, f64)> {
    let point = sphere_point(p, w, opts)?;
    let u_norm = p.weighted_norm(point.u())?;
    let mut psi_est: f64 = 0.0;
    let mut phi_est: f64 = 0.0;
    for v in dirs {
        let v_norm = p.weighted_norm(v)?;
        if v_norm > 0.0 {
            phi_est = phi_est.max(point.phi_grad.dot(v).abs() / v_norm);
        }
        let z = v.axpy(-p.weighted_inner(v, &point.w)?, &point.w);
        let z_norm = p.weighted_norm(&z)?;
        if z_norm > 0.0 {
            psi_est = psi_est.max(u_norm * point.phi_grad.dot(&z).abs() / z_norm);
        }
    }
    Ok((psi_est, phi_est))
}

/// `n` points spaced evenly in `log s` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if n == 1 {
                lo
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Number of sign changes of `α'_w` along `grid` (exact zeros are skipped).
pub fn fiber_sign_changes(p: &Problem, w: &Field, grid: &[f64]) -> Result<usize> {
    let mut changes = 0;
    let mut last_sign = 0.0;
    for &s in grid {
        let (_, d) = fiber(p, w, s)?;
        if d == 0.0 {
            continue;
        }
        let sign = d.signum();
        if last_sign != 0.0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    Ok(changes)
}

/// `max_s Φ(s w)` over the grid.
pub fn ray_max_on_grid(p: &Problem, w: &Field, grid: &[f64]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for &s in grid {
        best = best.max(phi(p, &w.scaled(s))?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, Graph};
    use crate::model::{Potential, PowerNonlinearity};
    use std::sync::Arc;

    fn single_vertex() -> Problem {
        let g = Graph::from_edges(1, &[]).unwrap();
        let v = Potential::constant(&g, 1.0).unwrap();
        Problem::new(
            g,
            v,
            Arc::new(PowerNonlinearity::homogeneous(1.0, 4.0).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_fiber_closed_form() {
        let p = single_vertex();
        let w = Field::constant(p.graph(), 1.0);
        for s in [0.1, 0.5, 1.0, 1.7, 3.0] {
            let (value, d) = fiber(&p, &w, s).unwrap();
            let expect_v = 0.5 * s * s - 0.25 * s.powi(4);
            let expect_d = s - s.powi(3);
            assert!((value - expect_v).abs() < 1e-14 * expect_v.abs().max(1.0));
            assert!((d - expect_d).abs() < 1e-14 * expect_d.abs().max(1.0));
        }
    }

    #[test]
    fn single_vertex_projection_and_maps() {
        let p = single_vertex();
        let w = Field::constant(p.graph(), 1.0);
        let proj = project(&p, &w, &Default::default()).unwrap();
        assert!((proj.s - 1.0).abs() < 1e-12);
        assert!((proj.fiber_value - 0.25).abs() < 1e-12);
        let (lo, hi) = proj.bracket;
        assert!(lo <= proj.s && proj.s <= hi);
        let u = sphere_to_nehari(&p, &w, &Default::default()).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-12);
        let back = nehari_to_sphere(&p, &Field::constant(p.graph(), 1.0), 1e-12).unwrap();
        assert_eq!(back[0], 1.0);
    }

    #[test]
    fn zero_and_off_sphere_inputs() {
        let p = single_vertex();
        let zero = Field::zeros(p.graph());
        assert_eq!(fiber(&p, &zero, 1.0).unwrap_err(), Error::ZeroField);
        assert_eq!(
            project(&p, &zero, &Default::default()).unwrap_err(),
            Error::ZeroField
        );
        let two = Field::constant(p.graph(), 2.0);
        assert!(matches!(
            sphere_to_nehari(&p, &two, &Default::default()),
            Err(Error::OffSphere { .. })
        ));
        assert!(nehari_to_sphere(&p, &two, 1e-10).is_err());
        assert!(nehari_to_sphere(&p, &zero, 1e-10).is_err());
    }

    #[test]
    fn bracketing_limit_is_an_error() {
        // A slope that never turns negative: f = u^3 scaled down so hard that
        // s_w lies beyond 2^max_expand.
        let g = Graph::from_edges(1, &[]).unwrap();
        let v = Potential::constant(&g, 1.0).unwrap();
        let nl = PowerNonlinearity::homogeneous(1e-30, 4.0).unwrap();
        let thresholds = crate::model::ConditionThresholds {
            large_ratio_min: 0.0,
            ..Default::default()
        };
        let p = Problem::with_thresholds(g, v, Arc::new(nl), &thresholds).unwrap();
        let opts = ProjectionOptions {
            max_expand: 10,
            ..Default::default()
        };
        let w = Field::constant(p.graph(), 1.0);
        assert!(matches!(
            project(&p, &w, &opts),
            Err(Error::Projection { .. })
        ));
        // s_w = 1e15 is reachable with the default budget
        let proj = project(&p, &w, &Default::default()).unwrap();
        assert!((proj.s / 1e15 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn log_grid_endpoints() {
        let grid = log_grid(1e-3, 1e3, 7);
        assert_eq!(grid.len(), 7);
        assert!((grid[0] - 1e-3).abs() < 1e-18);
        assert!((grid[3] - 1.0).abs() < 1e-12);
        assert!((grid[6] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn tangent_projection_is_tangent() {
        let g = Graph::lattice_box(1, &[6], Boundary::DirichletBox).unwrap();
        let v = Potential::constant(&g, 1.0).unwrap();
        let p = Problem::new(
            g,
            v,
            Arc::new(PowerNonlinearity::homogeneous(1.0, 4.0).unwrap()),
        )
        .unwrap();
        let w = normalize(&p, &Field::from_fn(p.graph(), |x| 1.0 + x as f64).unwrap()).unwrap();
        let gr = Field::from_fn(p.graph(), |x| (x as f64).cos()).unwrap();
        let t = tangent_projection(&p, &w, &gr).unwrap();
        assert!(p.weighted_inner(&w, &t).unwrap().abs() < 1e-13);
    }
}
