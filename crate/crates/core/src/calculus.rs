//! Discrete calculus on a [`Graph`] with counting measure: the Laplacian,
//! the gradient form, the Dirichlet energy, `l^p` norms and the `H^1` and
//! potential-weighted inner products.
//!
//! On a Dirichlet box, fields are extended by zero outside the box. Each
//! missing lattice edge `x ~ z` (with `z` outside) still costs
//! `(u(z) - u(x))^2 = u(x)^2` of energy; both halves of that edge's
//! gradient-form contribution are booked at the inside vertex `x`, so that
//! `Σ_x Γ(u, v)(x) = -Σ_x Δu(x) v(x)` holds on the box exactly as on `Z^N`.
//!
//! All sums run in ascending vertex order.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::Graph;
use crate::model::Potential;

pub(crate) fn check(g: &Graph, u: &Field) -> Result<()> {
    if u.graph_id() != g.id() || u.len() != g.vertex_count() {
        return Err(Error::Mismatch(format!(
            "field of length {} vs graph with {} vertices",
            u.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

pub(crate) fn check_potential(g: &Graph, v: &Potential) -> Result<()> {
    if v.values().len() != g.vertex_count() {
        return Err(Error::Mismatch(format!(
            "potential of length {} vs graph with {} vertices",
            v.values().len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// `Δu(x) = Σ_{y~x} (u(y) - u(x))`, with zero extension outside a Dirichlet box.
pub fn laplacian(g: &Graph, u: &Field) -> Result<Field> {
    check(g, u)?;
    let values = (0..g.vertex_count())
        .map(|x| {
            let ux = u[x];
            let inner: f64 = g.neighbors(x).iter().map(|&y| u[y] - ux).sum();
            inner - g.boundary_degree(x) as f64 * ux
        })
        .collect();
    Ok(u.with_values(values))
}

/// `Γ(u, v)(x) = ½ Σ_{y~x} (u(y) - u(x)) (v(y) - v(x))`.
pub fn gradient_form(g: &Graph, u: &Field, v: &Field) -> Result<Field> {
    check(g, u)?;
    check(g, v)?;
    let values = (0..g.vertex_count())
        .map(|x| {
            let (ux, vx) = (u[x], v[x]);
            let inner: f64 = g
                .neighbors(x)
                .iter()
                .map(|&y| (u[y] - ux) * (v[y] - vx))
                .sum();
            0.5 * inner + g.boundary_degree(x) as f64 * ux * vx
        })
        .collect();
    Ok(u.with_values(values))
}

/// Dirichlet energy `E(u) = Σ_x Γ(u, u)(x)`.
pub fn energy(g: &Graph, u: &Field) -> Result<f64> {
    Ok(gradient_form(g, u, u)?.values().iter().sum())
}

/// `(Σ |u|^p)^{1/p}` for finite `p >= 1`, `max |u|` for `p = ∞`.
pub fn lp_norm(u: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Precondition(format!(
            "l^p norm needs p >= 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(u.sup_norm());
    }
    if p == 2.0 {
        return Ok(u.dot(u).sqrt());
    }
    let sum: f64 = u.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// `‖u‖_{H^1} = (E(u) + ‖u‖_2^2)^{1/2}`.
pub fn h1_norm(g: &Graph, u: &Field) -> Result<f64> {
    Ok((energy(g, u)? + u.dot(u)).sqrt())
}

/// `⟨u, v⟩ = Σ_x Γ(u, v)(x) + V(x) u(x) v(x)`.
pub fn weighted_inner(g: &Graph, pot: &Potential, u: &Field, v: &Field) -> Result<f64> {
    check_potential(g, pot)?;
    let gamma = gradient_form(g, u, v)?;
    Ok(gamma
        .values()
        .iter()
        .zip(pot.values())
        .enumerate()
        .map(|(x, (&gm, &vx))| gm + vx * u[x] * v[x])
        .sum())
}

/// `‖u‖ = ⟨u, u⟩^{1/2}`.
pub fn weighted_norm(g: &Graph, pot: &Potential, u: &Field) -> Result<f64> {
    Ok(weighted_inner(g, pot, u, u)?.max(0.0).sqrt())
}

/// The Schrödinger operator `(-Δ + V) u`. Its `l^2` pairing with `v` is `⟨u, v⟩`.
pub fn schrodinger_operator(g: &Graph, pot: &Potential, u: &Field) -> Result<Field> {
    check_potential(g, pot)?;
    let lap = laplacian(g, u)?;
    Ok(u.with_values(
        lap.values()
            .iter()
            .zip(pot.values())
            .zip(u.values())
            .map(|((&l, &vx), &ux)| vx * ux - l)
            .collect(),
    ))
}

/// `C' = (1 + 2C)^{1/2}` with `C` the degree bound, so that
/// `‖u‖_2 / C' <= ‖u‖_{H^1} <= C' ‖u‖_2`.
///
/// The upper bound is sharp up to the spectrum of `-Δ`, whose top is `2C`
/// on bipartite lattices.
pub fn norm_equivalence_constant(g: &Graph) -> f64 {
    (1.0 + 2.0 * g.degree_bound() as f64).sqrt()
}

/// Solves `(-Δ + V) r = b` by conjugate gradients.
///
/// The operator is symmetric positive definite for a positive potential.
/// Iterates until `‖residual‖_2 <= tol * ‖b‖_2`.
pub fn solve_schrodinger(
    g: &Graph,
    pot: &Potential,
    b: &Field,
    tol: f64,
    max_iters: usize,
) -> Result<Field> {
    check(g, b)?;
    let b_norm = b.dot(b).sqrt();
    let mut r = b.clone();
    let mut x = Field::zeros(g);
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    for _ in 0..max_iters {
        if rr.sqrt() <= tol * b_norm {
            return Ok(x);
        }
        let ap = schrodinger_operator(g, pot, &p)?;
        let alpha = rr / p.dot(&ap);
        x = x.axpy(alpha, &p);
        r = r.axpy(-alpha, &ap);
        let rr_next = r.dot(&r);
        p = r.axpy(rr_next / rr, &p);
        rr = rr_next;
    }
    if rr.sqrt() <= tol * b_norm {
        Ok(x)
    } else {
        Err(Error::Precondition(format!(
            "conjugate gradients stalled at relative residual {:e}",
            rr.sqrt() / b_norm
        )))
    }
}
