//! The energy functional `Φ(u) = ½‖u‖² - Σ_x F(x, u(x))`, its derivative,
//! its `l^2` gradient and the residuals of the pointwise equation
//! `-Δu + V u = f(x, u)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::calculus::{self, check};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graph::Graph;
use crate::model::{
    check_conditions, default_grid, ConditionReport, ConditionThresholds, Nonlinearity, Potential,
};

/// A graph, an admissible potential and an admissible nonlinearity.
#[derive(Debug, Clone)]
pub struct Problem {
    graph: Graph,
    potential: Potential,
    nonlinearity: Arc<dyn Nonlinearity>,
    conditions: ConditionReport,
    odd: bool,
}

impl Problem {
    /// Assembles a problem, gating the nonlinearity with the default thresholds.
    pub fn new(
        graph: Graph,
        potential: Potential,
        nonlinearity: Arc<dyn Nonlinearity>,
    ) -> Result<Problem> {
        Problem::with_thresholds(
            graph,
            potential,
            nonlinearity,
            &ConditionThresholds::default(),
        )
    }

    pub fn with_thresholds(
        graph: Graph,
        potential: Potential,
        nonlinearity: Arc<dyn Nonlinearity>,
        thresholds: &ConditionThresholds,
    ) -> Result<Problem> {
        calculus::check_potential(&graph, &potential)?;
        let grid = default_grid(&graph, nonlinearity.as_ref());
        let conditions = check_conditions(nonlinearity.as_ref(), &grid, thresholds);
        if !conditions.passed() {
            return Err(Error::Model(format!(
                "nonlinearity is not admissible: {}",
                conditions.summary()
            )));
        }
        let odd = grid.iter().all(|&(x, u)| {
            let (a, b) = (nonlinearity.f(x, u), nonlinearity.f(x, -u));
            a + b == 0.0 || (a + b).abs() <= 1e-12 * a.abs()
        });
        Ok(Problem {
            graph,
            potential,
            nonlinearity,
            conditions,
            odd,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn nonlinearity(&self) -> &Arc<dyn Nonlinearity> {
        &self.nonlinearity
    }

    pub fn conditions(&self) -> &ConditionReport {
        &self.conditions
    }

    /// `true` when `f(x, -u) = -f(x, u)` on the sample grid, so critical
    /// points come in `±u` pairs.
    pub fn is_odd(&self) -> bool {
        self.odd
    }

    /// Same graph and nonlinearity with a different potential.
    pub fn with_potential(&self, potential: Potential) -> Result<Problem> {
        calculus::check_potential(&self.graph, &potential)?;
        Ok(Problem {
            graph: self.graph.clone(),
            potential,
            nonlinearity: Arc::clone(&self.nonlinearity),
            conditions: self.conditions.clone(),
            odd: self.odd,
        })
    }

    pub(crate) fn nonlinear_field(&self, u: &Field) -> Field {
        let nl = self.nonlinearity.as_ref();
        u.with_values(
            u.values()
                .iter()
                .enumerate()
                .map(|(x, &ux)| nl.f(x, ux))
                .collect(),
        )
    }

    /// `I(u) = Σ_x F(x, u(x))`.
    pub fn potential_energy(&self, u: &Field) -> f64 {
        let nl = self.nonlinearity.as_ref();
        u.values()
            .iter()
            .enumerate()
            .map(|(x, &ux)| nl.primitive(x, ux))
            .sum()
    }

    /// `I'(u) v = Σ_x f(x, u(x)) v(x)`.
    pub fn nonlinear_pairing(&self, u: &Field, v: &Field) -> f64 {
        let nl = self.nonlinearity.as_ref();
        u.values()
            .iter()
            .zip(v.values())
            .enumerate()
            .map(|(x, (&ux, &vx))| nl.f(x, ux) * vx)
            .sum()
    }

    pub fn weighted_norm(&self, u: &Field) -> Result<f64> {
        calculus::weighted_norm(&self.graph, &self.potential, u)
    }

    pub fn weighted_inner(&self, u: &Field, v: &Field) -> Result<f64> {
        calculus::weighted_inner(&self.graph, &self.potential, u, v)
    }

    /// `(-Δ + V) u`.
    pub fn operator(&self, u: &Field) -> Result<Field> {
        calculus::schrodinger_operator(&self.graph, &self.potential, u)
    }
}

/// Residual diagnostics of a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `sup_x |-Δu + V u - f(x, u)|`.
    pub pointwise_sup: f64,
    /// `|Φ'(u) u|`, or `None` for `u = 0`.
    pub nehari: Option<f64>,
    /// `l^2` norm of the coordinate gradient.
    pub grad_norm: f64,
}

/// `Φ(u) = ½‖u‖² - I(u)`.
pub fn phi(p: &Problem, u: &Field) -> Result<f64> {
    check(p.graph(), u)?;
    let norm_sq = p.weighted_inner(u, u)?;
    Ok(0.5 * norm_sq - p.potential_energy(u))
}

/// `Φ'(u) v = ⟨u, v⟩ - Σ_x f(x, u) v`.
pub fn phi_derivative(p: &Problem, u: &Field, v: &Field) -> Result<f64> {
    check(p.graph(), u)?;
    check(p.graph(), v)?;
    Ok(p.weighted_inner(u, v)? - p.nonlinear_pairing(u, v))
}

/// Coordinate gradient `-Δu + V u - f(x, u)`: the `l^2` representative of `Φ'(u)`.
pub fn phi_gradient(p: &Problem, u: &Field) -> Result<Field> {
    let au = p.operator(u)?;
    let fu = p.nonlinear_field(u);
    Ok(au.sub(&fu))
}

pub fn residuals(p: &Problem, u: &Field) -> Result<Residuals> {
    let grad = phi_gradient(p, u)?;
    let nehari = if u.is_zero() {
        None
    } else {
        Some(phi_derivative(p, u, u)?.abs())
    };
    Ok(Residuals {
        pointwise_sup: grad.sup_norm(),
        nehari,
        grad_norm: grad.dot(&grad).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PowerNonlinearity;

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
    fn closed_form_single_vertex() {
        let p = single_vertex();
        let g = p.graph().clone();
        let one = Field::constant(&g, 1.0);
        assert_eq!(phi(&p, &Field::zeros(&g)).unwrap(), 0.0);
        assert_eq!(phi(&p, &one).unwrap(), 0.25);
        assert_eq!(phi_derivative(&p, &one, &one).unwrap(), 0.0);
        assert!(phi_gradient(&p, &one).unwrap().is_zero());
        let r = residuals(&p, &one).unwrap();
        assert_eq!(r.pointwise_sup, 0.0);
        assert_eq!(r.nehari, Some(0.0));
        assert_eq!(r.grad_norm, 0.0);
    }

    #[test]
    fn doubled_solution_residual() {
        let p = single_vertex();
        let two = Field::constant(p.graph(), 2.0);
        // 2 - 2^3
        assert_eq!(residuals(&p, &two).unwrap().pointwise_sup, 6.0);
    }

    #[test]
    fn zero_field_has_no_nehari_residual() {
        let p = single_vertex();
        let r = residuals(&p, &Field::zeros(p.graph())).unwrap();
        assert_eq!(r.nehari, None);
        assert_eq!(r.grad_norm, 0.0);
        let v = Field::constant(p.graph(), 3.0);
        assert_eq!(
            phi_derivative(&p, &Field::zeros(p.graph()), &v).unwrap(),
            0.0
        );
    }

    #[test]
    fn inadmissible_nonlinearity_is_gated() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let v = Potential::constant(&g, 1.0).unwrap();
        let bounded = crate::model::CustomNonlinearity::new(
            "saturating",
            |_, u| u * u * u / (1.0 + u * u),
            |_, u| 0.5 * u * u - 0.5 * (u * u).ln_1p(),
            true,
        );
        assert!(matches!(
            Problem::new(g, v, Arc::new(bounded)),
            Err(Error::Model(_))
        ));
    }
}
