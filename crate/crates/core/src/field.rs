use std::ops::Index;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A real-valued function on the vertices of a [`Graph`].
///
/// Construction rejects non-finite entries. Arithmetic between fields of
/// different graphs is a programming error and panics.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    graph_id: u64,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(g: &Graph) -> Field {
        Field::constant(g, 0.0)
    }

    pub fn constant(g: &Graph, c: f64) -> Field {
        Field {
            graph_id: g.id(),
            values: vec![c; g.vertex_count()],
        }
    }

    /// Indicator of vertex `x`.
    pub fn delta(g: &Graph, x: usize) -> Field {
        let mut f = Field::zeros(g);
        f.values[x] = 1.0;
        f
    }

    pub fn from_values(g: &Graph, values: Vec<f64>) -> Result<Field> {
        if values.len() != g.vertex_count() {
            return Err(Error::Mismatch(format!(
                "{} values for a graph with {} vertices",
                values.len(),
                g.vertex_count()
            )));
        }
        if let Some((vertex, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { vertex, value });
        }
        Ok(Field {
            graph_id: g.id(),
            values,
        })
    }

    pub fn from_fn(g: &Graph, f: impl FnMut(usize) -> f64) -> Result<Field> {
        Field::from_values(g, (0..g.vertex_count()).map(f).collect())
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Field {
        debug_assert_eq!(values.len(), self.values.len());
        Field {
            graph_id: self.graph_id,
            values,
        }
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Field) -> Field {
        self.same_graph(other);
        self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x + a * y)
                .collect(),
        )
    }

    pub fn add(&self, other: &Field) -> Field {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.axpy(-1.0, other)
    }

    /// Plain `l^2` pairing `Σ_x u(x) v(x)`.
    pub fn dot(&self, other: &Field) -> f64 {
        self.same_graph(other);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| x * y)
            .sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index of the largest `|u(x)|`, lowest index on ties.
    pub fn argmax_abs(&self) -> usize {
        let mut best = 0;
        for (x, v) in self.values.iter().enumerate() {
            if v.abs() > self.values[best].abs() {
                best = x;
            }
        }
        best
    }

    fn same_graph(&self, other: &Field) {
        assert_eq!(
            self.graph_id, other.graph_id,
            "fields live on different graphs"
        );
    }
}

impl Index<usize> for Field {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.values[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Boundary, Graph};

    #[test]
    fn rejects_bad_values() {
        let g = Graph::lattice_box(1, &[3], Boundary::DirichletBox).unwrap();
        assert!(matches!(
            Field::from_values(&g, vec![1.0, 2.0]),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            Field::from_values(&g, vec![1.0, f64::NAN, 0.0]),
            Err(Error::NonFinite { vertex: 1, .. })
        ));
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        let g = Graph::lattice_box(1, &[4], Boundary::DirichletBox).unwrap();
        let u = Field::from_values(&g, vec![0.5, -2.0, 2.0, 1.0]).unwrap();
        assert_eq!(u.argmax_abs(), 1);
    }
}
