//! Finite graphs: truncated or periodic lattice boxes of `Z^N`, periodic
//! quotients of a few quasi-transitive graphs, and plain edge lists.
//!
//! Vertices of lattice graphs are numbered row-major over the multi-index
//! (last axis fastest), so vertex `x = (x_0, .., x_{N-1})` has index
//! `((x_0 * s_1 + x_1) * s_2 + x_2) ...`.
//!
//! Preset symmetry groups, as stored here:
//!
//! * `ladder` (`Z x K_2` quotient): rung translations together with the
//!   rail swap. One orbit.
//! * `hexagonal` (honeycomb quotient, two sublattices per cell): cell
//!   translations only. Two orbits, one per sublattice.
//! * `triangular`: cell translations. One orbit.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

fn next_id() -> u64 {
    NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed)
}

/// Boundary treatment of a lattice box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Fields are extended by zero outside the box.
    DirichletBox,
    /// Opposite faces are glued.
    PeriodicTorus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    Hexagonal,
    Triangular,
    Ladder,
}

impl FromStr for PresetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hexagonal" => Ok(PresetKind::Hexagonal),
            "triangular" => Ok(PresetKind::Triangular),
            "ladder" => Ok(PresetKind::Ladder),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl fmt::Display for PresetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PresetKind::Hexagonal => "hexagonal",
            PresetKind::Triangular => "triangular",
            PresetKind::Ladder => "ladder",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphMode {
    DirichletBox,
    PeriodicTorus,
    Preset(PresetKind),
    /// Arbitrary simple graph from an edge list; no boundary, no shifts.
    Custom,
}

/// A symmetry of a periodic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shift {
    /// Lattice displacement (torus) or cell displacement (presets).
    Displacement(Vec<i64>),
    /// Index into the graph's symmetry group, see [`Graph::group_order`].
    Element(usize),
}

/// A finite simple graph with bounded degree.
///
/// Immutable after construction. Clones share the identity used to match
/// fields against graphs.
#[derive(Debug, Clone)]
pub struct Graph {
    id: u64,
    adjacency: Vec<Vec<usize>>,
    boundary_degrees: Vec<usize>,
    degree_bound: usize,
    mode: GraphMode,
    sides: Vec<usize>,
    coords: Vec<Vec<i64>>,
    preset_size: usize,
    group: Vec<Vec<usize>>,
    orbit: Vec<usize>,
    orbit_count: usize,
}

impl Graph {
    /// Builds an `N`-dimensional lattice box with the given side lengths.
    pub fn lattice_box(dim: usize, sides: &[usize], boundary: Boundary) -> Result<Graph> {
        if dim == 0 {
            return Err(Error::InvalidGraph("dimension must be at least 1".into()));
        }
        if sides.len() != dim {
            return Err(Error::InvalidGraph(format!(
                "expected {dim} side lengths, got {}",
                sides.len()
            )));
        }
        for (axis, &side) in sides.iter().enumerate() {
            if side == 0 {
                return Err(Error::InvalidAxis {
                    axis,
                    reason: "side length must be at least 1".into(),
                });
            }
            if boundary == Boundary::PeriodicTorus && side < 3 {
                return Err(Error::InvalidAxis {
                    axis,
                    reason: format!("periodic side {side} < 3 would create loops or multi-edges"),
                });
            }
        }

        let n: usize = sides.iter().product();
        let coords: Vec<Vec<i64>> = (0..n).map(|x| unravel(x, sides)).collect();
        let mut adjacency = vec![Vec::with_capacity(2 * dim); n];
        let mut boundary_degrees = vec![0usize; n];
        for x in 0..n {
            let c = &coords[x];
            for axis in 0..dim {
                let side = sides[axis] as i64;
                for step in [-1i64, 1] {
                    let mut y = c.clone();
                    y[axis] += step;
                    if y[axis] < 0 || y[axis] >= side {
                        match boundary {
                            Boundary::DirichletBox => {
                                boundary_degrees[x] += 1;
                                continue;
                            }
                            Boundary::PeriodicTorus => y[axis] = y[axis].rem_euclid(side),
                        }
                    }
                    adjacency[x].push(ravel(&y, sides));
                }
            }
        }

        let mode = match boundary {
            Boundary::DirichletBox => GraphMode::DirichletBox,
            Boundary::PeriodicTorus => GraphMode::PeriodicTorus,
        };
        let (orbit, orbit_count) = match boundary {
            Boundary::PeriodicTorus => (vec![0; n], 1),
            Boundary::DirichletBox => ((0..n).collect(), n),
        };
        Ok(Graph {
            id: next_id(),
            adjacency,
            boundary_degrees,
            degree_bound: 2 * dim,
            mode,
            sides: sides.to_vec(),
            coords,
            preset_size: 0,
            group: Vec::new(),
            orbit,
            orbit_count,
        })
    }

    /// Builds the periodic quotient of a quasi-transitive preset with
    /// `size` repetitions per periodic direction.
    pub fn preset(kind: PresetKind, size: usize) -> Result<Graph> {
        if size < 3 {
            return Err(Error::InvalidGraph(format!(
                "preset size {size} < 3 would create loops or multi-edges"
            )));
        }
        let l = size;
        let wrap = |v: i64| v.rem_euclid(l as i64) as usize;
        let (adjacency, coords, group) = match kind {
            PresetKind::Ladder => {
                let index = |i: usize, r: usize| i * 2 + r;
                let mut adjacency = vec![Vec::new(); 2 * l];
                let mut coords = Vec::with_capacity(2 * l);
                for i in 0..l {
                    for r in 0..2 {
                        adjacency[index(i, r)] = vec![
                            index(wrap(i as i64 - 1), r),
                            index(wrap(i as i64 + 1), r),
                            index(i, 1 - r),
                        ];
                        coords.push(vec![i as i64, r as i64]);
                    }
                }
                let mut group = Vec::with_capacity(2 * l);
                for swap in 0..2 {
                    for t in 0..l {
                        group.push(
                            (0..2 * l)
                                .map(|x| index((x / 2 + t) % l, (x % 2) ^ swap))
                                .collect(),
                        );
                    }
                }
                (adjacency, coords, group)
            }
            PresetKind::Hexagonal => {
                let index = |i: usize, j: usize, sub: usize| (i * l + j) * 2 + sub;
                let mut adjacency = vec![Vec::new(); 2 * l * l];
                let mut coords = Vec::with_capacity(2 * l * l);
                for i in 0..l {
                    for j in 0..l {
                        let (ii, jj) = (i as i64, j as i64);
                        adjacency[index(i, j, 0)] = vec![
                            index(i, j, 1),
                            index(wrap(ii - 1), j, 1),
                            index(i, wrap(jj - 1), 1),
                        ];
                        adjacency[index(i, j, 1)] = vec![
                            index(i, j, 0),
                            index(wrap(ii + 1), j, 0),
                            index(i, wrap(jj + 1), 0),
                        ];
                        coords.push(vec![ii, jj, 0]);
                        coords.push(vec![ii, jj, 1]);
                    }
                }
                let group = (0..l * l)
                    .map(|g| {
                        let (a, b) = (g / l, g % l);
                        (0..2 * l * l)
                            .map(|x| {
                                let cell = x / 2;
                                index((cell / l + a) % l, (cell % l + b) % l, x % 2)
                            })
                            .collect()
                    })
                    .collect();
                (adjacency, coords, group)
            }
            PresetKind::Triangular => {
                let index = |i: usize, j: usize| i * l + j;
                let mut adjacency = vec![Vec::new(); l * l];
                let mut coords = Vec::with_capacity(l * l);
                for i in 0..l {
                    for j in 0..l {
                        let (ii, jj) = (i as i64, j as i64);
                        adjacency[index(i, j)] =
                            [(-1, 0), (1, 0), (0, -1), (0, 1), (1, -1), (-1, 1)]
                                .iter()
                                .map(|&(di, dj)| index(wrap(ii + di), wrap(jj + dj)))
                                .collect();
                        coords.push(vec![ii, jj]);
                    }
                }
                let group = (0..l * l)
                    .map(|g| {
                        let (a, b) = (g / l, g % l);
                        (0..l * l)
                            .map(|x| index((x / l + a) % l, (x % l + b) % l))
                            .collect()
                    })
                    .collect();
                (adjacency, coords, group)
            }
        };

        let n = adjacency.len();
        let (orbit, orbit_count) = orbits_of(n, &group);
        let degree_bound = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let graph = Graph {
            id: next_id(),
            adjacency,
            boundary_degrees: vec![0; n],
            degree_bound,
            mode: GraphMode::Preset(kind),
            sides: Vec::new(),
            coords,
            preset_size: size,
            group,
            orbit,
            orbit_count,
        };
        graph.check_simple()?;
        Ok(graph)
    }

    /// Builds a simple graph from an undirected edge list.
    ///
    /// A single vertex with no edges is allowed; `-Δ` is then identically zero.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} ({a}, {b}) references a vertex >= {vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} is a self-loop at {a}"
                )));
            }
            if adjacency[a].contains(&b) {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} ({a}, {b}) is duplicated"
                )));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let degree_bound = adjacency.iter().map(Vec::len).max().unwrap_or(0).max(1);
        Ok(Graph {
            id: next_id(),
            adjacency,
            boundary_degrees: vec![0; vertex_count],
            degree_bound,
            mode: GraphMode::Custom,
            sides: Vec::new(),
            coords: (0..vertex_count).map(|x| vec![x as i64]).collect(),
            preset_size: 0,
            group: Vec::new(),
            orbit: (0..vertex_count).collect(),
            orbit_count: vertex_count,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    /// Number of lattice neighbours of `x` lying outside a Dirichlet box.
    pub fn boundary_degree(&self, x: usize) -> usize {
        self.boundary_degrees[x]
    }

    pub fn boundary_degrees(&self) -> &[usize] {
        &self.boundary_degrees
    }

    /// Full degree of `x` as seen by the Laplacian (interior plus boundary).
    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len() + self.boundary_degrees[x]
    }

    /// The uniform degree bound `C`.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn mode(&self) -> &GraphMode {
        &self.mode
    }

    /// Lattice dimension, or `None` for presets and edge lists.
    pub fn dimension(&self) -> Option<usize> {
        match self.mode {
            GraphMode::DirichletBox | GraphMode::PeriodicTorus => Some(self.sides.len()),
            _ => None,
        }
    }

    /// Side lengths of a lattice box; empty otherwise.
    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn preset_size(&self) -> Option<usize> {
        matches!(self.mode, GraphMode::Preset(_)).then_some(self.preset_size)
    }

    /// Integer coordinates of `x`: the lattice multi-index, `(cell.., sublattice)`
    /// for presets, or the vertex index for edge lists.
    pub fn coordinates(&self, x: usize) -> &[i64] {
        &self.coords[x]
    }

    /// Column names matching [`Graph::coordinates`].
    pub fn coordinate_names(&self) -> Vec<String> {
        match &self.mode {
            GraphMode::DirichletBox | GraphMode::PeriodicTorus => {
                (0..self.sides.len()).map(|a| format!("x{a}")).collect()
            }
            GraphMode::Preset(PresetKind::Ladder) => vec!["i".into(), "rail".into()],
            GraphMode::Preset(PresetKind::Hexagonal) => {
                vec!["i".into(), "j".into(), "sublattice".into()]
            }
            GraphMode::Preset(PresetKind::Triangular) => vec!["i".into(), "j".into()],
            GraphMode::Custom => vec!["id".into()],
        }
    }

    /// Index of a lattice multi-index.
    pub fn vertex_at(&self, coords: &[i64]) -> Option<usize> {
        if self.sides.is_empty() || coords.len() != self.sides.len() {
            return None;
        }
        let inside = coords
            .iter()
            .zip(&self.sides)
            .all(|(&c, &s)| c >= 0 && (c as usize) < s);
        inside.then(|| ravel(coords, &self.sides))
    }

    /// The vertex at `floor(side / 2)` on every axis for lattices, vertex 0 otherwise.
    pub fn center_vertex(&self) -> usize {
        if self.sides.is_empty() {
            return 0;
        }
        let mid: Vec<i64> = self.sides.iter().map(|&s| (s / 2) as i64).collect();
        ravel(&mid, &self.sides)
    }

    /// Orbit label of `x` under the stored symmetry group.
    pub fn orbit_of(&self, x: usize) -> usize {
        self.orbit[x]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    /// Number of group elements addressable with [`Shift::Element`].
    pub fn group_order(&self) -> usize {
        match self.mode {
            GraphMode::PeriodicTorus => self.vertex_count(),
            GraphMode::Preset(_) => self.group.len(),
            _ => 1,
        }
    }

    /// Permutation `x -> shift(x)` realised by a symmetry.
    pub fn shift_map(&self, shift: &Shift) -> Result<Vec<usize>> {
        match (&self.mode, shift) {
            (GraphMode::PeriodicTorus, Shift::Displacement(d)) => self.torus_map(d),
            (GraphMode::PeriodicTorus, Shift::Element(k)) => {
                if *k >= self.vertex_count() {
                    return Err(Error::Unsupported(format!(
                        "group element {k} out of range (order {})",
                        self.vertex_count()
                    )));
                }
                let d = self.coords[*k].clone();
                self.torus_map(&d)
            }
            (GraphMode::Preset(_), Shift::Element(k)) => {
                self.group.get(*k).cloned().ok_or_else(|| {
                    Error::Unsupported(format!(
                        "group element {k} out of range (order {})",
                        self.group.len()
                    ))
                })
            }
            (GraphMode::Preset(kind), Shift::Displacement(d)) => {
                let cell_dims = match kind {
                    PresetKind::Ladder => 1,
                    _ => 2,
                };
                if d.len() != cell_dims {
                    return Err(Error::Unsupported(format!(
                        "{kind} displacements have {cell_dims} components, got {}",
                        d.len()
                    )));
                }
                let l = self.preset_size as i64;
                let k = match kind {
                    PresetKind::Ladder => d[0].rem_euclid(l),
                    _ => d[0].rem_euclid(l) * l + d[1].rem_euclid(l),
                };
                Ok(self.group[k as usize].clone())
            }
            (mode, _) => Err(Error::Unsupported(format!(
                "graph mode {mode:?} has no translation symmetry"
            ))),
        }
    }

    /// Pushes `u` forward along a symmetry: `(translate u)(shift(x)) = u(x)`,
    /// i.e. `(translate u)(x) = u(shift^-1(x))`.
    pub fn translate(&self, u: &Field, shift: &Shift) -> Result<Field> {
        if u.graph_id() != self.id {
            return Err(Error::Mismatch("translate".into()));
        }
        let map = self.shift_map(shift)?;
        let mut out = vec![0.0; u.len()];
        for (x, &y) in map.iter().enumerate() {
            out[y] = u[x];
        }
        Ok(u.with_values(out))
    }

    fn torus_map(&self, d: &[i64]) -> Result<Vec<usize>> {
        if d.len() != self.sides.len() {
            return Err(Error::Unsupported(format!(
                "displacement has {} components, lattice dimension is {}",
                d.len(),
                self.sides.len()
            )));
        }
        Ok((0..self.vertex_count())
            .map(|x| {
                let y: Vec<i64> = self.coords[x]
                    .iter()
                    .zip(d)
                    .zip(&self.sides)
                    .map(|((&c, &dc), &s)| (c + dc).rem_euclid(s as i64))
                    .collect();
                ravel(&y, &self.sides)
            })
            .collect())
    }

    /// `true` when `y ∈ adj(x) ⟺ x ∈ adj(y)` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(x, nb)| nb.iter().all(|&y| self.adjacency[y].contains(&x)))
    }

    /// `true` when there are no loops and no repeated neighbours.
    pub fn is_simple(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(x, nb)| {
            let mut sorted = nb.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == nb.len() && !nb.contains(&x)
        })
    }

    fn check_simple(&self) -> Result<()> {
        if !self.is_simple() || !self.is_symmetric() {
            return Err(Error::InvalidGraph(
                "construction produced a non-simple graph".into(),
            ));
        }
        Ok(())
    }

    /// Writes `vertex,<coords..>,degree,boundary_degree,orbit` rows.
    pub fn write_vertex_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "vertex")?;
        for name in self.coordinate_names() {
            write!(out, ",{name}")?;
        }
        writeln!(out, ",degree,boundary_degree,orbit")?;
        for x in 0..self.vertex_count() {
            write!(out, "{x}")?;
            for c in &self.coords[x] {
                write!(out, ",{c}")?;
            }
            writeln!(
                out,
                ",{},{},{}",
                self.adjacency[x].len(),
                self.boundary_degrees[x],
                self.orbit[x]
            )?;
        }
        Ok(())
    }

    /// Writes each undirected edge once as `source,target` with `source < target`.
    pub fn write_edge_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "source,target")?;
        for (x, nb) in self.adjacency.iter().enumerate() {
            let mut higher: Vec<usize> = nb.iter().copied().filter(|&y| y > x).collect();
            higher.sort_unstable();
            for y in higher {
                writeln!(out, "{x},{y}")?;
            }
        }
        Ok(())
    }
}

fn unravel(mut x: usize, sides: &[usize]) -> Vec<i64> {
    let mut c = vec![0i64; sides.len()];
    for axis in (0..sides.len()).rev() {
        c[axis] = (x % sides[axis]) as i64;
        x /= sides[axis];
    }
    c
}

fn ravel(c: &[i64], sides: &[usize]) -> usize {
    c.iter()
        .zip(sides)
        .fold(0usize, |acc, (&ci, &s)| acc * s + ci as usize)
}

/// Union-find over the generators' action.
fn orbits_of(n: usize, group: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for perm in group {
        for (x, &y) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let orbit = (0..n)
        .map(|x| {
            let root = find(&mut parent, x);
            if label[root] == usize::MAX {
                label[root] = count;
                count += 1;
            }
            label[root]
        })
        .collect();
    (orbit, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    }

    #[test]
    fn path_of_three() {
        let g = Graph::lattice_box(1, &[3], Boundary::DirichletBox).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(sorted(g.neighbors(0)), vec![1]);
        assert_eq!(sorted(g.neighbors(1)), vec![0, 2]);
        assert_eq!(g.boundary_degrees(), &[1, 0, 1]);
        assert!((0..3).all(|x| g.degree(x) == 2));
    }

    #[test]
    fn four_cycle() {
        let g = Graph::lattice_box(1, &[4], Boundary::PeriodicTorus).unwrap();
        assert_eq!(g.boundary_degrees(), &[0, 0, 0, 0]);
        assert_eq!(sorted(g.neighbors(0)), vec![1, 3]);
        assert!((0..4).all(|x| g.neighbors(x).len() == 2));
    }

    #[test]
    fn three_by_three_box_corners() {
        let g = Graph::lattice_box(2, &[3, 3], Boundary::DirichletBox).unwrap();
        assert_eq!(g.vertex_count(), 9);
        for corner in [0, 2, 6, 8] {
            assert_eq!(g.neighbors(corner).len(), 2);
            assert_eq!(g.boundary_degree(corner), 2);
        }
        // edge midpoints and centre
        for mid in [1, 3, 5, 7] {
            assert_eq!(g.neighbors(mid).len(), 3);
            assert_eq!(g.boundary_degree(mid), 1);
        }
        assert_eq!(g.neighbors(4).len(), 4);
        assert_eq!(sorted(g.neighbors(0)), vec![1, 3]);
    }

    #[test]
    fn row_major_indexing() {
        let g = Graph::lattice_box(2, &[3, 4], Boundary::DirichletBox).unwrap();
        assert_eq!(g.coordinates(5), &[1, 1]);
        assert_eq!(g.vertex_at(&[2, 3]), Some(11));
        assert_eq!(g.vertex_at(&[3, 0]), None);
        assert_eq!(g.center_vertex(), 4 + 2);
    }

    #[test]
    fn invalid_sides_name_the_axis() {
        let err = Graph::lattice_box(2, &[4, 2], Boundary::PeriodicTorus).unwrap_err();
        assert!(matches!(err, Error::InvalidAxis { axis: 1, .. }));
        let err = Graph::lattice_box(2, &[0, 3], Boundary::DirichletBox).unwrap_err();
        assert!(matches!(err, Error::InvalidAxis { axis: 0, .. }));
        assert!(Graph::lattice_box(0, &[], Boundary::DirichletBox).is_err());
    }

    #[test]
    fn presets_have_expected_shape() {
        let ladder = Graph::preset(PresetKind::Ladder, 4).unwrap();
        assert_eq!(ladder.vertex_count(), 8);
        assert!((0..8).all(|x| ladder.degree(x) == 3));
        assert_eq!(ladder.orbit_count(), 1);

        let hex = Graph::preset(PresetKind::Hexagonal, 3).unwrap();
        assert_eq!(hex.vertex_count(), 18);
        assert!((0..18).all(|x| hex.degree(x) == 3));
        assert_eq!(hex.orbit_count(), 2);

        let tri = Graph::preset(PresetKind::Triangular, 3).unwrap();
        assert!((0..9).all(|x| tri.degree(x) == 6));
        assert_eq!(tri.orbit_count(), 1);
    }

    #[test]
    fn unknown_preset_and_small_size() {
        assert_eq!(
            "kagome".parse::<PresetKind>().unwrap_err(),
            Error::UnknownPreset("kagome".into())
        );
        assert!(Graph::preset(PresetKind::Ladder, 2).is_err());
    }

    #[test]
    fn edge_list_validation() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        let single = Graph::from_edges(1, &[]).unwrap();
        assert_eq!(single.degree(0), 0);
    }

    #[test]
    fn shift_on_box_is_unsupported() {
        let g = Graph::lattice_box(1, &[5], Boundary::DirichletBox).unwrap();
        assert!(matches!(
            g.shift_map(&Shift::Displacement(vec![1])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn edge_csv_lists_each_edge_once() {
        let g = Graph::lattice_box(1, &[4], Boundary::PeriodicTorus).unwrap();
        let mut buf = Vec::new();
        g.write_edge_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "source,target\n0,1\n0,3\n1,2\n2,3\n");
    }
}
