//! Geometry of `Z^d` restricted to the box `[-n, n]^d`.
//!
//! Vertices carry their coordinates; inside a box they are also addressed by
//! a row-major linear index (first coordinate most significant). The `2d`
//! unit directions are ordered `+e_1, -e_1, +e_2, -e_2, ...`, and that order
//! is part of the public contract because several direction-selection rules
//! break ties by the smallest index.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub Vec<i32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl Vertex {
    pub fn new(coords: impl Into<Vec<i32>>) -> Self {
        Vertex(coords.into())
    }

    pub fn origin(d: usize) -> Self {
        Vertex(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn parity(&self) -> Parity {
        parity(self)
    }

    /// `self + f_j`.
    pub fn step(&self, dir: Direction) -> Vertex {
        let mut c = self.0.clone();
        c[dir.axis()] += dir.sign();
        Vertex(c)
    }

    /// `self - f_j`.
    pub fn step_back(&self, dir: Direction) -> Vertex {
        self.step(dir.opposite())
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs() as u64).sum()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// One of the `2d` unit steps, stored as a 0-based index.
///
/// Index `2i` is `+e_{i+1}` and index `2i + 1` is `-e_{i+1}`; the 1-based
/// label used in reports is `index + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(pub usize);

impl Direction {
    pub fn all(d: usize) -> impl Iterator<Item = Direction> {
        (0..2 * d).map(Direction)
    }

    /// 1-based label `j` of `f_j`.
    pub fn label(self) -> usize {
        self.0 + 1
    }

    pub fn from_label(j: usize, d: usize) -> Result<Direction> {
        if j == 0 || j > 2 * d {
            return Err(Error::InvalidParameter(format!(
                "direction label {j} outside [1, {}]",
                2 * d
            )));
        }
        Ok(Direction(j - 1))
    }

    pub fn axis(self) -> usize {
        self.0 / 2
    }

    pub fn sign(self) -> i32 {
        if self.0.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn opposite(self) -> Direction {
        Direction(self.0 ^ 1)
    }

    pub fn is_positive(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.is_positive() { '+' } else { '-' };
        write!(f, "{s}e{}", self.axis() + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborMode {
    /// Only neighbors that lie in the box.
    InBox,
    /// All `2d` neighbors in `Z^d`.
    Infinite,
}

/// The box `[-n, n]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBox {
    pub d: usize,
    pub n: usize,
}

impl LatticeBox {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "box needs d >= 1 and n >= 1, got d={d}, n={n}"
            )));
        }
        let side = 2 * n + 1;
        if (side as f64).powi(d as i32) > (u32::MAX as f64) {
            return Err(Error::InvalidParameter(format!(
                "box d={d}, n={n} is too large to index"
            )));
        }
        Ok(LatticeBox { d, n })
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// `(2n+1)^d`.
    pub fn len(&self) -> usize {
        self.side().pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn stride(&self, axis: usize) -> usize {
        self.side().pow((self.d - 1 - axis) as u32)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        let n = self.n as i32;
        v.dim() == self.d && v.0.iter().all(|&c| -n <= c && c <= n)
    }

    pub fn check_dim(&self, v: &Vertex) -> Result<()> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// Row-major index of an in-box vertex.
    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        let side = self.side();
        let n = self.n as i32;
        Some(
            v.0.iter()
                .fold(0usize, |acc, &c| acc * side + (c + n) as usize),
        )
    }

    pub fn vertex(&self, mut idx: usize) -> Vertex {
        let side = self.side();
        let mut coords = vec![0i32; self.d];
        for axis in (0..self.d).rev() {
            coords[axis] = (idx % side) as i32 - self.n as i32;
            idx /= side;
        }
        Vertex(coords)
    }

    pub fn coord(&self, idx: usize, axis: usize) -> i32 {
        ((idx / self.stride(axis)) % self.side()) as i32 - self.n as i32
    }

    pub fn parity_of(&self, idx: usize) -> Parity {
        let s: i32 = (0..self.d).map(|a| self.coord(idx, a)).sum();
        if s.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Index of `idx + f_j`, if it stays in the box.
    #[inline]
    pub fn step(&self, idx: usize, dir: Direction) -> Option<usize> {
        let axis = dir.axis();
        let c = self.coord(idx, axis);
        let stride = self.stride(axis);
        if dir.is_positive() {
            (c < self.n as i32).then(|| idx + stride)
        } else {
            (c > -(self.n as i32)).then(|| idx - stride)
        }
    }

    pub fn neighbor_indices(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        Direction::all(self.d).filter_map(move |j| self.step(idx, j))
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        (0..self.d).any(|a| self.coord(idx, a).unsigned_abs() as usize == self.n)
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn neighbors(&self, v: &Vertex, mode: NeighborMode) -> Result<Vec<Vertex>> {
        neighbors(v, self, mode)
    }
}

impl fmt::Display for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[-{n},{n}]^{d}", n = self.n, d = self.d)
    }
}

/// Neighbors of `v` in `f_j` order.
pub fn neighbors(v: &Vertex, lattice: &LatticeBox, mode: NeighborMode) -> Result<Vec<Vertex>> {
    lattice.check_dim(v)?;
    if mode == NeighborMode::InBox && !lattice.contains(v) {
        return Err(Error::OutsideBox(v.clone()));
    }
    Ok(Direction::all(v.dim())
        .map(|j| v.step(j))
        .filter(|w| mode == NeighborMode::Infinite || lattice.contains(w))
        .collect())
}

/// Infinite-lattice neighbors of `v` in `f_j` order.
pub fn lattice_neighbors(v: &Vertex) -> impl Iterator<Item = Vertex> + '_ {
    Direction::all(v.dim()).map(move |j| v.step(j))
}

pub fn parity(v: &Vertex) -> Parity {
    let s: i64 = v.0.iter().map(|&c| c as i64).sum();
    if s.rem_euclid(2) == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// `B_n = [-n,n]^d \ [-(n-1),n-1]^d`, in index order.
pub fn boundary_set(lattice: &LatticeBox) -> Vec<Vertex> {
    lattice
        .indices()
        .filter(|&i| lattice.is_boundary(i))
        .map(|i| lattice.vertex(i))
        .collect()
}

/// L1 distance; equal to the graph distance in any box containing both ends.
pub fn graph_distance(v: &Vertex, w: &Vertex) -> Result<u64> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    Ok(v.0
        .iter()
        .zip(&w.0)
        .map(|(a, b)| (*a as i64 - *b as i64).unsigned_abs())
        .sum())
}

/// Whether `set` is connected in the `k`-th power of the lattice graph.
pub fn connected_in_power(set: &[Vertex], k: u64) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; set.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for j in 0..set.len() {
            if !seen[j] && graph_distance(&set[i], &set[j]).is_ok_and(|dist| dist <= k) {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    reached == set.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i32]) -> Vertex {
        Vertex::new(c.to_vec())
    }

    #[test]
    fn neighbor_order_is_canonical() {
        let b = LatticeBox::new(2, 2).unwrap();
        let got = neighbors(&v(&[0, 0]), &b, NeighborMode::Infinite).unwrap();
        assert_eq!(got, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])]);
    }

    #[test]
    fn corner_drops_out_of_box_neighbors() {
        let b = LatticeBox::new(2, 1).unwrap();
        let got = neighbors(&v(&[1, 1]), &b, NeighborMode::InBox).unwrap();
        assert_eq!(got, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn three_dimensional_origin_has_six_neighbors() {
        let b = LatticeBox::new(3, 1).unwrap();
        let got = neighbors(&Vertex::origin(3), &b, NeighborMode::Infinite).unwrap();
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn neighbors_reject_dimension_mismatch() {
        let b = LatticeBox::new(2, 1).unwrap();
        assert!(matches!(
            neighbors(&v(&[0, 0, 0]), &b, NeighborMode::Infinite),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&v(&[0, 0])), Parity::Even);
        assert_eq!(parity(&v(&[1, 0])), Parity::Odd);
        assert_eq!(parity(&v(&[2, -1, 1])), Parity::Even);
        assert_eq!(parity(&v(&[-1, 0])), Parity::Odd);
    }

    #[test]
    fn boundary_sizes() {
        assert_eq!(boundary_set(&LatticeBox::new(2, 2).unwrap()).len(), 16);
        assert_eq!(boundary_set(&LatticeBox::new(2, 1).unwrap()).len(), 8);
        assert_eq!(boundary_set(&LatticeBox::new(3, 1).unwrap()).len(), 26);
        for d in 1..=4usize {
            for n in 1..=4usize {
                let b = LatticeBox::new(d, n).unwrap();
                let expected = (2 * n + 1).pow(d as u32) - (2 * n - 1).pow(d as u32);
                assert_eq!(boundary_set(&b).len(), expected, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(graph_distance(&v(&[0, 0]), &v(&[1, 1])).unwrap(), 2);
        assert_eq!(graph_distance(&v(&[3, 3]), &v(&[3, 3])).unwrap(), 0);
        assert_eq!(graph_distance(&v(&[-1, 2]), &v(&[2, 2])).unwrap(), 3);
    }

    #[test]
    fn distance_matches_bfs_in_five_by_five_box() {
        let b = LatticeBox::new(2, 2).unwrap();
        for s in b.indices() {
            let mut dist = vec![u64::MAX; b.len()];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(i) = q.pop_front() {
                for w in b.neighbor_indices(i) {
                    if dist[w] == u64::MAX {
                        dist[w] = dist[i] + 1;
                        q.push_back(w);
                    }
                }
            }
            for t in b.indices() {
                let l1 = graph_distance(&b.vertex(s), &b.vertex(t)).unwrap();
                assert_eq!(l1, dist[t]);
            }
        }
    }

    #[test]
    fn power_connectivity_examples() {
        assert!(connected_in_power(&[v(&[0, 0]), v(&[1, 1])], 2));
        assert!(!connected_in_power(&[v(&[0, 0]), v(&[3, 0])], 2));
        assert!(connected_in_power(&[v(&[0, 0])], 1));
        assert!(connected_in_power(&[], 1));
    }

    #[test]
    fn index_roundtrip_and_step_agree_with_coordinates() {
        let b = LatticeBox::new(3, 2).unwrap();
        for i in b.indices() {
            let p = b.vertex(i);
            assert_eq!(b.index_of(&p), Some(i));
            assert_eq!(b.parity_of(i), parity(&p));
            for j in Direction::all(3) {
                let w = p.step(j);
                assert_eq!(b.step(i, j), b.index_of(&w));
            }
        }
    }

    #[test]
    fn direction_labels() {
        let f1 = Direction::from_label(1, 2).unwrap();
        assert_eq!((f1.axis(), f1.sign()), (0, 1));
        let f4 = Direction::from_label(4, 2).unwrap();
        assert_eq!((f4.axis(), f4.sign()), (1, -1));
        assert_eq!(f4.opposite().label(), 3);
        assert!(Direction::from_label(5, 2).is_err());
    }

    #[test]
    fn serialization_shapes() {
        assert_eq!(serde_json::to_string(&v(&[0, 0])).unwrap(), "[0,0]");
        let b = LatticeBox::new(2, 2).unwrap();
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"d":2,"n":2}"#);
    }
}
