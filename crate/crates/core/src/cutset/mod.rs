//! Odd minimal edge cutsets separating an even anchor `x` from the box
//! boundary, the `Break` map that extracts one from a configuration, and
//! the statistics the transformations and counting arguments are built on.
//!
//! Cutset statistics follow the `2d`-regular convention: vertices outside
//! the box belong to the outer side `A_0`, and `P_Gamma` counts only cutset
//! edges, which always lie inside the box.

mod connected;
mod enumerate;
mod modify;

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::gibbs::{self, Configuration};
use crate::lattice::{Direction, LatticeBox, Parity, Vertex};

pub use connected::{count_connected_sets, for_each_connected_set, SimpleGraph};
pub use enumerate::{enumerate_omcut, OMCUT_MAX_N};
pub use modify::{interior_modifications, ModificationScope, DEFAULT_MODIFICATION_GUARD};

/// An unordered lattice edge `{v, v + f_j}` in canonical form: `v` is the
/// lexicographically smaller endpoint, so `f_j` is always a positive unit
/// vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeEdge {
    pub v: Vertex,
    pub dir: Direction,
}

impl LatticeEdge {
    pub fn new(a: &Vertex, b: &Vertex) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Direction::all(a.dim())
            .filter(|j| j.is_positive())
            .find(|&j| lo.step(j) == *hi)
            .map(|dir| LatticeEdge { v: lo.clone(), dir })
            .ok_or_else(|| Error::InvalidParameter(format!("{a} and {b} are not adjacent")))
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.v.clone(), self.v.step(self.dir))
    }
}

impl Serialize for LatticeEdge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (a, b) = self.endpoints();
        [a, b].serialize(s)
    }
}

/// An edge set `Gamma` together with the partition it induces.
///
/// `inner` is the component of the anchor in `G \ Gamma` and `outer` the
/// component of the boundary. For a minimal cutset they partition the box.
#[derive(Clone, Debug)]
pub struct EdgeCutset {
    lattice: LatticeBox,
    anchor: usize,
    edges: BTreeSet<(usize, usize)>,
    inner: Vec<bool>,
    outer: Vec<bool>,
    p: Vec<u32>,
    e0: Vec<usize>,
    e1: Vec<usize>,
}

impl PartialEq for EdgeCutset {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.anchor == other.anchor && self.edges == other.edges
    }
}

impl Eq for EdgeCutset {}

fn component(lattice: &LatticeBox, seeds: &[usize], blocked: impl Fn(usize, usize) -> bool, skip: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; lattice.len()];
    let mut queue = VecDeque::new();
    for &s in seeds {
        if !seen[s] && !skip(s) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(i) = queue.pop_front() {
        for w in lattice.neighbor_indices(i) {
            if !seen[w] && !skip(w) && !blocked(i, w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

fn boundary_indices(lattice: &LatticeBox) -> Vec<usize> {
    lattice.indices().filter(|&i| lattice.is_boundary(i)).collect()
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl EdgeCutset {
    /// Builds the cutset from an arbitrary set of box edges.
    pub fn from_edges(lattice: LatticeBox, anchor: &Vertex, edges: &[LatticeEdge]) -> Result<Self> {
        let x = lattice.index_of(anchor).ok_or_else(|| Error::OutsideBox(anchor.clone()))?;
        let mut keys = BTreeSet::new();
        for e in edges {
            let (a, b) = e.endpoints();
            let ia = lattice.index_of(&a).ok_or(Error::OutsideBox(a))?;
            let ib = lattice.index_of(&b).ok_or(Error::OutsideBox(b))?;
            keys.insert(edge_key(ia, ib));
        }
        Ok(Self::from_edge_keys(lattice, x, keys))
    }

    pub(crate) fn from_edge_keys(lattice: LatticeBox, x: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let blocked = |a: usize, b: usize| edges.contains(&edge_key(a, b));
        let inner = component(&lattice, &[x], blocked, |_| false);
        let outer = component(&lattice, &boundary_indices(&lattice), blocked, |_| false);
        Self::finish(lattice, x, edges, inner, outer)
    }

    /// The cutset `E(A_1, V \ A_1)` of an inner region given as a box mask.
    pub fn from_inner_region(lattice: LatticeBox, x: usize, inner: Vec<bool>) -> Self {
        let mut edges = BTreeSet::new();
        for i in lattice.indices().filter(|&i| inner[i]) {
            for w in lattice.neighbor_indices(i) {
                if !inner[w] {
                    edges.insert(edge_key(i, w));
                }
            }
        }
        let outer = inner.iter().map(|b| !b).collect();
        Self::finish(lattice, x, edges, inner, outer)
    }

    fn finish(lattice: LatticeBox, anchor: usize, edges: BTreeSet<(usize, usize)>, inner: Vec<bool>, outer: Vec<bool>) -> Self {
        let mut p = vec![0u32; lattice.len()];
        for &(a, b) in &edges {
            p[a] += 1;
            p[b] += 1;
        }
        let e0 = lattice.indices().filter(|&i| !inner[i] && p[i] > 0).collect();
        let e1 = lattice.indices().filter(|&i| inner[i] && p[i] > 0).collect();
        EdgeCutset {
            lattice,
            anchor,
            edges,
            inner,
            outer,
            p,
            e0,
            e1,
        }
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn anchor(&self) -> Vertex {
        self.lattice.vertex(self.anchor)
    }

    pub fn anchor_index(&self) -> usize {
        self.anchor
    }

    /// `|Gamma|`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_keys(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edges(&self) -> Vec<LatticeEdge> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                LatticeEdge::new(&self.lattice.vertex(a), &self.lattice.vertex(b)).expect("box edges are adjacent")
            })
            .collect()
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&edge_key(a, b))
    }

    /// Whether box vertex `idx` is in `A_1`.
    pub fn in_inner(&self, idx: usize) -> bool {
        self.inner[idx]
    }

    pub fn inner_mask(&self) -> &[bool] {
        &self.inner
    }

    /// Whether box vertex `idx` is in the boundary component of `G \ Gamma`.
    pub fn in_outer(&self, idx: usize) -> bool {
        self.outer[idx]
    }

    /// Membership in `A_1` for an arbitrary lattice point.
    pub fn vertex_in_inner(&self, v: &Vertex) -> bool {
        self.lattice.index_of(v).is_some_and(|i| self.inner[i])
    }

    /// Membership in `A_0 = Z^d \ A_1`, so points outside the box count as
    /// outer.
    pub fn vertex_in_outer(&self, v: &Vertex) -> bool {
        !self.vertex_in_inner(v)
    }

    /// `A_delta` membership for `delta` in `{0, 1}`.
    pub fn vertex_in_side(&self, v: &Vertex, delta: u8) -> bool {
        if delta == 1 {
            self.vertex_in_inner(v)
        } else {
            self.vertex_in_outer(v)
        }
    }

    pub fn inner_indices(&self) -> Vec<usize> {
        self.lattice.indices().filter(|&i| self.inner[i]).collect()
    }

    /// `P_Gamma(v)` for a box index.
    pub fn p(&self, idx: usize) -> u32 {
        self.p[idx]
    }

    /// `P_Gamma(v)`; zero outside the box.
    pub fn p_vertex(&self, v: &Vertex) -> u32 {
        self.lattice.index_of(v).map_or(0, |i| self.p[i])
    }

    pub fn e0(&self) -> &[usize] {
        &self.e0
    }

    pub fn e1(&self) -> &[usize] {
        &self.e1
    }

    /// `E_delta` for `delta` in `{0, 1}`.
    pub fn boundary_side(&self, delta: u8) -> &[usize] {
        if delta == 1 {
            &self.e1
        } else {
            &self.e0
        }
    }

    pub fn e1_vertices(&self) -> Vec<Vertex> {
        self.e1.iter().map(|&i| self.lattice.vertex(i)).collect()
    }

    pub fn e0_vertices(&self) -> Vec<Vertex> {
        self.e0.iter().map(|&i| self.lattice.vertex(i)).collect()
    }

    pub fn two_d(&self) -> u32 {
        2 * self.lattice.d as u32
    }

    /// `R_Gamma(v) = min(P, 2d - P)`.
    pub fn regularity_at(&self, idx: usize) -> u32 {
        let p = self.p[idx];
        p.min(self.two_d().saturating_sub(p))
    }

    /// `R_Gamma(E)`.
    pub fn regularity(&self, set: &[usize]) -> u64 {
        set.iter().map(|&i| self.regularity_at(i) as u64).sum()
    }

    /// `v` is in `E_{1,e}`: in `E_1` with `P_Gamma(v) >= 2d - sqrt(d)`.
    pub fn is_exposed(&self, idx: usize) -> bool {
        if !self.inner[idx] || self.p[idx] == 0 {
            return false;
        }
        let gap = self.two_d() as i64 - self.p[idx] as i64;
        gap <= 0 || gap * gap <= self.lattice.d as i64
    }

    pub fn exposed(&self) -> Vec<usize> {
        self.e1.iter().copied().filter(|&i| self.is_exposed(i)).collect()
    }

    /// `E_{1,j}`: inner-boundary vertices whose `f_j` edge is in `Gamma`.
    pub fn e1_dir(&self, j: Direction) -> Vec<usize> {
        self.e1
            .iter()
            .copied()
            .filter(|&v| self.lattice.step(v, j).is_some_and(|w| !self.inner[w] && self.contains_edge(v, w)))
            .collect()
    }

    /// `E_{1,j,x}`: exposed vertices whose `f_j` neighbour is in `A_1`.
    pub fn e1_dir_open(&self, j: Direction) -> Vec<usize> {
        self.e1
            .iter()
            .copied()
            .filter(|&v| self.is_exposed(v) && self.lattice.step(v, j).is_some_and(|w| self.inner[w]))
            .collect()
    }

    /// `|Gamma_r|`: edges at non-exposed inner-boundary vertices.
    pub fn regular_edge_count(&self) -> usize {
        self.e1
            .iter()
            .filter(|&&v| !self.is_exposed(v))
            .map(|&v| self.p[v] as usize)
            .sum()
    }

    pub fn stats(&self) -> CutsetStats {
        stats(self)
    }

    /// Smallest `j` with `2d |Gamma^j| >= |Gamma|`.
    pub fn t1_direction(&self) -> Direction {
        let two_d = self.two_d() as usize;
        Direction::all(self.lattice.d)
            .find(|&j| self.e1_dir(j).len() * two_d >= self.len())
            .unwrap_or(Direction(0))
    }

    /// Smallest `j` maximising `|Gamma_r^j| - 8 |E_{1,j,x}|`.
    pub fn t2_direction(&self) -> Direction {
        let mut best = (i64::MIN, Direction(0));
        for j in Direction::all(self.lattice.d) {
            let r = self.e1_dir(j).into_iter().filter(|&v| !self.is_exposed(v)).count() as i64;
            let score = r - 8 * self.e1_dir_open(j).len() as i64;
            if score > best.0 {
                best = (score, j);
            }
        }
        best.1
    }

    /// `X_j(omega) = {v in E_{1,e} : omega(v + f_j) = 1}`.
    pub fn erase_set(&self, omega: &Configuration, j: Direction) -> Vec<usize> {
        self.exposed()
            .into_iter()
            .filter(|&v| self.lattice.step(v, j).is_some_and(|w| omega.get(w)))
            .collect()
    }

    /// `E_1 \ E_{1,e} ⊆ set ⊆ A_1`.
    pub fn is_interior_approximation(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.lattice.len()];
        for &v in set {
            if v >= member.len() || !self.inner[v] {
                return false;
            }
            member[v] = true;
        }
        self.e1.iter().all(|&v| self.is_exposed(v) || member[v])
    }

    /// `N_Gamma(v)`: bit `j` set iff `v + f_j` is in `A_1`.
    pub fn direction_bits(&self, v: &Vertex) -> Vec<bool> {
        Direction::all(self.lattice.d)
            .map(|j| self.vertex_in_inner(&v.step(j)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionStats {
    /// 1-based `j`.
    pub j: usize,
    /// `|Gamma^j|`.
    pub edges: usize,
    /// `|Gamma_r^j|`.
    pub regular_edges: usize,
    /// `|E_{1,j}|`.
    pub inner_boundary: usize,
    /// `|E_{1,j,x}|`.
    pub exposed_open: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutsetStats {
    /// `L = |Gamma|`.
    pub size: usize,
    /// `M = |E_1|`.
    pub inner_boundary: usize,
    /// `R = R_Gamma(E_1)`.
    pub regularity: u64,
    /// `|E_{1,e}|`.
    pub exposed: usize,
    /// `|Gamma_r|`.
    pub regular_edges: usize,
    pub per_direction: Vec<DirectionStats>,
}

pub fn stats(gamma: &EdgeCutset) -> CutsetStats {
    let per_direction = Direction::all(gamma.lattice.d)
        .map(|j| {
            let e1j = gamma.e1_dir(j);
            DirectionStats {
                j: j.label(),
                edges: e1j.len(),
                regular_edges: e1j.iter().filter(|&&v| !gamma.is_exposed(v)).count(),
                inner_boundary: e1j.len(),
                exposed_open: gamma.e1_dir_open(j).len(),
            }
        })
        .collect();
    CutsetStats {
        size: gamma.len(),
        inner_boundary: gamma.e1.len(),
        regularity: gamma.regularity(&gamma.e1),
        exposed: gamma.exposed().len(),
        regular_edges: gamma.regular_edge_count(),
        per_direction,
    }
}

/// One NDJSON line: edges and statistics.
#[derive(Serialize)]
pub struct CutsetRecord {
    pub edges: Vec<LatticeEdge>,
    pub stats: CutsetStats,
}

impl From<&EdgeCutset> for CutsetRecord {
    fn from(gamma: &EdgeCutset) -> Self {
        CutsetRecord {
            edges: gamma.edges(),
            stats: gamma.stats(),
        }
    }
}

fn check_break_preconditions(omega: &Configuration, x: &Vertex) -> Result<usize> {
    let lattice = *omega.lattice();
    lattice.check_dim(x)?;
    if lattice.n < 2 {
        return Err(Error::BoxTooSmall);
    }
    let xi = lattice.index_of(x).ok_or_else(|| Error::OutsideBox(x.clone()))?;
    if lattice.parity_of(xi) != Parity::Even {
        return Err(Error::AnchorOdd(x.clone()));
    }
    if !gibbs::is_feasible(omega) {
        return Err(Error::Infeasible);
    }
    if !gibbs::satisfies_bc(omega, gibbs::BoundaryCondition::OddOccupied) {
        return Err(Error::BoundaryUnsatisfied);
    }
    if !omega.get(xi) {
        return Err(Error::AnchorVacant(x.clone()));
    }
    Ok(xi)
}

/// `A_0'`: the component of the boundary in `G` minus the vacant odd
/// vertices.
pub fn outer_vacancy_component(omega: &Configuration) -> Vec<bool> {
    let lattice = *omega.lattice();
    let removed = |i: usize| lattice.parity_of(i) == Parity::Odd && !omega.get(i);
    component(&lattice, &boundary_indices(&lattice), |_, _| false, removed)
}

/// `Break(omega)` for the anchor `x`.
pub fn break_of(omega: &Configuration, x: &Vertex) -> Result<EdgeCutset> {
    let xi = check_break_preconditions(omega, x)?;
    Ok(break_from_vacancies(omega, xi).expect("an occupied even anchor is never in A_0'"))
}

/// The `Break` construction without the occupancy requirement on `x`.
///
/// `Break` depends on `omega` only through `A_0'`, so it is well defined
/// whenever `x` lies outside `A_0'`; `None` otherwise.
pub fn break_from_vacancies(omega: &Configuration, x: usize) -> Option<EdgeCutset> {
    let outer = outer_vacancy_component(omega);
    region_behind(omega.lattice(), &outer, x)
}

pub(crate) fn region_behind(lattice: &LatticeBox, outer: &[bool], x: usize) -> Option<EdgeCutset> {
    if outer[x] {
        return None;
    }
    let inner = component(lattice, &[x], |_, _| false, |i| outer[i]);
    Some(EdgeCutset::from_inner_region(*lattice, x, inner))
}

fn separates(lattice: &LatticeBox, x: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let reach = component(lattice, &[x], |a, b| edges.contains(&edge_key(a, b)), |_| false);
    !lattice.indices().any(|i| reach[i] && lattice.is_boundary(i))
}

/// Whether every `x`-to-boundary path crosses `Gamma` and no edge of
/// `Gamma` can be dropped without losing that.
pub fn is_minimal_cutset(gamma: &EdgeCutset) -> Result<bool> {
    let lattice = gamma.lattice;
    if !separates(&lattice, gamma.anchor, &gamma.edges) {
        return Err(Error::NonSeparating);
    }
    let mut reduced = gamma.edges.clone();
    for e in &gamma.edges {
        reduced.remove(e);
        let still = separates(&lattice, gamma.anchor, &reduced);
        reduced.insert(*e);
        if still {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `E_1(Gamma)` consists of odd vertices only.
pub fn is_odd_cutset(gamma: &EdgeCutset) -> bool {
    gamma.e1.iter().all(|&i| gamma.lattice.parity_of(i) == Parity::Odd)
}

pub fn is_omcut(gamma: &EdgeCutset) -> bool {
    matches!(is_minimal_cutset(gamma), Ok(true)) && is_odd_cutset(gamma)
}

/// Membership in `OMCut(eps)`: `eps |Gamma| < |Gamma_r| <= 2 eps |Gamma|`.
pub fn omcut_class(gamma: &EdgeCutset, eps: &Rational) -> Result<bool> {
    if *eps <= Rational::zero() || *eps > exact::rat(1, 2) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {} outside (0, 1/2]",
            exact::format_fraction(eps)
        )));
    }
    let l = exact::int(gamma.len() as i64);
    let r = exact::int(gamma.regular_edge_count() as i64);
    Ok(eps * &l < r && r <= exact::int(2) * eps * l)
}

/// Which half of the bad-event partition a configuration falls in, with
/// its subclass labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum OmegaClass {
    /// `|Gamma_r| < 12 |Gamma| / d^beta`; labelled by `M = |E_1|` and
    /// `R = R_Gamma(E_1)`.
    Irregular { m: usize, r: u64 },
    /// The complement; labelled by `L`, `r = |Gamma_r^j|`, `x = |X_j|`
    /// and the `k` with `Gamma in OMCut(2^-k)`, where `j` is the shift+erase
    /// direction.
    Regular {
        l: usize,
        r: usize,
        x: usize,
        k: u32,
        direction: usize,
    },
}

/// `d^beta > lhs/rhs`-style comparisons for rational `beta = p/q`:
/// returns whether `a^q * d^p < b^q`.
fn power_less(a: u64, d: u64, b: u64, beta: &Rational) -> bool {
    let p = beta.numer().to_string().parse::<u64>().unwrap_or(0);
    let q = beta.denom().to_string().parse::<u64>().unwrap_or(1);
    exact::biguint_pow(a, q) * exact::biguint_pow(d, p) < exact::biguint_pow(b, q)
}

pub fn omega_class(omega: &Configuration, x: &Vertex, beta: &Rational) -> Result<OmegaClass> {
    if *beta < Rational::zero() {
        return Err(Error::InvalidParameter("beta must be non-negative".into()));
    }
    let gamma = break_of(omega, x)?;
    let l = gamma.len() as u64;
    let regular = gamma.regular_edge_count() as u64;
    let d = gamma.lattice.d as u64;
    if power_less(regular, d, 12 * l, beta) {
        return Ok(OmegaClass::Irregular {
            m: gamma.e1.len(),
            r: gamma.regularity(&gamma.e1),
        });
    }
    let j = gamma.t2_direction();
    let r = gamma.e1_dir(j).into_iter().filter(|&v| !gamma.is_exposed(v)).count();
    let xs = gamma.erase_set(omega, j).len();
    // smallest k >= 1 with 2^-k L < |Gamma_r| <= 2^(1-k) L
    let mut k = 1u32;
    while (regular << k) <= l {
        k += 1;
    }
    debug_assert!(regular << (k - 1) <= l || k == 1);
    Ok(OmegaClass::Regular {
        l: gamma.len(),
        r,
        x: xs,
        k,
        direction: j.label(),
    })
}

/// Whether `2^k <= d^beta`, the range claim for the `k` label.
pub fn k_within_range(k: u32, d: u64, beta: &Rational) -> bool {
    let p = beta.numer().to_string().parse::<u64>().unwrap_or(0);
    let q = beta.denom().to_string().parse::<u64>().unwrap_or(1);
    exact::biguint_pow(2, k as u64 * q) <= exact::biguint_pow(d, p)
}

/// Every `Gamma` in a slice is distinct and satisfies `is_omcut`.
pub fn all_omcut(cutsets: &[EdgeCutset]) -> bool {
    cutsets.iter().all(is_omcut)
}
