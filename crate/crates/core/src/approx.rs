//! Interior approximations of odd cutsets: the `U` neighbourhoods, the
//! randomised dominating sets, direction codes, the reconstruction
//! algorithm and small exhaustive censuses.
//!
//! Neighbourhoods here are taken in `Z^d`; points outside the box belong to
//! the outer side. Square-root thresholds are decided exactly by squaring.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cutset::{enumerate_omcut, omcut_class, EdgeCutset};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::lattice::{self, Direction, LatticeBox, Vertex};

pub const DEFAULT_RETRY_CAP: usize = 1000;
pub const NGAMMA_MAX_R: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `d^(-1/2) <= eps <= 1/2`.
    Paper,
    /// `0 < eps <= 1/2`, for dimensions where the other range is empty.
    Extended,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Paper => "paper",
            Regime::Extended => "extended",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonParam {
    pub value: Rational,
    pub regime: Regime,
}

impl EpsilonParam {
    pub fn new(value: Rational, d: usize, regime: Regime) -> Result<Self> {
        let half = exact::rat(1, 2);
        if value <= Rational::zero() || value > half {
            return Err(Error::InvalidParameter(format!(
                "epsilon {} outside (0, 1/2]",
                exact::format_fraction(&value)
            )));
        }
        // eps >= d^(-1/2)  <=>  eps^2 d >= 1
        if regime == Regime::Paper && &value * &value * exact::int(d as i64) < exact::one() {
            return Err(Error::InvalidParameter(format!(
                "epsilon {} below d^(-1/2) for d = {d}; use the extended regime",
                exact::format_fraction(&value)
            )));
        }
        Ok(EpsilonParam { value, regime })
    }

    pub fn extended(value: Rational, d: usize) -> Result<Self> {
        Self::new(value, d, Regime::Extended)
    }
}

type VSet = BTreeSet<Vertex>;

fn nbrs(v: &Vertex) -> impl Iterator<Item = Vertex> + '_ {
    lattice::lattice_neighbors(v)
}

/// Threshold arithmetic and side membership for one cutset.
struct View<'a> {
    gamma: &'a EdgeCutset,
    sides: [VSet; 2],
    eps: Rational,
    d: i64,
}

impl<'a> View<'a> {
    fn new(gamma: &'a EdgeCutset, eps: &Rational) -> Self {
        let sides = [gamma.e0_vertices().into_iter().collect(), gamma.e1_vertices().into_iter().collect()];
        View {
            gamma,
            sides,
            eps: eps.clone(),
            d: gamma.lattice().d as i64,
        }
    }

    fn side(&self, delta: u8) -> &VSet {
        &self.sides[delta as usize]
    }

    fn in_side(&self, v: &Vertex, delta: u8) -> bool {
        self.gamma.vertex_in_side(v, delta)
    }

    fn p(&self, v: &Vertex) -> i64 {
        self.gamma.p_vertex(v) as i64
    }

    /// `count < sqrt(eps d)`.
    fn below_root_eps_d(&self, count: usize) -> bool {
        exact::lt_sqrt(&exact::int(count as i64), &(&self.eps * exact::int(self.d)))
    }

    /// `size >= sqrt(eps) d^(3/2) / 2`.
    fn u1_large(&self, size: usize) -> bool {
        exact::ge_sqrt(&exact::int(2 * size as i64), &(&self.eps * exact::int(self.d.pow(3))))
    }

    /// `P >= d`.
    fn high(&self, v: &Vertex) -> bool {
        self.p(v) >= self.d
    }

    /// `P <= sqrt(d)`.
    fn low(&self, v: &Vertex) -> bool {
        let p = self.p(v);
        p * p <= self.d
    }

    fn u2_large(&self, size: usize) -> bool {
        2 * size as i64 >= self.d
    }

    fn u1(&self, v: &Vertex, delta: u8) -> VSet {
        let mut out = VSet::new();
        for u in nbrs(v).filter(|u| self.in_side(u, delta)) {
            out.extend(nbrs(&u).filter(|w| self.side(delta).contains(w)));
        }
        out
    }

    fn u2(&self, v: &Vertex, delta: u8) -> VSet {
        nbrs(v)
            .filter(|u| self.in_side(u, delta))
            .filter(|u| self.below_root_eps_d(nbrs(u).filter(|w| self.side(delta).contains(w)).count()))
            .collect()
    }

    fn u3(&self, v: &Vertex, delta: u8) -> VSet {
        let mut out = VSet::new();
        for u in self.u2(v, delta) {
            out.extend(nbrs(&u).filter(|w| self.side(delta).contains(w) && w != v));
        }
        out
    }

    fn touches(&self, v: &Vertex, set: &VSet) -> bool {
        nbrs(v).any(|w| set.contains(&w))
    }

    /// `|N(v) ∩ E_{1-delta} ∩ N(t)|`.
    fn dominated_around(&self, v: &Vertex, delta: u8, t: &VSet) -> usize {
        nbrs(v)
            .filter(|w| self.side(1 - delta).contains(w) && self.touches(w, t))
            .count()
    }

    fn check(&self, t: &[VSet; 2]) -> DominatingCheck {
        let b = self
            .side(1)
            .iter()
            .all(|v| {
                let u1 = self.u1(v, 1);
                !self.u1_large(u1.len()) || u1.iter().any(|w| t[1].contains(w))
            });
        let c = (0..2u8).all(|delta| {
            self.side(delta)
                .iter()
                .filter(|v| self.high(v))
                .all(|v| !self.below_root_eps_d(self.dominated_around(v, delta, &t[delta as usize])))
        });
        let d = (0..2u8).all(|delta| {
            self.side(delta)
                .iter()
                .filter(|v| self.low(v) && self.u2_large(self.u2(v, delta).len()))
                .all(|v| self.u3(v, delta).iter().any(|w| self.touches(w, &t[1 - delta as usize])))
        });
        DominatingCheck { b, c, d }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct USets {
    pub u1: Vec<Vertex>,
    pub u2: Vec<Vertex>,
    pub u3: Vec<Vertex>,
}

/// `U_1(v)`, `U_2(v)` and `U_3(v)` for `v` on side `delta`.
pub fn u_sets(gamma: &EdgeCutset, delta: u8, v: &Vertex, eps: &EpsilonParam) -> USets {
    let view = View::new(gamma, &eps.value);
    USets {
        u1: view.u1(v, delta).into_iter().collect(),
        u2: view.u2(v, delta).into_iter().collect(),
        u3: view.u3(v, delta).into_iter().collect(),
    }
}

/// Which of the covering conditions a pair of sets satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DominatingCheck {
    /// Large `U_1(v)` meet the inner set.
    pub b: bool,
    /// High-degree boundary vertices see enough dominated neighbours.
    pub c: bool,
    /// Low-degree vertices with large `U_2(v)` reach the opposite set.
    pub d: bool,
}

impl DominatingCheck {
    pub fn all(&self) -> bool {
        self.b && self.c && self.d
    }
}

pub fn check_dominating(gamma: &EdgeCutset, eps: &EpsilonParam, outer: &[Vertex], inner: &[Vertex]) -> DominatingCheck {
    let view = View::new(gamma, &eps.value);
    view.check(&[outer.iter().cloned().collect(), inner.iter().cloned().collect()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominatingSets {
    /// `E_0^t`.
    pub outer: Vec<Vertex>,
    /// `E_1^t`.
    pub inner: Vec<Vertex>,
    /// `R_Gamma(E_0^t)`.
    pub outer_regularity: u64,
    /// `R_Gamma(E_1^t)`.
    pub inner_regularity: u64,
    /// Number of sampling rounds used, starting at 1.
    pub attempts: usize,
}

fn inclusion_probability(view: &View, v: &Vertex) -> f64 {
    let d = view.d as f64;
    let eps = exact::to_f64(&view.eps);
    let base = 30.0 * d.ln() / (2.0 * d - view.p(v) as f64);
    let idx = view.gamma.lattice().index_of(v);
    let regular_inner = idx.is_some_and(|i| view.gamma.in_inner(i) && !view.gamma.is_exposed(i));
    let p = if regular_inner {
        base / (eps * d).sqrt()
    } else {
        base * (eps / d).sqrt()
    };
    p.clamp(0.0, 1.0)
}

/// Randomised construction of `E_0^t`, `E_1^t`.
///
/// Each round samples `E_delta^s`, adds the vertices that violate a covering
/// condition and one completion vertex for every low-degree violation, then
/// checks the conditions again. The draw for vertex `i` in round `k` is
/// keyed by `(seed, k, i)`.
pub fn dominating_sets(gamma: &EdgeCutset, eps: &EpsilonParam, seed: u64, retry_cap: usize) -> Result<DominatingSets> {
    let view = View::new(gamma, &eps.value);
    let lattice = gamma.lattice();
    for attempt in 0..retry_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut sample: [VSet; 2] = [VSet::new(), VSet::new()];
        for delta in 0..2u8 {
            for v in view.side(delta) {
                let i = lattice.index_of(v).expect("boundary sets lie in the box");
                rng.set_word_pos(2 * i as u128);
                if rng.random::<f64>() < inclusion_probability(&view, v) {
                    sample[delta as usize].insert(v.clone());
                }
            }
        }
        let mut t = sample.clone();
        for v in view.side(1) {
            let u1 = view.u1(v, 1);
            if view.u1_large(u1.len()) && !u1.iter().any(|w| sample[1].contains(w)) {
                t[1].insert(v.clone());
            }
        }
        for delta in 0..2u8 {
            for v in view.side(delta).iter().filter(|v| view.high(v)) {
                if view.below_root_eps_d(view.dominated_around(v, delta, &sample[delta as usize])) {
                    t[delta as usize].insert(v.clone());
                }
            }
        }
        for delta in 0..2u8 {
            let opposite = 1 - delta as usize;
            for v in view.side(delta).iter().filter(|v| view.low(v)) {
                if !view.u2_large(view.u2(v, delta).len()) {
                    continue;
                }
                let u3 = view.u3(v, delta);
                if u3.iter().any(|w| view.touches(w, &sample[opposite])) {
                    continue;
                }
                let completion = u3
                    .iter()
                    .flat_map(nbrs)
                    .filter(|w| view.side(1 - delta).contains(w))
                    .min();
                if let Some(w) = completion {
                    t[opposite].insert(w);
                }
            }
        }
        if view.check(&t).all() {
            let regularity = |set: &VSet| {
                set.iter()
                    .map(|v| gamma.regularity_at(lattice.index_of(v).expect("in box")) as u64)
                    .sum()
            };
            return Ok(DominatingSets {
                outer_regularity: regularity(&t[0]),
                inner_regularity: regularity(&t[1]),
                outer: t[0].iter().cloned().collect(),
                inner: t[1].iter().cloned().collect(),
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::RetryCap(retry_cap))
}

/// Whether `{v} ∪ outer ∪ inner` is connected at graph distance 8.
pub fn g8_connectivity(outer: &[Vertex], inner: &[Vertex], v: &Vertex) -> bool {
    let mut set: Vec<Vertex> = vec![v.clone()];
    set.extend(outer.iter().cloned());
    set.extend(inner.iter().cloned());
    set.sort();
    set.dedup();
    lattice::connected_in_power(&set, 8)
}

/// `N_Gamma(v)` for every `v` in `set`, which must lie in `E_0 ∪ E_1`.
pub fn direction_code(gamma: &EdgeCutset, set: &[Vertex]) -> Result<BTreeMap<Vertex, Vec<bool>>> {
    let mut out = BTreeMap::new();
    for v in set {
        if gamma.p_vertex(v) == 0 {
            return Err(Error::InvalidParameter(format!("{v} is not a boundary vertex of the cutset")));
        }
        out.insert(v.clone(), gamma.direction_bits(v));
    }
    Ok(out)
}

/// Everything the reconstruction algorithm may look at.
#[derive(Clone, Debug)]
pub struct ApproxInput {
    pub lattice: LatticeBox,
    pub eps: Rational,
    pub outer: Vec<Vertex>,
    pub inner: Vec<Vertex>,
    pub codes: BTreeMap<Vertex, Vec<bool>>,
}

impl ApproxInput {
    pub fn from_cutset(gamma: &EdgeCutset, eps: &EpsilonParam, sets: &DominatingSets) -> Result<Self> {
        let mut all = sets.outer.clone();
        all.extend(sets.inner.iter().cloned());
        Ok(ApproxInput {
            lattice: *gamma.lattice(),
            eps: eps.value.clone(),
            outer: sets.outer.clone(),
            inner: sets.inner.clone(),
            codes: direction_code(gamma, &all)?,
        })
    }
}

/// Reconstructs an interior approximation from the dominating sets and
/// their direction codes alone.
pub fn interior_approx(input: &ApproxInput) -> Result<Vec<Vertex>> {
    let d = input.lattice.d;
    let eps_d = &input.eps * exact::int(d as i64);
    let code = |v: &Vertex| -> Result<&Vec<bool>> {
        let c = input
            .codes
            .get(v)
            .ok_or_else(|| Error::MalformedInput(format!("no direction code for {v}")))?;
        if c.len() != 2 * d {
            return Err(Error::MalformedInput(format!("direction code for {v} has length {}", c.len())));
        }
        Ok(c)
    };
    let sets = [&input.outer, &input.inner];
    // known boundary points on each side, and known interior neighbourhoods
    let mut known_boundary: [VSet; 2] = [VSet::new(), VSet::new()];
    let mut known_side: [VSet; 2] = [VSet::new(), VSet::new()];
    for delta in 0..2usize {
        for v in sets[1 - delta] {
            for (j, &bit) in code(v)?.iter().enumerate() {
                if bit == (delta == 1) {
                    known_boundary[delta].insert(v.step(Direction(j)));
                }
            }
        }
        for v in sets[delta] {
            for (j, &bit) in code(v)?.iter().enumerate() {
                if bit == (delta == 1) {
                    known_side[delta].extend(nbrs(&v.step(Direction(j))));
                }
            }
        }
    }
    let sparse = |v: &Vertex, delta: usize| {
        let seen = nbrs(v).filter(|w| known_boundary[1 - delta].contains(w)).count();
        exact::lt_sqrt(&exact::int(seen as i64), &eps_d)
    };
    let mut candidates = VSet::new();
    for w in &known_boundary[1] {
        candidates.extend(nbrs(w).filter(|u| input.lattice.contains(u)));
    }
    let hub: Vec<Vertex> = candidates
        .into_iter()
        .filter(|u| sparse(u, 0))
        .filter(|u| nbrs(u).any(|w| known_boundary[1].contains(&w) && sparse(&w, 1)))
        .collect();
    let mut out = known_side[1].clone();
    for u in &hub {
        out.extend(nbrs(u));
    }
    Ok(out.into_iter().collect())
}

fn to_indices(gamma: &EdgeCutset, set: &[Vertex]) -> Option<Vec<usize>> {
    set.iter().map(|v| gamma.lattice().index_of(v)).collect()
}

/// `E_1 \ E_{1,e} ⊆ E ⊆ A_1`.
pub fn is_interior_approx(set: &[Vertex], gamma: &EdgeCutset) -> bool {
    to_indices(gamma, set).is_some_and(|idx| gamma.is_interior_approximation(&idx))
}

/// The sharper chain `E_{1, P < 2d - sqrt(eps d)} ⊆ E ⊆ A_1`.
pub fn satisfies_reconstruction_bounds(set: &[Vertex], gamma: &EdgeCutset, eps: &Rational) -> bool {
    let Some(idx) = to_indices(gamma, set) else {
        return false;
    };
    if !idx.iter().all(|&i| gamma.in_inner(i)) {
        return false;
    }
    let member: BTreeSet<usize> = idx.into_iter().collect();
    let eps_d = eps * exact::int(gamma.lattice().d as i64);
    gamma.e1().iter().all(|&v| {
        let gap = gamma.two_d() as i64 - gamma.p(v) as i64;
        !exact::gt_sqrt(&exact::int(gap), &eps_d) || member.contains(&v)
    })
}

fn check_small_planar(lattice: &LatticeBox) -> Result<()> {
    if lattice.d != 2 || lattice.n > crate::cutset::OMCUT_MAX_N {
        return Err(Error::Guard(format!(
            "census needs d = 2 and n <= {}, got {lattice}",
            crate::cutset::OMCUT_MAX_N
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NGammaCensus {
    pub r: u64,
    pub count: u64,
    pub bound: String,
    pub within_bound: bool,
}

/// `|N(R, E)|`: distinct direction-code tuples over cutsets with
/// `E ⊆ E_0 ∪ E_1` and `R_Gamma(E) = R`.
pub fn census_ngamma(r: u64, set: &[Vertex], lattice: LatticeBox, x: &Vertex) -> Result<NGammaCensus> {
    check_small_planar(&lattice)?;
    census_ngamma_over(&enumerate_omcut(lattice, x)?, r, set)
}

/// [`census_ngamma`] over an already enumerated cutset list.
pub fn census_ngamma_over(cutsets: &[EdgeCutset], r: u64, set: &[Vertex]) -> Result<NGammaCensus> {
    if r > NGAMMA_MAX_R {
        return Err(Error::Guard(format!("R = {r} exceeds {NGAMMA_MAX_R}")));
    }
    let d = cutsets.first().map_or(2, |g| g.lattice().d) as u64;
    let bound: BigUint = exact::biguint_pow(2 * d, 2 * r);
    let count = if set.len() as u64 > r {
        0
    } else {
        let mut tuples = BTreeSet::new();
        for gamma in cutsets {
            let Some(idx) = to_indices(gamma, set) else { continue };
            if idx.iter().any(|&i| gamma.p(i) == 0) || gamma.regularity(&idx) != r {
                continue;
            }
            tuples.insert(set.iter().map(|v| gamma.direction_bits(v)).collect::<Vec<_>>());
        }
        tuples.len() as u64
    };
    Ok(NGammaCensus {
        r,
        count,
        within_bound: BigUint::from(count) <= bound,
        bound: bound.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCensus {
    #[serde(rename = "L")]
    pub l: usize,
    pub epsilon: String,
    pub cutsets: usize,
    pub distinct_approximations: usize,
    pub regime_flag: Regime,
    pub seed: u64,
    #[serde(skip)]
    pub all_valid: bool,
    #[serde(skip)]
    pub max_attempts: usize,
}

/// Builds one approximation per cutset of `OMCut(eps)` with `|Gamma| = L`
/// and counts the distinct results.
pub fn family_census(lattice: LatticeBox, x: &Vertex, eps: &EpsilonParam, l: usize, seed: u64) -> Result<FamilyCensus> {
    check_small_planar(&lattice)?;
    let mut cutsets = 0;
    let mut distinct = BTreeSet::new();
    let mut all_valid = true;
    let mut max_attempts = 0;
    for gamma in enumerate_omcut(lattice, x)? {
        if gamma.len() != l || !omcut_class(&gamma, &eps.value)? {
            continue;
        }
        cutsets += 1;
        let sets = dominating_sets(&gamma, eps, seed, DEFAULT_RETRY_CAP)?;
        max_attempts = max_attempts.max(sets.attempts);
        let approx = interior_approx(&ApproxInput::from_cutset(&gamma, eps, &sets)?)?;
        all_valid &= is_interior_approx(&approx, &gamma);
        distinct.insert(approx);
    }
    Ok(FamilyCensus {
        l,
        epsilon: exact::format_fraction(&eps.value),
        cutsets,
        distinct_approximations: distinct.len(),
        regime_flag: eps.regime,
        seed,
        all_valid,
        max_attempts,
    })
}

pub fn write_family_csv<W: Write>(rows: &[FamilyCensus], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutset::break_of;
    use crate::exact::rat;
    use crate::gibbs::{clamp_configuration, BoundaryCondition};

    fn v(c: &[i32]) -> Vertex {
        Vertex::new(c.to_vec())
    }

    fn plus() -> EdgeCutset {
        let b = LatticeBox::new(2, 2).unwrap();
        let mut c = clamp_configuration(b, BoundaryCondition::OddOccupied);
        c.set(b.index_of(&Vertex::origin(2)).unwrap(), true);
        break_of(&c, &Vertex::origin(2)).unwrap()
    }

    fn eps(p: i64, q: i64) -> EpsilonParam {
        EpsilonParam::extended(rat(p, q), 2).unwrap()
    }

    #[test]
    fn epsilon_regimes() {
        assert!(EpsilonParam::new(rat(1, 2), 2, Regime::Paper).is_err());
        assert!(EpsilonParam::new(rat(1, 2), 4, Regime::Paper).is_ok());
        assert!(EpsilonParam::new(rat(1, 3), 9, Regime::Paper).is_ok());
        assert!(EpsilonParam::new(rat(1, 4), 9, Regime::Paper).is_err());
        assert!(EpsilonParam::extended(rat(0, 1), 2).is_err());
        assert!(EpsilonParam::extended(rat(3, 5), 2).is_err());
    }

    #[test]
    fn u_sets_on_plus() {
        let gamma = plus();
        let u = u_sets(&gamma, 1, &v(&[1, 0]), &eps(3, 10));
        // reached through the anchor: both vertical arms, the opposite arm
        // and the vertex itself
        assert_eq!(u.u1, vec![v(&[-1, 0]), v(&[0, -1]), v(&[0, 1]), v(&[1, 0])]);
        // the anchor sees four inner-boundary vertices, so it is not sparse
        assert!(u.u2.is_empty());
        assert!(u.u3.is_empty());
        let p = 3usize;
        assert!(u.u1.len() >= p * (4 - p) - p.min(4 - p));
    }

    #[test]
    fn direction_code_on_plus() {
        let gamma = plus();
        let codes = direction_code(&gamma, &[v(&[1, 0])]).unwrap();
        assert_eq!(codes[&v(&[1, 0])], vec![false, true, false, false]);
        assert!(direction_code(&gamma, &[v(&[2, 2])]).is_err());
        let outer = direction_code(&gamma, &[v(&[2, 0])]).unwrap();
        assert_eq!(outer[&v(&[2, 0])], vec![false, true, false, false]);
    }

    #[test]
    fn trivial_sets_dominate_at_d2() {
        let gamma = plus();
        let e = eps(3, 10);
        let check = check_dominating(&gamma, &e, &gamma.e0_vertices(), &gamma.e1_vertices());
        assert!(check.all());
        assert!(g8_connectivity(&gamma.e0_vertices(), &gamma.e1_vertices(), &v(&[1, 0])));
    }

    #[test]
    fn reconstruction_on_plus() {
        let gamma = plus();
        for e in [eps(3, 10), eps(1, 2)] {
            for seed in 0..20 {
                let sets = dominating_sets(&gamma, &e, seed, DEFAULT_RETRY_CAP).unwrap();
                assert!(check_dominating(&gamma, &e, &sets.outer, &sets.inner).all());
                let input = ApproxInput::from_cutset(&gamma, &e, &sets).unwrap();
                let approx = interior_approx(&input).unwrap();
                assert!(is_interior_approx(&approx, &gamma));
                assert!(satisfies_reconstruction_bounds(&approx, &gamma, &e.value));
                assert!(approx.iter().all(|u| u.l1_norm() <= 1));
            }
        }
    }

    #[test]
    fn reconstruction_rejects_missing_codes() {
        let gamma = plus();
        let input = ApproxInput {
            lattice: *gamma.lattice(),
            eps: rat(1, 2),
            outer: vec![],
            inner: vec![v(&[1, 0])],
            codes: BTreeMap::new(),
        };
        assert!(matches!(interior_approx(&input), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn interior_approx_predicate_edges() {
        let gamma = plus();
        let a1: Vec<Vertex> = gamma.inner_indices().iter().map(|&i| gamma.lattice().vertex(i)).collect();
        assert!(is_interior_approx(&a1, &gamma));
        assert!(is_interior_approx(&[], &gamma));
        assert!(!is_interior_approx(&[v(&[5, 5])], &gamma));
    }

    #[test]
    fn ngamma_census_small() {
        let b = LatticeBox::new(2, 2).unwrap();
        let x = Vertex::origin(2);
        assert_eq!(census_ngamma(1, &[v(&[1, 0]), v(&[0, 1])], b, &x).unwrap().count, 0);
        let one = census_ngamma(1, &[v(&[1, 0])], b, &x).unwrap();
        assert_eq!(one.count, 1);
        assert!(one.within_bound);
        assert!(census_ngamma(9, &[], b, &x).is_err());
        assert!(census_ngamma(1, &[], LatticeBox::new(2, 4).unwrap(), &x).is_err());
    }

    #[test]
    fn family_census_on_plus_box_is_empty() {
        let b = LatticeBox::new(2, 2).unwrap();
        let c = family_census(b, &Vertex::origin(2), &eps(1, 2), 12, 7).unwrap();
        assert_eq!((c.cutsets, c.distinct_approximations), (0, 0));
        let mut buf = Vec::new();
        write_family_csv(&[c], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "L,epsilon,cutsets,distinct_approximations,regime_flag,seed\n12,1/2,0,0,extended,7\n"
        );
    }
}
