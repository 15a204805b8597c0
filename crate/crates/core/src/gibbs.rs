//! Configurations, boundary conditions and exact hard-core measures.
//!
//! Everything here is computed by exhaustive enumeration in exact rational
//! arithmetic. This is the oracle every other module is checked against, so
//! it is kept deliberately plain: no transfer matrices, no memoisation.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::lattice::{LatticeBox, Parity, Vertex};

/// Default limit on the number of undetermined vertices an enumeration may
/// branch on.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// A 0/1 assignment on the vertices of a box.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    lattice: LatticeBox,
    occ: Vec<bool>,
}

impl Configuration {
    pub fn vacant(lattice: LatticeBox) -> Self {
        Configuration {
            lattice,
            occ: vec![false; lattice.len()],
        }
    }

    pub fn from_occupied(lattice: LatticeBox, occupied: &[Vertex]) -> Result<Self> {
        let mut c = Self::vacant(lattice);
        for v in occupied {
            lattice.check_dim(v)?;
            let i = lattice.index_of(v).ok_or_else(|| Error::OutsideBox(v.clone()))?;
            c.occ[i] = true;
        }
        Ok(c)
    }

    pub fn from_bits(lattice: LatticeBox, occ: Vec<bool>) -> Result<Self> {
        if occ.len() != lattice.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} occupancy bits, got {}",
                lattice.len(),
                occ.len()
            )));
        }
        Ok(Configuration { lattice, occ })
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn bits(&self) -> &[bool] {
        &self.occ
    }

    #[inline]
    pub fn get(&self, idx: usize) -> bool {
        self.occ[idx]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, value: bool) {
        self.occ[idx] = value;
    }

    /// Occupancy of `v`; vertices outside the box read as vacant.
    pub fn at(&self, v: &Vertex) -> bool {
        self.lattice.index_of(v).is_some_and(|i| self.occ[i])
    }

    pub fn occupied_count(&self) -> usize {
        self.occ.iter().filter(|&&b| b).count()
    }

    pub fn occupied_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.occ.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn occupied(&self) -> Vec<Vertex> {
        self.occupied_indices().map(|i| self.lattice.vertex(i)).collect()
    }

    /// `V^vac` as box indices.
    pub fn vacant_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.occ.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i)
    }

    /// Vertices where `self` and `other` differ.
    pub fn difference(&self, other: &Configuration) -> Vec<usize> {
        self.occ
            .iter()
            .zip(&other.occ)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Configuration")
            .field("box", &self.lattice)
            .field("occupied", &self.occupied())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigurationRepr {
    #[serde(rename = "box")]
    lattice: LatticeBox,
    occupied: Vec<Vertex>,
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigurationRepr {
            lattice: self.lattice,
            occupied: self.occupied(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ConfigurationRepr::deserialize(d)?;
        Configuration::from_occupied(repr.lattice, &repr.occupied).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Free,
    OddOccupied,
    EvenOccupied,
}

impl BoundaryCondition {
    /// Parity class clamped to occupied on the boundary, if any.
    pub fn clamped_parity(self) -> Option<Parity> {
        match self {
            BoundaryCondition::Free => None,
            BoundaryCondition::OddOccupied => Some(Parity::Odd),
            BoundaryCondition::EvenOccupied => Some(Parity::Even),
        }
    }

    pub fn is_clamped(self, lattice: &LatticeBox, idx: usize) -> bool {
        self.clamped_parity()
            .is_some_and(|p| lattice.is_boundary(idx) && lattice.parity_of(idx) == p)
    }

    /// Vertices that no feasible configuration can occupy: non-clamped
    /// vertices adjacent to a clamped one.
    pub fn is_forced_vacant(self, lattice: &LatticeBox, idx: usize) -> bool {
        !self.is_clamped(lattice, idx)
            && lattice.neighbor_indices(idx).any(|w| self.is_clamped(lattice, w))
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Free => "free",
            BoundaryCondition::OddOccupied => "odd-occupied",
            BoundaryCondition::EvenOccupied => "even-occupied",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(BoundaryCondition::Free),
            "odd" | "odd-occupied" => Ok(BoundaryCondition::OddOccupied),
            "even" | "even-occupied" => Ok(BoundaryCondition::EvenOccupied),
            other => Err(Error::Parse(format!("unknown boundary condition {other:?}"))),
        }
    }
}

/// No two adjacent vertices of the box are both occupied.
pub fn is_feasible(omega: &Configuration) -> bool {
    let lattice = omega.lattice;
    omega.occupied_indices().all(|i| {
        lattice
            .neighbor_indices(i)
            .all(|w| w < i || !omega.get(w))
    })
}

pub fn satisfies_bc(omega: &Configuration, bc: BoundaryCondition) -> bool {
    is_feasible(omega)
        && omega
            .lattice
            .indices()
            .all(|i| !bc.is_clamped(&omega.lattice, i) || omega.get(i))
}

/// `lambda^(number of occupied vertices)`.
pub fn weight(omega: &Configuration, lambda: &Rational) -> Result<Rational> {
    if !is_feasible(omega) {
        return Err(Error::Infeasible);
    }
    Ok(exact::pow(lambda, omega.occupied_count() as u64))
}

/// Weight with clamped vertices contributing no factor; this is the
/// unnormalised conditional weight under `bc`.
pub fn conditional_weight(omega: &Configuration, bc: BoundaryCondition, lambda: &Rational) -> Rational {
    let lattice = omega.lattice;
    let k = omega
        .occupied_indices()
        .filter(|&i| !bc.is_clamped(&lattice, i))
        .count();
    exact::pow(lambda, k as u64)
}

/// Vertices an enumeration under `bc` actually branches on.
pub fn free_vertices(lattice: &LatticeBox, bc: BoundaryCondition) -> Vec<usize> {
    lattice
        .indices()
        .filter(|&i| !bc.is_clamped(lattice, i) && !bc.is_forced_vacant(lattice, i))
        .collect()
}

/// Configuration with only the clamped vertices occupied.
pub fn clamp_configuration(lattice: LatticeBox, bc: BoundaryCondition) -> Configuration {
    let mut c = Configuration::vacant(lattice);
    for i in lattice.indices() {
        if bc.is_clamped(&lattice, i) {
            c.set(i, true);
        }
    }
    c
}

/// Depth-first stream of configurations that agree with `base` off
/// `branch` and are feasible. Each vertex of `branch` is tried vacant before
/// occupied, giving a deterministic lexicographic order.
pub struct FeasibleConfigurations {
    current: Configuration,
    branch: Vec<usize>,
    started: bool,
    done: bool,
}

impl FeasibleConfigurations {
    /// `base` must itself be feasible with every `branch` vertex vacant.
    pub fn over(base: Configuration, branch: Vec<usize>) -> Self {
        let mut current = base;
        for &i in &branch {
            current.set(i, false);
        }
        let done = !is_feasible(&current);
        FeasibleConfigurations {
            current,
            branch,
            started: false,
            done,
        }
    }

    fn can_occupy(&self, idx: usize) -> bool {
        self.current.lattice.neighbor_indices(idx).all(|w| !self.current.get(w))
    }

    fn advance(&mut self) -> bool {
        for k in (0..self.branch.len()).rev() {
            let v = self.branch[k];
            if self.current.get(v) {
                self.current.set(v, false);
            } else if self.can_occupy(v) {
                self.current.set(v, true);
                return true;
            }
        }
        false
    }
}

impl Iterator for FeasibleConfigurations {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        if self.advance() {
            Some(self.current.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// Every feasible configuration satisfying `bc`, exactly once.
pub fn enumerate_feasible(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    cap: usize,
) -> Result<FeasibleConfigurations> {
    let free = free_vertices(&lattice, bc);
    if free.len() > cap {
        return Err(Error::EnumerationCap {
            free: free.len(),
            cap,
        });
    }
    Ok(FeasibleConfigurations::over(clamp_configuration(lattice, bc), free))
}

/// `Z = sum of conditional weights over the enumeration`.
pub fn partition_function(lattice: LatticeBox, bc: BoundaryCondition, lambda: &Rational) -> Result<Rational> {
    partition_function_capped(lattice, bc, lambda, DEFAULT_ENUMERATION_CAP)
}

pub fn partition_function_capped(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    lambda: &Rational,
    cap: usize,
) -> Result<Rational> {
    let mut z = Rational::zero();
    for omega in enumerate_feasible(lattice, bc, cap)? {
        z += conditional_weight(&omega, bc, lambda);
    }
    Ok(z)
}

/// Exact probability of `event` under the hard-core measure on `lattice`
/// conditioned on `bc`.
pub fn probability<F>(event: F, lattice: LatticeBox, bc: BoundaryCondition, lambda: &Rational) -> Result<Rational>
where
    F: Fn(&Configuration) -> bool,
{
    let mut z = Rational::zero();
    let mut hit = Rational::zero();
    for omega in enumerate_feasible(lattice, bc, DEFAULT_ENUMERATION_CAP)? {
        let w = conditional_weight(&omega, bc, lambda);
        if event(&omega) {
            hit += &w;
        }
        z += w;
    }
    if z.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    Ok(hit / z)
}

/// Exact distribution over all configurations of the enumeration, in
/// enumeration order.
pub fn exact_distribution(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    lambda: &Rational,
) -> Result<Vec<(Configuration, Rational)>> {
    let mut out: Vec<(Configuration, Rational)> = enumerate_feasible(lattice, bc, DEFAULT_ENUMERATION_CAP)?
        .map(|omega| {
            let w = conditional_weight(&omega, bc, lambda);
            (omega, w)
        })
        .collect();
    let z: Rational = out.iter().map(|(_, w)| w.clone()).sum();
    if z.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    for (_, w) in &mut out {
        *w = &*w / &z;
    }
    Ok(out)
}

/// The event `Omega`: `omega` satisfies the odd boundary condition and the
/// even anchor `x` is occupied.
pub fn in_bad_event(omega: &Configuration, x: usize) -> bool {
    omega.get(x) && satisfies_bc(omega, BoundaryCondition::OddOccupied)
}

/// All configurations of `Omega` for the anchor `x`, in enumeration order.
pub fn bad_event_configurations(lattice: LatticeBox, x: &Vertex, cap: usize) -> Result<Vec<Configuration>> {
    let xi = lattice.index_of(x).ok_or_else(|| Error::OutsideBox(x.clone()))?;
    Ok(enumerate_feasible(lattice, BoundaryCondition::OddOccupied, cap)?
        .filter(|omega| omega.get(xi))
        .collect())
}

/// A finite instance of the double-counting lemma: a probability vector,
/// an event `A`, images `T(a)` and the two constants.
#[derive(Clone, Debug)]
pub struct DoubleCountingInstance {
    pub mu: Vec<Rational>,
    pub event: Vec<usize>,
    pub images: Vec<Vec<usize>>,
    pub p: Rational,
    pub q: Rational,
}

impl DoubleCountingInstance {
    fn mass(&self, set: &[usize]) -> Rational {
        set.iter().map(|&i| self.mu[i].clone()).sum()
    }

    /// Checks that the lemma's hypotheses hold.
    pub fn validate(&self) -> Result<()> {
        let violation = |m: String| Err(Error::HypothesisViolation(m));
        if self.mu.iter().any(|m| m < &Rational::zero()) {
            return violation("negative mass".into());
        }
        if self.mu.iter().cloned().sum::<Rational>() != Rational::one() {
            return violation("masses do not sum to 1".into());
        }
        if self.p <= Rational::zero() || self.q <= Rational::zero() {
            return violation("p and q must be positive".into());
        }
        if self.images.len() != self.event.len() {
            return violation("one image per element of A is required".into());
        }
        let distinct: BTreeSet<usize> = self.event.iter().copied().collect();
        if distinct.len() != self.event.len() || self.event.iter().any(|&a| a >= self.mu.len()) {
            return violation("A must be a set of points of X".into());
        }
        for (a, img) in self.event.iter().zip(&self.images) {
            if img.iter().any(|&x| x >= self.mu.len()) {
                return violation(format!("T({a}) leaves X"));
            }
            let distinct: BTreeSet<usize> = img.iter().copied().collect();
            let mass: Rational = distinct.iter().map(|&i| self.mu[i].clone()).sum();
            if mass < &self.q * &self.mu[*a] {
                return violation(format!("mu(T({a})) < q mu({a})"));
            }
        }
        for x in 0..self.mu.len() {
            let hits = self.images.iter().filter(|img| img.contains(&x)).count();
            if Rational::from_integer(hits.into()) > self.p {
                return violation(format!("{x} lies in {hits} images, more than p"));
            }
        }
        Ok(())
    }

    /// Generates an instance whose hypotheses hold with the tightest
    /// constants: `q` is the minimum expansion ratio and `p` the maximum
    /// image multiplicity.
    pub fn random<R: Rng>(rng: &mut R, size: usize) -> Self {
        let size = size.max(1);
        let raw: Vec<u64> = (0..size).map(|_| rng.random_range(1..=20)).collect();
        let total: u64 = raw.iter().sum();
        let mu: Vec<Rational> = raw.iter().map(|&r| exact::rat(r as i64, total as i64)).collect();
        let mut points: Vec<usize> = (0..size).collect();
        points.shuffle(rng);
        let event: Vec<usize> = points[..rng.random_range(0..=size)].to_vec();
        let images: Vec<Vec<usize>> = event
            .iter()
            .map(|_| {
                let mut img: Vec<usize> = (0..size).filter(|_| rng.random_bool(0.4)).collect();
                if img.is_empty() {
                    img.push(rng.random_range(0..size));
                }
                img
            })
            .collect();
        let mut inst = DoubleCountingInstance {
            mu,
            event,
            images,
            p: Rational::one(),
            q: Rational::one(),
        };
        let q = inst
            .event
            .iter()
            .zip(&inst.images)
            .map(|(a, img)| inst.mass(img) / &inst.mu[*a])
            .min()
            .unwrap_or_else(Rational::one);
        let p = (0..size)
            .map(|x| inst.images.iter().filter(|img| img.contains(&x)).count())
            .max()
            .unwrap_or(1)
            .max(1);
        inst.q = q;
        inst.p = Rational::from_integer(p.into());
        inst
    }
}

/// `mu(A) <= p/q`, after checking the hypotheses.
pub fn check_double_counting(instance: &DoubleCountingInstance) -> Result<bool> {
    instance.validate()?;
    let mass = instance.mass(&instance.event);
    Ok(mass <= &instance.p / &instance.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(c: &[i32]) -> Vertex {
        Vertex::new(c.to_vec())
    }

    fn brute_force_count(lattice: LatticeBox) -> usize {
        let len = lattice.len();
        (0u64..1 << len)
            .filter(|mask| {
                let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
                is_feasible(&Configuration::from_bits(lattice, bits).unwrap())
            })
            .count()
    }

    #[test]
    fn feasibility_examples() {
        let b = LatticeBox::new(2, 1).unwrap();
        assert!(is_feasible(&Configuration::vacant(b)));
        let c = Configuration::from_occupied(b, &[v(&[0, 0]), v(&[1, 0])]).unwrap();
        assert!(!is_feasible(&c));
        let b5 = LatticeBox::new(2, 2).unwrap();
        let odds: Vec<Vertex> = b5
            .indices()
            .filter(|&i| b5.parity_of(i) == Parity::Odd)
            .map(|i| b5.vertex(i))
            .collect();
        assert!(is_feasible(&Configuration::from_occupied(b5, &odds).unwrap()));
    }

    #[test]
    fn boundary_condition_examples() {
        let b = LatticeBox::new(2, 2).unwrap();
        let clamp = clamp_configuration(b, BoundaryCondition::OddOccupied);
        assert!(is_feasible(&clamp));
        assert!(satisfies_bc(&clamp, BoundaryCondition::OddOccupied));
        let mut missing = clamp.clone();
        missing.set(b.index_of(&v(&[2, 1])).unwrap(), false);
        assert!(!satisfies_bc(&missing, BoundaryCondition::OddOccupied));
        assert!(satisfies_bc(&missing, BoundaryCondition::Free));
    }

    #[test]
    fn weight_examples() {
        let b = LatticeBox::new(2, 2).unwrap();
        assert_eq!(weight(&Configuration::vacant(b), &rat(7, 3)).unwrap(), int(1));
        let three = Configuration::from_occupied(b, &[v(&[0, 0]), v(&[2, 0]), v(&[-2, 0])]).unwrap();
        assert_eq!(weight(&three, &int(2)).unwrap(), int(8));
        let two = Configuration::from_occupied(b, &[v(&[0, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(weight(&two, &rat(1, 2)).unwrap(), rat(1, 4));
        let bad = Configuration::from_occupied(b, &[v(&[0, 0]), v(&[1, 0])]).unwrap();
        assert!(matches!(weight(&bad, &int(1)), Err(Error::Infeasible)));
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        let path = LatticeBox::new(1, 1).unwrap();
        assert_eq!(brute_force_count(path), 5);
        assert_eq!(enumerate_feasible(path, BoundaryCondition::Free, 30).unwrap().count(), 5);
        let grid = LatticeBox::new(2, 1).unwrap();
        assert_eq!(brute_force_count(grid), 63);
        assert_eq!(enumerate_feasible(grid, BoundaryCondition::Free, 30).unwrap().count(), 63);
    }

    #[test]
    fn odd_boundary_enumeration_matches_clamped_brute_force() {
        let b = LatticeBox::new(2, 2).unwrap();
        let len = b.len();
        let clamp = clamp_configuration(b, BoundaryCondition::OddOccupied);
        let brute = (0u64..1 << len)
            .filter(|mask| {
                let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
                let c = Configuration::from_bits(b, bits).unwrap();
                clamp.occupied_indices().all(|i| c.get(i)) && is_feasible(&c)
            })
            .count();
        let got: Vec<Configuration> = enumerate_feasible(b, BoundaryCondition::OddOccupied, 30)
            .unwrap()
            .collect();
        assert_eq!(got.len(), brute);
        let distinct: std::collections::HashSet<_> = got.iter().collect();
        assert_eq!(distinct.len(), got.len());
        assert!(got.iter().all(|c| satisfies_bc(c, BoundaryCondition::OddOccupied)));
    }

    #[test]
    fn cap_is_enforced() {
        let b = LatticeBox::new(2, 3).unwrap();
        assert!(matches!(
            enumerate_feasible(b, BoundaryCondition::Free, 30),
            Err(Error::EnumerationCap { free: 49, cap: 30 })
        ));
    }

    #[test]
    fn partition_function_examples() {
        let path = LatticeBox::new(1, 1).unwrap();
        assert_eq!(partition_function(path, BoundaryCondition::Free, &int(1)).unwrap(), int(5));
        let grid = LatticeBox::new(2, 1).unwrap();
        assert_eq!(partition_function(grid, BoundaryCondition::Free, &int(1)).unwrap(), int(63));
        assert_eq!(partition_function(grid, BoundaryCondition::Free, &int(0)).unwrap(), int(1));
        let b = LatticeBox::new(2, 2).unwrap();
        assert_eq!(partition_function(b, BoundaryCondition::OddOccupied, &int(0)).unwrap(), int(1));
    }

    #[test]
    fn occupancy_probability_at_origin_under_odd_boundary() {
        // The free part is a star: centre (0,0) and its four neighbours,
        // so Z = lambda + (1 + lambda)^4 and P = lambda / Z.
        let b = LatticeBox::new(2, 2).unwrap();
        let x = b.index_of(&Vertex::origin(2)).unwrap();
        let p = probability(|w| w.get(x), b, BoundaryCondition::OddOccupied, &int(1)).unwrap();
        assert_eq!(p, rat(1, 17));
        let q = probability(|w| !w.get(x), b, BoundaryCondition::OddOccupied, &int(1)).unwrap();
        assert_eq!(p + q, int(1));
        assert_eq!(
            probability(|_| true, b, BoundaryCondition::OddOccupied, &rat(3, 2)).unwrap(),
            int(1)
        );
    }

    #[test]
    fn exact_distribution_is_normalised() {
        let b = LatticeBox::new(2, 2).unwrap();
        for bc in [BoundaryCondition::Free, BoundaryCondition::OddOccupied, BoundaryCondition::EvenOccupied] {
            let dist = exact_distribution(b, bc, &rat(2, 3)).unwrap();
            let total: Rational = dist.iter().map(|(_, p)| p.clone()).sum();
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn double_counting_examples() {
        let inst = DoubleCountingInstance {
            mu: vec![rat(1, 2), rat(1, 2)],
            event: vec![0],
            images: vec![vec![1]],
            p: int(1),
            q: int(1),
        };
        assert!(check_double_counting(&inst).unwrap());
        let empty = DoubleCountingInstance {
            event: vec![],
            images: vec![],
            ..inst.clone()
        };
        assert!(check_double_counting(&empty).unwrap());
        let broken = DoubleCountingInstance { q: int(3), ..inst };
        assert!(matches!(check_double_counting(&broken), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn double_counting_never_fails_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let size = rng.random_range(1..10);
            let inst = DoubleCountingInstance::random(&mut rng, size);
            assert!(check_double_counting(&inst).unwrap());
        }
    }
}
