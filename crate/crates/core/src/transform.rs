//! The shift map and the two expanding transformations built on it, with
//! their exact measure identities and inversion procedures.

use num_traits::{One, Zero};

use crate::cutset::{break_from_vacancies, break_of, EdgeCutset};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::gibbs::{self, BoundaryCondition, Configuration};
use crate::lattice::{Direction, Vertex};

/// Largest image family that may be materialised.
pub const MAX_FAMILY_BITS: usize = 20;

#[derive(Clone, Debug)]
pub struct ShiftResult {
    pub input: Configuration,
    pub direction: Direction,
    pub output: Configuration,
    pub cutset: EdgeCutset,
}

fn shifted(omega: &Configuration, gamma: &EdgeCutset, j: Direction) -> Configuration {
    let lattice = *omega.lattice();
    let mut out = omega.clone();
    for v in gamma.inner_indices() {
        let value = lattice.step(v, j).is_some_and(|w| omega.get(w));
        out.set(v, value);
    }
    out
}

/// `Shift_j(omega)`: values on `A_1` are pulled back from `v + f_j`.
pub fn shift(omega: &Configuration, x: &Vertex, j: Direction) -> Result<ShiftResult> {
    let gamma = break_of(omega, x)?;
    shift_with(omega, gamma, j)
}

fn shift_with(omega: &Configuration, gamma: EdgeCutset, j: Direction) -> Result<ShiftResult> {
    if j.0 >= 2 * omega.lattice().d {
        return Err(Error::InvalidParameter(format!("direction index {} out of range", j.0)));
    }
    Ok(ShiftResult {
        input: omega.clone(),
        direction: j,
        output: shifted(omega, &gamma, j),
        cutset: gamma,
    })
}

pub fn t1_direction(gamma: &EdgeCutset) -> Direction {
    gamma.t1_direction()
}

pub fn t2_direction(gamma: &EdgeCutset) -> Direction {
    gamma.t2_direction()
}

/// A family `{template with arbitrary bits on free}`.
#[derive(Clone, Debug)]
pub struct ImageFamily {
    pub base: ShiftResult,
    pub free: Vec<usize>,
    pub forced_vacant: Vec<usize>,
    template: Configuration,
}

impl ImageFamily {
    fn new(base: ShiftResult, free: Vec<usize>, forced_vacant: Vec<usize>) -> Self {
        let mut template = base.output.clone();
        for &v in free.iter().chain(&forced_vacant) {
            template.set(v, false);
        }
        ImageFamily {
            base,
            free,
            forced_vacant,
            template,
        }
    }

    /// `2^|free|`.
    pub fn size(&self) -> u128 {
        1u128 << self.free.len()
    }

    /// The member with every free bit vacant.
    pub fn template(&self) -> &Configuration {
        &self.template
    }

    /// Member number `k`: bit `i` of `k` fills `free[i]`.
    pub fn member(&self, k: u64) -> Configuration {
        let mut c = self.template.clone();
        for (i, &v) in self.free.iter().enumerate() {
            if k >> i & 1 == 1 {
                c.set(v, true);
            }
        }
        c
    }

    /// Streams every member; errors when the family exceeds the guard.
    pub fn iter(&self) -> Result<impl Iterator<Item = Configuration> + '_> {
        if self.free.len() > MAX_FAMILY_BITS {
            return Err(Error::Guard(format!(
                "image family of 2^{} members exceeds 2^{MAX_FAMILY_BITS}",
                self.free.len()
            )));
        }
        Ok((0..1u64 << self.free.len()).map(|k| self.member(k)))
    }

    /// Whether `candidate` belongs to the family.
    pub fn contains(&self, candidate: &Configuration) -> bool {
        if candidate.lattice() != self.template.lattice() {
            return false;
        }
        let mut is_free = vec![false; self.template.lattice().len()];
        for &v in &self.free {
            is_free[v] = true;
        }
        self.template
            .lattice()
            .indices()
            .all(|i| is_free[i] || candidate.get(i) == self.template.get(i))
    }

    /// Sum of `lambda^|occupied|` over the family.
    pub fn weight_sum(&self, lambda: &Rational) -> Result<Rational> {
        let mut total = Rational::zero();
        for c in self.iter()? {
            total += gibbs::weight(&c, lambda)?;
        }
        Ok(total)
    }
}

/// `X_j(omega)`: exposed vertices whose `f_j` neighbour is occupied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EraseRecord {
    pub erased: Vec<usize>,
}

/// `T_1(omega)`: shift in the first balanced direction, then free bits on
/// `E_{1,j}`.
pub fn t1_images(omega: &Configuration, x: &Vertex) -> Result<ImageFamily> {
    let gamma = break_of(omega, x)?;
    let j = gamma.t1_direction();
    let free = gamma.e1_dir(j);
    Ok(ImageFamily::new(shift_with(omega, gamma, j)?, free, Vec::new()))
}

/// `T_2(omega)`: shift, erase the exposed vertices, and free bits on the
/// non-exposed part of `E_{1,j}`.
pub fn t2_images(omega: &Configuration, x: &Vertex) -> Result<(ImageFamily, EraseRecord)> {
    let gamma = break_of(omega, x)?;
    let j = gamma.t2_direction();
    let exposed = gamma.exposed();
    let free = gamma.e1_dir(j).into_iter().filter(|&v| !gamma.is_exposed(v)).collect();
    let erased = gamma.erase_set(omega, j);
    let family = ImageFamily::new(shift_with(omega, gamma, j)?, free, exposed);
    Ok((family, EraseRecord { erased }))
}

/// Undoes a shift in direction `j` on `A_1`; `exposed` lists the sites
/// whose pre-image value was erased, with `restore` giving the occupied
/// ones.
fn unshift(omega_prime: &Configuration, gamma: &EdgeCutset, j: Direction, exposed: &[bool], restore: &[usize]) -> Configuration {
    let lattice = *omega_prime.lattice();
    let mut out = omega_prime.clone();
    let back = j.opposite();
    for v in gamma.inner_indices() {
        let value = match lattice.step(v, back) {
            Some(u) if gamma.in_inner(u) && !exposed[u] => omega_prime.get(u),
            Some(u) if gamma.in_inner(u) => restore.contains(&u),
            _ => false,
        };
        out.set(v, value);
    }
    out
}

/// Recovers the unique `omega` in the bad event with `Break(omega) = gamma`
/// and `omega_prime` in `T_1(omega)`, if there is one.
pub fn invert_t1(gamma: &EdgeCutset, omega_prime: &Configuration) -> Option<Configuration> {
    if omega_prime.lattice() != gamma.lattice() {
        return None;
    }
    let j = gamma.t1_direction();
    let no_exposed = vec![false; gamma.lattice().len()];
    let omega = unshift(omega_prime, gamma, j, &no_exposed, &[]);
    if !gibbs::in_bad_event(&omega, gamma.anchor_index()) {
        return None;
    }
    let family = t1_images(&omega, &gamma.anchor()).ok()?;
    (family.base.cutset == *gamma && family.contains(omega_prime)).then_some(omega)
}

/// `E_1 \ E_{1,e} ⊆ E ⊆ A_1`.
pub fn is_interior_approximation(set: &[usize], gamma: &EdgeCutset) -> bool {
    gamma.is_interior_approximation(set)
}

/// Recovers `omega` from an interior approximation `approx` of its cutset,
/// the erase set `erased` and an image `omega_prime` in `T_2(omega)`.
///
/// Every consistency condition is re-checked, so `None` is returned for any
/// triple that is not realised by some configuration of the bad event.
pub fn invert_t2(
    x: &Vertex,
    approx: &[usize],
    erased: &[usize],
    omega_prime: &Configuration,
) -> Option<Configuration> {
    let lattice = *omega_prime.lattice();
    let xi = lattice.index_of(x)?;
    if approx.iter().chain(erased).any(|&v| v >= lattice.len()) {
        return None;
    }
    let mut cleared = omega_prime.clone();
    for &v in approx {
        cleared.set(v, false);
    }
    if !gibbs::satisfies_bc(&cleared, BoundaryCondition::OddOccupied) {
        return None;
    }
    let gamma = break_from_vacancies(&cleared, xi)?;
    let j = gamma.t2_direction();
    let open = gamma.e1_dir_open(j);
    if !erased.iter().all(|v| open.contains(v)) {
        return None;
    }
    let mut exposed = vec![false; lattice.len()];
    for v in gamma.exposed() {
        exposed[v] = true;
    }
    let omega = unshift(omega_prime, &gamma, j, &exposed, erased);
    if !gibbs::in_bad_event(&omega, xi) {
        return None;
    }
    let (family, record) = t2_images(&omega, x).ok()?;
    let mut want = erased.to_vec();
    want.sort_unstable();
    let consistent = family.base.cutset == gamma
        && record.erased == want
        && family.contains(omega_prime)
        && is_interior_approximation(approx, &gamma);
    consistent.then_some(omega)
}

/// `mu^odd(Break = gamma)` against `(1 + lambda)^(-|gamma| / 2d)`.
#[derive(Clone, Debug)]
pub struct BreakBound {
    pub probability: Rational,
    /// `1 + lambda`; the bound is this raised to `-exponent_num / two_d`.
    pub base: Rational,
    pub exponent_num: u64,
    pub two_d: u64,
    pub holds: bool,
}

impl BreakBound {
    pub fn bound_f64(&self) -> f64 {
        exact::to_f64(&self.base).powf(-(self.exponent_num as f64) / self.two_d as f64)
    }
}

/// Exact `mu^odd(Break(omega) = gamma)` by enumeration; the inequality is
/// decided as `p^(2d) (1 + lambda)^|gamma| <= 1`.
pub fn break_probability_bound(gamma: &EdgeCutset, lambda: &Rational, cap: usize) -> Result<BreakBound> {
    if *lambda < Rational::zero() {
        return Err(Error::InvalidParameter("lambda must be non-negative".into()));
    }
    let lattice = *gamma.lattice();
    let x = gamma.anchor();
    let xi = gamma.anchor_index();
    let bc = BoundaryCondition::OddOccupied;
    let mut z = Rational::zero();
    let mut hit = Rational::zero();
    for omega in gibbs::enumerate_feasible(lattice, bc, cap)? {
        let w = gibbs::conditional_weight(&omega, bc, lambda);
        if omega.get(xi) && !w.is_zero() && break_of(&omega, &x)? == *gamma {
            hit += &w;
        }
        z += w;
    }
    let probability = hit / z;
    let base = Rational::one() + lambda;
    let two_d = 2 * lattice.d as u64;
    let exponent_num = gamma.len() as u64;
    let holds = exact::pow(&probability, two_d) * exact::pow(&base, exponent_num) <= Rational::one();
    Ok(BreakBound {
        probability,
        base,
        exponent_num,
        two_d,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::gibbs::clamp_configuration;
    use crate::lattice::LatticeBox;

    fn plus() -> Configuration {
        let b = LatticeBox::new(2, 2).unwrap();
        let mut c = clamp_configuration(b, BoundaryCondition::OddOccupied);
        c.set(b.index_of(&Vertex::origin(2)).unwrap(), true);
        c
    }

    #[test]
    fn shift_of_plus_vacates_anchor() {
        let omega = plus();
        let x = Vertex::origin(2);
        let s = shift(&omega, &x, Direction(0)).unwrap();
        assert!(!s.output.at(&x));
        assert!(s.output.at(&Vertex::new(vec![-1, 0])));
        assert_eq!(s.output.occupied_count(), omega.occupied_count());
        assert!(gibbs::satisfies_bc(&s.output, BoundaryCondition::OddOccupied));
        assert_eq!(gibbs::weight(&s.output, &int(3)).unwrap(), gibbs::weight(&omega, &int(3)).unwrap());
    }

    #[test]
    fn t1_family_of_plus() {
        let omega = plus();
        let fam = t1_images(&omega, &Vertex::origin(2)).unwrap();
        assert_eq!(fam.size(), 8);
        for lambda in [rat(1, 2), int(1), int(2)] {
            let lhs = fam.weight_sum(&lambda).unwrap();
            let rhs = exact::pow(&(int(1) + &lambda), 3) * gibbs::weight(&omega, &lambda).unwrap();
            assert_eq!(lhs, rhs);
        }
        for c in fam.iter().unwrap() {
            assert!(gibbs::satisfies_bc(&c, BoundaryCondition::OddOccupied));
            assert_eq!(invert_t1(&fam.base.cutset, &c), Some(omega.clone()));
        }
    }

    #[test]
    fn t2_family_of_plus_is_a_single_erased_shift() {
        let omega = plus();
        let (fam, record) = t2_images(&omega, &Vertex::origin(2)).unwrap();
        assert_eq!(fam.size(), 1);
        assert_eq!(fam.forced_vacant.len(), 4);
        // the shifted anchor particle lands on (-1,0), which is exposed
        assert_eq!(record.erased.len(), 1);
        let image = fam.member(0);
        let gamma = &fam.base.cutset;
        let approx: Vec<usize> = gamma.e1().iter().copied().filter(|&v| !gamma.is_exposed(v)).collect();
        assert_eq!(invert_t2(&Vertex::origin(2), &approx, &record.erased, &image), Some(omega.clone()));
        assert_eq!(invert_t2(&Vertex::origin(2), &approx, &[], &image), None);
    }

    #[test]
    fn invert_t1_rejects_non_images() {
        let omega = plus();
        let gamma = break_of(&omega, &Vertex::origin(2)).unwrap();
        let b = *omega.lattice();
        let mut bogus = omega.clone();
        bogus.set(b.index_of(&Vertex::origin(2)).unwrap(), false);
        bogus.set(b.index_of(&Vertex::new(vec![1, 1])).unwrap(), true);
        assert_eq!(invert_t1(&gamma, &bogus), None);
    }

    #[test]
    fn break_bound_on_plus() {
        let gamma = break_of(&plus(), &Vertex::origin(2)).unwrap();
        let r = break_probability_bound(&gamma, &int(1), 30).unwrap();
        assert_eq!(r.probability, rat(1, 17));
        assert!(r.holds);
        assert_eq!(r.bound_f64(), 0.125);
        let zero = break_probability_bound(&gamma, &int(0), 30).unwrap();
        assert_eq!(zero.probability, int(0));
        assert!(zero.holds);
    }

    #[test]
    fn interior_approximation_predicate() {
        let gamma = break_of(&plus(), &Vertex::origin(2)).unwrap();
        assert!(is_interior_approximation(&[], &gamma));
        assert!(is_interior_approximation(&gamma.inner_indices(), &gamma));
        let outside = gamma.e0()[0];
        assert!(!is_interior_approximation(&[outside], &gamma));
    }
}
