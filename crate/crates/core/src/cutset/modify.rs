use super::break_of;
use crate::error::{Error, Result};
use crate::gibbs::{Configuration, FeasibleConfigurations};
use crate::lattice::Vertex;

pub const DEFAULT_MODIFICATION_GUARD: usize = 24;

/// Which configurations [`interior_modifications`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModificationScope {
    /// Only configurations with the anchor occupied.
    BadEvent,
    /// Every feasible configuration satisfying the odd boundary condition.
    OddBoundary,
}

/// All feasible configurations that agree with `omega` outside the strict
/// interior `A_1 \ E_1` of its `Break` cutset.
pub fn interior_modifications(
    omega: &Configuration,
    x: &Vertex,
    scope: ModificationScope,
    guard: usize,
) -> Result<Vec<Configuration>> {
    let gamma = break_of(omega, x)?;
    let free: Vec<usize> = gamma
        .inner_indices()
        .into_iter()
        .filter(|&i| gamma.p(i) == 0)
        .collect();
    if free.len() > guard {
        return Err(Error::Guard(format!(
            "{} interior vertices exceed the modification guard {guard}",
            free.len()
        )));
    }
    let mut base = omega.clone();
    for &i in &free {
        base.set(i, false);
    }
    let xi = gamma.anchor_index();
    Ok(FeasibleConfigurations::over(base, free)
        .filter(|c| scope == ModificationScope::OddBoundary || c.get(xi))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutset::tests::plus_configuration;

    #[test]
    fn plus_configuration_modifications() {
        let omega = plus_configuration();
        let x = Vertex::origin(2);
        let bad = interior_modifications(&omega, &x, ModificationScope::BadEvent, 24).unwrap();
        assert_eq!(bad, vec![omega.clone()]);
        let all = interior_modifications(&omega, &x, ModificationScope::OddBoundary, 24).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&omega));
        assert!(matches!(
            interior_modifications(&omega, &x, ModificationScope::BadEvent, 0),
            Err(Error::Guard(_))
        ));
    }
}
