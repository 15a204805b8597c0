//! Dominating sets, direction codes and reconstruction of an interior
//! approximation, plus the family census.

use hardcore::approx::{self, EpsilonParam};
use hardcore::cutset;
use hardcore::exact;
use hardcore::lattice::{LatticeBox, Vertex};

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 3)?;
    let x = Vertex::origin(2);
    let eps_value = exact::rat(3, 10);
    // d = 2 leaves the range d^(-1/2) <= eps <= 1/2 empty, so the
    // extended regime is required.
    let eps = EpsilonParam::extended(eps_value.clone(), 2)?;

    let cutsets = cutset::enumerate_omcut(lattice, &x)?;
    let gamma = cutsets.last().expect("non-empty");
    println!("cutset with |Gamma| = {}, |E_0| = {}, |E_1| = {}", gamma.len(), gamma.e0().len(), gamma.e1().len());

    let v = gamma.e1_vertices()[0].clone();
    let u = approx::u_sets(gamma, 1, &v, &eps);
    println!("U-sets of {v}: |U_1| = {}, |U_2| = {}, |U_3| = {}", u.u1.len(), u.u2.len(), u.u3.len());

    let sets = approx::dominating_sets(gamma, &eps, 42, approx::DEFAULT_RETRY_CAP)?;
    println!(
        "dominating sets after {} round(s): |E_0^t| = {}, |E_1^t| = {}, conditions {:?}",
        sets.attempts,
        sets.outer.len(),
        sets.inner.len(),
        approx::check_dominating(gamma, &eps, &sets.outer, &sets.inner)
    );

    let input = approx::ApproxInput::from_cutset(gamma, &eps, &sets)?;
    let e = approx::interior_approx(&input)?;
    println!(
        "reconstructed {} vertices; interior approximation: {}, within bounds: {}",
        e.len(),
        approx::is_interior_approx(&e, gamma),
        approx::satisfies_reconstruction_bounds(&e, gamma, &eps_value)
    );

    for eps in [exact::rat(3, 10), exact::rat(1, 2)] {
        let eps = EpsilonParam::extended(eps, 2)?;
        for l in [20, 28] {
            let row = approx::family_census(lattice, &x, &eps, l, 42)?;
            println!(
                "eps {}, L = {l}: {} cutsets, {} distinct approximations",
                row.epsilon, row.cutsets, row.distinct_approximations
            );
        }
    }
    Ok(())
}
