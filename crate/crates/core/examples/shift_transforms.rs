//! Shift, the expanding transformations and their inversions, with the
//! exact weight identities.

use hardcore::exact::{self, format_fraction};
use hardcore::gibbs::{self, DEFAULT_ENUMERATION_CAP};
use hardcore::lattice::{Direction, LatticeBox, Vertex};
use hardcore::transform;

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 3)?;
    let x = Vertex::origin(2);
    let omegas = gibbs::bad_event_configurations(lattice, &x, DEFAULT_ENUMERATION_CAP)?;
    let omega = omegas.iter().max_by_key(|c| c.occupied_count()).expect("non-empty");

    for j in Direction::all(2) {
        let s = transform::shift(omega, &x, j)?;
        println!("Shift {j}: {} -> {} occupied", omega.occupied_count(), s.output.occupied_count());
    }

    let lambda = exact::rat(1, 2);
    let t1 = transform::t1_images(omega, &x)?;
    let gamma = &t1.base.cutset;
    let lhs = t1.weight_sum(&lambda)?;
    let rhs = exact::pow(&(exact::one() + &lambda), t1.free.len() as u64) * gibbs::weight(omega, &lambda)?;
    println!(
        "T1 in direction {}: {} images, weight {} = (1+lambda)^{} w(omega) = {}",
        t1.base.direction,
        t1.size(),
        format_fraction(&lhs),
        t1.free.len(),
        format_fraction(&rhs)
    );
    let recovered = t1.iter()?.all(|image| transform::invert_t1(gamma, &image).as_ref() == Some(omega));
    println!("every T1 image inverts to omega: {recovered}");

    let (t2, record) = transform::t2_images(omega, &x)?;
    let approx: Vec<usize> = gamma.e1().iter().copied().filter(|&v| !gamma.is_exposed(v)).collect();
    println!(
        "T2 in direction {}: {} images, {} exposed sites erased",
        t2.base.direction,
        t2.size(),
        record.erased.len()
    );
    let recovered = t2
        .iter()?
        .all(|image| transform::invert_t2(&x, &approx, &record.erased, &image).as_ref() == Some(omega));
    println!("every T2 image inverts to omega from (E, X, image): {recovered}");

    let bound = transform::break_probability_bound(gamma, &exact::int(1), DEFAULT_ENUMERATION_CAP)?;
    println!(
        "P(Break = Gamma) = {} <= (1+lambda)^(-|Gamma|/2d) = {:.6}: {}",
        format_fraction(&bound.probability),
        bound.bound_f64(),
        bound.holds
    );
    Ok(())
}
