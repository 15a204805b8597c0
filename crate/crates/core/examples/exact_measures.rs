//! Exhaustive partition functions and exact probabilities.

use hardcore::exact::{self, format_decimal, format_fraction};
use hardcore::gibbs::{self, BoundaryCondition, DEFAULT_ENUMERATION_CAP};
use hardcore::lattice::{LatticeBox, Vertex};

fn main() -> hardcore::Result<()> {
    let path = LatticeBox::new(1, 1)?;
    let count = gibbs::enumerate_feasible(path, BoundaryCondition::Free, DEFAULT_ENUMERATION_CAP)?.count();
    println!("independent sets of a 3-vertex path: {count}");

    let grid = LatticeBox::new(2, 1)?;
    let count = gibbs::enumerate_feasible(grid, BoundaryCondition::Free, DEFAULT_ENUMERATION_CAP)?.count();
    println!("independent sets of the 3x3 grid: {count}");

    let lattice = LatticeBox::new(2, 2)?;
    let x = Vertex::origin(2);
    for lambda in [exact::rat(1, 2), exact::int(1), exact::int(2)] {
        for bc in [BoundaryCondition::Free, BoundaryCondition::OddOccupied, BoundaryCondition::EvenOccupied] {
            let z = gibbs::partition_function(lattice, bc, &lambda)?;
            let p = gibbs::probability(|c| c.at(&x), lattice, bc, &lambda)?;
            println!(
                "lambda {:>3}, {bc:>13}: Z = {:>12}, P(origin occupied) = {} = {}",
                format_fraction(&lambda),
                format_fraction(&z),
                format_fraction(&p),
                format_decimal(&p)
            );
        }
    }
    Ok(())
}
