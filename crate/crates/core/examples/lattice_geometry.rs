//! Boxes, parity, the boundary shell and graph powers.

use hardcore::lattice::{self, Direction, LatticeBox, NeighborMode, Vertex};

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 2)?;
    println!("box {lattice}: {} vertices", lattice.len());

    let x = Vertex::origin(2);
    println!("{x} is {:?}", lattice::parity(&x));
    for j in Direction::all(2) {
        println!("  f_{} = {j}: {} (opposite {})", j.label(), x.step(j), j.opposite());
    }

    let corner = Vertex::new(vec![2, 2]);
    println!("in-box neighbours of {corner}: {:?}", lattice.neighbors(&corner, NeighborMode::InBox)?);
    println!("Z^2 neighbours of {corner}: {:?}", lattice.neighbors(&corner, NeighborMode::Infinite)?);

    let shell = lattice::boundary_set(&lattice);
    println!("boundary shell has {} vertices", shell.len());

    let far = Vertex::new(vec![2, -1]);
    println!("distance {x} -> {far}: {}", lattice::graph_distance(&x, &far)?);

    let diagonal = vec![Vertex::new(vec![0, 0]), Vertex::new(vec![1, 1]), Vertex::new(vec![2, 2])];
    println!(
        "diagonal connected in G: {}, in G^2: {}",
        lattice::connected_in_power(&diagonal, 1),
        lattice::connected_in_power(&diagonal, 2)
    );
    Ok(())
}
