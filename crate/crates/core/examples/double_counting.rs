//! The counting lemmas: connected subsets of bounded-degree graphs, the
//! double-counting bound and the direction-code census.

use hardcore::approx;
use hardcore::cutset::{self, SimpleGraph};
use hardcore::gibbs::{self, DoubleCountingInstance};
use hardcore::lattice::{LatticeBox, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hardcore::Result<()> {
    let mut grid = SimpleGraph::new(16);
    for r in 0..4 {
        for c in 0..4 {
            let i = r * 4 + c;
            if c < 3 {
                grid.add_edge(i, i + 1)?;
            }
            if r < 3 {
                grid.add_edge(i, i + 4)?;
            }
        }
    }
    let delta = grid.max_degree() as u64;
    for m in 1..=6 {
        let count = cutset::count_connected_sets(&grid, 5, m)?;
        println!("4x4 grid, M = {m}: {count} connected sets through vertex 5 (bound {})", delta.pow(2 * m as u32 - 2));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut holds = 0;
    for _ in 0..100 {
        let inst = DoubleCountingInstance::random(&mut rng, 8);
        holds += gibbs::check_double_counting(&inst)? as usize;
    }
    println!("double-counting bound held on {holds}/100 random instances");

    let lattice = LatticeBox::new(2, 3)?;
    let x = Vertex::origin(2);
    let set = vec![Vertex::new(vec![1, 0])];
    for r in 0..=4 {
        let c = approx::census_ngamma(r, &set, lattice, &x)?;
        println!("N(R = {r}, E = {{(1,0)}}) = {} <= {}", c.count, c.bound);
    }
    Ok(())
}
