//! The Break cutset of configurations in the bad event, with statistics.

use hardcore::cutset::{self, CutsetRecord};
use hardcore::exact;
use hardcore::gibbs::{self, DEFAULT_ENUMERATION_CAP};
use hardcore::lattice::{LatticeBox, Vertex};

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 3)?;
    let x = Vertex::origin(2);
    let omegas = gibbs::bad_event_configurations(lattice, &x, DEFAULT_ENUMERATION_CAP)?;
    println!("{} configurations have the odd boundary and the origin occupied", omegas.len());

    let sparse = omegas.iter().min_by_key(|c| c.occupied_count()).expect("non-empty");
    let dense = omegas.iter().max_by_key(|c| c.occupied_count()).expect("non-empty");
    for omega in [sparse, dense] {
        let gamma = cutset::break_of(omega, &x)?;
        println!("\n{} occupied sites in total", omega.occupied_count());
        println!(
            "|Gamma| = {}, minimal: {}, odd: {}",
            gamma.len(),
            cutset::is_minimal_cutset(&gamma)?,
            cutset::is_odd_cutset(&gamma)
        );
        println!("E_0 = {:?}", gamma.e0_vertices());
        println!("E_1 = {:?}", gamma.e1_vertices());
        println!("T1 direction {}, T2 direction {}", gamma.t1_direction(), gamma.t2_direction());
        println!("{}", serde_json::to_string(&CutsetRecord::from(&gamma))?);
        let class = cutset::omega_class(omega, &x, &exact::rat(1, 2))?;
        println!("class at beta = 1/2: {}", serde_json::to_string(&class)?);
    }
    Ok(())
}
