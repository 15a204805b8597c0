//! Brute-force enumeration of odd minimal cutsets around the origin.

use std::collections::BTreeMap;

use hardcore::cutset::{self, CutsetRecord};
use hardcore::exact;
use hardcore::lattice::{LatticeBox, Vertex};

fn main() -> hardcore::Result<()> {
    let x = Vertex::origin(2);
    for n in 2..=cutset::OMCUT_MAX_N {
        let lattice = LatticeBox::new(2, n)?;
        let all = cutset::enumerate_omcut(lattice, &x)?;
        println!("box {lattice}: {} odd minimal cutsets", all.len());
        let mut by_shape: BTreeMap<(usize, usize, u64), usize> = BTreeMap::new();
        for gamma in &all {
            *by_shape.entry((gamma.len(), gamma.e1().len(), gamma.regularity(gamma.e1()))).or_default() += 1;
        }
        println!("  {:>4} {:>4} {:>4} {:>6}", "L", "M", "R", "count");
        for ((l, m, r), count) in by_shape {
            println!("  {l:>4} {m:>4} {r:>4} {count:>6}");
        }
        for eps in [exact::rat(1, 10), exact::rat(1, 4), exact::rat(1, 2)] {
            let members = all
                .iter()
                .map(|g| cutset::omcut_class(g, &eps))
                .collect::<hardcore::Result<Vec<bool>>>()?
                .into_iter()
                .filter(|&b| b)
                .count();
            println!("  OMCut({}): {members}", exact::format_fraction(&eps));
        }
    }
    let smallest = &cutset::enumerate_omcut(LatticeBox::new(2, 3)?, &x)?[0];
    println!("smallest: {}", serde_json::to_string(&CutsetRecord::from(smallest))?);
    Ok(())
}
