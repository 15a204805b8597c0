//! Typical configurations with odd boundary on [-20,20]^2 at activities 1
//! and 5, written as SVG with their Break cutsets drawn on top.
//!
//! Usage: `cargo run --release --example fig1_snapshots [out-dir]`

use std::path::PathBuf;

use hardcore::exact;
use hardcore::gibbs::BoundaryCondition;
use hardcore::lattice::LatticeBox;
use hardcore::sampler;

fn main() -> hardcore::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fig1".into()));
    std::fs::create_dir_all(&out)?;
    let lattice = LatticeBox::new(2, 20)?;
    for lambda in [1, 5] {
        let (omega, stats) =
            sampler::cftp_sample_indexed(lattice, BoundaryCondition::OddOccupied, &exact::int(lambda), 2024, 0)?;
        let breaks = sampler::all_breaks(&omega)?;
        let path = out.join(format!("fig1-lambda{lambda}.svg"));
        std::fs::write(&path, sampler::render_snapshot(&omega, &breaks)?)?;
        println!(
            "lambda {lambda}: odd fraction {:.3}, {} Break cutsets, coalesced after {} sweeps -> {}",
            sampler::odd_occupied_fraction(&omega),
            breaks.len(),
            stats.sweeps,
            path.display()
        );
    }
    Ok(())
}
