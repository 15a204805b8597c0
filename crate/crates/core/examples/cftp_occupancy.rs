//! Perfect sampling by coupling from the past, checked against the exact
//! enumerated measure.

use hardcore::exact;
use hardcore::gibbs::{self, BoundaryCondition};
use hardcore::lattice::{LatticeBox, Vertex};
use hardcore::sampler;

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 2)?;
    let x = Vertex::origin(2);
    let bc = BoundaryCondition::OddOccupied;
    let samples = 20_000;
    for lambda in [exact::rat(1, 2), exact::int(1), exact::int(2)] {
        let exact_p = gibbs::probability(|c| c.at(&x), lattice, bc, &lambda)?;
        let record = sampler::estimate_occupancy(lattice, bc, &lambda, &x, samples, 1)?;
        println!(
            "lambda {}: estimate {:.4} +- {:.4}, exact {} = {:.4}",
            record.lambda,
            record.estimate,
            record.std_error,
            exact::format_fraction(&exact_p),
            exact::to_f64(&exact_p)
        );
    }

    let lambda = exact::int(1);
    let draws: Vec<_> = sampler::cftp_batch(lattice, bc, &lambda, 2, samples)
        .into_iter()
        .collect::<hardcore::Result<Vec<_>>>()?;
    let longest = draws.iter().map(|(_, s)| s.sweeps).max().unwrap_or(0);
    let configs: Vec<_> = draws.into_iter().map(|(c, _)| c).collect();
    let fit = sampler::chi_square_fit(&configs, &gibbs::exact_distribution(lattice, bc, &lambda)?);
    println!(
        "chi-square over {} interior states: {:.2} on {} dof, p = {:.3}; longest run {longest} sweeps",
        fit.dof + 1,
        fit.statistic,
        fit.dof,
        fit.p_value
    );
    println!(
        "monotone coupling over 1000 trials: {}",
        sampler::chain_monotonicity_check(lattice, bc, &lambda, 1000, 3)
    );
    Ok(())
}
