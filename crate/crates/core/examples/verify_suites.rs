//! Runs every exhaustive invariant suite on [-3,3]^2 and prints the report.

use hardcore::exact;
use hardcore::lattice::{LatticeBox, Vertex};
use hardcore::verify;

fn main() -> hardcore::Result<()> {
    let lattice = LatticeBox::new(2, 3)?;
    let x = Vertex::origin(2);
    let lambdas = [exact::rat(1, 2), exact::int(1), exact::int(2)];
    let reports = [
        verify::break_suite(lattice, &x)?,
        verify::transform_suite(lattice, &x, &lambdas)?,
        verify::break_bound_suite(lattice, &x, &lambdas)?,
        verify::approx_suite(lattice, &x, &[exact::rat(3, 10), exact::rat(1, 2)], 5, 0)?,
        verify::counting_suite(0)?,
    ];
    for r in &reports {
        print!("{}", r.render());
    }
    let ok = reports.iter().all(|r| r.passed());
    println!("all suites passed: {ok}");
    if !ok {
        std::process::exit(1);
    }
    Ok(())
}
