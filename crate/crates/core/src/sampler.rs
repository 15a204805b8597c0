//! Heat-bath dynamics and monotone coupling from the past.
//!
//! The chain updates one uniformly chosen free site per step; a sweep is as
//! many steps as there are free sites. Sweep `t` of sample `k` draws from
//! the ChaCha stream `(k << 32) | t` of the run seed, so every epoch of the
//! doubling scheme replays exactly the same randomness.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::cutset::{outer_vacancy_component, region_behind, EdgeCutset};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::gibbs::{self, BoundaryCondition, Configuration};
use crate::lattice::{LatticeBox, Parity, Vertex};

/// Coalescence cap in sweeps.
pub const MAX_SWEEPS: u64 = 1 << 24;

fn occupation_probability(lambda: &Rational) -> f64 {
    let l = exact::to_f64(lambda);
    if l.is_infinite() {
        1.0
    } else {
        l / (1.0 + l)
    }
}

/// One heat-bath update at `site` driven by the uniform `u`.
pub fn heat_bath_update(omega: &mut Configuration, site: usize, u: f64, p_occupy: f64) {
    let blocked = omega.lattice().neighbor_indices(site).any(|w| omega.get(w));
    omega.set(site, !blocked && u < p_occupy);
}

#[derive(Clone, Debug)]
pub struct ChainState {
    pub config: Configuration,
    pub steps: u64,
    rng: ChaCha8Rng,
    sites: Vec<usize>,
}

impl ChainState {
    pub fn new(config: Configuration, bc: BoundaryCondition, seed: u64) -> Result<Self> {
        if !gibbs::satisfies_bc(&config, bc) {
            return Err(Error::BoundaryUnsatisfied);
        }
        let sites = gibbs::free_vertices(config.lattice(), bc);
        Ok(ChainState {
            config,
            steps: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            sites,
        })
    }
}

/// One random-site heat-bath step.
pub fn glauber_step(state: &mut ChainState, lambda: &Rational) {
    state.steps += 1;
    if state.sites.is_empty() {
        return;
    }
    let site = state.sites[state.rng.random_range(0..state.sites.len())];
    let u: f64 = state.rng.random();
    heat_bath_update(&mut state.config, site, u, occupation_probability(lambda));
}

/// `a ⪯ b`: `a ≤ b` on even vertices and `a ≥ b` on odd ones.
pub fn precedes(a: &Configuration, b: &Configuration) -> bool {
    let lattice = a.lattice();
    lattice.indices().all(|i| match lattice.parity_of(i) {
        Parity::Even => !a.get(i) || b.get(i),
        Parity::Odd => a.get(i) || !b.get(i),
    })
}

/// Maximal (`top`) or minimal configuration under `⪯` respecting `bc`.
pub fn extremal_state(lattice: LatticeBox, bc: BoundaryCondition, top: bool) -> Configuration {
    let mut c = gibbs::clamp_configuration(lattice, bc);
    let favoured = if top { Parity::Even } else { Parity::Odd };
    for i in gibbs::free_vertices(&lattice, bc) {
        if lattice.parity_of(i) == favoured {
            c.set(i, true);
        }
    }
    c
}

/// Flat neighbour table and site list shared by the coupled chains.
struct Coupler {
    sites: Vec<usize>,
    neighbours: Vec<usize>,
    degree: Vec<u8>,
    width: usize,
    p_occupy: f64,
    seed: u64,
    index: u64,
}

impl Coupler {
    fn new(lattice: LatticeBox, bc: BoundaryCondition, lambda: &Rational, seed: u64, index: u64) -> Self {
        let width = 2 * lattice.d;
        let mut neighbours = vec![0; lattice.len() * width];
        let mut degree = vec![0u8; lattice.len()];
        for i in lattice.indices() {
            for (k, w) in lattice.neighbor_indices(i).enumerate() {
                neighbours[i * width + k] = w;
                degree[i] = k as u8 + 1;
            }
        }
        Coupler {
            sites: gibbs::free_vertices(&lattice, bc),
            neighbours,
            degree,
            width,
            p_occupy: occupation_probability(lambda),
            seed,
            index,
        }
    }

    fn update(&self, state: &mut [u8], site: usize, u: f64) {
        let row = &self.neighbours[site * self.width..site * self.width + self.degree[site] as usize];
        let blocked = row.iter().any(|&w| state[w] != 0);
        state[site] = (!blocked && u < self.p_occupy) as u8;
    }

    fn sweep(&self, top: &mut [u8], bottom: &mut [u8], t: u64) {
        if self.sites.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index << 32 | t);
        for _ in 0..self.sites.len() {
            let site = self.sites[rng.random_range(0..self.sites.len())];
            let u: f64 = rng.random();
            self.update(top, site, u);
            self.update(bottom, site, u);
        }
    }
}

fn to_bytes(c: &Configuration) -> Vec<u8> {
    c.bits().iter().map(|&b| b as u8).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CftpStats {
    pub epochs: u32,
    pub sweeps: u64,
}

/// Sample number `index` of the stream identified by `seed`.
pub fn cftp_sample_indexed(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    lambda: &Rational,
    seed: u64,
    index: u64,
) -> Result<(Configuration, CftpStats)> {
    if *lambda < Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("lambda must be non-negative".into()));
    }
    if index >= 1 << 32 {
        return Err(Error::InvalidParameter("sample index exceeds 2^32".into()));
    }
    let coupler = Coupler::new(lattice, bc, lambda, seed, index);
    let top_start = to_bytes(&extremal_state(lattice, bc, true));
    let bottom_start = to_bytes(&extremal_state(lattice, bc, false));
    let mut horizon = 1u64;
    let mut epochs = 0u32;
    loop {
        epochs += 1;
        let mut top = top_start.clone();
        let mut bottom = bottom_start.clone();
        for t in (1..=horizon).rev() {
            coupler.sweep(&mut top, &mut bottom, t);
        }
        if top == bottom {
            let config = Configuration::from_bits(lattice, top.into_iter().map(|b| b != 0).collect())?;
            return Ok((config, CftpStats { epochs, sweeps: horizon }));
        }
        if horizon >= MAX_SWEEPS {
            return Err(Error::Coalescence { epoch: epochs, sweeps: horizon });
        }
        horizon *= 2;
    }
}

/// An exact sample from the hard-core measure on `lattice` given `bc`.
pub fn cftp_sample(lattice: LatticeBox, bc: BoundaryCondition, lambda: &Rational, seed: u64) -> Result<Configuration> {
    cftp_sample_indexed(lattice, bc, lambda, seed, 0).map(|(c, _)| c)
}

/// Samples `0..count` of the stream `seed`, computed in parallel and
/// returned in index order.
pub fn cftp_batch(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    lambda: &Rational,
    seed: u64,
    count: u64,
) -> Vec<Result<(Configuration, CftpStats)>> {
    (0..count)
        .into_par_iter()
        .map(|k| cftp_sample_indexed(lattice, bc, lambda, seed, k))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub target: String,
    pub estimate: f64,
    pub samples: u64,
    pub std_error: f64,
    pub failures: u64,
    pub seed: u64,
    pub d: usize,
    pub n: usize,
    pub lambda: String,
    pub bc: String,
    pub x: String,
}

/// `P(omega(x) = 1)` from `samples` independent perfect samples.
pub fn estimate_occupancy(
    lattice: LatticeBox,
    bc: BoundaryCondition,
    lambda: &Rational,
    x: &Vertex,
    samples: u64,
    seed: u64,
) -> Result<EstimateRecord> {
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is required".into()));
    }
    lattice.check_dim(x)?;
    let xi = lattice.index_of(x).ok_or_else(|| Error::OutsideBox(x.clone()))?;
    let (hits, ok) = (0..samples)
        .into_par_iter()
        .map(|k| match cftp_sample_indexed(lattice, bc, lambda, seed, k) {
            Ok((c, _)) => (c.get(xi) as u64, 1u64),
            Err(_) => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let p = if ok == 0 { f64::NAN } else { hits as f64 / ok as f64 };
    Ok(EstimateRecord {
        target: format!("P(omega{x} = 1)"),
        estimate: p,
        samples: ok,
        std_error: (p * (1.0 - p) / ok as f64).sqrt(),
        failures: samples - ok,
        seed,
        d: lattice.d,
        n: lattice.n,
        lambda: exact::format_fraction(lambda),
        bc: bc.name().to_string(),
        x: x.to_string(),
    })
}

pub fn write_estimates_csv<W: Write>(rows: &[EstimateRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square of sampled configurations against an exact
/// distribution. Samples outside the support make the fit fail outright.
pub fn chi_square_fit(samples: &[Configuration], exact_dist: &[(Configuration, Rational)]) -> GoodnessOfFit {
    let index: HashMap<&[bool], usize> = exact_dist
        .iter()
        .enumerate()
        .map(|(i, (c, _))| (c.bits(), i))
        .collect();
    let mut counts = vec![0u64; exact_dist.len()];
    let mut stray = 0u64;
    for s in samples {
        match index.get(s.bits()) {
            Some(&i) => counts[i] += 1,
            None => stray += 1,
        }
    }
    let n = samples.len() as f64;
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for ((_, p), &k) in exact_dist.iter().zip(&counts) {
        let expected = n * exact::to_f64(p);
        if expected > 0.0 {
            statistic += (k as f64 - expected).powi(2) / expected;
            cells += 1;
        } else if k > 0 {
            stray += k;
        }
    }
    let dof = cells.saturating_sub(1).max(1);
    let p_value = if stray > 0 {
        0.0
    } else {
        ChiSquared::new(dof as f64).map_or(f64::NAN, |chi| 1.0 - chi.cdf(statistic))
    };
    GoodnessOfFit { statistic, dof, p_value }
}

fn random_feasible(lattice: LatticeBox, bc: BoundaryCondition, rng: &mut ChaCha8Rng) -> Configuration {
    let mut c = gibbs::clamp_configuration(lattice, bc);
    let mut sites = gibbs::free_vertices(&lattice, bc);
    sites.shuffle(rng);
    for s in sites {
        if rng.random_bool(0.5) && lattice.neighbor_indices(s).all(|w| !c.get(w)) {
            c.set(s, true);
        }
    }
    c
}

/// Draws random pairs `a ⪯ b` and checks that one shared update keeps
/// them ordered.
pub fn chain_monotonicity_check(lattice: LatticeBox, bc: BoundaryCondition, lambda: &Rational, trials: u64, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = gibbs::free_vertices(&lattice, bc);
    if sites.is_empty() {
        return true;
    }
    let p = occupation_probability(lambda);
    for _ in 0..trials {
        let low = random_feasible(lattice, bc, &mut rng);
        let mut high = low.clone();
        for &s in &sites {
            if lattice.parity_of(s) == Parity::Odd && high.get(s) && rng.random_bool(0.5) {
                high.set(s, false);
            }
        }
        for &s in &sites {
            if lattice.parity_of(s) == Parity::Even
                && !high.get(s)
                && rng.random_bool(0.5)
                && lattice.neighbor_indices(s).all(|w| !high.get(w))
            {
                high.set(s, true);
            }
        }
        debug_assert!(precedes(&low, &high));
        let site = sites[rng.random_range(0..sites.len())];
        let u: f64 = rng.random();
        let (mut a, mut b) = (low, high);
        heat_bath_update(&mut a, site, u, p);
        heat_bath_update(&mut b, site, u, p);
        if !precedes(&a, &b) {
            return false;
        }
    }
    true
}

/// Fraction of non-boundary odd vertices that are occupied.
pub fn odd_occupied_fraction(omega: &Configuration) -> f64 {
    let lattice = omega.lattice();
    let (mut occupied, mut total) = (0u64, 0u64);
    for i in lattice.indices() {
        if lattice.parity_of(i) == Parity::Odd && !lattice.is_boundary(i) {
            total += 1;
            occupied += omega.get(i) as u64;
        }
    }
    if total == 0 {
        0.0
    } else {
        occupied as f64 / total as f64
    }
}

/// The `Break` cutsets of every occupied even vertex, one per distinct
/// inner region.
pub fn all_breaks(omega: &Configuration) -> Result<Vec<EdgeCutset>> {
    if !gibbs::satisfies_bc(omega, BoundaryCondition::OddOccupied) {
        return Err(Error::BoundaryUnsatisfied);
    }
    let lattice = omega.lattice();
    let outer = outer_vacancy_component(omega);
    let mut covered = vec![false; lattice.len()];
    let mut out = Vec::new();
    for x in omega.occupied_indices() {
        if lattice.parity_of(x) != Parity::Even || covered[x] {
            continue;
        }
        if let Some(gamma) = region_behind(lattice, &outer, x) {
            for i in gamma.inner_indices() {
                covered[i] = true;
            }
            out.push(gamma);
        }
    }
    Ok(out)
}

const CELL: f64 = 12.0;
const MARGIN: f64 = 12.0;

/// SVG document of a planar configuration: occupied sites coloured by
/// parity, boundary sites marked, and each cutset edge drawn as the dual
/// unit segment crossing it.
pub fn render_snapshot(omega: &Configuration, overlays: &[EdgeCutset]) -> Result<String> {
    let lattice = omega.lattice();
    if lattice.d != 2 {
        return Err(Error::RenderDimension(lattice.d));
    }
    let n = lattice.n as f64;
    let side = 2.0 * n * CELL + 2.0 * MARGIN;
    let px = |c: f64| MARGIN + (c + n) * CELL;
    let py = |c: f64| MARGIN + (n - c) * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for i in lattice.indices() {
        let v = lattice.vertex(i);
        let (x, y) = (px(v.coords()[0] as f64), py(v.coords()[1] as f64));
        if lattice.is_boundary(i) {
            let _ = writeln!(
                s,
                r##"<rect class="boundary" x="{:.1}" y="{:.1}" width="4" height="4" fill="none" stroke="#999999"/>"##,
                x - 2.0,
                y - 2.0
            );
        }
        if omega.get(i) {
            let (class, colour) = match lattice.parity_of(i) {
                Parity::Even => ("even", "#1f77b4"),
                Parity::Odd => ("odd", "#d62728"),
            };
            let _ = writeln!(
                s,
                r#"<circle class="{class}" cx="{x:.1}" cy="{y:.1}" r="{:.1}" fill="{colour}"/>"#,
                CELL * 0.4
            );
        }
    }
    for gamma in overlays {
        for (a, b) in gamma.edge_keys() {
            let (va, vb) = (lattice.vertex(*a), lattice.vertex(*b));
            let mx = (va.coords()[0] + vb.coords()[0]) as f64 / 2.0;
            let my = (va.coords()[1] + vb.coords()[1]) as f64 / 2.0;
            let horizontal_edge = va.coords()[1] == vb.coords()[1];
            let (x1, y1, x2, y2) = if horizontal_edge {
                (mx, my - 0.5, mx, my + 0.5)
            } else {
                (mx - 0.5, my, mx + 0.5, my)
            };
            let _ = writeln!(
                s,
                r##"<line class="cutset" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#000000" stroke-width="2"/>"##,
                px(x1),
                py(y1),
                px(x2),
                py(y2)
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutset::break_of;
    use crate::exact::{int, rat};

    fn small() -> LatticeBox {
        LatticeBox::new(2, 2).unwrap()
    }

    #[test]
    fn heat_bath_respects_neighbours() {
        let b = small();
        let mut c = Configuration::from_occupied(b, &[Vertex::new(vec![1, 0])]).unwrap();
        let x = b.index_of(&Vertex::origin(2)).unwrap();
        heat_bath_update(&mut c, x, 0.0, 1.0);
        assert!(!c.get(x));
    }

    #[test]
    fn zero_activity_vacates() {
        let b = small();
        let top = extremal_state(b, BoundaryCondition::Free, true);
        let mut state = ChainState::new(top, BoundaryCondition::Free, 3).unwrap();
        for _ in 0..2000 {
            glauber_step(&mut state, &int(0));
        }
        assert_eq!(state.config.occupied_count(), 0);
        let c = cftp_sample(b, BoundaryCondition::OddOccupied, &int(0), 5).unwrap();
        assert_eq!(c, gibbs::clamp_configuration(b, BoundaryCondition::OddOccupied));
    }

    #[test]
    fn extremal_states_bracket() {
        for bc in [BoundaryCondition::Free, BoundaryCondition::OddOccupied, BoundaryCondition::EvenOccupied] {
            let top = extremal_state(small(), bc, true);
            let bottom = extremal_state(small(), bc, false);
            assert!(gibbs::satisfies_bc(&top, bc));
            assert!(gibbs::satisfies_bc(&bottom, bc));
            assert!(precedes(&bottom, &top));
        }
    }

    #[test]
    fn cftp_is_deterministic_and_valid() {
        let a = cftp_sample(small(), BoundaryCondition::OddOccupied, &int(1), 42).unwrap();
        let b = cftp_sample(small(), BoundaryCondition::OddOccupied, &int(1), 42).unwrap();
        assert_eq!(a, b);
        assert!(gibbs::satisfies_bc(&a, BoundaryCondition::OddOccupied));
    }

    #[test]
    fn long_chain_matches_oracle() {
        let b = small();
        let bc = BoundaryCondition::OddOccupied;
        let exact_p = gibbs::probability(|c| c.at(&Vertex::origin(2)), b, bc, &int(1)).unwrap();
        assert_eq!(exact_p, rat(1, 17));
        let mut state = ChainState::new(extremal_state(b, bc, true), bc, 9).unwrap();
        let x = b.index_of(&Vertex::origin(2)).unwrap();
        let (mut hits, total) = (0u64, 400_000u64);
        for _ in 0..total {
            glauber_step(&mut state, &int(1));
            hits += state.config.get(x) as u64;
        }
        let p = hits as f64 / total as f64;
        // correlated samples: allow a generous band around 1/17
        assert!((p - 1.0 / 17.0).abs() < 0.01, "p = {p}");
    }

    #[test]
    fn monotonicity_small() {
        for lambda in [int(0), int(1), int(5)] {
            assert!(chain_monotonicity_check(small(), BoundaryCondition::OddOccupied, &lambda, 2000, 1));
            assert!(chain_monotonicity_check(small(), BoundaryCondition::Free, &lambda, 2000, 2));
        }
    }

    #[test]
    fn estimate_record_fields() {
        let r = estimate_occupancy(small(), BoundaryCondition::OddOccupied, &int(1), &Vertex::origin(2), 1, 4).unwrap();
        assert!(r.estimate == 0.0 || r.estimate == 1.0);
        assert_eq!(r.samples, 1);
        let again = estimate_occupancy(small(), BoundaryCondition::OddOccupied, &int(1), &Vertex::origin(2), 1, 4).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn snapshot_documents() {
        let b = small();
        let empty = render_snapshot(&Configuration::vacant(b), &[]).unwrap();
        assert_eq!(empty.matches("class=\"boundary\"").count(), 16);
        assert!(!empty.contains("<circle"));
        let mut c = gibbs::clamp_configuration(b, BoundaryCondition::OddOccupied);
        c.set(b.index_of(&Vertex::origin(2)).unwrap(), true);
        let gamma = break_of(&c, &Vertex::origin(2)).unwrap();
        let doc = render_snapshot(&c, &[gamma]).unwrap();
        assert_eq!(doc.matches("class=\"cutset\"").count(), 12);
        assert_eq!(all_breaks(&c).unwrap().len(), 1);
        let cube = LatticeBox::new(3, 1).unwrap();
        assert!(matches!(render_snapshot(&Configuration::vacant(cube), &[]), Err(Error::RenderDimension(3))));
    }

    #[test]
    fn chi_square_flags_stray_samples() {
        let b = small();
        let dist = gibbs::exact_distribution(b, BoundaryCondition::OddOccupied, &int(1)).unwrap();
        let fit = chi_square_fit(&[Configuration::vacant(b)], &dist);
        assert_eq!(fit.p_value, 0.0);
    }
}
