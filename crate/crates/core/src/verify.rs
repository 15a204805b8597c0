//! Exhaustive invariant suites over small boxes.
//!
//! Each suite walks every relevant configuration or cutset, tallies one
//! counter per property and keeps the first counterexample it meets. The
//! suites back the `verify` subcommand and the acceptance harness.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{self, EpsilonParam};
use crate::cutset::{
    self, break_from_vacancies, count_connected_sets, enumerate_omcut, interior_modifications, EdgeCutset,
    ModificationScope, SimpleGraph, DEFAULT_MODIFICATION_GUARD, OMCUT_MAX_N,
};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::gibbs::{self, Configuration, DoubleCountingInstance, DEFAULT_ENUMERATION_CAP};
use crate::lattice::{self, Direction, LatticeBox, Parity, Vertex};
use crate::transform;

/// Largest box side the exhaustive suites accept.
pub const MAX_SUITE_N: usize = OMCUT_MAX_N;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Observations that are reported but not asserted.
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0 && c.cases > 0)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }

    /// Records one case of check `name`; `detail` is evaluated only for the
    /// first failure.
    pub fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let pos = match self.checks.iter().position(|c| c.name == name) {
            Some(p) => p,
            None => {
                self.checks.push(Check {
                    name: name.to_string(),
                    ..Default::default()
                });
                self.checks.len() - 1
            }
        };
        let check = &mut self.checks[pos];
        check.cases += 1;
        if !ok {
            check.failures += 1;
            if check.first_failure.is_none() {
                check.first_failure = Some(detail());
            }
        }
    }

    pub fn merge(&mut self, other: SuiteReport) {
        for c in other.checks {
            match self.checks.iter_mut().find(|m| m.name == c.name) {
                Some(m) => {
                    m.cases += c.cases;
                    m.failures += c.failures;
                    if m.first_failure.is_none() {
                        m.first_failure = c.first_failure;
                    }
                }
                None => self.checks.push(c),
            }
        }
        self.notes.extend(other.notes);
    }

    /// Plain-text report, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "# suite {} {verdict} ({} cases, {} failures)", self.suite, self.cases(), self.failures());
        for c in &self.checks {
            let tag = if c.failures == 0 && c.cases > 0 { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag} {} cases={} failures={}", c.name, c.cases, c.failures);
            if let Some(f) = &c.first_failure {
                let _ = write!(out, " first={f}");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note {n}");
        }
        out
    }
}

/// Rejects boxes outside the exhaustive range.
pub fn check_suite_box(lattice: &LatticeBox) -> Result<()> {
    if lattice.d != 2 || !(2..=MAX_SUITE_N).contains(&lattice.n) {
        return Err(Error::Guard(format!(
            "exhaustive suites need d = 2 and 2 <= n <= {MAX_SUITE_N}, got {lattice}"
        )));
    }
    Ok(())
}

fn show(omega: &Configuration) -> String {
    format!("{:?}", omega.occupied().iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>())
}

fn vertices(lattice: &LatticeBox, idx: &[usize]) -> Vec<Vertex> {
    idx.iter().map(|&i| lattice.vertex(i)).collect()
}

/// Structural facts about one odd cutset that hold for every member of
/// `OMCut`.
fn cutset_structure(report: &mut SuiteReport, gamma: &EdgeCutset, label: &str) {
    let lattice = *gamma.lattice();
    let d = lattice.d as u32;
    report.record("P <= 2d-1", lattice.indices().all(|i| gamma.p(i) < 2 * d), || label.to_string());
    report.record("|Gamma| >= 2d(2d-1)", gamma.len() as u32 >= 2 * d * (2 * d - 1), || {
        format!("{label}: |Gamma| = {}", gamma.len())
    });
    for delta in 0..2u8 {
        let side = vertices(&lattice, gamma.boundary_side(delta));
        report.record("E_delta connected in G^2", lattice::connected_in_power(&side, 2), || {
            format!("{label}: E_{delta} = {side:?}")
        });
        for v in &side {
            for j in Direction::all(lattice.d) {
                let w = v.step(j);
                if !gamma.vertex_in_side(&w, delta) {
                    continue;
                }
                let ok = lattice::lattice_neighbors(&w).all(|u| gamma.vertex_in_side(&u, delta));
                report.record("N(v+f_j) inside A_delta", ok, || format!("{label}: v = {v}, j = {}", j.label()));
            }
        }
    }
    for &(a, b) in gamma.edge_keys() {
        report.record("P(v)+P(w) >= 2d on Gamma", gamma.p(a) + gamma.p(b) >= 2 * d, || {
            format!("{label}: edge {} {}", lattice.vertex(a), lattice.vertex(b))
        });
    }
    let balanced = Direction::all(lattice.d).all(|j| gamma.e1_dir(j).len() * 2 * lattice.d == gamma.len());
    if !balanced {
        report.notes.push(format!("{label}: |Gamma^j| not equal across directions"));
    }
}

/// Break extraction and cutset structure over every configuration of the
/// bad event, plus the same structure over the enumerated odd cutsets.
pub fn break_suite(lattice: LatticeBox, x: &Vertex) -> Result<SuiteReport> {
    check_suite_box(&lattice)?;
    let mut report = SuiteReport::new("props");
    let xi = lattice.index_of(x).ok_or_else(|| Error::OutsideBox(x.clone()))?;
    let omegas = gibbs::bad_event_configurations(lattice, x, DEFAULT_ENUMERATION_CAP)?;
    let mut realized: BTreeMap<Vec<(usize, usize)>, usize> = BTreeMap::new();
    for omega in &omegas {
        let label = show(omega);
        let gamma = cutset::break_of(omega, x)?;
        *realized.entry(gamma.edge_keys().iter().copied().collect()).or_default() += 1;
        report.record("Break is a minimal cutset", cutset::is_minimal_cutset(&gamma)?, || label.clone());
        report.record("Break is odd", cutset::is_odd_cutset(&gamma), || label.clone());
        let e0_ok = gamma
            .e0()
            .iter()
            .all(|&v| lattice.parity_of(v) == Parity::Even && !omega.get(v));
        report.record("E_0 even and vacant", e0_ok, || label.clone());
        let e1_ok = gamma
            .e1()
            .iter()
            .all(|&v| lattice.parity_of(v) == Parity::Odd && !omega.get(v));
        report.record("E_1 odd and vacant", e1_ok, || label.clone());
        cutset_structure(&mut report, &gamma, &label);
        for scope in [ModificationScope::BadEvent, ModificationScope::OddBoundary] {
            for modified in interior_modifications(omega, x, scope, DEFAULT_MODIFICATION_GUARD)? {
                let same = break_from_vacancies(&modified, xi).is_some_and(|g| g == gamma);
                report.record("interior modification keeps Break", same, || {
                    format!("{label} -> {}", show(&modified))
                });
            }
        }
    }
    report.notes.push(format!(
        "{} configurations in the bad event, {} distinct Break cutsets",
        omegas.len(),
        realized.len()
    ));
    let cutsets = enumerate_omcut(lattice, x)?;
    for gamma in &cutsets {
        let label = format!("enumerated |Gamma| = {}", gamma.len());
        report.record("enumerated cutset is odd and minimal", cutset::is_omcut(gamma), || label.clone());
        cutset_structure(&mut report, gamma, &label);
    }
    report.record(
        "every Break cutset is enumerated",
        realized
            .keys()
            .all(|k| cutsets.iter().any(|g| g.edge_keys().iter().copied().eq(k.iter().copied()))),
        || "a realized cutset is missing from the enumeration".into(),
    );
    Ok(report)
}

type T1Key = (Vec<(usize, usize)>, Vec<bool>);
type T2Key = (Vec<usize>, Vec<usize>, Vec<bool>);

/// Shift, the two transformations and their inversions over every
/// configuration of the bad event.
pub fn transform_suite(lattice: LatticeBox, x: &Vertex, lambdas: &[Rational]) -> Result<SuiteReport> {
    check_suite_box(&lattice)?;
    let mut report = SuiteReport::new("transforms");
    let omegas = gibbs::bad_event_configurations(lattice, x, DEFAULT_ENUMERATION_CAP)?;
    let two_d = 2 * lattice.d;
    // Keyed by what each inversion sees; the value is the preimage found.
    let mut t1_preimage: HashMap<T1Key, Vec<bool>> = HashMap::new();
    let mut t2_preimage: HashMap<T2Key, Vec<bool>> = HashMap::new();
    for omega in &omegas {
        let label = show(omega);
        let gamma = cutset::break_of(omega, x)?;
        for j in Direction::all(lattice.d) {
            let s = transform::shift(omega, x, j)?;
            report.record("Shift preserves occupancy", s.output.occupied_count() == omega.occupied_count(), || {
                format!("{label}, j = {}", j.label())
            });
            report.record("Shift stays feasible with odd boundary", gibbs::satisfies_bc(&s.output, gibbs::BoundaryCondition::OddOccupied), || {
                format!("{label}, j = {}", j.label())
            });
            for v in gamma.e1_dir(j) {
                let clear = lattice.neighbor_indices(v).all(|w| !s.output.get(w));
                report.record("gap around E_1j after Shift", clear, || {
                    format!("{label}, j = {}, v = {}", j.label(), lattice.vertex(v))
                });
            }
        }

        let t1 = transform::t1_images(omega, x)?;
        let gamma_j = t1.free.len();
        report.record("|Gamma^j| >= |Gamma|/2d for T1", gamma_j * two_d >= gamma.len(), || label.clone());
        for lambda in lambdas {
            let lhs = t1.weight_sum(lambda)?;
            let rhs = exact::pow(&(exact::one() + lambda), gamma_j as u64) * gibbs::weight(omega, lambda)?;
            report.record("T1 weight identity", lhs == rhs, || {
                format!("{label}, lambda = {}", exact::format_fraction(lambda))
            });
        }
        let keys: Vec<(usize, usize)> = gamma.edge_keys().iter().copied().collect();
        for image in t1.iter()? {
            report.record("T1 image in odd boundary space", gibbs::satisfies_bc(&image, gibbs::BoundaryCondition::OddOccupied), || label.clone());
            let back = transform::invert_t1(&gamma, &image);
            report.record("T1 round trip", back.as_ref() == Some(omega), || format!("{label} -> {}", show(&image)));
            let prev = t1_preimage.insert((keys.clone(), image.bits().to_vec()), omega.bits().to_vec());
            report.record("T1 preimage unique", prev.is_none_or(|p| p == omega.bits()), || show(&image));
        }

        let (t2, record) = transform::t2_images(omega, x)?;
        let j = gamma.t2_direction();
        let open = gamma.e1_dir_open(j);
        report.record("erased set inside E_1jx", record.erased.iter().all(|v| open.contains(v)), || label.clone());
        let regular_j = t2.free.len() as u64;
        for lambda in lambdas {
            let mut lhs = Rational::zero();
            for image in t2.iter()? {
                lhs += gibbs::weight(&image, lambda)?;
            }
            let lhs = lhs * exact::pow(lambda, record.erased.len() as u64);
            let rhs = exact::pow(&(exact::one() + lambda), regular_j) * gibbs::weight(omega, lambda)?;
            report.record("T2 weight identity", lhs == rhs, || {
                format!("{label}, lambda = {}", exact::format_fraction(lambda))
            });
        }
        let minimal: Vec<usize> = gamma.e1().iter().copied().filter(|&v| !gamma.is_exposed(v)).collect();
        let approximations = [minimal, gamma.inner_indices()];
        for image in t2.iter()? {
            report.record("T2 image in odd boundary space", gibbs::satisfies_bc(&image, gibbs::BoundaryCondition::OddOccupied), || label.clone());
            for approx in &approximations {
                let back = transform::invert_t2(x, approx, &record.erased, &image);
                report.record("T2 round trip", back.as_ref() == Some(omega), || format!("{label} -> {}", show(&image)));
            }
            let key = (approximations[0].clone(), record.erased.clone(), image.bits().to_vec());
            let prev = t2_preimage.insert(key, omega.bits().to_vec());
            report.record("T2 preimage unique", prev.is_none_or(|p| p == omega.bits()), || show(&image));
        }
        if let Some(&outside) = lattice.indices().find(|v| !open.contains(v)).as_ref() {
            let mut bogus = record.erased.clone();
            bogus.push(outside);
            let rejected = transform::invert_t2(x, &approximations[0], &bogus, t2.template()).is_none();
            report.record("T2 inversion rejects erase sets outside E_1jx", rejected, || label.clone());
        }
    }
    report.notes.push(format!("{} configurations, {} T1 images", omegas.len(), t1_preimage.len()));
    Ok(report)
}

/// `mu^odd(Break = Gamma) <= (1 + lambda)^(-|Gamma|/2d)` for every realized
/// cutset.
pub fn break_bound_suite(lattice: LatticeBox, x: &Vertex, lambdas: &[Rational]) -> Result<SuiteReport> {
    check_suite_box(&lattice)?;
    let mut report = SuiteReport::new("break-bound");
    let mut realized = Vec::<EdgeCutset>::new();
    for omega in gibbs::bad_event_configurations(lattice, x, DEFAULT_ENUMERATION_CAP)? {
        let gamma = cutset::break_of(&omega, x)?;
        if !realized.contains(&gamma) {
            realized.push(gamma);
        }
    }
    for gamma in &realized {
        for lambda in lambdas {
            let bound = transform::break_probability_bound(gamma, lambda, DEFAULT_ENUMERATION_CAP)?;
            report.record("Break probability bound", bound.holds, || {
                format!(
                    "|Gamma| = {}, lambda = {}, p = {}",
                    gamma.len(),
                    exact::format_fraction(lambda),
                    exact::format_fraction(&bound.probability)
                )
            });
        }
    }
    Ok(report)
}

/// Dominating sets, connectivity and reconstruction for every enumerated
/// cutset, `seeds` seeds and each `eps` (extended regime).
pub fn approx_suite(lattice: LatticeBox, x: &Vertex, epsilons: &[Rational], seeds: u64, base_seed: u64) -> Result<SuiteReport> {
    check_suite_box(&lattice)?;
    let mut report = SuiteReport::new("approx");
    let cutsets = enumerate_omcut(lattice, x)?;
    let two_d = 2 * lattice.d as i64;
    for eps_value in epsilons {
        let eps = EpsilonParam::extended(eps_value.clone(), lattice.d)?;
        let eps_d = eps_value * exact::int(lattice.d as i64);
        let tag = exact::format_fraction(eps_value);
        for gamma in &cutsets {
            let label = format!("|Gamma| = {}, eps = {tag}", gamma.len());
            for delta in 0..2u8 {
                for v in vertices(&lattice, gamma.boundary_side(delta)) {
                    let u = approx::u_sets(gamma, delta, &v, &eps);
                    let p = gamma.p_vertex(&v) as i64;
                    let floor = p * (two_d - p) - p.min(two_d - p);
                    report.record("|U_1(v)| lower bound", u.u1.len() as i64 >= floor, || format!("{label}, v = {v}"));
                    let u3_ok = u
                        .u3
                        .iter()
                        .all(|w| exact::lt_sqrt(&exact::int(gamma.p_vertex(w) as i64), &eps_d));
                    report.record("P < sqrt(eps d) on U_3(v)", u3_ok, || format!("{label}, v = {v}"));
                }
            }
            for offset in 0..seeds {
                let seed = base_seed.wrapping_add(offset);
                let seeded = format!("{label}, seed = {seed}");
                let sets = match approx::dominating_sets(gamma, &eps, seed, approx::DEFAULT_RETRY_CAP) {
                    Ok(s) => s,
                    Err(e) => {
                        report.record("dominating sets found", false, || format!("{seeded}: {e}"));
                        continue;
                    }
                };
                report.record("dominating sets found", true, String::new);
                let check = approx::check_dominating(gamma, &eps, &sets.outer, &sets.inner);
                report.record("dominating condition (b)", check.b, || seeded.clone());
                report.record("dominating condition (c)", check.c, || seeded.clone());
                report.record("dominating condition (d)", check.d, || seeded.clone());
                for v in gamma.e1_vertices() {
                    report.record("G^8 connectivity", approx::g8_connectivity(&sets.outer, &sets.inner, &v), || {
                        format!("{seeded}, v = {v}")
                    });
                }
                let input = approx::ApproxInput::from_cutset(gamma, &eps, &sets)?;
                let e = approx::interior_approx(&input)?;
                report.record("output is an interior approximation", approx::is_interior_approx(&e, gamma), || seeded.clone());
                report.record("output within reconstruction bounds", approx::satisfies_reconstruction_bounds(&e, gamma, eps_value), || {
                    seeded.clone()
                });
            }
        }
    }
    report.notes.push(format!("{} enumerated cutsets", cutsets.len()));
    Ok(report)
}

fn grid_graph(rows: usize, cols: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                g.add_edge(i, i + 1).expect("in range");
            }
            if r + 1 < rows {
                g.add_edge(i, i + cols).expect("in range");
            }
        }
    }
    g
}

fn random_graph(rng: &mut ChaCha8Rng, order: usize, p: f64) -> SimpleGraph {
    let mut g = SimpleGraph::new(order);
    for a in 0..order {
        for b in a + 1..order {
            if rng.random_bool(p) {
                g.add_edge(a, b).expect("in range");
            }
        }
    }
    g
}

/// The connected-set bound, the double-counting lemma on random instances
/// and the direction-code census on every guarded instance.
pub fn counting_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("counting");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs: Vec<(String, SimpleGraph)> = Vec::new();
    for rows in 1..=4 {
        for cols in rows..=5 {
            graphs.push((format!("grid {rows}x{cols}"), grid_graph(rows, cols)));
        }
    }
    for k in 0..40 {
        let order = rng.random_range(3..=10);
        let p = rng.random_range(0.2..0.7);
        graphs.push((format!("random #{k} order {order}"), random_graph(&mut rng, order, p)));
    }
    for (name, g) in &graphs {
        let delta = g.max_degree() as u128;
        for v in 0..g.len() {
            for m in 1..=g.len().min(7) {
                let count = count_connected_sets(g, v, m)? as u128;
                let bound = delta.pow(2 * m as u32 - 2);
                report.record("connected sets <= Delta^(2M-2)", count <= bound, || {
                    format!("{name}, v = {v}, M = {m}: {count} > {bound}")
                });
            }
        }
    }
    report.notes.push(format!("{} graphs in the connected-set census", graphs.len()));

    for k in 0..200 {
        let size = rng.random_range(1..=12);
        let inst = DoubleCountingInstance::random(&mut rng, size);
        let ok = gibbs::check_double_counting(&inst).unwrap_or(false);
        report.record("double counting bound", ok, || format!("instance #{k}"));
    }

    for n in 2..=MAX_SUITE_N {
        let lattice = LatticeBox::new(2, n)?;
        let x = Vertex::origin(2);
        let cutsets = enumerate_omcut(lattice, &x)?;
        let mut boundary: Vec<Vertex> = Vec::new();
        for g in &cutsets {
            boundary.extend(g.e0_vertices());
            boundary.extend(g.e1_vertices());
        }
        boundary.sort();
        boundary.dedup();
        let mut sets: Vec<Vec<Vertex>> = vec![Vec::new()];
        for (i, a) in boundary.iter().enumerate() {
            sets.push(vec![a.clone()]);
            for b in &boundary[i + 1..] {
                sets.push(vec![a.clone(), b.clone()]);
            }
        }
        for r in 0..=approx::NGAMMA_MAX_R {
            for set in &sets {
                let census = approx::census_ngamma_over(&cutsets, r, set)?;
                report.record("N(R,E) <= (2d)^(2R)", census.within_bound, || {
                    format!("n = {n}, R = {r}, E = {set:?}: {}", census.count)
                });
            }
        }
    }
    Ok(report)
}
