//! Randomised invariants on boxes too large for exhaustive checking.

use hardcore::approx::{self, EpsilonParam};
use hardcore::cutset::{self, SimpleGraph};
use hardcore::exact::{self, Rational};
use hardcore::gibbs::{self, BoundaryCondition, Configuration};
use hardcore::lattice::{self, Direction, LatticeBox, Parity, Vertex};
use hardcore::sampler;
use hardcore::transform;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A configuration of the bad event on `[-n,n]^2`: odd boundary occupied,
/// origin occupied, the rest filled greedily at density `fill`.
fn random_bad_event(n: usize, seed: u64, fill: f64) -> Configuration {
    let lattice = LatticeBox::new(2, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = gibbs::clamp_configuration(lattice, BoundaryCondition::OddOccupied);
    let x = lattice.index_of(&Vertex::origin(2)).unwrap();
    c.set(x, true);
    let mut sites = gibbs::free_vertices(&lattice, BoundaryCondition::OddOccupied);
    sites.shuffle(&mut rng);
    for s in sites {
        if s != x && rng.random_bool(fill) && lattice.neighbor_indices(s).all(|w| !c.get(w)) {
            c.set(s, true);
        }
    }
    c
}

fn random_feasible(lattice: LatticeBox, bc: BoundaryCondition, seed: u64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = gibbs::clamp_configuration(lattice, bc);
    let mut sites = gibbs::free_vertices(&lattice, bc);
    sites.shuffle(&mut rng);
    for s in sites {
        if rng.random_bool(0.5) && lattice.neighbor_indices(s).all(|w| !c.get(w)) {
            c.set(s, true);
        }
    }
    c
}

fn bc_strategy() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Free),
        Just(BoundaryCondition::OddOccupied),
        Just(BoundaryCondition::EvenOccupied),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_and_vertex_are_inverse(d in 1usize..=3, n in 1usize..=4, seed in any::<u64>()) {
        let lattice = LatticeBox::new(d, n).unwrap();
        let i = (seed % lattice.len() as u64) as usize;
        let v = lattice.vertex(i);
        prop_assert_eq!(lattice.index_of(&v), Some(i));
        prop_assert_eq!(lattice.parity_of(i), lattice::parity(&v));
        for j in Direction::all(d) {
            prop_assert_eq!(v.step(j).step(j.opposite()), v.clone());
            if let Some(w) = lattice.step(i, j) {
                prop_assert_eq!(lattice.vertex(w), v.step(j));
                prop_assert_ne!(lattice.parity_of(w), lattice.parity_of(i));
            }
        }
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = exact::rat(p, q);
        prop_assert_eq!(exact::parse_rational(&exact::format_fraction(&r)).unwrap(), r);
    }

    #[test]
    fn configurations_round_trip_through_json(n in 1usize..=4, seed in any::<u64>(), bc in bc_strategy()) {
        let lattice = LatticeBox::new(2, n).unwrap();
        let c = random_feasible(lattice, bc, seed);
        prop_assert!(gibbs::is_feasible(&c));
        prop_assert!(gibbs::satisfies_bc(&c, bc));
        let json = serde_json::to_string(&c).unwrap();
        let back: Configuration = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn heat_bath_keeps_feasibility(n in 1usize..=5, seed in any::<u64>(), bc in bc_strategy(), u in 0.0f64..1.0, lam in 1i64..20) {
        let lattice = LatticeBox::new(2, n).unwrap();
        let mut c = random_feasible(lattice, bc, seed);
        let sites = gibbs::free_vertices(&lattice, bc);
        prop_assume!(!sites.is_empty());
        let site = sites[(seed % sites.len() as u64) as usize];
        let p = lam as f64 / (1.0 + lam as f64);
        sampler::heat_bath_update(&mut c, site, u, p);
        prop_assert!(gibbs::is_feasible(&c));
        prop_assert!(gibbs::satisfies_bc(&c, bc));
    }

    #[test]
    fn glauber_chain_stays_in_state_space(n in 2usize..=5, seed in any::<u64>(), bc in bc_strategy()) {
        let lattice = LatticeBox::new(2, n).unwrap();
        let start = random_feasible(lattice, bc, seed);
        let mut state = sampler::ChainState::new(start, bc, seed).unwrap();
        let lambda = exact::int(3);
        for _ in 0..200 {
            sampler::glauber_step(&mut state, &lambda);
        }
        prop_assert!(gibbs::is_feasible(&state.config));
        prop_assert!(gibbs::satisfies_bc(&state.config, bc));
    }

    #[test]
    fn extremal_states_bracket_everything(n in 1usize..=4, seed in any::<u64>(), bc in bc_strategy()) {
        let lattice = LatticeBox::new(2, n).unwrap();
        let c = random_feasible(lattice, bc, seed);
        prop_assert!(sampler::precedes(&sampler::extremal_state(lattice, bc, false), &c));
        prop_assert!(sampler::precedes(&c, &sampler::extremal_state(lattice, bc, true)));
    }

    #[test]
    fn break_cutset_structure(n in 2usize..=6, seed in any::<u64>(), fill in 0.2f64..0.9) {
        let omega = random_bad_event(n, seed, fill);
        let x = Vertex::origin(2);
        let gamma = cutset::break_of(&omega, &x).unwrap();
        let lattice = *omega.lattice();
        prop_assert!(cutset::is_minimal_cutset(&gamma).unwrap());
        prop_assert!(cutset::is_odd_cutset(&gamma));
        prop_assert!(gamma.len() >= 12);
        for &v in gamma.e0() {
            prop_assert_eq!(lattice.parity_of(v), Parity::Even);
            prop_assert!(!omega.get(v));
        }
        for &v in gamma.e1() {
            prop_assert_eq!(lattice.parity_of(v), Parity::Odd);
            prop_assert!(!omega.get(v));
        }
        for i in lattice.indices() {
            prop_assert!(gamma.p(i) <= 3);
        }
        for &(a, b) in gamma.edge_keys() {
            prop_assert!(gamma.p(a) + gamma.p(b) >= 4);
        }
        for delta in 0..2u8 {
            let side: Vec<Vertex> = gamma.boundary_side(delta).iter().map(|&i| lattice.vertex(i)).collect();
            prop_assert!(lattice::connected_in_power(&side, 2));
        }
    }

    #[test]
    fn shift_preserves_occupancy_and_feasibility(n in 2usize..=6, seed in any::<u64>(), fill in 0.2f64..0.9, j in 0usize..4) {
        let omega = random_bad_event(n, seed, fill);
        let s = transform::shift(&omega, &Vertex::origin(2), Direction(j)).unwrap();
        prop_assert_eq!(s.output.occupied_count(), omega.occupied_count());
        prop_assert!(gibbs::satisfies_bc(&s.output, BoundaryCondition::OddOccupied));
        let lattice = *omega.lattice();
        for v in s.cutset.e1_dir(Direction(j)) {
            prop_assert!(lattice.neighbor_indices(v).all(|w| !s.output.get(w)));
        }
    }

    #[test]
    fn transformations_invert(n in 2usize..=6, seed in any::<u64>(), fill in 0.2f64..0.9, pick in any::<u64>()) {
        let omega = random_bad_event(n, seed, fill);
        let x = Vertex::origin(2);
        let t1 = transform::t1_images(&omega, &x).unwrap();
        let image = t1.member(pick & ((1u64 << t1.free.len().min(63)) - 1));
        prop_assert!(gibbs::satisfies_bc(&image, BoundaryCondition::OddOccupied));
        prop_assert_eq!(transform::invert_t1(&t1.base.cutset, &image), Some(omega.clone()));

        let (t2, record) = transform::t2_images(&omega, &x).unwrap();
        let gamma = &t2.base.cutset;
        let image = t2.member(pick & ((1u64 << t2.free.len().min(63)) - 1));
        prop_assert!(gibbs::satisfies_bc(&image, BoundaryCondition::OddOccupied));
        let approx: Vec<usize> = gamma.e1().iter().copied().filter(|&v| !gamma.is_exposed(v)).collect();
        prop_assert_eq!(transform::invert_t2(&x, &approx, &record.erased, &image), Some(omega.clone()));
        prop_assert_eq!(transform::invert_t2(&x, &gamma.inner_indices(), &record.erased, &image), Some(omega));
    }

    #[test]
    fn interior_modifications_keep_break(n in 2usize..=5, seed in any::<u64>(), fill in 0.2f64..0.9) {
        let omega = random_bad_event(n, seed, fill);
        let x = Vertex::origin(2);
        let gamma = cutset::break_of(&omega, &x).unwrap();
        if let Ok(mods) = cutset::interior_modifications(&omega, &x, cutset::ModificationScope::BadEvent, 16) {
            for m in mods {
                prop_assert_eq!(cutset::break_of(&m, &x).unwrap(), gamma.clone());
            }
        }
    }

    #[test]
    fn connected_set_bound(order in 2usize..=9, seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = SimpleGraph::new(order);
        for a in 0..order {
            for b in a + 1..order {
                if rng.random_bool(0.4) {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        let delta = g.max_degree() as u128;
        for v in 0..order {
            let count = cutset::count_connected_sets(&g, v, m).unwrap() as u128;
            prop_assert!(count <= delta.pow(2 * m as u32 - 2));
        }
    }

    #[test]
    fn double_counting_holds(seed in any::<u64>(), size in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gibbs::DoubleCountingInstance::random(&mut rng, size);
        prop_assert!(gibbs::check_double_counting(&inst).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approximation_of_random_breaks(n in 3usize..=5, seed in any::<u64>(), fill in 0.3f64..0.9, eps_tenths in 1i64..=5) {
        let omega = random_bad_event(n, seed, fill);
        let gamma = cutset::break_of(&omega, &Vertex::origin(2)).unwrap();
        let eps_value: Rational = exact::rat(eps_tenths, 10);
        let eps = EpsilonParam::extended(eps_value.clone(), 2).unwrap();
        let sets = approx::dominating_sets(&gamma, &eps, seed, approx::DEFAULT_RETRY_CAP).unwrap();
        prop_assert!(approx::check_dominating(&gamma, &eps, &sets.outer, &sets.inner).all());
        for v in gamma.e1_vertices() {
            prop_assert!(approx::g8_connectivity(&sets.outer, &sets.inner, &v));
        }
        let e = approx::interior_approx(&approx::ApproxInput::from_cutset(&gamma, &eps, &sets).unwrap()).unwrap();
        prop_assert!(approx::is_interior_approx(&e, &gamma));
        prop_assert!(approx::satisfies_reconstruction_bounds(&e, &gamma, &eps_value));
    }
}
