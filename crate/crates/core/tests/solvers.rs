mod common;

use perr_core::bench::{solve, Algo, SolveOptions};
use perr_core::graph::Graph;
use perr_core::instance::{gen_linear_array, gen_random_grid, gen_square_array, Instance};
use perr_core::plan::validate_plan;
use perr_core::rng::SplitMix64;
use proptest::prelude::*;

fn random_instance(g: Graph, k: usize, rng: &mut SplitMix64) -> Instance {
    let n = g.node_count();
    let mut starts = rng.permutation(n);
    starts.truncate(k);
    let mut goals = rng.permutation(n);
    goals.truncate(k);
    Instance::new(g, starts, goals).unwrap()
}

fn check(inst: &Instance, algos: &[Algo], seed: u64) -> Result<(), TestCaseError> {
    let opts = SolveOptions {
        seed,
        checked: true,
        ..SolveOptions::default()
    };
    for &algo in algos {
        let solved = solve(inst, algo, &opts).map_err(|e| TestCaseError::fail(format!("{algo}: {e}")))?;
        let m = validate_plan(inst, &solved.plan).map_err(|e| TestCaseError::fail(format!("{algo}: {e}")))?;
        prop_assert!(
            m.makespan >= inst.max_distance(),
            "{algo} beats the distance bound"
        );
        prop_assert!(m.swaps <= m.makespan * inst.k() / 2);
    }
    Ok(())
}

const GENERAL: [Algo; 4] = [Algo::Rip, Algo::RipIc, Algo::Bubbletree, Algo::Bubbletree2];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn general_solvers_on_random_graphs(seed in any::<u64>(), n in 1usize..40, extra in 0usize..30, frac in 0.0f64..1.0) {
        let mut rng = SplitMix64::new(seed);
        let g = common::random_connected(n, extra, &mut rng);
        let k = ((n as f64 * frac) as usize).clamp(1, n);
        check(&random_instance(g, k, &mut rng), &GENERAL, seed)?;
    }

    #[test]
    fn general_solvers_on_obstacle_grids(seed in any::<u64>(), w in 2usize..12, h in 2usize..12, density in 0.0f64..0.35, frac in 0.05f64..0.6) {
        let k = ((w * h) as f64 * frac * 0.5).ceil() as usize;
        let generated = gen_random_grid(w, h, density, k, seed);
        prop_assume!(generated.is_ok());
        let (_, inst) = generated.unwrap();
        check(&inst, &GENERAL, seed)?;
    }

    #[test]
    fn path_solvers_on_dense_arrays(seed in any::<u64>(), n in 1usize..60) {
        let inst = gen_linear_array(n, seed).unwrap();
        check(&inst, &[Algo::Rip, Algo::RipIc, Algo::OddEven, Algo::Bubbletree, Algo::Bubbletree2], seed)?;
    }

    #[test]
    fn grid_solvers_on_dense_squares(seed in any::<u64>(), side in 1usize..9) {
        let inst = gen_square_array(side, seed).unwrap();
        check(&inst, &[Algo::Rip, Algo::RipIc, Algo::Shearsort, Algo::Bubbletree2], seed)?;
    }

    #[test]
    fn oracle_is_a_lower_bound(seed in any::<u64>(), n in 2usize..7, extra in 0usize..4, k in 1usize..4) {
        let mut rng = SplitMix64::new(seed);
        let g = common::random_connected(n, extra, &mut rng);
        let inst = random_instance(g, k.min(n), &mut rng);
        let opts = SolveOptions::default();
        let best = solve(&inst, Algo::Oracle, &opts).unwrap().plan.makespan();
        for algo in GENERAL {
            prop_assert!(solve(&inst, algo, &opts).unwrap().plan.makespan() >= best);
        }
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), n in 1usize..50, side in 1usize..8, density in 0.0f64..0.4) {
        prop_assert_eq!(gen_linear_array(n, seed).unwrap(), gen_linear_array(n, seed).unwrap());
        prop_assert_eq!(gen_square_array(side, seed).unwrap(), gen_square_array(side, seed).unwrap());
        let a = gen_random_grid(10, 8, density, 12, seed).unwrap();
        let b = gen_random_grid(10, 8, density, 12, seed).unwrap();
        prop_assert_eq!(a.0.to_map_string(), b.0.to_map_string());
        prop_assert_eq!(a.1, b.1);
    }

    #[test]
    fn random_grid_blocks_the_requested_share(seed in any::<u64>(), w in 1usize..15, h in 1usize..15, density in 0.0f64..0.3) {
        let k = 1;
        let (map, inst) = gen_random_grid(w, h, density, k, seed).unwrap();
        let blocked = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).filter(|&(x, y)| !map.is_passable(x, y)).count();
        prop_assert_eq!(blocked, (density * (w * h) as f64).round() as usize);
        // robots sit in a single component of the free cells
        let labels = inst.graph().component_labels();
        prop_assert!(inst.starts().iter().chain(inst.goals()).all(|&v| labels[v] == labels[inst.starts()[0]]));
    }
}
