mod common;

use perr_core::bubbletree::{bubbletree_solve, postprocess_redundancy, BubbleConfig};
use perr_core::graph::Graph;
use perr_core::instance::Instance;
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

fn rows(starts: Vec<usize>, goals: Vec<usize>) -> Vec<Vec<usize>> {
    let inst = Instance::new(Graph::path(5), starts, goals).unwrap();
    let sol = bubbletree_solve(&inst, &BubbleConfig::basic().checked()).unwrap();
    assert_eq!(sol.stats.levels[0].mid_node, 2);
    validate_plan(&inst, &sol.plan).unwrap();
    sol.plan.rows().to_vec()
}

// On a path of five the mid node is 2 and its child subtrees are {0, 1}
// and {3, 4}.

#[test]
fn empty_mid_node_picks_first_nonempty_migrant_set() {
    assert_eq!(rows(vec![4], vec![0])[1], vec![3]);
}

#[test]
fn lone_occupant_enters_empty_target() {
    assert_eq!(rows(vec![2], vec![4])[1], vec![3]);
}

#[test]
fn migrant_bully_swaps_infiltrator() {
    assert_eq!(rows(vec![0, 1], vec![4, 0])[1], vec![1, 0]);
}

#[test]
fn blocking_rm_climbs_when_no_migrants_remain() {
    // robot 0 has goal 2 and blocks the chain of robot 1 into {3, 4}
    let r = rows(vec![3, 2], vec![2, 4]);
    assert_eq!(r, vec![vec![3, 2], vec![2, 3], vec![2, 4]]);
}

#[test]
fn blocking_rm_is_pushed_deeper_while_migrants_remain() {
    // robot 2 also heads for {3, 4}, so r_m is pushed down with the chain
    assert_eq!(rows(vec![3, 2, 1], vec![2, 4, 3])[1], vec![4, 3, 1]);
}

#[test]
fn postprocess_keeps_validity_on_grids() {
    for seed in 0..20 {
        let mut rng = SplitMix64::new(seed);
        let inst = random_instance(Graph::grid(6, 5), 20, &mut rng);
        let cfg = BubbleConfig::bubbletree2().seeded(seed);
        let sol = bubbletree_solve(&inst, &cfg).unwrap();
        let m = validate_plan(&inst, &sol.plan).unwrap();
        assert!(m.makespan <= sol.stats.raw_makespan);
        let again = postprocess_redundancy(&sol.plan);
        assert_eq!(again, sol.plan, "postprocessing is a fixpoint");
    }
}

#[test]
fn runs_are_deterministic() {
    let mut rng = SplitMix64::new(5);
    let g = common::random_connected(40, 20, &mut rng);
    let inst = random_instance(g, 30, &mut rng);
    for cfg in [BubbleConfig::basic(), BubbleConfig::bubbletree2()] {
        let a = bubbletree_solve(&inst, &cfg.seeded(9)).unwrap();
        let b = bubbletree_solve(&inst, &cfg.seeded(9)).unwrap();
        assert_eq!(a.plan, b.plan);
        assert_eq!(a.stats, b.stats);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dense_trees_respect_basic_bound(seed in any::<u64>(), n in 2usize..80, deg in 2usize..6) {
        let mut rng = SplitMix64::new(seed);
        let inst = random_instance(common::random_tree(n, deg, &mut rng), n, &mut rng);
        let sol = bubbletree_solve(&inst, &BubbleConfig::basic().checked().seeded(seed));
        let sol = sol.map_err(|e| TestCaseError::fail(e.to_string()))?;
        let m = validate_plan(&inst, &sol.plan).unwrap();
        prop_assert!(m.makespan <= 2 * sol.stats.tree_max_degree * n + 8 * n);
    }

    #[test]
    fn bubbletree2_levels_within_budget(seed in any::<u64>(), n in 2usize..80, extra in 0usize..40, frac in 0.05f64..1.0) {
        let mut rng = SplitMix64::new(seed);
        let g = common::random_connected(n, extra, &mut rng);
        let k = ((n as f64 * frac).ceil() as usize).clamp(1, n);
        let inst = random_instance(g, k, &mut rng);
        let sol = bubbletree_solve(&inst, &BubbleConfig::bubbletree2().checked().seeded(seed));
        let sol = sol.map_err(|e| TestCaseError::fail(e.to_string()))?;
        validate_plan(&inst, &sol.plan).unwrap();
        for l in &sol.stats.levels {
            prop_assert!(l.pre_recursive <= l.diameter + 10 * l.robots);
        }
    }

    #[test]
    fn levels_shrink(seed in any::<u64>(), n in 2usize..60) {
        let mut rng = SplitMix64::new(seed);
        let inst = random_instance(common::random_tree(n, 3, &mut rng), n, &mut rng);
        for cfg in [BubbleConfig::basic(), BubbleConfig::bubbletree2()] {
            let sol = bubbletree_solve(&inst, &cfg).unwrap();
            let depth = sol.stats.levels.iter().map(|l| l.level).max().unwrap_or(0);
            // node or goal halving bounds the recursion depth by lg n + 1
            prop_assert!(depth <= usize::BITS as usize - n.leading_zeros() as usize);
        }
    }
}
