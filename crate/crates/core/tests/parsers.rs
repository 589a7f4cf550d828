use std::fs;
use std::path::PathBuf;

use perr_core::instance::{parse_grid_map, parse_scenario, write_scenario, GridMap};
use perr_core::{Graph, Instance, Plan};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            (path.display().to_string(), fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn check_map(data: &[u8]) {
    if let Ok(map) = parse_grid_map(data) {
        let again = parse_grid_map(map.to_map_string().as_bytes()).expect("serialized maps parse");
        assert_eq!(again, map);
        let _ = map.to_graph();
    }
}

fn check_scenario(data: &[u8]) {
    if let Ok((starts, goals)) = parse_scenario(data) {
        assert_eq!(starts.len(), goals.len());
    }
}

fn check_plan(data: &[u8]) {
    if let Ok(plan) = Plan::from_csv(data) {
        let again = Plan::from_csv(plan.to_csv().as_bytes()).expect("serialized plans parse");
        assert_eq!(again, plan);
        let _ = plan.swap_count();
    }
}

#[test]
fn fuzz_seeds_replay() {
    for (_, data) in corpus("parse_map") {
        check_map(&data);
    }
    for (_, data) in corpus("parse_scenario") {
        check_scenario(&data);
    }
    for (_, data) in corpus("parse_plan") {
        check_plan(&data);
    }
}

#[test]
fn seed_outcomes() {
    let maps: Vec<(String, bool)> = corpus("parse_map")
        .iter()
        .map(|(n, d)| {
            (
                n.rsplit('/').next().unwrap().to_string(),
                parse_grid_map(d).is_ok(),
            )
        })
        .collect();
    assert_eq!(
        maps,
        vec![
            ("crlf_terrain".to_string(), true),
            ("obstacles".to_string(), true),
            ("short_rows".to_string(), false),
            ("two_cells".to_string(), true),
        ]
    );
    let plans: Vec<bool> = corpus("parse_plan")
        .iter()
        .map(|(_, d)| Plan::from_csv(d).is_ok())
        .collect();
    assert_eq!(plans, vec![true, false, true]);
    let scens: Vec<bool> = corpus("parse_scenario")
        .iter()
        .map(|(_, d)| parse_scenario(d).is_ok())
        .collect();
    assert_eq!(scens, vec![true, false, true]);
}

proptest! {
    #[test]
    fn arbitrary_bytes_never_panic(data in proptest::collection::vec(any::<u8>(), 0..200)) {
        check_map(&data);
        check_scenario(&data);
        check_plan(&data);
    }

    #[test]
    fn map_text_round_trips(w in 1usize..12, h in 1usize..12, cells in proptest::collection::vec(any::<bool>(), 144)) {
        let map = GridMap::new(w, h, cells[..w * h].to_vec());
        prop_assert_eq!(parse_grid_map(map.to_map_string().as_bytes()).unwrap(), map);
    }

    #[test]
    fn scenario_round_trips(n in 1usize..20, seed in any::<u64>()) {
        let mut rng = perr_core::rng::SplitMix64::new(seed);
        let k = 1 + rng.below(n);
        let mut starts = rng.permutation(n);
        starts.truncate(k);
        let mut goals = rng.permutation(n);
        goals.truncate(k);
        let inst = Instance::new(Graph::path(n), starts.clone(), goals.clone()).unwrap();
        prop_assert_eq!(parse_scenario(write_scenario(&inst).as_bytes()).unwrap(), (starts, goals));
    }

    #[test]
    fn plan_csv_round_trips(rows in proptest::collection::vec(proptest::collection::vec(0usize..50, 3), 1..10)) {
        let plan = Plan::new(rows);
        prop_assert_eq!(Plan::from_csv(plan.to_csv().as_bytes()).unwrap(), plan);
    }
}
