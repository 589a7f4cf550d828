//! Seeded instance families used by the benchmark sweeps.

use thiserror::Error;

use super::{GridMap, Instance};
use crate::graph::Graph;
use crate::rng::SplitMix64;

/// Obstacle layouts tried before [`gen_random_grid`] gives up.
pub const GRID_RETRY_BUDGET: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("no layout with a component of {needed} cells after {attempts} attempts")]
    GenerationFailed { needed: usize, attempts: usize },
}

fn permutation_instance(graph: Graph, seed: u64) -> Instance {
    let n = graph.node_count();
    let goals = SplitMix64::new(seed).permutation(n);
    Instance::new(graph, (0..n).collect(), goals).expect("a permutation is a valid instance")
}

/// Path of `n` nodes, robot `i` on node `i`, goals a seeded permutation.
pub fn gen_linear_array(n: usize, seed: u64) -> Result<Instance, GenerateError> {
    if n == 0 {
        return Err(GenerateError::BadSize("a linear array needs n >= 1".into()));
    }
    Ok(permutation_instance(Graph::path(n), seed))
}

/// `side` x `side` open grid, fully packed, goals a seeded permutation.
pub fn gen_square_array(side: usize, seed: u64) -> Result<Instance, GenerateError> {
    if side == 0 {
        return Err(GenerateError::BadSize("a square array needs side >= 1".into()));
    }
    Ok(permutation_instance(Graph::grid(side, side), seed))
}

/// Random-obstacle grid with `k` robots placed in its largest component.
///
/// `round(density * w * h)` cells are blocked by sampling without
/// replacement. Starts and goals are drawn independently from the largest
/// 4-connected component (lowest node id breaks size ties). A fresh layout
/// is drawn while that component has fewer than `k` cells.
pub fn gen_random_grid(
    width: usize,
    height: usize,
    density: f64,
    k: usize,
    seed: u64,
) -> Result<(GridMap, Instance), GenerateError> {
    if width == 0 || height == 0 || k == 0 {
        return Err(GenerateError::BadSize(
            "width, height and k must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(GenerateError::BadSize(format!(
            "density {density} is outside [0, 1]"
        )));
    }
    let cells = width * height;
    let blocked = ((density * cells as f64).round() as usize).min(cells);
    let mut rng = SplitMix64::new(seed);
    for _ in 0..GRID_RETRY_BUDGET {
        let order = rng.permutation(cells);
        let mut passable = vec![true; cells];
        for &c in &order[..blocked] {
            passable[c] = false;
        }
        let map = GridMap::new(width, height, passable);
        let graph = map.to_graph();
        let labels = graph.component_labels();
        let mut sizes = vec![0usize; labels.iter().max().map_or(0, |&m| m + 1)];
        for &l in &labels {
            sizes[l] += 1;
        }
        let Some(best) = (0..sizes.len()).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))) else {
            continue;
        };
        if sizes[best] < k {
            continue;
        }
        let component: Vec<usize> = (0..graph.node_count()).filter(|&v| labels[v] == best).collect();
        let mut starts = component.clone();
        rng.shuffle(&mut starts);
        starts.truncate(k);
        let mut goals = component;
        rng.shuffle(&mut goals);
        goals.truncate(k);
        let instance = Instance::new(graph, starts, goals).expect("sampled from one component");
        return Ok((map, instance));
    }
    Err(GenerateError::GenerationFailed {
        needed: k,
        attempts: GRID_RETRY_BUDGET,
    })
}

/// Robots spaced `lg n` apart on an `n`-cycle, each travelling `lg n + 1`
/// steps clockwise: `s_i = i lg n`, `g_i = ((i + 1) lg n + 1) mod n`.
///
/// `n` must be a power of two of at least 16; below that the clockwise and
/// counter-clockwise routes tie. When `lg n` does not divide `n` the robot
/// count is `floor(n / lg n)`.
pub fn gen_cycle_counterexample(n: usize) -> Result<Instance, GenerateError> {
    if !n.is_power_of_two() || n < 16 {
        return Err(GenerateError::BadSize(format!(
            "cycle counterexample needs a power of two >= 16, got {n}"
        )));
    }
    let lg = n.trailing_zeros() as usize;
    let k = n / lg;
    let starts = (0..k).map(|i| i * lg).collect();
    let goals = (0..k).map(|i| ((i + 1) * lg + 1) % n).collect();
    Ok(Instance::new(Graph::cycle(n), starts, goals).expect("spaced starts and goals are distinct"))
}
