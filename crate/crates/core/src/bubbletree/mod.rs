//! Bubbletree: route on a BFS spanning tree by repeatedly picking a mid node
//! `v_m`, moving every robot into the child subtree that holds its goal, and
//! recursing on the subtrees in parallel.
//!
//! Within a level, robots not yet in their target subtree are migrants. The
//! robot currently on `v_m` decides which migrant set (the focal group) moves:
//! migrants walk toward `v_m` in priority order, bully-swapping whatever sits
//! in their way, and exchange with the `v_m` occupant when it is bound for
//! their subtree. When the occupant's target subtree has no migrants of its
//! own, the occupant is pushed in along a chain of occupied nodes. The robot
//! whose goal is `v_m` (`r_m`) is parked there last and frozen while the
//! subtrees recurse.
//!
//! bubbletree2 picks goal-balanced mid nodes and lets every other migrant set
//! advance too, entering `v_m` or a target subtree root only when empty.

mod level;
mod postprocess;

pub use postprocess::postprocess_redundancy;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, NodeId, Tree};
use crate::instance::Instance;
use crate::plan::Plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Balance {
    /// Every child subtree of `v_m` has at most half the level's nodes.
    Node,
    /// Every child subtree of `v_m` holds at most half the level's goals.
    Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BubbleConfig {
    pub balance: Balance,
    pub move_all_migrants: bool,
    pub postprocess: bool,
    pub priority_seed: u64,
    /// Assert the makespan and per-level budgets plus the migrant invariants.
    pub check_bounds: bool,
}

impl BubbleConfig {
    /// Node-balanced, one migrant set per step, no postprocessing.
    pub fn basic() -> Self {
        BubbleConfig {
            balance: Balance::Node,
            move_all_migrants: false,
            postprocess: false,
            priority_seed: 0,
            check_bounds: false,
        }
    }

    /// Goal-balanced, all migrant sets move, redundancy postprocessing on.
    pub fn bubbletree2() -> Self {
        BubbleConfig {
            balance: Balance::Goal,
            move_all_migrants: true,
            postprocess: true,
            ..BubbleConfig::basic()
        }
    }

    pub fn seeded(self, priority_seed: u64) -> Self {
        BubbleConfig {
            priority_seed,
            ..self
        }
    }

    pub fn checked(self) -> Self {
        BubbleConfig {
            check_bounds: true,
            ..self
        }
    }
}

impl Default for BubbleConfig {
    fn default() -> Self {
        BubbleConfig::basic()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BubbleError {
    #[error("{what} is {value}, above its bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("invariant violated at level {level}: {detail}")]
    InvariantViolated { level: usize, detail: String },
    #[error("pre-recursive phase at level {level} made no progress")]
    NoProgress { level: usize },
    #[error("pre-recursive phase at level {level} exceeded {cap} steps")]
    StepCapExceeded { level: usize, cap: usize },
}

/// One recursion level on one subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub mid_node: NodeId,
    pub subtree_size: usize,
    pub robots: usize,
    pub diameter: usize,
    /// Timesteps spent before recursing, including parking `r_m`.
    pub pre_recursive: usize,
    /// Timesteps in which `r_m` moved.
    pub rm_moves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BubbleStats {
    /// Maximum degree of the spanning forest.
    pub tree_max_degree: usize,
    pub levels: Vec<LevelStats>,
    /// Makespan before postprocessing.
    pub raw_makespan: usize,
}

#[derive(Debug, Clone)]
pub struct BubbleSolution {
    pub plan: Plan,
    pub stats: BubbleStats,
}

/// BFS spanning tree from the one-center of every connected component, in
/// order of each component's lowest node.
pub fn spanning_forest(g: &Graph) -> Vec<Tree> {
    let labels = g.component_labels();
    let count = labels.iter().max().map_or(0, |&l| l + 1);
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        members[l].push(v);
    }
    members
        .into_iter()
        .map(|nodes| {
            let local = g.induced(&nodes);
            let center = local.one_center().expect("components are connected and nonempty");
            let tree = local.bfs_spanning_tree(center).expect("components are connected");
            let mut parent = vec![None; g.node_count()];
            let mut inside = vec![false; g.node_count()];
            for (i, &v) in nodes.iter().enumerate() {
                inside[v] = true;
                parent[v] = tree.parent(i).map(|p| nodes[p]);
            }
            Tree::from_parents(nodes[center], parent, inside)
        })
        .collect()
}

/// Mid node of `tree` under `balance`, using `inst`'s goals as weights.
pub fn find_mid_node(tree: &Tree, inst: &Instance, balance: Balance) -> NodeId {
    let n = inst.n();
    let adj = tree_adjacency(std::slice::from_ref(tree), n);
    let nodes: Vec<NodeId> = tree.nodes().collect();
    let mut weight = vec![0; n];
    for v in &nodes {
        if balance == Balance::Node {
            weight[*v] = 1;
        }
    }
    if balance == Balance::Goal {
        for &g in inst.goals() {
            if tree.contains(g) {
                weight[g] += 1;
            }
        }
    }
    level::mid_node(&adj, tree.root(), |v| weight[v])
}

fn tree_adjacency(forest: &[Tree], n: usize) -> Vec<Vec<NodeId>> {
    let mut adj = vec![Vec::new(); n];
    for tree in forest {
        for (p, v) in tree.edges() {
            adj[p].push(v);
            adj[v].push(p);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

pub(crate) struct Ctx<'a> {
    adj: Vec<Vec<NodeId>>,
    goals: &'a [NodeId],
    cfg: BubbleConfig,
}

/// Position rows (after each step) for a set of robots, plus level stats.
#[derive(Debug, Default)]
pub(crate) struct SubPlan {
    rows: Vec<Vec<NodeId>>,
    levels: Vec<LevelStats>,
}

/// Runs independent sub-solves in parallel and merges them timestep-aligned
/// on top of `base`; `parts[i]` covers robots `groups[i]` (indices into `base`).
pub(crate) fn merge_parallel(base: &[NodeId], groups: &[Vec<usize>], parts: Vec<SubPlan>) -> SubPlan {
    let len = parts.iter().map(|p| p.rows.len()).max().unwrap_or(0);
    let mut rows = Vec::with_capacity(len);
    for s in 0..len {
        let mut row = base.to_vec();
        for (group, part) in groups.iter().zip(&parts) {
            if let Some(last) = part.rows.len().checked_sub(1) {
                let src = &part.rows[s.min(last)];
                for (j, &r) in group.iter().enumerate() {
                    row[r] = src[j];
                }
            }
        }
        rows.push(row);
    }
    SubPlan {
        rows,
        levels: parts.into_iter().flat_map(|p| p.levels).collect(),
    }
}

pub fn bubbletree_solve(inst: &Instance, cfg: &BubbleConfig) -> Result<BubbleSolution, BubbleError> {
    let g = inst.graph();
    let forest = spanning_forest(g);
    let ctx = Ctx {
        adj: tree_adjacency(&forest, g.node_count()),
        goals: inst.goals(),
        cfg: *cfg,
    };
    let tree_max_degree = ctx.adj.iter().map(Vec::len).max().unwrap_or(0);
    let labels = g.component_labels();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); forest.len()];
    for (r, &s) in inst.starts().iter().enumerate() {
        groups[labels[s]].push(r);
    }
    let parts = forest
        .par_iter()
        .zip(groups.par_iter())
        .map(|(tree, robots)| {
            let start = robots.iter().map(|&r| inst.starts()[r]).collect();
            let mut nodes = vec![tree.root()];
            nodes.extend(tree.nodes().filter(|&v| v != tree.root()));
            level::solve_level(&ctx, nodes, robots.clone(), start, 0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_parallel(inst.starts(), &groups, parts);
    let mut rows = vec![inst.starts().to_vec()];
    rows.extend(merged.rows);
    let mut plan = Plan::new(rows);
    plan.truncate_at(inst.goals());
    let raw_makespan = plan.makespan();
    if cfg.check_bounds && !cfg.move_all_migrants {
        let n = g.node_count();
        let bound = 2 * tree_max_degree * n + 8 * n;
        if raw_makespan > bound {
            return Err(BubbleError::BoundExceeded {
                what: "makespan",
                value: raw_makespan,
                bound,
            });
        }
    }
    if cfg.postprocess {
        plan = postprocess_redundancy(&plan);
        plan.truncate_at(inst.goals());
    }
    Ok(BubbleSolution {
        plan,
        stats: BubbleStats {
            tree_max_degree,
            levels: merged.levels,
            raw_makespan,
        },
    })
}
