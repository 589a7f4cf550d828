//! Exhaustive two-robot searches deciding swap need and swap risk directly
//! from their definitions, used to cross-check the closed-form predicates.
//!
//! A state is the pair of current paths. Each step every robot waits or
//! advances to the next node of its path; the two may exchange places only
//! when both advance (a happy swap). The need search also allows bully
//! swaps of `a` by `b`. A bullied robot keeps its path with the swapper's
//! node prepended when that is still shortest and re-plans otherwise.
//!
//! With `detours` set, a robot may also step to any free neighbour other
//! than its next node, including off its goal, and then follow the
//! canonical shortest path from there.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, NodeId, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub detours: bool,
    /// Maximum number of states expanded in one call.
    pub state_budget: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            detours: true,
            state_budget: 1_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search exceeded its budget of {0} states")]
    StateBudgetExceeded(usize),
}

type State = (Vec<NodeId>, Vec<NodeId>);

struct Search<'g> {
    g: &'g Graph,
    cfg: OracleConfig,
    expanded: usize,
    need_memo: HashMap<State, bool>,
    dist: Vec<Vec<Option<usize>>>,
    replans: RefCell<HashMap<(NodeId, NodeId), Vec<NodeId>>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, cfg: OracleConfig) -> Self {
        Search {
            g,
            cfg,
            expanded: 0,
            need_memo: HashMap::new(),
            dist: (0..g.node_count()).map(|v| g.bfs_distances(v)).collect(),
            replans: RefCell::new(HashMap::new()),
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.expanded += 1;
        if self.expanded > self.cfg.state_budget {
            return Err(OracleError::StateBudgetExceeded(self.cfg.state_budget));
        }
        Ok(())
    }

    fn replan(&self, from: NodeId, goal: NodeId) -> Vec<NodeId> {
        self.replans
            .borrow_mut()
            .entry((from, goal))
            .or_insert_with(|| {
                self.g
                    .shortest_path(from, goal)
                    .expect("robots stay in their goal's component")
                    .0
            })
            .clone()
    }

    /// Path of a robot pushed from the head of `path` back onto `to`.
    fn pushed_back(&self, to: NodeId, path: &[NodeId]) -> Vec<NodeId> {
        let goal = *path.last().expect("paths are nonempty");
        if self.dist[to][goal] == Some(path.len()) {
            std::iter::once(to).chain(path.iter().copied()).collect()
        } else {
            self.replan(to, goal)
        }
    }

    /// Single-robot options as `(new path, is_advance)`.
    fn options(&self, path: &[NodeId]) -> Vec<(Vec<NodeId>, bool)> {
        let mut out = vec![(path.to_vec(), false)];
        if path.len() > 1 {
            out.push((path[1..].to_vec(), true));
        }
        if self.cfg.detours {
            let goal = *path.last().expect("paths are nonempty");
            for &w in self.g.neighbors(path[0]) {
                if path.get(1) != Some(&w) {
                    out.push((self.replan(w, goal), false));
                }
            }
        }
        out
    }

    fn successors(&self, (pa, pb): &State, b_bullies_a: bool) -> Vec<State> {
        let (a0, b0) = (pa[0], pb[0]);
        let mut out = Vec::new();
        let ob = self.options(pb);
        for (na, adv_a) in self.options(pa) {
            for (nb, adv_b) in &ob {
                if na[0] == nb[0] {
                    continue;
                }
                if na[0] == b0 && nb[0] == a0 && !(adv_a && *adv_b) {
                    continue;
                }
                out.push((na.clone(), nb.clone()));
            }
        }
        if b_bullies_a && pb.len() > 1 && pb[1] == a0 {
            out.push((self.pushed_back(b0, pa), pb[1..].to_vec()));
        }
        out
    }

    /// Whether both robots can reach their goals without `a` bullying `b`.
    fn solvable(&mut self, start: &State) -> Result<bool, OracleError> {
        if let Some(&cached) = self.need_memo.get(start) {
            return Ok(!cached);
        }
        // state -> index of its BFS parent
        let mut parent: HashMap<State, usize> = HashMap::from([(start.clone(), usize::MAX)]);
        let mut order = vec![start.clone()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            self.tick()?;
            let state = order[at].clone();
            let done =
                (state.0.len() == 1 && state.1.len() == 1) || self.need_memo.get(&state) == Some(&false);
            if done {
                // everything on the way here can reach the goal too
                let mut i = at;
                while i != usize::MAX {
                    let p = parent[&order[i]];
                    self.need_memo.insert(order[i].clone(), false);
                    i = p;
                }
                return Ok(true);
            }
            if self.need_memo.get(&state) == Some(&true) {
                continue;
            }
            for next in self.successors(&state, true) {
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), at);
                    order.push(next);
                    queue.push_back(order.len() - 1);
                }
            }
        }
        // nothing reachable from any visited state reaches the goal
        for state in order {
            self.need_memo.insert(state, true);
        }
        Ok(false)
    }

    fn risk(&mut self, start: State) -> Result<bool, OracleError> {
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(state) = queue.pop_front() {
            if !self.solvable(&state)? {
                return Ok(true);
            }
            for next in self.successors(&state, false) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Ok(false)
    }
}

fn start_state(pa: &Path, pb: &Path) -> State {
    assert_ne!(pa.first(), pb.first(), "robots must start on distinct nodes");
    (pa.0.clone(), pb.0.clone())
}

/// True when, with all other robots removed, `a` cannot reach its goal
/// together with `b` unless it bully-swaps `b`.
pub fn swap_need_oracle(g: &Graph, pa: &Path, pb: &Path, cfg: OracleConfig) -> Result<bool, OracleError> {
    let mut search = Search::new(g, cfg);
    Ok(!search.solvable(&start_state(pa, pb))?)
}

/// True when a swap need `(a, b)` holds now or can be produced by moving
/// the two robots without bully swaps.
pub fn swap_risk_oracle(g: &Graph, pa: &Path, pb: &Path, cfg: OracleConfig) -> Result<bool, OracleError> {
    let mut search = Search::new(g, cfg);
    search.risk(start_state(pa, pb))
}
