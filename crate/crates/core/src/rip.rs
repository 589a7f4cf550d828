//! RIP: every robot follows one precomputed shortest path, and conflicts
//! are settled by advancing, subset swaps and rotating cycles.
//!
//! Each timestep runs three phases over robots in ascending index order:
//!
//! 1. advance every robot whose next node is free, looping until no robot
//!    moves (occupancy is updated as robots move);
//! 2. an unmoved robot `i` swaps with the unmoved robot `j` on its next node
//!    when `P_j ≺ P_i`, or when `P_j` is `[next_i, cur_i]` (both advance);
//!    otherwise the victim's path gets `cur_i` prepended;
//! 3. cycles of unmoved robots each wanting the next one's node rotate.
//!
//! In inverse-chain mode phases 1 and 3 are replaced by one pass over the
//! components of the "who is on my next node" map.

use thiserror::Error;

use crate::analysis::{is_subsequence, potential, AnalysisError};
use crate::graph::{NodeId, Path};
use crate::instance::Instance;
use crate::plan::Plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RipMode {
    #[default]
    Basic,
    InverseChains,
}

/// Which maximal chain to advance when several lead to one empty node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainPolicy {
    /// Walk back from the empty node, always taking the candidate whose
    /// index comes next after the current one, cyclically (reproduces the
    /// basic advance loop).
    First,
    /// The chain with the most robots; lower lead index on ties.
    Longest,
    /// Through the robot with the most remaining distance, then extended
    /// backwards greedily by remaining distance.
    #[default]
    FarthestToGo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseOrder {
    #[default]
    AdvanceFirst,
    /// Subset swaps before advancing.
    SwapFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RipConfig {
    pub mode: RipMode,
    pub chain_policy: ChainPolicy,
    pub phase_order: PhaseOrder,
    /// Defaults to `k² + SIC + 1`.
    pub max_timesteps: Option<usize>,
    /// Record `Φ` every timestep and fail unless it strictly decreases.
    pub check_potential: bool,
    /// Check after every step that each path is a shortest path.
    pub check_paths: bool,
}

impl RipConfig {
    pub fn inverse_chains(policy: ChainPolicy) -> Self {
        RipConfig {
            mode: RipMode::InverseChains,
            chain_policy: policy,
            ..Self::default()
        }
    }

    pub fn checked(mut self) -> Self {
        self.check_potential = true;
        self.check_paths = true;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RipError {
    #[error("no solution within {0} timesteps")]
    TimestepCapExceeded(usize),
    #[error("no robot moved at timestep {0}")]
    NoProgress(usize),
    #[error("potential rose from {before} to {after} at timestep {t}")]
    PotentialNotDecreasing { t: usize, before: usize, after: usize },
    #[error("path of robot {robot} is not shortest at timestep {t}")]
    PathInvariant { t: usize, robot: usize },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RipStats {
    pub timesteps: usize,
    pub swaps: usize,
    /// `Φ` before each timestep and at the end, when checked.
    pub phi_trace: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RipSolution {
    pub plan: Plan,
    pub stats: RipStats,
}

/// `P_j ≺ P_i`: the node sequence of `pj` is an order-preserving
/// subsequence of `pi`.
pub fn is_parallel_subset(pj: &Path, pi: &Path) -> bool {
    is_subsequence(pj.nodes(), pi.nodes())
}

/// Where a component of the next-node map ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainEnd {
    Cycle,
    Empty(NodeId),
    /// A robot already at its goal.
    Goalie(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseChain {
    /// Robots not at their goal, ascending.
    pub robots: Vec<usize>,
    pub end: ChainEnd,
}

/// Per-run solver state. Paths are stored reversed so the current node is
/// the last element.
#[derive(Debug, Clone)]
pub struct RipState<'a> {
    instance: &'a Instance,
    rev: Vec<Vec<NodeId>>,
    occupant: Vec<Option<usize>>,
    moved: Vec<bool>,
    t: usize,
}

impl<'a> RipState<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let rev = instance
            .shortest_paths()
            .into_iter()
            .map(|p| p.0.into_iter().rev().collect())
            .collect();
        let mut occupant = vec![None; instance.n()];
        for (i, &s) in instance.starts().iter().enumerate() {
            occupant[s] = Some(i);
        }
        RipState {
            instance,
            rev,
            occupant,
            moved: vec![false; instance.k()],
            t: 0,
        }
    }

    pub fn timestep(&self) -> usize {
        self.t
    }

    pub fn position(&self, i: usize) -> NodeId {
        *self.rev[i].last().expect("paths are nonempty")
    }

    pub fn positions(&self) -> Vec<NodeId> {
        (0..self.rev.len()).map(|i| self.position(i)).collect()
    }

    fn next(&self, i: usize) -> Option<NodeId> {
        let p = &self.rev[i];
        (p.len() > 1).then(|| p[p.len() - 2])
    }

    fn remaining(&self, i: usize) -> usize {
        self.rev[i].len() - 1
    }

    pub fn path(&self, i: usize) -> Path {
        Path(self.rev[i].iter().rev().copied().collect())
    }

    pub fn paths(&self) -> Vec<Path> {
        (0..self.rev.len()).map(|i| self.path(i)).collect()
    }

    pub fn all_at_goals(&self) -> bool {
        self.rev.iter().all(|p| p.len() == 1)
    }

    fn advance(&mut self, i: usize) {
        let from = self.rev[i].pop().expect("robot has a next node");
        let to = self.position(i);
        if self.occupant[from] == Some(i) {
            self.occupant[from] = None;
        }
        self.occupant[to] = Some(i);
        self.moved[i] = true;
    }

    /// Moves a set of robots whose targets are free once they all leave.
    fn advance_together(&mut self, robots: &[usize]) {
        for &i in robots {
            let from = self.position(i);
            if self.occupant[from] == Some(i) {
                self.occupant[from] = None;
            }
            self.rev[i].pop();
        }
        for &i in robots {
            let to = self.position(i);
            self.occupant[to] = Some(i);
            self.moved[i] = true;
        }
    }

    fn advance_phase(&mut self) -> usize {
        let mut count = 0;
        loop {
            let mut any = false;
            for i in 0..self.rev.len() {
                if self.moved[i] {
                    continue;
                }
                if let Some(v) = self.next(i) {
                    if self.occupant[v].is_none() {
                        self.advance(i);
                        any = true;
                        count += 1;
                    }
                }
            }
            if !any {
                return count;
            }
        }
    }

    /// Returns `(robots moved, swaps)`.
    fn swap_phase(&mut self) -> (usize, usize) {
        let mut swaps = 0;
        for i in 0..self.rev.len() {
            if self.moved[i] {
                continue;
            }
            let Some(v) = self.next(i) else { continue };
            let Some(j) = self.occupant[v] else { continue };
            if self.moved[j] {
                continue;
            }
            let cur = self.position(i);
            let happy = self.rev[j].len() == 2 && self.rev[j][0] == cur;
            let subset = {
                let pj: Vec<NodeId> = self.rev[j].iter().rev().copied().collect();
                let pi: Vec<NodeId> = self.rev[i].iter().rev().copied().collect();
                is_subsequence(&pj, &pi)
            };
            if !(happy || subset) {
                continue;
            }
            self.rev[i].pop();
            if happy {
                self.rev[j].pop();
            } else {
                self.rev[j].push(cur);
            }
            self.occupant[v] = Some(i);
            self.occupant[cur] = Some(j);
            self.moved[i] = true;
            self.moved[j] = true;
            swaps += 1;
        }
        (2 * swaps, swaps)
    }

    /// Robot on `i`'s next node, if any.
    fn target_robot(&self, i: usize) -> Option<usize> {
        self.next(i).and_then(|v| self.occupant[v])
    }

    /// Cycles among unmoved robots, ordered by their smallest member.
    fn unmoved_cycles(&self) -> Vec<Vec<usize>> {
        let k = self.rev.len();
        // 0 = unvisited, 1 = on current walk, 2 = done
        let mut state = vec![0u8; k];
        let mut cycles = Vec::new();
        for start in 0..k {
            let mut walk = Vec::new();
            let mut cur = start;
            loop {
                if self.moved[cur] || state[cur] == 2 {
                    break;
                }
                if state[cur] == 1 {
                    let from = walk.iter().position(|&r| r == cur).expect("on walk");
                    cycles.push(walk[from..].to_vec());
                    break;
                }
                state[cur] = 1;
                walk.push(cur);
                match self.target_robot(cur) {
                    Some(j) => cur = j,
                    None => break,
                }
            }
            for r in walk {
                state[r] = 2;
            }
        }
        for c in &mut cycles {
            let m = c
                .iter()
                .enumerate()
                .min_by_key(|&(_, r)| *r)
                .map(|(p, _)| p)
                .unwrap();
            c.rotate_left(m);
        }
        cycles.sort_unstable_by_key(|c| c[0]);
        cycles
    }

    fn cycle_phase(&mut self) -> (usize, usize) {
        let (mut moved, mut swaps) = (0, 0);
        for cycle in self.unmoved_cycles() {
            if cycle.len() == 2 {
                swaps += 1;
            }
            moved += cycle.len();
            self.advance_together(&cycle);
        }
        (moved, swaps)
    }

    /// Components of the next-node map over robots not at their goal.
    pub fn partition_inverse_chains(&self) -> Vec<InverseChain> {
        let k = self.rev.len();
        let mut root: Vec<usize> = (0..k).collect();
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        // robots sharing an empty node or a goalie as target join through
        // the first robot seen with that target
        let mut first_at: Vec<Option<usize>> = vec![None; self.occupant.len()];
        for i in 0..k {
            let Some(v) = self.next(i) else { continue };
            let other = match self.occupant[v] {
                Some(j) if self.next(j).is_some() => j,
                _ => *first_at[v].get_or_insert(i),
            };
            let (a, b) = (find(&mut root, i), find(&mut root, other));
            root[a.max(b)] = a.min(b);
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for i in (0..k).filter(|&i| self.next(i).is_some()) {
            let r = find(&mut root, i);
            groups[r].push(i);
        }
        groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|robots| {
                let end = self.chain_end(robots[0]);
                InverseChain { robots, end }
            })
            .collect()
    }

    fn chain_end(&self, start: usize) -> ChainEnd {
        let mut seen = vec![false; self.rev.len()];
        let mut cur = start;
        loop {
            seen[cur] = true;
            let v = self.next(cur).expect("walk stays on robots with a next node");
            match self.occupant[v] {
                None => return ChainEnd::Empty(v),
                Some(j) if self.next(j).is_none() => return ChainEnd::Goalie(j),
                Some(j) if seen[j] => return ChainEnd::Cycle,
                Some(j) => cur = j,
            }
        }
    }

    /// Robots whose next node is `v`, among `members`.
    fn feeding(&self, v: NodeId, members: &[usize]) -> Vec<usize> {
        members
            .iter()
            .copied()
            .filter(|&i| self.next(i) == Some(v))
            .collect()
    }

    /// Selects one maximal chain ending at the empty node, in movement
    /// order from the empty node backwards.
    pub fn select_chain(&self, chain: &InverseChain, policy: ChainPolicy) -> Vec<usize> {
        let ChainEnd::Empty(empty) = chain.end else {
            return Vec::new();
        };
        let k = self.rev.len();
        let members = &chain.robots;
        let mut picked = Vec::new();
        match policy {
            ChainPolicy::First => {
                let mut node = empty;
                let mut cur: Option<usize> = None;
                loop {
                    let cands = self.feeding(node, members);
                    let base = cur.map_or(0, |c| c + 1);
                    let Some(&r) = cands.iter().min_by_key(|&&r| (r + k - base % k) % k) else {
                        break;
                    };
                    picked.push(r);
                    node = self.position(r);
                    cur = Some(r);
                }
            }
            ChainPolicy::Longest => {
                let height = self.heights(empty, members);
                let mut node = empty;
                loop {
                    let cands = self.feeding(node, members);
                    let Some(&r) = cands.iter().min_by_key(|&&r| (std::cmp::Reverse(height[r]), r)) else {
                        break;
                    };
                    picked.push(r);
                    node = self.position(r);
                }
            }
            ChainPolicy::FarthestToGo => {
                let far = *members
                    .iter()
                    .min_by_key(|&&r| (std::cmp::Reverse(self.remaining(r)), r))
                    .expect("chains are nonempty");
                let mut forward = vec![far];
                let mut cur = far;
                while let Some(j) = self.target_robot(cur) {
                    forward.push(j);
                    cur = j;
                }
                picked.extend(forward.into_iter().rev());
                let mut node = self.position(far);
                loop {
                    let cands = self.feeding(node, members);
                    let Some(&r) = cands
                        .iter()
                        .min_by_key(|&&r| (std::cmp::Reverse(self.remaining(r)), r))
                    else {
                        break;
                    };
                    picked.push(r);
                    node = self.position(r);
                }
            }
        }
        picked
    }

    /// Longest feeding chain length ending at each member robot.
    fn heights(&self, empty: NodeId, members: &[usize]) -> Vec<usize> {
        let mut height = vec![0usize; self.rev.len()];
        // reverse BFS order from the empty node; children before parents
        let mut order = Vec::new();
        let mut frontier = self.feeding(empty, members);
        while let Some(r) = frontier.pop() {
            order.push(r);
            frontier.extend(self.feeding(self.position(r), members));
        }
        for &r in order.iter().rev() {
            let below = self
                .feeding(self.position(r), members)
                .iter()
                .map(|&c| height[c])
                .max()
                .unwrap_or(0);
            height[r] = below + 1;
        }
        height
    }

    /// Moves the chain selected by `policy` one step.
    pub fn advance_chain(&mut self, chain: &InverseChain, policy: ChainPolicy) -> usize {
        let picked = self.select_chain(chain, policy);
        self.advance_together(&picked);
        picked.len()
    }

    fn inverse_chain_phase(&mut self, policy: ChainPolicy) -> (usize, usize) {
        let (mut moved, mut swaps) = (0, 0);
        for chain in self.partition_inverse_chains() {
            match chain.end {
                ChainEnd::Cycle => {}
                ChainEnd::Empty(_) => moved += self.advance_chain(&chain, policy),
                ChainEnd::Goalie(_) => {}
            }
        }
        let (m, s) = self.cycle_phase();
        moved += m;
        swaps += s;
        (moved, swaps)
    }

    /// Runs one timestep; returns `(robots moved, swaps)`.
    pub fn step(&mut self, cfg: &RipConfig) -> (usize, usize) {
        self.moved.iter_mut().for_each(|m| *m = false);
        let (mut moved, mut swaps) = (0, 0);
        let mut add = |(m, s): (usize, usize)| {
            moved += m;
            swaps += s;
        };
        match (cfg.mode, cfg.phase_order) {
            (RipMode::Basic, PhaseOrder::AdvanceFirst) => {
                add((self.advance_phase(), 0));
                add(self.swap_phase());
                add(self.cycle_phase());
            }
            (RipMode::Basic, PhaseOrder::SwapFirst) => {
                add(self.swap_phase());
                add((self.advance_phase(), 0));
                add(self.cycle_phase());
            }
            (RipMode::InverseChains, PhaseOrder::AdvanceFirst) => {
                add(self.inverse_chain_phase(cfg.chain_policy));
                add(self.swap_phase());
            }
            (RipMode::InverseChains, PhaseOrder::SwapFirst) => {
                add(self.swap_phase());
                add(self.inverse_chain_phase(cfg.chain_policy));
            }
        }
        self.t += 1;
        (moved, swaps)
    }

    fn check_paths(&self, goal_dist: &[Vec<Option<usize>>]) -> Result<(), RipError> {
        let g = self.instance.graph();
        for (i, rev) in self.rev.iter().enumerate() {
            let adjacent = rev.windows(2).all(|w| g.has_edge(w[0], w[1]));
            if !adjacent || goal_dist[i][self.position(i)] != Some(rev.len() - 1) {
                return Err(RipError::PathInvariant { t: self.t, robot: i });
            }
        }
        Ok(())
    }
}

/// Solves an instance with RIP.
pub fn rip_solve(instance: &Instance, cfg: &RipConfig) -> Result<RipSolution, RipError> {
    let k = instance.k();
    let cap = cfg.max_timesteps.unwrap_or(k * k + instance.sic() + 1);
    let mut state = RipState::new(instance);
    let mut plan = Plan::stationary(instance.starts());
    let mut stats = RipStats::default();
    let goal_dist: Vec<Vec<Option<usize>>> = if cfg.check_paths {
        instance
            .goals()
            .iter()
            .map(|&g| instance.graph().bfs_distances(g))
            .collect()
    } else {
        Vec::new()
    };
    let phi = |s: &RipState| potential(instance, &s.paths()).map(|p| p.phi);
    if cfg.check_potential {
        stats.phi_trace.push(phi(&state)?);
    }
    while !state.all_at_goals() {
        if state.t >= cap {
            return Err(RipError::TimestepCapExceeded(cap));
        }
        let (moved, swaps) = state.step(cfg);
        if moved == 0 {
            return Err(RipError::NoProgress(state.t - 1));
        }
        stats.swaps += swaps;
        plan.push(state.positions());
        if cfg.check_paths {
            state.check_paths(&goal_dist)?;
        }
        if cfg.check_potential {
            let before = *stats.phi_trace.last().expect("initial value recorded");
            let after = phi(&state)?;
            if after >= before {
                return Err(RipError::PotentialNotDecreasing {
                    t: state.t,
                    before,
                    after,
                });
            }
            stats.phi_trace.push(after);
        }
    }
    stats.timesteps = state.t;
    Ok(RipSolution { plan, stats })
}
