//! One recursion level: mid-node choice, the pre-recursive migrant phase, and
//! the parallel recursion into child subtrees.
//!
//! Node and robot indices are local to the level; rows are emitted in global
//! node ids.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use super::{merge_parallel, Balance, BubbleError, Ctx, LevelStats, SubPlan};
use crate::graph::NodeId;
use crate::rng::{derive_seed, SplitMix64};

const NONE: usize = usize::MAX;

/// Descends from `root` into the child whose subtree outweighs half the
/// total until no child does.
pub(crate) fn mid_node(adj: &[Vec<NodeId>], root: NodeId, weight: impl Fn(NodeId) -> usize) -> NodeId {
    let mut order = vec![root];
    let mut parent: HashMap<NodeId, NodeId> = HashMap::from([(root, NONE)]);
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &v in &adj[u] {
            if let Entry::Vacant(e) = parent.entry(v) {
                e.insert(u);
                order.push(v);
            }
        }
        i += 1;
    }
    let mut sub: HashMap<NodeId, usize> = order.iter().map(|&v| (v, weight(v))).collect();
    for &v in order.iter().rev() {
        let p = parent[&v];
        if p != NONE {
            let w = sub[&v];
            *sub.get_mut(&p).expect("parent visited") += w;
        }
    }
    let total = sub[&root];
    let mut v = root;
    loop {
        let heavy = adj[v]
            .iter()
            .copied()
            .find(|&c| parent[&c] == v && 2 * sub[&c] > total);
        match heavy {
            Some(c) => v = c,
            None => return v,
        }
    }
}

/// BFS over `adj` from `s`; returns the farthest node (lowest id on ties) and
/// its distance.
fn farthest(adj: &[Vec<usize>], s: usize) -> (usize, usize) {
    let mut dist = vec![NONE; adj.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    let mut best = (0, s);
    while let Some(u) = queue.pop_front() {
        if (dist[u], std::cmp::Reverse(u)) > (best.0, std::cmp::Reverse(best.1)) {
            best = (dist[u], u);
        }
        for &v in &adj[u] {
            if dist[v] == NONE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    (best.1, best.0)
}

struct Sim {
    vm: usize,
    /// Child index of each node's subtree, `NONE` for `vm`.
    comp: Vec<usize>,
    /// Next node toward `vm`.
    toward: Vec<usize>,
    dist: Vec<usize>,
    adj: Vec<Vec<usize>>,
    children: Vec<usize>,
    pos: Vec<usize>,
    /// Child index holding each robot's goal, `NONE` for `r_m`.
    target: Vec<usize>,
    rm: Option<usize>,
    occ: Vec<Option<usize>>,
    moved: Vec<bool>,
    /// Initial migrants of each child subtree, highest priority first.
    order: Vec<Vec<usize>>,
    move_all: bool,
    level: usize,
}

impl Sim {
    fn is_migrant(&self, r: usize) -> bool {
        Some(r) != self.rm && self.comp[self.pos[r]] != self.target[r]
    }

    fn migrant_count(&self, c: usize) -> usize {
        self.order[c].iter().filter(|&&r| self.is_migrant(r)).count()
    }

    fn mv(&mut self, r: usize, to: usize) {
        debug_assert!(self.occ[to].is_none());
        self.occ[self.pos[r]] = None;
        self.occ[to] = Some(r);
        self.pos[r] = to;
        self.moved[r] = true;
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.pos[a], self.pos[b]);
        self.pos[a] = pb;
        self.pos[b] = pa;
        self.occ[pa] = Some(b);
        self.occ[pb] = Some(a);
        self.moved[a] = true;
        self.moved[b] = true;
    }

    fn violated(&self, detail: impl Into<String>) -> BubbleError {
        BubbleError::InvariantViolated {
            level: self.level,
            detail: detail.into(),
        }
    }

    /// Moves migrants of child `c` one step toward `vm` in priority order.
    /// The focal group may swap the `vm` occupant into its subtree when it
    /// is bound there or is `r_m`; other groups only enter an empty `vm`.
    fn priority_move(&mut self, c: usize, focal: bool) {
        for idx in 0..self.order[c].len() {
            let r = self.order[c][idx];
            if self.moved[r] || !self.is_migrant(r) || self.pos[r] == self.vm {
                continue;
            }
            let next = self.toward[self.pos[r]];
            match self.occ[next] {
                None => self.mv(r, next),
                Some(o) if self.moved[o] => {}
                Some(o) if next == self.vm => {
                    if focal && (Some(o) == self.rm || self.target[o] == c) {
                        self.swap(r, o);
                    }
                }
                Some(o) => self.swap(r, o),
            }
        }
    }

    /// Path from child root `children[c]` through occupied nodes of `T_c` to
    /// an empty one, depth first in ascending node order.
    fn chain(&self, c: usize, avoid_rm: bool) -> Option<Vec<usize>> {
        let blocked = |v: usize| avoid_rm && self.occ[v].is_some() && self.occ[v] == self.rm;
        let root = self.children[c];
        if blocked(root) {
            return None;
        }
        if self.occ[root].is_none() {
            return Some(vec![root]);
        }
        let mut path = vec![root];
        let mut next_child = vec![0usize];
        while let Some(&u) = path.last() {
            let i = next_child.last_mut().expect("parallel stacks");
            let Some(&v) = self.adj[u].get(*i) else {
                path.pop();
                next_child.pop();
                continue;
            };
            *i += 1;
            if v == self.toward[u] || blocked(v) {
                continue;
            }
            path.push(v);
            if self.occ[v].is_none() {
                return Some(path);
            }
            next_child.push(0);
        }
        None
    }

    /// Pushes the `vm` occupant into its target subtree `c`, which has no
    /// migrants of its own.
    fn chain_move(&mut self, c: usize) -> Result<(), BubbleError> {
        let occupant = self.occ[self.vm].expect("chain moves start at an occupied vm");
        let rm_inside = self.rm.is_some_and(|m| self.comp[self.pos[m]] == c);
        let others_bound =
            (0..self.pos.len()).any(|r| r != occupant && self.target[r] == c && self.is_migrant(r));
        let path = match self.chain(c, true) {
            Some(p) => Some(p),
            None if rm_inside && others_bound => self.chain(c, false),
            None => None,
        };
        if let Some(path) = path {
            let mut seq = vec![self.vm];
            seq.extend(path);
            for i in (0..seq.len() - 1).rev() {
                let r = self.occ[seq[i]].expect("chain nodes are occupied");
                self.mv(r, seq[i + 1]);
            }
            return Ok(());
        }
        match self.rm {
            Some(m) if rm_inside => {
                self.rm_up(m);
                Ok(())
            }
            _ => Err(self.violated(format!("no chain into subtree {c}"))),
        }
    }

    /// `r_m` climbs one node toward `vm`, trading places with any occupant.
    fn rm_up(&mut self, m: usize) {
        let up = self.toward[self.pos[m]];
        match self.occ[up] {
            None => self.mv(m, up),
            Some(o) => self.swap(m, o),
        }
    }

    fn migrant_step(&mut self) -> Result<(), BubbleError> {
        self.moved.fill(false);
        let focal = match self.occ[self.vm] {
            Some(o) if Some(o) != self.rm => {
                let c = self.target[o];
                if self.migrant_count(c) > 0 {
                    self.priority_move(c, true);
                } else {
                    self.chain_move(c)?;
                }
                Some(c)
            }
            _ => {
                let c = (0..self.children.len()).find(|&c| self.migrant_count(c) > 0);
                if let Some(c) = c {
                    self.priority_move(c, true);
                }
                c
            }
        };
        if self.move_all {
            if let Some(o) = self.occ[self.vm] {
                if Some(o) != self.rm && !self.moved[o] {
                    let root = self.children[self.target[o]];
                    if self.occ[root].is_none() {
                        self.mv(o, root);
                    }
                }
            }
            for c in 0..self.children.len() {
                if Some(c) != focal {
                    self.priority_move(c, false);
                }
            }
        }
        Ok(())
    }
}

/// Solves the subtree spanned by `nodes` for `robots` (global ids) starting
/// at `start`. Everything outside the subtree is frozen.
pub(crate) fn solve_level(
    ctx: &Ctx,
    mut nodes: Vec<NodeId>,
    robots: Vec<usize>,
    start: Vec<NodeId>,
    level: usize,
) -> Result<SubPlan, BubbleError> {
    let goal_of: Vec<NodeId> = robots.iter().map(|&r| ctx.goals[r]).collect();
    if robots.is_empty() || start == goal_of {
        return Ok(SubPlan::default());
    }
    let root = nodes[0];
    nodes.sort_unstable();
    let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&v| ctx.adj[v].iter().filter_map(|u| index.get(u).copied()).collect())
        .collect();

    let goal: Vec<usize> = goal_of.iter().map(|g| index[g]).collect();
    let mut goal_count = vec![0; nodes.len()];
    for &g in &goal {
        goal_count[g] += 1;
    }
    let vm = mid_node(&adj, index[&root], |v| match ctx.cfg.balance {
        Balance::Node => 1,
        Balance::Goal => goal_count[v],
    });
    let vm_global = nodes[vm];

    let children: Vec<usize> = adj[vm].clone();
    let mut comp = vec![NONE; nodes.len()];
    let mut toward = vec![NONE; nodes.len()];
    let mut dist = vec![0; nodes.len()];
    for (ci, &c) in children.iter().enumerate() {
        comp[c] = ci;
        toward[c] = vm;
        dist[c] = 1;
        let mut queue = VecDeque::from([c]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if v != vm && comp[v] == NONE {
                    comp[v] = ci;
                    toward[v] = u;
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    let diameter = farthest(&adj, farthest(&adj, vm).0).1;

    let m = robots.len();
    let pos: Vec<usize> = start.iter().map(|s| index[s]).collect();
    let target: Vec<usize> = goal.iter().map(|&g| comp[g]).collect();
    let rm = (0..m).find(|&r| goal[r] == vm);
    let mut occ = vec![None; nodes.len()];
    for (r, &p) in pos.iter().enumerate() {
        occ[p] = Some(r);
    }
    let mut order = vec![Vec::new(); children.len()];
    for r in 0..m {
        let c = comp[pos[r]];
        if Some(r) != rm && c != NONE && c != target[r] {
            order[c].push(r);
        }
    }
    for (c, list) in order.iter_mut().enumerate() {
        let seed = derive_seed(
            ctx.cfg.priority_seed,
            &[vm_global as u64, nodes[children[c]] as u64],
        );
        SplitMix64::new(seed).shuffle(list);
    }

    let mut sim = Sim {
        vm,
        comp,
        toward,
        dist,
        adj,
        children,
        pos,
        target,
        rm,
        occ,
        moved: vec![false; m],
        order,
        move_all: ctx.cfg.move_all_migrants,
        level,
    };

    let check = ctx.cfg.check_bounds;
    let cap = 4 * (nodes.len() + m).pow(2) + 64;
    let rm_start = rm.map(|r| sim.pos[r]);
    let mut rm_moves = 0;
    let mut counts: Vec<usize> = (0..sim.children.len()).map(|c| sim.migrant_count(c)).collect();
    let mut infiltrated: Vec<bool> = (0..m).map(|r| Some(r) != rm && !sim.is_migrant(r)).collect();
    let to_global = |pos: &[usize]| pos.iter().map(|&p| nodes[p]).collect::<Vec<NodeId>>();
    let mut rows = Vec::new();

    loop {
        let migrants = (0..m).any(|r| sim.is_migrant(r));
        let parked = rm.map_or(true, |r| sim.pos[r] == vm);
        if !migrants && parked {
            break;
        }
        if rows.len() >= cap {
            return Err(BubbleError::StepCapExceeded { level, cap });
        }
        let before = sim.pos.clone();
        if migrants {
            sim.migrant_step()?;
        } else {
            sim.moved.fill(false);
            sim.rm_up(rm.expect("unparked r_m exists"));
        }
        if sim.pos == before {
            return Err(BubbleError::NoProgress { level });
        }
        if rm.is_some_and(|r| sim.pos[r] != before[r]) {
            rm_moves += 1;
        }
        rows.push(to_global(&sim.pos));
        if check {
            check_step(&sim, rows.len(), diameter, &mut counts, &mut infiltrated)?;
        }
    }

    let pre_recursive = rows.len();
    if check {
        if let Some(s) = rm_start {
            let bound = sim.dist[s] + 2 * m;
            if rm_moves > bound {
                return Err(BubbleError::BoundExceeded {
                    what: "r_m moves",
                    value: rm_moves,
                    bound,
                });
            }
        }
        if ctx.cfg.move_all_migrants && pre_recursive > diameter + 10 * m {
            return Err(BubbleError::BoundExceeded {
                what: "pre-recursive phase",
                value: pre_recursive,
                bound: diameter + 10 * m,
            });
        }
    }
    let stats = LevelStats {
        level,
        mid_node: vm_global,
        subtree_size: nodes.len(),
        robots: m,
        diameter,
        pre_recursive,
        rm_moves,
    };

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); sim.children.len()];
    for r in 0..m {
        if Some(r) != rm {
            groups[sim.target[r]].push(r);
        }
    }
    let subtrees: Vec<Vec<NodeId>> = sim
        .children
        .iter()
        .enumerate()
        .map(|(ci, &c)| {
            let mut list = vec![nodes[c]];
            list.extend(
                (0..nodes.len())
                    .filter(|&v| sim.comp[v] == ci && v != c)
                    .map(|v| nodes[v]),
            );
            list
        })
        .collect();
    let parts = subtrees
        .into_par_iter()
        .zip(groups.par_iter())
        .map(|(sub_nodes, group)| {
            let sub_robots = group.iter().map(|&r| robots[r]).collect();
            let sub_start = group.iter().map(|&r| nodes[sim.pos[r]]).collect();
            solve_level(ctx, sub_nodes, sub_robots, sub_start, level + 1)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base = to_global(&sim.pos);
    let tail = merge_parallel(&base, &groups, parts);
    rows.extend(tail.rows);
    let mut levels = vec![stats];
    levels.extend(tail.levels);
    Ok(SubPlan { rows, levels })
}

fn check_step(
    sim: &Sim,
    t: usize,
    diameter: usize,
    counts: &mut [usize],
    infiltrated: &mut [bool],
) -> Result<(), BubbleError> {
    for (c, count) in counts.iter_mut().enumerate() {
        let now = sim.migrant_count(c);
        if now > *count {
            return Err(sim.violated(format!("migrant set {c} grew at t = {t}")));
        }
        *count = now;
    }
    for (r, flag) in infiltrated.iter_mut().enumerate() {
        let inside = Some(r) != sim.rm && !sim.is_migrant(r);
        if *flag && !inside {
            return Err(sim.violated(format!("robot {r} left its target subtree at t = {t}")));
        }
        *flag = inside;
    }
    if sim.move_all {
        let k = sim.pos.len() as i64;
        for list in &sim.order {
            for (i, &r) in list.iter().enumerate() {
                if !sim.is_migrant(r) {
                    continue;
                }
                let i = i as i64 + 1;
                let bound = (diameter as i64 + 2 * i - t as i64 + 2 * k).max(i + 1);
                if sim.dist[sim.pos[r]] as i64 > bound {
                    return Err(BubbleError::BoundExceeded {
                        what: "migrant distance to v_m",
                        value: sim.dist[sim.pos[r]],
                        bound: bound as usize,
                    });
                }
            }
        }
    }
    Ok(())
}
