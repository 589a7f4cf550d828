//! Exact minimum makespan by breadth-first search over joint
//! configurations. Only practical for a handful of robots on small graphs.
//!
//! Every robot waits or moves to a neighbour each step and the resulting
//! configuration must be collision-free. Two robots crossing the same edge
//! in opposite directions is allowed (that is a swap), as are rotations.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::NodeId;
use crate::instance::Instance;
use crate::plan::Plan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptimalError {
    #[error("search exceeded its budget of {0} states")]
    StateBudgetExceeded(usize),
}

#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub makespan: usize,
    pub plan: Plan,
}

/// Default state budget used by the CLI.
pub const DEFAULT_STATE_BUDGET: usize = 2_000_000;

fn successors(inst: &Instance, config: &[NodeId], out: &mut Vec<Vec<NodeId>>) {
    fn rec(
        inst: &Instance,
        config: &[NodeId],
        i: usize,
        current: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if i == config.len() {
            out.push(current.clone());
            return;
        }
        let here = config[i];
        let options = std::iter::once(here).chain(inst.graph().neighbors(here).iter().copied());
        for v in options {
            if !current.contains(&v) {
                current.push(v);
                rec(inst, config, i + 1, current, out);
                current.pop();
            }
        }
    }
    rec(inst, config, 0, &mut Vec::with_capacity(config.len()), out);
}

/// Minimal makespan and a witness plan.
pub fn optimal_makespan(inst: &Instance, state_budget: usize) -> Result<OptimalSolution, OptimalError> {
    let start = inst.starts().to_vec();
    let goal = inst.goals().to_vec();
    let mut parent: HashMap<Vec<NodeId>, Option<Vec<NodeId>>> = HashMap::from([(start.clone(), None)]);
    let mut layer = vec![start];
    let mut depth = 0;
    let mut buf = Vec::new();
    let reached = 'search: loop {
        if layer.contains(&goal) {
            break 'search goal.clone();
        }
        let mut next_layer = Vec::new();
        for config in &layer {
            buf.clear();
            successors(inst, config, &mut buf);
            for next in buf.drain(..) {
                if parent.contains_key(&next) {
                    continue;
                }
                if parent.len() >= state_budget {
                    return Err(OptimalError::StateBudgetExceeded(state_budget));
                }
                parent.insert(next.clone(), Some(config.clone()));
                next_layer.push(next);
            }
        }
        layer = next_layer;
        depth += 1;
    };
    let mut rows = vec![reached];
    while let Some(Some(prev)) = parent.get(rows.last().expect("nonempty")) {
        rows.push(prev.clone());
    }
    rows.reverse();
    debug_assert_eq!(rows.len(), depth + 1);
    Ok(OptimalSolution {
        makespan: depth,
        plan: Plan::new(rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::plan::validate_plan;

    fn opt(inst: &Instance) -> usize {
        let sol = optimal_makespan(inst, 100_000).unwrap();
        assert_eq!(validate_plan(inst, &sol.plan).unwrap().makespan, sol.makespan);
        sol.makespan
    }

    #[test]
    fn swap_and_rotation_take_one_step() {
        let swap = Instance::new(Graph::path(2), vec![0, 1], vec![1, 0]).unwrap();
        assert_eq!(opt(&swap), 1);
        let rot = Instance::new(Graph::cycle(3), vec![0, 1, 2], vec![1, 2, 0]).unwrap();
        assert_eq!(opt(&rot), 1);
    }

    #[test]
    fn exchange_ends_of_three_path() {
        let inst = Instance::new(Graph::path(3), vec![0, 2], vec![2, 0]).unwrap();
        assert_eq!(opt(&inst), 3);
    }

    #[test]
    fn already_solved() {
        let inst = Instance::new(Graph::path(3), vec![1], vec![1]).unwrap();
        assert_eq!(opt(&inst), 0);
    }

    #[test]
    fn budget_is_reported() {
        let inst = Instance::new(Graph::path(9), vec![0, 8], vec![8, 0]).unwrap();
        assert_eq!(
            optimal_makespan(&inst, 5).unwrap_err(),
            OptimalError::StateBudgetExceeded(5)
        );
    }
}
