//! Sorting-network baselines for fully packed arrays: odd-even
//! transposition sort on a path and shearsort on a square grid.
//!
//! A robot's sort key is the rank of its goal in the target order, so a
//! sorted array is exactly the goal configuration. Every exchange is a
//! swap between adjacent robots. Rounds in which no pair exchanges are not
//! emitted, and the plan ends as soon as every robot is home.

use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::instance::Instance;
use crate::plan::Plan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("odd-even sort needs a path graph")]
    NotPathGraph,
    #[error("shearsort needs a square grid")]
    NotSquareGrid,
    #[error("baselines need one robot per node starting on its own index")]
    NotDense,
}

fn check_dense(inst: &Instance) -> Result<(), BaselineError> {
    let identity = inst.starts().iter().enumerate().all(|(i, &s)| i == s);
    if inst.k() == inst.n() && identity {
        Ok(())
    } else {
        Err(BaselineError::NotDense)
    }
}

/// One odd-even transposition round over `line` (node ids in order).
/// `key[v]` is the rank of the robot on node `v`; `robot_at` is permuted
/// alongside. Returns whether any pair exchanged.
fn transposition_round(line: &[NodeId], key: &mut [usize], robot_at: &mut [usize], parity: usize) -> bool {
    let mut any = false;
    let mut i = parity;
    while i + 1 < line.len() {
        let (a, b) = (line[i], line[i + 1]);
        if key[a] > key[b] {
            key.swap(a, b);
            robot_at.swap(a, b);
            any = true;
        }
        i += 2;
    }
    any
}

fn is_sorted(line: &[NodeId], key: &[usize]) -> bool {
    line.windows(2).all(|w| key[w[0]] < key[w[1]])
}

/// Tracks which robot is on which node and records plan rows.
struct Board {
    robot_at: Vec<usize>,
    key: Vec<usize>,
    plan: Plan,
}

impl Board {
    fn new(inst: &Instance, rank_of_node: impl Fn(NodeId) -> usize) -> Self {
        let robot_at: Vec<usize> = (0..inst.n()).collect();
        let key = inst.goals().iter().map(|&g| rank_of_node(g)).collect();
        Board {
            robot_at,
            key,
            plan: Plan::stationary(inst.starts()),
        }
    }

    /// Runs one parallel round over all `lines`; records a row if anything moved.
    fn round(&mut self, lines: &[Vec<NodeId>], parity: usize) {
        let mut any = false;
        for line in lines {
            any |= transposition_round(line, &mut self.key, &mut self.robot_at, parity);
        }
        if any {
            let mut row = vec![0; self.robot_at.len()];
            for (v, &r) in self.robot_at.iter().enumerate() {
                row[r] = v;
            }
            self.plan.push(row);
        }
    }

    /// Odd-even transposition on every line until all are sorted.
    fn sort_lines(&mut self, lines: &[Vec<NodeId>]) {
        let mut parity = 0;
        while !lines.iter().all(|l| is_sorted(l, &self.key)) {
            self.round(lines, parity);
            parity ^= 1;
        }
    }
}

/// Parallel bubblesort on a fully packed path.
pub fn odd_even_sort_plan(inst: &Instance) -> Result<Plan, BaselineError> {
    let n = inst.n();
    if *inst.graph() != Graph::path(n) {
        return Err(BaselineError::NotPathGraph);
    }
    check_dense(inst)?;
    let mut board = Board::new(inst, |v| v);
    board.sort_lines(&[(0..n).collect()]);
    Ok(board.plan)
}

/// Position of grid node `v` in boustrophedon order (even rows left to
/// right, odd rows right to left).
pub fn snake_rank(side: usize, v: NodeId) -> usize {
    let (x, y) = (v % side, v / side);
    if y % 2 == 0 {
        y * side + x
    } else {
        y * side + (side - 1 - x)
    }
}

/// `⌈lg m⌉` for `m ≥ 1`.
pub fn ceil_lg(m: usize) -> usize {
    m.next_power_of_two().trailing_zeros() as usize
}

/// Shearsort's phase budget `2⌈lg n⌉ + 1` for `n = side²` nodes.
pub fn shearsort_phase_budget(side: usize) -> usize {
    2 * ceil_lg(side * side) + 1
}

/// Shearsort on a fully packed square grid: alternating snake-ordered row
/// phases and ascending column phases, each an odd-even transposition sort.
pub fn shearsort_plan(inst: &Instance) -> Result<Plan, BaselineError> {
    let n = inst.n();
    let side = (1..=n).find(|s| s * s >= n).unwrap_or(0);
    if side * side != n || *inst.graph() != Graph::grid(side, side) {
        return Err(BaselineError::NotSquareGrid);
    }
    check_dense(inst)?;
    let rows: Vec<Vec<NodeId>> = (0..side)
        .map(|y| {
            let row: Vec<NodeId> = (0..side).map(|x| y * side + x).collect();
            if y % 2 == 0 {
                row
            } else {
                row.into_iter().rev().collect()
            }
        })
        .collect();
    let cols: Vec<Vec<NodeId>> = (0..side)
        .map(|x| (0..side).map(|y| y * side + x).collect())
        .collect();
    let mut board = Board::new(inst, |v| snake_rank(side, v));
    let snake: Vec<NodeId> = rows.concat();
    for phase in 0..shearsort_phase_budget(side) {
        if is_sorted(&snake, &board.key) {
            break;
        }
        board.sort_lines(if phase % 2 == 0 { &rows } else { &cols });
    }
    debug_assert!(is_sorted(&snake, &board.key));
    Ok(board.plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_square_array, Instance};
    use crate::plan::validate_plan;

    fn line(goals: Vec<usize>) -> Instance {
        let n = goals.len();
        Instance::new(Graph::path(n), (0..n).collect(), goals).unwrap()
    }

    #[test]
    fn odd_even_small_cases() {
        let two = line(vec![1, 0]);
        assert_eq!(
            validate_plan(&two, &odd_even_sort_plan(&two).unwrap())
                .unwrap()
                .makespan,
            1
        );
        let four = line(vec![3, 2, 1, 0]);
        assert_eq!(
            validate_plan(&four, &odd_even_sort_plan(&four).unwrap())
                .unwrap()
                .makespan,
            4
        );
    }

    #[test]
    fn rejects_wrong_shapes() {
        let cyc = Instance::new(Graph::cycle(3), vec![0, 1, 2], vec![1, 2, 0]).unwrap();
        assert_eq!(odd_even_sort_plan(&cyc), Err(BaselineError::NotPathGraph));
        assert_eq!(shearsort_plan(&cyc), Err(BaselineError::NotSquareGrid));
        let sparse = Instance::new(Graph::path(3), vec![0], vec![2]).unwrap();
        assert_eq!(odd_even_sort_plan(&sparse), Err(BaselineError::NotDense));
    }

    #[test]
    fn snake_order() {
        let ranks: Vec<usize> = (0..9).map(|v| snake_rank(3, v)).collect();
        assert_eq!(ranks, vec![0, 1, 2, 5, 4, 3, 6, 7, 8]);
    }

    #[test]
    fn shearsort_small_cases() {
        let one = gen_square_array(1, 0).unwrap();
        assert_eq!(shearsort_plan(&one).unwrap().makespan(), 0);
        let two = Instance::new(Graph::grid(2, 2), vec![0, 1, 2, 3], vec![1, 0, 2, 3]).unwrap();
        let m = validate_plan(&two, &shearsort_plan(&two).unwrap()).unwrap();
        assert!(m.makespan <= shearsort_phase_budget(2) * 2);
        let four = gen_square_array(4, 11).unwrap();
        let m = validate_plan(&four, &shearsort_plan(&four).unwrap()).unwrap();
        assert!(m.makespan <= 36);
    }

    #[test]
    fn lg_helpers() {
        assert_eq!(ceil_lg(1), 0);
        assert_eq!(ceil_lg(16), 4);
        assert_eq!(ceil_lg(17), 5);
        assert_eq!(shearsort_phase_budget(4), 9);
    }
}
