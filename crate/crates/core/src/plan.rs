//! Timestep plans, their validation against the exchange rules, and the
//! plan CSV format.
//!
//! Robots move simultaneously. A move is legal when each robot stays put or
//! steps to a neighbour and no two robots end the step on the same node.
//! Two robots trading places across an edge is legal; that is the exchange
//! that distinguishes this problem from classic multi-agent path finding.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::NodeId;
use crate::instance::{Instance, ParseError};

/// `positions[t][i]` is the node of robot `i` after `t` timesteps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    positions: Vec<Vec<NodeId>>,
}

impl Plan {
    pub fn new(positions: Vec<Vec<NodeId>>) -> Self {
        Plan { positions }
    }

    /// The zero-length plan that stays at `starts`.
    pub fn stationary(starts: &[NodeId]) -> Self {
        Plan {
            positions: vec![starts.to_vec()],
        }
    }

    pub fn rows(&self) -> &[Vec<NodeId>] {
        &self.positions
    }

    pub fn row(&self, t: usize) -> &[NodeId] {
        &self.positions[t]
    }

    pub fn last_row(&self) -> &[NodeId] {
        self.positions.last().expect("plans have at least one row")
    }

    pub fn push(&mut self, row: Vec<NodeId>) {
        self.positions.push(row);
    }

    pub fn robots(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    /// Number of timesteps, i.e. rows minus one.
    pub fn makespan(&self) -> usize {
        self.positions.len().saturating_sub(1)
    }

    /// Drops every row after the first one equal to `goals`.
    pub fn truncate_at(&mut self, goals: &[NodeId]) {
        if let Some(t) = self.positions.iter().position(|r| r == goals) {
            self.positions.truncate(t + 1);
        }
    }

    /// Robot `i`'s node sequence.
    pub fn trajectory(&self, i: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.positions.iter().map(move |r| r[i])
    }

    /// Pairwise exchanges (2-cycles) in the step from `t` to `t + 1`.
    pub fn swaps_at(&self, t: usize) -> usize {
        let (now, next) = (&self.positions[t], &self.positions[t + 1]);
        let at: HashMap<NodeId, usize> = now.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        (0..now.len())
            .filter(|&i| now[i] != next[i] && at.get(&next[i]).is_some_and(|&j| j > i && next[j] == now[i]))
            .count()
    }

    pub fn swap_count(&self) -> usize {
        (0..self.makespan()).map(|t| self.swaps_at(t)).sum()
    }

    pub fn to_csv(&self) -> String {
        let k = self.robots();
        let mut out = String::from("t");
        for i in 0..k {
            out.push_str(&format!(",robot_{i}"));
        }
        out.push('\n');
        for (t, row) in self.positions.iter().enumerate() {
            out.push_str(&t.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `t,robot_0,...,robot_{k-1}` CSV written by [`Plan::to_csv`].
    pub fn from_csv(text: &[u8]) -> Result<Plan, ParseError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text);
        let header = reader
            .headers()
            .map_err(|e| ParseError::new(1, e.to_string()))?
            .clone();
        let k = header.len().saturating_sub(1);
        let expected = std::iter::once("t".to_string()).chain((0..k).map(|i| format!("robot_{i}")));
        if k == 0 || header.iter().ne(expected) {
            return Err(ParseError::new(1, "expected header `t,robot_0,...`"));
        }
        let mut positions = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| ParseError::new(line, e.to_string()))?;
            let mut fields = record.iter().map(|f| {
                f.parse::<usize>()
                    .map_err(|_| ParseError::new(line, format!("bad integer `{f}`")))
            });
            let t = fields.next().expect("csv enforces the column count")?;
            if t != i {
                return Err(ParseError::new(line, format!("expected t = {i}, found {t}")));
            }
            positions.push(fields.collect::<Result<Vec<_>, _>>()?);
        }
        if positions.is_empty() {
            return Err(ParseError::new(2, "plan has no rows"));
        }
        Ok(Plan { positions })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanMetrics {
    pub makespan: usize,
    pub swaps: usize,
    pub sic: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("plan has no rows")]
    Empty,
    #[error("row {t} has {found} entries, expected {expected}")]
    Dimension { t: usize, found: usize, expected: usize },
    #[error("first row does not match the instance starts")]
    StartMismatch,
    #[error("robots are not all at their goals at t = {t}")]
    GoalMismatch { t: usize },
    #[error("robots {i} and {j} share a node at t = {t}")]
    VertexCollision { t: usize, i: usize, j: usize },
    #[error("robot {i} makes an illegal move arriving at t = {t}")]
    IllegalMove { t: usize, i: usize },
}

/// Checks every movement rule and returns the plan's metrics.
pub fn validate_plan(instance: &Instance, plan: &Plan) -> Result<PlanMetrics, PlanError> {
    let k = instance.k();
    let rows = plan.rows();
    if rows.is_empty() {
        return Err(PlanError::Empty);
    }
    for (t, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(PlanError::Dimension {
                t,
                found: row.len(),
                expected: k,
            });
        }
    }
    if rows[0] != instance.starts() {
        return Err(PlanError::StartMismatch);
    }
    let g = instance.graph();
    let mut owner: HashMap<NodeId, usize> = HashMap::with_capacity(k);
    for (t, row) in rows.iter().enumerate() {
        if t > 0 {
            let prev = &rows[t - 1];
            if let Some(i) = (0..k).find(|&i| row[i] != prev[i] && !g.has_edge(prev[i], row[i])) {
                return Err(PlanError::IllegalMove { t, i });
            }
        }
        owner.clear();
        for (j, &v) in row.iter().enumerate() {
            if !g.contains(v) {
                return Err(PlanError::IllegalMove { t, i: j });
            }
            if let Some(&i) = owner.get(&v) {
                return Err(PlanError::VertexCollision { t, i, j });
            }
            owner.insert(v, j);
        }
    }
    let last = rows.len() - 1;
    if rows[last] != instance.goals() {
        return Err(PlanError::GoalMismatch { t: last });
    }
    Ok(PlanMetrics {
        makespan: plan.makespan(),
        swaps: plan.swap_count(),
        sic: instance.sic(),
    })
}
