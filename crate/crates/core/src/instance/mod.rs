//! Problem instances: a graph plus one start and one goal per robot.

mod generate;
mod map;
mod scenario;

pub use generate::{
    gen_cycle_counterexample, gen_linear_array, gen_random_grid, gen_square_array, GenerateError,
};
pub use map::{parse_grid_map, GridMap};
pub use scenario::{load_instance, parse_scenario, write_scenario, LoadError};

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, NodeId, Path};

/// Malformed text input, with the 1-based line it was found on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("an instance needs at least one robot")]
    NoRobots,
    #[error("{starts} starts but {goals} goals")]
    LengthMismatch { starts: usize, goals: usize },
    #[error("{robots} robots do not fit on {nodes} nodes")]
    TooManyRobots { robots: usize, nodes: usize },
    #[error("node {node} of robot {robot} is not in the graph")]
    InvalidNode { robot: usize, node: NodeId },
    #[error("two robots start on node {0}")]
    DuplicateStart(NodeId),
    #[error("two robots share goal node {0}")]
    DuplicateGoal(NodeId),
    #[error("robot {0} cannot reach its goal")]
    Unreachable(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    starts: Vec<NodeId>,
    goals: Vec<NodeId>,
}

impl Instance {
    pub fn new(graph: Graph, starts: Vec<NodeId>, goals: Vec<NodeId>) -> Result<Self, InstanceError> {
        if starts.len() != goals.len() {
            return Err(InstanceError::LengthMismatch {
                starts: starts.len(),
                goals: goals.len(),
            });
        }
        if starts.is_empty() {
            return Err(InstanceError::NoRobots);
        }
        if starts.len() > graph.node_count() {
            return Err(InstanceError::TooManyRobots {
                robots: starts.len(),
                nodes: graph.node_count(),
            });
        }
        for (robot, (&s, &g)) in starts.iter().zip(&goals).enumerate() {
            for node in [s, g] {
                if !graph.contains(node) {
                    return Err(InstanceError::InvalidNode { robot, node });
                }
            }
        }
        let mut seen = HashSet::new();
        if let Some(&s) = starts.iter().find(|&&s| !seen.insert(s)) {
            return Err(InstanceError::DuplicateStart(s));
        }
        seen.clear();
        if let Some(&g) = goals.iter().find(|&&g| !seen.insert(g)) {
            return Err(InstanceError::DuplicateGoal(g));
        }
        let labels = graph.component_labels();
        if let Some(robot) = (0..starts.len()).find(|&i| labels[starts[i]] != labels[goals[i]]) {
            return Err(InstanceError::Unreachable(robot));
        }
        Ok(Instance { graph, starts, goals })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn starts(&self) -> &[NodeId] {
        &self.starts
    }

    pub fn goals(&self) -> &[NodeId] {
        &self.goals
    }

    /// Number of robots.
    pub fn k(&self) -> usize {
        self.starts.len()
    }

    /// Number of graph nodes.
    pub fn n(&self) -> usize {
        self.graph.node_count()
    }

    /// Start-to-goal distance of every robot.
    pub fn distances(&self) -> Vec<usize> {
        self.starts
            .iter()
            .zip(&self.goals)
            .map(|(&s, &g)| self.graph.distance(s, g).expect("validated reachable"))
            .collect()
    }

    /// Sum of individual start-to-goal distances.
    pub fn sic(&self) -> usize {
        self.distances().iter().sum()
    }

    /// Longest individual start-to-goal distance.
    pub fn max_distance(&self) -> usize {
        self.distances().into_iter().max().unwrap_or(0)
    }

    /// Canonical shortest path of every robot.
    pub fn shortest_paths(&self) -> Vec<Path> {
        self.starts
            .iter()
            .zip(&self.goals)
            .map(|(&s, &g)| self.graph.shortest_path(s, g).expect("validated reachable"))
            .collect()
    }
}
