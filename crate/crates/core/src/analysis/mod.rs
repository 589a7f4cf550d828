//! Path relations between shortest paths, the swap-need and swap-risk
//! predicates, and the potential `Φ` that strictly decreases during RIP.
//!
//! All predicates take the robots' current paths; a robot's position is the
//! first node of its path and its goal the last.

pub mod oracle;

pub use oracle::{swap_need_oracle, swap_risk_oracle, OracleConfig, OracleError};

use thiserror::Error;

use crate::graph::{Graph, NodeId, Path};
use crate::instance::Instance;

/// How the common nodes of two paths are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathRelation {
    Disjoint,
    /// Exactly one common node.
    TriviallyParallel,
    /// At least two common nodes, same order in both paths.
    Parallel,
    /// At least two common nodes, reversed order.
    Antiparallel,
}

impl PathRelation {
    /// True for both parallel flavours.
    pub fn is_parallel(self) -> bool {
        matches!(self, PathRelation::Parallel | PathRelation::TriviallyParallel)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("path {0:?} is not a shortest path")]
    NotShortest(Vec<NodeId>),
}

/// Order-preserving containment: every node of `sub` appears in `sup`, in
/// the same order (the `≺` relation).
pub fn is_subsequence(sub: &[NodeId], sup: &[NodeId]) -> bool {
    let mut it = sup.iter();
    sub.iter().all(|v| it.any(|w| w == v))
}

fn has_repeats(p: &[NodeId]) -> bool {
    (1..p.len()).any(|i| p[..i].contains(&p[i]))
}

/// Classifies two paths by the order of their common nodes.
///
/// Shortest paths are never mixed-order; mixed order or a repeated node is
/// reported as [`AnalysisError::NotShortest`]. Use
/// [`classify_shortest_paths`] to additionally check lengths against a graph.
pub fn classify_paths(p: &Path, q: &Path) -> Result<PathRelation, AnalysisError> {
    for path in [p, q] {
        if has_repeats(path.nodes()) {
            return Err(AnalysisError::NotShortest(path.nodes().to_vec()));
        }
    }
    let positions: Vec<usize> = p
        .nodes()
        .iter()
        .filter_map(|v| q.nodes().iter().position(|w| w == v))
        .collect();
    match positions.len() {
        0 => Ok(PathRelation::Disjoint),
        1 => Ok(PathRelation::TriviallyParallel),
        _ if positions.windows(2).all(|w| w[0] < w[1]) => Ok(PathRelation::Parallel),
        _ if positions.windows(2).all(|w| w[0] > w[1]) => Ok(PathRelation::Antiparallel),
        _ => Err(AnalysisError::NotShortest(p.nodes().to_vec())),
    }
}

/// [`classify_paths`] after checking both paths are shortest in `g`.
pub fn classify_shortest_paths(g: &Graph, p: &Path, q: &Path) -> Result<PathRelation, AnalysisError> {
    for path in [p, q] {
        if !path.is_shortest(g) {
            return Err(AnalysisError::NotShortest(path.nodes().to_vec()));
        }
    }
    classify_paths(p, q)
}

/// Whether `c` swap-needs `d`: `d`'s goal lies on `c`'s path, the paths are
/// parallel, and `d`'s path is a subsequence of `c`'s.
pub fn swap_need(pc: &Path, pd: &Path) -> Result<bool, AnalysisError> {
    let rel = classify_paths(pc, pd)?;
    let gd = pd.last();
    Ok(rel.is_parallel() && pc.nodes().contains(&gd) && is_subsequence(pd.nodes(), pc.nodes()))
}

/// Whether `a` swap-risks `b`.
///
/// With `pa[m] = g_b`: antiparallel paths need `m > 0`; parallel paths need
/// `pa[0..m]` not to be a subsequence of `pb`.
pub fn swap_risk(pa: &Path, pb: &Path) -> Result<bool, AnalysisError> {
    let rel = classify_paths(pa, pb)?;
    let Some(m) = pa.nodes().iter().position(|&v| v == pb.last()) else {
        return Ok(false);
    };
    Ok(match rel {
        PathRelation::Disjoint => false,
        PathRelation::Antiparallel => m > 0,
        PathRelation::Parallel | PathRelation::TriviallyParallel => {
            !is_subsequence(&pa.nodes()[..m], pb.nodes())
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PotentialValue {
    pub distance_sum: usize,
    pub risk_count: usize,
    pub phi: usize,
}

/// `Φ` = remaining distances plus ordered pairs `(i, j)` with `i`
/// swap-risking `j`. `paths[i]` must run from robot `i`'s position to its goal.
pub fn potential(instance: &Instance, paths: &[Path]) -> Result<PotentialValue, AnalysisError> {
    debug_assert_eq!(paths.len(), instance.k());
    let distance_sum = paths.iter().map(Path::cost).sum();
    let mut risk_count = 0;
    for (i, pi) in paths.iter().enumerate() {
        for (j, pj) in paths.iter().enumerate() {
            if i != j && swap_risk(pi, pj)? {
                risk_count += 1;
            }
        }
    }
    Ok(PotentialValue {
        distance_sum,
        risk_count,
        phi: distance_sum + risk_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[NodeId]) -> Path {
        Path(v.to_vec())
    }

    // a, b, c, d, e = 0, 1, 2, 3, 4
    #[test]
    fn relation_examples() {
        let p1 = p(&[0, 1, 2]);
        let p2 = p(&[0, 1, 3]);
        let p3 = p(&[3, 1, 2, 4]);
        assert_eq!(classify_paths(&p1, &p2), Ok(PathRelation::Parallel));
        assert_eq!(classify_paths(&p1, &p3), Ok(PathRelation::Parallel));
        assert_eq!(classify_paths(&p2, &p3), Ok(PathRelation::Antiparallel));
        assert_eq!(classify_paths(&p1, &p(&[5, 6])), Ok(PathRelation::Disjoint));
        assert_eq!(
            classify_paths(&p1, &p(&[5, 2])),
            Ok(PathRelation::TriviallyParallel)
        );
        assert!(classify_paths(&p(&[0, 1, 2]), &p(&[1, 0, 2])).is_err());
        assert!(classify_paths(&p(&[0, 1, 0]), &p(&[1])).is_err());
    }

    #[test]
    fn shortest_check_uses_graph() {
        let g = Graph::cycle(4);
        assert!(classify_shortest_paths(&g, &p(&[0, 1, 2]), &p(&[3])).is_ok());
        assert!(classify_shortest_paths(&g, &p(&[0, 1, 2, 3]), &p(&[3])).is_err());
    }

    #[test]
    fn subsequence() {
        assert!(is_subsequence(&[1, 2], &[0, 1, 2, 3]));
        assert!(!is_subsequence(&[2, 1], &[0, 1, 2, 3]));
        assert!(is_subsequence(&[0, 1, 2, 3], &[0, 1, 2, 3]));
        assert!(is_subsequence(&[], &[4]));
    }

    #[test]
    fn need_examples() {
        assert_eq!(swap_need(&p(&[0, 1, 2, 3]), &p(&[1, 2])), Ok(true));
        assert_eq!(swap_need(&p(&[0, 1, 2]), &p(&[3, 2])), Ok(false));
        assert_eq!(swap_need(&p(&[0, 1]), &p(&[2, 3])), Ok(false));
    }

    #[test]
    fn risk_examples() {
        assert_eq!(swap_risk(&p(&[0, 1]), &p(&[1, 0])), Ok(false));
        assert_eq!(swap_risk(&p(&[1, 0]), &p(&[0, 1])), Ok(false));
        assert_eq!(swap_risk(&p(&[0, 1, 2]), &p(&[3, 2])), Ok(true));
        let pc = p(&[0, 1, 2, 3]);
        let pd = p(&[4, 3, 2, 1]);
        assert_eq!(swap_risk(&pc, &pd), Ok(true));
        assert_eq!(swap_risk(&pd, &pc), Ok(true));
    }

    #[test]
    fn potential_examples() {
        let inst = Instance::new(Graph::path(6), vec![0], vec![5]).unwrap();
        let v = potential(&inst, &inst.shortest_paths()).unwrap();
        assert_eq!(v.phi, 5);

        let inst = Instance::new(Graph::path(2), vec![0, 1], vec![1, 0]).unwrap();
        let v = potential(&inst, &inst.shortest_paths()).unwrap();
        assert_eq!((v.distance_sum, v.risk_count, v.phi), (2, 0, 2));

        let done = Instance::new(Graph::path(3), vec![0, 2], vec![0, 2]).unwrap();
        assert_eq!(potential(&done, &done.shortest_paths()).unwrap().phi, 0);
    }
}
