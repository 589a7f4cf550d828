//! Undirected unit-cost graphs, BFS shortest paths and spanning trees.
//!
//! Every traversal breaks ties toward the lowest node id so that all
//! solvers built on top of this module are reproducible bit for bit.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} is out of range")]
    InvalidNode(NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("no path from {from} to {to}")]
    Unreachable { from: NodeId, to: NodeId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no nodes")]
    Empty,
}

/// Undirected graph with sorted, duplicate-free adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.node_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Graph with `node_count` isolated nodes.
    pub fn new(node_count: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); node_count],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u >= node_count {
                return Err(GraphError::InvalidNode(u));
            }
            if v >= node_count {
                return Err(GraphError::InvalidNode(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path edges")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least three nodes");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle edges")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("valid complete edges")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star edges")
    }

    /// `width` x `height` 4-connected grid, node ids row-major.
    pub fn grid(width: usize, height: usize) -> Self {
        let mut edges = Vec::new();
        for y in 0..height {
            for x in 0..width {
                let v = y * width + x;
                if x + 1 < width {
                    edges.push((v, v + 1));
                }
                if y + 1 < height {
                    edges.push((v, v + width));
                }
            }
        }
        Self::from_edges(width * height, edges).expect("valid grid edges")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.adj.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidNode(v))
        }
    }

    /// BFS distances from `source`; `None` marks unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have a distance");
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Edge count of a shortest `u`-`v` path, `None` when disconnected.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<usize> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        if u == v {
            return Some(0);
        }
        self.bfs_distances(u)[v]
    }

    /// Shortest path from `s` to `t`. Walking back from `t`, the lowest-id
    /// predecessor one step closer to `s` is always taken.
    pub fn shortest_path(&self, s: NodeId, t: NodeId) -> Result<Path, GraphError> {
        self.check(s)?;
        self.check(t)?;
        let dist = self.bfs_distances(s);
        self.path_from_distances(&dist, s, t)
    }

    /// Same as [`Graph::shortest_path`] but reuses a distance table from `s`.
    pub fn path_from_distances(
        &self,
        dist_from_s: &[Option<usize>],
        s: NodeId,
        t: NodeId,
    ) -> Result<Path, GraphError> {
        let mut d = dist_from_s[t].ok_or(GraphError::Unreachable { from: s, to: t })?;
        let mut nodes = Vec::with_capacity(d + 1);
        let mut cur = t;
        nodes.push(cur);
        while d > 0 {
            cur = self.adj[cur]
                .iter()
                .copied()
                .find(|&u| dist_from_s[u] == Some(d - 1))
                .expect("BFS layers are contiguous");
            nodes.push(cur);
            d -= 1;
        }
        nodes.reverse();
        Ok(Path(nodes))
    }

    /// Every shortest path from `s` to `t`, in lexicographic order.
    pub fn all_shortest_paths(&self, s: NodeId, t: NodeId) -> Vec<Path> {
        let to_t = self.bfs_distances(t);
        let Some(d) = to_t[s] else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut stack = vec![s];
        self.extend_shortest(&to_t, d, &mut stack, &mut out);
        out
    }

    fn extend_shortest(
        &self,
        to_t: &[Option<usize>],
        remaining: usize,
        stack: &mut Vec<NodeId>,
        out: &mut Vec<Path>,
    ) {
        if remaining == 0 {
            out.push(Path(stack.clone()));
            return;
        }
        let cur = *stack.last().expect("stack is never empty");
        for &v in &self.adj[cur] {
            if to_t[v] == Some(remaining - 1) {
                stack.push(v);
                self.extend_shortest(to_t, remaining - 1, stack, out);
                stack.pop();
            }
        }
    }

    /// Largest distance from `v`, or `None` if some node is unreachable.
    pub fn eccentricity(&self, v: NodeId) -> Option<usize> {
        self.bfs_distances(v)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Node of minimum eccentricity, lowest id on ties.
    pub fn one_center(&self) -> Result<NodeId, GraphError> {
        if self.node_count() == 0 {
            return Err(GraphError::Empty);
        }
        let mut best: Option<(usize, NodeId)> = None;
        for v in 0..self.node_count() {
            let ecc = self.eccentricity(v).ok_or(GraphError::Disconnected)?;
            if best.map_or(true, |(e, _)| ecc < e) {
                best = Some((ecc, v));
            }
        }
        Ok(best.expect("nonempty graph").1)
    }

    /// BFS spanning tree from `root`; each node hangs off its lowest-id
    /// neighbor in the previous BFS layer.
    pub fn bfs_spanning_tree(&self, root: NodeId) -> Result<Tree, GraphError> {
        self.check(root)?;
        let dist = self.bfs_distances(root);
        let mut parent = vec![None; self.node_count()];
        for v in 0..self.node_count() {
            let dv = dist[v].ok_or(GraphError::Disconnected)?;
            if dv > 0 {
                parent[v] = self.adj[v].iter().copied().find(|&u| dist[u] == Some(dv - 1));
            }
        }
        let members = vec![true; self.node_count()];
        Ok(Tree::from_parents(root, parent, members))
    }

    /// Connected component label per node; labels are assigned in order of
    /// each component's lowest node id.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.node_count()];
        let mut next = 0;
        for s in 0..self.node_count() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.component_labels().iter().all(|&l| l == 0)
    }

    /// Subgraph on `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[NodeId]) -> Graph {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let edges = nodes.iter().enumerate().flat_map(|(i, &v)| {
            let index = &index;
            self.adj[v]
                .iter()
                .filter(move |&&u| index[u] != usize::MAX && i < index[u])
                .map(move |&u| (i, index[u]))
        });
        Graph::from_edges(nodes.len(), edges.collect::<Vec<_>>()).expect("induced edges are valid")
    }
}

/// A walk through the graph; solvers only ever store shortest paths here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<NodeId>);

impl Path {
    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn first(&self) -> NodeId {
        self.0[0]
    }

    pub fn last(&self) -> NodeId {
        *self.0.last().expect("paths are nonempty")
    }

    /// Number of edges.
    pub fn cost(&self) -> usize {
        self.0.len() - 1
    }

    /// Consecutive nodes adjacent and no node repeated.
    pub fn is_simple_walk(&self, g: &Graph) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.0.is_empty()
            && self.0.iter().all(|&v| g.contains(v) && seen.insert(v))
            && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    pub fn is_shortest(&self, g: &Graph) -> bool {
        self.is_simple_walk(g) && g.distance(self.first(), self.last()) == Some(self.cost())
    }
}

impl From<Vec<NodeId>> for Path {
    fn from(nodes: Vec<NodeId>) -> Self {
        Path(nodes)
    }
}

/// Rooted tree over a subset of a graph's node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    members: Vec<bool>,
    depth: Vec<usize>,
    children: Vec<Vec<NodeId>>,
}

impl Tree {
    /// `parent[v]` must be `None` exactly for the root and non-members.
    pub fn from_parents(root: NodeId, parent: Vec<Option<NodeId>>, members: Vec<bool>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        let mut depth = vec![0; n];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &c in &children[u] {
                depth[c] = depth[u] + 1;
                queue.push_back(c);
            }
        }
        Tree {
            root,
            parent,
            members,
            depth,
            children,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.members.len()).filter(|&v| self.members[v])
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }

    /// The tree's edges as a graph on the same node id space.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.parent.len(), self.edges().collect::<Vec<_>>()).expect("tree edges are valid")
    }

    /// Longest path in the tree, in edges.
    pub fn diameter(&self) -> usize {
        let g = self.to_graph();
        let far = |s: NodeId| {
            let d = g.bfs_distances(s);
            self.nodes()
                .map(|v| (d[v].unwrap_or(0), v))
                .max_by_key(|&(dv, v)| (dv, std::cmp::Reverse(v)))
                .expect("tree is nonempty")
        };
        let (_, a) = far(self.root);
        far(a).0
    }

    pub fn max_degree(&self) -> usize {
        self.nodes()
            .map(|v| self.children[v].len() + usize::from(self.parent[v].is_some()))
            .max()
            .unwrap_or(0)
    }
}
