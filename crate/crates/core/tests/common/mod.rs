#![allow(dead_code)]

use perr_core::graph::{Graph, NodeId, Path};
use perr_core::rng::SplitMix64;

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` nodes.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| pairs[b])
            .collect();
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut m: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                m.sort_unstable();
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected(n: usize, extra: usize, rng: &mut SplitMix64) -> Graph {
    let order = rng.permutation(n);
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((order[rng.below(i)], order[i]));
    }
    for _ in 0..extra {
        let (u, v) = (rng.below(n), rng.below(n));
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random tree whose maximum degree is at most `max_degree`.
pub fn random_tree(n: usize, max_degree: usize, rng: &mut SplitMix64) -> Graph {
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<NodeId> = (0..v).filter(|&u| degree[u] < max_degree).collect();
        let u = open[rng.below(open.len())];
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v));
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Every shortest path between every ordered pair of nodes.
pub fn all_shortest_paths(g: &Graph) -> Vec<Path> {
    let n = g.node_count();
    (0..n)
        .flat_map(|s| (0..n).flat_map(move |t| g.all_shortest_paths(s, t)))
        .collect()
}

/// Ordered pairs of shortest paths with distinct starts and distinct goals.
pub fn robot_path_pairs(g: &Graph) -> Vec<(Path, Path)> {
    let paths = all_shortest_paths(g);
    let mut out = Vec::new();
    for a in &paths {
        for b in &paths {
            if a.first() != b.first() && a.last() != b.last() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Hub `v` with leaves `s_1..s_k` and a tail `v - w_1 - ... - w_{k-1}`.
/// Robot `i` starts on leaf `s_i`; robot 0 ends on `v`, robot `i > 0` on
/// `w_i`, so the paths beyond `v` are nested prefixes of one another.
pub fn nested_bottleneck(k: usize) -> perr_core::Instance {
    // node 0 = v, 1..=k leaves, k+1.. tail
    let mut edges: Vec<(usize, usize)> = (1..=k).map(|s| (0, s)).collect();
    let mut prev = 0;
    for w in k + 1..2 * k {
        edges.push((prev, w));
        prev = w;
    }
    let g = Graph::from_edges(2 * k, edges).unwrap();
    let starts = (1..=k).collect();
    let goals = (0..k).map(|i| if i == 0 { 0 } else { k + i }).collect();
    perr_core::Instance::new(g, starts, goals).unwrap()
}
