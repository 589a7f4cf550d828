//! Removal of out-and-back excursions from a finished plan.

use std::collections::HashMap;

use crate::graph::NodeId;
use crate::plan::Plan;

/// Every arrival `(t, robot)` at each node, in time order.
fn arrivals(rows: &[Vec<NodeId>]) -> HashMap<NodeId, Vec<(usize, usize)>> {
    let mut out: HashMap<NodeId, Vec<(usize, usize)>> = HashMap::new();
    for (t, row) in rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            if t == 0 || rows[t - 1][i] != v {
                out.entry(v).or_default().push((t, i));
            }
        }
    }
    out
}

/// One sweep; returns whether anything changed.
fn pass(rows: &mut [Vec<NodeId>]) -> bool {
    let visits = arrivals(rows);
    let k = rows.first().map_or(0, Vec::len);
    let mut changed = false;
    for i in 0..k {
        let mut t = 0;
        while t + 1 < rows.len() {
            let v = rows[t][i];
            if rows[t + 1][i] == v {
                t += 1;
                continue;
            }
            let Some(back) = (t + 2..rows.len()).find(|&s| rows[s][i] == v) else {
                break;
            };
            let visited = visits[&v].iter().any(|&(s, j)| j != i && s > t && s < back);
            if !visited {
                for row in &mut rows[t + 1..back] {
                    row[i] = v;
                }
                changed = true;
                t = back;
            } else {
                t += 1;
            }
        }
    }
    changed
}

/// Replaces every excursion that leaves a node and returns to it, with no
/// other robot entering the node meanwhile, by waiting; repeats until
/// nothing changes. The result is valid whenever the input is.
pub fn postprocess_redundancy(plan: &Plan) -> Plan {
    let mut rows = plan.rows().to_vec();
    while pass(&mut rows) {}
    Plan::new(rows)
}
