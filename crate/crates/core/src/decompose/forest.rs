use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, Subgraph};

/// The forest left by deleting the 2-core edges from a connected graph, grouped
/// by the core vertex each tree hangs from.
#[derive(Debug, Clone, Serialize)]
pub struct ForestStats {
    /// Non-core vertices in the tree rooted at each core vertex (root excluded),
    /// indexed like the core's vertices.
    pub tree_size: Vec<usize>,
    /// Number of non-core vertices.
    pub r: usize,
    /// Number of core vertices.
    pub s: usize,
    /// `s / (s + r)`.
    pub rho: f64,
}

/// Assigns each non-core vertex of `giant` to the core vertex its tree hangs
/// from, by a multi-source BFS out of the core that never re-enters it.
///
/// `core` must be the 2-core of `giant` with `vertex_map` into `giant`.
pub fn attached_forest(giant: &Multigraph, core: &Subgraph) -> Result<ForestStats> {
    let n = giant.vertex_count();
    let s = core.vertex_map.len();
    if s == 0 {
        return Err(Error::Precondition("attached_forest needs a nonempty core".into()));
    }
    let mut root = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    for (i, &v) in core.vertex_map.iter().enumerate() {
        if v >= n || root[v] != usize::MAX {
            return Err(Error::Precondition("core vertex map does not fit the giant".into()));
        }
        root[v] = i;
        queue.push_back(v);
    }
    let mut tree_size = vec![0usize; s];
    while let Some(v) = queue.pop_front() {
        for w in giant.neighbors(v) {
            if root[w] == usize::MAX {
                root[w] = root[v];
                tree_size[root[v]] += 1;
                queue.push_back(w);
            }
        }
    }
    if root.iter().any(|&r| r == usize::MAX) {
        return Err(Error::Disconnected);
    }
    let r = n - s;
    Ok(ForestStats {
        tree_size,
        r,
        s,
        rho: s as f64 / (s + r) as f64,
    })
}
