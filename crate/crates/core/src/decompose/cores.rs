use std::collections::VecDeque;

use crate::multigraph::{Multigraph, Subgraph};

/// 2-core with id maps into `g`.
///
/// Vertices of current degree at most 1 are queued and deleted until none are
/// left. The result is the unique maximal subgraph of minimum degree 2, so it
/// does not depend on the queue discipline.
pub fn two_core_map(g: &Multigraph) -> Subgraph {
    let n = g.vertex_count();
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut queued = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    for &v in &queue {
        queued[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        for &(_, w) in g.incident(v) {
            if removed[w] {
                continue;
            }
            deg[w] -= 1;
            if deg[w] <= 1 && !queued[w] {
                queued[w] = true;
                queue.push_back(w);
            }
        }
    }
    let keep: Vec<bool> = removed.iter().map(|r| !r).collect();
    g.induced_subgraph(&keep)
}

/// Maximum subgraph of minimum degree at least 2 (possibly empty).
pub fn two_core(g: &Multigraph) -> Multigraph {
    two_core_map(g).graph
}

/// 2-core without its isolated-cycle components, with id maps into `g`.
pub fn trimmed_core_map(g: &Multigraph) -> Subgraph {
    let core = two_core_map(g);
    let parts = core.graph.components();
    let mut has_branch = vec![false; parts.count()];
    for v in 0..core.graph.vertex_count() {
        if core.graph.deg(v) > 2 {
            has_branch[parts.component[v]] = true;
        }
    }
    let mut keep = vec![false; g.vertex_count()];
    for (i, &v) in core.vertex_map.iter().enumerate() {
        keep[v] = has_branch[parts.component[i]];
    }
    g.induced_subgraph(&keep)
}

/// 2-core minus every component that is just a cycle.
pub fn trimmed_core(g: &Multigraph) -> Multigraph {
    trimmed_core_map(g).graph
}
