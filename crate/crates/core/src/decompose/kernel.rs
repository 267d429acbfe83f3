use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// Kernel of a graph of minimum degree 2, with the paths it was made from.
///
/// Kernel vertex `i` is input vertex `kernel_vertices[i]`. Kernel edge `e`
/// between kernel vertices `(a, b)` with `a <= b` stands for the maximal 2-path
/// whose interior input vertices are `path_map[e]`, listed from `a` to `b`,
/// and whose input edges are `path_edges[e]` in the same order.
#[derive(Debug, Clone, Serialize)]
pub struct KernelResult {
    pub kernel: Multigraph,
    pub kernel_vertices: Vec<usize>,
    pub path_map: Vec<Vec<usize>>,
    pub path_edges: Vec<Vec<usize>>,
    /// Isolated cycles of the input: vertices in cyclic order.
    pub dropped_cycles: Vec<Vec<usize>>,
    pub dropped_cycle_edges: Vec<Vec<usize>>,
    pub input_vertex_count: usize,
}

impl KernelResult {
    /// Input ids of the two ends of kernel edge `e`.
    pub fn path_ends(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.kernel.endpoints(e);
        (self.kernel_vertices[a], self.kernel_vertices[b])
    }

    /// Rebuilds the input graph on its own vertex ids: every kernel edge becomes
    /// its stored 2-path and the dropped cycles are added back. Edge ids differ
    /// from the input but the edge multiset is identical.
    pub fn expand(&self) -> Multigraph {
        let mut g = Multigraph::new(self.input_vertex_count);
        for e in 0..self.kernel.edge_count() {
            let (a, b) = self.path_ends(e);
            let mut prev = a;
            for &v in &self.path_map[e] {
                g.add_edge(prev, v).expect("stored ids are valid");
                prev = v;
            }
            g.add_edge(prev, b).expect("stored ids are valid");
        }
        for cyc in &self.dropped_cycles {
            for (i, &v) in cyc.iter().enumerate() {
                g.add_edge(v, cyc[(i + 1) % cyc.len()]).expect("stored ids are valid");
            }
        }
        g
    }
}

/// Follows a 2-path that leaves `start` along edge `first` to `next`, until it
/// reaches a vertex of degree other than 2.
fn trace(g: &Multigraph, first: usize, next: usize, used: &mut [bool]) -> (Vec<usize>, Vec<usize>, usize) {
    let mut interior = Vec::new();
    let mut edges = vec![first];
    used[first] = true;
    let (mut cur, mut via) = (next, first);
    while g.deg(cur) == 2 {
        interior.push(cur);
        let &(e, w) = g
            .incident(cur)
            .iter()
            .find(|&&(e, _)| e != via)
            .expect("degree-2 vertex on a path has a second edge");
        used[e] = true;
        edges.push(e);
        via = e;
        cur = w;
    }
    (interior, edges, cur)
}

/// Suppresses every degree-2 vertex of `g0`: each maximal 2-path joining
/// vertices of degree at least 3 becomes one kernel edge. Components that are
/// bare cycles have no such vertex; they are reported in `dropped_cycles`.
///
/// Kernel vertices keep the relative order of their input ids. Paths are
/// traced from kernel vertices in ascending id order, so each path is stored
/// from its smaller end; a loop starts along the first incident edge of its
/// vertex.
pub fn kernel(g0: &Multigraph) -> Result<KernelResult> {
    let n = g0.vertex_count();
    if let Some(v) = (0..n).find(|&v| g0.deg(v) < 2) {
        return Err(Error::Precondition(format!(
            "kernel needs minimum degree 2, vertex {v} has degree {}",
            g0.deg(v)
        )));
    }
    let mut new_id = vec![usize::MAX; n];
    let mut kernel_vertices = Vec::new();
    for v in 0..n {
        if g0.deg(v) >= 3 {
            new_id[v] = kernel_vertices.len();
            kernel_vertices.push(v);
        }
    }
    let mut kernel = Multigraph::new(kernel_vertices.len());
    let mut used = vec![false; g0.edge_count()];
    let mut path_map = Vec::new();
    let mut path_edges = Vec::new();
    for &u in &kernel_vertices {
        for &(e, w) in g0.incident(u) {
            if used[e] {
                continue;
            }
            let (interior, edges, end) = trace(g0, e, w, &mut used);
            kernel.add_edge(new_id[u], new_id[end])?;
            path_map.push(interior);
            path_edges.push(edges);
        }
    }
    let mut on_path = vec![false; n];
    for p in &path_map {
        for &v in p {
            on_path[v] = true;
        }
    }
    let mut dropped_cycles = Vec::new();
    let mut dropped_cycle_edges = Vec::new();
    for s in 0..n {
        if g0.deg(s) != 2 || on_path[s] {
            continue;
        }
        let mut verts = vec![s];
        let mut edges = Vec::new();
        on_path[s] = true;
        let (mut via, mut cur) = g0.incident(s)[0];
        used[via] = true;
        edges.push(via);
        while cur != s {
            verts.push(cur);
            on_path[cur] = true;
            let &(e, w) = g0
                .incident(cur)
                .iter()
                .find(|&&(e, _)| e != via)
                .expect("cycle vertex has two edges");
            used[e] = true;
            edges.push(e);
            via = e;
            cur = w;
        }
        dropped_cycles.push(verts);
        dropped_cycle_edges.push(edges);
    }
    Ok(KernelResult {
        kernel,
        kernel_vertices,
        path_map,
        path_edges,
        dropped_cycles,
        dropped_cycle_edges,
        input_vertex_count: n,
    })
}

/// One entry per kernel edge: interior length and input-id endpoints.
pub fn maximal_2paths(g0: &Multigraph) -> Result<Vec<(usize, (usize, usize))>> {
    let k = kernel(g0)?;
    Ok((0..k.kernel.edge_count())
        .map(|e| (k.path_map[e].len(), k.path_ends(e)))
        .collect())
}
