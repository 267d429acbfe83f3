//! The painted kernel, severe stripping and the `N`-reduced core.
//!
//! Stripping works on the kernel of the trimmed core `G0`. Kernel vertices
//! that touch many vertices outside `G0`, and kernel edges whose 2-paths are
//! long, start out red. Red edges are removed one at a time; vertices that
//! lose an edge turn pink, vertices that lose two turn red, and a vertex left
//! with degree 2 is suppressed by merging its two edges. The surviving graph,
//! re-inflated to 2-path form, is the reduced core.

mod fixpoint;
mod process;

pub use fixpoint::{reduced_core_fixpoint, reduced_core_fixpoint_shuffled};
pub use process::{severe_strip, strip_state, StepRecord, StripEvent, StripState, StripTrace};

use serde::{Deserialize, Serialize};

use crate::decompose::{kernel, trimmed_core_map, KernelResult};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, Subgraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    Uncoloured,
    Purple,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexColor {
    Uncoloured,
    Pink,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripParams {
    /// Stripping threshold, at least 2.
    pub n: usize,
    pub seed: u64,
    /// Keep one [`StepRecord`] per step in the trace.
    pub record_steps: bool,
}

impl StripParams {
    pub fn new(n: usize, seed: u64) -> Self {
        StripParams {
            n,
            seed,
            record_steps: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("N must be at least 2, got {}", self.n)));
        }
        Ok(())
    }
}

/// Kernel of the trimmed core of `G`, coloured with respect to `G`.
///
/// Kernel vertex `i` is `g0.vertex_map[kernel.kernel_vertices[i]]` in `G`.
#[derive(Debug, Clone)]
pub struct PaintedKernel {
    pub n_param: usize,
    /// Trimmed core with id maps into `G`.
    pub g0: Subgraph,
    pub kernel: KernelResult,
    pub edge_color: Vec<EdgeColor>,
    pub vertex_color: Vec<VertexColor>,
    pub deg2_count: Vec<usize>,
    pub merge_count: Vec<usize>,
    /// Edges from each `G0` vertex to vertices of `G` outside `G0`.
    pub outside_degree: Vec<usize>,
}

impl PaintedKernel {
    pub fn red_edge_count(&self) -> usize {
        self.edge_color.iter().filter(|&&c| c == EdgeColor::Red).count()
    }

    pub fn red_vertex_count(&self) -> usize {
        self.vertex_color.iter().filter(|&&c| c == VertexColor::Red).count()
    }

    /// Builds `R_N(G)` as a subgraph of `G` from the surviving `G0` vertices and
    /// the surviving original kernel edges.
    fn assemble(&self, g: &Multigraph, g0_alive: &[bool], kernel_edge_alive: &[bool]) -> Subgraph {
        let mut keep_v = vec![false; g.vertex_count()];
        for (v, &alive) in g0_alive.iter().enumerate() {
            if alive {
                keep_v[self.g0.vertex_map[v]] = true;
            }
        }
        let mut keep_e = vec![false; g.edge_count()];
        for (e, &alive) in kernel_edge_alive.iter().enumerate() {
            if alive {
                for &pe in &self.kernel.path_edges[e] {
                    keep_e[self.g0.edge_map[pe]] = true;
                }
            }
        }
        g.restrict(&keep_v, &keep_e)
    }

    /// `G0` liveness implied by the kernel state: a kernel vertex by its own
    /// flag, an interior path vertex by its kernel edge.
    fn g0_alive(&self, kernel_vertex_alive: &[bool], kernel_edge_alive: &[bool]) -> Vec<bool> {
        let mut alive = vec![false; self.g0.graph.vertex_count()];
        for (i, &v) in self.kernel.kernel_vertices.iter().enumerate() {
            alive[v] = kernel_vertex_alive[i];
        }
        for (e, path) in self.kernel.path_map.iter().enumerate() {
            for &v in path {
                alive[v] = kernel_edge_alive[e];
            }
        }
        alive
    }
}

/// Trimmed core of `g`, its kernel, and the initial colouring: a `G0` vertex
/// with at least `N - 1` edges leaving `G0` paints its 2-path's kernel edge red
/// when it has degree 2 in `G0`, and otherwise paints itself and its kernel
/// edges red; every kernel edge whose 2-path has more than `N/2` interior
/// vertices is red as well.
pub fn paint_kernel(g: &Multigraph, n_param: usize) -> Result<PaintedKernel> {
    StripParams::new(n_param, 0).validate()?;
    let g0 = trimmed_core_map(g);
    if g0.graph.vertex_count() == 0 {
        return Err(Error::EmptyTrimmedCore);
    }
    let kernel = kernel(&g0.graph)?;
    let mut in_g0 = vec![false; g.vertex_count()];
    for &v in &g0.vertex_map {
        in_g0[v] = true;
    }
    let outside_degree: Vec<usize> = g0
        .vertex_map
        .iter()
        .map(|&v| g.neighbors(v).filter(|&w| !in_g0[w]).count())
        .collect();
    let kn = kernel.kernel.vertex_count();
    let ke = kernel.kernel.edge_count();
    let mut edge_color = vec![EdgeColor::Uncoloured; ke];
    let mut vertex_color = vec![VertexColor::Uncoloured; kn];
    let heavy = |v: usize| outside_degree[v] + 1 >= n_param;
    for (i, &v) in kernel.kernel_vertices.iter().enumerate() {
        if heavy(v) {
            vertex_color[i] = VertexColor::Red;
            for &(e, _) in kernel.kernel.incident(i) {
                edge_color[e] = EdgeColor::Red;
            }
        }
    }
    for (e, path) in kernel.path_map.iter().enumerate() {
        if 2 * path.len() > n_param || path.iter().any(|&v| heavy(v)) {
            edge_color[e] = EdgeColor::Red;
        }
    }
    let deg2_count = kernel.path_map.iter().map(Vec::len).collect();
    Ok(PaintedKernel {
        n_param,
        g0,
        kernel,
        edge_color,
        vertex_color,
        deg2_count,
        merge_count: vec![1; ke],
        outside_degree,
    })
}
