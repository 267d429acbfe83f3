use rand::seq::SliceRandom;

use super::{paint_kernel, EdgeColor, PaintedKernel, VertexColor};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, Subgraph};
use crate::rng::{rng_from_seed, Rng};

/// Removal state over the original kernel, driven by the order-free rules.
struct Fixpoint<'a> {
    pk: &'a PaintedKernel,
    deg0: Vec<usize>,
    deg: Vec<usize>,
    vertex_alive: Vec<bool>,
    edge_alive: Vec<bool>,
}

impl<'a> Fixpoint<'a> {
    fn new(pk: &'a PaintedKernel) -> Self {
        let k = &pk.kernel.kernel;
        let deg0 = k.degrees();
        Fixpoint {
            pk,
            deg: deg0.clone(),
            deg0,
            vertex_alive: vec![true; k.vertex_count()],
            edge_alive: vec![true; k.edge_count()],
        }
    }

    fn kill_edge(&mut self, e: usize) -> bool {
        if !self.edge_alive[e] {
            return false;
        }
        self.edge_alive[e] = false;
        let (a, b) = self.pk.kernel.kernel.endpoints(e);
        self.deg[a] -= 1;
        self.deg[b] -= 1;
        true
    }

    fn kill_vertex(&mut self, v: usize) -> bool {
        if !self.vertex_alive[v] {
            return false;
        }
        self.vertex_alive[v] = false;
        for i in 0..self.pk.kernel.kernel.incident(v).len() {
            let (e, _) = self.pk.kernel.kernel.incident(v)[i];
            self.kill_edge(e);
        }
        true
    }

    fn initial(&mut self) {
        let k = &self.pk.kernel.kernel;
        for v in 0..k.vertex_count() {
            if self.pk.vertex_color[v] == VertexColor::Red {
                self.kill_vertex(v);
            }
        }
        for e in 0..k.edge_count() {
            if self.pk.edge_color[e] == EdgeColor::Red {
                self.kill_edge(e);
            }
        }
    }

    /// Any vertex that has lost two incident edge ends, or has none left.
    fn vertex_rule(&mut self, order: &[usize]) -> bool {
        let mut changed = false;
        for &v in order {
            if self.vertex_alive[v] && (self.deg0[v] - self.deg[v] >= 2 || self.deg[v] == 0) {
                changed |= self.kill_vertex(v);
            }
        }
        changed
    }

    /// Current kernel edges: maximal chains of live original edges through live
    /// vertices of current degree 2. A chain that closes into a cycle of such
    /// vertices is an isolated cycle and goes; so does a chain made of at least
    /// three original edges or with more than `N` degree-2 vertices.
    fn chain_rule(&mut self, rng: Option<&mut Rng>) -> bool {
        let k = &self.pk.kernel.kernel;
        let mut seen = vec![false; k.edge_count()];
        let mut doomed: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for e0 in 0..k.edge_count() {
            if !self.edge_alive[e0] || seen[e0] {
                continue;
            }
            seen[e0] = true;
            let mut edges = vec![e0];
            let mut inner = Vec::new();
            let (a, b) = k.endpoints(e0);
            let mut cyclic = false;
            // walk from each end while the current vertex is suppressed
            for (start, mut via) in [(b, e0), (a, e0)] {
                let mut cur = start;
                loop {
                    if !self.vertex_alive[cur] || self.deg[cur] != 2 {
                        break;
                    }
                    if inner.contains(&cur) {
                        cyclic = true;
                        break;
                    }
                    inner.push(cur);
                    let next = k
                        .incident(cur)
                        .iter()
                        .find(|&&(e, _)| e != via && self.edge_alive[e])
                        .copied();
                    let Some((e, w)) = next else {
                        // both live slots are the same loop edge
                        cyclic = true;
                        break;
                    };
                    if seen[e] {
                        cyclic = true;
                        break;
                    }
                    seen[e] = true;
                    edges.push(e);
                    via = e;
                    cur = w;
                }
                if cyclic {
                    break;
                }
            }
            let interior: usize = edges.iter().map(|&e| self.pk.deg2_count[e]).sum::<usize>() + inner.len();
            if cyclic || edges.len() >= 3 || interior > self.pk.n_param {
                doomed.push((edges, inner));
            }
        }
        if let Some(rng) = rng {
            doomed.shuffle(rng);
        }
        let mut changed = false;
        for (edges, inner) in doomed {
            for e in edges {
                changed |= self.kill_edge(e);
            }
            for v in inner {
                changed |= self.kill_vertex(v);
            }
        }
        changed
    }

    fn run(&mut self, mut rng: Option<Rng>) {
        self.initial();
        let mut order: Vec<usize> = (0..self.pk.kernel.kernel.vertex_count()).collect();
        loop {
            if let Some(r) = rng.as_mut() {
                order.shuffle(r);
            }
            let chains_first = rng.as_mut().is_some_and(|r| rand::Rng::random_bool(r, 0.5));
            let changed = if chains_first {
                let c = self.chain_rule(rng.as_mut());
                self.vertex_rule(&order) | c
            } else {
                let v = self.vertex_rule(&order);
                self.chain_rule(rng.as_mut()) | v
            };
            if !changed {
                break;
            }
        }
    }
}

fn fixpoint_subgraph(g: &Multigraph, n_param: usize, rng: Option<Rng>) -> Result<Subgraph> {
    let pk = match paint_kernel(g, n_param) {
        Ok(pk) => pk,
        Err(Error::EmptyTrimmedCore) => return Ok(g.induced_subgraph(&vec![false; g.vertex_count()])),
        Err(e) => return Err(e),
    };
    let mut fx = Fixpoint::new(&pk);
    fx.run(rng);
    let g0_alive = pk.g0_alive(&fx.vertex_alive, &fx.edge_alive);
    Ok(pk.assemble(g, &g0_alive, &fx.edge_alive))
}

/// `R_N(G)` from its order-free description: starting from the painted
/// kernel, repeatedly remove red vertices and edges, every kernel vertex that
/// has lost at least two incident edge ends, and every current kernel edge
/// (maximal chain through degree-2 kernel vertices) that is an isolated cycle,
/// merges at least three original kernel edges, or holds more than `N`
/// degree-2 vertices, until nothing changes.
pub fn reduced_core_fixpoint(g: &Multigraph, n_param: usize) -> Result<Subgraph> {
    fixpoint_subgraph(g, n_param, None)
}

/// Same fixpoint with the rule applications visited in a seeded random order.
pub fn reduced_core_fixpoint_shuffled(g: &Multigraph, n_param: usize, seed: u64) -> Result<Subgraph> {
    fixpoint_subgraph(g, n_param, Some(rng_from_seed(seed)))
}
