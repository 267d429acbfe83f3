use rand::Rng as _;
use serde::Serialize;

use super::{paint_kernel, EdgeColor, PaintedKernel, StripParams, VertexColor};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, Subgraph};
use crate::rng::{rng_from_seed, Rng};

/// Something that happened while settling the vertices touched by a step.
/// Vertex ids are ids in `G`; edge ids are current kernel edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum StripEvent {
    Pinked { vertex: usize },
    Reddened { vertex: usize },
    EdgeReddened { edge: usize },
    Merged {
        vertex: usize,
        from: (usize, usize),
        into: usize,
        color: EdgeColor,
    },
    CycleRemoved { vertex: usize, edge: usize },
    Pruned { vertex: usize, edge: usize },
    VertexRemoved { vertex: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub edge: usize,
    pub ends: (usize, usize),
    pub events: Vec<StripEvent>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StripTrace {
    pub steps: Vec<StepRecord>,
    pub step_count: usize,
    pub kernel_vertices: usize,
    pub kernel_edges: usize,
    pub initial_red_edges: usize,
    pub initial_red_vertices: usize,
    pub surviving_kernel_edges: usize,
    pub surviving_kernel_vertices: usize,
}

impl StripTrace {
    /// Fraction of original kernel edges that did not survive.
    pub fn removed_edge_fraction(&self) -> f64 {
        if self.kernel_edges == 0 {
            0.0
        } else {
            1.0 - self.surviving_kernel_edges as f64 / self.kernel_edges as f64
        }
    }
}

#[derive(Debug, Clone)]
struct CurEdge {
    a: usize,
    b: usize,
    /// Original kernel edges merged into this one.
    originals: Vec<usize>,
    /// Kernel vertices suppressed into this edge.
    suppressed: Vec<usize>,
    deg2: usize,
    color: EdgeColor,
    alive: bool,
}

/// Live state of a severe stripping run on a painted kernel.
///
/// Kernel vertices keep their ids; merged edges get fresh ids above all
/// existing ones.
#[derive(Debug, Clone)]
pub struct StripState {
    n_param: usize,
    edges: Vec<CurEdge>,
    adj: Vec<Vec<usize>>,
    lost: Vec<usize>,
    color: Vec<VertexColor>,
    /// Still a branch vertex of the current kernel.
    branch: Vec<bool>,
    /// Still part of the graph, as a branch vertex or inside a live edge.
    present: Vec<bool>,
    original_alive: Vec<bool>,
    red: Vec<usize>,
    red_pos: Vec<usize>,
    labels: Vec<usize>,
    steps: usize,
}

const NOT_RED: usize = usize::MAX;

impl StripState {
    pub fn new(pk: &PaintedKernel) -> Self {
        let k = &pk.kernel.kernel;
        let kn = k.vertex_count();
        let mut st = StripState {
            n_param: pk.n_param,
            edges: Vec::with_capacity(2 * k.edge_count()),
            adj: vec![Vec::new(); kn],
            lost: vec![0; kn],
            color: pk.vertex_color.clone(),
            branch: vec![true; kn],
            present: vec![true; kn],
            original_alive: vec![true; k.edge_count()],
            red: Vec::new(),
            red_pos: Vec::new(),
            labels: pk.kernel.kernel_vertices.iter().map(|&v| pk.g0.vertex_map[v]).collect(),
            steps: 0,
        };
        for (e, &(a, b)) in k.edges().iter().enumerate() {
            st.push_edge(CurEdge {
                a,
                b,
                originals: vec![e],
                suppressed: Vec::new(),
                deg2: pk.deg2_count[e],
                color: pk.edge_color[e],
                alive: true,
            });
        }
        st
    }

    fn push_edge(&mut self, edge: CurEdge) -> usize {
        let id = self.edges.len();
        let (a, b, red) = (edge.a, edge.b, edge.color == EdgeColor::Red);
        self.edges.push(edge);
        self.red_pos.push(NOT_RED);
        self.adj[a].push(id);
        self.adj[b].push(id);
        if red {
            self.red_insert(id);
        }
        id
    }

    fn red_insert(&mut self, e: usize) {
        if self.red_pos[e] == NOT_RED {
            self.red_pos[e] = self.red.len();
            self.red.push(e);
        }
    }

    fn red_remove(&mut self, e: usize) {
        let p = self.red_pos[e];
        if p == NOT_RED {
            return;
        }
        let last = *self.red.last().expect("nonempty");
        self.red.swap_remove(p);
        if last != e {
            self.red_pos[last] = p;
        }
        self.red_pos[e] = NOT_RED;
    }

    fn detach(&mut self, e: usize) {
        let (a, b) = (self.edges[e].a, self.edges[e].b);
        for v in [a, b] {
            let pos = self.adj[v].iter().position(|&x| x == e).expect("edge listed at its end");
            self.adj[v].swap_remove(pos);
        }
        self.red_remove(e);
        self.edges[e].alive = false;
    }

    /// Removes edge `e` together with its 2-path.
    fn delete_edge(&mut self, e: usize) {
        self.detach(e);
        let edge = &self.edges[e];
        for &o in &edge.originals {
            self.original_alive[o] = false;
        }
        for &v in &edge.suppressed {
            self.present[v] = false;
        }
    }

    fn paint_red(&mut self, e: usize, events: &mut Vec<StripEvent>) {
        if self.edges[e].color != EdgeColor::Red {
            self.edges[e].color = EdgeColor::Red;
            events.push(StripEvent::EdgeReddened { edge: e });
        }
        self.red_insert(e);
    }

    pub fn red_edge_count(&self) -> usize {
        self.red.len()
    }

    pub fn step_count(&self) -> usize {
        self.steps
    }

    pub fn edge_color(&self, e: usize) -> Option<EdgeColor> {
        self.edges.get(e).filter(|x| x.alive).map(|x| x.color)
    }

    pub fn vertex_color(&self, v: usize) -> VertexColor {
        self.color[v]
    }

    /// Live current kernel edges as `(id, ends, color, deg2 count, merge count)`.
    pub fn live_edges(&self) -> impl Iterator<Item = (usize, (usize, usize), EdgeColor, usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, x)| x.alive)
            .map(|(i, x)| (i, (x.a, x.b), x.color, x.deg2, x.originals.len()))
    }

    /// Removes one red edge chosen uniformly and settles its ends.
    pub fn step(&mut self, rng: &mut Rng) -> Result<StepRecord> {
        if self.red.is_empty() {
            return Err(Error::NoRedEdge);
        }
        let e = self.red[rng.random_range(0..self.red.len())];
        let (x, y) = (self.edges[e].a, self.edges[e].b);
        self.delete_edge(e);
        self.lost[x] += 1;
        self.lost[y] += 1;
        let mut events = Vec::new();
        let mut work = vec![y, x];
        while let Some(u) = work.pop() {
            self.settle(u, &mut work, &mut events);
        }
        self.steps += 1;
        Ok(StepRecord {
            step: self.steps,
            edge: e,
            ends: (self.labels[x], self.labels[y]),
            events,
        })
    }

    /// Applies the colouring and suppression rules to `u` for its current
    /// state. Idempotent, so a vertex may be queued more than once.
    fn settle(&mut self, u: usize, work: &mut Vec<usize>, events: &mut Vec<StripEvent>) {
        if !self.branch[u] {
            return;
        }
        let d = self.adj[u].len();
        if self.lost[u] >= 2 && self.color[u] != VertexColor::Red {
            self.color[u] = VertexColor::Red;
            events.push(StripEvent::Reddened { vertex: self.labels[u] });
        } else if self.lost[u] == 1 && d >= 3 && self.color[u] == VertexColor::Uncoloured {
            self.color[u] = VertexColor::Pink;
            events.push(StripEvent::Pinked { vertex: self.labels[u] });
        }
        match d {
            0 => {
                self.branch[u] = false;
                self.present[u] = false;
                events.push(StripEvent::VertexRemoved { vertex: self.labels[u] });
            }
            1 => {
                let e = self.adj[u][0];
                let w = if self.edges[e].a == u { self.edges[e].b } else { self.edges[e].a };
                self.delete_edge(e);
                self.branch[u] = false;
                self.present[u] = false;
                self.lost[w] += 1;
                work.push(w);
                events.push(StripEvent::Pruned {
                    vertex: self.labels[u],
                    edge: e,
                });
            }
            2 => {
                let (e1, e2) = (self.adj[u][0], self.adj[u][1]);
                if e1 == e2 {
                    self.delete_edge(e1);
                    self.branch[u] = false;
                    self.present[u] = false;
                    events.push(StripEvent::CycleRemoved {
                        vertex: self.labels[u],
                        edge: e1,
                    });
                } else {
                    self.merge(u, e1, e2, work, events);
                }
            }
            _ => {
                if self.color[u] == VertexColor::Red {
                    for i in 0..self.adj[u].len() {
                        let e = self.adj[u][i];
                        self.paint_red(e, events);
                    }
                }
            }
        }
    }

    /// Suppresses `u`, joining its two distinct edges into one new edge.
    fn merge(&mut self, u: usize, e1: usize, e2: usize, work: &mut Vec<usize>, events: &mut Vec<StripEvent>) {
        let far = |e: &CurEdge| if e.a == u { e.b } else { e.a };
        let (a, b) = (far(&self.edges[e1]), far(&self.edges[e2]));
        self.detach(e1);
        self.detach(e2);
        let mut originals = std::mem::take(&mut self.edges[e1].originals);
        originals.append(&mut self.edges[e2].originals);
        let mut suppressed = std::mem::take(&mut self.edges[e1].suppressed);
        suppressed.append(&mut self.edges[e2].suppressed);
        suppressed.push(u);
        let deg2 = self.edges[e1].deg2 + self.edges[e2].deg2 + 1;
        let exposed = self.edges[e1].color != EdgeColor::Uncoloured || self.edges[e2].color != EdgeColor::Uncoloured;
        let red = exposed
            || self.color[u] == VertexColor::Red
            || self.color[a] == VertexColor::Red
            || self.color[b] == VertexColor::Red
            || deg2 > self.n_param
            || originals.len() >= 3;
        let color = if red { EdgeColor::Red } else { EdgeColor::Purple };
        self.branch[u] = false;
        let into = self.push_edge(CurEdge {
            a: a.min(b),
            b: a.max(b),
            originals,
            suppressed,
            deg2,
            color,
            alive: true,
        });
        events.push(StripEvent::Merged {
            vertex: self.labels[u],
            from: (e1, e2),
            into,
            color,
        });
        work.push(a);
        work.push(b);
    }

    /// Runs steps until no red edge is left.
    pub fn run(&mut self, rng: &mut Rng, mut record: Option<&mut Vec<StepRecord>>) {
        while !self.red.is_empty() {
            let rec = self.step(rng).expect("red edge available");
            if let Some(out) = record.as_deref_mut() {
                out.push(rec);
            }
        }
    }

    pub fn kernel_vertex_alive(&self) -> &[bool] {
        &self.present
    }

    pub fn kernel_edge_alive(&self) -> &[bool] {
        &self.original_alive
    }
}

/// Severe stripping of `g` with threshold `params.n`, returning `R_N(G)` as a
/// subgraph of `g` and the trace. An empty trimmed core gives an empty result.
pub fn severe_strip(g: &Multigraph, params: &StripParams) -> Result<(Subgraph, StripTrace)> {
    params.validate()?;
    let pk = match paint_kernel(g, params.n) {
        Ok(pk) => pk,
        Err(Error::EmptyTrimmedCore) => {
            let none = vec![false; g.vertex_count()];
            return Ok((g.induced_subgraph(&none), StripTrace::default()));
        }
        Err(e) => return Err(e),
    };
    let (sub, trace, _) = strip_painted(g, &pk, params)?;
    Ok((sub, trace))
}

/// Strips an already painted kernel; also returns the final state.
pub(crate) fn strip_painted(
    g: &Multigraph,
    pk: &PaintedKernel,
    params: &StripParams,
) -> Result<(Subgraph, StripTrace, StripState)> {
    let mut state = StripState::new(pk);
    let mut rng = rng_from_seed(params.seed);
    let mut steps = Vec::new();
    state.run(&mut rng, params.record_steps.then_some(&mut steps));
    let alive_v = state.kernel_vertex_alive();
    let alive_e = state.kernel_edge_alive();
    let g0_alive = pk.g0_alive(alive_v, alive_e);
    let sub = pk.assemble(g, &g0_alive, alive_e);
    let trace = StripTrace {
        steps,
        step_count: state.step_count(),
        kernel_vertices: pk.kernel.kernel.vertex_count(),
        kernel_edges: pk.kernel.kernel.edge_count(),
        initial_red_edges: pk.red_edge_count(),
        initial_red_vertices: pk.red_vertex_count(),
        surviving_kernel_edges: alive_e.iter().filter(|&&x| x).count(),
        surviving_kernel_vertices: alive_v.iter().filter(|&&x| x).count(),
    };
    Ok((sub, trace, state))
}

/// Runs severe stripping on a painted kernel and returns the final state, for
/// callers that want to inspect colours.
pub fn strip_state(g: &Multigraph, pk: &PaintedKernel, seed: u64) -> Result<StripState> {
    let params = StripParams::new(pk.n_param, seed);
    Ok(strip_painted(g, pk, &params)?.2)
}
