use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensestSubgraph {
    /// `|E(S)| / |S|` as an exact fraction `(edges, vertices)`.
    pub edges: usize,
    pub vertices: usize,
    pub density: f64,
    pub witness: Vec<usize>,
}

impl DensestSubgraph {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.edges as u64, self.vertices as u64)
    }
}

/// Dinic max-flow on integer capacities.
struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return flow;
            }
            let mut it = vec![0usize; self.head.len()];
            loop {
                let f = self.augment(s, t, i64::MAX, &level, &mut it);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Iterative blocking-flow search along level-increasing arcs.
    fn augment(&mut self, s: usize, t: usize, limit: i64, level: &[usize], it: &mut [usize]) -> i64 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&a| self.cap[a]).fold(limit, i64::min);
                for &a in &path {
                    self.cap[a] -= f;
                    self.cap[a ^ 1] += f;
                }
                return f;
            }
            let mut advanced = false;
            while it[u] < self.head[u].len() {
                let a = self.head[u][it[u]];
                let v = self.to[a];
                if self.cap[a] > 0 && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                it[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the arc that led here
                let Some(a) = path.pop() else {
                    return 0;
                };
                u = self.to[a ^ 1];
                it[u] += 1;
            }
        }
    }

    fn source_side(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != usize::MAX).collect()
    }
}

/// Vertex set maximising `q |E(S)| - p |S|` (as a closure problem over edge
/// and vertex nodes) and its value.
fn best_closure(g: &Multigraph, groups: &[((usize, usize), i64)], p: i64, q: i64) -> (i64, Vec<bool>) {
    let n = g.vertex_count();
    let k = groups.len();
    let (s, t) = (k + n, k + n + 1);
    let mut net = FlowNet::new(k + n + 2);
    let inf = i64::MAX / 4;
    let mut gain = 0;
    for (i, &((u, v), mult)) in groups.iter().enumerate() {
        net.add(s, i, q * mult);
        gain += q * mult;
        net.add(i, k + u, inf);
        if u != v {
            net.add(i, k + v, inf);
        }
    }
    for v in 0..n {
        net.add(k + v, t, p);
    }
    let cut = net.max_flow(s, t);
    let side = net.source_side(s);
    (gain - cut, (0..n).map(|v| side[k + v]).collect())
}

/// Exact maximum of `|E(S)| / |S|` over nonempty vertex sets (loops and
/// parallel edges counted with multiplicity), by Dinkelbach iteration on
/// Goldberg's min-cut reduction.
pub fn densest_subgraph(g: &Multigraph) -> Result<DensestSubgraph> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("densest subgraph of an empty graph".into()));
    }
    if g.edge_count() == 0 {
        return Ok(DensestSubgraph {
            edges: 0,
            vertices: 1,
            density: 0.0,
            witness: vec![0],
        });
    }
    let mut mult: HashMap<(usize, usize), i64> = HashMap::new();
    for &(u, v) in g.edges() {
        *mult.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    let mut groups: Vec<((usize, usize), i64)> = mult.into_iter().collect();
    groups.sort_unstable();

    let count_edges = |keep: &[bool]| g.edges().iter().filter(|&&(u, v)| keep[u] && keep[v]).count();
    let mut keep = vec![true; n];
    let mut edges = g.edge_count();
    let mut vertices = n;
    loop {
        let (value, next) = best_closure(g, &groups, edges as i64, vertices as i64);
        let size = next.iter().filter(|&&b| b).count();
        if value <= 0 || size == 0 {
            break;
        }
        keep = next;
        edges = count_edges(&keep);
        vertices = size;
    }
    let witness: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    Ok(DensestSubgraph {
        edges,
        vertices,
        density: edges as f64 / vertices as f64,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let c5 = Multigraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(densest_subgraph(&c5).unwrap().ratio(), Ratio::new(1, 1));
        let k4 = Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let d = densest_subgraph(&k4).unwrap();
        assert_eq!(d.ratio(), Ratio::new(3, 2));
        assert_eq!(d.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn dense_part_is_found() {
        // K4 on 0..4 with a long tail; loops and parallel edges count
        let mut g = Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut prev = 3;
        for _ in 0..10 {
            let v = g.add_vertex();
            g.add_edge(prev, v).unwrap();
            prev = v;
        }
        assert_eq!(densest_subgraph(&g).unwrap().witness, vec![0, 1, 2, 3]);
        let m = Multigraph::from_edges(3, [(0, 1), (0, 1), (0, 1), (1, 2)]).unwrap();
        let d = densest_subgraph(&m).unwrap();
        assert_eq!(d.ratio(), Ratio::new(3, 2));
        assert_eq!(d.witness, vec![0, 1]);
        let looped = Multigraph::from_edges(2, [(0, 0), (0, 0), (0, 1)]).unwrap();
        let d = densest_subgraph(&looped).unwrap();
        assert_eq!(d.ratio(), Ratio::new(2, 1));
        assert_eq!(d.witness, vec![0]);
        let isolated = Multigraph::new(3);
        assert_eq!(densest_subgraph(&isolated).unwrap().density, 0.0);
    }
}
