//! Undirected multigraph with loops, parallel edges and stable edge ids.
//!
//! A loop `(v, v)` is stored once in the edge list but appears twice in the
//! adjacency of `v`, so it contributes 2 to the degree.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<(usize, usize)>>,
}

/// A graph extracted from a parent graph together with the id maps back into it.
///
/// `vertex_map[i]` is the parent id of vertex `i`; `edge_map[e]` is the parent id
/// of edge `e`. Both maps are increasing, i.e. relabeling preserves order.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Multigraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component id per vertex. Ids are assigned in order of each component's
    /// smallest vertex.
    pub component: Vec<usize>,
    pub sizes: Vec<usize>,
    pub edge_counts: Vec<usize>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Largest component by vertex count, ties going to the smallest minimum vertex id.
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (c, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|b| s > self.sizes[b]) {
                best = Some(c);
            }
        }
        best
    }
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
            adj: vec![Vec::new(); vertex_count],
        }
    }

    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Multigraph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Appends an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push((id, v));
        self.adj[v].push((id, u));
        Ok(id)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(edge id, other endpoint)` pairs; a loop is listed twice.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(_, w)| w)
    }

    /// Degree of `v`; panics if `v` is out of range.
    pub fn deg(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).max()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// Edges as `(min, max)` pairs, sorted. Two graphs on the same vertex ids
    /// with equal canonical edge lists are identical up to edge ids.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn components(&self) -> ComponentPartition {
        let n = self.vertex_count;
        let mut component = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if component[s] != usize::MAX {
                continue;
            }
            let c = sizes.len();
            component[s] = c;
            queue.push_back(s);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &(_, w) in &self.adj[v] {
                    if component[w] == usize::MAX {
                        component[w] = c;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        let mut edge_counts = vec![0; sizes.len()];
        for &(u, _) in &self.edges {
            edge_counts[component[u]] += 1;
        }
        ComponentPartition {
            component,
            sizes,
            edge_counts,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().count() == 1
    }

    /// Induced subgraph on the vertices with `keep[v]`.
    pub fn induced_subgraph(&self, keep: &[bool]) -> Subgraph {
        let keep_edges: Vec<bool> = self.edges.iter().map(|&(u, v)| keep[u] && keep[v]).collect();
        self.restrict(keep, &keep_edges)
    }

    /// Subgraph with the kept vertices and the kept edges. Every kept edge must
    /// have both endpoints kept.
    pub fn restrict(&self, keep_vertices: &[bool], keep_edges: &[bool]) -> Subgraph {
        let mut new_id = vec![usize::MAX; self.vertex_count];
        let mut vertex_map = Vec::new();
        for v in 0..self.vertex_count {
            if keep_vertices[v] {
                new_id[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let mut graph = Multigraph::new(vertex_map.len());
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if keep_edges[e] {
                debug_assert!(keep_vertices[u] && keep_vertices[v]);
                graph
                    .add_edge(new_id[u], new_id[v])
                    .expect("kept edge has kept endpoints");
                edge_map.push(e);
            }
        }
        Subgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }

    /// BFS hop distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for &(_, w) in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn rebuild_adjacency(&mut self) {
        self.adj = vec![Vec::new(); self.vertex_count];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            self.adj[u].push((id, v));
            self.adj[v].push((id, u));
        }
    }

    /// Restores the adjacency index after deserialization.
    pub fn from_serialized(mut self) -> Result<Self> {
        for &(u, v) in &self.edges {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
        }
        self.rebuild_adjacency();
        Ok(self)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(12 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list format: a header `n m`, then `m` lines `u v`
    /// (0-based, loops as `u u`). Blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut g = Multigraph::new(n);
        g.edges.reserve(m);
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            g.add_edge(u, v).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        if g.edge_count() != m {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", g.edge_count()),
            });
        }
        Ok(g)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_edge_list(&text)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

fn parse_pair(line: usize, l: &str) -> Result<(usize, usize)> {
    let mut it = l.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub fn degree(g: &Multigraph, v: usize) -> Result<usize> {
    g.degree(v)
}

/// Largest component with its vertex/edge maps into `g`.
pub fn giant_component_map(g: &Multigraph) -> Subgraph {
    let parts = g.components();
    let keep: Vec<bool> = match parts.largest() {
        Some(c) => parts.component.iter().map(|&x| x == c).collect(),
        None => Vec::new(),
    };
    g.induced_subgraph(&keep)
}

/// Induced subgraph on the largest component (ties: smallest minimum vertex id),
/// relabeled order-preservingly to `0..size`.
pub fn giant_component(g: &Multigraph) -> Multigraph {
    giant_component_map(g).graph
}

/// Exact diameter of a connected graph.
///
/// Uses eccentricity bounding: each BFS from a source `s` with eccentricity
/// `e` tightens every remaining vertex `w` to
/// `max(e - d(s,w), d(s,w)) <= ecc(w) <= e + d(s,w)`, and vertices whose upper
/// bound cannot beat the current lower bound are dropped. The answer is the
/// same as all-pairs BFS but usually needs only a handful of sweeps on sparse
/// random graphs.
pub fn diameter(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(0);
    }
    let mut lower = vec![0usize; n];
    let mut upper = vec![usize::MAX; n];
    let mut candidates: Vec<usize> = (0..n).collect();
    let mut d_low = 0usize;
    let mut pick_high = true;
    while !candidates.is_empty() {
        let d_up = candidates
            .iter()
            .map(|&w| upper[w])
            .max()
            .unwrap_or(0)
            .max(d_low);
        if d_low >= d_up {
            break;
        }
        let src = if pick_high {
            *candidates
                .iter()
                .max_by_key(|&&w| (upper[w], g.deg(w), std::cmp::Reverse(w)))
                .unwrap()
        } else {
            *candidates
                .iter()
                .min_by_key(|&&w| (lower[w], std::cmp::Reverse(g.deg(w)), w))
                .unwrap()
        };
        pick_high = !pick_high;
        let dist = g.bfs_distances(src);
        let ecc = eccentricity_from(&dist)?;
        d_low = d_low.max(ecc);
        lower[src] = ecc;
        upper[src] = ecc;
        for &w in &candidates {
            let d = dist[w];
            lower[w] = lower[w].max(ecc.saturating_sub(d)).max(d);
            upper[w] = upper[w].min(ecc + d);
            d_low = d_low.max(lower[w]);
        }
        candidates.retain(|&w| upper[w] > d_low && lower[w] != upper[w]);
    }
    Ok(d_low)
}

fn eccentricity_from(dist: &[usize]) -> Result<usize> {
    let mut ecc = 0;
    for &d in dist {
        if d == usize::MAX {
            return Err(Error::Disconnected);
        }
        ecc = ecc.max(d);
    }
    Ok(ecc)
}

/// Lower bound on the diameter from two BFS sweeps (start at vertex 0, then at
/// the farthest vertex found). Never exceeds [`diameter`].
pub fn double_sweep_lower_bound(g: &Multigraph) -> Result<usize> {
    if g.vertex_count() <= 1 {
        return Ok(0);
    }
    let d0 = g.bfs_distances(0);
    eccentricity_from(&d0)?;
    let far = (0..d0.len()).max_by_key(|&v| (d0[v], std::cmp::Reverse(v))).unwrap();
    eccentricity_from(&g.bfs_distances(far))
}

/// Largest vertex count of a maximal path (or cycle) whose vertices all have
/// degree exactly 2.
pub fn longest_2path(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut best = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] || g.deg(s) != 2 {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for w in g.neighbors(v) {
                if !seen[w] && g.deg(w) == 2 {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// No loops and no parallel edges.
pub fn is_simple(g: &Multigraph) -> bool {
    let mut seen = HashSet::with_capacity(g.edge_count());
    g.edges()
        .iter()
        .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
}
