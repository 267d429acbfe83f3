//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use coremix::genmodels::{sample_cnm, sample_gnm, sample_pairing, DegreeSequence};
use coremix::multigraph::Multigraph;
use coremix::rng::substream_seed;
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;

/// Perfect matchings of `k` points by recursion on the first point.
pub fn brute_matchings(k: usize) -> u64 {
    fn go(free: &mut Vec<bool>) -> u64 {
        let Some(first) = free.iter().position(|&f| f) else {
            return 1;
        };
        free[first] = false;
        let mut total = 0;
        for j in first + 1..free.len() {
            if free[j] {
                free[j] = false;
                total += go(free);
                free[j] = true;
            }
        }
        free[first] = true;
        total
    }
    if k % 2 == 1 {
        return 0;
    }
    go(&mut vec![true; k])
}

/// For every perfect matching of `2m` points, the number of pairs with exactly
/// one end among the first `q` points; returns counts indexed by that number.
pub fn brute_crossing_counts(m: usize, q: usize) -> Vec<u64> {
    fn go(free: &mut Vec<bool>, q: usize, crossing: usize, counts: &mut Vec<u64>) {
        let Some(first) = free.iter().position(|&f| f) else {
            counts[crossing] += 1;
            return;
        };
        free[first] = false;
        for j in first + 1..free.len() {
            if free[j] {
                free[j] = false;
                let c = usize::from((first < q) != (j < q));
                go(free, q, crossing + c, counts);
                free[j] = true;
            }
        }
        free[first] = true;
    }
    let mut counts = vec![0; 2 * m + 1];
    go(&mut vec![true; 2 * m], q, 0, &mut counts);
    counts
}

fn degrees(g: &Multigraph) -> Vec<u64> {
    let mut d = vec![0u64; g.vertex_count()];
    for &(u, v) in g.edges() {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

/// `min cut(S)/vol(S)` over all `S` with `0 < vol(S) ≤ |E|`, by subset
/// enumeration, as an exact fraction.
pub fn brute_cheeger(g: &Multigraph) -> Ratio<u64> {
    let n = g.vertex_count();
    assert!(n <= 20);
    let deg = degrees(g);
    let total: u64 = deg.iter().sum();
    let mut best: Option<Ratio<u64>> = None;
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let vol: u64 = (0..n).filter(|&v| inside(v)).map(|v| deg[v]).sum();
        if vol == 0 || 2 * vol > total {
            continue;
        }
        let cut = g.edges().iter().filter(|&&(u, v)| inside(u) != inside(v)).count() as u64;
        let q = Ratio::new(cut, vol);
        if best.is_none_or(|b| q < b) {
            best = Some(q);
        }
    }
    best.expect("a connected graph on two or more vertices has an admissible set")
}

/// `max |E(S)|/|S|` over nonempty `S`, by subset enumeration.
pub fn brute_densest(g: &Multigraph) -> Ratio<u64> {
    let n = g.vertex_count();
    assert!(n <= 20);
    let mut best = Ratio::new(0, 1);
    for mask in 1u32..(1 << n) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let e = g.edges().iter().filter(|&&(u, v)| inside(u) && inside(v)).count() as u64;
        let q = Ratio::new(e, mask.count_ones() as u64);
        if q > best {
            best = q;
        }
    }
    best
}

fn simple_adjacency(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    adj
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Diameter of a connected graph by BFS from every vertex.
pub fn brute_diameter(g: &Multigraph) -> usize {
    let adj = simple_adjacency(g);
    (0..g.vertex_count())
        .map(|s| bfs(&adj, s).into_iter().map(|d| d.expect("connected")).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Vertex set of the 2-core: repeatedly delete any vertex of degree at most one.
pub fn brute_two_core(g: &Multigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    loop {
        let mut deg = vec![0usize; n];
        for &(u, v) in g.edges() {
            if alive[u] && alive[v] {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        match (0..n).find(|&v| alive[v] && deg[v] <= 1) {
            Some(v) => alive[v] = false,
            None => break,
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Row-stochastic transition matrix of the walk that picks a uniform incident
/// edge end (loops count twice).
pub fn transition_matrix(g: &Multigraph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut w = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        w[(u, v)] += 1.0;
        w[(v, u)] += 1.0;
    }
    for i in 0..n {
        let s: f64 = w.row(i).sum();
        for j in 0..n {
            w[(i, j)] /= s;
        }
    }
    w
}

/// `h[i][j] = E_i T_j` from one linear solve per target.
pub fn direct_hitting(p: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let n = p.nrows();
    let mut h = vec![vec![0.0; n]; n];
    for j in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let k = others.len();
        let mut a = DMatrix::<f64>::identity(k, k);
        for (r, &i) in others.iter().enumerate() {
            for (c, &l) in others.iter().enumerate() {
                a[(r, c)] -= p[(i, l)];
            }
        }
        let x = a.lu().solve(&DVector::from_element(k, 1.0)).expect("nonsingular");
        for (r, &i) in others.iter().enumerate() {
            h[i][j] = x[r];
        }
    }
    h
}

/// Expected length of the filling rule from `sigma` to `tau`, which is an
/// optimal stopping rule: at every step stop as much mass as the remaining
/// target still needs at the current state, then move the rest.
pub fn filling_rule_length(p: &DMatrix<f64>, sigma: &[f64], tau: &[f64]) -> f64 {
    let n = sigma.len();
    let mut mass = sigma.to_vec();
    let mut need = tau.to_vec();
    let mut length = 0.0;
    for _ in 0..1_000_000 {
        for i in 0..n {
            let stop = mass[i].min(need[i]);
            mass[i] -= stop;
            need[i] -= stop;
        }
        let left: f64 = mass.iter().sum();
        if left < 1e-13 {
            return length;
        }
        length += left;
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += mass[i] * p[(i, j)];
            }
        }
        mass = next;
    }
    panic!("filling rule did not finish");
}

/// A mixed corpus of small multigraphs: `𝒢(n, m)`, `𝒞(n, m)` and pairing-model
/// graphs with minimum degree 3, keeping only connected ones.
pub fn small_connected_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Multigraph> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        let s = substream_seed(seed, i);
        i += 1;
        let n = 2 + (s % (max_n as u64 - 1)) as usize;
        let g = match i % 3 {
            0 => {
                let cap = n * (n - 1) / 2;
                let m = (n + (s >> 16) as usize % (2 * n)).min(cap);
                sample_gnm(n, m, s).unwrap()
            }
            1 => sample_cnm(n, n + (s >> 16) as usize % (2 * n), s).unwrap(),
            _ => {
                let mut d: Vec<usize> = (0..n).map(|v| 3 + (s >> (v % 48)) as usize % 3).collect();
                if d.iter().sum::<usize>() % 2 == 1 {
                    d[0] += 1;
                }
                sample_pairing(&DegreeSequence(d), s).unwrap()
            }
        };
        if g.edge_count() > 0 && g.is_connected() {
            out.push(g);
        }
    }
    out
}
