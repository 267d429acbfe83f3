use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// Reversible chain given by symmetric edge weights: `p_ij = w_ij / W_i` with
/// `W_i = Σ_j w_ij`, stationary law `π_i = W_i / Σ_k W_k`.
///
/// For a multigraph, `w_ij` counts the `i`–`j` edges and a loop adds 2 to
/// `w_ii`, so `W_i` is the degree and a loop keeps the walk in place with
/// probability `2/d_i` per loop.
#[derive(Debug, Clone, Serialize)]
pub struct ReversibleChain {
    /// `(j, w_ij)` with distinct `j` per row; `w_ii` appears once.
    rows: Vec<Vec<(usize, f64)>>,
    total: Vec<f64>,
}

impl ReversibleChain {
    /// Builds a chain from symmetric weights `(i, j, w)`, each unordered pair
    /// listed once (self-weights once with their full value).
    pub fn from_weights(n: usize, weights: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, w) in weights {
            if i >= n || j >= n {
                return Err(Error::InvalidVertex {
                    vertex: i.max(j),
                    vertex_count: n,
                });
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!("weight {w} on ({i}, {j})")));
            }
            if w == 0.0 {
                continue;
            }
            rows[i].push((j, w));
            if i != j {
                rows[j].push((i, w));
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|x| x.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(j, w) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += w,
                    _ => merged.push((j, w)),
                }
            }
            *row = merged;
        }
        let total = rows.iter().map(|r| r.iter().map(|x| x.1).sum()).collect();
        Ok(ReversibleChain { rows, total })
    }

    pub fn from_graph(g: &Multigraph) -> Self {
        let weights = g
            .edges()
            .iter()
            .map(|&(u, v)| (u, v, if u == v { 2.0 } else { 1.0 }));
        Self::from_weights(g.vertex_count(), weights).expect("graph endpoints are valid")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(j, w_ij)` with increasing `j`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |x| x.0)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(0.0)
    }

    /// Total weight `W_i` (the degree, for a graph).
    pub fn total_weight(&self, i: usize) -> f64 {
        self.total[i]
    }

    pub fn total_weights(&self) -> &[f64] {
        &self.total
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.weight(i, j) / self.total[i]
    }

    /// `(j, p_ij)` for the nonzero entries of row `i`.
    pub fn transitions(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let t = self.total[i];
        self.rows[i].iter().map(move |&(j, w)| (j, w / t))
    }

    pub fn stationary(&self) -> Result<Vec<f64>> {
        let sum: f64 = self.total.iter().sum();
        if sum <= 0.0 {
            return Err(Error::NoEdges);
        }
        Ok(self.total.iter().map(|&w| w / sum).collect())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.rows[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    pub(crate) fn require_ergodic_support(&self) -> Result<()> {
        if self.is_empty() || self.total.iter().any(|&w| w <= 0.0) {
            return Err(Error::NoEdges);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }
}

/// `π_v = d_v / (2 E(G))`.
pub fn stationary(g: &Multigraph) -> Result<Vec<f64>> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let two_e = 2.0 * g.edge_count() as f64;
    Ok(g.degrees().iter().map(|&d| d as f64 / two_e).collect())
}
