use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkSample {
    /// `R(0), …, R(steps)`.
    pub trajectory: Vec<usize>,
    /// Times `t` with `R(t) ∈ B`, increasing: `τ_0 < τ_1 < …`.
    pub return_times: Vec<usize>,
}

impl WalkSample {
    /// `τ_{j+1} - τ_j`.
    pub fn gaps(&self) -> Vec<usize> {
        self.return_times.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Simple random walk: each step leaves along a uniform incident edge end, so
/// a loop keeps the walk in place with probability `2/d`.
pub fn simulate_walk(g: &Multigraph, start: usize, steps: usize, b: &[usize], seed: u64) -> Result<WalkSample> {
    let n = g.vertex_count();
    if start >= n {
        return Err(Error::InvalidVertex { vertex: start, vertex_count: n });
    }
    let mut in_b = vec![false; n];
    for &v in b {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, vertex_count: n });
        }
        in_b[v] = true;
    }
    let mut rng = rng_from_seed(seed);
    let mut trajectory = Vec::with_capacity(steps + 1);
    let mut return_times = Vec::new();
    let mut cur = start;
    for t in 0..=steps {
        trajectory.push(cur);
        if in_b[cur] {
            return_times.push(t);
        }
        if t == steps {
            break;
        }
        let inc = g.incident(cur);
        if inc.is_empty() {
            return Err(Error::Precondition(format!("walk reached isolated vertex {cur}")));
        }
        cur = inc[rng.random_range(0..inc.len())].1;
    }
    Ok(WalkSample { trajectory, return_times })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 0)]).unwrap();
        let a = simulate_walk(&g, 0, 500, &[0, 2], 9).unwrap();
        let b = simulate_walk(&g, 0, 500, &[0, 2], 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trajectory.len(), 501);
        for w in a.trajectory.windows(2) {
            assert!(g.neighbors(w[0]).any(|x| x == w[1]));
        }
        assert!(a.return_times.windows(2).all(|w| w[0] < w[1]));
        assert!(a.return_times.iter().all(|&t| a.trajectory[t] % 2 == 0));
        assert_eq!(a.return_times[0], 0);
    }
}
