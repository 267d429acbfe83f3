use serde::Serialize;

use super::chain::ReversibleChain;
use super::hitting::{symmetric_fundamental, HittingMatrix};
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

const DISTRIBUTION_TOL: f64 = 1e-9;

fn check_distribution(name: &str, x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::InvalidParameter(format!("{name} has {} entries, expected {n}", x.len())));
    }
    if x.iter().any(|&v| !(v >= -DISTRIBUTION_TOL) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} has a negative or non-finite entry")));
    }
    let s: f64 = x.iter().sum();
    if (s - 1.0).abs() > DISTRIBUTION_TOL * n.max(1) as f64 {
        return Err(Error::InvalidParameter(format!("{name} sums to {s}")));
    }
    Ok(())
}

/// Optimal expected stopping-rule duration from `σ` to `τ`, by the
/// halting-state identity `ℋ(σ,τ) = max_j Σ_i (σ_i - τ_i) h[i][j]`.
pub fn access_time(sigma: &[f64], tau: &[f64], h: &HittingMatrix) -> Result<f64> {
    let n = h.len();
    check_distribution("sigma", sigma, n)?;
    check_distribution("tau", tau, n)?;
    let diff: Vec<f64> = sigma.iter().zip(tau).map(|(s, t)| s - t).collect();
    let mut col = vec![0.0; n];
    for (i, &d) in diff.iter().enumerate() {
        if d != 0.0 {
            for (c, &hij) in col.iter_mut().zip(h.row(i)) {
                *c += d * hij;
            }
        }
    }
    Ok(col.into_iter().fold(0.0, f64::max))
}

/// `ℋ = max_σ ℋ(σ, π)` together with the start vertex attaining it and the
/// halting state of the optimal rule from that start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingTime {
    pub value: f64,
    pub start: usize,
    pub halting_state: usize,
}

/// Mixing time of a reversible chain. Because `Σ_k π_k M_kj = √π_j`,
/// `h[i][j] - E_π T_j = 1 - Z_ij/π_j`, so the maximum over point masses is read
/// straight off the fundamental matrix.
pub fn chain_mixing_time(chain: &ReversibleChain) -> Result<MixingTime> {
    let pi = chain.stationary()?;
    let m = symmetric_fundamental(chain, &pi)?;
    let n = chain.len();
    let sq: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
    let mut best = MixingTime {
        value: 0.0,
        start: 0,
        halting_state: 0,
    };
    for i in 0..n {
        for j in 0..n {
            let v = 1.0 - m[i * n + j] / (sq[i] * sq[j]);
            if v > best.value {
                best = MixingTime {
                    value: v,
                    start: i,
                    halting_state: j,
                };
            }
        }
    }
    Ok(best)
}

pub fn mixing_time_detail(g: &Multigraph) -> Result<MixingTime> {
    chain_mixing_time(&ReversibleChain::from_graph(g))
}

/// `ℋ(G)` of the simple random walk on a connected graph.
pub fn mixing_time_exact(g: &Multigraph) -> Result<f64> {
    Ok(mixing_time_detail(g)?.value)
}
