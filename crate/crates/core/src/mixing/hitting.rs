use serde::Serialize;

use super::chain::ReversibleChain;
use super::dense::spd_inverse;
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// Largest state count handled by the dense solvers.
pub const MAX_DENSE_STATES: usize = 4096;

/// `h[i][j]`: expected number of steps from `i` to the first visit of `j`.
#[derive(Debug, Clone, Serialize)]
pub struct HittingMatrix {
    n: usize,
    data: Vec<f64>,
}

impl HittingMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("hitting matrix must be square".into()));
        }
        Ok(HittingMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

/// A chain together with its stationary law and hitting times.
#[derive(Debug, Clone, Serialize)]
pub struct ChainSolve {
    pub chain: ReversibleChain,
    pub pi: Vec<f64>,
    pub hitting: HittingMatrix,
}

impl ChainSolve {
    pub fn new(chain: ReversibleChain) -> Result<Self> {
        let pi = chain.stationary()?;
        let m = symmetric_fundamental(&chain, &pi)?;
        let n = chain.len();
        let sq: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
        let diag: Vec<f64> = (0..n).map(|j| m[j * n + j] / pi[j]).collect();
        let mut data = m;
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = if i == j {
                    0.0
                } else {
                    diag[j] - data[i * n + j] / (sq[i] * sq[j])
                };
            }
        }
        Ok(ChainSolve {
            chain,
            pi,
            hitting: HittingMatrix { n, data },
        })
    }

    pub fn from_graph(g: &Multigraph) -> Result<Self> {
        Self::new(ReversibleChain::from_graph(g))
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// `E_π T_j = Σ_i π_i h[i][j]`.
    pub fn stationary_hitting(&self, j: usize) -> f64 {
        (0..self.len()).map(|i| self.pi[i] * self.hitting.get(i, j)).sum()
    }

    /// Expected return time to `j`: `Σ_k p_jk (1 + h[k][j])`, equal to `1/π_j`.
    pub fn return_time(&self, j: usize) -> f64 {
        self.chain
            .transitions(j)
            .map(|(k, p)| p * (1.0 + self.hitting.get(k, j)))
            .sum()
    }
}

fn check_size(chain: &ReversibleChain) -> Result<()> {
    if chain.len() > MAX_DENSE_STATES {
        return Err(Error::TooLarge {
            what: "dense chain solve",
            size: chain.len(),
            cap: MAX_DENSE_STATES,
        });
    }
    chain.require_ergodic_support()
}

/// `(I - S + √π√πᵀ)^{-1}` with `S = D^{-1/2} W D^{-1/2}`, the symmetrised
/// fundamental matrix: `Z_ij / π_j = M_ij / √(π_i π_j)`.
pub(crate) fn symmetric_fundamental(chain: &ReversibleChain, pi: &[f64]) -> Result<Vec<f64>> {
    check_size(chain)?;
    let n = chain.len();
    let sq: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = sq[i] * sq[j];
        }
        a[i * n + i] += 1.0;
        let wi = chain.total_weight(i);
        for &(j, w) in chain.row(i) {
            a[i * n + j] -= w / (wi * chain.total_weight(j)).sqrt();
        }
    }
    spd_inverse(a, n).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!("fundamental matrix: {msg}")),
        other => other,
    })
}

/// All hitting times of the simple random walk on a connected `g`.
pub fn hitting_times(g: &Multigraph) -> Result<HittingMatrix> {
    if g.vertex_count() > MAX_DENSE_STATES {
        return Err(Error::TooLarge {
            what: "dense chain solve",
            size: g.vertex_count(),
            cap: MAX_DENSE_STATES,
        });
    }
    Ok(ChainSolve::from_graph(g)?.hitting)
}
