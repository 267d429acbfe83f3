use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixing::ReversibleChain;
use crate::multigraph::Multigraph;

/// Largest state count for exhaustive Cheeger minimisation.
pub const MAX_EXACT_CHEEGER_STATES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheegerMethod {
    Exact,
    Spectral,
}

/// Bounds on `Φ = min_{0 < π(S) ≤ 1/2} Q(S, S^c) / π(S)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerResult {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub method: CheegerMethod,
    /// A set with `0 < π(S) ≤ 1/2` whose quotient equals `upper`.
    pub witness: Vec<usize>,
}

/// `Σ_{i∈S, j∉S} w_ij / Σ_{i∈S} W_i`, the Cheeger quotient of `S`.
pub fn cheeger_quotient(chain: &ReversibleChain, in_s: &[bool]) -> f64 {
    let mut cut = 0.0;
    let mut vol = 0.0;
    for i in (0..chain.len()).filter(|&i| in_s[i]) {
        vol += chain.total_weight(i);
        for &(j, w) in chain.row(i) {
            if !in_s[j] {
                cut += w;
            }
        }
    }
    cut / vol
}

pub(crate) fn check_cheeger_input(chain: &ReversibleChain) -> Result<()> {
    if chain.len() < 2 {
        return Err(Error::Precondition("Cheeger constant needs at least two states".into()));
    }
    chain.require_ergodic_support()
}

/// Exact `Φ` by visiting every subset in Gray-code order, updating the cut
/// weight in `O(deg)` per flip.
pub fn cheeger_exact(chain: &ReversibleChain) -> Result<CheegerResult> {
    let n = chain.len();
    if n > MAX_EXACT_CHEEGER_STATES {
        return Err(Error::TooLarge {
            what: "exact Cheeger enumeration",
            size: n,
            cap: MAX_EXACT_CHEEGER_STATES,
        });
    }
    check_cheeger_input(chain)?;
    let total: f64 = chain.total_weights().iter().sum();
    let own: Vec<f64> = (0..n).map(|i| chain.weight(i, i)).collect();
    // to_set[i] = Σ_{j ∈ S, j ≠ i} w_ij
    let mut to_set = vec![0.0; n];
    let mut in_s = vec![false; n];
    let mut cut = 0.0;
    let mut vol = 0.0;
    let mut best: Option<(f64, f64, u32)> = None;
    let mut mask: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let v = k.trailing_zeros() as usize;
        let outside = chain.total_weight(v) - own[v] - to_set[v];
        let sign = if in_s[v] { -1.0 } else { 1.0 };
        // adding v: its edges into S stop being cut, its other edges start
        cut += sign * (outside - to_set[v]);
        vol += sign * chain.total_weight(v);
        in_s[v] = !in_s[v];
        mask ^= 1 << v;
        for &(j, w) in chain.row(v) {
            if j != v {
                to_set[j] += sign * w;
            }
        }
        if 2.0 * vol <= total && vol > 0.0 {
            let better = match best {
                None => true,
                Some((bc, bv, _)) => cut * bv < bc * vol,
            };
            if better {
                best = Some((cut, vol, mask));
            }
        }
    }
    let (_, _, mask) = best.ok_or_else(|| Error::Precondition("no set with 0 < π(S) ≤ 1/2".into()))?;
    let witness: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let mut flags = vec![false; n];
    for &i in &witness {
        flags[i] = true;
    }
    // recompute from scratch so the value does not carry update round-off
    let phi = cheeger_quotient(chain, &flags);
    Ok(CheegerResult {
        lower: phi,
        upper: phi,
        exact: true,
        method: CheegerMethod::Exact,
        witness,
    })
}

pub fn cheeger_exact_graph(g: &Multigraph) -> Result<CheegerResult> {
    cheeger_exact(&ReversibleChain::from_graph(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let c4 = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = cheeger_exact_graph(&c4).unwrap();
        assert_eq!(r.upper, 0.5);
        assert_eq!(r.witness.len(), 2);
        let (a, b) = (r.witness[0], r.witness[1]);
        assert!(c4.neighbors(a).any(|x| x == b));
        let k4 = Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!((cheeger_exact_graph(&k4).unwrap().upper - 2.0 / 3.0).abs() < 1e-15);
        let k2 = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(cheeger_exact_graph(&k2).unwrap().upper, 1.0);
    }

    #[test]
    fn errors() {
        let g = Multigraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(cheeger_exact_graph(&g), Err(Error::Disconnected)));
        let big = Multigraph::from_edges(25, (0..24).map(|i| (i, i + 1))).unwrap();
        assert!(matches!(cheeger_exact_graph(&big), Err(Error::TooLarge { .. })));
    }
}
