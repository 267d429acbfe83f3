use nalgebra::DMatrix;
use serde::Serialize;

use super::chain::ReversibleChain;
use super::hitting::MAX_DENSE_STATES;
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// The walk on `G` watched only while it sits in `B`.
///
/// `q[a][b]` is the probability that the walk started at `states[a]` first
/// returns to `B` (after at least one step) at `states[b]`; the weight of
/// `{a, b}` is `d_a(G) q[a][b]`.
#[derive(Debug, Clone, Serialize)]
pub struct InducedChain {
    /// Vertices of `B` in `G`, increasing.
    pub states: Vec<usize>,
    pub q: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
}

impl InducedChain {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights[a][b]
    }

    /// `max |w(a,b) - w(b,a)|`, zero in exact arithmetic.
    pub fn symmetry_defect(&self) -> f64 {
        let k = self.len();
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in a + 1..k {
                worst = worst.max((self.weights[a][b] - self.weights[b][a]).abs());
            }
        }
        worst
    }

    /// Reversible chain on `B` with the averaged weights `(w(a,b) + w(b,a))/2`.
    pub fn chain(&self) -> ReversibleChain {
        let k = self.len();
        let mut list = Vec::new();
        for a in 0..k {
            for b in a..k {
                let w = if a == b {
                    self.weights[a][a]
                } else {
                    0.5 * (self.weights[a][b] + self.weights[b][a])
                };
                list.push((a, b, w));
            }
        }
        ReversibleChain::from_weights(k, list).expect("state indices are in range")
    }
}

/// First-return law on `B` by one absorbing solve `(I - P_DD) H = P_DB` per
/// component `D` of `G - B`.
pub fn induced_chain(g: &Multigraph, b: &[usize]) -> Result<InducedChain> {
    let n = g.vertex_count();
    let mut states: Vec<usize> = b.to_vec();
    states.sort_unstable();
    states.dedup();
    if states.is_empty() {
        return Err(Error::InvalidParameter("B must be nonempty".into()));
    }
    if let Some(&v) = states.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidVertex { vertex: v, vertex_count: n });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = states.len();
    let mut index = vec![usize::MAX; n];
    for (a, &v) in states.iter().enumerate() {
        if g.deg(v) == 0 {
            return Err(Error::NoEdges);
        }
        index[v] = a;
    }

    // components of G - B, local index inside the component
    let mut comp = vec![usize::MAX; n];
    let mut local = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if index[s] != usize::MAX || comp[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut list = vec![s];
        comp[s] = id;
        let mut head = 0;
        while head < list.len() {
            let v = list[head];
            head += 1;
            for w in g.neighbors(v) {
                if index[w] == usize::MAX && comp[w] == usize::MAX {
                    comp[w] = id;
                    list.push(w);
                }
            }
        }
        for (i, &v) in list.iter().enumerate() {
            local[v] = i;
        }
        members.push(list);
    }

    // exit[c][i] = law of the B-vertex hit first from member i of component c
    let mut exits: Vec<(Vec<usize>, DMatrix<f64>)> = Vec::with_capacity(members.len());
    for list in &members {
        let size = list.len();
        if size > MAX_DENSE_STATES {
            return Err(Error::TooLarge {
                what: "induced-chain absorbing solve",
                size,
                cap: MAX_DENSE_STATES,
            });
        }
        let mut targets: Vec<usize> = list
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|&w| index[w] != usize::MAX)
            .map(|w| index[w])
            .collect();
        targets.sort_unstable();
        targets.dedup();
        let mut col = vec![usize::MAX; k];
        for (c, &t) in targets.iter().enumerate() {
            col[t] = c;
        }
        let mut a = DMatrix::<f64>::identity(size, size);
        let mut rhs = DMatrix::<f64>::zeros(size, targets.len());
        for (i, &v) in list.iter().enumerate() {
            let p = 1.0 / g.deg(v) as f64;
            for w in g.neighbors(v) {
                if index[w] != usize::MAX {
                    rhs[(i, col[index[w]])] += p;
                } else {
                    a[(i, local[w])] -= p;
                }
            }
        }
        let h = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("absorbing solve on a component of G - B".into()))?;
        exits.push((targets, h));
    }

    let mut q = vec![vec![0.0; k]; k];
    for (a, &v) in states.iter().enumerate() {
        let p = 1.0 / g.deg(v) as f64;
        for w in g.neighbors(v) {
            if index[w] != usize::MAX {
                q[a][index[w]] += p;
            } else {
                let (targets, h) = &exits[comp[w]];
                for (c, &t) in targets.iter().enumerate() {
                    q[a][t] += p * h[(local[w], c)];
                }
            }
        }
    }
    let weights = q
        .iter()
        .zip(&states)
        .map(|(row, &v)| row.iter().map(|x| x * g.deg(v) as f64).collect())
        .collect();
    Ok(InducedChain { states, q, weights })
}
