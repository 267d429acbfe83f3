use super::chain::ReversibleChain;
use super::hitting::MAX_DENSE_STATES;
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// Largest horizon examined by [`uniform_mixing_time`].
pub const MAX_UNIFORM_HORIZON: usize = 1_000_000;

/// Start vertices evolved together; state-major rows of this width stay in
/// cache for graphs near the dense cap.
const CHUNK: usize = 32;

/// Horizon increment between checks for an answer.
const HORIZON_STEP: usize = 64;

/// Evolution of `δ_v P^k` for a block of start vertices, stored state-major:
/// entry `(i, s)` at `i * width + s`.
struct Block {
    width: usize,
    cur: Vec<f64>,
    next: Vec<f64>,
    acc: Vec<f64>,
    /// Number of powers already summed into `acc`.
    t: usize,
}

/// Least `t ≥ 1` such that, for every start vertex `v`, the law of `R(k)` with
/// `k` uniform on `{0, …, t-1}` is within L1 distance `eps` of `π`.
pub fn uniform_mixing_time(g: &Multigraph, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 2), got {eps}")));
    }
    let chain = ReversibleChain::from_graph(g);
    if chain.len() > MAX_DENSE_STATES {
        return Err(Error::TooLarge {
            what: "uniform mixing evolution",
            size: chain.len(),
            cap: MAX_DENSE_STATES,
        });
    }
    chain.require_ergodic_support()?;
    let pi = chain.stationary()?;
    let n = chain.len();
    // incoming[j] = (i, p_ij)
    let incoming: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|j| chain.row(j).iter().map(|&(i, w)| (i, w / chain.total_weight(i))).collect())
        .collect();

    let mut blocks: Vec<Block> = (0..n)
        .step_by(CHUNK)
        .map(|s0| {
            let width = CHUNK.min(n - s0);
            let mut cur = vec![0.0; n * width];
            for s in 0..width {
                cur[(s0 + s) * width + s] = 1.0;
            }
            Block {
                width,
                cur,
                next: vec![0.0; n * width],
                acc: vec![0.0; n * width],
                t: 0,
            }
        })
        .collect();

    // bad[t - 1]: some start is farther than eps from π at horizon t
    let mut bad: Vec<bool> = Vec::new();
    let mut horizon = 0usize;
    let mut dist = vec![0.0; CHUNK];
    loop {
        horizon += HORIZON_STEP;
        let horizon_now = horizon.min(MAX_UNIFORM_HORIZON);
        bad.resize(horizon_now, false);
        for blk in &mut blocks {
            let w = blk.width;
            while blk.t < horizon_now {
                for (a, c) in blk.acc.iter_mut().zip(&blk.cur) {
                    *a += c;
                }
                blk.t += 1;
                let t = blk.t;
                if !bad[t - 1] {
                    let inv_t = 1.0 / t as f64;
                    let d = &mut dist[..w];
                    d.iter_mut().for_each(|x| *x = 0.0);
                    for (row, &p) in blk.acc.chunks_exact(w).zip(&pi) {
                        for (x, &a) in d.iter_mut().zip(row) {
                            *x += (a * inv_t - p).abs();
                        }
                    }
                    if d.iter().any(|&x| x > eps) {
                        bad[t - 1] = true;
                    }
                }
                for (j, dst) in blk.next.chunks_exact_mut(w).enumerate() {
                    dst.iter_mut().for_each(|x| *x = 0.0);
                    for &(i, p) in &incoming[j] {
                        let src = &blk.cur[i * w..(i + 1) * w];
                        for (x, &y) in dst.iter_mut().zip(src) {
                            *x += p * y;
                        }
                    }
                }
                std::mem::swap(&mut blk.cur, &mut blk.next);
            }
        }
        if let Some(t) = bad.iter().position(|&b| !b) {
            return Ok(t + 1);
        }
        if horizon_now == MAX_UNIFORM_HORIZON {
            return Err(Error::NotConverged(format!(
                "uniform mixing time exceeds {MAX_UNIFORM_HORIZON}"
            )));
        }
    }
}
