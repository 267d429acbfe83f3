use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::DegreeSequence;
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::rng::rng_from_seed;

/// Default cap on rejection rounds for the conditioned samplers.
pub const DEFAULT_RETRY_LIMIT: u64 = 10_000_000;

/// `G(n, p)`: each pair present independently with probability `p`.
///
/// Uses geometric skipping over the pairs `(v, w)`, `w < v`, so the cost is
/// proportional to the number of edges produced.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Multigraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let mut g = Multigraph::new(n);
    if p == 0.0 || n < 2 {
        return Ok(g);
    }
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                g.add_edge(w, v)?;
            }
        }
        return Ok(g);
    }
    let mut rng = rng_from_seed(seed);
    let lp = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / lp).floor();
        w += 1 + skip.min(i64::MAX as f64 / 4.0) as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.add_edge(w as usize, v)?;
        }
    }
    Ok(g)
}

/// `G(n, m)`: uniform simple graph with exactly `m` edges.
///
/// Draws pairs with rejection of duplicates; when `m` exceeds half of all
/// pairs the complement is drawn instead and the edge list is sorted.
pub fn sample_gnm(n: usize, m: usize, seed: u64) -> Result<Multigraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the {pairs} vertex pairs of n = {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let complement = m > pairs / 2;
    let target = if complement { pairs - m } else { m };
    let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(target);
    let mut order = Vec::with_capacity(target);
    while order.len() < target {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if chosen.insert(key) {
            order.push(key);
        }
    }
    let mut g = Multigraph::new(n);
    if complement {
        for u in 0..n {
            for v in u + 1..n {
                if !chosen.contains(&(u, v)) {
                    g.add_edge(u, v)?;
                }
            }
        }
    } else {
        for (u, v) in order {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

fn cnm_with(n: usize, m: usize, rng: &mut crate::rng::Rng) -> Multigraph {
    let mut g = Multigraph::new(n);
    for _ in 0..m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        g.add_edge(u, v).expect("endpoints in range");
    }
    g
}

/// `C(n, m)`: `m` edges whose `2m` endpoints are i.i.d. uniform on the vertices.
pub fn sample_cnm(n: usize, m: usize, seed: u64) -> Result<Multigraph> {
    if n == 0 && m > 0 {
        return Err(Error::InvalidParameter("edges need at least one vertex".into()));
    }
    Ok(cnm_with(n, m, &mut rng_from_seed(seed)))
}

/// `C_k(n, m)`: `C(n, m)` conditioned on minimum degree at least `k`, by rejection.
pub fn sample_cnm_mindeg(n: usize, m: usize, k: usize, seed: u64) -> Result<Multigraph> {
    sample_cnm_mindeg_with_limit(n, m, k, seed, DEFAULT_RETRY_LIMIT)
}

pub fn sample_cnm_mindeg_with_limit(n: usize, m: usize, k: usize, seed: u64, limit: u64) -> Result<Multigraph> {
    if n == 0 {
        return sample_cnm(0, m, seed);
    }
    if 2 * m < k * n {
        return Err(Error::InvalidParameter(format!(
            "minimum degree {k} infeasible with n = {n}, m = {m}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..limit {
        let g = cnm_with(n, m, &mut rng);
        if g.min_degree().unwrap_or(0) >= k {
            return Ok(g);
        }
    }
    Err(Error::RetryLimit {
        what: "sample_cnm_mindeg",
        limit,
    })
}

/// Pairing model: a uniform perfect matching of the `Σ d_i` points, cell `i`
/// holding `d_i` of them; each matched pair becomes an edge.
pub fn sample_pairing(d: &DegreeSequence, seed: u64) -> Result<Multigraph> {
    d.check_even()?;
    let mut points: Vec<usize> = Vec::with_capacity(d.sum() as usize);
    for (v, &dv) in d.0.iter().enumerate() {
        points.extend(std::iter::repeat_n(v, dv));
    }
    points.shuffle(&mut rng_from_seed(seed));
    let mut g = Multigraph::new(d.len());
    for pair in points.chunks_exact(2) {
        g.add_edge(pair[0], pair[1])?;
    }
    Ok(g)
}

/// `Σ_{k ≥ j} λ^k / k!`, summed directly to avoid cancellation at small `λ`.
fn poisson_tail_unnormalized(lambda: f64, j: usize) -> f64 {
    let mut term = 1.0;
    for k in 1..=j {
        term *= lambda / k as f64;
    }
    let mut sum = 0.0;
    let mut k = j;
    loop {
        sum += term;
        k += 1;
        term *= lambda / k as f64;
        if term <= sum * 1e-17 || k > j + 10_000 {
            return sum;
        }
    }
}

/// Mean and variance of a Poisson(`λ`) variable conditioned on being at least 3.
fn truncated_moments(lambda: f64) -> (f64, f64) {
    let s1 = poisson_tail_unnormalized(lambda, 1);
    let s2 = poisson_tail_unnormalized(lambda, 2);
    let s3 = poisson_tail_unnormalized(lambda, 3);
    let mean = lambda * s2 / s3;
    let second = lambda * lambda * s1 / s3 + mean;
    (mean, (second - mean * mean).max(0.0))
}

/// Rate `λ` whose Poisson law truncated to `{3, 4, ...}` has the given mean
/// (which must exceed 3). Newton in `λ`, using `dμ/dλ = Var/λ`, kept inside a
/// bisection bracket.
pub fn truncated_poisson_rate(mean: f64) -> Result<f64> {
    if !(mean > 3.0) || !mean.is_finite() {
        return Err(Error::InvalidParameter(format!("truncated mean must exceed 3, got {mean}")));
    }
    let (mut lo, mut hi) = (0.0f64, mean.max(1.0));
    while truncated_moments(hi).0 < mean {
        hi *= 2.0;
        if hi > 600.0 {
            return Err(Error::InvalidParameter(format!("truncated mean {mean} too large")));
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (mu, var) = truncated_moments(lambda);
        if mu < mean {
            lo = lambda;
        } else {
            hi = lambda;
        }
        if (mu - mean).abs() <= 1e-13 * mean {
            return Ok(lambda);
        }
        let step = (mu - mean) * lambda / var.max(1e-300);
        let next = lambda - step;
        lambda = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(lambda)
}

/// Cell occupancies of `2 m_k` uniform throws into `n_k` cells, conditioned on
/// every cell receiving at least 3.
///
/// I.i.d. Poisson(`λ`) counts conditioned on their sum have the multinomial law
/// for any `λ`, so truncated-Poisson draws rejected until the sum is exactly
/// `2 m_k` give the conditioned occupancy law; `λ` only tunes the acceptance rate.
pub fn sample_kernel_degrees(n_k: usize, m_k: usize, seed: u64) -> Result<DegreeSequence> {
    sample_kernel_degrees_with_limit(n_k, m_k, seed, DEFAULT_RETRY_LIMIT)
}

pub fn sample_kernel_degrees_with_limit(n_k: usize, m_k: usize, seed: u64, limit: u64) -> Result<DegreeSequence> {
    let total = 2 * m_k;
    if total < 3 * n_k || (n_k == 0 && m_k > 0) {
        return Err(Error::InvalidParameter(format!(
            "need 2 m_k >= 3 n_k, got n_k = {n_k}, m_k = {m_k}"
        )));
    }
    if n_k == 0 {
        return Ok(DegreeSequence(Vec::new()));
    }
    if n_k == 1 {
        return Ok(DegreeSequence(vec![total]));
    }
    if total == 3 * n_k {
        return Ok(DegreeSequence(vec![3; n_k]));
    }
    let lambda = truncated_poisson_rate(total as f64 / n_k as f64)?;
    let s3 = poisson_tail_unnormalized(lambda, 3);
    let p3 = lambda.powi(3) / 6.0 / s3;
    let mut rng = rng_from_seed(seed);
    let mut d = vec![0usize; n_k];
    for _ in 0..limit {
        let mut sum = 0usize;
        for slot in d.iter_mut() {
            let u: f64 = rng.random();
            let (mut k, mut p, mut acc) = (3usize, p3, p3);
            while acc < u && p > 0.0 {
                k += 1;
                p *= lambda / k as f64;
                acc += p;
            }
            *slot = k;
            sum += k;
            if sum > total {
                break;
            }
        }
        if sum == total {
            return Ok(DegreeSequence(d));
        }
    }
    Err(Error::RetryLimit {
        what: "sample_kernel_degrees",
        limit,
    })
}

/// Assigns items `0..num_deg2` to `num_edges` ordered lists so that every
/// assignment together with every per-list order is equally likely.
///
/// Item `i` is inserted into one of the `num_edges + i` current slots chosen
/// uniformly: a list of length `L` has `L + 1` slots. Choosing the list is done
/// by drawing a token, where each list owns one base token plus one per item
/// already in it.
pub fn random_ordered_assignment(num_edges: usize, num_deg2: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if num_edges == 0 {
        return Err(Error::InvalidParameter("need at least one edge".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); num_edges];
    let mut owner: Vec<usize> = Vec::with_capacity(num_deg2);
    for item in 0..num_deg2 {
        let token = rng.random_range(0..num_edges + item);
        let e = if token < num_edges { token } else { owner[token - num_edges] };
        let pos = rng.random_range(0..=lists[e].len());
        lists[e].insert(pos, item);
        owner.push(e);
    }
    Ok(lists)
}
