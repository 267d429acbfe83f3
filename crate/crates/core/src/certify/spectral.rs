use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng as _;

use super::cheeger::{check_cheeger_input, CheegerMethod, CheegerResult};
use crate::error::{Error, Result};
use crate::mixing::ReversibleChain;
use crate::multigraph::Multigraph;
use crate::rng::rng_from_seed;

/// Below this size the lazy operator is diagonalised densely.
const DENSE_EIGEN_MAX: usize = 300;
const LANCZOS_MAX_STEPS: usize = 2000;
const LANCZOS_TOL: f64 = 1e-9;

/// `y = S_lazy x` with `S_lazy = (I + D^{-1/2} W D^{-1/2}) / 2`.
fn apply_lazy(chain: &ReversibleChain, inv_sqrt: &[f64], x: &[f64], y: &mut [f64]) {
    for (i, yi) in y.iter_mut().enumerate() {
        let mut s = 0.0;
        for &(j, w) in chain.row(i) {
            s += w * inv_sqrt[j] * x[j];
        }
        *yi = 0.5 * (x[i] + inv_sqrt[i] * s);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Second eigenvalue of the lazy operator and an eigenvector, as an upper
/// estimate: the Ritz value plus its residual norm.
fn second_eigen(chain: &ReversibleChain) -> Result<(f64, Vec<f64>)> {
    let n = chain.len();
    let total: f64 = chain.total_weights().iter().sum();
    let top: Vec<f64> = chain.total_weights().iter().map(|w| (w / total).sqrt()).collect();
    let inv_sqrt: Vec<f64> = chain.total_weights().iter().map(|w| 1.0 / w.sqrt()).collect();

    if n <= DENSE_EIGEN_MAX {
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            apply_lazy(chain, &inv_sqrt, &e, &mut col);
            e[j] = 0.0;
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        // deflate the top eigenvector √π (eigenvalue 1) to -1
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= 2.0 * top[i] * top[j];
            }
        }
        let eig = SymmetricEigen::new(m);
        let k = eig.eigenvalues.imax();
        let vec = eig.eigenvectors.column(k).iter().copied().collect();
        return Ok((eig.eigenvalues[k], vec));
    }

    let mut rng = rng_from_seed(0x5eed_1a2c);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let c = dot(&q, &top);
    axpy(-c, &top, &mut q);
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut next_check = 20usize;
    let max_steps = LANCZOS_MAX_STEPS.min(n - 1);
    loop {
        let k = basis.len() - 1;
        apply_lazy(chain, &inv_sqrt, &basis[k], &mut w);
        let a = dot(&w, &basis[k]);
        alpha.push(a);
        // full reorthogonalisation, twice, against √π and the basis
        for _ in 0..2 {
            let c = dot(&w, &top);
            axpy(-c, &top, &mut w);
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
        }
        let bnorm = dot(&w, &w).sqrt();
        let steps = alpha.len();
        let exhausted = bnorm < 1e-12 || steps >= max_steps;
        if steps >= next_check || exhausted {
            next_check = (next_check * 3 / 2).max(next_check + 20);
            let (theta, s) = top_tridiagonal_eigenpair(&alpha, &beta[..steps - 1]);
            let residual = (bnorm * s[steps - 1]).abs();
            if residual <= LANCZOS_TOL || exhausted {
                if residual > LANCZOS_TOL && bnorm >= 1e-12 {
                    return Err(Error::NotConverged(format!(
                        "Lanczos residual {residual:e} after {steps} steps"
                    )));
                }
                let mut vec = vec![0.0; n];
                for (b, &coef) in basis.iter().zip(&s) {
                    axpy(coef, b, &mut vec);
                }
                return Ok((theta + residual, vec));
            }
        }
        beta.push(bnorm);
        w.iter_mut().for_each(|x| *x /= bnorm);
        basis.push(std::mem::replace(&mut w, vec![0.0; n]));
    }
}

/// Number of eigenvalues of the symmetric tridiagonal `(a, b)` below `x`.
fn sturm_count(a: &[f64], b: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..a.len() {
        let off = if i == 0 { 0.0 } else { b[i - 1] * b[i - 1] };
        d = a[i] - x - if i == 0 { 0.0 } else { off / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a[i].abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `a`
/// and off-diagonal `b` by Sturm bisection, and a unit eigenvector by inverse
/// iteration.
fn top_tridiagonal_eigenpair(a: &[f64], b: &[f64]) -> (f64, Vec<f64>) {
    let m = a.len();
    let radius = |i: usize| {
        (if i > 0 { b[i - 1].abs() } else { 0.0 }) + (if i + 1 < m { b[i].abs() } else { 0.0 })
    };
    let mut lo = (0..m).map(|i| a[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..m).map(|i| a[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(a, b, mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    // inverse iteration on (T - θ' I) with partial pivoting, θ' just above θ
    let shift = theta + 1e-13 * (1.0 + theta.abs());
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    for _ in 0..3 {
        x = solve_tridiagonal(a, b, shift, &x);
        let norm = dot(&x, &x).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    (theta, x)
}

/// `(T - shift I) y = rhs` by Gaussian elimination with partial pivoting.
fn solve_tridiagonal(a: &[f64], b: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = a.len();
    // row i holds up to three entries starting at column i after pivoting
    let mut rows: Vec<[f64; 3]> = (0..m)
        .map(|i| [a[i] - shift, if i + 1 < m { b[i] } else { 0.0 }, 0.0])
        .collect();
    let mut sub: Vec<f64> = (0..m).map(|i| if i > 0 { b[i - 1] } else { 0.0 }).collect();
    let mut y = rhs.to_vec();
    for i in 0..m.saturating_sub(1) {
        // candidate pivot rows: i (entries rows[i]) and i+1 (sub[i+1], rows[i+1][0..2])
        let below = [sub[i + 1], rows[i + 1][0], rows[i + 1][1]];
        if below[0].abs() > rows[i][0].abs() {
            let cur = rows[i];
            rows[i] = below;
            rows[i + 1] = [cur[1], cur[2], 0.0];
            sub[i + 1] = cur[0];
            y.swap(i, i + 1);
        } else {
            rows[i + 1] = [rows[i + 1][0], rows[i + 1][1], 0.0];
        }
        let piv = if rows[i][0] == 0.0 { f64::MIN_POSITIVE } else { rows[i][0] };
        let f = sub[i + 1] / piv;
        rows[i + 1][0] -= f * rows[i][1];
        rows[i + 1][1] -= f * rows[i][2];
        y[i + 1] -= f * y[i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = y[i];
        if i + 1 < m {
            s -= rows[i][1] * x[i + 1];
        }
        if i + 2 < m {
            s -= rows[i][2] * x[i + 2];
        }
        let piv = if rows[i][0] == 0.0 { f64::MIN_POSITIVE } else { rows[i][0] };
        x[i] = s / piv;
    }
    x
}

/// Best sweep cut of `order` over prefixes and suffixes with `π(S) ≤ 1/2`.
fn sweep(chain: &ReversibleChain, order: &[usize]) -> (f64, Vec<usize>) {
    let n = chain.len();
    let total: f64 = chain.total_weights().iter().sum();
    let mut best = (f64::INFINITY, Vec::new());
    for dir in [false, true] {
        let seq: Vec<usize> = if dir {
            order.iter().rev().copied().collect()
        } else {
            order.to_vec()
        };
        let mut in_s = vec![false; n];
        let mut cut = 0.0;
        let mut vol = 0.0;
        for (k, &v) in seq.iter().enumerate() {
            let mut to_s = 0.0;
            let mut out = 0.0;
            for &(j, w) in chain.row(v) {
                if j == v {
                    continue;
                }
                if in_s[j] {
                    to_s += w;
                } else {
                    out += w;
                }
            }
            cut += out - to_s;
            vol += chain.total_weight(v);
            in_s[v] = true;
            if 2.0 * vol > total {
                break;
            }
            let phi = cut / vol;
            if phi < best.0 {
                best = (phi, seq[..=k].to_vec());
            }
        }
    }
    best.1.sort_unstable();
    best
}

/// Spectral bounds: `lower = (1 - λ₂)/2` with `λ₂` the second eigenvalue of
/// the lazy walk `(I + P)/2`, `upper` the best sweep cut of its eigenvector.
pub fn cheeger_bounds(chain: &ReversibleChain) -> Result<CheegerResult> {
    check_cheeger_input(chain)?;
    let (lambda2, u) = second_eigen(chain)?;
    let lower = ((1.0 - lambda2.min(1.0)) / 2.0).max(0.0);
    let score: Vec<f64> = (0..chain.len()).map(|i| u[i] / chain.total_weight(i).sqrt()).collect();
    let mut order: Vec<usize> = (0..chain.len()).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
    let (upper, witness) = sweep(chain, &order);
    Ok(CheegerResult {
        lower: lower.min(upper),
        upper,
        exact: false,
        method: CheegerMethod::Spectral,
        witness,
    })
}

pub fn cheeger_bounds_graph(g: &Multigraph) -> Result<CheegerResult> {
    cheeger_bounds(&ReversibleChain::from_graph(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Multigraph {
        let mut g = Multigraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j).unwrap();
            }
        }
        g
    }

    #[test]
    fn complete_graph_lower_bound() {
        for n in [8, 16, 32] {
            let r = cheeger_bounds_graph(&complete(n)).unwrap();
            // λ₂(P) = -1/(n-1), lazy λ₂ = (n-2)/(2(n-1))
            let want = (1.0 - (n as f64 - 2.0) / (2.0 * (n as f64 - 1.0))) / 2.0;
            assert!((r.lower - want).abs() < 1e-9, "n={n}");
            assert!(r.lower > 0.2);
        }
    }

    #[test]
    fn long_path_has_a_small_sweep_cut() {
        let p = Multigraph::from_edges(50, (0..49).map(|i| (i, i + 1))).unwrap();
        let r = cheeger_bounds_graph(&p).unwrap();
        assert!(r.upper <= 0.05);
        assert!(r.lower <= r.upper);
    }

    #[test]
    fn lanczos_matches_dense_on_a_cycle() {
        let n = 400;
        let c = Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        let r = cheeger_bounds_graph(&c).unwrap();
        let lambda2 = (1.0 + (2.0 * std::f64::consts::PI / n as f64).cos()) / 2.0;
        assert!((r.lower - (1.0 - lambda2) / 2.0).abs() < 1e-8);
        assert!((r.upper - 2.0 / n as f64).abs() < 1e-12);
    }
}
