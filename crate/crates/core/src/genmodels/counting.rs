use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Largest point count `2m` for which [`crossing_prob`] uses exact rationals.
/// Beyond it the log-gamma form is used.
pub const EXACT_CROSSING_MAX_POINTS: usize = 64;

/// Number of perfect matchings of `k` labeled points, `(k-1)!!`; zero for odd `k`.
pub fn matchings_count(k: usize) -> BigUint {
    if k % 2 == 1 {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    let mut j = 1;
    while j < k {
        acc *= j as u64;
        j += 2;
    }
    acc
}

/// `ln M(k) = ln k! - ln (k/2)! - (k/2) ln 2` for even `k`; `-inf` for odd `k`.
pub fn ln_matchings_count(k: usize) -> f64 {
    if k % 2 == 1 {
        return f64::NEG_INFINITY;
    }
    let h = (k / 2) as f64;
    ln_gamma(k as f64 + 1.0) - ln_gamma(h + 1.0) - h * std::f64::consts::LN_2
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |a, x| a * x)
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn in_support(m: usize, t: usize, q: usize) -> bool {
    q <= 2 * m && t <= q && t <= 2 * m - q && (q - t) % 2 == 0
}

/// Probability that a uniform perfect matching of `2m` points has exactly `t`
/// pairs leaving a fixed set of `q` points:
/// `C(2m-q, t) C(q, t) t! M(q-t) M(2m-q-t) / M(2m)`.
///
/// Returns zero outside the support (parity, `t > q`, `t > 2m-q`, `q > 2m`).
pub fn crossing_prob_exact(m: usize, t: usize, q: usize) -> BigRational {
    if !in_support(m, t, q) {
        return BigRational::zero();
    }
    let r = 2 * m - q;
    let num = binomial(r, t) * binomial(q, t) * factorial(t) * matchings_count(q - t) * matchings_count(r - t);
    BigRational::new(num.into(), matchings_count(2 * m).into())
}

/// Floating-point `P(m, t, q)`: exact rational arithmetic for `2m` up to
/// [`EXACT_CROSSING_MAX_POINTS`], log-gamma arithmetic beyond.
pub fn crossing_prob(m: usize, t: usize, q: usize) -> f64 {
    if !in_support(m, t, q) {
        return 0.0;
    }
    if 2 * m <= EXACT_CROSSING_MAX_POINTS {
        return crossing_prob_exact(m, t, q).to_f64().unwrap_or(f64::NAN);
    }
    let r = 2 * m - q;
    let ln = ln_binomial(r, t) + ln_binomial(q, t) + ln_gamma(t as f64 + 1.0) + ln_matchings_count(q - t)
        + ln_matchings_count(r - t)
        - ln_matchings_count(2 * m);
    ln.exp()
}
