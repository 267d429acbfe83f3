use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limits for `G(n, c/n)` with `c > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GiantConstants {
    pub c: f64,
    /// Root of `t e^{-t} = c e^{-c}` in `(0, 1)`.
    pub t: f64,
    /// Giant component fraction `1 - t/c`.
    pub b: f64,
    /// 2-core fraction `b (1 - t)`.
    pub b_core: f64,
}

/// Solves `t e^{-t} = c e^{-c}` for `t` in `(0, 1)` by bisection.
///
/// `x e^{-x}` is strictly increasing on `(0, 1)`, so bisection run until the
/// bracket stops shrinking lands on the closest representable root.
pub fn giant_constants(c: f64) -> Result<GiantConstants> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("need finite c > 1, got {c}")));
    }
    let target = c * (-c).exp();
    let f = |t: f64| t * (-t).exp() - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let b = 1.0 - t / c;
    Ok(GiantConstants {
        c,
        t,
        b,
        b_core: b * (1.0 - t),
    })
}
