//! Dense symmetric positive definite inverse: blocked Cholesky, blocked
//! triangular inverse, then `A^{-1} = L^{-T} L^{-1}`, with every bulk update
//! done by `matrixmultiply::dgemm`. Matrices are row-major `n × n` slices.

use crate::error::{Error, Result};

const NB: usize = 96;

/// `C[m×n] = alpha · A[m×k] · B[k×n] + beta · C`, arbitrary strides.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: (*const f64, isize, isize),
    b: (*const f64, isize, isize),
    beta: f64,
    c: (*mut f64, isize, isize),
) {
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: every call site passes pointers to live buffers whose strided
    // extents cover the stated shapes, and `c` never overlaps `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(m, k, n, alpha, a.0, a.1, a.2, b.0, b.1, b.2, beta, c.0, c.1, c.2);
    }
}

/// In-place lower Cholesky factor; the strict upper triangle is zeroed.
pub fn cholesky_lower(a: &mut [f64], n: usize) -> Result<()> {
    assert_eq!(a.len(), n * n);
    let ni = n as isize;
    for k0 in (0..n).step_by(NB) {
        let k1 = (k0 + NB).min(n);
        for j in k0..k1 {
            let mut s = a[j * n + j];
            for p in k0..j {
                s -= a[j * n + p] * a[j * n + p];
            }
            if !(s > 0.0) {
                return Err(Error::Singular(format!("pivot {j} is {s:e}")));
            }
            let d = s.sqrt();
            a[j * n + j] = d;
            for i in j + 1..n {
                let mut t = a[i * n + j];
                for p in k0..j {
                    t -= a[i * n + p] * a[j * n + p];
                }
                a[i * n + j] = t / d;
            }
        }
        // trailing lower blocks: A[j0.., j0..j1] -= P[j0..] · P[j0..j1]^T
        let kb = k1 - k0;
        for j0 in (k1..n).step_by(NB) {
            let j1 = (j0 + NB).min(n);
            let base = a.as_mut_ptr();
            gemm(
                n - j0,
                kb,
                j1 - j0,
                -1.0,
                (unsafe { base.add(j0 * n + k0) }, ni, 1),
                (unsafe { base.add(j0 * n + k0) }, 1, ni),
                1.0,
                (unsafe { base.add(j0 * n + j0) }, ni, 1),
            );
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            a[i * n + j] = 0.0;
        }
    }
    Ok(())
}

/// Inverse of a lower-triangular matrix, itself lower triangular.
pub fn lower_triangular_inverse(l: &[f64], n: usize) -> Vec<f64> {
    let ni = n as isize;
    let mut y = vec![0.0; n * n];
    let mut t = vec![0.0; NB * n];
    for i0 in (0..n).step_by(NB) {
        let i1 = (i0 + NB).min(n);
        let kb = i1 - i0;
        // diagonal block by forward substitution
        for c in i0..i1 {
            y[c * n + c] = 1.0 / l[c * n + c];
            for r in c + 1..i1 {
                let mut s = 0.0;
                for p in c..r {
                    s += l[r * n + p] * y[p * n + c];
                }
                y[r * n + c] = -s / l[r * n + r];
            }
        }
        if i0 == 0 {
            continue;
        }
        // T = L[I, 0..i0] · Y[0..i0, 0..i0];  Y[I, 0..i0] = -Y_II · T
        gemm(
            kb,
            i0,
            i0,
            1.0,
            (l[i0 * n..].as_ptr(), ni, 1),
            (y.as_ptr(), ni, 1),
            0.0,
            (t.as_mut_ptr(), ni, 1),
        );
        let yp = y.as_mut_ptr();
        gemm(
            kb,
            kb,
            i0,
            -1.0,
            (unsafe { yp.add(i0 * n + i0) } as *const f64, ni, 1),
            (t.as_ptr(), ni, 1),
            0.0,
            (unsafe { yp.add(i0 * n) }, ni, 1),
        );
    }
    y
}

/// `A^{-1}` for symmetric positive definite `A`. Fails with
/// [`Error::Singular`] when a Cholesky pivot is not positive.
pub fn spd_inverse(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    cholesky_lower(&mut a, n)?;
    let y = lower_triangular_inverse(&a, n);
    drop(a);
    let ni = n as isize;
    let mut out = vec![0.0; n * n];
    // (Y^T Y)[0..k1, 0..k1] += Y[K, 0..k1]^T · Y[K, 0..k1] per block row K
    for k0 in (0..n).step_by(NB) {
        let k1 = (k0 + NB).min(n);
        gemm(
            k1,
            k1 - k0,
            k1,
            1.0,
            (y[k0 * n..].as_ptr(), 1, ni),
            (y[k0 * n..].as_ptr(), ni, 1),
            1.0,
            (out.as_mut_ptr(), ni, 1),
        );
    }
    Ok(out)
}
