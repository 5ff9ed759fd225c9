//! Small dense helpers for 3- and 4-dimensional tensor algebra.

use crate::scalar::Real;

pub type Vec4<T> = [T; 4];
pub type Mat4<T> = [[T; 4]; 4];
pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];
/// `chr[a][b][c]` is the Christoffel symbol with upper index `a`.
pub type Chr4<T> = [[[T; 4]; 4]; 4];
pub type Chr3<T> = [[[T; 3]; 3]; 3];

pub fn zero_mat<T: Real, const N: usize>() -> [[T; N]; N] {
    [[T::zero(); N]; N]
}

pub fn inner<T: Real, const N: usize>(g: &[[T; N]; N], u: &[T; N], v: &[T; N]) -> T {
    let mut s = T::zero();
    for a in 0..N {
        for b in 0..N {
            s += g[a][b] * u[a] * v[b];
        }
    }
    s
}

pub fn axpy<T: Real, const N: usize>(a: T, x: &[T; N], y: &[T; N]) -> [T; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += a * x[i];
    }
    out
}

pub fn lin2<T: Real, const N: usize>(a: T, x: &[T; N], b: T, y: &[T; N]) -> [T; N] {
    let mut out = [T::zero(); N];
    for i in 0..N {
        out[i] = a * x[i] + b * y[i];
    }
    out
}

pub fn scale<T: Real, const N: usize>(a: T, x: &[T; N]) -> [T; N] {
    let mut out = *x;
    for v in out.iter_mut() {
        *v *= a;
    }
    out
}

/// Contracts `chr[a][b][c] u^b v^c`.
pub fn contract_chr<T: Real, const N: usize>(
    chr: &[[[T; N]; N]; N],
    u: &[T; N],
    v: &[T; N],
) -> [T; N] {
    let mut out = [T::zero(); N];
    for a in 0..N {
        let mut s = T::zero();
        for b in 0..N {
            for c in 0..N {
                s += chr[a][b][c] * u[b] * v[c];
            }
        }
        out[a] = s;
    }
    out
}

pub fn bilinear<T: Real, const N: usize>(m: &[[T; N]; N], u: &[T; N], v: &[T; N]) -> T {
    inner(m, u, v)
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n x n`; `b` holds `nrhs` right-hand sides column-interleaved
/// (`b[i * nrhs + r]`). Returns `None` for a (numerically) singular matrix.
pub fn solve_dense<T: Real>(a: &mut [T], n: usize, b: &mut [T], nrhs: usize) -> Option<()> {
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= T::min_positive_value() {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            for r in 0..nrhs {
                b.swap(col * nrhs + r, piv * nrhs + r);
            }
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
            for k in 0..nrhs {
                let v = b[col * nrhs + k];
                b[r * nrhs + k] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        let d = a[col * n + col];
        for k in 0..nrhs {
            let mut s = b[col * nrhs + k];
            for j in col + 1..n {
                s -= a[col * n + j] * b[j * nrhs + k];
            }
            b[col * nrhs + k] = s / d;
        }
    }
    Some(())
}

/// Inverse of a small square matrix.
pub fn invert<T: Real, const N: usize>(m: &[[T; N]; N]) -> Option<[[T; N]; N]> {
    let mut a = Vec::with_capacity(N * N);
    for row in m {
        a.extend_from_slice(row);
    }
    let mut b = vec![T::zero(); N * N];
    for i in 0..N {
        b[i * N + i] = T::one();
    }
    solve_dense(&mut a, N, &mut b, N)?;
    let mut out = [[T::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = b[i * N + j];
        }
    }
    Some(out)
}

pub fn max_abs_diff<T: Real, const N: usize>(a: &[[T; N]; N], b: &[[T; N]; N]) -> T {
    let mut m = T::zero();
    for i in 0..N {
        for j in 0..N {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invert_roundtrip() {
        let m = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let inv = invert(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0f64;
                for k in 0..3 {
                    s += m[i][k] * inv[k][j];
                }
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_detected() {
        let m = [[1.0, 2.0], [2.0, 4.0]];
        assert!(invert(&m).is_none());
    }
}
