//! Householder reduction to real tridiagonal form followed by implicit QL.
//! Used for the larger Hermitian problems where Jacobi sweeps are too slow.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_QL_ITER: usize = 60;

/// Householder tridiagonalisation `H = Q T Q†` with `T` complex Hermitian
/// tridiagonal. Returns the diagonal, the subdiagonal and the reflectors.
struct Tridiagonal {
    diag: Vec<f64>,
    sub: Vec<C64>,
    /// Reflector `k` acts on indices `k+1..n`; stored unit-normalised with
    /// `H_k = I − 2 v v†`. `None` when the column was already reduced.
    reflectors: Vec<Option<Vec<C64>>>,
}

fn householder_tridiagonalize(h: &ComplexMatrix) -> Tridiagonal {
    let n = h.dim();
    let mut a = h.data().to_vec();
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut p = vec![ZERO; n];
    let mut w = vec![ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<C64> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if xnorm == 0.0 || tail == 0.0 {
            reflectors.push(None);
            continue;
        }
        let x0 = v[0];
        let ph = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -ph * xnorm;
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= vn);

        // p = 2 A22 v
        for i in 0..m {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            let s: C64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            p[i] = s * 2.0;
        }
        // K = v† p (real), w = p − K v
        let kk: f64 = v.iter().zip(&p[..m]).map(|(x, y)| (x.conj() * y).re).sum();
        for i in 0..m {
            w[i] = p[i] - v[i] * kk;
        }
        // A22 ← A22 − v w† − w v†
        for i in 0..m {
            let vi = v[i];
            let wi = w[i];
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + n];
            for ((x, vj), wj) in row.iter_mut().zip(&v).zip(&w[..m]) {
                *x -= vi * wj.conj() + wi * vj.conj();
            }
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for i in 1..m {
            a[(k + 1 + i) * n + k] = ZERO;
            a[k * n + k + 1 + i] = ZERO;
        }
        reflectors.push(Some(v));
    }

    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    Tridiagonal { diag, sub, reflectors }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix (diagonal `d`,
/// subdiagonal `e`). When `z` is given its rows are rotated alongside, so
/// starting from the identity row `j` of `z` ends as eigenvector `j`.
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &[f64], mut z: Option<&mut [Vec<f64>]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    // Absolute deflation floor: relative tests alone stall on clusters at 0.
    let tnorm = d.iter().map(|x| x.abs()).fold(0.0, f64::max) + e.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * tnorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::NoConvergence("tridiagonal QL iteration".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full Hermitian eigen-decomposition through tridiagonal form.
/// Eigenvalues ascending, eigenvectors in the columns.
pub fn tridiagonal_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim();
    let tri = householder_tridiagonalize(h);

    // Diagonal phases making the subdiagonal real and nonnegative.
    let mut ph = vec![C64::new(1.0, 0.0); n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        let s = tri.sub[k];
        let mag = s.norm();
        e[k] = mag;
        ph[k + 1] = if mag == 0.0 { ph[k] } else { ph[k] * (s / mag) };
    }
    let mut d = tri.diag.clone();
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect();
    tridiagonal_ql(&mut d, &e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals: Vec<f64> = order.iter().map(|&j| d[j]).collect();

    // M = D Z (column j = eigenvector of the real tridiagonal problem)
    let mut m = ComplexMatrix::zeros(n, n);
    for (jj, &j) in order.iter().enumerate() {
        for i in 0..n {
            m[(i, jj)] = ph[i] * z[j][i];
        }
    }
    // V = Q M, applying reflectors from the last to the first.
    let mut y = vec![ZERO; n];
    for (k, refl) in tri.reflectors.iter().enumerate().rev() {
        let Some(v) = refl else { continue };
        let off = k + 1;
        y.iter_mut().for_each(|t| *t = ZERO);
        for (i, vi) in v.iter().enumerate() {
            let vc = vi.conj();
            for (t, x) in y.iter_mut().zip(m.row(off + i)) {
                *t += vc * x;
            }
        }
        for (i, vi) in v.iter().enumerate() {
            let s = *vi * 2.0;
            for (x, t) in m.row_mut(off + i).iter_mut().zip(&y) {
                *x -= s * t;
            }
        }
    }
    Ok((vals, m))
}

/// Eigenvalues only of a real symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], sub: &[f64]) -> Result<Vec<f64>> {
    let mut d = diag.to_vec();
    tridiagonal_ql(&mut d, sub, None)?;
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Eigenvalues and eigenvectors (as rows) of a real symmetric tridiagonal
/// matrix, ascending.
pub fn tridiagonal_eigensystem(diag: &[f64], sub: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            r
        })
        .collect();
    tridiagonal_ql(&mut d, sub, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((order.iter().map(|&j| d[j]).collect(), order.iter().map(|&j| z[j].clone()).collect()))
}
