//! Adaptive Simpson quadrature for small fixed-size vector integrands.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 40;

fn max_abs<const K: usize>(a: &[f64; K], b: &[f64; K]) -> f64 {
    // NaN-aware: an overflowing integrand must never look converged.
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) })
}

fn simpson<const K: usize>(fa: &[f64; K], fm: &[f64; K], fb: &[f64; K], h: f64) -> [f64; K] {
    std::array::from_fn(|i| h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]))
}

/// `∫_a^b f` to absolute tolerance `tol` in the max norm, with the Richardson
/// error estimate returned alongside the value.
pub fn adaptive_simpson<const K: usize>(f: &impl Fn(f64) -> [f64; K], a: f64, b: f64, tol: f64) -> Result<([f64; K], f64)> {
    if a == b {
        return Ok(([0.0; K], 0.0));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(&fa, &fm, &fb, b - a);
    let mut err = 0.0;
    let v = recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut err)?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::QuadratureFailure(format!("non-finite integral on [{a}, {b}]")));
    }
    Ok((v, err))
}

#[allow(clippy::too_many_arguments)]
fn recurse<const K: usize>(
    f: &impl Fn(f64) -> [f64; K],
    a: f64,
    b: f64,
    fa: [f64; K],
    fm: [f64; K],
    fb: [f64; K],
    whole: [f64; K],
    tol: f64,
    depth: u32,
    err: &mut f64,
) -> Result<[f64; K]> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(&fa, &flm, &fm, m - a);
    let right = simpson(&fm, &frm, &fb, b - m);
    let both: [f64; K] = std::array::from_fn(|i| left[i] + right[i]);
    let delta = max_abs(&both, &whole);
    if delta <= 15.0 * tol {
        *err += delta / 15.0;
        return Ok(std::array::from_fn(|i| both[i] + (both[i] - whole[i]) / 15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!("tolerance {tol:.1e} not met on [{a}, {b}]")));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err)?;
    Ok(std::array::from_fn(|i| l[i] + r[i]))
}

/// Node weights for `∫_{t_i}^{t_{i+1}} f ≈ h Σ c·f_node` on a uniform grid,
/// using the three-point rule `h/12·(5f_i + 8f_{i+1} − f_{i+2})` (mirrored on
/// the last interval). Summing intervals gives a cumulative integral.
pub fn cumulative_simpson_weights(n_intervals: usize) -> Vec<[(usize, f64); 3]> {
    (0..n_intervals)
        .map(|i| {
            if i + 2 <= n_intervals {
                [(i, 5.0 / 12.0), (i + 1, 8.0 / 12.0), (i + 2, -1.0 / 12.0)]
            } else {
                [(i - 1, -1.0 / 12.0), (i, 8.0 / 12.0), (i + 1, 5.0 / 12.0)]
            }
        })
        .collect()
}

/// Composite Simpson weights on `n_intervals + 1` uniform nodes (even count).
pub fn simpson_weights(n_intervals: usize, h: f64) -> Vec<f64> {
    assert!(n_intervals.is_multiple_of(2) && n_intervals > 0, "composite Simpson needs an even interval count");
    (0..=n_intervals)
        .map(|k| {
            let w = if k == 0 || k == n_intervals {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let (v, e) = adaptive_simpson(&|t: f64| [t.sin(), t.exp()], 0.0, 2.0, 1e-12).unwrap();
        assert!((v[0] - (1.0 - 2f64.cos())).abs() < 1e-11);
        assert!((v[1] - (2f64.exp() - 1.0)).abs() < 1e-11);
        assert!(e < 1e-11);
    }

    #[test]
    fn reports_failure_on_singularity() {
        let r = adaptive_simpson(&|t: f64| [1.0 / t.abs().max(1e-300).sqrt().powi(3)], -1.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }

    #[test]
    fn cumulative_rule_is_exact_for_quadratics() {
        let n = 6;
        let h = 0.25;
        let f: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(2)).collect();
        let mut acc = 0.0;
        for (i, w) in cumulative_simpson_weights(n).iter().enumerate() {
            acc += h * w.iter().map(|&(j, c)| c * f[j]).sum::<f64>();
            let t = (i + 1) as f64 * h;
            assert!((acc - t.powi(3) / 3.0).abs() < 1e-14);
        }
    }
}
