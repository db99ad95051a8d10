use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm, op_norm, ComplexMatrix, C64};

fn check_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() != b.rows() || a.rows() != b.cols() {
        return Err(Error::DimensionMismatch(format!("commutator of {}×{} with {}×{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    Ok(())
}

/// `ad_A^k(B)` with `ad_A(B) = AB − BA`.
pub fn ad_k(a: &ComplexMatrix, b: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    check_pair(a, b)?;
    let mut m = b.clone();
    for _ in 0..k {
        m = a.commutator(&m);
    }
    Ok(m)
}

/// `Y† ad_A^k(B) Y`, the commutator seen through an orthonormal frame.
pub fn ad_k_compressed(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, frame: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(ad_k(a, b, k)?.compress(frame))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BchReport {
    /// `‖(e^{−B}Ae^{B} − A) − Σ_{k≤terms} (−1)^{k−1}/k! ad_B^{k−1}(ad_A B)‖`
    pub series_gap: f64,
    /// `‖ad_A B‖ Σ_{k>terms} (2‖B‖)^{k−1}/k!`, a bound on the omitted terms.
    pub tail_estimate: f64,
    /// `e^{‖B‖}‖ad_A B‖ − ‖ad_A e^{iB}‖`
    pub exp_commutator_margin: f64,
    /// `e^{‖B‖}‖ad_A B‖ − ‖e^{−B}Ae^{B} − A‖`
    pub conjugation_margin: f64,
}

impl BchReport {
    /// Both displayed inequalities hold up to `slack`.
    pub fn bounds_hold(&self, slack: f64) -> bool {
        self.exp_commutator_margin >= -slack && self.conjugation_margin >= -slack
    }
}

/// Compares `e^{−B}Ae^{B} − A` (general matrix exponential) with its
/// commutator series, and evaluates both norm bounds.
pub fn bch_check(a: &ComplexMatrix, b: &ComplexMatrix, terms: usize) -> Result<BchReport> {
    check_pair(a, b)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("bch_check needs at least one term".into()));
    }
    let e_pos = expm(b)?;
    let e_neg = expm(&b.scale_real(-1.0))?;
    let lhs = e_neg.matmul(a).matmul(&e_pos).sub(a);
    let ad_ab = a.commutator(b);

    let mut series = ComplexMatrix::zeros(a.rows(), a.rows());
    let mut term = ad_ab.clone();
    let mut fact = 1.0;
    for k in 1..=terms {
        fact *= k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        series.axpy(C64::new(sign / fact, 0.0), &term);
        term = b.commutator(&term);
    }
    let series_gap = op_norm(&lhs.sub(&series))?;

    let nb = op_norm(b)?;
    let nad = op_norm(&ad_ab)?;
    let mut tail = 0.0;
    let mut c = (2.0 * nb).powi(terms as i32) / (1..=terms + 1).map(|k| k as f64).product::<f64>();
    for k in terms + 1..terms + 60 {
        tail += c;
        c *= 2.0 * nb / (k + 1) as f64;
    }
    let bound = nb.exp() * nad;
    let exp_ib = expm(&b.scale(C64::new(0.0, 1.0)))?;
    Ok(BchReport {
        series_gap,
        tail_estimate: nad * tail,
        exp_commutator_margin: bound - op_norm(&a.commutator(&exp_ib))?,
        conjugation_margin: bound - op_norm(&lhs)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerGrowth {
    /// `(m, ‖ad_A^j U^m‖)` for `m = 1..=m_max`.
    pub norms: Vec<(u32, f64)>,
    /// `C = sqrt(Σ_{i≤j} ‖ad_A^i U‖²)`
    pub c: f64,
    /// `m` values with `m ≥ j` where the norm exceeds `C^j m^j` by more than
    /// the slack.
    pub violations: Vec<u32>,
}

const POWER_GROWTH_SLACK: f64 = 1e-9;

/// `‖ad_A^j U^m‖` against `C^j m^j`. With a frame the norms are taken on
/// `Y† ad_A^j(U^m) Y`, which is how unbounded `A` is read on a truncation.
pub fn power_growth(a: &ComplexMatrix, u: &ComplexMatrix, j: usize, m_max: u32, frame: Option<&ComplexMatrix>) -> Result<PowerGrowth> {
    check_pair(a, u)?;
    if j > 3 || m_max > 64 {
        return Err(Error::InvalidArgument(format!("power_growth supports j ≤ 3 and m_max ≤ 64 (got {j}, {m_max})")));
    }
    let measure = |m: &ComplexMatrix| match frame {
        Some(w) => op_norm(&m.compress(w)),
        None => op_norm(m),
    };
    let mut c2 = 0.0;
    for i in 0..=j {
        c2 += measure(&ad_k(a, u, i)?)?.powi(2);
    }
    let c = c2.sqrt();
    let mut norms = Vec::with_capacity(m_max as usize);
    let mut violations = Vec::new();
    let mut um = ComplexMatrix::identity(u.rows());
    for m in 1..=m_max {
        um = um.matmul(u);
        let v = measure(&ad_k(a, &um, j)?)?;
        let bound = c.powi(j as i32) * (m as f64).powi(j as i32);
        if m as usize >= j && v > bound + POWER_GROWTH_SLACK {
            violations.push(m);
        }
        norms.push((m, v));
    }
    Ok(PowerGrowth { norms, c, violations })
}

#[derive(Clone, Debug)]
pub struct FourierCalculus {
    /// `Φ(U) = Σ ĉ_m U^m`
    pub phi_u: ComplexMatrix,
    /// `Σ ĉ_m ad_A^j(U^m)`
    pub adj_commuted: ComplexMatrix,
    /// `‖ad_A^j Φ(U) − Σ ĉ_m ad_A^j(U^m)‖`
    pub gap: f64,
}

pub fn fourier_calculus(u: &ComplexMatrix, coefficients: &[(i64, C64)], a: &ComplexMatrix, j: usize) -> Result<FourierCalculus> {
    check_pair(a, u)?;
    if j > 2 {
        return Err(Error::InvalidArgument(format!("fourier_calculus supports j ≤ 2, got {j}")));
    }
    let n = u.rows();
    let mut phi_u = ComplexMatrix::zeros(n, n);
    let mut adj = ComplexMatrix::zeros(n, n);
    for &(m, c) in coefficients {
        let um = u.unitary_pow(m);
        adj.axpy(c, &ad_k(a, &um, j)?);
        phi_u.axpy(c, &um);
    }
    let gap = op_norm(&ad_k(a, &phi_u, j)?.sub(&adj))?;
    Ok(FourierCalculus { phi_u, adj_commuted: adj, gap })
}

/// Fourier coefficients `ĉ_m`, `|m| ≤ modes`, of a smoothed indicator of the
/// arc `[lo, hi]` (Fejér-damped, so the truncation stays nonnegative).
pub fn smoothed_arc_indicator(lo: f64, hi: f64, modes: i64) -> Vec<(i64, C64)> {
    let len = hi - lo;
    (-modes..=modes)
        .map(|m| {
            let c = if m == 0 {
                C64::new(len / (2.0 * std::f64::consts::PI), 0.0)
            } else {
                let mf = m as f64;
                (C64::from_polar(1.0, -mf * lo) - C64::from_polar(1.0, -mf * hi)) / C64::new(0.0, 2.0 * std::f64::consts::PI * mf)
            };
            let fejer = 1.0 - m.unsigned_abs() as f64 / (modes + 1) as f64;
            (m, c * fejer)
        })
        .collect()
}
