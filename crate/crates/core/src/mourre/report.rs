use serde::{Deserialize, Serialize};

use super::arc::Arc;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, op_norm, unitary_eig, ComplexMatrix, SpectralDecomposition, C64, DEFAULT_CLUSTER_TOL};

/// `E_Θ` together with a flag for eigenphases closer than `cluster_tol` to an
/// endpoint, where membership is decided by rounding.
#[derive(Clone, Debug)]
pub struct ArcProjector {
    pub matrix: ComplexMatrix,
    pub endpoint_warning: bool,
}

/// Indices of the eigenvectors with phase inside the arc.
pub fn arc_indices(dec: &SpectralDecomposition, arc: &Arc) -> Vec<usize> {
    (0..dec.dim()).filter(|&j| arc.contains(dec.phases[j])).collect()
}

fn endpoint_warning(dec: &SpectralDecomposition, arc: &Arc) -> bool {
    dec.phases.iter().any(|&t| arc.endpoint_distance(t) <= dec.cluster_tol)
}

/// `E_Θ = Σ_{θ_j ∈ Θ} v_j v_j†`
pub fn spectral_projector(dec: &SpectralDecomposition, arc: &Arc) -> ArcProjector {
    let idx = arc_indices(dec, arc);
    ArcProjector { matrix: dec.projector(&idx), endpoint_warning: endpoint_warning(dec, arc) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MourreReport {
    pub arc: Arc,
    /// Eigenvalues of the compressed commutator on the range, ascending.
    pub compressed_spectrum: Vec<f64>,
    /// Smallest eigenvalue: the best `c` in `E(U†AU−A)E ≥ cE`.
    pub strict_c: f64,
    /// `(k, c_k)` with `c_k` the `(k+1)`-th smallest eigenvalue: the best `c`
    /// once a rank-`k` remainder is allowed.
    pub compact_rank_k_c: Vec<(usize, f64)>,
    /// Singular values, descending, of the spectral part of the compressed
    /// commutator below `reference`, measured from `reference`.
    pub remainder_svals: Vec<f64>,
    pub reference: f64,
    pub dim_range: usize,
    pub endpoint_warning: bool,
}

/// Optional interior frame and the reference constant for the remainder.
#[derive(Clone, Debug)]
pub struct MourreOptions {
    /// Orthonormal frame of the interior window. When present the arc's
    /// range is cut down to directions with interior weight at least ½.
    pub interior: Option<ComplexMatrix>,
    pub reference: f64,
    pub cluster_tol: f64,
}

impl Default for MourreOptions {
    fn default() -> Self {
        Self { interior: None, reference: 1.0, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

impl MourreOptions {
    pub fn interior(frame: ComplexMatrix) -> Self {
        Self { interior: Some(frame), ..Self::default() }
    }
}

/// Orthonormal basis `Z` of the range used by the report. Without a frame
/// it is the eigenvectors in the arc. With a frame `W` it is the part of
/// `ran E_Θ` seen by `W`: the vectors `V_Θ y` for eigenvectors `y` of
/// `V_Θ† W W† V_Θ` with eigenvalue at least ½ (for the full circle, `span W`).
pub fn arc_range_basis(dec: Option<&SpectralDecomposition>, arc: &Arc, interior: Option<&ComplexMatrix>, n: usize) -> Result<ComplexMatrix> {
    if arc.full {
        return Ok(interior.cloned().unwrap_or_else(|| ComplexMatrix::identity(n)));
    }
    let dec = dec.ok_or_else(|| Error::InvalidArgument("a proper arc needs the spectral decomposition".into()))?;
    let v = dec.vectors().select_cols(&arc_indices(dec, arc));
    let Some(w) = interior else { return Ok(v) };
    if v.cols() == 0 {
        return Ok(v);
    }
    let g = w.adj_mul(&v);
    let (vals, y) = herm_eig(&g.adj_mul(&g).hermitian_part(), 1e-14)?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] >= 0.5).collect();
    Ok(v.matmul(&y.select_cols(&keep)))
}

/// Report from `Z` and `UZ`: `M = (UZ)†A(UZ) − Z†AZ`.
pub fn mourre_from_frames(uz: &ComplexMatrix, z: &ComplexMatrix, a: &ComplexMatrix, arc: Arc, reference: f64, endpoint_warning: bool) -> Result<MourreReport> {
    let dim_range = z.cols();
    if dim_range == 0 {
        return Err(Error::EmptyArc);
    }
    let m = uz.adj_mul(&a.matmul(uz)).sub(&z.adj_mul(&a.matmul(z))).hermitian_part();
    let (spec, _) = herm_eig(&m, 1e-14)?;
    let compact_rank_k_c = spec.iter().enumerate().map(|(k, &c)| (k, c)).collect();
    // The below-reference part is diagonal in the eigenbasis of M.
    let mut remainder_svals: Vec<f64> = spec.iter().filter(|&&c| c < reference).map(|&c| reference - c).collect();
    remainder_svals.sort_by(|a, b| b.total_cmp(a));
    Ok(MourreReport { arc, strict_c: spec[0], compressed_spectrum: spec, compact_rank_k_c, remainder_svals, reference, dim_range, endpoint_warning })
}

/// Spectrum of `E_Θ(U†AU−A)E_Θ` on `ran E_Θ`, optionally seen through an
/// interior frame. The full circle skips the eigen-decomposition.
pub fn mourre_report(u: &ComplexMatrix, a: &ComplexMatrix, arc: &Arc, opts: &MourreOptions) -> Result<MourreReport> {
    check_dims(u, a)?;
    let dec = if arc.full { None } else { Some(unitary_eig(u, opts.cluster_tol)?) };
    mourre_report_with(dec.as_ref(), u, a, arc, opts)
}

pub fn mourre_report_with(dec: Option<&SpectralDecomposition>, u: &ComplexMatrix, a: &ComplexMatrix, arc: &Arc, opts: &MourreOptions) -> Result<MourreReport> {
    check_dims(u, a)?;
    let z = arc_range_basis(dec, arc, opts.interior.as_ref(), u.rows())?;
    let warn = dec.map(|d| endpoint_warning(d, arc)).unwrap_or(false);
    mourre_from_frames(&u.matmul(&z), &z, a, *arc, opts.reference, warn)
}

fn check_dims(u: &ComplexMatrix, a: &ComplexMatrix) -> Result<()> {
    if !u.is_square() || u.rows() != a.rows() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!("U is {}×{}, A is {}×{}", u.rows(), u.cols(), a.rows(), a.cols())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirialResidual {
    pub cluster: usize,
    pub phase: f64,
    /// `‖P_θ(U†AU−A)P_θ‖`
    pub cluster_norm: f64,
    /// `|⟨φ,(U†AU−A)φ⟩|` for each eigenvector of the cluster.
    pub per_vector: Vec<f64>,
    /// `‖Uφ − e^{iθ}φ‖` for each eigenvector.
    pub eigen_residuals: Vec<f64>,
    /// `2‖A‖·max residual + 1e−12`, the bound on every per-vector value.
    pub bound: f64,
}

impl VirialResidual {
    pub fn within_bound(&self) -> bool {
        self.per_vector.iter().all(|&r| r <= self.bound)
    }
}

/// Eigen residual above which a cluster is not treated as an eigenvalue.
pub const VIRIAL_EIGEN_TOL: f64 = 1e-8;

/// The eigenprojection of a cluster annihilates `U†AU − A`, up to the
/// eigen residual of its vectors.
pub fn virial_residual(u: &ComplexMatrix, a: &ComplexMatrix, dec: &SpectralDecomposition, cluster: usize) -> Result<VirialResidual> {
    check_dims(u, a)?;
    let idx = dec.clusters.get(cluster).ok_or(Error::NotAnEigenvalue(cluster))?;
    let v = dec.vectors().select_cols(idx);
    cluster_virial(&u.matmul(&v), &v, a, op_norm(a)?, dec, cluster)
}

/// [`virial_residual`] for every cluster, sharing `UV` and `‖A‖`.
pub fn virial_residuals(u: &ComplexMatrix, a: &ComplexMatrix, dec: &SpectralDecomposition) -> Result<Vec<VirialResidual>> {
    check_dims(u, a)?;
    let a_norm = op_norm(a)?;
    let uv_all = u.matmul(dec.vectors());
    (0..dec.clusters.len())
        .map(|c| {
            let idx = &dec.clusters[c];
            cluster_virial(&uv_all.select_cols(idx), &dec.vectors().select_cols(idx), a, a_norm, dec, c)
        })
        .collect()
}

fn cluster_virial(
    uv: &ComplexMatrix,
    v: &ComplexMatrix,
    a: &ComplexMatrix,
    a_norm: f64,
    dec: &SpectralDecomposition,
    cluster: usize,
) -> Result<VirialResidual> {
    let idx = &dec.clusters[cluster];
    let mut eigen_residuals = Vec::with_capacity(idx.len());
    for (k, &j) in idx.iter().enumerate() {
        let e = C64::from_polar(1.0, dec.phases[j]);
        let r: f64 = uv.col(k).iter().zip(v.col(k)).map(|(x, y)| (x - y * e).norm_sqr()).sum::<f64>().sqrt();
        eigen_residuals.push(r);
    }
    let max_res = eigen_residuals.iter().copied().fold(0.0, f64::max);
    if max_res > VIRIAL_EIGEN_TOL.max(10.0 * dec.residual_tol) {
        return Err(Error::NotAnEigenvalue(cluster));
    }
    let m = uv.adj_mul(&a.matmul(uv)).sub(&v.adj_mul(&a.matmul(v)));
    let per_vector = (0..idx.len()).map(|k| m[(k, k)].norm()).collect();
    Ok(VirialResidual {
        cluster,
        phase: dec.cluster_phase(cluster),
        cluster_norm: op_norm(&m)?,
        per_vector,
        eigen_residuals,
        bound: 2.0 * a_norm * max_res + 1e-12,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCount {
    pub count: usize,
    /// Sizes of the counted clusters, in phase order.
    pub multiplicities: Vec<usize>,
    /// Phases of the counted clusters.
    pub phases: Vec<f64>,
}

/// Clusters inside the arc whose best-localised direction has interior
/// weight `‖P_int v‖² ≥ ½`; without a frame every cluster counts.
pub fn eigen_count(dec: &SpectralDecomposition, arc: &Arc, localization: Option<&ComplexMatrix>) -> Result<EigenCount> {
    let mut out = EigenCount { count: 0, multiplicities: Vec::new(), phases: Vec::new() };
    for (c, idx) in dec.clusters.iter().enumerate() {
        let phase = dec.cluster_phase(c);
        if !arc.contains(phase) {
            continue;
        }
        let keep = match localization {
            None => true,
            Some(w) => cluster_interior_weight(dec, idx, w)? >= 0.5,
        };
        if keep {
            out.count += 1;
            out.multiplicities.push(idx.len());
            out.phases.push(phase);
        }
    }
    Ok(out)
}

/// Largest `‖W†v‖²` over unit vectors `v` in the span of a cluster.
pub fn cluster_interior_weight(dec: &SpectralDecomposition, idx: &[usize], frame: &ComplexMatrix) -> Result<f64> {
    let g = frame.adj_mul(&dec.vectors().select_cols(idx));
    Ok(op_norm(&g)?.powi(2))
}
