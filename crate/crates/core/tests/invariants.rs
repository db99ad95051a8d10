//! Structural identities checked on random inputs.

use std::f64::consts::PI;

use proptest::prelude::*;

use floquet_core::commutator::{ad_k, c11_seminorm, mollify, InnerGrid, DEFAULT_T_MIN};
use floquet_core::diagnostics::{boundary_trace, poisson_density};
use floquet_core::lattice::{multiplication_op, sample, FunctionDesc, GridBasis, InteriorWeight};
use floquet_core::linalg::random::{random_hermitian, random_matrix, random_unit_vector, random_unitary};
use floquet_core::linalg::{dot, expm_skew, inverse, op_norm, unitary_eig, ComplexMatrix, C64, DEFAULT_CLUSTER_TOL};
use floquet_core::mourre::{spectral_projector, virial_residuals, Arc};
use floquet_core::propagator::{free_propagator, perturbed_floquet, FieldSpec, FloquetScenario, FreeSystem};

fn re_part(m: &ComplexMatrix) -> ComplexMatrix {
    m.add(&m.adjoint()).scale_real(0.5)
}

/// A random matrix rescaled to operator norm `rho`.
fn contraction(n: usize, rho: f64, seed: u64) -> ComplexMatrix {
    let a = random_matrix(n, n, seed);
    a.scale_real(rho / op_norm(&a).unwrap())
}

fn unit_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let h = random_hermitian(n, seed);
    h.scale_real(1.0 / op_norm(&h).unwrap())
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn eigenvectors_resolve_the_identity(n in 2usize..24, seed in any::<u64>()) {
        let u = random_unitary(n, seed);
        let dec = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let v = dec.vectors();
        prop_assert!(v.mul_adj(v).sub(&ComplexMatrix::identity(n)).max_abs() <= 1e-9);
        let d: Vec<C64> = dec.phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        prop_assert!(v.scale_cols(&d).mul_adj(v).sub(&u).max_abs() <= 1e-9);
        let total: usize = dec.clusters.iter().map(Vec::len).sum();
        prop_assert_eq!(total, n);
    }

    #[test]
    fn skew_exponential_is_a_group(n in 2usize..16, seed in any::<u64>(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let h = random_hermitian(n, seed);
        let es = expm_skew(&h, s).unwrap();
        let et = expm_skew(&h, t).unwrap();
        let est = expm_skew(&h, s + t).unwrap();
        prop_assert!(es.matmul(&et).sub(&est).max_abs() <= 1e-10);
        prop_assert!(es.unitary_defect() <= 1e-10);
        prop_assert!(expm_skew(&h, -s).unwrap().sub(&es.adjoint()).max_abs() <= 1e-10);
    }

    #[test]
    fn operator_norm_is_submultiplicative(r in 1usize..12, m in 1usize..12, k in 1usize..12, seed in any::<u64>()) {
        let a = random_matrix(r, m, seed);
        let b = random_matrix(m, k, seed.wrapping_add(1));
        let (na, nb, nab) = (op_norm(&a).unwrap(), op_norm(&b).unwrap(), op_norm(&a.matmul(&b)).unwrap());
        prop_assert!(nab <= na * nb * (1.0 + 1e-10));
        prop_assert!(na <= a.frobenius_norm() * (1.0 + 1e-10));
        prop_assert!(na >= a.max_abs() * (1.0 - 1e-10));
    }

    /// Three routes to the real part of the Cayley transform of a contraction.
    #[test]
    fn cayley_real_part_three_ways(n in 2usize..12, rho in 0.05f64..0.9, seed in any::<u64>()) {
        let a = contraction(n, rho, seed);
        let one = ComplexMatrix::identity(n);
        let r = inverse(&one.sub(&a)).unwrap();
        let lhs = re_part(&one.add(&a).matmul(&r));
        let mid = re_part(&r).scale_real(2.0).sub(&one);
        let a_inv_adj = inverse(&a).unwrap().adjoint();
        let third = r.sub(&inverse(&one.sub(&a_inv_adj)).unwrap());
        let scale = 1.0 / (1.0 - rho);
        prop_assert!(lhs.sub(&mid).max_abs() <= 1e-10 * scale);
        prop_assert!(third.sub(&mid).max_abs() <= 1e-8 * scale * op_norm(&inverse(&a).unwrap()).unwrap());
        // The real part is positive for a strict contraction.
        let (vals, _) = floquet_core::linalg::herm_eig(&mid, 1e-14).unwrap();
        prop_assert!(vals[0] >= (1.0 - rho) / (1.0 + rho) - 1e-10);
    }

    #[test]
    fn multiplication_operators_compose_pointwise(a in -2.0f64..2.0, s in 0.3f64..3.0, b in -2.0f64..2.0, k in 0.1f64..2.0) {
        let basis = GridBasis::new(32, 6.0, 1.0).unwrap();
        let f = FunctionDesc::Gaussian { a, s };
        let g = FunctionDesc::Sin { a: b, b: k };
        let (mf, mg) = (multiplication_op(&basis, &f).unwrap(), multiplication_op(&basis, &g).unwrap());
        let (sf, sg) = (sample(&basis, &f).unwrap(), sample(&basis, &g).unwrap());
        let prod: Vec<f64> = sf.iter().zip(&sg).map(|(x, y)| x * y).collect();
        let mp = ComplexMatrix::from_real_diag(&prod);
        prop_assert!(mf.matmul(&mg).sub(&mp).max_abs() <= 1e-15);
        prop_assert!(mf.commutator(&mg).max_abs() == 0.0);
        let sum: Vec<f64> = sf.iter().zip(&sg).map(|(x, y)| x + y).collect();
        prop_assert!(mf.add(&mg).sub(&ComplexMatrix::from_real_diag(&sum)).max_abs() <= 1e-15);
    }

    /// `ad_A^k(B†) = (−1)^k (ad_A^k B)†` for Hermitian `A`, and conjugation
    /// by a unitary commutes with taking nested commutators.
    #[test]
    fn nested_commutators_transport(n in 2usize..12, k in 0usize..5, seed in any::<u64>()) {
        let a = unit_hermitian(n, seed);
        let b = random_matrix(n, n, seed.wrapping_add(7));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = ad_k(&a, &b.adjoint(), k).unwrap();
        let rhs = ad_k(&a, &b, k).unwrap().adjoint().scale_real(sign);
        let tol = 1e-12 * 2f64.powi(k as i32) * b.frobenius_norm();
        prop_assert!(lhs.sub(&rhs).max_abs() <= tol);
        let u = random_unitary(n, seed.wrapping_add(13));
        let conj = ad_k(&a, &u.adj_mul(&b.matmul(&u)), k).unwrap();
        let moved = u.adj_mul(&ad_k(&u.matmul(&a.mul_adj(&u)), &b, k).unwrap().matmul(&u));
        prop_assert!(conj.sub(&moved).max_abs() <= 10.0 * tol);
    }

    #[test]
    fn arc_projectors_are_monotone_and_commute(n in 4usize..20, seed in any::<u64>(), center in -PI..PI, len in 0.2f64..3.0, grow in 0.0f64..3.0) {
        let u = random_unitary(n, seed);
        let dec = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let small = Arc::centered(center, len).unwrap();
        let large = Arc::centered(center, len + grow).unwrap();
        prop_assert!(small.is_subarc_of(&large));
        let (es, el) = (spectral_projector(&dec, &small).matrix, spectral_projector(&dec, &large).matrix);
        prop_assert!(es.matmul(&es).sub(&es).max_abs() <= 1e-9);
        prop_assert!(es.matmul(&u).sub(&u.matmul(&es)).max_abs() <= 1e-9);
        prop_assert!(el.matmul(&u).sub(&u.matmul(&el)).max_abs() <= 1e-9);
        // E_small ≤ E_large: the difference is a projector itself.
        let d = el.sub(&es);
        prop_assert!(d.matmul(&d).sub(&d).max_abs() <= 1e-9);
        let phi = random_unit_vector(n, seed.wrapping_add(3));
        let (ws, wl) = (dot(&phi, &es.mul_vec(&phi)).re, dot(&phi, &el.mul_vec(&phi)).re);
        prop_assert!(ws <= wl + 1e-10);
    }

    /// `R(z) − R(w) = (z − w) R(z) U† R(w)` for `R(z) = (1 − zU†)^{−1}`.
    #[test]
    fn first_resolvent_identity(n in 2usize..16, seed in any::<u64>(), r1 in 0.0f64..0.95, t1 in -PI..PI, r2 in 0.0f64..0.95, t2 in -PI..PI) {
        let u = random_unitary(n, seed);
        let one = ComplexMatrix::identity(n);
        let res = |z: C64| inverse(&one.sub(&u.adjoint().scale(z))).unwrap();
        let (z, w) = (C64::from_polar(r1, t1), C64::from_polar(r2, t2));
        let (rz, rw) = (res(z), res(w));
        let lhs = rz.sub(&rw);
        let rhs = rz.matmul(&u.adjoint()).matmul(&rw).scale(z - w);
        let scale = 1.0 / ((1.0 - r1) * (1.0 - r2));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-11 * scale);
    }

    /// `F⁺ − F⁻` at the same angle is the Poisson kernel integrated against
    /// the spectral measure, which is what the density reports.
    #[test]
    fn inner_minus_outer_trace_is_the_poisson_density(n in 2usize..20, seed in any::<u64>(), theta in -PI..PI, r in 0.3f64..0.98) {
        let u = random_unitary(n, seed);
        let phi = random_unit_vector(n, seed.wrapping_add(5));
        let tr = boundary_trace(&u, &phi, &phi, &[theta], &[r]).unwrap();
        let jump = tr.values_inside[0][0] - tr.values_outside[0][0];
        let d = poisson_density(&u, &phi, &[theta], r).unwrap()[0];
        prop_assert!((jump.re / (2.0 * PI) - d).abs() <= 1e-10 / (1.0 - r));
        prop_assert!(jump.im.abs() <= 1e-10 / (1.0 - r));
        // Spectral oracle: Σ |⟨v_j, φ⟩|² P_r(θ − θ_j).
        let dec = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let v = dec.vectors();
        let oracle: f64 = (0..n)
            .map(|j| {
                let w = dot(&v.col(j), &phi).norm_sqr();
                let p = (1.0 - r * r) / (1.0 - 2.0 * r * (theta - dec.phases[j]).cos() + r * r);
                w * p / (2.0 * PI)
            })
            .sum();
        prop_assert!((d - oracle).abs() <= 1e-9 / (1.0 - r));
    }

    #[test]
    fn poisson_density_is_nonnegative(n in 2usize..24, seed in any::<u64>(), r in 0.1f64..0.99) {
        let u = random_unitary(n, seed);
        let phi = random_unit_vector(n, seed ^ 0x55);
        let thetas: Vec<f64> = (0..32).map(|k| -PI + 2.0 * PI * k as f64 / 32.0).collect();
        let d = poisson_density(&u, &phi, &thetas, r).unwrap();
        prop_assert!(d.iter().all(|&x| x >= -1e-10));
    }

    #[test]
    fn virial_holds_on_every_eigenvector(n in 2usize..20, seed in any::<u64>()) {
        let u = random_unitary(n, seed);
        let a = random_hermitian(n, seed.wrapping_add(2));
        let dec = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        for r in virial_residuals(&u, &a, &dec).unwrap() {
            prop_assert!(r.within_bound(), "cluster {} per-vector {:?} bound {:e}", r.cluster, r.per_vector, r.bound);
        }
    }
}

proptest! {
    #![proptest_config(cfg(8))]

    #[test]
    fn propagators_are_unitary(amp in -2.0f64..2.0, t in 0.0f64..12.0, v in -0.5f64..0.5) {
        let basis = GridBasis::new(64, 8.0, 1.0).unwrap();
        let field = FieldSpec::new(FunctionDesc::Sin { a: amp, b: 1.0 }, 2.0 * PI).unwrap();
        let s = FloquetScenario::new(basis, field, Some(FunctionDesc::Gaussian { a: v, s: 1.0 }), 64, 6).unwrap();
        prop_assert!(free_propagator(&s, t).unwrap().unitary_defect() <= 1e-9);
        let (u, _) = perturbed_floquet(&s).unwrap();
        prop_assert!(u.unitary_defect() <= 1e-9);
    }

    #[test]
    fn mollifying_never_raises_the_seminorm(a in 0.2f64..2.0, s in 0.5f64..2.0, eps in 0.02f64..0.5) {
        let basis = GridBasis::new(512, 10.0, 1.0).unwrap();
        let v = FunctionDesc::Gaussian { a, s };
        let grid = InnerGrid::default();
        let before = c11_seminorm(&v, DEFAULT_T_MIN, &grid).unwrap().value;
        let after = c11_seminorm(&mollify(&basis, &v, eps).unwrap(), DEFAULT_T_MIN, &grid).unwrap().value;
        prop_assert!(after <= before * (1.0 + 1e-3), "{after} > {before}");
    }
}

fn descriptor() -> impl Strategy<Value = FunctionDesc> {
    let x = -1e3f64..1e3;
    prop_oneof![
        Just(FunctionDesc::Zero),
        x.clone().prop_map(FunctionDesc::Constant),
        (x.clone(), x.clone()).prop_map(|(a, b)| FunctionDesc::Sin { a, b }),
        (x.clone(), x.clone()).prop_map(|(a, b)| FunctionDesc::Cos { a, b }),
        (x.clone(), 1e-3f64..1e3).prop_map(|(a, s)| FunctionDesc::Gaussian { a, s }),
        (x.clone(), 1e-3f64..1e3).prop_map(|(a, w)| FunctionDesc::Bump { a, w }),
        (x.clone(), 1e-3f64..10.0, prop::collection::vec(x, 2..8)).prop_map(|(x0, dx, values)| FunctionDesc::Tabulated { x0, dx, values }),
    ]
}

proptest! {
    #[test]
    fn descriptors_survive_text_round_trip(f in descriptor()) {
        let text = f.to_string();
        let back: FunctionDesc = text.parse().unwrap();
        prop_assert_eq!(back, f);
    }
}

/// `[x, p] = i` away from the truncation edges, and the defect shrinks as
/// the grid is refined at fixed box.
#[test]
fn canonical_commutator_on_the_interior() {
    let defect = |n: usize| {
        let basis = GridBasis::new(n, 16.0, 1.0).unwrap();
        let fs = FreeSystem::new(&basis).unwrap();
        let w = InteriorWeight::default_for(&basis).frame().unwrap();
        let xw = fs.apply_position(&w);
        let pw = fs.apply_momentum(&w);
        let comm = xw.adj_mul(&pw).sub(&pw.adj_mul(&xw));
        op_norm(&comm.sub(&ComplexMatrix::identity(w.cols()).scale(C64::new(0.0, 1.0)))).unwrap()
    };
    let (d512, d1024) = (defect(512), defect(1024));
    assert!(d1024 <= 1e-6, "defect {d1024:e} at N = 1024");
    assert!(d1024 <= d512, "{d1024:e} > {d512:e}");
}
