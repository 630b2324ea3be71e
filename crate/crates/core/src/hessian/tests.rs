use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::random;
use crate::spaces::Grade;

fn diag(values: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(values))
}

fn op(m: DMatrix<f64>) -> ScaleOperator {
    ScaleOperator::on_graph_scale(m, 2).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn symmetry_examples() {
    let r = check_symmetry(&op(diag(&[1.0, 2.0, 3.0])), 1e-10);
    assert_eq!(r.defect, 0.0);
    assert!(r.pass);
    let jordan = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let r = check_symmetry(&op(jordan), 1e-10);
    // ‖A − Aᵀ‖_F / ‖A‖_F = √2 / 1
    assert!((r.defect - 2f64.sqrt()).abs() < 1e-15);
    assert!(!r.pass);
    let a = random::conjugated_diagonal(&[1.0, -2.0, 3.0, 0.5], &mut random::rng(5));
    assert!(check_symmetry(&op(a), 1e-14).pass);
}

#[test]
fn kernel_examples() {
    let r = check_kernel_cokernel(&op(diag(&[0.0, 1.0, 2.0])), None);
    assert_eq!((r.ker_dim, r.coker_dim, r.index), (1, 1, 0));
    assert!(r.subspace_angle < 1e-12);
    let r = check_kernel_cokernel(&op(diag(&[1.0, 2.0, 3.0])), None);
    assert_eq!((r.ker_dim, r.coker_dim), (0, 0));
    let a = random::conjugated_diagonal(&[0.0, 0.0, 1.0, 5.0], &mut random::rng(11));
    let r = check_kernel_cokernel(&op(a), None);
    assert_eq!(r.ker_dim, 2);
    assert!(r.subspace_angle < 1e-10);
}

#[test]
fn principal_angle_matches_cosine_oracle() {
    // two planes in R^4 at known angles 0.3 and 0.7
    let (t1, t2) = (0.3f64, 0.7f64);
    let a = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let b = DMatrix::from_row_slice(
        4,
        2,
        &[t1.cos(), 0.0, 0.0, t2.cos(), t1.sin(), 0.0, 0.0, t2.sin()],
    );
    let cosines = (a.transpose() * &b).singular_values();
    let oracle = cosines.iter().copied().fold(1.0, f64::min).acos();
    assert!((largest_principal_angle(&a, &b) - oracle).abs() < 1e-12);
    assert!((oracle - 0.7).abs() < 1e-12);
}

#[test]
fn regularity_examples() {
    let gammas = [0.0, 1.5, -2.0, 3.0];
    let a = ScaleOperator::diagonal(&gammas, 3).unwrap();
    for g in 0..3 {
        let c = regularity_constant(&a, g).unwrap();
        assert!(c <= 2f64.sqrt());
        assert!((c - 1.0).abs() < 1e-12);
    }
    let flat = TruncatedScaleSpace::weighted(&Weight::constant_one(3), 2);
    let zero = ScaleOperator::new(DMatrix::zeros(3, 3), flat.clone()).unwrap();
    assert!((regularity_constant(&zero, 0).unwrap() - 1.0).abs() < 1e-14);
    let id = ScaleOperator::new(DMatrix::identity(3, 3), flat).unwrap();
    let c = regularity_constant(&id, 1).unwrap();
    assert!(c <= 1.0);
    assert!((c - 0.5f64.sqrt()).abs() < 1e-14);
    assert!(regularity_constant(&id, 2).is_err());
}

#[test]
fn graph_inner_product_examples() {
    let xi = DVector::from_vec(vec![1.0, 2.0, -1.0]);
    let eta = DVector::from_vec(vec![0.5, -1.0, 3.0]);
    let zero = op(DMatrix::zeros(3, 3));
    assert_eq!(graph_inner_product(&zero, &xi, &eta).unwrap(), xi.dot(&eta));
    let id = op(DMatrix::identity(3, 3));
    let e = DVector::from_vec(vec![0.0, 1.0, 0.0]);
    assert_eq!(graph_inner_product(&id, &e, &e).unwrap(), 2.0);
    let gammas = [0.5, -2.0, 3.0];
    let d = op(diag(&gammas));
    for (i, g) in gammas.iter().enumerate() {
        let mut e = DVector::zeros(3);
        e[i] = 1.0;
        assert_eq!(graph_inner_product(&d, &e, &e).unwrap(), 1.0 + g * g);
    }
    assert!(graph_inner_product(&d, &DVector::zeros(2), &e).is_err());
}

#[test]
fn graph_equivalence_examples() {
    let a = random::conjugated_diagonal(&[0.3, -1.0, 2.0], &mut random::rng(2));
    let on_graph = op(a.clone());
    let gc = graph_equivalence_constants(&on_graph).unwrap();
    assert!((gc.c_lo - 1.0).abs() < 1e-12 && (gc.c_hi - 1.0).abs() < 1e-12);
    assert!(gc.c_step1 > 0.0);

    let g = graph_gram(&a);
    let scaled = TruncatedScaleSpace::new(vec![
        Grade::Gram(DMatrix::identity(3, 3)),
        Grade::Gram(&g * 3.0),
    ])
    .unwrap();
    let gc = graph_equivalence_constants(&ScaleOperator::new(a, scaled).unwrap()).unwrap();
    assert!((gc.c_lo - 3.0).abs() < 1e-12 && (gc.c_hi - 3.0).abs() < 1e-12);

    // diagonal ratio oracle: grade-1 weight (1+ν²) against graph weight 1+(ν-1)²
    let n = 6;
    let gammas: Vec<f64> = (0..n).map(|v| v as f64).collect();
    let grade1: Vec<f64> = (1..=n).map(|v| 1.0 + (v * v) as f64).collect();
    let scale = TruncatedScaleSpace::new(vec![
        Grade::Diagonal(Weight::constant_one(n)),
        Grade::Diagonal(Weight::from_values(&grade1)),
    ])
    .unwrap();
    let gc = graph_equivalence_constants(&ScaleOperator::new(diag(&gammas), scale).unwrap()).unwrap();
    let ratios: Vec<f64> = (0..n).map(|i| grade1[i] / (1.0 + gammas[i] * gammas[i])).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    assert!((gc.c_lo - lo).abs() < 1e-12 && (gc.c_hi - hi).abs() < 1e-12);
    // c₀ for a diagonal operator: max_ν √w₁(ν) / |γ_ν − i|
    let c0 = (0..n)
        .map(|i| grade1[i].sqrt() / (1.0 + gammas[i] * gammas[i]).sqrt())
        .fold(0.0, f64::max);
    assert!((gc.c_step1 - c0).abs() < 1e-12);
}

#[test]
fn resolvent_examples() {
    let gammas = [0.0, 1.0, -2.5];
    let r = resolvent(&op(diag(&gammas)), DEFAULT_LAMBDA, true).unwrap();
    for (i, g) in gammas.iter().enumerate() {
        let expected = c(1.0, 0.0) / c(*g, -1.0);
        assert!((r.b_matrix[(i, i)] - expected).norm() < 1e-15);
    }
    let r = resolvent(&op(DMatrix::zeros(3, 3)), DEFAULT_LAMBDA, true).unwrap();
    assert!((r.b_matrix.clone() - DMatrix::<C64>::identity(3, 3) * c(0.0, 1.0)).norm() < 1e-15);
    let inst = random::symmetric_instance(50, 0, 9);
    let r = resolvent(&op(inst.matrix), DEFAULT_LAMBDA, true).unwrap();
    assert!(r.residual < 1e-10);
}

#[test]
fn resolvent_on_spectrum_is_an_error() {
    let a = op(diag(&[1.0, 2.0]));
    assert!(matches!(
        resolvent(&a, c(2.0, 0.0), false),
        Err(Error::ResolventOnSpectrum { .. })
    ));
    assert!(resolvent(&a, c(1.5, 0.0), true).is_err());
    assert!(resolvent(&a, c(1.5, 0.0), false).is_ok());
}

#[test]
fn normality_examples() {
    let d = op(diag(&[0.5, -1.0, 3.0]));
    let r = resolvent(&d, DEFAULT_LAMBDA, true).unwrap();
    let nd = normality_defect(&d, &r).unwrap();
    assert!(nd.commutator_defect < 1e-14 && nd.adjoint_defect < 1e-14);

    let inst = random::symmetric_instance(100, 0, 4);
    let a = op(inst.matrix);
    let r = resolvent(&a, DEFAULT_LAMBDA, true).unwrap();
    let nd = normality_defect(&a, &r).unwrap();
    assert!(nd.commutator_defect < 1e-10 && nd.adjoint_defect < 1e-10);

    let skew = DMatrix::from_row_slice(3, 3, &[0.0, 4.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0]);
    let a = ScaleOperator::new(skew, TruncatedScaleSpace::weighted(&Weight::constant_one(3), 1)).unwrap();
    let r = resolvent(&a, DEFAULT_LAMBDA, true).unwrap();
    let nd = normality_defect(&a, &r).unwrap();
    assert!(nd.commutator_defect >= 1e-2, "{}", nd.commutator_defect);
}

#[test]
fn spectral_examples() {
    let s = spectral_decompose(&op(diag(&[3.0, 1.0, 2.0])), 1e-12).unwrap();
    assert_eq!(s.gammas.as_slice(), &[3.0, 1.0, 2.0]);
    assert_eq!(s.order, vec![1, 2, 0]);

    let s = spectral_decompose(&op(DMatrix::zeros(4, 4)), 1e-12).unwrap();
    assert!(s.gammas.iter().all(|g| *g == 0.0));
    assert!(s.orthonormality_residual < 1e-15);

    let d = [4.0, -0.5, 2.0, -3.0, 1.0];
    let a = random::conjugated_diagonal(&d, &mut random::rng(21));
    let s = spectral_decompose(&op(a), 1e-12).unwrap();
    let mut got = s.gammas.as_slice().to_vec();
    let mut want = d.to_vec();
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    for (x, y) in got.iter().zip(&want) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!(s.eig_check.max_gamma_deviation < 1e-8);
    assert!(s.eig_check.max_mu_deviation < 1e-8);
}

#[test]
fn spectral_rejects_asymmetric() {
    let jordan = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(
        spectral_decompose(&op(jordan), 1e-10),
        Err(Error::NotSymmetric(_))
    ));
}

#[test]
fn ordering_ties() {
    // |γ| ties: −1 before +1, then position
    let s = spectral_decompose(&op(diag(&[1.0, -1.0, 2.0, 1.0])), 1e-12).unwrap();
    assert_eq!(s.sorted_gammas(), vec![-1.0, 1.0, 1.0, 2.0]);
    assert_eq!(s.order, vec![1, 0, 3, 2]);
}

#[test]
fn fractal_weight_examples() {
    let fw = |g: &[f64]| fractal_weight(&spectral_decompose(&op(diag(g)), 1e-12).unwrap()).values();
    assert_eq!(fw(&[0.0]), vec![1.0]);
    let v = fw(&[3.0, -1.0, 2.0]);
    for (a, b) in v.iter().zip([2.0, 5.0, 10.0]) {
        assert!((a - b).abs() < 1e-13);
    }
    // first-derivative operator on the circle: γ = 2π⌊ν/2⌋
    let n = 9;
    let gammas: Vec<f64> = (1..=n).map(|v| 2.0 * std::f64::consts::PI * (v / 2) as f64).collect();
    let v = fw(&gammas);
    for (i, f) in v.iter().enumerate() {
        let m = i.div_ceil(2) as f64;
        let expected = 1.0 + 4.0 * std::f64::consts::PI.powi(2) * m * m;
        assert!((f - expected).abs() <= 1e-13 * expected);
    }
}

#[test]
fn rescaled_basis_examples() {
    let s = spectral_decompose(&op(diag(&[2.0, 1.0, 3.0])), 1e-12).unwrap();
    let fw = fractal_weight(&s);
    assert_eq!(rescaled_basis(&s, &fw, 0), s.sorted_vectors());
    let z = spectral_decompose(&op(DMatrix::zeros(1, 1)), 1e-12).unwrap();
    assert_eq!(rescaled_basis(&z, &fractal_weight(&z), 5), z.sorted_vectors());
    let gammas = [1.0, 2.0, 3.0];
    let s = spectral_decompose(&op(diag(&gammas)), 1e-12).unwrap();
    let b = rescaled_basis(&s, &fractal_weight(&s), 2);
    for (j, g) in gammas.iter().enumerate() {
        assert!((b[(j, j)] - 1.0 / (1.0 + g * g)).abs() < 1e-15);
    }
}

#[test]
fn fractal_structure_examples() {
    let zero = op(DMatrix::zeros(4, 4));
    let fs = build_fractal_structure(&zero, 3, 1e-10).unwrap();
    for k in 0..=3 {
        assert_eq!(fs.space.gram_matrix(k).unwrap(), DMatrix::identity(4, 4));
    }
    assert!(fs.weight.values().iter().all(|f| *f == 1.0));
    assert!(fs.deviations.iter().all(|d| *d == 0.0));

    // closed-form induction on a diagonal operator: G_k = diag((1+γ²)^k)
    let gammas = [0.5, -1.5, 2.0, 0.0];
    let fs = build_fractal_structure(&op(diag(&gammas)), 3, 1e-10).unwrap();
    for k in 0..=3 {
        let g = fs.space.gram_matrix(k).unwrap();
        for (i, gm) in gammas.iter().enumerate() {
            let expected = (1.0 + gm * gm).powi(k as i32);
            assert!((g[(i, i)] - expected).abs() <= 1e-13 * expected);
        }
        assert!(crate::spaces::off_diagonal_ratio(&g) == 0.0);
    }

    let inst = random::symmetric_instance(64, 0, 77);
    let fs = build_fractal_structure(&op(inst.matrix), 3, 1e-10).unwrap();
    assert!(fs.deviations.iter().all(|d| *d < 1e-8), "{:?}", fs.deviations);
    assert!(fs.isometry_defects.iter().all(|d| *d < 1e-8));
}

#[test]
fn restriction_and_pair_examples() {
    let gammas = [1.0, 2.0];
    let d = op(diag(&gammas));
    let s = spectral_decompose(&d, 1e-12).unwrap();
    assert!(restriction_invariance(&d, &s) < 1e-15);
    assert_eq!(pair_isometry_certificate(&d, &s), 0.0);
    assert_eq!(graph_gram(d.matrix()), diag(&[2.0, 5.0]));

    let z = op(DMatrix::zeros(3, 3));
    let s = spectral_decompose(&z, 1e-12).unwrap();
    assert_eq!(restriction_invariance(&z, &s), 0.0);

    let inst = random::symmetric_instance(64, 8, 5);
    let a = op(inst.matrix);
    let s = spectral_decompose(&a, 1e-12).unwrap();
    assert!(restriction_invariance(&a, &s) < 1e-10);
    assert!(pair_isometry_certificate(&a, &s) < 1e-10);
}

#[test]
fn analysis_pipeline() {
    let gammas: Vec<f64> = (1..=8).map(|v| v as f64).collect();
    let report = analyze(&op(diag(&gammas)), 2, Tolerances::default());
    assert!(report.pass, "{:#?}", report.checks);
    let f: Vec<f64> = report.fractal_weight.iter().map(|r| r.f_a).collect();
    for (a, b) in f.iter().zip([2.0, 5.0, 10.0, 17.0, 26.0, 37.0, 50.0, 65.0]) {
        assert!((a - b).abs() < 1e-12);
    }

    let jordan = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let report = analyze(&op(jordan), 2, Tolerances::default());
    assert!(!report.pass);
    assert!(report.halted.is_some());
    assert_eq!(report.checks.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_reconstruction(seed in 0u64..10_000, n in 2usize..24) {
        let inst = random::symmetric_instance(n, n / 3, seed);
        let s = spectral_decompose(&op(inst.matrix), 1e-12).unwrap();
        prop_assert!(s.reconstruction_residual <= 1e-10);
        prop_assert!(s.orthonormality_residual <= 1e-10);
        prop_assert!(s.eig_check.max_gamma_deviation <= 1e-8);
        let sorted: Vec<f64> = s.sorted_gammas().iter().map(|g| g.abs()).collect();
        prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn weight_roundtrip(seed in 0u64..10_000, n in 1usize..40) {
        let f = random::random_weight(n, &mut random::rng(seed));
        let values = f.values();
        let a: Vec<f64> = values.iter().map(|v| (v - 1.0).sqrt()).collect();
        let s = spectral_decompose(&op(diag(&a)), 1e-12).unwrap();
        let got = fractal_weight(&s).values();
        for (x, y) in got.iter().zip(&values) {
            prop_assert!((x - y).abs() <= 1e-12 * y);
        }
    }

    #[test]
    fn scaling_covariance(seed in 0u64..10_000, s in 0.1f64..10.0) {
        let inst = random::symmetric_instance(12, 2, seed);
        let base = spectral_decompose(&op(inst.matrix.clone()), 1e-12).unwrap();
        let scaled = spectral_decompose(&op(&inst.matrix * s), 1e-12).unwrap();
        let a: Vec<f64> = base.sorted_gammas().iter().map(|g| g.abs() * s).collect();
        let b: Vec<f64> = scaled.sorted_gammas().iter().map(|g| g.abs()).collect();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x));
        }
    }
}
