use nalgebra::DMatrix;

use scale_hilbert::hessian::{
    self, analyze, check_kernel_cokernel, fractal_weight, spectral_decompose, ScaleOperator, Tolerances,
};
use scale_hilbert::random;

#[test]
fn kernel_dimension_matches_planted_zeros() {
    for (n, zeros, seed) in [(12, 3, 1), (30, 7, 2), (64, 16, 3)] {
        let inst = random::symmetric_instance(n, zeros, seed);
        let op = ScaleOperator::on_graph_scale(inst.matrix, 1).unwrap();
        let r = check_kernel_cokernel(&op, None);
        assert_eq!(r.ker_dim, zeros);
        assert_eq!(r.coker_dim, zeros);
        assert_eq!(r.index, 0);
        assert!(r.subspace_angle < 1e-12, "{}", r.subspace_angle);
    }
}

#[test]
fn kernel_agrees_with_eigenvector_oracle() {
    let inst = random::symmetric_instance(20, 5, 8);
    let op = ScaleOperator::on_graph_scale(inst.matrix.clone(), 1).unwrap();
    let (kernel, _) = hessian::kernel_cokernel_bases(&op, None);
    let eig = inst.matrix.clone().symmetric_eigen();
    let cols: Vec<usize> = (0..20).filter(|&i| eig.eigenvalues[i].abs() < 1e-10).collect();
    let oracle = DMatrix::from_fn(20, cols.len(), |i, j| eig.eigenvectors[(i, cols[j])]);
    assert!(hessian::largest_principal_angle(&kernel, &oracle) < 1e-12);
}

#[test]
fn diagonal_weight_table() {
    let op = ScaleOperator::diagonal(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], 2).unwrap();
    let spec = spectral_decompose(&op, 1e-12).unwrap();
    let f = fractal_weight(&spec).values();
    let want = [2.0, 5.0, 10.0, 17.0, 26.0, 37.0, 50.0, 65.0];
    for (g, w) in f.iter().zip(want) {
        assert!((g - w).abs() <= 1e-14 * w);
    }
}

#[test]
fn conjugation_keeps_fractal_weight() {
    let diag = [-3.0, 0.0, 0.5, 1.0, 2.5, -0.75];
    let plain = ScaleOperator::diagonal(&diag, 1).unwrap();
    let conj = ScaleOperator::on_graph_scale(random::conjugated_diagonal(&diag, &mut random::rng(4)), 1).unwrap();
    let f1 = fractal_weight(&spectral_decompose(&plain, 1e-10).unwrap()).values();
    let f2 = fractal_weight(&spectral_decompose(&conj, 1e-10).unwrap()).values();
    for (a, b) in f1.iter().zip(&f2) {
        assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn full_pipeline_passes_on_random_operator() {
    let inst = random::symmetric_instance(32, 8, 21);
    let op = ScaleOperator::on_graph_scale(inst.matrix, 3).unwrap();
    let report = analyze(&op, 3, Tolerances::default());
    let failing: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    assert!(report.pass, "{failing:?}");
    assert_eq!(report.fractal_weight.len(), 32);
    assert_eq!(report.regularity_constants.len(), 3);
}

#[test]
fn non_symmetric_operator_halts() {
    let m = DMatrix::from_fn(3, 3, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
    let op = ScaleOperator::on_graph_scale(m, 1).unwrap();
    let report = analyze(&op, 1, Tolerances::default());
    assert!(!report.pass);
    assert!(report.halted.is_some());
    assert_eq!(report.checks.len(), 1);
}
