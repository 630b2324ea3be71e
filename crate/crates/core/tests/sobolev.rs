use std::f64::consts::PI;

use scale_hilbert::sobolev::{
    build_sobolev_space, fourier_gram_closed_form, sobolev_to_fractal_ratio, sobolev_trace, FourierQuadrature,
};
use scale_hilbert::{Error, TruncatedScaleSpace, Weight};

#[test]
fn closed_form_matches_quadrature_up_to_64() {
    let quad = FourierQuadrature::new(4 * 32 * 4);
    let tables = quad.gram_tables(64, 3).unwrap();
    for k in 0..=3u32 {
        for nu in 1..=64 {
            for nu2 in 1..=64 {
                let cf = fourier_gram_closed_form(nu, nu2, k);
                let q = tables[k as usize][nu - 1][nu2 - 1];
                assert!((cf - q).abs() <= 1e-8 * cf.abs().max(1.0), "k={k} ({nu},{nu2}): {cf} vs {q}");
            }
        }
    }
}

#[test]
fn known_entries() {
    assert_eq!(fourier_gram_closed_form(1, 1, 3), 1.0);
    let two_pi_sq = 4.0 * PI * PI;
    assert!((fourier_gram_closed_form(2, 2, 1) - (1.0 + two_pi_sq)).abs() < 1e-12);
    assert!((fourier_gram_closed_form(3, 3, 1) - (1.0 + two_pi_sq)).abs() < 1e-12);
    assert_eq!(fourier_gram_closed_form(2, 3, 2), 0.0);
}

#[test]
fn too_few_nodes_is_an_error() {
    let quad = FourierQuadrature::new(8);
    assert!(matches!(quad.gram(20, 20, 3), Err(Error::InsufficientNodes { .. })));
}

#[test]
fn ratio_stays_in_interval_and_approaches_limit() {
    for k in 0..=3u32 {
        let lo = 2f64.powi(-(k as i32));
        let hi = (1.0 + 4.0 * PI * PI).powi(k as i32);
        let limit = PI.powi(2 * k as i32);
        for nu in 1..=4096 {
            let r = sobolev_to_fractal_ratio(nu, k);
            assert!(r >= lo * (1.0 - 1e-15) && r <= hi * (1.0 + 1e-15), "k={k} nu={nu}: {r}");
            if nu >= 1000 {
                assert!((r - limit).abs() <= 0.01 * limit);
            }
        }
    }
}

#[test]
fn even_ratios_increase() {
    for k in 1..=3u32 {
        let mut prev = 0.0;
        for nu in (2..=512).step_by(2) {
            let r = sobolev_to_fractal_ratio(nu, k);
            assert!(r > prev, "k={k} nu={nu}");
            prev = r;
        }
    }
}

#[test]
fn trace_off_diagonals_vanish() {
    let t = sobolev_trace(32, 3).unwrap();
    assert_eq!(t.rows.len(), 32 * 4);
    assert!(t.max_off_diagonal < 1e-8);
    assert!(t.rows.iter().all(|r| r.abs_delta <= 1e-8 * r.closed_form.max(1.0)));
    assert!(sobolev_trace(0, 1).is_err());
}

#[test]
fn sobolev_space_is_equivalent_to_sigma_scale() {
    let n = 256;
    let sob = build_sobolev_space(n, 3);
    let sig = TruncatedScaleSpace::weighted(&Weight::sigma(n), 3);
    for k in 0..=3 {
        let (lo, hi) = sob.grade_equivalence(&sig, k).unwrap();
        assert!(lo >= 2f64.powi(-(k as i32)) * (1.0 - 1e-15));
        assert!(hi <= PI.powi(2 * k as i32));
    }
}
