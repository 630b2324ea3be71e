//! Certificate suite over seeded instances.
//!
//! Each criterion aggregates worst-case defects over a family of instances
//! and compares them to a fixed bound. Reports contain no timing data, so a
//! fixed seed reproduces them byte for byte.

use std::f64::consts::PI;

use serde::Serialize;

use crate::hessian::{self, ScaleOperator, DEFAULT_LAMBDA};
use crate::random;
use crate::sobolev::{self, FourierQuadrature};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Pass when `value ≤ threshold`.
    Upper,
    /// Pass when `value ≥ threshold`.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Measurement {
    pub fn upper(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            bound: Bound::Upper,
            pass: value <= threshold,
        }
    }

    pub fn lower(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            bound: Bound::Lower,
            pass: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub measurements: Vec<Measurement>,
    pub pass: bool,
}

impl CriterionResult {
    fn new(id: u32, name: &str, measurements: Vec<Measurement>) -> Self {
        let pass = measurements.iter().all(|m| m.pass);
        Self {
            id,
            name: name.into(),
            measurements,
            pass,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Replaces every numerical tolerance when set.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub tol_override: Option<f64>,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

/// Number of operators in the random symmetric family.
pub const OPERATOR_COUNT: usize = 50;

/// Derives the seed of instance `i` from the suite seed.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// The seeded family: dimensions spread over `16..=128`, every odd instance
/// with a kernel of dimension `n/4`.
pub fn operator_family(seed: u64) -> Vec<random::SymmetricInstance> {
    (0..OPERATOR_COUNT)
        .map(|i| {
            let n = 16 + i * 112 / (OPERATOR_COUNT - 1);
            let zeros = if i % 2 == 1 { n / 4 } else { 0 };
            random::symmetric_instance(n, zeros, instance_seed(seed, i))
        })
        .collect()
}

/// Non-normal operator used as the negative control for resolvent normality.
pub fn non_symmetric_control() -> nalgebra::DMatrix<f64> {
    let n = 4;
    nalgebra::DMatrix::from_fn(n, n, |i, j| if j == i + 1 { 3.0 } else { 0.0 })
}

/// Worst-case defects of the operator family.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FamilyDefects {
    pub max_angle: f64,
    pub max_abs_index: f64,
    pub kernel_dim_mismatches: f64,
    pub max_adjoint: f64,
    pub max_commutator: f64,
    pub max_mu_deviation: f64,
    pub max_gamma_deviation: f64,
    pub max_reconstruction: f64,
    pub max_restriction: f64,
}

pub fn family_defects(seed: u64) -> Result<FamilyDefects> {
    let mut d = FamilyDefects::default();
    for inst in operator_family(seed) {
        let op = ScaleOperator::on_graph_scale(inst.matrix.clone(), 1)?;
        let k = hessian::check_kernel_cokernel(&op, None);
        d.max_angle = d.max_angle.max(k.subspace_angle);
        d.max_abs_index = d.max_abs_index.max(k.index.unsigned_abs() as f64);
        if k.ker_dim != inst.kernel_dim() {
            d.kernel_dim_mismatches += 1.0;
        }
        let r = hessian::resolvent(&op, DEFAULT_LAMBDA, true)?;
        let nd = hessian::normality_defect(&op, &r)?;
        d.max_adjoint = d.max_adjoint.max(nd.adjoint_defect);
        d.max_commutator = d.max_commutator.max(nd.commutator_defect);
        let spec = hessian::spectral_decompose(&op, 1e-10)?;
        d.max_mu_deviation = d.max_mu_deviation.max(spec.eig_check.max_mu_deviation);
        d.max_gamma_deviation = d.max_gamma_deviation.max(spec.eig_check.max_gamma_deviation);
        d.max_reconstruction = d.max_reconstruction.max(spec.reconstruction_residual);
        d.max_restriction = d.max_restriction.max(hessian::restriction_invariance(&op, &spec));
    }
    Ok(d)
}

/// Largest `|closed_form − quadrature| / max(1, |closed_form|)` over
/// `ν, ν' ≤ nu_max`, `k ≤ k_max`.
pub fn sobolev_oracle_defect(nu_max: usize, k_max: u32) -> Result<f64> {
    let quad = FourierQuadrature::new(sobolev::required_nodes(nu_max / 2, k_max));
    let tables = quad.gram_tables(nu_max, k_max)?;
    let mut worst = 0.0f64;
    for (k, table) in tables.iter().enumerate() {
        for nu in 1..=nu_max {
            for nup in 1..=nu_max {
                let closed = sobolev::fourier_gram_closed_form(nu, nup, k as u32);
                let delta = (closed - table[nu - 1][nup - 1]).abs() / closed.abs().max(1.0);
                worst = worst.max(delta);
            }
        }
    }
    Ok(worst)
}

/// For `k ≤ k_max`, `ν ≤ nu_max`: the largest excursion of the ratio outside
/// `[2^{-k}, (1+4π²)^k]` (relative, 0 when inside) and the largest relative
/// distance to `π^{2k}` over `ν ≥ tail_start`.
pub fn sigma_ratio_defects(nu_max: usize, k_max: u32, tail_start: usize) -> (f64, f64) {
    let mut outside = 0.0f64;
    let mut tail = 0.0f64;
    for k in 0..=k_max {
        let lo = 0.5f64.powi(k as i32);
        let hi = (1.0 + 4.0 * PI * PI).powi(k as i32);
        let limit = PI.powi(2 * k as i32);
        for nu in 1..=nu_max {
            let r = sobolev::sobolev_to_fractal_ratio(nu, k);
            // one ulp of slack at the endpoints, which are attained exactly
            let excursion = ((lo - r) / lo).max((r - hi) / hi).max(0.0);
            if excursion > 4.0 * f64::EPSILON {
                outside = outside.max(excursion);
            }
            if nu >= tail_start {
                tail = tail.max((r - limit).abs() / limit);
            }
        }
    }
    (outside, tail)
}

pub fn criterion_sobolev_oracle(cfg: &SuiteConfig) -> Result<CriterionResult> {
    let defect = sobolev_oracle_defect(64, 3)?;
    Ok(CriterionResult::new(
        1,
        "sobolev_oracle_equivalence",
        vec![Measurement::upper("max_relative_delta", defect, cfg.tol(1e-8))],
    ))
}

pub fn criterion_sigma_isomorphism(_cfg: &SuiteConfig) -> CriterionResult {
    let (outside, tail) = sigma_ratio_defects(4096, 3, 1000);
    CriterionResult::new(
        2,
        "sigma_isomorphism_witness",
        vec![
            Measurement::upper("interval_excursion", outside, 0.0),
            Measurement::upper("tail_relative_distance", tail, 0.01),
        ],
    )
}

pub fn criteria_operator_family(cfg: &SuiteConfig) -> Result<Vec<CriterionResult>> {
    let d = family_defects(cfg.seed)?;
    let control = ScaleOperator::on_graph_scale(non_symmetric_control(), 1)?;
    let r = hessian::resolvent(&control, DEFAULT_LAMBDA, true)?;
    let control_commutator = hessian::normality_defect(&control, &r)?.commutator_defect;
    let res = cfg.tol(1e-10);
    let cert = cfg.tol(1e-8);
    Ok(vec![
        CriterionResult::new(
            3,
            "kernel_cokernel_coincidence",
            vec![
                Measurement::upper("max_principal_angle", d.max_angle, cert),
                Measurement::upper("max_abs_index", d.max_abs_index, 0.0),
                Measurement::upper("kernel_dim_mismatches", d.kernel_dim_mismatches, 0.0),
            ],
        ),
        CriterionResult::new(
            4,
            "resolvent_normality",
            vec![
                Measurement::upper("max_adjoint_defect", d.max_adjoint, res),
                Measurement::upper("max_commutator_defect", d.max_commutator, res),
                Measurement::lower("control_commutator_defect", control_commutator, 1e-2),
            ],
        ),
        CriterionResult::new(
            5,
            "eigenvalue_resolvent_consistency",
            vec![
                Measurement::upper("max_mu_deviation", d.max_mu_deviation, cert),
                Measurement::upper("max_gamma_deviation", d.max_gamma_deviation, cert),
                Measurement::upper("max_reconstruction_residual", d.max_reconstruction, res),
            ],
        ),
        CriterionResult::new(
            7,
            "restriction_invariance",
            vec![Measurement::upper("max_defect", d.max_restriction, res)],
        ),
    ])
}

pub fn criterion_fractal_certificate(cfg: &SuiteConfig) -> Result<CriterionResult> {
    let inst = random::symmetric_instance(64, 0, instance_seed(cfg.seed, 1_000));
    let op = ScaleOperator::on_graph_scale(inst.matrix, 3)?;
    let fs = hessian::build_fractal_structure(&op, 3, 1e-10)?;
    let measurements = fs
        .deviations
        .iter()
        .enumerate()
        .map(|(k, d)| Measurement::upper(format!("grade_{k}_deviation"), *d, cfg.tol(1e-8)))
        .collect();
    Ok(CriterionResult::new(6, "fractal_structure_certificate", measurements))
}

pub fn criterion_roundtrip(cfg: &SuiteConfig) -> Result<CriterionResult> {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let f = random::random_weight(64, &mut random::rng(instance_seed(cfg.seed, 2_000 + i)));
        let values = f.values();
        let a: Vec<f64> = values.iter().map(|v| (v - 1.0).max(0.0).sqrt()).collect();
        let op = ScaleOperator::diagonal(&a, 1)?;
        let spec = hessian::spectral_decompose(&op, 1e-12)?;
        let got = hessian::fractal_weight(&spec).values();
        for (x, y) in got.iter().zip(&values) {
            worst = worst.max((x - y).abs() / y);
        }
    }
    Ok(CriterionResult::new(
        8,
        "fractal_weight_roundtrip",
        vec![Measurement::upper("max_relative_error", worst, cfg.tol(1e-12))],
    ))
}

/// Runs criteria 1–8.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut criteria = vec![criterion_sobolev_oracle(cfg)?, criterion_sigma_isomorphism(cfg)];
    let mut family = criteria_operator_family(cfg)?;
    criteria.append(&mut family);
    criteria.push(criterion_fractal_certificate(cfg)?);
    criteria.push(criterion_roundtrip(cfg)?);
    criteria.sort_by_key(|c| c.id);
    let pass = criteria.iter().all(|c| c.pass);
    Ok(SuiteReport {
        seed: cfg.seed,
        tol_override: cfg.tol,
        criteria,
        pass,
    })
}
