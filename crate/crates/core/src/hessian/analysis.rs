//! The full certificate pipeline for one operator.

use serde::Serialize;

use super::*;

/// Pass thresholds. Residual checks are held to `residual`, eigenvalue and
/// ladder certificates to `certificate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            certificate: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            residual: tol,
            certificate: tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            defect,
            tolerance,
            pass: defect <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub nu: usize,
    pub gamma: f64,
    pub f_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub k_max: usize,
    pub checks: Vec<Check>,
    pub kernel: Option<KernelReport>,
    pub graph_constants: Option<GraphConstants>,
    /// Regularity constant for grades `0..k_max` of the ambient scale.
    pub regularity_constants: Vec<f64>,
    pub fractal_weight: Vec<WeightRow>,
    /// Set when the pipeline stopped early; the checks so far are kept.
    pub halted: Option<String>,
    pub pass: bool,
}

impl AnalysisReport {
    fn finish(mut self) -> Self {
        self.pass = self.halted.is_none() && self.checks.iter().all(|c| c.pass);
        self
    }
}

/// Runs every operator certificate. A symmetry failure or an unusable
/// resolvent point halts the pipeline with a partial report.
pub fn analyze(op: &ScaleOperator, k_max: usize, tol: Tolerances) -> AnalysisReport {
    let mut report = AnalysisReport {
        n: op.n(),
        k_max,
        checks: Vec::new(),
        kernel: None,
        graph_constants: None,
        regularity_constants: Vec::new(),
        fractal_weight: Vec::new(),
        halted: None,
        pass: false,
    };

    let sym = check_symmetry(op, tol.residual);
    report
        .checks
        .push(Check::new("symmetry", sym.defect, tol.residual));
    if !sym.pass {
        report.halted = Some(format!("operator is not symmetric (defect {:e})", sym.defect));
        return report.finish();
    }

    let kernel = check_kernel_cokernel(op, None);
    report.checks.push(Check::new(
        "kernel_cokernel_angle",
        kernel.subspace_angle,
        tol.certificate,
    ));
    report
        .checks
        .push(Check::new("fredholm_index", kernel.index.unsigned_abs() as f64, 0.0));
    report.kernel = Some(kernel);

    let resolvent_data = match resolvent(op, DEFAULT_LAMBDA, true) {
        Ok(r) => r,
        Err(e) => {
            report.halted = Some(e.to_string());
            return report.finish();
        }
    };
    report.checks.push(Check::new(
        "resolvent_residual",
        resolvent_data.residual,
        tol.residual,
    ));
    match normality_defect(op, &resolvent_data) {
        Ok(nd) => {
            report.checks.push(Check::new(
                "resolvent_normality",
                nd.commutator_defect,
                tol.residual,
            ));
            report.checks.push(Check::new(
                "resolvent_adjoint",
                nd.adjoint_defect,
                tol.residual,
            ));
        }
        Err(e) => {
            report.halted = Some(e.to_string());
            return report.finish();
        }
    }

    let structure = match build_fractal_structure(op, k_max, tol.residual) {
        Ok(s) => s,
        Err(e) => {
            report.halted = Some(e.to_string());
            return report.finish();
        }
    };
    let spec = &structure.spectral;
    report.checks.push(Check::new(
        "spectral_reconstruction",
        spec.reconstruction_residual,
        tol.residual,
    ));
    report.checks.push(Check::new(
        "eigenvector_orthonormality",
        spec.orthonormality_residual,
        tol.residual,
    ));
    report.checks.push(Check::new(
        "eigenvalue_resolvent_consistency",
        spec.eig_check.max_gamma_deviation,
        tol.certificate,
    ));
    report.checks.push(Check::new(
        "resolvent_eigenvalue_match",
        spec.eig_check.max_mu_deviation,
        tol.certificate,
    ));
    report.checks.push(Check::new(
        "pair_isometry",
        pair_isometry_certificate(op, spec),
        tol.residual,
    ));
    report.checks.push(Check::new(
        "restriction_invariance",
        restriction_invariance(op, spec),
        tol.residual,
    ));
    for (k, d) in structure.deviations.iter().enumerate() {
        report
            .checks
            .push(Check::new(format!("fractal_basis_grade_{k}"), *d, tol.certificate));
    }
    for (k, d) in structure.isometry_defects.iter().enumerate() {
        report
            .checks
            .push(Check::new(format!("model_isometry_grade_{k}"), *d, tol.certificate));
    }

    match graph_equivalence_constants(op) {
        Ok(c) => {
            let ordered = c.c_lo > 0.0 && c.c_lo <= c.c_hi && c.c_step1.is_finite();
            report.checks.push(Check::new(
                "graph_norm_equivalence",
                if ordered { 0.0 } else { 1.0 },
                0.0,
            ));
            report.graph_constants = Some(c);
        }
        Err(e) => {
            report.halted = Some(e.to_string());
            return report.finish();
        }
    }
    report.regularity_constants = (0..op.scale().k_max())
        .filter_map(|g| regularity_constant(op, g).ok())
        .collect();

    let f = structure.weight.values();
    report.fractal_weight = spec
        .sorted_gammas()
        .into_iter()
        .zip(f)
        .enumerate()
        .map(|(i, (gamma, f_a))| WeightRow {
            nu: i + 1,
            gamma,
            f_a,
        })
        .collect();
    report.finish()
}
