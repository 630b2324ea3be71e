//! Scale Hessian operators and the fractal structure they induce.
//!
//! A [`ScaleOperator`] is a symmetric matrix `A` in grade-0 orthonormal
//! coordinates together with the scale it acts on. From its spectral data
//! `A e_ν = γ_ν e_ν`, sorted so that `|γ_ν|` is nondecreasing, the analyzer
//! builds the fractal weight `f_A(ν) = 1 + γ_ν²` and certifies that the
//! graph-norm ladder `⟨ξ, η⟩_{k+1} = ⟨ξ, η⟩_k + ⟨Aξ, Aη⟩_k` is isometric to
//! `ℓ^{2,f_A}` through the rescaled bases `e_ν^k = f_A(ν)^{-k/2} e_ν`.
//!
//! Complex arithmetic only appears in the resolvent `B_λ = (A − λ)^{-1}` and
//! the checks built on it; everything else stays real.

mod analysis;

pub use analysis::{analyze, AnalysisReport, Check, Tolerances, WeightRow};

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::linalg::{self, argmax_abs, generalized_extremes, symmetrize};
use crate::spaces::{Grade, TruncatedScaleSpace};
use crate::weights::Weight;
use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Default resolvent point `λ = i`, off the real spectrum of any symmetric `A`.
pub const DEFAULT_LAMBDA: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleOperator {
    matrix: DMatrix<f64>,
    scale: TruncatedScaleSpace,
}

impl ScaleOperator {
    pub fn new(matrix: DMatrix<f64>, scale: TruncatedScaleSpace) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if scale.n() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: scale.n(),
            });
        }
        Ok(Self { matrix, scale })
    }

    /// `A` on its own graph-norm ladder with grades `0..=k_max`
    /// (`k_max ≥ 1` so that grade 1 exists).
    pub fn on_graph_scale(matrix: DMatrix<f64>, k_max: usize) -> Result<Self> {
        let grades = graph_ladder(&matrix, k_max.max(1))
            .into_iter()
            .map(Grade::Gram)
            .collect();
        let scale = TruncatedScaleSpace::new(grades)?;
        Self::new(matrix, scale)
    }

    pub fn diagonal(gammas: &[f64], k_max: usize) -> Result<Self> {
        Self::on_graph_scale(
            DMatrix::from_diagonal(&DVector::from_column_slice(gammas)),
            k_max,
        )
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn scale(&self) -> &TruncatedScaleSpace {
        &self.scale
    }

    fn complex_matrix(&self) -> DMatrix<C64> {
        self.matrix.map(|x| C64::new(x, 0.0))
    }

    /// Numerical rank threshold `n · ε · σ_max(A)`.
    pub fn default_rank_tol(&self) -> f64 {
        self.n() as f64 * f64::EPSILON
    }
}

/// `G_0 = I`, `G_{k+1} = G_k + Aᵀ G_k A`, each symmetrized after assembly.
pub fn graph_ladder(a: &DMatrix<f64>, k_max: usize) -> Vec<DMatrix<f64>> {
    let n = a.nrows();
    let mut grams = vec![DMatrix::identity(n, n)];
    for k in 0..k_max {
        let g = &grams[k];
        let next = g + a.transpose() * g * a;
        grams.push(symmetrize(&next));
    }
    grams
}

/// Gram matrix `I + AᵀA` of the graph inner product.
pub fn graph_gram(a: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(&(DMatrix::identity(a.nrows(), a.ncols()) + a.transpose() * a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub defect: f64,
    pub pass: bool,
}

/// Relative Frobenius asymmetry `‖A − Aᵀ‖ / ‖A‖`.
pub fn check_symmetry(op: &ScaleOperator, tol: f64) -> SymmetryReport {
    let defect = linalg::asymmetry(&op.matrix);
    SymmetryReport {
        defect,
        pass: defect <= tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelReport {
    pub ker_dim: usize,
    pub coker_dim: usize,
    pub index: i64,
/// Largest principal angle between `ker A` and `(im A)^⊥`, in radians.
    pub subspace_angle: f64,
}

/// Numerical kernel and cokernel of `A` from its SVD. Singular values at or
/// below `rank_tol · σ_max` count as zero; `None` uses
/// [`ScaleOperator::default_rank_tol`].
pub fn check_kernel_cokernel(op: &ScaleOperator, rank_tol: Option<f64>) -> KernelReport {
    let (kernel, cokernel) = kernel_cokernel_bases(op, rank_tol);
    KernelReport {
        ker_dim: kernel.ncols(),
        coker_dim: cokernel.ncols(),
        index: kernel.ncols() as i64 - cokernel.ncols() as i64,
        subspace_angle: largest_principal_angle(&kernel, &cokernel),
    }
}

/// Orthonormal bases of `ker A` (right singular vectors) and `(im A)^⊥`
/// (left singular vectors) for the numerically zero singular values.
pub fn kernel_cokernel_bases(
    op: &ScaleOperator,
    rank_tol: Option<f64>,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let rel = rank_tol.unwrap_or_else(|| op.default_rank_tol());
    // Left singular vectors of a rank-deficient SVD are poorly determined on
    // the null block, so the cokernel comes from its own decomposition of Aᵀ.
    let kernel = right_null_space(&op.matrix, rel);
    let cokernel = right_null_space(&op.matrix.transpose(), rel);
    (kernel, cokernel)
}

fn right_null_space(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v = svd.v_t.expect("requested Vᵀ").transpose();
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= rel * s_max)
        .collect();
    DMatrix::from_fn(n, null.len(), |i, j| v[(i, null[j])])
}

/// Largest principal angle between the column spans of two orthonormal bases,
/// via `sin θ_max = ‖(I − P_b) a‖₂`. Subspaces of different dimension are at
/// angle `π/2`.
pub fn largest_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let residual = a - b * (b.transpose() * a);
    let sin = residual
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .min(1.0);
    sin.asin()
}

/// Best constant `C` with `‖ξ‖_{n+1} ≤ C (‖Aξ‖²_n + ‖ξ‖²_n)^{1/2}`.
///
/// This bounds the constant for the right-hand side `‖Aξ‖_n + ‖ξ‖_n` from
/// above, and from below after division by `√2`.
pub fn regularity_constant(op: &ScaleOperator, n_grade: usize) -> Result<f64> {
    let g_n = op.scale.gram_matrix(n_grade)?;
    let g_next = op.scale.gram_matrix(n_grade + 1)?;
    let a = &op.matrix;
    let rhs = symmetrize(&(&g_n + a.transpose() * &g_n * a));
    let (_, hi) = generalized_extremes(&g_next, &rhs)?;
    Ok(hi.max(0.0).sqrt())
}

/// `⟨ξ, η⟩_A = ⟨ξ, η⟩_0 + ⟨Aξ, Aη⟩_0`.
pub fn graph_inner_product(op: &ScaleOperator, xi: &DVector<f64>, eta: &DVector<f64>) -> Result<f64> {
    for v in [xi, eta] {
        if v.len() != op.n() {
            return Err(Error::DimensionMismatch {
                expected: op.n(),
                got: v.len(),
            });
        }
    }
    Ok(xi.dot(eta) + (&op.matrix * xi).dot(&(&op.matrix * eta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphConstants {
    /// Sharp constants in `c_lo ‖ξ‖²_A ≤ ‖ξ‖²_1 ≤ c_hi ‖ξ‖²_A`.
    pub c_lo: f64,
    pub c_hi: f64,
    /// `max{c₀, |λ| c₀}` with `c₀ = ‖(A − λ)^{-1}‖_{0→1}` at `λ = i`.
    pub c_step1: f64,
}

/// Equivalence between the grade-1 norm of the scale and the graph norm.
pub fn graph_equivalence_constants(op: &ScaleOperator) -> Result<GraphConstants> {
    let g1 = op.scale.gram_matrix(1)?;
    let (c_lo, c_hi) = generalized_extremes(&g1, &graph_gram(&op.matrix))?;
    let lambda = DEFAULT_LAMBDA;
    let r = resolvent(op, lambda, true)?;
    // ‖B η‖_1 = ‖L₁ᵀ B η‖ with G₁ = L₁ L₁ᵀ
    let l1 = linalg::cholesky_factor(&g1)?;
    let lt = l1.transpose().map(|x| C64::new(x, 0.0));
    let c0 = (lt * &r.b_matrix)
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(GraphConstants {
        c_lo,
        c_hi,
        c_step1: c0.max(lambda.norm() * c0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventData {
    pub lambda: C64,
    /// `B_λ = (A − λ)^{-1}` on grade-0 coordinates.
    pub b_matrix: DMatrix<C64>,
    /// `‖(A − λ) B_λ − I‖_F`.
    pub residual: f64,
}

/// `B_λ = (A − λ)^{-1}`. Fails if `λ` is numerically on the spectrum, or if
/// `require_off_axis` is set and `λ` is real.
pub fn resolvent(op: &ScaleOperator, lambda: C64, require_off_axis: bool) -> Result<ResolventData> {
    if require_off_axis && lambda.im == 0.0 {
        return Err(Error::Invalid(format!(
            "resolvent point {} must lie off the real axis",
            lambda.re
        )));
    }
    let n = op.n();
    let shifted = op.complex_matrix() - DMatrix::<C64>::identity(n, n) * lambda;
    let sv = shifted.clone().singular_values();
    let s_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let s_max = sv.iter().copied().fold(0.0, f64::max);
    let threshold = op.default_rank_tol() * s_max.max(1.0);
    if s_min <= threshold {
        return Err(Error::ResolventOnSpectrum {
            re: lambda.re,
            im: lambda.im,
            distance: s_min,
        });
    }
    let b_matrix = shifted
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::ResolventOnSpectrum {
            re: lambda.re,
            im: lambda.im,
            distance: s_min,
        })?;
    let residual = (&shifted * &b_matrix - DMatrix::<C64>::identity(n, n)).norm();
    Ok(ResolventData {
        lambda,
        b_matrix,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalityReport {
    /// `‖B*B − BB*‖_F / ‖B‖²_F`.
    pub commutator_defect: f64,
    /// `‖B_λ* − B_λ̄‖_F / ‖B_λ‖_F` with `B_λ̄` from a second solve.
    pub adjoint_defect: f64,
}

pub fn normality_defect(op: &ScaleOperator, r: &ResolventData) -> Result<NormalityReport> {
    let b = &r.b_matrix;
    let b_star = b.adjoint();
    let norm = b.norm();
    let commutator = (&b_star * b - b * &b_star).norm() / (norm * norm);
    let conj = resolvent(op, r.lambda.conj(), false)?;
    let adjoint = (&b_star - &conj.b_matrix).norm() / norm;
    Ok(NormalityReport {
        commutator_defect: commutator,
        adjoint_defect: adjoint,
    })
}

/// Cross-check of `A e_ν = (1/μ_ν + λ) e_ν` against the eigenvalues `μ` of the
/// resolvent, matched by eigenvector overlap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigConsistency {
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `max_ν |γ_ν − (1/μ_ν + λ)| / (1 + |γ_ν|)`.
    pub max_gamma_deviation: f64,
    /// `max_ν |μ_ν − 1/(γ_ν − λ)| / |1/(γ_ν − λ)|`.
    pub max_mu_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Eigenvalues, listed by the position of each eigenvector's dominant
    /// coordinate.
    pub gammas: DVector<f64>,
    /// Orthonormal eigenvectors as columns, matching `gammas`.
    pub vectors: DMatrix<f64>,
    /// `order[ν]` is the column of the `ν`-th smallest `|γ|`.
    pub order: Vec<usize>,
    /// `‖A − V diag(γ) Vᵀ‖_F / ‖A‖_F`.
    pub reconstruction_residual: f64,
    /// `‖VᵀV − I‖_F`.
    pub orthonormality_residual: f64,
    pub eig_check: EigConsistency,
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    /// `γ` in `|γ|`-sorted order.
    pub fn sorted_gammas(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.gammas[i]).collect()
    }

    /// Eigenvectors in `|γ|`-sorted order.
    pub fn sorted_vectors(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| self.vectors[(i, self.order[j])])
    }
}

/// Eigendecomposition of a symmetric `A` with the ordering and the resolvent
/// cross-check at `λ = i`.
pub fn spectral_decompose(op: &ScaleOperator, tol: f64) -> Result<SpectralData> {
    let sym = check_symmetry(op, tol);
    if !sym.pass {
        return Err(Error::NotSymmetric(sym.defect));
    }
    let n = op.n();
    let (values, vectors) = linalg::sym_eigen(&op.matrix);
    let mut cols: Vec<(usize, f64, usize)> = (0..n)
        .map(|j| (argmax_abs(vectors.column(j).as_slice()), values[j], j))
        .collect();
    cols.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    let gammas = DVector::from_iterator(n, cols.iter().map(|c| c.1));
    let vectors = DMatrix::from_fn(n, n, |i, j| vectors[(i, cols[j].2)]);
    let positions: Vec<usize> = cols.iter().map(|c| c.0).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        gammas[a]
            .abs()
            .total_cmp(&gammas[b].abs())
            .then(gammas[a].total_cmp(&gammas[b]))
            .then(positions[a].cmp(&positions[b]))
    });

    let a_norm = op.matrix.norm();
    let recon = &vectors * DMatrix::from_diagonal(&gammas) * vectors.transpose();
    let reconstruction_residual = if a_norm == 0.0 {
        recon.norm()
    } else {
        (recon - &op.matrix).norm() / a_norm
    };
    let orthonormality_residual = (vectors.transpose() * &vectors - DMatrix::identity(n, n)).norm();
    let eig_check = eig_consistency(op, &gammas, &vectors, DEFAULT_LAMBDA)?;
    Ok(SpectralData {
        gammas,
        vectors,
        order,
        reconstruction_residual,
        orthonormality_residual,
        eig_check,
    })
}

/// Eigenvalues of `B_λ` computed from `B_λ` alone and matched to the columns
/// of `vectors` by largest overlap.
///
/// `B_λ` is normal, so its Hermitian and skew-Hermitian parts commute and a
/// generic real combination `H + tK` has the eigenvectors of `B_λ`. The
/// eigenvalues are the Rayleigh quotients `qᴴ B_λ q` of that Hermitian
/// eigenbasis.
fn eig_consistency(
    op: &ScaleOperator,
    gammas: &DVector<f64>,
    vectors: &DMatrix<f64>,
    lambda: C64,
) -> Result<EigConsistency> {
    let n = op.n();
    let r = resolvent(op, lambda, true)?;
    let (q, mus) = normal_eigen(&r.b_matrix);
    let cv = vectors.map(|x| C64::new(x, 0.0));
    let overlap = cv.adjoint() * &q;
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|nu| (0..n).map(move |j| (nu, j)))
        .map(|(nu, j)| (overlap[(nu, j)].norm_sqr(), nu, j))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut matched = vec![None; n];
    let mut used = vec![false; n];
    for (_, nu, j) in pairs {
        if matched[nu].is_none() && !used[j] {
            matched[nu] = Some(j);
            used[j] = true;
        }
    }
    let mut max_gamma_deviation = 0.0f64;
    let mut max_mu_deviation = 0.0f64;
    for nu in 0..n {
        let mu = mus[matched[nu].expect("assignment is complete")];
        let gamma = gammas[nu];
        let from_mu = C64::new(1.0, 0.0) / mu + lambda;
        max_gamma_deviation = max_gamma_deviation.max((from_mu - gamma).norm() / (1.0 + gamma.abs()));
        let expected = C64::new(1.0, 0.0) / (C64::new(gamma, 0.0) - lambda);
        max_mu_deviation = max_mu_deviation.max((mu - expected).norm() / expected.norm());
    }
    Ok(EigConsistency {
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        max_gamma_deviation,
        max_mu_deviation,
    })
}

/// Eigenpairs of a normal matrix via the Hermitian pencil `H + tK`, with
/// `H = (B + B*)/2`, `K = (B − B*)/2i` and a fixed irrational `t`.
pub fn normal_eigen(b: &DMatrix<C64>) -> (DMatrix<C64>, Vec<C64>) {
    const T: f64 = 0.618_033_988_749_894_8;
    let b_star = b.adjoint();
    let h = (b + &b_star) * C64::new(0.5, 0.0);
    let k = (b - &b_star) * C64::new(0.0, -0.5);
    let mut pencil = h + k * C64::new(T, 0.0);
    // exact Hermitian symmetry for the eigensolver
    pencil = (&pencil + pencil.adjoint()) * C64::new(0.5, 0.0);
    let q = pencil.symmetric_eigen().eigenvectors;
    let mus = q
        .column_iter()
        .map(|col| (col.adjoint() * b * col)[(0, 0)])
        .collect();
    (q, mus)
}

/// `f_A(ν) = 1 + γ_ν²` over the `|γ|`-sorted spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalWeight(pub Weight);

impl FractalWeight {
    pub fn weight(&self) -> &Weight {
        &self.0
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.values()
    }
}

pub fn fractal_weight(spec: &SpectralData) -> FractalWeight {
    let logs = spec
        .sorted_gammas()
        .iter()
        .map(|g| (g * g).ln_1p())
        .collect();
    FractalWeight(Weight::from_log_values(logs).with_note("1+gamma^2"))
}

/// Columns `e_ν^k = f_A(ν)^{-k/2} e_ν` in `|γ|`-sorted order.
pub fn rescaled_basis(spec: &SpectralData, fw: &FractalWeight, k: u32) -> DMatrix<f64> {
    let logs = fw.0.log_values();
    let mut basis = spec.sorted_vectors();
    for (j, mut col) in basis.column_iter_mut().enumerate() {
        col *= (-0.5 * k as f64 * logs[j]).exp();
    }
    basis
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalStructure {
    /// Graph-norm ladder as Gram grades.
    pub space: TruncatedScaleSpace,
    /// `ℓ^{2,f_A}` truncated to the same grades.
    pub model: TruncatedScaleSpace,
    pub spectral: SpectralData,
    pub weight: FractalWeight,
    /// `‖E_kᵀ G_k E_k − I‖_F` per grade, `E_k` the rescaled basis.
    pub deviations: Vec<f64>,
    /// Relative defects of the coordinate map `ξ ↦ Vᵀ ξ` into the model.
    pub isometry_defects: Vec<f64>,
}

/// Builds the graph-norm ladder of `A` and certifies, grade by grade, that the
/// rescaled eigenbases are orthonormal.
pub fn build_fractal_structure(op: &ScaleOperator, k_max: usize, tol: f64) -> Result<FractalStructure> {
    let spectral = spectral_decompose(op, tol)?;
    let weight = fractal_weight(&spectral);
    let grams = graph_ladder(&op.matrix, k_max);
    let n = op.n();
    let deviations = grams
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let e = rescaled_basis(&spectral, &weight, k as u32);
            (e.transpose() * g * e - DMatrix::identity(n, n)).norm()
        })
        .collect();
    let space = TruncatedScaleSpace::new(grams.into_iter().map(Grade::Gram).collect())?;
    let model = TruncatedScaleSpace::weighted(weight.weight(), k_max);
    let map = spectral.sorted_vectors().transpose();
    let isometry = crate::spaces::is_scale_isometric(&space, &model, &map, tol)?;
    Ok(FractalStructure {
        space,
        model,
        spectral,
        weight,
        deviations,
        isometry_defects: isometry.defects,
    })
}

/// Distance between the matrix of `A` in `{e_ν^A}` for `⟨·,·⟩_A` and the matrix
/// of `A` in `{e_ν}` for `⟨·,·⟩_0`, relative to `max(1, ‖A‖_F)`.
pub fn restriction_invariance(op: &ScaleOperator, spec: &SpectralData) -> f64 {
    let a = &op.matrix;
    let fw = fractal_weight(spec);
    let e0 = spec.sorted_vectors();
    let e1 = rescaled_basis(spec, &fw, 1);
    let on_h1 = e1.transpose() * graph_gram(a) * a * &e1;
    let on_h0 = e0.transpose() * a * &e0;
    (on_h1 - on_h0).norm() / a.norm().max(1.0)
}

/// `max_{ν,μ} |⟨e_ν, e_μ⟩_A − δ_{νμ}(1 + γ_ν²)| / √(f_A(ν) f_A(μ))`.
pub fn pair_isometry_certificate(op: &ScaleOperator, spec: &SpectralData) -> f64 {
    let e = spec.sorted_vectors();
    let gram = e.transpose() * graph_gram(&op.matrix) * &e;
    let f: Vec<f64> = spec.sorted_gammas().iter().map(|g| 1.0 + g * g).collect();
    let n = spec.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { f[i] } else { 0.0 };
            worst = worst.max((gram[(i, j)] - expected).abs() / (f[i] * f[j]).sqrt());
        }
    }
    worst
}

#[cfg(test)]
mod tests;
