//! Truncated scale Hilbert spaces.
//!
//! All grades share one `n`-dimensional coordinate space (coordinates in the
//! grade-0 orthonormal basis); grade `k` is an inner product on it. The
//! density axiom of a scale is vacuous here since `H_∞ = H_0` at finite `n`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, generalized_eigen, generalized_extremes};
use crate::weights::{Weight, WeightSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Grade {
    /// `⟨x, y⟩ = Σ f(ν) x_ν y_ν`.
    Diagonal(Weight),
    /// `⟨x, y⟩ = xᵀ G y` for an SPD `G`.
    Gram(DMatrix<f64>),
}

impl Grade {
    pub fn n(&self) -> usize {
        match self {
            Grade::Diagonal(w) => w.n(),
            Grade::Gram(g) => g.nrows(),
        }
    }

    /// Dense Gram matrix. Diagonal entries beyond `f64` range become `inf`.
    pub fn matrix(&self) -> DMatrix<f64> {
        match self {
            Grade::Diagonal(w) => DMatrix::from_diagonal(&DVector::from_vec(w.values())),
            Grade::Gram(g) => g.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Grade::Diagonal(w) => {
                if let Some(i) = w.log_values().iter().position(|l| !l.is_finite()) {
                    return Err(Error::InvalidWeight(format!(
                        "non-finite log value at index {}",
                        i + 1
                    )));
                }
                Ok(())
            }
            Grade::Gram(g) => linalg::require_spd(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    pub coords: DVector<f64>,
    pub grade: usize,
}

impl GradedVector {
    pub fn new(coords: impl Into<DVector<f64>>, grade: usize) -> Self {
        Self {
            coords: coords.into(),
            grade,
        }
    }

    pub fn from_slice(coords: &[f64], grade: usize) -> Self {
        Self::new(DVector::from_column_slice(coords), grade)
    }

    /// The 1-based unit vector `e_ν`.
    pub fn unit(n: usize, nu: usize, grade: usize) -> Self {
        let mut coords = DVector::zeros(n);
        coords[nu - 1] = 1.0;
        Self { coords, grade }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedScaleSpace {
    n: usize,
    grades: Vec<Grade>,
}

impl TruncatedScaleSpace {
    /// Builds a space from explicit grades. Every Gram grade must be SPD and
    /// every diagonal grade finite.
    pub fn new(grades: Vec<Grade>) -> Result<Self> {
        let n = grades
            .first()
            .map(Grade::n)
            .ok_or_else(|| Error::Invalid("a scale needs at least one grade".into()))?;
        for g in &grades {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.n(),
                });
            }
            g.validate()?;
        }
        Ok(Self { n, grades })
    }

    /// Truncation of `ℓ^{2,f}`: grade `k` is `Diagonal(f^k)`, so grade 0 is
    /// the constant weight 1.
    pub fn weighted(weight: &Weight, k_max: usize) -> Self {
        let grades = (0..=k_max as u64)
            .map(|k| Grade::Diagonal(weight.power(k)))
            .collect();
        Self {
            n: weight.n(),
            grades,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn grade(&self, k: usize) -> Result<&Grade> {
        self.grades.get(k).ok_or(Error::GradeOutOfRange {
            grade: k,
            k_max: self.k_max(),
        })
    }

    pub fn gram_matrix(&self, k: usize) -> Result<DMatrix<f64>> {
        Ok(self.grade(k)?.matrix())
    }

    pub fn inner_product(&self, k: usize, x: &GradedVector, y: &GradedVector) -> Result<f64> {
        let grade = self.grade(k)?;
        for v in [x, y] {
            if v.coords.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: v.coords.len(),
                });
            }
        }
        Ok(match grade {
            Grade::Diagonal(w) => w
                .log_values()
                .iter()
                .zip(x.coords.iter().zip(y.coords.iter()))
                .map(|(l, (a, b))| l.exp() * a * b)
                .sum(),
            Grade::Gram(g) => x.coords.dot(&(g * &y.coords)),
        })
    }

    pub fn norm(&self, k: usize, x: &GradedVector) -> Result<f64> {
        Ok(self.inner_product(k, x, x)?.sqrt())
    }

    /// Singular values of the identity map `(H_k, ⟨·,·⟩_k) → (H_{k-1}, ⟨·,·⟩_{k-1})`,
    /// nonincreasing.
    pub fn inclusion_singular_values(&self, k: usize) -> Result<Vec<f64>> {
        if k == 0 {
            return Err(Error::GradeOutOfRange {
                grade: 0,
                k_max: self.k_max(),
            });
        }
        let lower = self.grade(k - 1)?;
        let upper = self.grade(k)?;
        let mut values = match (lower, upper) {
            (Grade::Diagonal(lo), Grade::Diagonal(hi)) => lo
                .log_values()
                .iter()
                .zip(hi.log_values())
                .map(|(a, b)| (0.5 * (a - b)).exp())
                .collect(),
            _ => {
                let (mu, _) = generalized_eigen(&lower.matrix(), &upper.matrix())?;
                mu.iter().map(|m| m.max(0.0).sqrt()).collect::<Vec<_>>()
            }
        };
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// The shifted scale `k ↦ H_{k+m}`.
    pub fn shift(&self, m: usize) -> Result<Self> {
        if m > self.k_max() {
            return Err(Error::ShiftTooLarge {
                m,
                k_max: self.k_max(),
            });
        }
        Ok(Self {
            n: self.n,
            grades: self.grades[m..].to_vec(),
        })
    }

    /// Best constants `c_lo ‖x‖²_other ≤ ‖x‖²_self ≤ c_hi ‖x‖²_other` at grade `k`.
    pub fn grade_equivalence(&self, other: &Self, k: usize) -> Result<(f64, f64)> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        match (self.grade(k)?, other.grade(k)?) {
            (Grade::Diagonal(a), Grade::Diagonal(b)) => {
                let ratios: Vec<f64> = a
                    .log_values()
                    .iter()
                    .zip(b.log_values())
                    .map(|(x, y)| (x - y).exp())
                    .collect();
                let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Ok((lo, hi))
            }
            (a, b) => equivalence_constants(&a.matrix(), &b.matrix()),
        }
    }
}

/// Extreme generalized eigenvalues of `g_a v = μ g_b v`: the sharp constants in
/// `c_lo ‖x‖²_b ≤ ‖x‖²_a ≤ c_hi ‖x‖²_b`.
pub fn equivalence_constants(g_a: &DMatrix<f64>, g_b: &DMatrix<f64>) -> Result<(f64, f64)> {
    linalg::require_spd(g_a)?;
    linalg::require_spd(g_b)?;
    generalized_extremes(g_a, g_b)
}

/// A basis orthogonal for both inner products. Columns are `g_b`-orthonormal
/// and `g_a`-orthogonal.
pub fn common_orthogonal_basis(g_a: &DMatrix<f64>, g_b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    linalg::require_spd(g_a)?;
    linalg::require_spd(g_b)?;
    let (_, x) = generalized_eigen(g_a, g_b)?;
    Ok(x)
}

/// Frobenius norm of the off-diagonal part relative to the whole matrix.
pub fn off_diagonal_ratio(m: &DMatrix<f64>) -> f64 {
    let total = m.norm();
    if total == 0.0 {
        return 0.0;
    }
    let mut off = m.clone();
    off.fill_diagonal(0.0);
    off.norm() / total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    pub isometric: bool,
    /// `‖mapᵀ G'_k map − G_k‖_F / ‖G_k‖_F` per grade.
    pub defects: Vec<f64>,
}

/// Checks that `map` (coordinates of `s` to coordinates of `t`) carries every
/// grade of `s` isometrically onto the same grade of `t`.
pub fn is_scale_isometric(
    s: &TruncatedScaleSpace,
    t: &TruncatedScaleSpace,
    map: &DMatrix<f64>,
    tol: f64,
) -> Result<IsometryReport> {
    if s.n != t.n || map.shape() != (t.n, s.n) {
        return Err(Error::DimensionMismatch {
            expected: s.n,
            got: map.ncols(),
        });
    }
    if s.k_max() != t.k_max() {
        return Err(Error::Invalid(format!(
            "grade counts differ: {} vs {}",
            s.k_max(),
            t.k_max()
        )));
    }
    if map.clone().lu().try_inverse().is_none() {
        return Err(Error::SingularMap);
    }
    let defects: Vec<f64> = (0..=s.k_max())
        .map(|k| {
            let g = s.grades[k].matrix();
            let pulled = map.transpose() * t.grades[k].matrix() * map;
            let norm = g.norm();
            let diff = (pulled - &g).norm();
            if norm == 0.0 {
                diff
            } else {
                diff / norm
            }
        })
        .collect();
    Ok(IsometryReport {
        isometric: defects.iter().all(|d| *d <= tol),
        defects,
    })
}

/// JSON form of a space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub n: usize,
    pub k_max: usize,
    pub grades: Vec<GradeSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GradeSpec {
    Diagonal { weight: WeightSpec },
    Gram { matrix: Vec<Vec<f64>> },
}

impl SpaceSpec {
    pub fn into_space(self) -> Result<TruncatedScaleSpace> {
        if self.grades.len() != self.k_max + 1 {
            return Err(Error::Invalid(format!(
                "k_max = {} but {} grades given",
                self.k_max,
                self.grades.len()
            )));
        }
        let grades = self
            .grades
            .into_iter()
            .map(|g| match g {
                GradeSpec::Diagonal { weight } => weight.into_weight().map(Grade::Diagonal),
                GradeSpec::Gram { matrix } => rows_to_matrix(&matrix).map(Grade::Gram),
            })
            .collect::<Result<Vec<_>>>()?;
        let space = TruncatedScaleSpace::new(grades)?;
        if space.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: space.n(),
            });
        }
        Ok(space)
    }
}

pub(crate) fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}
