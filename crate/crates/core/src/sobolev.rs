//! Sobolev spaces `W^{k,2}(S¹)` in the real Fourier basis.
//!
//! With `S¹ = ℝ/ℤ` the basis is `e_1 = 1`, `e_{2m} = √2 sin(2πmt)`,
//! `e_{2m+1} = √2 cos(2πmt)`, and the grade-`k` inner product is
//! `⟨u, v⟩_k = Σ_{j=0}^{k} ∫₀¹ u^{(j)} v^{(j)} dt`. Under that convention the
//! basis is orthogonal in every grade with
//! `⟨e_ν, e_ν⟩_k = Σ_{j=0}^{k} (2π⌊ν/2⌋)^{2j}` (the `j = 0` term is 1 even for
//! `ν = 1`).

use std::f64::consts::PI;

use serde::Serialize;

use crate::ddouble::{self, DDouble};
use crate::spaces::{Grade, TruncatedScaleSpace};
use crate::weights::Weight;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    Constant,
    Sine,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourierMode {
    pub frequency: usize,
    pub kind: ModeKind,
}

impl FourierMode {
    /// Mode of the 1-based basis index `ν`.
    pub fn of(nu: usize) -> Self {
        assert!(nu >= 1, "Fourier basis indices start at 1");
        let frequency = nu / 2;
        let kind = match nu {
            1 => ModeKind::Constant,
            _ if nu.is_multiple_of(2) => ModeKind::Sine,
            _ => ModeKind::Cosine,
        };
        Self { frequency, kind }
    }

    /// `e_ν^{(j)}(t)` evaluated in `f64`.
    pub fn derivative(&self, j: u32, t: f64) -> f64 {
        let phase = 2.0 * PI * self.frequency as f64 * t + j as f64 * PI / 2.0;
        let amp = 2f64.sqrt() * (2.0 * PI * self.frequency as f64).powi(j as i32);
        match self.kind {
            ModeKind::Constant => {
                if j == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            ModeKind::Sine => amp * phase.sin(),
            ModeKind::Cosine => amp * phase.cos(),
        }
    }
}

/// The first `nu_max` real Fourier basis functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierBasisSpec {
    pub nu_max: usize,
}

impl FourierBasisSpec {
    pub fn modes(&self) -> impl Iterator<Item = FourierMode> {
        (1..=self.nu_max).map(FourierMode::of)
    }

    pub fn max_frequency(&self) -> usize {
        self.nu_max / 2
    }
}

/// `⟨e_ν, e_ν'⟩_k` from the closed form.
pub fn fourier_gram_closed_form(nu: usize, nu_prime: usize, k: u32) -> f64 {
    if nu != nu_prime {
        return 0.0;
    }
    let m = (nu / 2) as f64;
    let base = (2.0 * PI * m).powi(2);
    (0..=k).map(|j| if j == 0 { 1.0 } else { base.powi(j as i32) }).sum()
}

/// `log ⟨e_ν, e_ν⟩_k`, stable for any `k`.
pub fn log_fourier_gram_diagonal(nu: usize, k: u32) -> f64 {
    let m = nu / 2;
    if m == 0 {
        return 0.0;
    }
    // Σ_{j≤k} e^{ja} = e^{ka} (1 − e^{−(k+1)a}) / (1 − e^{−a})
    let a = 2.0 * (2.0 * PI * m as f64).ln();
    let k = k as f64;
    k * a + (-(-(k + 1.0) * a).exp()).ln_1p() - (-(-a).exp()).ln_1p()
}

/// Smallest node count accepted by the quadrature for the given indices.
pub fn required_nodes(max_frequency: usize, k: u32) -> usize {
    (4 * max_frequency * (k as usize + 1)).max(1)
}

/// Periodic trapezoid rule on `q` equispaced nodes, evaluated in
/// double-double arithmetic.
///
/// Derivatives are applied analytically (phase shift by `jπ/2`, amplitude
/// `(2πm)^j`), and every sample reads `sin/cos(2π r/q)` from a table indexed
/// by the exact integer `r = m·i mod q`.
#[derive(Debug, Clone)]
pub struct FourierQuadrature {
    q: usize,
    sin: Vec<DDouble>,
    cos: Vec<DDouble>,
}

impl FourierQuadrature {
    pub fn new(q: usize) -> Self {
        let (sin, cos) = (0..q)
            .map(|r| ddouble::sin_cos_turn(r as i64, q as i64))
            .unzip();
        Self { q, sin, cos }
    }

    pub fn nodes(&self) -> usize {
        self.q
    }

    /// `e_ν^{(j)}(i/q) / (√2 (2πm)^j)` for non-constant modes, `e_1` itself
    /// otherwise.
    fn unit_sample(&self, mode: FourierMode, j: u32, i: usize) -> DDouble {
        let r = (mode.frequency * i) % self.q;
        let (s, c) = (self.sin[r], self.cos[r]);
        // sin(x + jπ/2), cos(x + jπ/2)
        match (mode.kind, j % 4) {
            (ModeKind::Constant, _) => DDouble::ONE,
            (ModeKind::Sine, 0) | (ModeKind::Cosine, 3) => s,
            (ModeKind::Sine, 1) | (ModeKind::Cosine, 0) => c,
            (ModeKind::Sine, 2) | (ModeKind::Cosine, 1) => -s,
            (ModeKind::Sine, _) | (ModeKind::Cosine, _) => -c,
        }
    }

    /// `∫₀¹ e_ν^{(j)} e_ν'^{(j)} dt`.
    pub fn derivative_product(&self, a: FourierMode, b: FourierMode, j: u32) -> DDouble {
        let amp = |mode: FourierMode| match mode.kind {
            ModeKind::Constant => {
                if j == 0 {
                    DDouble::ONE
                } else {
                    DDouble::ZERO
                }
            }
            _ => PI_DD2.scale(mode.frequency as f64).powi(j),
        };
        let (amp_a, amp_b) = (amp(a), amp(b));
        if amp_a.hi == 0.0 || amp_b.hi == 0.0 {
            return DDouble::ZERO;
        }
        let mut acc = DDouble::ZERO;
        for i in 0..self.q {
            acc = acc + self.unit_sample(a, j, i) * self.unit_sample(b, j, i);
        }
        // √2 factor per non-constant mode
        let sqrt2_count =
            [a, b].iter().filter(|m| m.kind != ModeKind::Constant).count() as i32;
        let mut value = acc / DDouble::new(self.q as f64) * amp_a * amp_b;
        if sqrt2_count == 2 {
            value = value.scale(2.0);
        } else if sqrt2_count == 1 {
            value = value * SQRT2_DD;
        }
        value
    }

    /// `⟨e_ν, e_ν'⟩_k` by quadrature.
    pub fn gram(&self, nu: usize, nu_prime: usize, k: u32) -> Result<f64> {
        let (a, b) = (FourierMode::of(nu), FourierMode::of(nu_prime));
        let required = required_nodes(a.frequency.max(b.frequency), k);
        if self.q < required {
            return Err(Error::InsufficientNodes {
                required,
                got: self.q,
            });
        }
        let mut total = DDouble::ZERO;
        for j in 0..=k {
            total = total + self.derivative_product(a, b, j);
        }
        Ok(total.to_f64())
    }

    /// All `⟨e_ν, e_ν'⟩_k` for `ν, ν' ≤ nu_max` and `k ≤ k_max`, indexed
    /// `[k][ν−1][ν'−1]`. Shares the per-derivative integrals across grades.
    pub fn gram_tables(&self, nu_max: usize, k_max: u32) -> Result<Vec<Vec<Vec<f64>>>> {
        let required = required_nodes(nu_max / 2, k_max);
        if self.q < required {
            return Err(Error::InsufficientNodes {
                required,
                got: self.q,
            });
        }
        let modes: Vec<FourierMode> = FourierBasisSpec { nu_max }.modes().collect();
        let mut running = vec![vec![DDouble::ZERO; nu_max]; nu_max];
        let mut tables = Vec::with_capacity(k_max as usize + 1);
        for j in 0..=k_max {
            for (p, &a) in modes.iter().enumerate() {
                for (r, &b) in modes.iter().enumerate() {
                    running[p][r] = running[p][r] + self.derivative_product(a, b, j);
                }
            }
            tables.push(
                running
                    .iter()
                    .map(|row| row.iter().map(|v| v.to_f64()).collect())
                    .collect(),
            );
        }
        Ok(tables)
    }
}

const PI_DD2: DDouble = DDouble {
    hi: 2.0 * ddouble::PI.hi,
    lo: 2.0 * ddouble::PI.lo,
};

const SQRT2_DD: DDouble = DDouble {
    hi: std::f64::consts::SQRT_2,
    lo: -9.667_293_313_452_913e-17,
};

/// Single-entry quadrature oracle for `⟨e_ν, e_ν'⟩_k` on `q` nodes.
pub fn fourier_gram_quadrature(nu: usize, nu_prime: usize, k: u32, q: usize) -> Result<f64> {
    let required = required_nodes((nu / 2).max(nu_prime / 2), k);
    if q < required {
        return Err(Error::InsufficientNodes { required, got: q });
    }
    FourierQuadrature::new(q).gram(nu, nu_prime, k)
}

/// `⟨e_ν, e_ν⟩_k / σ(ν)^k` with `σ(ν) = ν² + 1`, evaluated in the log domain.
pub fn sobolev_to_fractal_ratio(nu: usize, k: u32) -> f64 {
    let nu_f = nu as f64;
    (log_fourier_gram_diagonal(nu, k) - k as f64 * (nu_f * nu_f).ln_1p()).exp()
}

/// Diagonal truncation of `{W^{k,2}(S¹)}` in the Fourier basis.
pub fn build_sobolev_space(nu_max: usize, k_max: usize) -> TruncatedScaleSpace {
    let grades = (0..=k_max as u32)
        .map(|k| {
            let logs = (1..=nu_max).map(|nu| log_fourier_gram_diagonal(nu, k)).collect();
            Grade::Diagonal(Weight::from_log_values(logs).with_note(format!("W^{{{k},2}}(S^1)")))
        })
        .collect();
    TruncatedScaleSpace::new(grades).expect("Sobolev grades are finite and consistent")
}

/// One row of the Sobolev demo trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevRow {
    pub nu: usize,
    pub k: u32,
    pub closed_form: f64,
    pub quadrature: f64,
    pub abs_delta: f64,
    pub ratio: f64,
}

/// Per-grade constants of the identity map between the Sobolev truncation and
/// `ℓ^{2,σ}`: the extremes of `sobolev_to_fractal_ratio` over `ν ≤ nu_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradeConstants {
    pub k: u32,
    pub c_lo: f64,
    pub c_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevTrace {
    pub nu_max: usize,
    pub k_max: u32,
    pub quadrature_nodes: usize,
    pub rows: Vec<SobolevRow>,
    pub max_off_diagonal: f64,
    pub constants: Vec<GradeConstants>,
}

/// Diagonal Gram entries by closed form and quadrature, their ratio to
/// `σ^k`, and the largest off-diagonal quadrature entry.
pub fn sobolev_trace(nu_max: usize, k_max: u32) -> Result<SobolevTrace> {
    if nu_max == 0 {
        return Err(Error::Invalid("nu_max must be at least 1".into()));
    }
    let q = required_nodes(nu_max / 2, k_max).max(64);
    let quad = FourierQuadrature::new(q);
    let tables = quad.gram_tables(nu_max, k_max)?;
    let mut rows = Vec::with_capacity(nu_max * (k_max as usize + 1));
    let mut max_off_diagonal = 0.0f64;
    for nu in 1..=nu_max {
        for k in 0..=k_max {
            let closed_form = fourier_gram_closed_form(nu, nu, k);
            let quadrature = tables[k as usize][nu - 1][nu - 1];
            rows.push(SobolevRow {
                nu,
                k,
                closed_form,
                quadrature,
                abs_delta: (closed_form - quadrature).abs(),
                ratio: sobolev_to_fractal_ratio(nu, k),
            });
        }
    }
    for table in &tables {
        for (p, row) in table.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                if p != r {
                    max_off_diagonal = max_off_diagonal.max(v.abs());
                }
            }
        }
    }
    let constants = (0..=k_max)
        .map(|k| {
            let ratios = (1..=nu_max).map(|nu| sobolev_to_fractal_ratio(nu, k));
            let (c_lo, c_hi) = ratios.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r), hi.max(r))
            });
            GradeConstants { k, c_lo, c_hi }
        })
        .collect();
    Ok(SobolevTrace {
        nu_max,
        k_max,
        quadrature_nodes: q,
        rows,
        max_off_diagonal,
        constants,
    })
}
