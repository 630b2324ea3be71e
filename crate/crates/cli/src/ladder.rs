//! Equivalence constants across a ladder of truncations.
//!
//! Two same-dimension truncations are always equivalent; what matters is
//! whether the constants stay bounded as the dimension grows. Each rung
//! records per-grade constants, and the envelope flags grades whose spread
//! `c_hi / c_lo` drifts by more than [`GROWTH_THRESHOLD`](crate::GROWTH_THRESHOLD).

use clap::ValueEnum;
use serde::Serialize;

use scale_hilbert::{TruncatedScaleSpace, Weight};

use crate::{sigma_space, sobolev_space, CliError, Outcome, RunConfig, GROWTH_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderPair {
    /// Sobolev truncation against `ℓ^{2,σ}`, `σ(ν) = ν² + 1`.
    SobolevSigma,
    /// `ℓ^{2,σ}` against itself.
    Identical,
    /// `ℓ^{2,σ}` against `ℓ^{2,σ²}`; not uniformly equivalent.
    WeightSquare,
}

impl LadderPair {
    pub fn spaces(self, n: usize, k_max: usize) -> (TruncatedScaleSpace, TruncatedScaleSpace) {
        match self {
            Self::SobolevSigma => (sobolev_space(n, k_max), sigma_space(n, k_max)),
            Self::Identical => (sigma_space(n, k_max), sigma_space(n, k_max)),
            Self::WeightSquare => (
                sigma_space(n, k_max),
                TruncatedScaleSpace::weighted(&Weight::sigma(n).power(2), k_max),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradeRow {
    pub k: usize,
    pub c_lo: f64,
    pub c_hi: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rung {
    pub n: usize,
    pub grades: Vec<GradeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub k: usize,
    pub c_lo_min: f64,
    pub c_hi_max: f64,
    pub spread_min: f64,
    pub spread_max: f64,
    /// `spread_max / spread_min − 1` across the ladder.
    pub drift: f64,
    pub growing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderReport {
    pub pair: LadderPair,
    pub k_max: usize,
    pub growth_threshold: f64,
    pub rungs: Vec<Rung>,
    pub envelopes: Vec<Envelope>,
    pub pass: bool,
}

pub fn ladder_report(pair: LadderPair, ladder: &[usize], k_max: usize) -> Result<LadderReport, CliError> {
    let mut rungs = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let (a, b) = pair.spaces(n, k_max);
        let grades = (0..=k_max)
            .map(|k| {
                let (c_lo, c_hi) = a.grade_equivalence(&b, k)?;
                Ok(GradeRow {
                    k,
                    c_lo,
                    c_hi,
                    spread: c_hi / c_lo,
                })
            })
            .collect::<scale_hilbert::Result<Vec<_>>>()?;
        rungs.push(Rung { n, grades });
    }
    let envelopes: Vec<Envelope> = (0..=k_max)
        .map(|k| {
            let rows = rungs.iter().map(|r| &r.grades[k]);
            let mut e = Envelope {
                k,
                c_lo_min: f64::INFINITY,
                c_hi_max: f64::NEG_INFINITY,
                spread_min: f64::INFINITY,
                spread_max: f64::NEG_INFINITY,
                drift: 0.0,
                growing: false,
            };
            for g in rows {
                e.c_lo_min = e.c_lo_min.min(g.c_lo);
                e.c_hi_max = e.c_hi_max.max(g.c_hi);
                e.spread_min = e.spread_min.min(g.spread);
                e.spread_max = e.spread_max.max(g.spread);
            }
            e.drift = e.spread_max / e.spread_min - 1.0;
            // NaN drift counts as growth.
            e.growing = e.drift.is_nan() || e.drift > GROWTH_THRESHOLD;
            e
        })
        .collect();
    let pass = envelopes.iter().all(|e| !e.growing);
    Ok(LadderReport {
        pair,
        k_max,
        growth_threshold: GROWTH_THRESHOLD,
        rungs,
        envelopes,
        pass,
    })
}

pub fn ladder_csv(report: &LadderReport) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Row {
        n: usize,
        k: usize,
        c_lo: f64,
        c_hi: f64,
        spread: f64,
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.rungs {
        for g in &r.grades {
            w.serialize(Row {
                n: r.n,
                k: g.k,
                c_lo: g.c_lo,
                c_hi: g.c_hi,
                spread: g.spread,
            })
            .map_err(|e| CliError::Input(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn cmd_ladder(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let k_max = cfg.k_max.unwrap_or(3);
    let report = ladder_report(cfg.pair, &cfg.ladder, k_max)?;
    let csv = ladder_csv(&report)?;
    let pass = report.pass;
    Outcome::new(&report, Some(csv), pass)
}
