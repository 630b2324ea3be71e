//! JSON input schema for operators.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::hessian::ScaleOperator;
use crate::random;
use crate::spaces::{rows_to_matrix, SpaceSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Dense,
    Diagonal,
    ConjugatedDiagonal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleRef {
    /// `"graph_default"`: the operator's own graph-norm ladder.
    Named(String),
    Space(SpaceSpec),
}

/// `{ "n", "kind", "matrix" | "diag" [+ "seed"], "scale" }`. For
/// `conjugated_diagonal` the matrix is `Qᵀ diag Q` with `Q` drawn from
/// `seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub n: usize,
    pub kind: OperatorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleRef>,
}

impl OperatorSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn build_matrix(&self) -> Result<DMatrix<f64>> {
        let need = |what: &str| Error::Invalid(format!("{:?} operator needs \"{what}\"", self.kind));
        let m = match self.kind {
            OperatorKind::Dense => rows_to_matrix(self.matrix.as_ref().ok_or_else(|| need("matrix"))?)?,
            OperatorKind::Diagonal => {
                let d = self.diag.as_ref().ok_or_else(|| need("diag"))?;
                DMatrix::from_diagonal(&DVector::from_column_slice(d))
            }
            OperatorKind::ConjugatedDiagonal => {
                let d = self.diag.as_ref().ok_or_else(|| need("diag"))?;
                let seed = self.seed.ok_or_else(|| need("seed"))?;
                random::conjugated_diagonal(d, &mut random::rng(seed))
            }
        };
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if m.nrows() != self.n { m.nrows() } else { m.ncols() },
            });
        }
        Ok(m)
    }

    /// Operator on its declared scale; `graph_default` (or no scale) builds
    /// the graph-norm ladder up to `k_max`.
    pub fn into_operator(self, k_max: usize) -> Result<ScaleOperator> {
        let m = self.build_matrix()?;
        match self.scale {
            None => ScaleOperator::on_graph_scale(m, k_max),
            Some(ScaleRef::Named(name)) if name == "graph_default" => {
                ScaleOperator::on_graph_scale(m, k_max)
            }
            Some(ScaleRef::Named(name)) => Err(Error::Invalid(format!("unknown scale \"{name}\""))),
            Some(ScaleRef::Space(spec)) => ScaleOperator::new(m, spec.into_space()?),
        }
    }
}
