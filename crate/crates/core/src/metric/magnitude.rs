use serde::Serialize;

use super::cholesky::IncrementalCholesky;
use super::space::FiniteMetricSpace;
use crate::error::{Error, Result};

/// Pivot threshold for "numerically positive definite".
pub const PD_TOL: f64 = 1e-12;

/// Below this min/max pivot ratio a solve carries a [`ConditionWarning`].
pub const CONDITION_WARN_RATIO: f64 = 1e-10;

/// The matrix `Z = (exp(-d(a, b)))`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    z: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        let n = space.len();
        let mut z = vec![1.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    z[i * n + j] = (-space.get(i, j)).exp();
                }
            }
        }
        Self { n, z }
    }

    /// Wraps an arbitrary square matrix. Symmetry is checked where it matters.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::validation("similarity matrix must be square and nonempty"));
        }
        Ok(Self {
            n,
            z: rows.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.z[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.z.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::validation(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Factors the leading rows until completion or the first failed pivot.
    fn factor(&self, tol: f64) -> (IncrementalCholesky, Option<(usize, f64)>) {
        let mut ch = IncrementalCholesky::new();
        let mut row = Vec::with_capacity(self.n);
        for i in 0..self.n {
            row.clear();
            row.extend_from_slice(&self.z[i * self.n..i * self.n + i + 1]);
            if let Err(pivot) = ch.push(&row, tol) {
                return (ch, Some((i, pivot)));
            }
        }
        (ch, None)
    }
}

/// Outcome of a positive-definiteness test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdReport {
    pub positive_definite: bool,
    /// Smallest pivot seen, including the failing one.
    pub min_pivot: f64,
}

pub fn similarity_matrix(space: &FiniteMetricSpace) -> SimilarityMatrix {
    SimilarityMatrix::from_space(space)
}

/// True iff Cholesky succeeds with every pivot above `tol`.
pub fn is_positive_definite(z: &SimilarityMatrix, tol: f64) -> Result<PdReport> {
    z.check_symmetric()?;
    let (ch, failure) = z.factor(tol);
    Ok(match failure {
        None => PdReport {
            positive_definite: true,
            min_pivot: ch.min_pivot(),
        },
        Some((_, pivot)) => PdReport {
            positive_definite: false,
            min_pivot: pivot.min(ch.min_pivot()),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionWarning {
    /// min pivot / max pivot of the factorization.
    pub pivot_ratio: f64,
}

/// Solution of `Z w = 1` together with its entry sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub weights: Vec<f64>,
    pub magnitude: f64,
    pub min_pivot: f64,
    pub warning: Option<ConditionWarning>,
}

/// Magnitude of a finite metric space: the sum of the entries of `Z⁻¹`.
pub fn magnitude_finite(space: &FiniteMetricSpace) -> Result<Weighting> {
    let z = SimilarityMatrix::from_space(space);
    let (ch, failure) = z.factor(PD_TOL);
    if let Some((row, pivot)) = failure {
        return Err(Error::NotPositiveDefinite {
            min_pivot: pivot,
            row,
        });
    }
    let weights = ch.weighting();
    let ratio = ch.min_pivot() / ch.max_pivot();
    Ok(Weighting {
        magnitude: ch.magnitude(),
        weights,
        min_pivot: ch.min_pivot(),
        warning: (ratio < CONDITION_WARN_RATIO).then_some(ConditionWarning { pivot_ratio: ratio }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleReport {
    pub scale: f64,
    pub positive_definite: bool,
    pub min_pivot: f64,
}

/// Tests `tX` for positive definiteness at each scale `t`.
///
/// One failing scale proves the space is not of negative type. Passing every
/// scale is only evidence, since negative type quantifies over all `t > 0`.
pub fn negative_type_probe(space: &FiniteMetricSpace, scales: &[f64]) -> Result<Vec<ScaleReport>> {
    if scales.is_empty() {
        return Err(Error::validation("negative-type probe needs at least one scale"));
    }
    scales
        .iter()
        .map(|&t| {
            let report = is_positive_definite(&SimilarityMatrix::from_space(&space.scale(t)?), PD_TOL)?;
            Ok(ScaleReport {
                scale: t,
                positive_definite: report.positive_definite,
                min_pivot: report.min_pivot,
            })
        })
        .collect()
}
