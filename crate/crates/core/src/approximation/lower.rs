use log::warn;

use super::sampling::{sample_polytope, SampleScheme};
use crate::error::Result;
use crate::geometry::Polytope;
use crate::metric::{IncrementalCholesky, PointCloud, PD_TOL};

/// Magnitudes of the prefixes of a point sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerSequence {
    /// `magnitudes[i]` is the magnitude of the first `i + 1` accepted points.
    pub magnitudes: Vec<f64>,
    /// Cloud indices that were kept, in order.
    pub accepted: Vec<usize>,
    /// Cloud indices dropped because their pivot fell to `PD_TOL` or below.
    pub skipped: Vec<usize>,
    pub min_pivot: f64,
    pub max_pivot: f64,
}

impl LowerSequence {
    pub fn last(&self) -> f64 {
        self.magnitudes.last().copied().unwrap_or(0.0)
    }

    pub fn pivot_ratio(&self) -> f64 {
        if self.max_pivot > 0.0 {
            self.min_pivot / self.max_pivot
        } else {
            1.0
        }
    }
}

/// Adds the cloud's points one at a time and records the magnitude after
/// each. Each prefix is a subset of the next, so the sequence is
/// nondecreasing: every accepted point adds `y_k² >= 0`.
pub fn nested_magnitudes(cloud: &PointCloud) -> LowerSequence {
    let metric = cloud.metric();
    let pts = cloud.points();
    let mut ch = IncrementalCholesky::new();
    let mut accepted: Vec<usize> = Vec::with_capacity(pts.len());
    let mut skipped = Vec::new();
    let mut magnitudes = Vec::with_capacity(pts.len());
    let mut row = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        row.clear();
        row.extend(accepted.iter().map(|&j| (-metric.distance(p, &pts[j])).exp()));
        row.push(1.0);
        match ch.push(&row, PD_TOL) {
            Ok(_) => {
                accepted.push(i);
                magnitudes.push(ch.magnitude());
            }
            Err(pivot) => {
                warn!("skipping sample point {i}: pivot {pivot:e} <= {PD_TOL:e}");
                skipped.push(i);
            }
        }
    }
    LowerSequence {
        magnitudes,
        accepted,
        skipped,
        min_pivot: ch.min_pivot(),
        max_pivot: ch.max_pivot(),
    }
}

/// Nested finite-sample lower bounds for the magnitude of `p`.
pub fn magnitude_lower_sequence(p: &Polytope, budget: usize, scheme: SampleScheme, seed: u64) -> Result<Vec<f64>> {
    Ok(magnitude_lower_sequence_detailed(p, budget, scheme, seed)?.magnitudes)
}

pub fn magnitude_lower_sequence_detailed(
    p: &Polytope,
    budget: usize,
    scheme: SampleScheme,
    seed: u64,
) -> Result<LowerSequence> {
    let cloud = sample_polytope(p, scheme, budget, seed)?;
    Ok(nested_magnitudes(&cloud))
}
