//! Finite metric spaces and their magnitude.

mod cholesky;
mod magnitude;
mod space;

pub use cholesky::IncrementalCholesky;
pub use magnitude::{
    is_positive_definite, magnitude_finite, negative_type_probe, similarity_matrix, ConditionWarning,
    PdReport, ScaleReport, SimilarityMatrix, Weighting, CONDITION_WARN_RATIO, PD_TOL,
};
pub use space::{diagonal_embedding, l1_product, FiniteMetricSpace, Metric, PointCloud, DEDUP_TOL};

/// Scales every distance by `t`.
pub fn scale_space(space: &FiniteMetricSpace, t: f64) -> crate::Result<FiniteMetricSpace> {
    space.scale(t)
}

/// Finite metric subspace of a point cloud.
pub fn subspace_from_cloud(cloud: &PointCloud, indices: &[usize]) -> crate::Result<FiniteMetricSpace> {
    cloud.subspace(indices)
}
