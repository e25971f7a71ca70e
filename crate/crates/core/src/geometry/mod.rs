//! Polytopes in l1^N: projections, volumes, l1 intrinsic volumes and the
//! magnitude formula for convex bodies.

mod bounds;
mod hull;
mod intrinsic;
mod linalg;
mod polytope;

pub use bounds::{
    concavity_sides, exp_magnitude_bound, first_intrinsic_volume, magnitude_diam_bound, mcmullen_bound_check,
    mcmullen_pairs, polytope_v1_diam_bound, v1_concavity_check, wills_identity_check, WillsCheck, WillsMethod,
    WillsRoute,
};
pub use hull::Hull;
pub use intrinsic::{
    box_intrinsic_volumes, box_magnitude, convex_magnitude_from, convex_magnitude_l1, convex_magnitude_l1_with,
    coordinate_simplex_intrinsic_volumes, detect_box, detect_coordinate_simplex, fast_path, intrinsic_volumes,
    intrinsic_volumes_enumerated, intrinsic_volumes_monte_carlo, intrinsic_volumes_with, ConvexMagnitudeResult,
    IntrinsicVolumeVector, IvMethod, IvOptions, MonteCarloOptions, DEFAULT_ENUMERATION_CAP,
};
pub use polytope::{hull_volume, project, volume, AffineFrame, Polytope};
