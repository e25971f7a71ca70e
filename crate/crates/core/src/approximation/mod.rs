//! Finite-sample approximation of compact-set magnitude and the experiments
//! built on it.

mod lower;
mod sampling;
mod sequence;
mod suite;
mod sweep;

pub use lower::{magnitude_lower_sequence, magnitude_lower_sequence_detailed, nested_magnitudes, LowerSequence};
pub use sampling::{farthest_point_order, sample_polytope, SampleScheme};
pub use sequence::{SequenceSpec, Summability};
pub use suite::{
    inequality_suite, random_polytope, CheckTally, SuiteConfig, SuiteReport, Violation, CHECK_NAMES,
};
pub use sweep::{
    divergence_experiment, fmt_float, one_point_sweep, threshold_crossing, Crossing, DivergenceOptions,
    DivergenceReport, SweepOptions, SweepRow, SweepTable, CROSSING_SEARCH_LIMIT, CSV_HEADER, DEFAULT_THRESHOLDS,
};
