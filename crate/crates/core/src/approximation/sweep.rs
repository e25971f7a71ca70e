//! Experiment tables: finite-sample lower bound, closed-form value and an
//! analytic upper bound per parameter value.

use rayon::prelude::*;
use serde::Serialize;

use super::lower::nested_magnitudes;
use super::sampling::{sample_polytope, SampleScheme};
use super::sequence::{SequenceSpec, Summability};
use crate::error::{Error, Result};
use crate::geometry::{
    convex_magnitude_from, coordinate_simplex_intrinsic_volumes, intrinsic_volumes_with, IvOptions, Polytope,
};
use crate::metric::{Metric, PointCloud, CONDITION_WARN_RATIO};

pub const CSV_HEADER: &str = "param,n_points,sample_magnitude,formula_value,upper_bound,flag";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub n_points: usize,
    pub sample_magnitude: f64,
    pub formula_value: f64,
    pub upper_bound: f64,
    /// `ok`, or `;`-joined markers `ill_conditioned` / `skipped_points`.
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_float(r.param),
                r.n_points,
                fmt_float(r.sample_magnitude),
                fmt_float(r.formula_value),
                fmt_float(r.upper_bound),
                r.flag
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Rows violating `1 <= sample <= formula <= upper + tol`.
    pub fn sandwich_violations(&self, tol: f64) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                !(1.0 - tol <= r.sample_magnitude
                    && r.sample_magnitude <= r.formula_value + tol
                    && r.formula_value <= r.upper_bound + tol)
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn row_flag(ratio: f64, skipped: usize) -> String {
    let mut parts = Vec::new();
    if ratio < CONDITION_WARN_RATIO {
        parts.push("ill_conditioned");
    }
    if skipped > 0 {
        parts.push("skipped_points");
    }
    if parts.is_empty() {
        "ok".to_owned()
    } else {
        parts.join(";")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub budget: usize,
    pub scheme: SampleScheme,
    pub seed: u64,
    pub iv: IvOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            budget: 256,
            scheme: SampleScheme::FarthestPoint,
            seed: 0,
            iv: IvOptions::default(),
        }
    }
}

/// For each `t`: a finite-sample magnitude of `tP`, the convex formula for
/// `tP`, and `exp((m - 1) t diam_1(P))`.
pub fn one_point_sweep(p: &Polytope, t_list: &[f64], opts: &SweepOptions) -> Result<SweepTable> {
    if let Some(t) = t_list.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::validation(format!("scales must be positive, got {t}")));
    }
    let cloud = sample_polytope(p, opts.scheme, opts.budget, opts.seed)?;
    let iv = intrinsic_volumes_with(p, &opts.iv)?;
    let full = p.is_full_dimensional();
    let m = p.hull_vertex_count() as f64;
    let diam = p.diameter_l1();
    let rows = t_list
        .par_iter()
        .map(|&t| {
            let seq = nested_magnitudes(&cloud.scaled(t)?);
            let formula = convex_magnitude_from(&iv.scaled(t), full).value;
            Ok(SweepRow {
                param: t,
                n_points: seq.accepted.len(),
                sample_magnitude: seq.last(),
                formula_value: formula,
                upper_bound: ((m - 1.0) * t * diam).exp(),
                flag: row_flag(seq.pivot_ratio(), seq.skipped.len()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

/// First `N` at which `½ Σ_{i<=N} a_i` reaches a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub threshold: f64,
    /// `None` if not reached within the search limit.
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub summability: Summability,
    /// `upper_bound` is `exp(½ Σ a_i)`; `formula_value` is the closed form.
    pub table: SweepTable,
    /// `½ Σ_{i<=N} a_i` per row.
    pub half_sums: Vec<f64>,
    pub crossings: Vec<Crossing>,
}

impl DivergenceReport {
    /// The sweep CSV with a trailing `half_sum` column.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER},half_sum\n");
        for (line, h) in self.table.to_csv().lines().skip(1).zip(&self.half_sums) {
            out.push_str(line);
            out.push(',');
            out.push_str(&fmt_float(*h));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const DEFAULT_THRESHOLDS: [f64; 3] = [2.0, 3.0, 5.0];

/// Search limit for threshold crossings.
pub const CROSSING_SEARCH_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceOptions {
    /// Extra random interior points added to the vertex sample.
    pub interior_samples: usize,
    pub seed: u64,
    pub thresholds: Vec<f64>,
}

impl Default for DivergenceOptions {
    fn default() -> Self {
        Self {
            interior_samples: 0,
            seed: 0,
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
        }
    }
}

/// Truncations `X_N = conv{0, a_1 e_1, ..., a_N e_N}` for each `N`.
pub fn divergence_experiment(
    spec: &SequenceSpec,
    n_list: &[usize],
    opts: &DivergenceOptions,
) -> Result<DivergenceReport> {
    spec.validate()?;
    if n_list.contains(&0) {
        return Err(Error::validation("truncation lengths must be at least 1"));
    }
    let rows = n_list
        .par_iter()
        .map(|&n| divergence_row(spec, n, opts))
        .collect::<Result<Vec<_>>>()?;
    let (rows, half_sums) = rows.into_iter().unzip();
    Ok(DivergenceReport {
        summability: spec.summability(),
        table: SweepTable { rows },
        half_sums,
        crossings: opts.thresholds.iter().map(|&m| threshold_crossing(spec, m)).collect(),
    })
}

fn divergence_row(spec: &SequenceSpec, n: usize, opts: &DivergenceOptions) -> Result<(SweepRow, f64)> {
    let a = spec.terms(n)?;
    let half_sum = 0.5 * a.iter().sum::<f64>();
    let formula = convex_magnitude_from(&coordinate_simplex_intrinsic_volumes(&a)?, true).value;

    let mut points = vec![vec![0.0; n]];
    for (i, &ai) in a.iter().enumerate() {
        let mut v = vec![0.0; n];
        v[i] = ai;
        points.push(v);
    }
    if opts.interior_samples > 0 {
        let simplex = Polytope::new(points.clone())?;
        let extra = sample_polytope(&simplex, SampleScheme::RandomHull, opts.interior_samples, opts.seed)?;
        points.extend(extra.points().iter().cloned());
    }
    let cloud = PointCloud::new_dedup(points, Metric::L1)?;
    let seq = nested_magnitudes(&cloud);
    Ok((
        SweepRow {
            param: n as f64,
            n_points: seq.accepted.len(),
            sample_magnitude: seq.last(),
            formula_value: formula,
            upper_bound: half_sum.exp(),
            flag: row_flag(seq.pivot_ratio(), seq.skipped.len()),
        },
        half_sum,
    ))
}

/// First `N` with `½ Σ_{i<=N} a_i >= threshold`.
pub fn threshold_crossing(spec: &SequenceSpec, threshold: f64) -> Crossing {
    let limit = spec.max_len().unwrap_or(CROSSING_SEARCH_LIMIT);
    let mut sum = 0.0;
    for i in 1..=limit {
        let Some(a) = spec.term(i) else { break };
        sum += a;
        if 0.5 * sum >= threshold {
            return Crossing { threshold, n: Some(i) };
        }
        if a < 1e-300 {
            break;
        }
    }
    Crossing { threshold, n: None }
}
