//! Seeded random polytopes run through every inequality of the ledger.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lower::nested_magnitudes;
use super::sampling::{sample_polytope, SampleScheme};
use crate::error::Result;
use crate::geometry::{
    concavity_sides, convex_magnitude_from, intrinsic_volumes, magnitude_diam_bound, mcmullen_pairs,
    polytope_v1_diam_bound, Polytope,
};
use crate::metric::{Metric, PointCloud};

pub const CHECK_NAMES: [&str; 6] = [
    "concavity",
    "mcmullen",
    "exp_v1_bound",
    "v1_diameter",
    "magnitude_diameter",
    "sample_below_formula",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub count: usize,
    pub seed: u64,
    pub max_vertices: usize,
    pub max_dim: usize,
    /// Allowed excess, relative to `max(1, |rhs|)`.
    pub tol: f64,
    /// Random interior points added to the vertices for the sample check.
    pub sample_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            count: 100,
            seed: 0,
            max_vertices: 8,
            max_dim: 6,
            tol: 1e-8,
            sample_points: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub polytope: usize,
    pub check: &'static str,
    pub detail: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub polytopes: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<CheckTally>,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

/// The `index`-th polytope of the seeded family: `N` in `1..=max_dim`,
/// `m` in `1..=max_vertices`, coordinates uniform in `[0, s)` with
/// `s` uniform in `[0.2, 2)`.
pub fn random_polytope(seed: u64, index: usize, max_vertices: usize, max_dim: usize) -> Result<Polytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let n = rng.random_range(1..=max_dim);
    let m = rng.random_range(1..=max_vertices);
    let scale = rng.random_range(0.2..2.0);
    let verts = (0..m)
        .map(|_| (0..n).map(|_| scale * rng.random::<f64>()).collect())
        .collect();
    Polytope::new(verts)
}

struct Outcome {
    results: Vec<(usize, bool)>,
    violations: Vec<Violation>,
}

fn check_one(index: usize, cfg: &SuiteConfig) -> Result<Outcome> {
    let p = random_polytope(cfg.seed, index, cfg.max_vertices, cfg.max_dim)?;
    let iv = intrinsic_volumes(&p)?;
    let n = p.dim();
    let mut out = Outcome {
        results: Vec::new(),
        violations: Vec::new(),
    };
    let tol = cfg.tol;
    let mut record = |check: usize, lhs: f64, rhs: f64, detail: String| {
        let ok = lhs <= rhs + tol * rhs.abs().max(1.0);
        out.results.push((check, ok));
        if !ok {
            out.violations.push(Violation {
                polytope: index,
                check: CHECK_NAMES[check],
                detail,
                lhs,
                rhs,
            });
        }
    };

    for j in 0..=n {
        for k in 0..=(n - j) {
            let (lhs, rhs) = concavity_sides(&iv, j, k);
            record(0, lhs, rhs, format!("j={j} k={k}"));
        }
    }
    for (k, (vk, bound)) in mcmullen_pairs(&iv).into_iter().enumerate() {
        record(1, vk, bound, format!("k={k}"));
    }
    let convex = convex_magnitude_from(&iv, p.is_full_dimensional()).value;
    record(2, convex, (iv.get(1) / 2.0).exp(), String::new());
    let (v1, diam_bound) = polytope_v1_diam_bound(&p);
    record(3, v1, diam_bound, format!("m={}", p.hull_vertex_count()));
    record(4, convex, magnitude_diam_bound(&p), String::new());

    let mut pts = p.vertices().to_vec();
    if p.len() > 1 && cfg.sample_points > 0 {
        let extra = sample_polytope(&p, SampleScheme::RandomHull, cfg.sample_points, cfg.seed ^ index as u64)?;
        pts.extend(extra.points().iter().cloned());
    }
    let sample = nested_magnitudes(&PointCloud::new_dedup(pts, Metric::L1)?).last();
    record(5, sample, convex, format!("{} points", p.len() + cfg.sample_points));
    Ok(out)
}

/// Runs every check on `cfg.count` random polytopes.
pub fn inequality_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let outcomes = (0..cfg.count)
        .into_par_iter()
        .map(|i| check_one(i, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut checks: Vec<CheckTally> = CHECK_NAMES
        .iter()
        .map(|&name| CheckTally {
            name,
            passed: 0,
            failed: 0,
        })
        .collect();
    let mut violations = Vec::new();
    for o in outcomes {
        for (c, ok) in o.results {
            if ok {
                checks[c].passed += 1;
            } else {
                checks[c].failed += 1;
            }
        }
        violations.extend(o.violations);
    }
    Ok(SuiteReport {
        polytopes: cfg.count,
        seed: cfg.seed,
        tol: cfg.tol,
        checks,
        violations,
    })
}
