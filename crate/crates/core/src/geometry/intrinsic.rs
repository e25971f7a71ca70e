//! l1 intrinsic volumes: `V'_k(P)` is the sum, over all `k`-element sets of
//! coordinate axes, of the `k`-volume of the projection of `P` onto them.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polytope::{hull_volume, Polytope};
use crate::error::{Error, Result};
use crate::metric::DEDUP_TOL;
use crate::numeric::{binomial, elementary_symmetric, factorial, pairwise_sum};

/// Default largest ambient dimension for exhaustive subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IvMethod {
    Enumeration,
    FastPath,
    MonteCarlo,
}

/// `(V'_0, ..., V'_N)` together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVolumeVector {
    pub values: Vec<f64>,
    pub method: IvMethod,
    /// Per-`k` standard errors, Monte Carlo only.
    pub stderr: Option<Vec<f64>>,
}

impl IntrinsicVolumeVector {
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// Ambient dimension `N` (the vector has `N + 1` entries).
    pub fn dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.method != IvMethod::MonteCarlo
    }

    /// Values for the polytope scaled by `t` (degree-`k` homogeneity).
    pub fn scaled(&self, t: f64) -> Self {
        let mut s = self.clone();
        let mut f = 1.0;
        for (v, e) in s.values.iter_mut().zip(0..) {
            *v *= f;
            if let Some(err) = s.stderr.as_mut() {
                err[e] *= f;
            }
            f *= t;
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    /// Subsets sampled per `k` whenever `C(N, k)` exceeds this count.
    pub samples_per_k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvOptions {
    pub cap: usize,
    pub monte_carlo: Option<MonteCarloOptions>,
}

impl Default for IvOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            monte_carlo: None,
        }
    }
}

/// Intrinsic volumes with the default cap and no Monte Carlo fallback.
pub fn intrinsic_volumes(p: &Polytope) -> Result<IntrinsicVolumeVector> {
    intrinsic_volumes_with(p, &IvOptions::default())
}

/// Enumeration up to `opts.cap`; above it the box and coordinate-simplex
/// closed forms, then Monte Carlo subset sampling if enabled.
pub fn intrinsic_volumes_with(p: &Polytope, opts: &IvOptions) -> Result<IntrinsicVolumeVector> {
    if p.dim() <= opts.cap {
        return Ok(intrinsic_volumes_enumerated(p));
    }
    if let Some(iv) = fast_path(p) {
        return Ok(iv);
    }
    match opts.monte_carlo {
        Some(mc) => Ok(intrinsic_volumes_monte_carlo(p, mc)),
        None => Err(Error::CapExceeded {
            dimension: p.dim(),
            cap: opts.cap,
        }),
    }
}

/// Closed form for boxes and coordinate simplices, if `p` is one.
pub fn fast_path(p: &Polytope) -> Option<IntrinsicVolumeVector> {
    if let Some(sides) = detect_box(p) {
        return Some(box_intrinsic_volumes(&sides));
    }
    detect_coordinate_simplex(p).map(|legs| simplex_from_legs(&legs))
}

fn projection_volume(p: &Polytope, coords: &[usize]) -> f64 {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(p.len());
    for v in p.vertices() {
        let q: Vec<f64> = coords.iter().map(|&c| v[c]).collect();
        if !pts
            .iter()
            .any(|r| r.iter().zip(&q).all(|(a, b)| (a - b).abs() <= DEDUP_TOL))
        {
            pts.push(q);
        }
    }
    hull_volume(&pts)
}

/// Exhaustive sum over all `2^N` coordinate subsets, no cap applied.
///
/// Subsets are visited in lexicographic order within each `k` and the
/// per-`k` sums use pairwise summation, so the result does not depend on
/// how rayon splits the work.
pub fn intrinsic_volumes_enumerated(p: &Polytope) -> IntrinsicVolumeVector {
    let n = p.dim();
    let rank = p.affine_dimension();
    let mut values = vec![0.0; n + 1];
    values[0] = 1.0;
    for (k, slot) in values.iter_mut().enumerate().skip(1).take(rank) {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let vols: Vec<f64> = subsets
            .par_iter()
            .map(|s| projection_volume(p, s))
            .collect();
        *slot = pairwise_sum(&vols);
    }
    IntrinsicVolumeVector {
        values,
        method: IvMethod::Enumeration,
        stderr: None,
    }
}

/// Unbiased estimate of each `V'_k` from uniformly sampled coordinate
/// subsets. Levels with at most `samples_per_k` subsets are enumerated.
pub fn intrinsic_volumes_monte_carlo(p: &Polytope, opts: MonteCarloOptions) -> IntrinsicVolumeVector {
    let n = p.dim();
    let rank = p.affine_dimension();
    let mut values = vec![0.0; n + 1];
    let mut stderr = vec![0.0; n + 1];
    values[0] = 1.0;
    for k in 1..=rank {
        let total = binomial(n, k);
        if total <= opts.samples_per_k as f64 {
            let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
            let vols: Vec<f64> = subsets.par_iter().map(|s| projection_volume(p, s)).collect();
            values[k] = pairwise_sum(&vols);
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        let subsets: Vec<Vec<usize>> = (0..opts.samples_per_k)
            .map(|_| sample(&mut rng, n, k).into_iter().sorted().collect())
            .collect();
        let vols: Vec<f64> = subsets.par_iter().map(|s| projection_volume(p, s)).collect();
        let s = vols.len() as f64;
        let mean = pairwise_sum(&vols) / s;
        let var = vols.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (s - 1.0).max(1.0);
        values[k] = total * mean;
        stderr[k] = total * (var / s).sqrt();
    }
    IntrinsicVolumeVector {
        values,
        method: IvMethod::MonteCarlo,
        stderr: Some(stderr),
    }
}

/// `V'_k = e_k(a)` for the box `Π [0, a_i]`.
pub fn box_intrinsic_volumes(sides: &[f64]) -> IntrinsicVolumeVector {
    IntrinsicVolumeVector {
        values: elementary_symmetric(sides),
        method: IvMethod::FastPath,
        stderr: None,
    }
}

/// `V'_k = e_k(a) / k!` for `conv{0, a_1 e_1, ..., a_N e_N}`.
pub fn coordinate_simplex_intrinsic_volumes(a: &[f64]) -> Result<IntrinsicVolumeVector> {
    if let Some(bad) = a.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::validation(format!("simplex legs must be positive, got {bad}")));
    }
    Ok(simplex_from_legs(a))
}

fn simplex_from_legs(legs: &[f64]) -> IntrinsicVolumeVector {
    let values = elementary_symmetric(legs)
        .into_iter()
        .enumerate()
        .map(|(k, e)| e / factorial(k))
        .collect();
    IntrinsicVolumeVector {
        values,
        method: IvMethod::FastPath,
        stderr: None,
    }
}

fn distinct_values(p: &Polytope, j: usize) -> Vec<f64> {
    let mut vals: Vec<f64> = Vec::new();
    for v in p.vertices() {
        if !vals.iter().any(|x| (x - v[j]).abs() <= DEDUP_TOL) {
            vals.push(v[j]);
        }
    }
    vals
}

/// Side lengths if the vertex list is exactly the corner set of an
/// axis-parallel box (sides may be zero).
pub fn detect_box(p: &Polytope) -> Option<Vec<f64>> {
    let mut corners: usize = 1;
    let mut sides = Vec::with_capacity(p.dim());
    for j in 0..p.dim() {
        let vals = distinct_values(p, j);
        match vals.len() {
            1 => sides.push(0.0),
            2 => {
                sides.push((vals[1] - vals[0]).abs());
                corners = corners.checked_mul(2)?;
            }
            _ => return None,
        }
    }
    (corners == p.len()).then_some(sides)
}

/// Leg lengths `|a_i|` (zero for unused axes) if the vertex list is
/// `{c} ∪ {c + a_i e_i}` with distinct axes.
pub fn detect_coordinate_simplex(p: &Polytope) -> Option<Vec<f64>> {
    let n = p.dim();
    let verts = p.vertices();
    if verts.len() > n + 1 {
        return None;
    }
    'base: for (b, base) in verts.iter().enumerate() {
        let mut legs = vec![0.0; n];
        let mut used = vec![false; n];
        for (i, v) in verts.iter().enumerate() {
            if i == b {
                continue;
            }
            let moved: Vec<usize> = (0..n).filter(|&j| (v[j] - base[j]).abs() > DEDUP_TOL).collect();
            if moved.len() != 1 || used[moved[0]] {
                continue 'base;
            }
            used[moved[0]] = true;
            legs[moved[0]] = (v[moved[0]] - base[moved[0]]).abs();
        }
        return Some(legs);
    }
    None
}

/// Upper bound (and, for full-dimensional bodies, the value) of the
/// magnitude of a convex body in l1^N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexMagnitudeResult {
    pub value: f64,
    /// True iff the body has nonempty interior in `R^N`.
    pub exact: bool,
    /// `V'_i / 2^i` for `i = 0..=N`.
    pub terms: Vec<f64>,
}

pub fn convex_magnitude_l1(p: &Polytope) -> Result<ConvexMagnitudeResult> {
    convex_magnitude_l1_with(p, &IvOptions::default())
}

pub fn convex_magnitude_l1_with(p: &Polytope, opts: &IvOptions) -> Result<ConvexMagnitudeResult> {
    let iv = intrinsic_volumes_with(p, opts)?;
    Ok(convex_magnitude_from(&iv, p.is_full_dimensional()))
}

/// `Σ_i V'_i / 2^i` from precomputed intrinsic volumes.
pub fn convex_magnitude_from(iv: &IntrinsicVolumeVector, full_dimensional: bool) -> ConvexMagnitudeResult {
    let mut scale = 1.0;
    let terms: Vec<f64> = iv
        .values
        .iter()
        .map(|v| {
            let t = v * scale;
            scale *= 0.5;
            t
        })
        .collect();
    ConvexMagnitudeResult {
        value: terms.iter().sum(),
        exact: full_dimensional,
        terms,
    }
}

/// Magnitude of the box `Π [0, a_i]` in l1^N: `Π (1 + a_i / 2)`.
pub fn box_magnitude(sides: &[f64]) -> f64 {
    sides.iter().map(|a| 1.0 + a / 2.0).product()
}
