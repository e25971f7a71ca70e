//! Inequalities relating l1 intrinsic volumes, diameter and magnitude, and
//! the cube-dilation volume identity `Vol_N(P + [0,1]^N) = Σ_k V'_k(P)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hull::Hull;
use super::intrinsic::{detect_box, intrinsic_volumes, IntrinsicVolumeVector};
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::numeric::{factorial, pairwise_sum};

/// `((j+k)! V'_{j+k}, (j! V'_j)(k! V'_k))`.
pub fn v1_concavity_check(p: &Polytope, j: usize, k: usize) -> Result<(f64, f64)> {
    if j + k > p.dim() {
        return Err(Error::validation(format!(
            "j + k = {} exceeds the ambient dimension {}",
            j + k,
            p.dim()
        )));
    }
    Ok(concavity_sides(&intrinsic_volumes(p)?, j, k))
}

pub fn concavity_sides(iv: &IntrinsicVolumeVector, j: usize, k: usize) -> (f64, f64) {
    let lhs = factorial(j + k) * iv.get(j + k);
    let rhs = factorial(j) * iv.get(j) * factorial(k) * iv.get(k);
    (lhs, rhs)
}

/// `(V'_k, V'_1^k / k!)` for `k = 0..=N`.
pub fn mcmullen_bound_check(p: &Polytope) -> Result<Vec<(f64, f64)>> {
    Ok(mcmullen_pairs(&intrinsic_volumes(p)?))
}

pub fn mcmullen_pairs(iv: &IntrinsicVolumeVector) -> Vec<(f64, f64)> {
    let v1 = iv.get(1);
    (0..iv.values.len())
        .map(|k| (iv.get(k), v1.powi(k as i32) / factorial(k)))
        .collect()
}

/// `exp(V'_1(P / 2)) = exp(V'_1(P) / 2)`, an upper bound on the magnitude.
pub fn exp_magnitude_bound(p: &Polytope) -> Result<f64> {
    Ok((intrinsic_volumes(p)?.get(1) / 2.0).exp())
}

/// `V'_1(P) = Σ_i (max_i - min_i)`, the total coordinate extent. This is
/// the degree-one term without going through projections.
pub fn first_intrinsic_volume(p: &Polytope) -> f64 {
    (0..p.dim())
        .map(|j| {
            let (lo, hi) = p
                .vertices()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[j]), hi.max(v[j])));
            hi - lo
        })
        .sum()
}

/// `(V'_1(P), 2 (m - 1) diam_1(P))` with `m` the number of hull vertices.
pub fn polytope_v1_diam_bound(p: &Polytope) -> (f64, f64) {
    let m = p.hull_vertex_count() as f64;
    (first_intrinsic_volume(p), 2.0 * (m - 1.0) * p.diameter_l1())
}

/// `exp((m - 1) diam_1(P))` with `m` the number of hull vertices.
pub fn magnitude_diam_bound(p: &Polytope) -> f64 {
    ((p.hull_vertex_count() as f64 - 1.0) * p.diameter_l1()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum WillsMethod {
    /// Box fast path if applicable, otherwise the exact hull route when
    /// `N <= 8`, otherwise Monte Carlo.
    Auto { samples: usize, seed: u64 },
    /// Exact volume of `conv(vertices + cube corners)`.
    Hull,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WillsRoute {
    BoxProduct,
    Hull,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WillsCheck {
    /// `Vol_N(P + [0,1]^N)`.
    pub dilated_volume: f64,
    /// Standard error of `dilated_volume` when estimated.
    pub stderr: Option<f64>,
    pub route: WillsRoute,
    /// `Σ_k V'_k(P)`.
    pub intrinsic_sum: f64,
}

fn minkowski_with_cube(p: &Polytope) -> Vec<Vec<f64>> {
    let n = p.dim();
    let verts = p.hull_vertices();
    let mut pts = Vec::with_capacity(verts.len() << n);
    for v in &verts {
        for mask in 0..1u64 << n {
            pts.push(
                v.iter()
                    .enumerate()
                    .map(|(j, x)| if mask & (1 << j) != 0 { x + 1.0 } else { *x })
                    .collect(),
            );
        }
    }
    pts
}

/// Both sides of the cube-dilation identity.
pub fn wills_identity_check(p: &Polytope, method: WillsMethod) -> Result<WillsCheck> {
    let n = p.dim();
    let iv = intrinsic_volumes(p)?;
    let intrinsic_sum = pairwise_sum(&iv.values);
    if n == 0 {
        return Ok(WillsCheck {
            dilated_volume: 1.0,
            stderr: None,
            route: WillsRoute::BoxProduct,
            intrinsic_sum,
        });
    }
    let route = match method {
        WillsMethod::Auto { samples, seed } => {
            if let Some(sides) = detect_box(p) {
                return Ok(WillsCheck {
                    dilated_volume: sides.iter().map(|a| a + 1.0).product(),
                    stderr: None,
                    route: WillsRoute::BoxProduct,
                    intrinsic_sum,
                });
            }
            if n <= 8 {
                WillsMethod::Hull
            } else {
                WillsMethod::MonteCarlo { samples, seed }
            }
        }
        other => other,
    };
    let hull = Hull::new(&minkowski_with_cube(p))
        .ok_or_else(|| Error::validation("dilated body is degenerate"))?;
    match route {
        WillsMethod::MonteCarlo { samples, seed } => {
            let (vol, err) = monte_carlo_volume(&hull, samples, seed);
            Ok(WillsCheck {
                dilated_volume: vol,
                stderr: Some(err),
                route: WillsRoute::MonteCarlo,
                intrinsic_sum,
            })
        }
        _ => Ok(WillsCheck {
            dilated_volume: hull.volume(),
            stderr: None,
            route: WillsRoute::Hull,
            intrinsic_sum,
        }),
    }
}

/// Hit-or-miss estimate over the bounding box, using the hull's facet
/// inequalities for membership.
fn monte_carlo_volume(hull: &Hull, samples: usize, seed: u64) -> (f64, f64) {
    let d = hull.dim();
    let (mut lo, mut hi) = (vec![f64::INFINITY; d], vec![f64::NEG_INFINITY; d]);
    for p in hull.points() {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..d {
            x[j] = rng.random_range(lo[j]..hi[j]);
        }
        if hull.contains(&x, 0.0) {
            hits += 1;
        }
    }
    let s = samples as f64;
    let frac = hits as f64 / s;
    (box_vol * frac, box_vol * (frac * (1.0 - frac) / s).sqrt())
}
