//! Finite samples of a polytope, ordered so every prefix is a valid nested
//! sample.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::metric::{Metric, PointCloud};
use crate::numeric::{binomial, l1_distance};

/// Largest number of barycentric compositions generated for one lattice level.
const MAX_LATTICE_COMPOSITIONS: f64 = 250_000.0;

/// Candidate pool size for farthest-point selection, as a multiple of `n`.
const FPS_POOL_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SampleScheme {
    /// Dyadic barycentric lattice over the hull vertices, coarse levels first.
    VertexGrid,
    /// Greedy max-min (l1) selection from the lattice, starting at the first
    /// hull vertex; ties go to the lowest candidate index.
    #[default]
    FarthestPoint,
    /// Seeded uniform-Dirichlet convex combinations of the hull vertices.
    RandomHull,
}

impl std::str::FromStr for SampleScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex_grid" => Ok(Self::VertexGrid),
            "farthest_point" => Ok(Self::FarthestPoint),
            "random_hull" => Ok(Self::RandomHull),
            other => Err(Error::validation(format!(
                "unknown scheme '{other}' (expected vertex_grid, farthest_point or random_hull)"
            ))),
        }
    }
}

impl std::fmt::Display for SampleScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::VertexGrid => "vertex_grid",
            Self::FarthestPoint => "farthest_point",
            Self::RandomHull => "random_hull",
        })
    }
}

/// `n` distinct points of `p` (fewer only if `p` is a single point).
pub fn sample_polytope(p: &Polytope, scheme: SampleScheme, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::validation("sample size must be at least 1"));
    }
    let vertices = p.hull_vertices();
    let points = match scheme {
        SampleScheme::VertexGrid => {
            let mut pool = Pool::new();
            fill_lattice(&mut pool, &vertices, n);
            fill_random(&mut pool, &vertices, n, seed);
            pool.points.truncate(n);
            pool.points
        }
        SampleScheme::FarthestPoint => {
            let target = n.saturating_mul(FPS_POOL_FACTOR);
            let mut pool = Pool::new();
            fill_lattice(&mut pool, &vertices, target);
            fill_random(&mut pool, &vertices, target, seed);
            let order = farthest_point_order(&pool.points, n);
            order.into_iter().map(|i| pool.points[i].clone()).collect()
        }
        SampleScheme::RandomHull => {
            let mut pool = Pool::new();
            fill_random(&mut pool, &vertices, n, seed);
            pool.points
        }
    };
    // the pool's quantized keys can in principle straddle a rounding boundary
    PointCloud::new_dedup(points, Metric::L1)
}

/// Greedy farthest-point ordering in the l1 metric, starting at index 0.
pub fn farthest_point_order(points: &[Vec<f64>], n: usize) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let n = n.min(points.len());
    let mut order = vec![0];
    let mut nearest: Vec<f64> = points.iter().map(|q| l1_distance(q, &points[0])).collect();
    while order.len() < n {
        let mut best = 0;
        for i in 1..points.len() {
            if nearest[i] > nearest[best] {
                best = i;
            }
        }
        if nearest[best] <= 0.0 {
            break;
        }
        order.push(best);
        for (i, q) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(l1_distance(q, &points[best]));
        }
    }
    order
}

/// Distinct points in insertion order.
struct Pool {
    points: Vec<Vec<f64>>,
    keys: HashSet<Vec<i64>>,
}

impl Pool {
    fn new() -> Self {
        Self {
            points: Vec::new(),
            keys: HashSet::new(),
        }
    }

    fn key(p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x * 1e9).round() as i64).collect()
    }

    fn push(&mut self, p: Vec<f64>) -> bool {
        if !self.keys.insert(Self::key(&p)) {
            return false;
        }
        self.points.push(p);
        true
    }
}

/// Adds lattice levels `q = 1, 2, 4, ...` until the pool holds `target`
/// points or the next level would be too large.
fn fill_lattice(pool: &mut Pool, vertices: &[Vec<f64>], target: usize) {
    let m = vertices.len();
    let mut q: usize = 1;
    while pool.points.len() < target {
        if binomial(q + m - 1, m - 1) > MAX_LATTICE_COMPOSITIONS {
            break;
        }
        let before = pool.points.len();
        for_each_composition(q, m, &mut |c| {
            let p = combine(vertices, c.iter().map(|&k| k as f64 / q as f64));
            pool.push(p);
        });
        if m == 1 || (pool.points.len() == before && q > 1) {
            break;
        }
        q *= 2;
    }
}

/// Tops the pool up to `target` with random convex combinations.
fn fill_random(pool: &mut Pool, vertices: &[Vec<f64>], target: usize, seed: u64) {
    if vertices.len() == 1 {
        if pool.points.is_empty() {
            pool.push(vertices[0].clone());
        }
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;
    while pool.points.len() < target && attempts < 64 * target.max(1) {
        attempts += 1;
        let w: Vec<f64> = (0..vertices.len()).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = w.iter().sum();
        pool.push(combine(vertices, w.iter().map(|x| x / total)));
    }
}

fn combine(vertices: &[Vec<f64>], weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut p = vec![0.0; vertices[0].len()];
    for (v, w) in vertices.iter().zip(weights) {
        if w != 0.0 {
            p.iter_mut().zip(v).for_each(|(x, y)| *x += w * y);
        }
    }
    p
}

/// Visits compositions of `q` into `m` nonnegative parts in lexicographic
/// order (descending first part).
fn for_each_composition(q: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rest: usize, slot: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slot + 1 == parts.len() {
            parts[slot] = rest;
            f(parts);
            return;
        }
        for k in (0..=rest).rev() {
            parts[slot] = k;
            rec(rest - k, slot + 1, parts, f);
        }
    }
    let mut parts = vec![0; m];
    rec(q, 0, &mut parts, f);
}
