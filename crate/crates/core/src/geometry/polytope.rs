use std::sync::OnceLock;

use super::hull::Hull;
use super::linalg::{dot, principal_directions};
use crate::error::{Error, Result};
use crate::metric::{Metric, PointCloud, DEDUP_TOL};
use crate::numeric::{l1_distance, max_abs_diff};

/// Convex hull of a finite point list in `R^N`, measured with the l1 metric.
///
/// The list may contain non-extreme points; they are kept (so input order
/// is preserved) and reported by [`Polytope::non_extreme_indices`].
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    frame: OnceLock<AffineFrame>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

/// Orthonormal coordinates on the affine hull of a point set.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
    /// Input points expressed in `basis` coordinates.
    pub local: Vec<Vec<f64>>,
    /// Hull of `local`, built on first use; `None` for a single point.
    hull: OnceLock<Option<Hull>>,
}

impl AffineFrame {
    fn new(points: &[Vec<f64>]) -> Self {
        let origin = points[0].clone();
        let diffs: Vec<Vec<f64>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(x, o)| x - o).collect())
            .collect();
        let basis = principal_directions(&diffs, origin.len());
        let local: Vec<Vec<f64>> = points
            .iter()
            .map(|p| {
                let diff: Vec<f64> = p.iter().zip(&origin).map(|(x, o)| x - o).collect();
                basis.iter().map(|b| dot(b, &diff)).collect()
            })
            .collect();
        Self {
            origin,
            basis,
            local,
            hull: OnceLock::new(),
        }
    }

    fn hull(&self) -> Option<&Hull> {
        self.hull
            .get_or_init(|| if self.basis.is_empty() { None } else { Hull::new(&self.local) })
            .as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn to_local(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let diff: Vec<f64> = x.iter().zip(&self.origin).map(|(a, o)| a - o).collect();
        let coords: Vec<f64> = self.basis.iter().map(|b| dot(b, &diff)).collect();
        let mut residual = diff;
        for (b, c) in self.basis.iter().zip(&coords) {
            residual.iter_mut().zip(b).for_each(|(r, bj)| *r -= c * bj);
        }
        let off = residual.iter().map(|r| r * r).sum::<f64>().sqrt();
        (coords, off)
    }
}

impl Polytope {
    /// Builds a polytope from its generating points. Points within `1e-12`
    /// of an earlier point are merged into it.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::validation("polytope needs at least one vertex"));
        };
        let dim = first.len();
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::validation(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(format!("vertex {i} has a non-finite coordinate")));
            }
            if !kept.iter().any(|k| max_abs_diff(k, &v) <= DEDUP_TOL) {
                kept.push(v);
            }
        }
        Ok(Self {
            dim,
            vertices: kept,
            frame: OnceLock::new(),
        })
    }

    /// The axis-parallel box `Π [0, a_i]`.
    pub fn unit_box(sides: &[f64]) -> Result<Self> {
        let n = sides.len();
        let verts = (0..1u64 << n)
            .map(|mask| {
                (0..n)
                    .map(|j| if mask & (1 << j) != 0 { sides[j] } else { 0.0 })
                    .collect()
            })
            .collect();
        Self::new(verts)
    }

    /// `conv{0, a_1 e_1, ..., a_N e_N}`.
    pub fn coordinate_simplex(a: &[f64]) -> Result<Self> {
        let n = a.len();
        let mut verts = vec![vec![0.0; n]];
        for (i, &ai) in a.iter().enumerate() {
            let mut v = vec![0.0; n];
            v[i] = ai;
            verts.push(v);
        }
        Self::new(verts)
    }

    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn frame(&self) -> &AffineFrame {
        self.frame.get_or_init(|| AffineFrame::new(&self.vertices))
    }

    pub fn affine_dimension(&self) -> usize {
        self.frame().dimension()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dimension() == self.dim
    }

    /// Indices of the listed points that are vertices of the hull.
    pub fn hull_vertex_indices(&self) -> Vec<usize> {
        let frame = self.frame();
        match frame.hull() {
            None => vec![0],
            Some(h) => h.extreme_points(),
        }
    }

    pub fn non_extreme_indices(&self) -> Vec<usize> {
        let ext = self.hull_vertex_indices();
        (0..self.vertices.len()).filter(|i| !ext.contains(i)).collect()
    }

    pub fn hull_vertex_count(&self) -> usize {
        self.hull_vertex_indices().len()
    }

    pub fn hull_vertices(&self) -> Vec<Vec<f64>> {
        self.hull_vertex_indices()
            .into_iter()
            .map(|i| self.vertices[i].clone())
            .collect()
    }

    /// Diameter in the l1 metric, attained between listed points.
    pub fn diameter_l1(&self) -> f64 {
        let v = &self.vertices;
        let mut diam: f64 = 0.0;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                diam = diam.max(l1_distance(&v[i], &v[j]));
            }
        }
        diam
    }

    /// Hull membership with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let frame = self.frame();
        let (local, off) = frame.to_local(x);
        if off > tol + 1e-9 * self.extent().max(1.0) {
            return false;
        }
        match frame.hull() {
            None => true,
            Some(h) => h.contains(&local, tol),
        }
    }

    fn extent(&self) -> f64 {
        (0..self.dim)
            .map(|j| {
                let (lo, hi) = self
                    .vertices
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::validation(format!("scale factor must be positive, got {t}")));
        }
        Self::new(
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| x * t).collect())
                .collect(),
        )
    }

    /// Permutes coordinate axes: new coordinate `j` is old coordinate `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim || perm.iter().any(|&p| p >= self.dim || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::validation("not a permutation of the coordinates"));
        }
        Self::new(
            self.vertices
                .iter()
                .map(|v| perm.iter().map(|&p| v[p]).collect())
                .collect(),
        )
    }

    /// The listed points as an l1 point cloud.
    pub fn to_cloud(&self) -> Result<PointCloud> {
        PointCloud::new(self.vertices.clone(), Metric::L1)
    }
}

/// Orthogonal projection onto the coordinates in `coords` (0-based,
/// strictly increasing). Coinciding images are merged.
pub fn project(p: &Polytope, coords: &[usize]) -> Result<Polytope> {
    if coords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("projection coordinates must be strictly increasing"));
    }
    if let Some(&bad) = coords.iter().find(|&&c| c >= p.dim()) {
        return Err(Error::validation(format!(
            "projection coordinate {bad} out of range for dimension {}",
            p.dim()
        )));
    }
    Polytope::new(
        p.vertices()
            .iter()
            .map(|v| coords.iter().map(|&c| v[c]).collect())
            .collect(),
    )
}

/// `k`-dimensional volume of the hull of `points` in `R^k`. Zero when the
/// points do not affinely span `R^k`; `1` when `k = 0`.
pub fn hull_volume(points: &[Vec<f64>]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let k = first.len();
    if k == 0 {
        return 1.0;
    }
    if points.len() <= k {
        return 0.0;
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(x, o)| x - o).collect())
        .collect();
    if super::linalg::numerical_rank(&diffs, k) < k {
        return 0.0;
    }
    Hull::new(points).map_or(0.0, |h| h.volume())
}

/// Lebesgue volume of `p` in its ambient dimension.
pub fn volume(p: &Polytope) -> f64 {
    hull_volume(p.vertices())
}
