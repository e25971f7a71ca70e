//! Full-dimensional convex hulls by placing triangulation.
//!
//! Points are inserted one at a time. Each insertion cones the new point
//! over every boundary facet it sees strictly from outside, which extends
//! a triangulation of the hull; the volume is the running sum of the new
//! simplices' `|det| / d!`. The boundary facets double as an
//! H-representation for membership queries.

use std::collections::BTreeMap;

use super::linalg::{determinant, dot, normal_to, norm, orthogonalize};
use crate::numeric::factorial;

/// Relative tolerance (against the point set's extent) for visibility and
/// coplanarity decisions.
const PLANE_TOL: f64 = 1e-11;

#[derive(Debug, Clone)]
struct Facet {
    /// Sorted point indices, `d` of them.
    vertices: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

impl Facet {
    fn height(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

/// Convex hull of a point set that affinely spans `R^d`, `d >= 1`.
#[derive(Debug, Clone)]
pub struct Hull {
    dim: usize,
    points: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    volume: f64,
    tol: f64,
}

impl Hull {
    /// Returns `None` when the points do not span `R^d`.
    pub fn new(points: &[Vec<f64>]) -> Option<Self> {
        let dim = points.first()?.len();
        if dim == 0 {
            return None;
        }
        let extent = extent(points);
        if extent == 0.0 {
            return None;
        }
        let tol = PLANE_TOL * extent;
        if dim == 1 {
            return Some(Self::interval(points, tol));
        }

        let simplex = initial_simplex(points, dim, tol)?;
        let interior: Vec<f64> = (0..dim)
            .map(|j| simplex.iter().map(|&i| points[i][j]).sum::<f64>() / (dim + 1) as f64)
            .collect();

        let mut hull = Self {
            dim,
            points: points.to_vec(),
            facets: Vec::new(),
            volume: 0.0,
            tol,
        };
        hull.volume = hull.simplex_volume(&simplex);
        for skip in 0..=dim {
            let mut verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &i)| i)
                .collect();
            verts.sort_unstable();
            let facet = hull.make_facet(verts, &interior);
            hull.facets.push(facet);
        }

        for idx in 0..points.len() {
            if !simplex.contains(&idx) {
                hull.insert(idx, &interior);
            }
        }
        Some(hull)
    }

    fn interval(points: &[Vec<f64>], tol: f64) -> Self {
        let lo = (0..points.len())
            .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
            .unwrap();
        let hi = (0..points.len())
            .max_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(b.cmp(&a)))
            .unwrap();
        let (a, b) = (points[lo][0], points[hi][0]);
        Self {
            dim: 1,
            points: points.to_vec(),
            facets: vec![
                Facet {
                    vertices: vec![lo],
                    normal: vec![-1.0],
                    offset: -a,
                },
                Facet {
                    vertices: vec![hi],
                    normal: vec![1.0],
                    offset: b,
                },
            ],
            volume: b - a,
            tol,
        }
    }

    fn simplex_volume(&self, idx: &[usize]) -> f64 {
        let d = self.dim;
        let apex = &self.points[idx[0]];
        let mut m = Vec::with_capacity(d * d);
        for &i in &idx[1..] {
            m.extend(self.points[i].iter().zip(apex).map(|(x, y)| x - y));
        }
        determinant(m, d).abs() / factorial(d)
    }

    fn make_facet(&self, vertices: Vec<usize>, interior: &[f64]) -> Facet {
        let base = &self.points[vertices[0]];
        let edges: Vec<Vec<f64>> = vertices[1..]
            .iter()
            .map(|&i| self.points[i].iter().zip(base).map(|(x, y)| x - y).collect())
            .collect();
        let mut normal = normal_to(&edges, self.dim);
        let mut offset = dot(&normal, base);
        if dot(&normal, interior) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Facet {
            vertices,
            normal,
            offset,
        }
    }

    fn insert(&mut self, idx: usize, interior: &[f64]) {
        let p = self.points[idx].clone();
        let (visible, hidden): (Vec<Facet>, Vec<Facet>) = std::mem::take(&mut self.facets)
            .into_iter()
            .partition(|f| f.height(&p) > self.tol);
        self.facets = hidden;
        if visible.is_empty() {
            return;
        }

        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in &visible {
            let mut cone = f.vertices.clone();
            cone.push(idx);
            self.volume += self.simplex_volume(&cone);
            for skip in 0..f.vertices.len() {
                let ridge: Vec<usize> = f
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        for (ridge, count) in ridges {
            if count == 1 {
                let mut verts = ridge;
                verts.push(idx);
                verts.sort_unstable();
                let facet = self.make_facet(verts, interior);
                self.facets.push(facet);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Whether `x` lies in the hull, allowing `tol` (absolute) slack.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|f| f.height(x) <= tol + self.tol)
    }

    /// Supporting hyperplanes `(unit normal, offset)` of the hull's facets,
    /// with coplanar boundary simplices merged.
    pub fn facet_planes(&self) -> Vec<(Vec<f64>, f64)> {
        let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
        for f in &self.facets {
            let same = planes.iter().any(|(n, b)| {
                (b - f.offset).abs() <= 1e3 * self.tol
                    && n.iter().zip(&f.normal).all(|(x, y)| (x - y).abs() <= 1e-9)
            });
            if !same {
                planes.push((f.normal.clone(), f.offset));
            }
        }
        planes
    }

    /// Indices of the input points that are vertices of the hull: points
    /// whose incident facet normals span `R^d`.
    pub fn extreme_points(&self) -> Vec<usize> {
        let planes = self.facet_planes();
        let touch_tol = 1e3 * self.tol;
        (0..self.points.len())
            .filter(|&i| {
                let p = &self.points[i];
                let normals: Vec<Vec<f64>> = planes
                    .iter()
                    .filter(|(n, b)| (dot(n, p) - b).abs() <= touch_tol)
                    .map(|(n, _)| n.clone())
                    .collect();
                spans(&normals, self.dim)
            })
            .collect()
    }
}

fn spans(vectors: &[Vec<f64>], d: usize) -> bool {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for v in vectors {
        let mut u = v.clone();
        orthogonalize(&mut u, &basis);
        let n = norm(&u);
        if n > 1e-7 {
            u.iter_mut().for_each(|x| *x /= n);
            basis.push(u);
            if basis.len() == d {
                return true;
            }
        }
    }
    basis.len() == d
}

/// Largest coordinate range of the point set.
fn extent(points: &[Vec<f64>]) -> f64 {
    let d = points[0].len();
    (0..d)
        .map(|j| {
            let (lo, hi) = points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Greedy choice of `d + 1` affinely independent points: start from the
/// first point, then repeatedly take the point farthest from the affine span
/// of those chosen so far.
fn initial_simplex(points: &[Vec<f64>], d: usize, tol: f64) -> Option<Vec<usize>> {
    let origin = &points[0];
    let mut chosen = vec![0];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for (i, p) in points.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut r: Vec<f64> = p.iter().zip(origin).map(|(x, y)| x - y).collect();
            orthogonalize(&mut r, &basis);
            let n = norm(&r);
            if best.as_ref().is_none_or(|(bn, _, _)| n > *bn) {
                best = Some((n, i, r));
            }
        }
        let (n, i, mut r) = best?;
        if n <= tol {
            return None;
        }
        r.iter_mut().for_each(|x| *x /= n);
        basis.push(r);
        chosen.push(i);
    }
    Some(chosen)
}
