use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{l1_distance, l2_distance, max_abs_diff};

/// Points closer than this (max-coordinate difference) count as duplicates.
pub const DEDUP_TOL: f64 = 1e-12;

/// A finite metric space given by its full distance matrix (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds a space from a square distance matrix, checking symmetry,
    /// zero diagonal and strictly positive off-diagonal entries.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::validation("metric space must have at least one point"));
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            d.extend(row);
        }
        Self::from_flat(n, d)
    }

    pub fn from_flat(n: usize, d: Vec<f64>) -> Result<Self> {
        if n == 0 || d.len() != n * n {
            return Err(Error::validation("distance matrix must be n x n with n >= 1"));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::validation(format!("d[{i}][{i}] must be 0")));
            }
            for j in 0..n {
                let dij = d[i * n + j];
                if !dij.is_finite() {
                    return Err(Error::validation(format!("d[{i}][{j}] is not finite")));
                }
                if i != j && dij == 0.0 {
                    return Err(Error::DuplicatePoints {
                        first: i.min(j),
                        second: i.max(j),
                    });
                }
                if i != j && dij < 0.0 {
                    return Err(Error::validation(format!(
                        "d[{i}][{j}] = {dij}: distinct points must be at positive distance"
                    )));
                }
                let dji = d[j * n + i];
                if (dij - dji).abs() > 1e-12 * dij.abs().max(1.0) {
                    return Err(Error::validation(format!("d[{i}][{j}] != d[{j}][{i}]")));
                }
            }
        }
        Ok(Self { n, d })
    }

    /// Same as [`FiniteMetricSpace::new`] plus a triangle-inequality check.
    pub fn new_checked(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let space = Self::new(rows)?;
        space.check_triangle_inequality(tol)?;
        Ok(space)
    }

    pub fn check_triangle_inequality(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.get(i, k);
                    let rhs = self.get(i, j) + self.get(j, k);
                    if lhs > rhs + tol * rhs.max(1.0) {
                        return Err(Error::validation(format!(
                            "triangle inequality fails: d({i},{k}) = {lhs} > d({i},{j}) + d({j},{k}) = {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn point() -> Self {
        Self { n: 1, d: vec![0.0] }
    }

    /// Two points at distance `d`.
    pub fn two_point(d: f64) -> Result<Self> {
        Self::new(vec![vec![0.0, d], vec![d, 0.0]])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// The space with every distance multiplied by `t`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::validation(format!("scale factor must be positive, got {t}")));
        }
        Ok(Self {
            n: self.n,
            d: self.d.iter().map(|x| x * t).collect(),
        })
    }

    /// Subspace on the given point indices (in the given order).
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::validation("subspace needs at least one index"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::validation(format!("index {bad} out of range")));
        }
        let k = indices.len();
        let mut d = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                d.push(self.get(i, j));
            }
        }
        Self::from_flat(k, d)
    }
}

/// Cartesian product with the l1-sum metric. Point `(i, j)` has index
/// `i * b.len() + j`.
pub fn l1_product(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> FiniteMetricSpace {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut d = vec![0.0; n * n];
    for i in 0..na {
        for j in 0..nb {
            let row = i * nb + j;
            for k in 0..na {
                for l in 0..nb {
                    d[row * n + k * nb + l] = a.get(i, k) + b.get(j, l);
                }
            }
        }
    }
    FiniteMetricSpace { n, d }
}

/// The image of `a` under the diagonal map into the `n`-fold l1 product,
/// which is isometric to `a` scaled by `n`.
pub fn diagonal_embedding(a: &FiniteMetricSpace, n: usize) -> Result<FiniteMetricSpace> {
    if n == 0 {
        return Err(Error::validation("diagonal embedding needs n >= 1"));
    }
    a.scale(n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    L1,
    L2,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::L1 => l1_distance(a, b),
            Metric::L2 => l2_distance(a, b),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            other => Err(Error::validation(format!("unknown metric '{other}' (expected l1 or l2)"))),
        }
    }
}

/// Points in R^N with an attached metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
    metric: Metric,
}

impl PointCloud {
    /// Rejects ragged or non-finite input and duplicate points.
    pub fn new(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::validation(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(format!("point {i} has a non-finite coordinate")));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if max_abs_diff(&points[i], &points[j]) <= DEDUP_TOL {
                    return Err(Error::DuplicatePoints { first: j, second: i });
                }
            }
        }
        Ok(Self { dim, points, metric })
    }

    /// Builds a cloud, silently dropping later duplicates of earlier points.
    pub fn new_dedup(points: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
        for p in points {
            if !kept.iter().any(|q| max_abs_diff(q, &p) <= DEDUP_TOL) {
                kept.push(p);
            }
        }
        Self::new(kept, metric)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    /// Every coordinate multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::validation(format!("scale factor must be positive, got {t}")));
        }
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| x * t).collect())
            .collect();
        Self::new(points, self.metric)
    }

    /// The finite metric space on the selected points.
    pub fn subspace(&self, indices: &[usize]) -> Result<FiniteMetricSpace> {
        if indices.is_empty() {
            return Err(Error::validation("subspace needs at least one index"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.points.len()) {
            return Err(Error::validation(format!("index {bad} out of range")));
        }
        let k = indices.len();
        let mut d = vec![0.0; k * k];
        for a in 0..k {
            for b in (a + 1)..k {
                let dist = self
                    .metric
                    .distance(&self.points[indices[a]], &self.points[indices[b]]);
                d[a * k + b] = dist;
                d[b * k + a] = dist;
            }
        }
        FiniteMetricSpace::from_flat(k, d)
    }

    /// The metric space on all points.
    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        let all: Vec<usize> = (0..self.points.len()).collect();
        self.subspace(&all)
    }
}
