//! Dense helpers for the small matrices that show up in hull construction.

use nalgebra::DMatrix;

/// Relative singular-value threshold below which a direction counts as degenerate.
pub const RANK_TOL: f64 = 1e-10;

/// Determinant by Gaussian elimination with partial pivoting.
/// `m` is row-major `d x d` and is consumed as scratch space.
pub fn determinant(mut m: Vec<f64>, d: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..d {
        let pivot_row = (col..d)
            .max_by(|&a, &b| m[a * d + col].abs().total_cmp(&m[b * d + col].abs()))
            .unwrap();
        let pivot = m[pivot_row * d + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for j in 0..d {
                m.swap(col * d + j, pivot_row * d + j);
            }
            det = -det;
        }
        det *= pivot;
        for r in (col + 1)..d {
            let f = m[r * d + col] / pivot;
            if f != 0.0 {
                for j in col..d {
                    m[r * d + j] -= f * m[col * d + j];
                }
            }
        }
    }
    det
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes from `v` its components along the orthonormal `basis` (two passes).
pub fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Unit vector orthogonal to the `d - 1` given vectors in `R^d`.
/// Assumes the vectors are linearly independent.
pub fn normal_to(vectors: &[Vec<f64>], d: usize) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for v in vectors {
        let mut u = v.clone();
        orthogonalize(&mut u, &basis);
        let n = norm(&u);
        u.iter_mut().for_each(|x| *x /= n);
        basis.push(u);
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for axis in 0..d {
        let mut e = vec![0.0; d];
        e[axis] = 1.0;
        orthogonalize(&mut e, &basis);
        let n = norm(&e);
        if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best = Some((n, e));
        }
    }
    let (n, mut e) = best.expect("d >= 1");
    e.iter_mut().for_each(|x| *x /= n);
    e
}

/// Numerical rank of the rows of `rows` (each of length `d`): the number
/// of singular values above `RANK_TOL` times the largest one.
pub fn numerical_rank(rows: &[Vec<f64>], d: usize) -> usize {
    principal_directions(rows, d).len()
}

/// Orthonormal basis of the row span, from the right singular vectors whose
/// singular values pass the rank threshold.
pub fn principal_directions(rows: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    if rows.is_empty() || d == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
    let svd = m.svd(false, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Vec::new();
    }
    let v_t = svd.v_t.expect("requested V");
    let mut keep: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_TOL * sigma_max)
        .map(|(i, &s)| (s, i))
        .collect();
    keep.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    keep.into_iter()
        .map(|(_, i)| v_t.row(i).iter().copied().collect())
        .collect()
}
