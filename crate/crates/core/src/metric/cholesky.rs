//! Row-by-row Cholesky factorization.
//!
//! The factor grows one point at a time, which lets nested samples
//! `A_1 ⊆ A_2 ⊆ ...` reuse all earlier work: with `L y = 1`, the magnitude
//! of the first `k` points is `Σ y_i²` over the first `k` entries.

/// Lower-triangular Cholesky factor of a growing symmetric matrix.
#[derive(Debug, Clone, Default)]
pub struct IncrementalCholesky {
    /// Row `i` holds `L[i][0..=i]`.
    rows: Vec<Vec<f64>>,
    /// Forward solution of `L y = 1`.
    y: Vec<f64>,
    min_pivot: f64,
    max_pivot: f64,
}

impl IncrementalCholesky {
    pub fn new() -> Self {
        Self {
            rows: Vec::new(),
            y: Vec::new(),
            min_pivot: f64::INFINITY,
            max_pivot: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Appends one row/column. `row` holds the new entries against the
    /// existing points followed by the diagonal entry, so its length is
    /// `len() + 1`.
    ///
    /// Returns the pivot (the Schur complement before the square root).
    /// If it is `<= tol` the factor is left unchanged and the pivot is
    /// returned as the error value.
    pub fn push(&mut self, row: &[f64], tol: f64) -> Result<f64, f64> {
        let k = self.rows.len();
        assert_eq!(row.len(), k + 1, "row length must be len() + 1");
        let mut new_row = Vec::with_capacity(k + 1);
        for j in 0..k {
            let lj = &self.rows[j];
            let dot: f64 = new_row.iter().zip(lj.iter()).map(|(a, b)| a * b).sum();
            new_row.push((row[j] - dot) / lj[j]);
        }
        let sq: f64 = new_row.iter().map(|x| x * x).sum();
        let pivot = row[k] - sq;
        if pivot.is_nan() || pivot <= tol {
            return Err(pivot);
        }
        let diag = pivot.sqrt();
        let dot: f64 = new_row.iter().zip(&self.y).map(|(a, b)| a * b).sum();
        self.y.push((1.0 - dot) / diag);
        new_row.push(diag);
        self.rows.push(new_row);
        self.min_pivot = self.min_pivot.min(pivot);
        self.max_pivot = self.max_pivot.max(pivot);
        Ok(pivot)
    }

    /// `1ᵀ Z⁻¹ 1` for the rows pushed so far.
    pub fn magnitude(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum()
    }

    /// Solves `Z w = 1` by back substitution on `Lᵀ w = y`.
    pub fn weighting(&self) -> Vec<f64> {
        let n = self.rows.len();
        let mut w = self.y.clone();
        for i in (0..n).rev() {
            w[i] /= self.rows[i][i];
            let wi = w[i];
            for (j, wj) in w.iter_mut().enumerate().take(i) {
                *wj -= self.rows[i][j] * wi;
            }
        }
        w
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn max_pivot(&self) -> f64 {
        self.max_pivot
    }
}
