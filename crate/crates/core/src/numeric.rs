//! Small numerical kernels shared by the geometry and approximation code.

/// Pairwise (tree) summation. The split points depend only on the slice
/// length, so the result is reproducible for a fixed input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Elementary symmetric polynomials `e_0, ..., e_n` of `values`.
///
/// Uses the product recurrence `e_k <- e_k + a * e_{k-1}`, updating `k` in
/// descending order so each step reads the previous prefix's coefficients.
/// All terms are nonnegative for nonnegative input, so there is no
/// cancellation.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (n, &a) in values.iter().enumerate() {
        for k in (1..=n + 1).rev() {
            e[k] += a * e[k - 1];
        }
    }
    e
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Largest absolute coordinate difference; used for duplicate detection.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
