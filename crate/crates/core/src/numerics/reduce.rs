//! Deterministic summation.
//!
//! Sums are split into fixed-size chunks that are added sequentially, and
//! the chunk totals are combined by a balanced binary tree. The shape depends
//! only on the input length, so the result is bit-identical for any number of
//! worker threads.

use rayon::prelude::*;

pub const CHUNK: usize = 4096;

/// Balanced pairwise sum with a fixed shape.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// `sum_{i < n} f(i)` evaluated in parallel with the fixed chunk/tree shape.
pub fn par_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    par_sum_vec(n, 1, |i, out| out[0] = f(i))[0]
}

/// Vector-valued variant: `f(i, out)` writes `width` values per item.
pub fn par_sum_vec<F>(n: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            let mut buf = vec![0.0; width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                f(i, &mut buf);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += b;
                }
            }
            acc
        })
        .collect();
    (0..width)
        .map(|w| tree_sum(&partials.iter().map(|p| p[w]).collect::<Vec<_>>()))
        .collect()
}

/// Parallel maximum; order-independent, hence deterministic.
pub fn par_max<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n).into_par_iter().map(&f).reduce(|| f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_bits() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let n = 50_000;
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| par_sum(n, f));
        let b = three.install(|| par_sum(n, f));
        assert_eq!(a.to_bits(), b.to_bits());
        let naive: f64 = (0..n).map(f).sum();
        assert!((a - naive).abs() < 1e-12);
    }

    #[test]
    fn tree_sum_small() {
        assert_eq!(tree_sum(&[]), 0.0);
        assert_eq!(tree_sum(&[1.0, 2.0, 3.0]), 6.0);
    }
}
