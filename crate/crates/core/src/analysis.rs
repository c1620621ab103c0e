//! Extremum detection on sampled curves.

use crate::scalar::Real;

/// Indices of strict interior local maxima.
pub fn local_maxima<T: Real>(values: &[T]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] > values[k - 1] && values[k] > values[k + 1])
        .collect()
}

/// Indices of strict interior local minima.
pub fn local_minima<T: Real>(values: &[T]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] < values[k - 1] && values[k] < values[k + 1])
        .collect()
}

/// Vertex of the parabola through samples k−1, k, k+1, as a fractional index
/// offset in [-0.5, 0.5] and the interpolated value.
pub fn parabolic_vertex<T: Real>(values: &[T], k: usize) -> (T, T) {
    if k == 0 || k + 1 >= values.len() {
        return (T::zero(), values[k]);
    }
    let (l, c, r) = (values[k - 1], values[k], values[k + 1]);
    let denom = l - T::lit(2.0) * c + r;
    if denom == T::zero() {
        return (T::zero(), c);
    }
    let half = T::lit(0.5);
    let offset = (half * (l - r) / denom).max(-half).min(half);
    let value = c - T::lit(0.25) * (l - r) * offset;
    (offset, value)
}

/// Peak height from a Gaussian (log-parabolic) fit through three positive
/// samples; exact for Gaussian peaks.
pub fn gaussian_peak<T: Real>(values: &[T], k: usize) -> (T, T) {
    if k == 0 || k + 1 >= values.len() {
        return (T::zero(), values[k]);
    }
    let (l, c, r) = (values[k - 1], values[k], values[k + 1]);
    if l <= T::zero() || c <= T::zero() || r <= T::zero() {
        return parabolic_vertex(values, k);
    }
    let logs = [l.ln(), c.ln(), r.ln()];
    let (offset, log_peak) = parabolic_vertex(&logs, 1);
    (offset, log_peak.exp())
}

/// Circular lag (in samples, in `[0, n)`) maximizing the cross-correlation
/// Σₖ a[k]·b[k+lag] of two equally sampled, mean-removed profiles.
pub fn best_lag<T: Real>(a: &[T], b: &[T]) -> usize {
    let n = a.len().min(b.len());
    let mean = |v: &[T]| v[..n].iter().copied().sum::<T>() / T::from_usize_lossy(n);
    let (ma, mb) = (mean(a), mean(b));
    (0..n)
        .map(|lag| {
            let s: T = (0..n).map(|k| (a[k] - ma) * (b[(k + lag) % n] - mb)).sum();
            (lag, s)
        })
        .fold((0, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0
}
