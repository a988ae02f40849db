//! Summation and log-domain helpers shared by the solvers.

/// Neumaier-compensated sum. The result depends only on the iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `log Σ exp(x_i)` with the max shift. Returns `-inf` for an empty slice or
/// when every term is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s = compensated_sum(xs.iter().map(|&x| (x - max).exp()));
    max + s.ln()
}

/// Normalized weights `exp(x_i − log Σ exp(x_j))`, computed in log space.
pub fn softmax(xs: &[f64]) -> (Vec<f64>, f64) {
    let lse = log_sum_exp(xs);
    (xs.iter().map(|&x| (x - lse).exp()).collect(), lse)
}
