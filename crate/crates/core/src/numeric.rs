//! Shared numerical routines: stable log-space reductions, quadrature,
//! rank statistics and chain diagnostics.

use rand::Rng;

/// Numerically stable log(sum(exp(xs))).
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        // All -inf (empty sum) or a +inf/NaN dominates; either way m is the answer.
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// log(mean(exp(xs))).
pub fn log_mean_exp(xs: &[f64]) -> f64 {
    logsumexp(xs) - (xs.len() as f64).ln()
}

/// Draws an index from the categorical distribution with unnormalized
/// log-weights `logw`. Entries of `-inf` carry zero mass.
pub fn sample_log_categorical<R: Rng + ?Sized>(logw: &[f64], rng: &mut R) -> usize {
    let m = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(m.is_finite(), "categorical draw with no finite weight");
    let weights: Vec<f64> = logw.iter().map(|&w| (w - m).exp()).collect();
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return k;
        }
    }
    weights.len() - 1
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(&f, a, fa, b, fb);
    recurse(&f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
///
/// Nodes are found with Newton iterations on the Legendre recurrence;
/// accurate to machine precision for the orders used here (n <= 512).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi-style initial guess on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map from [-1, 1] to [0, 1]; x decreases with i.
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Empirical Kendall tau of paired samples, counting concordant minus
/// discordant pairs (ties contribute zero).
pub fn empirical_kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    assert!(n >= 2);
    let mut s = 0i64;
    for i in 0..n {
        for k in (i + 1)..n {
            let prod = (x[i] - x[k]) * (y[i] - y[k]);
            if prod > 0.0 {
                s += 1;
            } else if prod < 0.0 {
                s -= 1;
            }
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

/// Linear-interpolation sample quantile (type 7). `q` in [0, 1].
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    assert!(!samples.is_empty());
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (xs.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        xs[lo]
    } else {
        xs[lo] + (pos - lo as f64) * (xs[hi] - xs[lo])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Autocorrelation function of a series up to `max_lag`, normalized so
/// that lag 0 equals 1.
pub fn acf(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    let m = mean(series);
    let c0: f64 = series.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
    (0..=max_lag.min(n - 1))
        .map(|lag| {
            let c: f64 = (0..n - lag)
                .map(|t| (series[t] - m) * (series[t + lag] - m))
                .sum::<f64>()
                / n as f64;
            if c0 > 0.0 {
                c / c0
            } else {
                0.0
            }
        })
        .collect()
}

/// All set partitions of {0, .., n-1} as canonical label vectors
/// (restricted growth strings). Intended for exhaustive oracles at small n;
/// Bell(8) = 4140.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, next: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=next {
            labels[i] = l;
            rec(i + 1, next.max(l + 1), labels, out);
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    rec(1, 1, &mut labels, &mut out);
    out
}

/// Kolmogorov-Smirnov distance between an empirical sample and a
/// reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logsumexp_matches_direct_sum() {
        let xs = [-1.0f64, 0.5, 2.0];
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((logsumexp(&xs) - direct).abs() < 1e-14);
    }

    #[test]
    fn logsumexp_handles_large_magnitudes() {
        let xs = [-1000.0, -1000.0];
        assert!((logsumexp(&xs) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }

    #[test]
    fn categorical_respects_log_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let logw = [f64::NEG_INFINITY, 0.25f64.ln(), 0.75f64.ln()];
        let mut counts = [0usize; 3];
        for _ in 0..40_000 {
            counts[sample_log_categorical(&logw, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        let p1 = counts[1] as f64 / 40_000.0;
        assert!((p1 - 0.25).abs() < 0.01, "p1={p1}");
    }

    #[test]
    fn simpson_integrates_smooth_function() {
        let v = adaptive_simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // An order-8 rule is exact through degree 15.
        let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(15)).sum();
        assert!((integral - 1.0 / 16.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_high_order_stays_normalized() {
        let (x, w) = gauss_legendre(200);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn empirical_tau_on_monotone_data() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let up = [0.1, 0.2, 0.3, 0.4];
        let down = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(empirical_kendall_tau(&x, &up), 1.0);
        assert_eq!(empirical_kendall_tau(&x, &down), -1.0);
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert!((quantile(&xs, 0.5) - 2.5).abs() < 1e-14);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
    }

    #[test]
    fn ks_distance_of_exact_uniform_grid_is_small() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_distance(&xs, |x| x) < 1e-3);
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1usize, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &want) in (1..=8).zip(&bell) {
            let parts = set_partitions(n);
            assert_eq!(parts.len(), want, "n={n}");
        }
        // Canonical form: first item always labeled 0, labels contiguous.
        for labels in set_partitions(5) {
            assert_eq!(labels[0], 0);
            let m = labels.iter().max().unwrap() + 1;
            for l in 0..m {
                assert!(labels.contains(&l));
            }
        }
    }

    #[test]
    fn acf_lag_zero_is_one() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64).collect();
        let a = acf(&xs, 5);
        assert!((a[0] - 1.0).abs() < 1e-12);
    }
}
