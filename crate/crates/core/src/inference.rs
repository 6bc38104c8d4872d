//! Posterior summaries: conditional predictive ordinates and LPML, Kendall
//! tau point/interval estimates through predictive parameter draws,
//! pairwise co-clustering, Binder-loss partition selection, post-MCMC
//! refit of the selected clusters, and predictive density grids.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::copula::Theta;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numeric::{log_mean_exp, mean, quantile, sample_log_categorical};
use crate::prior::{urn_weights, CenteringMeasure};
use crate::sampler::{log_accept_truncated_uniform, DrawRecord, PosteriorDraws, BATCH_SIZE, TARGET_HIGH, TARGET_LOW};

/// Iterations of the per-cluster refit sampler.
pub const REFIT_ITER: usize = 2000;
pub const REFIT_BURN_IN: usize = 500;
/// Default number of random restarts for the partition search.
pub const BINDER_CANDIDATES: usize = 16;
/// Size of the fixed Monte Carlo pool approximating the fresh-draw
/// component of the predictive density.
pub const DENSITY_POOL: usize = 100;

/// LPML and per-observation conditional predictive ordinates.
#[derive(Debug, Clone)]
pub struct LpmlSummary {
    pub lpml: f64,
    /// log CPO_i per observation.
    pub log_cpo: Vec<f64>,
    /// Observations whose harmonic mean is dominated by a single draw
    /// (over 99% of the inverse-density mass): the estimate is unstable.
    pub unstable: Vec<usize>,
}

/// CPO_i as the harmonic mean of per-draw densities, in log space:
/// log CPO_i = -log mean_l exp(-log f_il). LPML is the sum over i.
pub fn lpml(draws: &PosteriorDraws) -> LpmlSummary {
    let n = draws.n;
    let l = draws.draws.len();
    assert!(l > 0, "no kept draws");
    let mut log_cpo = Vec::with_capacity(n);
    let mut unstable = Vec::new();
    let mut neg = vec![0.0; l];
    for i in 0..n {
        for (k, d) in draws.draws.iter().enumerate() {
            neg[k] = -d.log_densities[i];
        }
        let lme = log_mean_exp(&neg);
        let max = neg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // Share of the largest term in the harmonic-mean denominator.
        if (max - lme - (l as f64).ln()).exp() > 0.99 {
            unstable.push(i);
        }
        log_cpo.push(-lme);
    }
    LpmlSummary {
        lpml: log_cpo.iter().sum(),
        log_cpo,
        unstable,
    }
}

/// Kendall tau estimate from predictive parameter draws.
#[derive(Debug, Clone)]
pub struct TauEstimate {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// One tau value per kept iteration.
    pub samples: Vec<f64>,
}

/// For each kept iteration draws theta_0 from the predictive urn —
/// mass (b + a m)/(b + n) on a fresh g0 draw, (n_j - a)/(b + n) on each
/// atom — and evaluates its Kendall tau. Point estimate is the mean,
/// interval the equal-tailed 95% empirical quantiles.
pub fn posterior_tau<R: Rng + ?Sized>(
    draws: &PosteriorDraws,
    g0: &CenteringMeasure,
    rng: &mut R,
) -> TauEstimate {
    assert!(!draws.draws.is_empty(), "no kept draws");
    let samples: Vec<f64> = draws
        .draws
        .iter()
        .map(|d| {
            let theta0 = predictive_theta(d, g0, rng);
            theta0.kendall_tau()
        })
        .collect();
    TauEstimate {
        point: mean(&samples),
        ci_low: quantile(&samples, 0.025),
        ci_high: quantile(&samples, 0.975),
        samples,
    }
}

/// One draw from f(theta_0 | theta) under the urn at a kept iteration.
fn predictive_theta<R: Rng + ?Sized>(
    d: &DrawRecord,
    g0: &CenteringMeasure,
    rng: &mut R,
) -> Theta {
    let hyper = crate::prior::PdHyper::new(d.a, d.b).expect("stored draws are valid");
    let counts = d.counts();
    let w = urn_weights(&hyper, counts.sizes());
    let u: f64 = rng.random::<f64>();
    if u < w.new_cluster {
        g0.sample(rng)
    } else {
        let mut acc = w.new_cluster;
        for (j, &wj) in w.atoms.iter().enumerate() {
            acc += wj;
            if u < acc {
                return Theta::unchecked(g0.family(), d.theta_star[j]);
            }
        }
        Theta::unchecked(g0.family(), *d.theta_star.last().unwrap())
    }
}

/// Posterior co-clustering (similarity) matrix, stored dense row-major.
#[derive(Debug, Clone)]
pub struct CoclusteringMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CoclusteringMatrix {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "{} values for a {n}x{n} matrix",
                values.len()
            )));
        }
        Ok(CoclusteringMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Entry (i, k) is the fraction of kept iterations placing i and k in the
/// same cluster; symmetric with unit diagonal.
pub fn coclustering_matrix(draws: &PosteriorDraws) -> CoclusteringMatrix {
    let n = draws.n;
    let l = draws.draws.len();
    assert!(l > 0, "no kept draws");
    let mut values = vec![0.0; n * n];
    for d in &draws.draws {
        for i in 0..n {
            for k in i..n {
                if d.labels[i] == d.labels[k] {
                    values[i * n + k] += 1.0;
                }
            }
        }
    }
    for i in 0..n {
        for k in i..n {
            let v = values[i * n + k] / l as f64;
            values[i * n + k] = v;
            values[k * n + i] = v;
        }
    }
    CoclusteringMatrix { n, values }
}

/// A clustering of the observations with canonical labels in 0..n_clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    n_clusters: usize,
}

impl Partition {
    /// Canonicalizes labels to first-appearance order.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map: Vec<Option<usize>> = vec![None; raw.len()];
        let mut labels = Vec::with_capacity(raw.len());
        let mut next = 0usize;
        for &l in raw {
            let c = match map[l] {
                Some(c) => c,
                None => {
                    map[l] = Some(next);
                    next += 1;
                    next - 1
                }
            };
            labels.push(c);
        }
        Partition {
            labels,
            n_clusters: next,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_clusters];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == cluster).then_some(i))
            .collect()
    }
}

/// Expected Binder loss of a partition against the similarity matrix:
/// sum over pairs of |1{same cluster} - p_ik|.
pub fn binder_loss(labels: &[usize], psm: &CoclusteringMatrix) -> f64 {
    let n = psm.n();
    assert_eq!(labels.len(), n);
    let mut loss = 0.0;
    for i in 0..n {
        for k in (i + 1)..n {
            let p = psm.get(i, k);
            loss += if labels[i] == labels[k] { 1.0 - p } else { p };
        }
    }
    loss
}

/// Greedy Binder-loss minimization: sequential allocation over a random
/// item order followed by reallocation passes until a full pass makes no
/// move, restarted `n_candidates` times (first candidate uses the natural
/// order); returns the best-scoring partition.
pub fn select_partition<R: Rng + ?Sized>(
    psm: &CoclusteringMatrix,
    n_candidates: usize,
    rng: &mut R,
) -> Partition {
    let n = psm.n();
    assert!(n_candidates >= 1);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for c in 0..n_candidates {
        let mut order: Vec<usize> = (0..n).collect();
        if c > 0 {
            order.shuffle(rng);
        }
        let labels = greedy_allocation(psm, &order);
        let loss = binder_loss(&labels, psm);
        if best.as_ref().is_none_or(|(b, _)| loss < *b) {
            best = Some((loss, labels));
        }
    }
    Partition::from_labels(&best.unwrap().1)
}

/// Cost of adding item i to cluster `members`: sum over the cluster of
/// (1 - 2 p_ik); negative means joining beats opening a new cluster.
fn join_cost(psm: &CoclusteringMatrix, members: &[usize], i: usize) -> f64 {
    members.iter().map(|&k| 1.0 - 2.0 * psm.get(i, k)).sum()
}

fn greedy_allocation(psm: &CoclusteringMatrix, order: &[usize]) -> Vec<usize> {
    let n = psm.n();
    let mut labels = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in order {
        let mut best_c = clusters.len();
        let mut best_cost = 0.0;
        for (c, members) in clusters.iter().enumerate() {
            let cost = join_cost(psm, members, i);
            if cost < best_cost {
                best_cost = cost;
                best_c = c;
            }
        }
        if best_c == clusters.len() {
            clusters.push(vec![i]);
        } else {
            clusters[best_c].push(i);
        }
        labels[i] = best_c;
    }
    // Reallocation sweeps until stable.
    for _ in 0..100 {
        let mut moved = false;
        for i in 0..n {
            let cur = labels[i];
            let pos = clusters[cur].iter().position(|&x| x == i).unwrap();
            clusters[cur].swap_remove(pos);
            let mut best_c = clusters.len();
            let mut best_cost = 0.0;
            for (c, members) in clusters.iter().enumerate() {
                if members.is_empty() {
                    continue;
                }
                let cost = join_cost(psm, members, i);
                if cost < best_cost {
                    best_cost = cost;
                    best_c = c;
                }
            }
            if best_c == clusters.len() {
                // Reuse an emptied slot if there is one.
                if let Some(slot) = clusters.iter().position(|m| m.is_empty()) {
                    clusters[slot].push(i);
                    labels[i] = slot;
                } else {
                    clusters.push(vec![i]);
                    labels[i] = clusters.len() - 1;
                }
            } else {
                clusters[best_c].push(i);
                labels[i] = best_c;
            }
            if labels[i] != cur {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    Partition::from_labels(&labels).labels().to_vec()
}

/// Posterior summary of one selected cluster after the refit.
#[derive(Debug, Clone)]
pub struct ClusterSummary {
    pub size: usize,
    pub theta_mean: f64,
    pub theta_low: f64,
    pub theta_high: f64,
    /// Posterior mean of (n_j - a)/(b + n) over the original draws.
    pub weight: f64,
}

/// Holding the selected partition fixed, re-samples each cluster parameter
/// with the step-(iii) move alone (2000 iterations, 500 burn-in, bounded
/// batch adaptation during burn-in) and reports mean, 95% interval and the
/// posterior-mean component weight.
pub fn post_mcmc_refit<R: Rng + ?Sized>(
    partition: &Partition,
    data: &Dataset,
    g0: &CenteringMeasure,
    draws: &PosteriorDraws,
    rng: &mut R,
) -> Result<Vec<ClusterSummary>> {
    if partition.labels().len() != data.n() {
        return Err(Error::InvalidInput(format!(
            "partition over {} items for {} observations",
            partition.labels().len(),
            data.n()
        )));
    }
    let family = g0.family();
    let p = data.p();
    let (lo, hi) = family.theta_interval(p);
    let n = data.n() as f64;
    let sizes = partition.cluster_sizes();
    let mut out = Vec::with_capacity(partition.n_clusters());
    for j in 0..partition.n_clusters() {
        let members = partition.members(j);
        let log_target = |theta: f64| -> f64 {
            let mut v = g0.log_density(theta);
            if !v.is_finite() {
                return f64::NEG_INFINITY;
            }
            let t = Theta::unchecked(family, theta);
            for &i in &members {
                match t.log_density(data.point(i)) {
                    Ok(ld) if !ld.is_nan() => v += ld,
                    _ => return f64::NEG_INFINITY,
                }
                if !v.is_finite() {
                    return f64::NEG_INFINITY;
                }
            }
            v
        };
        // Start from a centering draw with positive density.
        let mut cur = f64::NAN;
        for _ in 0..10_000 {
            let t = g0.sample(rng);
            if family.admits_in_dim(t.value(), p) && log_target(t.value()).is_finite() {
                cur = t.value();
                break;
            }
        }
        if !cur.is_finite() {
            return Err(Error::NonFiniteDensity {
                observation: members.first().copied().unwrap_or(0),
                theta: f64::NAN,
            });
        }
        let mut kappa = crate::sampler::INIT_KAPPA_THETA;
        let mut accepted = 0usize;
        let mut proposed = 0usize;
        let mut kept = Vec::with_capacity(REFIT_ITER - REFIT_BURN_IN);
        for it in 1..=REFIT_ITER {
            let plo = (cur - kappa).max(lo);
            let phi = (cur + kappa).min(hi);
            let prop = rng.random_range(plo..phi);
            let log_acc = log_accept_truncated_uniform(log_target, lo, hi, kappa, cur, prop);
            proposed += 1;
            if rng.random::<f64>().ln() < log_acc {
                cur = prop;
                accepted += 1;
            }
            if it <= REFIT_BURN_IN && it % BATCH_SIZE == 0 {
                let ar = accepted as f64 / proposed as f64;
                let delta = 0.01f64.min(1.0 / ((it / BATCH_SIZE) as f64).sqrt());
                if ar > TARGET_HIGH {
                    kappa *= 1.01f64.powf(delta);
                } else if ar < TARGET_LOW {
                    kappa /= 1.01f64.powf(delta);
                }
                accepted = 0;
                proposed = 0;
            }
            if it > REFIT_BURN_IN {
                kept.push(cur);
            }
        }
        let weight = mean(
            &draws
                .draws
                .iter()
                .map(|d| (sizes[j] as f64 - d.a) / (d.b + n))
                .collect::<Vec<_>>(),
        );
        out.push(ClusterSummary {
            size: sizes[j],
            theta_mean: mean(&kept),
            theta_low: quantile(&kept, 0.025),
            theta_high: quantile(&kept, 0.975),
            weight,
        });
    }
    Ok(out)
}

/// Posterior-mean predictive bivariate density on a G x G grid of cell
/// midpoints.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub resolution: usize,
    /// Row-major: values[g1 * G + g2] at ((g1+0.5)/G, (g2+0.5)/G).
    pub values: Vec<f64>,
    pub pair: (usize, usize),
}

/// Averages, over kept iterations, the urn-weighted mixture of bivariate
/// copula densities at the atoms plus the fresh-draw component, the latter
/// approximated by a fixed Monte Carlo pool of centering draws. Archimedean
/// bivariate margins coincide for every coordinate pair, so `pair` only
/// labels the output.
pub fn density_grid<R: Rng + ?Sized>(
    draws: &PosteriorDraws,
    g0: &CenteringMeasure,
    resolution: usize,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<DensityGrid> {
    if resolution < 2 {
        return Err(Error::InvalidInput("grid resolution must be at least 2".into()));
    }
    if pair.0 >= draws.p || pair.1 >= draws.p || pair.0 == pair.1 {
        return Err(Error::InvalidInput(format!(
            "pair {pair:?} invalid for dimension {}",
            draws.p
        )));
    }
    assert!(!draws.draws.is_empty(), "no kept draws");
    let family = g0.family();
    let g = resolution;
    let l = draws.draws.len() as f64;
    let pool: Vec<f64> = (0..DENSITY_POOL).map(|_| g0.sample(rng).value()).collect();

    let cell = |idx: usize| (idx as f64 + 0.5) / g as f64;
    let biv = |theta: f64, u1: f64, u2: f64| -> f64 {
        let t = Theta::unchecked(family, theta);
        let point = crate::copula::UnitPoint::pair(u1, u2).expect("grid midpoints are interior");
        match t.log_density_biv(&point) {
            Ok(ld) if ld.is_finite() => ld.exp(),
            _ => 0.0,
        }
    };

    // Fresh-draw component: pool-mean density per cell, amortized over the
    // kept iterations through the mean new-cluster weight.
    let mut pool_mean = vec![0.0; g * g];
    for (i1, row) in pool_mean.chunks_mut(g).enumerate() {
        let u1 = cell(i1);
        for (i2, v) in row.iter_mut().enumerate() {
            let u2 = cell(i2);
            *v = pool.iter().map(|&t| biv(t, u1, u2)).sum::<f64>() / pool.len() as f64;
        }
    }

    let mut values = vec![0.0; g * g];
    let mut mean_new_weight = 0.0;
    for d in &draws.draws {
        let hyper = crate::prior::PdHyper::new(d.a, d.b).expect("stored draws are valid");
        let w = urn_weights(&hyper, d.counts().sizes());
        mean_new_weight += w.new_cluster / l;
        for (j, &theta) in d.theta_star.iter().enumerate() {
            let wj = w.atoms[j] / l;
            for (i1, row) in values.chunks_mut(g).enumerate() {
                let u1 = cell(i1);
                for (i2, v) in row.iter_mut().enumerate() {
                    *v += wj * biv(theta, u1, cell(i2));
                }
            }
        }
    }
    for (v, pm) in values.iter_mut().zip(&pool_mean) {
        *v += mean_new_weight * pm;
    }
    Ok(DensityGrid {
        resolution: g,
        values,
        pair,
    })
}

/// Mode of the number of distinct clusters across kept draws (smallest on
/// ties).
pub fn modal_cluster_count(draws: &PosteriorDraws) -> usize {
    let mut counts: Vec<usize> = Vec::new();
    for d in &draws.draws {
        let m = d.cluster_count();
        if m >= counts.len() {
            counts.resize(m + 1, 0);
        }
        counts[m] += 1;
    }
    counts
        .iter()
        .enumerate()
        .max_by_key(|&(m, &c)| (c, std::cmp::Reverse(m)))
        .map(|(m, _)| m)
        .unwrap_or(0)
}

/// Sampled categorical helper re-exported for tests that build predictive
/// mixtures by hand.
#[doc(hidden)]
pub fn sample_from_log_weights<R: Rng + ?Sized>(logw: &[f64], rng: &mut R) -> usize {
    sample_log_categorical(logw, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copula::{sample_copula, CopulaFamily};
    use crate::numeric::set_partitions;
    use crate::prior::PdHyper;
    use crate::sampler::{run_chain, McmcConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fake_draws(records: Vec<DrawRecord>, n: usize, p: usize) -> PosteriorDraws {
        PosteriorDraws {
            family: CopulaFamily::Clayton,
            n,
            p,
            n_iter: records.len(),
            burn_in: 0,
            thin: 1,
            seed: 0,
            draws: records,
            batches: Vec::new(),
            final_kappa_theta: 0.1,
            final_kappa_a: 1.0,
            final_kappa_b: 1.0,
        }
    }

    fn record(labels: Vec<usize>, theta_star: Vec<f64>, log_densities: Vec<f64>) -> DrawRecord {
        DrawRecord {
            iteration: 0,
            a: 0.2,
            b: 1.0,
            labels,
            theta_star,
            log_densities,
        }
    }

    #[test]
    fn lpml_of_constant_densities_is_the_density() {
        // All draws identical: CPO_i equals that density.
        let recs = (0..10)
            .map(|_| record(vec![0, 0], vec![2.0], vec![0.7f64.ln(), 0.4f64.ln()]))
            .collect();
        let draws = fake_draws(recs, 2, 2);
        let s = lpml(&draws);
        assert!((s.log_cpo[0] - 0.7f64.ln()).abs() < 1e-12);
        assert!((s.log_cpo[1] - 0.4f64.ln()).abs() < 1e-12);
        assert!((s.lpml - (0.7f64.ln() + 0.4f64.ln())).abs() < 1e-12);
        assert!(s.unstable.is_empty());
    }

    #[test]
    fn lpml_harmonic_mean_two_draws() {
        // Densities 1 and 3: harmonic mean 1.5.
        let recs = vec![
            record(vec![0, 0], vec![2.0], vec![0.0, 0.0]),
            record(vec![0, 0], vec![2.0], vec![3.0f64.ln(), 0.0]),
        ];
        let draws = fake_draws(recs, 2, 2);
        let s = lpml(&draws);
        assert!((s.log_cpo[0] - 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lpml_flags_dominated_observations() {
        // One draw with density 1e-9 dominates the harmonic mean.
        let mut recs: Vec<DrawRecord> = (0..50)
            .map(|_| record(vec![0, 0], vec![2.0], vec![0.0, 0.0]))
            .collect();
        recs.push(record(vec![0, 0], vec![2.0], vec![(1e-9f64).ln(), 0.0]));
        let draws = fake_draws(recs, 2, 2);
        let s = lpml(&draws);
        assert_eq!(s.unstable, vec![0]);
    }

    #[test]
    fn lpml_invariant_to_draw_order() {
        let recs = vec![
            record(vec![0, 0], vec![2.0], vec![0.1, -0.4]),
            record(vec![0, 0], vec![2.0], vec![-1.2, 0.3]),
            record(vec![0, 0], vec![2.0], vec![0.9, -2.0]),
        ];
        let fwd = lpml(&fake_draws(recs.clone(), 2, 2)).lpml;
        let rev = lpml(&fake_draws(recs.into_iter().rev().collect(), 2, 2)).lpml;
        assert!((fwd - rev).abs() < 1e-12);
    }

    #[test]
    fn coclustering_counts_pairs() {
        let recs = vec![
            record(vec![0, 0, 1], vec![1.0, 2.0], vec![0.0; 3]),
            record(vec![0, 1, 1], vec![1.0, 2.0], vec![0.0; 3]),
        ];
        let psm = coclustering_matrix(&fake_draws(recs, 3, 2));
        assert_eq!(psm.get(0, 0), 1.0);
        assert!((psm.get(0, 1) - 0.5).abs() < 1e-15);
        assert!((psm.get(1, 2) - 0.5).abs() < 1e-15);
        assert_eq!(psm.get(0, 2), 0.0);
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(psm.get(i, k), psm.get(k, i));
            }
        }
    }

    #[test]
    fn partition_search_identity_and_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 7;
        // Identity similarity: all singletons.
        let mut vals = vec![0.0; n * n];
        for i in 0..n {
            vals[i * n + i] = 1.0;
        }
        let psm = CoclusteringMatrix::from_values(n, vals).unwrap();
        let part = select_partition(&psm, 4, &mut rng);
        assert_eq!(part.n_clusters(), n);
        // All-ones similarity: one cluster.
        let psm = CoclusteringMatrix::from_values(n, vec![1.0; n * n]).unwrap();
        let part = select_partition(&psm, 4, &mut rng);
        assert_eq!(part.n_clusters(), 1);
    }

    #[test]
    fn partition_search_matches_exhaustive_minimizer() {
        // Random similarity matrices from random label draws, n <= 8:
        // the greedy search must attain the exhaustive Binder minimum.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rep in 0..20 {
            let n = 5 + (rep % 4);
            // Build a PSM from a handful of random partitions.
            let mut vals = vec![0.0; n * n];
            let n_draws = 12;
            for _ in 0..n_draws {
                let mut labels = vec![0usize; n];
                for l in labels.iter_mut() {
                    *l = rng.random_range(0..3);
                }
                for i in 0..n {
                    for k in 0..n {
                        if labels[i] == labels[k] {
                            vals[i * n + k] += 1.0 / n_draws as f64;
                        }
                    }
                }
            }
            let psm = CoclusteringMatrix::from_values(n, vals).unwrap();
            let got = select_partition(&psm, BINDER_CANDIDATES, &mut rng);
            let got_loss = binder_loss(got.labels(), &psm);
            let best = set_partitions(n)
                .into_iter()
                .map(|labels| binder_loss(&labels, &psm))
                .fold(f64::INFINITY, f64::min);
            assert!(
                (got_loss - best).abs() < 1e-10,
                "rep {rep}: greedy {got_loss} vs exhaustive {best}"
            );
        }
    }

    #[test]
    fn block_similarity_recovers_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let mut vals = vec![0.1; n * n];
        for i in 0..n {
            for k in 0..n {
                if (i < 3) == (k < 3) {
                    vals[i * n + k] = 0.9;
                }
            }
            vals[i * n + i] = 1.0;
        }
        let psm = CoclusteringMatrix::from_values(n, vals).unwrap();
        let part = select_partition(&psm, 8, &mut rng);
        assert_eq!(part.n_clusters(), 2);
        assert_eq!(part.labels()[..3], [0, 0, 0]);
        assert_eq!(part.labels()[3..], [1, 1, 1]);
        // And it attains the exhaustive optimum.
        let best = set_partitions(n)
            .into_iter()
            .map(|labels| binder_loss(&labels, &psm))
            .fold(f64::INFINITY, f64::min);
        assert!((binder_loss(part.labels(), &psm) - best).abs() < 1e-12);
    }

    #[test]
    fn posterior_tau_degenerate_single_atom() {
        // Single Clayton atom theta*=2 with overwhelming occupancy: tau
        // samples concentrate at 0.5.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 400;
        let recs: Vec<DrawRecord> = (0..300)
            .map(|_| DrawRecord {
                iteration: 0,
                a: 1e-6,
                b: 1e-6,
                labels: vec![0; n],
                theta_star: vec![2.0],
                log_densities: vec![0.0; n],
            })
            .collect();
        let draws = fake_draws(recs, n, 2);
        let g0 = CenteringMeasure::default_for(CopulaFamily::Clayton);
        let est = posterior_tau(&draws, &g0, &mut rng);
        assert!((est.point - 0.5).abs() < 0.02, "point {}", est.point);
        // Samples stay within the tau hull of atoms plus centering draws.
        assert!(est.samples.iter().all(|&t| (-1.0..1.0).contains(&t)));
        let lo = est.samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = est.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(est.point >= lo && est.point <= hi);
        assert!(est.ci_low <= est.point && est.point <= est.ci_high);
    }

    #[test]
    fn density_grid_independence_is_flat_and_normalized() {
        // Draws concentrated on Gumbel theta=1 (independence).
        let n = 50;
        let recs: Vec<DrawRecord> = (0..100)
            .map(|_| DrawRecord {
                iteration: 0,
                a: 1e-9,
                b: 1e-9,
                labels: vec![0; n],
                theta_star: vec![1.0],
                log_densities: vec![0.0; n],
            })
            .collect();
        let mut draws = fake_draws(recs, n, 2);
        draws.family = CopulaFamily::Gumbel;
        let g0 = CenteringMeasure::default_for(CopulaFamily::Gumbel);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let grid = density_grid(&draws, &g0, 64, (0, 1), &mut rng).unwrap();
        assert!(grid.values.iter().all(|&v| v >= 0.0));
        let riemann: f64 = grid.values.iter().sum::<f64>() / (64.0 * 64.0);
        assert!((riemann - 1.0).abs() < 2e-2, "integral {riemann}");
        // Atom weight is ~1, so the grid is ~1 everywhere up to the small
        // fresh-draw contribution.
        for &v in &grid.values {
            assert!((v - 1.0).abs() < 0.2, "cell value {v}");
        }
    }

    #[test]
    fn density_grid_from_real_fit_normalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let t = Theta::new(CopulaFamily::Clayton, 6.0).unwrap();
        let data =
            Dataset::from_points(sample_copula(&t, 2, 80, &mut rng).unwrap(), None).unwrap();
        let config = McmcConfig::new(CopulaFamily::Clayton, 400, 200, 2, 3);
        let draws = run_chain(&config, &data).unwrap();
        let g0 = CenteringMeasure::default_for(CopulaFamily::Clayton);
        let grid = density_grid(&draws, &g0, 200, (0, 1), &mut rng).unwrap();
        let riemann: f64 = grid.values.iter().sum::<f64>() / (200.0f64 * 200.0);
        assert!((riemann - 1.0).abs() < 2e-2, "integral {riemann}");
        // Clayton lower-tail dependence: mass at (0.05, 0.05) beats (0.95, 0.95).
        let g = 200;
        let at = |u: f64, v: f64| grid.values[(u * g as f64) as usize * g + (v * g as f64) as usize];
        assert!(at(0.05, 0.05) > at(0.95, 0.95));
    }

    #[test]
    fn modal_cluster_count_majority() {
        let recs = vec![
            record(vec![0, 0, 0], vec![1.0], vec![0.0; 3]),
            record(vec![0, 1, 0], vec![1.0, 2.0], vec![0.0; 3]),
            record(vec![0, 1, 0], vec![1.0, 2.0], vec![0.0; 3]),
        ];
        assert_eq!(modal_cluster_count(&fake_draws(recs, 3, 2)), 2);
    }

    #[test]
    fn refit_separates_well_separated_clusters() {
        // Data: two Clayton components far apart; partition given.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let neg = sample_copula(&Theta::new(CopulaFamily::Clayton, -0.5).unwrap(), 2, 60, &mut rng)
            .unwrap();
        let pos = sample_copula(&Theta::new(CopulaFamily::Clayton, 10.0).unwrap(), 2, 60, &mut rng)
            .unwrap();
        let mut pts = neg;
        pts.extend(pos);
        let data = Dataset::from_points(pts, None).unwrap();
        let labels: Vec<usize> = (0..120).map(|i| usize::from(i >= 60)).collect();
        let partition = Partition::from_labels(&labels);
        // Original-chain draws only feed the weights; synthesize a few.
        let recs: Vec<DrawRecord> = (0..50)
            .map(|_| DrawRecord {
                iteration: 0,
                a: 0.1,
                b: 0.5,
                labels: labels.clone(),
                theta_star: vec![-0.4, 9.0],
                log_densities: vec![0.0; 120],
            })
            .collect();
        let draws = fake_draws(recs, 120, 2);
        let g0 = CenteringMeasure::default_for(CopulaFamily::Clayton);
        let summaries = post_mcmc_refit(&partition, &data, &g0, &draws, &mut rng).unwrap();
        assert_eq!(summaries.len(), 2);
        assert!(summaries[0].theta_high < 0.0, "negative component CI {:?}", (summaries[0].theta_low, summaries[0].theta_high));
        assert!(summaries[1].theta_low > 5.0, "strong component CI {:?}", (summaries[1].theta_low, summaries[1].theta_high));
        let wsum: f64 = summaries.iter().map(|s| s.weight).sum();
        assert!(wsum > 0.8 && wsum < 1.0, "weights sum {wsum}");
    }

    #[test]
    fn gumbel_single_cluster_refit_respects_boundary() {
        // Independence-ish data with a Gumbel kernel: the interval's lower
        // end stays at or above the parameter-space boundary 1.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let pts = sample_copula(&Theta::new(CopulaFamily::Gumbel, 1.05).unwrap(), 2, 80, &mut rng)
            .unwrap();
        let data = Dataset::from_points(pts, None).unwrap();
        let labels = vec![0usize; 80];
        let partition = Partition::from_labels(&labels);
        let recs: Vec<DrawRecord> = (0..40)
            .map(|_| DrawRecord {
                iteration: 0,
                a: 0.1,
                b: 0.5,
                labels: labels.clone(),
                theta_star: vec![1.1],
                log_densities: vec![0.0; 80],
            })
            .collect();
        let draws = fake_draws(recs, 80, 2);
        let g0 = CenteringMeasure::default_for(CopulaFamily::Gumbel);
        let summaries = post_mcmc_refit(&partition, &data, &g0, &draws, &mut rng).unwrap();
        assert!(summaries[0].theta_low >= 1.0);
        assert!(summaries[0].theta_low < summaries[0].theta_high);
    }

    #[test]
    fn predictive_theta_uses_urn_masses() {
        // With a ~ 0, b ~ 0 and one atom holding all n observations, the
        // predictive draw is the atom with probability n/(b+n) ~ 1.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let d = DrawRecord {
            iteration: 0,
            a: 0.0,
            b: 1e-12,
            labels: vec![0; 1000],
            theta_star: vec![4.0],
            log_densities: vec![0.0; 1000],
        };
        let g0 = CenteringMeasure::default_for(CopulaFamily::Clayton);
        let hyper = PdHyper::new(d.a, d.b).unwrap();
        let w = urn_weights(&hyper, d.counts().sizes());
        assert!(w.new_cluster < 1e-14);
        for _ in 0..50 {
            let t = predictive_theta(&d, &g0, &mut rng);
            assert_eq!(t.value(), 4.0);
        }
    }
}
