//! Marginalized Gibbs sampler for the Poisson-Dirichlet mixture of
//! Archimedean copulas.
//!
//! One sweep performs, in order: auxiliary-variable label updates
//! (Algorithm-8 style cluster reassignment through the Polya urn), a
//! Metropolis-Hastings refresh of each distinct parameter with a uniform
//! random walk truncated to the parameter space, and MH updates of the
//! process parameters (a, b) against the EPPF times the hyperprior.
//! Step sizes adapt on batches of 50 iterations during burn-in and are
//! frozen afterwards, so the kept chain has a fixed kernel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::ln_gamma;

use crate::copula::{CopulaFamily, Theta};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numeric::sample_log_categorical;
use crate::prior::{eppf_log, hyperprior_log_density, CenteringMeasure, ClusterCounts, HyperPrior, PdHyper};

/// Iterations per adaptation batch.
pub const BATCH_SIZE: usize = 50;
/// Target acceptance band.
pub const TARGET_LOW: f64 = 0.3;
pub const TARGET_HIGH: f64 = 0.4;
/// Step-size clamp applied in bounded adaptation mode.
pub const KAPPA_MIN: f64 = 1e-4;
pub const KAPPA_MAX: f64 = 1e4;
/// Starting step sizes.
pub const INIT_KAPPA_THETA: f64 = 0.1;
pub const INIT_KAPPA_A: f64 = 1.0;
pub const INIT_KAPPA_B: f64 = 1.0;

const MAX_INIT_ATTEMPTS: usize = 10_000;

/// Step-size adaptation rule.
///
/// `PaperLiteral` applies the quoted batch rules verbatim, including the
/// e^sqrt(j) factor for kappa_a/kappa_b (which grows explosively) and the
/// widen-on-low-acceptance direction for kappa_a. `Bounded` (default)
/// replaces the exponent sqrt(j) by min(0.01, j^-1/2), uses the direction
/// that actually pushes acceptance toward the target band for kappa_a,
/// and clamps every step size to [1e-4, 1e4].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdaptMode {
    #[default]
    Bounded,
    PaperLiteral,
}

/// Likelihood used by the sampler; `Constant` replaces every copula density
/// by one, turning the chain into a prior sampler for exactness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Likelihood {
    #[default]
    Copula,
    Constant,
}

/// Full sampler configuration.
#[derive(Debug, Clone)]
pub struct McmcConfig {
    pub family: CopulaFamily,
    pub g0: CenteringMeasure,
    pub hyper_prior: HyperPrior,
    /// Auxiliary draws per observation in the label update.
    pub r_aux: usize,
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub adapt: AdaptMode,
    pub likelihood: Likelihood,
}

impl McmcConfig {
    pub fn new(family: CopulaFamily, n_iter: usize, burn_in: usize, thin: usize, seed: u64) -> Self {
        McmcConfig {
            family,
            g0: CenteringMeasure::default_for(family),
            hyper_prior: HyperPrior::default(),
            r_aux: 3,
            n_iter,
            burn_in,
            thin,
            seed,
            adapt: AdaptMode::default(),
            likelihood: Likelihood::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_iter {
            return Err(Error::InvalidInput(format!(
                "burn_in {} must be below n_iter {}",
                self.burn_in, self.n_iter
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidInput("thin must be at least 1".into()));
        }
        if self.r_aux == 0 {
            return Err(Error::InvalidInput("r_aux must be at least 1".into()));
        }
        if self.g0.family() != self.family {
            return Err(Error::InvalidInput(format!(
                "centering measure is for {}, sampler for {}",
                self.g0.family(),
                self.family
            )));
        }
        Ok(())
    }
}

/// Current sampler state: labels into `theta_star`, occupancy counts,
/// process parameters and step sizes.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub labels: Vec<usize>,
    pub theta_star: Vec<f64>,
    pub counts: Vec<usize>,
    pub hyper: PdHyper,
    pub kappa_theta: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub iteration: usize,
}

impl ChainState {
    pub fn cluster_count(&self) -> usize {
        self.theta_star.len()
    }

    /// Structural invariants: labels point at live clusters, counts match,
    /// sizes sum to n.
    pub fn is_consistent(&self) -> bool {
        if self.theta_star.len() != self.counts.len() {
            return false;
        }
        let mut recount = vec![0usize; self.counts.len()];
        for &l in &self.labels {
            if l >= self.counts.len() {
                return false;
            }
            recount[l] += 1;
        }
        recount == self.counts && self.counts.iter().all(|&c| c > 0)
    }
}

/// Per-batch acceptance rates and step sizes. Rates are NaN when the batch
/// contained no corresponding proposals.
#[derive(Debug, Clone, Copy)]
pub struct BatchRecord {
    pub batch: usize,
    pub iteration: usize,
    pub accept_theta: f64,
    pub accept_a: f64,
    pub accept_b: f64,
    pub kappa_theta: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
}

/// One kept draw: canonical labels (first-appearance order), the distinct
/// parameter values, and the per-observation log copula densities.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawRecord {
    pub iteration: usize,
    pub a: f64,
    pub b: f64,
    pub labels: Vec<usize>,
    pub theta_star: Vec<f64>,
    pub log_densities: Vec<f64>,
}

impl DrawRecord {
    pub fn cluster_count(&self) -> usize {
        self.theta_star.len()
    }

    pub fn counts(&self) -> ClusterCounts {
        ClusterCounts::from_labels(&self.labels)
    }
}

/// Thinned post-burn-in draws plus the batch diagnostics of the whole run.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    pub family: CopulaFamily,
    pub n: usize,
    pub p: usize,
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub draws: Vec<DrawRecord>,
    pub batches: Vec<BatchRecord>,
    pub final_kappa_theta: f64,
    pub final_kappa_a: f64,
    pub final_kappa_b: f64,
}

/// Log acceptance ratio for a uniform random-walk move truncated to
/// `(lo, hi)`: target difference plus the ratio of proposal-interval
/// lengths (the Hastings correction the truncation induces).
pub(crate) fn log_accept_truncated_uniform<F: Fn(f64) -> f64>(
    log_target: F,
    lo: f64,
    hi: f64,
    kappa: f64,
    cur: f64,
    prop: f64,
) -> f64 {
    let len = |x: f64| (x + kappa).min(hi) - (x - kappa).max(lo);
    log_target(prop) - log_target(cur) + len(cur).ln() - len(prop).ln()
}

fn log_gamma_density(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

/// Log acceptance ratio for the gamma random-walk move b' ~ Ga(kappa, kappa/b):
/// target difference plus the asymmetric-proposal Hastings correction.
pub(crate) fn log_accept_gamma_walk<F: Fn(f64) -> f64>(
    log_target: F,
    kappa: f64,
    cur: f64,
    prop: f64,
) -> f64 {
    log_target(prop) - log_target(cur) + log_gamma_density(cur, kappa, kappa / prop)
        - log_gamma_density(prop, kappa, kappa / cur)
}

#[derive(Debug, Default, Clone, Copy)]
struct AcceptCounter {
    accepted: usize,
    total: usize,
}

impl AcceptCounter {
    fn rate(&self) -> f64 {
        if self.total == 0 {
            f64::NAN
        } else {
            self.accepted as f64 / self.total as f64
        }
    }
}

/// The Gibbs sampler. Individual update steps are public so that tests can
/// compose partial kernels (fixed hyperparameters, single observations).
pub struct Sampler<'d> {
    config: McmcConfig,
    data: &'d Dataset,
    pub state: ChainState,
    rng: ChaCha8Rng,
    acc_theta: AcceptCounter,
    acc_a: AcceptCounter,
    acc_b: AcceptCounter,
}

impl<'d> Sampler<'d> {
    pub fn new(config: McmcConfig, data: &'d Dataset) -> Result<Self> {
        config.validate()?;
        let p = data.p();
        if p > 4 && config.family != CopulaFamily::Clayton {
            return Err(Error::UnsupportedDimension {
                family: config.family,
                value: f64::NAN,
                dim: p,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let hyper = config.hyper_prior.sample(&mut rng);

        // Every observation starts in its own cluster with a parameter
        // drawn from the centering measure, retried until the observation
        // has positive density under it.
        let n = data.n();
        let mut theta_star = Vec::with_capacity(n);
        for i in 0..n {
            let mut ok = None;
            for _ in 0..MAX_INIT_ATTEMPTS {
                let t = config.g0.sample(&mut rng);
                if !config.family.admits_in_dim(t.value(), p) {
                    continue;
                }
                if log_f_for(&config, data, i, t.value()).is_finite() {
                    ok = Some(t.value());
                    break;
                }
            }
            match ok {
                Some(v) => theta_star.push(v),
                None => {
                    return Err(Error::NonFiniteDensity {
                        observation: i,
                        theta: f64::NAN,
                    })
                }
            }
        }
        let state = ChainState {
            labels: (0..n).collect(),
            counts: vec![1; n],
            theta_star,
            hyper,
            kappa_theta: INIT_KAPPA_THETA,
            kappa_a: INIT_KAPPA_A,
            kappa_b: INIT_KAPPA_B,
            iteration: 0,
        };
        Ok(Sampler {
            config,
            data,
            state,
            rng,
            acc_theta: AcceptCounter::default(),
            acc_a: AcceptCounter::default(),
            acc_b: AcceptCounter::default(),
        })
    }

    pub fn config(&self) -> &McmcConfig {
        &self.config
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// log f_C(u_i | theta) under the configured likelihood.
    pub fn log_f(&self, i: usize, theta_value: f64) -> f64 {
        log_f_for(&self.config, self.data, i, theta_value)
    }

    /// Steps (i)-(ii): for each observation draw auxiliary parameters from
    /// g0 and reassign its cluster among existing atoms (weight
    /// (n_j - a) f_C) and auxiliaries (weight (b + a m)/r f_C each). When
    /// the observation is currently a singleton its own value is retained
    /// as the first auxiliary, matching the auxiliary-variable scheme's
    /// requirement for a correct stationary law.
    pub fn update_labels(&mut self) {
        let n = self.data.n();
        let p = self.data.p();
        let r = self.config.r_aux;
        let (a, b) = (self.state.hyper.a(), self.state.hyper.b());
        for i in 0..n {
            let old_label = self.state.labels[i];
            let was_singleton = self.state.counts[old_label] == 1;
            let old_theta = self.state.theta_star[old_label];

            // Detach observation i.
            self.state.counts[old_label] -= 1;
            if was_singleton {
                let last = self.state.theta_star.len() - 1;
                self.state.theta_star.swap_remove(old_label);
                self.state.counts.swap_remove(old_label);
                if old_label != last {
                    for l in self.state.labels.iter_mut() {
                        if *l == last {
                            *l = old_label;
                        }
                    }
                }
            }

            let m_i = self.state.theta_star.len();
            let mut aux = Vec::with_capacity(r);
            if was_singleton {
                aux.push(old_theta);
            }
            while aux.len() < r {
                let t = self.config.g0.sample(&mut self.rng);
                if self.config.family.admits_in_dim(t.value(), p) {
                    aux.push(t.value());
                }
            }

            let mut logw = Vec::with_capacity(m_i + r);
            for j in 0..m_i {
                logw.push((self.state.counts[j] as f64 - a).ln() + self.log_f(i, self.state.theta_star[j]));
            }
            // With no occupied atoms the new-draw factor is a shared
            // constant; dropping it also keeps b <= 0 harmless at n = 1.
            let log_new = if m_i == 0 {
                0.0
            } else {
                ((b + a * m_i as f64) / r as f64).ln()
            };
            for &t in &aux {
                logw.push(log_new + self.log_f(i, t));
            }

            let pick = sample_log_categorical(&logw, &mut self.rng);
            if pick < m_i {
                self.state.labels[i] = pick;
                self.state.counts[pick] += 1;
            } else {
                self.state.theta_star.push(aux[pick - m_i]);
                self.state.counts.push(1);
                self.state.labels[i] = self.state.theta_star.len() - 1;
            }
        }
    }

    /// Log conditional target of cluster j's parameter:
    /// g0(theta) * prod over members of f_C(u_i | theta).
    fn cluster_log_target(&self, j: usize, theta_value: f64) -> f64 {
        let mut v = self.config.g0.log_density(theta_value);
        if !v.is_finite() {
            return f64::NEG_INFINITY;
        }
        for (i, &l) in self.state.labels.iter().enumerate() {
            if l == j {
                v += self.log_f(i, theta_value);
                if !v.is_finite() {
                    return f64::NEG_INFINITY;
                }
            }
        }
        v
    }

    /// Step (iii): refresh each distinct parameter with a uniform random
    /// walk of half-width kappa_theta truncated to the parameter space,
    /// with the induced Hastings correction.
    pub fn refresh_unique(&mut self) {
        let p = self.data.p();
        let (lo, hi) = self.config.family.theta_interval(p);
        let kappa = self.state.kappa_theta;
        for j in 0..self.state.theta_star.len() {
            let cur = self.state.theta_star[j];
            let plo = (cur - kappa).max(lo);
            let phi = (cur + kappa).min(hi);
            let prop = self.rng.random_range(plo..phi);
            let log_acc = log_accept_truncated_uniform(
                |x| self.cluster_log_target(j, x),
                lo,
                hi,
                kappa,
                cur,
                prop,
            );
            self.acc_theta.total += 1;
            if self.rng.random::<f64>().ln() < log_acc {
                self.state.theta_star[j] = prop;
                self.acc_theta.accepted += 1;
            }
        }
    }

    /// Log conditional target for (a, b): EPPF times hyperprior, negative
    /// infinity off the support.
    fn hyper_log_target(&self, a: f64, b: f64) -> f64 {
        match PdHyper::new(a, b) {
            Ok(h) => {
                let counts = ClusterCounts::from_labels(&self.state.labels);
                eppf_log(&counts, &h) + hyperprior_log_density(&h, &self.config.hyper_prior)
            }
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Step (iv): MH update of a with a uniform random walk on
    /// (max{0, a - kappa_a}, min{a + kappa_a, 1}).
    pub fn update_a(&mut self) {
        let a = self.state.hyper.a();
        let b = self.state.hyper.b();
        let kappa = self.state.kappa_a;
        let plo = (a - kappa).max(0.0);
        let phi = (a + kappa).min(1.0);
        let prop = self.rng.random_range(plo..phi);
        let log_acc =
            log_accept_truncated_uniform(|x| self.hyper_log_target(x, b), 0.0, 1.0, kappa, a, prop);
        self.acc_a.total += 1;
        if self.rng.random::<f64>().ln() < log_acc {
            // prop > 0 and b > -a_old; b > -prop may fail, in which case the
            // target was -inf and we cannot be here.
            self.state.hyper = PdHyper::new(prop, b).expect("accepted a keeps b > -a");
            self.acc_a.accepted += 1;
        }
    }

    /// Step (v): MH update of b. From b > 0 the gamma random walk
    /// b' ~ Ga(kappa_b, kappa_b / b) is applied with its asymmetric
    /// Hastings correction; its acceptance drives the kappa_b adaptation.
    /// A truncated uniform random walk on (-a, inf) follows unconditionally:
    /// the gamma proposal never leaves (0, inf), so without it the region
    /// b <= 0 would be unreachable and the stationary law truncated.
    /// Both moves leave the conditional invariant.
    pub fn update_b(&mut self) {
        let a = self.state.hyper.a();

        let b = self.state.hyper.b();
        if b > 0.0 {
            let kappa = self.state.kappa_b;
            let prop: f64 = Gamma::new(kappa, b / kappa)
                .expect("positive gamma parameters")
                .sample(&mut self.rng);
            self.acc_b.total += 1;
            if prop > 0.0 {
                let log_acc =
                    log_accept_gamma_walk(|x| self.hyper_log_target(a, x), kappa, b, prop);
                if self.rng.random::<f64>().ln() < log_acc {
                    self.state.hyper = PdHyper::new(a, prop).expect("positive b accepted");
                    self.acc_b.accepted += 1;
                }
            }
        }

        let b = self.state.hyper.b();
        let kappa = self.state.kappa_b;
        let plo = (b - kappa).max(-a);
        let phi = b + kappa;
        let prop = self.rng.random_range(plo..phi);
        let log_acc = log_accept_truncated_uniform(
            |x| self.hyper_log_target(a, x),
            -a,
            f64::INFINITY,
            kappa,
            b,
            prop,
        );
        if self.rng.random::<f64>().ln() < log_acc {
            self.state.hyper = PdHyper::new(a, prop).expect("accepted b stays above -a");
        }
    }

    fn take_rates(&mut self) -> (f64, f64, f64) {
        let rates = (self.acc_theta.rate(), self.acc_a.rate(), self.acc_b.rate());
        self.acc_theta = AcceptCounter::default();
        self.acc_a = AcceptCounter::default();
        self.acc_b = AcceptCounter::default();
        rates
    }

    /// Applies the batch-j step-size rule to the acceptance rates
    /// accumulated since the previous batch boundary and returns the
    /// batch record. Called during burn-in only in `run`.
    pub fn adapt_step_sizes(&mut self, batch: usize) -> BatchRecord {
        let (ar_theta, ar_a, ar_b) = self.take_rates();
        let j = batch as f64;
        match self.config.adapt {
            AdaptMode::PaperLiteral => {
                let f_theta = 1.01f64.powf(j.sqrt());
                if ar_theta > TARGET_HIGH {
                    self.state.kappa_theta *= f_theta;
                } else if ar_theta < TARGET_LOW {
                    self.state.kappa_theta /= f_theta;
                }
                let f_ab = j.sqrt().exp();
                // Quoted direction: widen a's proposal when acceptance is low.
                if ar_a < TARGET_LOW {
                    self.state.kappa_a *= f_ab;
                } else if ar_a > TARGET_HIGH {
                    self.state.kappa_a /= f_ab;
                }
                if ar_b < TARGET_LOW {
                    self.state.kappa_b *= f_ab;
                } else if ar_b > TARGET_HIGH {
                    self.state.kappa_b /= f_ab;
                }
            }
            AdaptMode::Bounded => {
                let delta = 0.01f64.min(1.0 / j.sqrt());
                let f_theta = 1.01f64.powf(delta);
                if ar_theta > TARGET_HIGH {
                    self.state.kappa_theta *= f_theta;
                } else if ar_theta < TARGET_LOW {
                    self.state.kappa_theta /= f_theta;
                }
                let f_ab = delta.exp();
                // A wider uniform proposal lowers acceptance: shrink when low.
                if ar_a < TARGET_LOW {
                    self.state.kappa_a /= f_ab;
                } else if ar_a > TARGET_HIGH {
                    self.state.kappa_a *= f_ab;
                }
                // Gamma proposal variance is b^2/kappa_b: grow when low.
                if ar_b < TARGET_LOW {
                    self.state.kappa_b *= f_ab;
                } else if ar_b > TARGET_HIGH {
                    self.state.kappa_b /= f_ab;
                }
                self.state.kappa_theta = self.state.kappa_theta.clamp(KAPPA_MIN, KAPPA_MAX);
                self.state.kappa_a = self.state.kappa_a.clamp(KAPPA_MIN, KAPPA_MAX);
                self.state.kappa_b = self.state.kappa_b.clamp(KAPPA_MIN, KAPPA_MAX);
            }
        }
        BatchRecord {
            batch,
            iteration: self.state.iteration,
            accept_theta: ar_theta,
            accept_a: ar_a,
            accept_b: ar_b,
            kappa_theta: self.state.kappa_theta,
            kappa_a: self.state.kappa_a,
            kappa_b: self.state.kappa_b,
        }
    }

    fn frozen_batch_record(&mut self, batch: usize) -> BatchRecord {
        let (ar_theta, ar_a, ar_b) = self.take_rates();
        BatchRecord {
            batch,
            iteration: self.state.iteration,
            accept_theta: ar_theta,
            accept_a: ar_a,
            accept_b: ar_b,
            kappa_theta: self.state.kappa_theta,
            kappa_a: self.state.kappa_a,
            kappa_b: self.state.kappa_b,
        }
    }

    /// One full sweep: steps (i)-(v).
    pub fn sweep(&mut self) {
        self.update_labels();
        self.refresh_unique();
        self.update_a();
        self.update_b();
    }

    /// Canonical relabeling by first appearance plus per-observation log
    /// densities; errors if any observation has a non-finite log density.
    fn snapshot(&self, iteration: usize) -> Result<DrawRecord> {
        let n = self.data.n();
        let mut map = vec![usize::MAX; self.state.theta_star.len()];
        let mut labels = vec![0usize; n];
        let mut theta_star = Vec::with_capacity(self.state.theta_star.len());
        let mut next = 0usize;
        for i in 0..n {
            let raw = self.state.labels[i];
            if map[raw] == usize::MAX {
                map[raw] = next;
                theta_star.push(self.state.theta_star[raw]);
                next += 1;
            }
            labels[i] = map[raw];
        }
        let mut log_densities = Vec::with_capacity(n);
        for i in 0..n {
            let t = self.state.theta_star[self.state.labels[i]];
            let ld = self.log_f(i, t);
            if !ld.is_finite() {
                return Err(Error::NonFiniteDensity {
                    observation: i,
                    theta: t,
                });
            }
            log_densities.push(ld);
        }
        Ok(DrawRecord {
            iteration,
            a: self.state.hyper.a(),
            b: self.state.hyper.b(),
            labels,
            theta_star,
            log_densities,
        })
    }

    /// Runs the full chain: sweeps, burn-in adaptation, thinned snapshots.
    pub fn run(mut self) -> Result<PosteriorDraws> {
        let cfg = self.config.clone();
        let kept = (cfg.n_iter - cfg.burn_in) / cfg.thin;
        let mut draws = Vec::with_capacity(kept);
        let mut batches = Vec::with_capacity(cfg.n_iter / BATCH_SIZE);
        for t in 1..=cfg.n_iter {
            self.state.iteration = t;
            self.sweep();
            if t % BATCH_SIZE == 0 {
                let batch = t / BATCH_SIZE;
                if t <= cfg.burn_in {
                    batches.push(self.adapt_step_sizes(batch));
                } else {
                    batches.push(self.frozen_batch_record(batch));
                }
            }
            if t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0 {
                draws.push(self.snapshot(t)?);
            }
        }
        Ok(PosteriorDraws {
            family: cfg.family,
            n: self.data.n(),
            p: self.data.p(),
            n_iter: cfg.n_iter,
            burn_in: cfg.burn_in,
            thin: cfg.thin,
            seed: cfg.seed,
            draws,
            batches,
            final_kappa_theta: self.state.kappa_theta,
            final_kappa_a: self.state.kappa_a,
            final_kappa_b: self.state.kappa_b,
        })
    }
}

fn log_f_for(config: &McmcConfig, data: &Dataset, i: usize, theta_value: f64) -> f64 {
    match config.likelihood {
        Likelihood::Constant => 0.0,
        Likelihood::Copula => {
            let t = Theta::unchecked(config.family, theta_value);
            match t.log_density(data.point(i)) {
                Ok(v) if !v.is_nan() => v,
                _ => f64::NEG_INFINITY,
            }
        }
    }
}

/// Builds a sampler and runs the configured chain.
pub fn run_chain(config: &McmcConfig, data: &Dataset) -> Result<PosteriorDraws> {
    Sampler::new(config.clone(), data)?.run()
}
