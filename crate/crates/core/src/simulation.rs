//! Data generators for the numerical experiments: finite Archimedean
//! mixtures, the bivariate Gaussian copula (benchmark only), and named
//! presets reproducing each experiment configuration.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::copula::{sample_copula, CopulaFamily, Theta, UnitPoint, EVAL_HI, EVAL_LO};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::numeric::{mean, quantile};
use crate::prior::mixture_tau;
use crate::sampler::{
    log_accept_truncated_uniform, BATCH_SIZE, INIT_KAPPA_THETA, TARGET_HIGH, TARGET_LOW,
};

/// A finite mixture of same-family Archimedean copulas.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    pub family: CopulaFamily,
    pub weights: Vec<f64>,
    pub thetas: Vec<f64>,
    pub p: usize,
    pub n: usize,
}

impl MixtureSpec {
    pub fn new(
        family: CopulaFamily,
        weights: Vec<f64>,
        thetas: Vec<f64>,
        p: usize,
        n: usize,
    ) -> Result<Self> {
        if weights.len() != thetas.len() || weights.is_empty() {
            return Err(Error::InvalidInput(
                "mixture needs matching, nonempty weights and parameters".into(),
            ));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidInput("mixture weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("mixture weights sum to {total}")));
        }
        for &t in &thetas {
            Theta::for_dim(family, t, p)?;
        }
        if n == 0 || p < 2 {
            return Err(Error::InvalidInput("need n >= 1 and p >= 2".into()));
        }
        Ok(MixtureSpec {
            family,
            weights,
            thetas,
            p,
            n,
        })
    }

    /// Mixture Kendall tau: the weighted mean of the component taus.
    pub fn true_tau(&self) -> f64 {
        let thetas: Vec<Theta> = self
            .thetas
            .iter()
            .map(|&v| Theta::unchecked(self.family, v))
            .collect();
        mixture_tau(&self.weights, &thetas).expect("validated at construction")
    }
}

/// Draws a dataset from the mixture: component index from the weights,
/// then an exact copula draw from that component.
pub fn sample_mixture<R: Rng + ?Sized>(spec: &MixtureSpec, rng: &mut R) -> Result<Dataset> {
    let mut points = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut comp = spec.weights.len() - 1;
        for (k, &w) in spec.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                comp = k;
                break;
            }
        }
        let theta = Theta::unchecked(spec.family, spec.thetas[comp]);
        points.extend(sample_copula(&theta, spec.p, 1, rng)?);
    }
    Dataset::from_points(points, None)
}

/// Bivariate Gaussian copula pieces; benchmark model only.
pub mod gaussian {
    use super::*;

    fn std_normal() -> Normal {
        Normal::new(0.0, 1.0).unwrap()
    }

    /// Kendall tau of the Gaussian copula: (2/pi) arcsin(rho).
    pub fn gaussian_tau(rho: f64) -> f64 {
        2.0 / std::f64::consts::PI * rho.asin()
    }

    /// Log-density of the bivariate Gaussian copula at (u1, u2).
    pub fn gaussian_copula_log_density(rho: f64, u1: f64, u2: f64) -> f64 {
        if rho == 0.0 {
            return 0.0;
        }
        let n = std_normal();
        let x = n.inverse_cdf(u1);
        let y = n.inverse_cdf(u2);
        let r2 = 1.0 - rho * rho;
        -0.5 * r2.ln() - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)
    }

    /// Draws from the bivariate Gaussian copula with correlation `rho`.
    pub fn gaussian_copula_sample<R: Rng + ?Sized>(
        rho: f64,
        n: usize,
        rng: &mut R,
    ) -> Result<Dataset> {
        if !(-1.0..1.0).contains(&rho) {
            return Err(Error::InvalidInput(format!("rho={rho} outside (-1, 1)")));
        }
        let nd = std_normal();
        let s = (1.0 - rho * rho).sqrt();
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let z1: f64 = StandardNormal.sample(rng);
            let eps: f64 = StandardNormal.sample(rng);
            let z2 = rho * z1 + s * eps;
            points.push(UnitPoint::pair(
                nd.cdf(z1).clamp(EVAL_LO, EVAL_HI),
                nd.cdf(z2).clamp(EVAL_LO, EVAL_HI),
            )?);
        }
        Dataset::from_points(points, None)
    }

    /// Equal-or-weighted mixture of Gaussian copulas.
    pub fn gaussian_mixture_sample<R: Rng + ?Sized>(
        rhos: &[f64],
        weights: &[f64],
        n: usize,
        rng: &mut R,
    ) -> Result<Dataset> {
        if rhos.len() != weights.len() || rhos.is_empty() {
            return Err(Error::InvalidInput("mismatched mixture arrays".into()));
        }
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut comp = rhos.len() - 1;
            for (k, &w) in weights.iter().enumerate() {
                acc += w;
                if u < acc {
                    comp = k;
                    break;
                }
            }
            let one = gaussian_copula_sample(rhos[comp], 1, rng)?;
            points.push(one.point(0).clone());
        }
        Dataset::from_points(points, None)
    }

    /// Posterior summaries of the single-parameter Gaussian benchmark fit.
    #[derive(Debug, Clone)]
    pub struct GaussianFit {
        pub rho_draws: Vec<f64>,
        pub tau_hat: f64,
        pub ci_low: f64,
        pub ci_high: f64,
        pub lpml: f64,
        /// Post-burn-in acceptance rate of the rho walk.
        pub acceptance: f64,
    }

    /// Random-walk MH over rho with a uniform prior on (-1, 1): uniform
    /// proposals truncated to the interval (with the induced Hastings
    /// correction), batch-adapted toward the [0.3, 0.4] band during
    /// burn-in, LPML from the same conditional-predictive-ordinate
    /// estimator as the mixture model.
    pub fn gaussian_benchmark_fit<R: Rng + ?Sized>(
        data: &Dataset,
        n_iter: usize,
        burn_in: usize,
        thin: usize,
        rng: &mut R,
    ) -> Result<GaussianFit> {
        if data.p() != 2 {
            return Err(Error::InvalidInput(
                "gaussian benchmark handles bivariate data only".into(),
            ));
        }
        if burn_in >= n_iter || thin == 0 {
            return Err(Error::InvalidInput("need burn_in < n_iter and thin >= 1".into()));
        }
        let log_like = |rho: f64| -> f64 {
            if !(-1.0..1.0).contains(&rho) {
                return f64::NEG_INFINITY;
            }
            data.points()
                .iter()
                .map(|u| gaussian_copula_log_density(rho, u.coords()[0], u.coords()[1]))
                .sum()
        };
        let mut rho = 0.0;
        let mut kappa = INIT_KAPPA_THETA;
        let mut accepted = 0usize;
        let mut proposed = 0usize;
        let mut post_accepted = 0usize;
        let mut post_proposed = 0usize;
        let mut rho_draws = Vec::with_capacity((n_iter - burn_in) / thin);
        let mut per_obs: Vec<Vec<f64>> = Vec::with_capacity((n_iter - burn_in) / thin);
        for it in 1..=n_iter {
            let plo = (rho - kappa).max(-1.0);
            let phi = (rho + kappa).min(1.0);
            let prop = rng.random_range(plo..phi);
            let log_acc = log_accept_truncated_uniform(log_like, -1.0, 1.0, kappa, rho, prop);
            let accept = rng.random::<f64>().ln() < log_acc;
            if accept {
                rho = prop;
            }
            if it > burn_in {
                post_proposed += 1;
                post_accepted += usize::from(accept);
            } else {
                proposed += 1;
                accepted += usize::from(accept);
                if it % BATCH_SIZE == 0 {
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
            }
            if it > burn_in && (it - burn_in) % thin == 0 {
                rho_draws.push(rho);
                per_obs.push(
                    data.points()
                        .iter()
                        .map(|u| gaussian_copula_log_density(rho, u.coords()[0], u.coords()[1]))
                        .collect(),
                );
            }
        }

        let taus: Vec<f64> = rho_draws.iter().map(|&r| gaussian_tau(r)).collect();
        let n = data.n();
        let l = rho_draws.len();
        let mut lpml_total = 0.0;
        let mut neg = vec![0.0; l];
        for i in 0..n {
            for (k, row) in per_obs.iter().enumerate() {
                neg[k] = -row[i];
            }
            lpml_total += -crate::numeric::log_mean_exp(&neg);
        }
        Ok(GaussianFit {
            tau_hat: mean(&taus),
            ci_low: quantile(&taus, 0.025),
            ci_high: quantile(&taus, 0.975),
            lpml: lpml_total,
            acceptance: post_accepted as f64 / post_proposed as f64,
            rho_draws,
        })
    }
}

/// A named experiment configuration.
#[derive(Debug, Clone)]
pub enum Preset {
    Archimedean(MixtureSpec),
    Gaussian { rho: f64, n: usize },
    GaussianMixture { rhos: [f64; 2], weights: [f64; 2], n: usize },
}

/// The experiment presets: two-component bivariate mixtures per family at
/// n in {200, 500}, the Gaussian single/mixture pair at n = 500, and the
/// three four-dimensional three-component Clayton settings at n = 1000.
pub fn preset(name: &str) -> Option<Preset> {
    let sim1 = |family: CopulaFamily, t1: f64, t2: f64, n: usize| {
        Some(Preset::Archimedean(
            MixtureSpec::new(family, vec![0.5, 0.5], vec![t1, t2], 2, n).expect("valid preset"),
        ))
    };
    let sim3 = |thetas: [f64; 3], n: usize| {
        Some(Preset::Archimedean(
            MixtureSpec::new(
                CopulaFamily::Clayton,
                vec![0.2, 0.3, 0.5],
                thetas.to_vec(),
                4,
                n,
            )
            .expect("valid preset"),
        ))
    };
    match name {
        "sim1-amh-200" => sim1(CopulaFamily::Amh, -0.8, 0.8, 200),
        "sim1-amh-500" => sim1(CopulaFamily::Amh, -0.8, 0.8, 500),
        "sim1-cla-200" => sim1(CopulaFamily::Clayton, -0.5, 10.0, 200),
        "sim1-cla-500" => sim1(CopulaFamily::Clayton, -0.5, 10.0, 500),
        "sim1-fra-200" => sim1(CopulaFamily::Frank, -5.0, 5.0, 200),
        "sim1-fra-500" => sim1(CopulaFamily::Frank, -5.0, 5.0, 500),
        "sim1-gum-200" => sim1(CopulaFamily::Gumbel, 5.0, 10.0, 200),
        "sim1-gum-500" => sim1(CopulaFamily::Gumbel, 5.0, 10.0, 500),
        "sim1-joe-200" => sim1(CopulaFamily::Joe, 2.0, 10.0, 200),
        "sim1-joe-500" => sim1(CopulaFamily::Joe, 2.0, 10.0, 500),
        "sim2-gauss" => Some(Preset::Gaussian { rho: 0.7, n: 500 }),
        "sim2-gaussmix" => Some(Preset::GaussianMixture {
            rhos: [-0.7, 0.7],
            weights: [0.5, 0.5],
            n: 500,
        }),
        "sim3-s1" => sim3([1.0, 5.0, 15.0], 1000),
        "sim3-s2" => sim3([2.0, 5.0, 10.0], 1000),
        "sim3-s3" => sim3([2.0, 7.0, 15.0], 1000),
        _ => None,
    }
}

pub fn preset_names() -> Vec<&'static str> {
    vec![
        "sim1-amh-200",
        "sim1-amh-500",
        "sim1-cla-200",
        "sim1-cla-500",
        "sim1-fra-200",
        "sim1-fra-500",
        "sim1-gum-200",
        "sim1-gum-500",
        "sim1-joe-200",
        "sim1-joe-500",
        "sim2-gauss",
        "sim2-gaussmix",
        "sim3-s1",
        "sim3-s2",
        "sim3-s3",
    ]
}

/// Draws the dataset a preset describes.
pub fn sample_preset<R: Rng + ?Sized>(p: &Preset, rng: &mut R) -> Result<Dataset> {
    match p {
        Preset::Archimedean(spec) => sample_mixture(spec, rng),
        Preset::Gaussian { rho, n } => gaussian::gaussian_copula_sample(*rho, *n, rng),
        Preset::GaussianMixture { rhos, weights, n } => {
            gaussian::gaussian_mixture_sample(rhos, weights, *n, rng)
        }
    }
}
