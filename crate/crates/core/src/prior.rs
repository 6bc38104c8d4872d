//! The Poisson-Dirichlet process prior PD(a, b, G0): stick-breaking
//! representation, the marginal Polya-urn weights, the exchangeable
//! partition probability function (EPPF), the hyperprior on (a, b), and
//! family-specific centering measures with support equal to the copula
//! parameter space.
//!
//! The infinite mixture is never materialized; all inference goes through
//! the marginalized urn. Stick-breaking exists for prior-predictive checks.

use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution, Gamma, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::copula::{CopulaFamily, Theta, JOE_THETA_MIN};
use crate::error::{Error, Result};

/// Discount and strength parameters of the Poisson-Dirichlet process:
/// a in [0, 1), b > -a. a = 0 recovers the Dirichlet process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdHyper {
    a: f64,
    b: f64,
}

impl PdHyper {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&a) || !(b > -a) || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "PD parameters need a in [0,1), b > -a; got a={a}, b={b}"
            )));
        }
        Ok(PdHyper { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Beta(c_a, d_a) prior on a; shifted gamma Ga(b + a | c_b, d_b) on b given a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPrior {
    pub c_a: f64,
    pub d_a: f64,
    pub c_b: f64,
    pub d_b: f64,
}

impl Default for HyperPrior {
    /// Informative default favoring a small number of components.
    fn default() -> Self {
        HyperPrior {
            c_a: 1.0,
            d_a: 20.0,
            c_b: 1.0,
            d_b: 20.0,
        }
    }
}

impl HyperPrior {
    pub fn new(c_a: f64, d_a: f64, c_b: f64, d_b: f64) -> Result<Self> {
        if [c_a, d_a, c_b, d_b].iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidInput(
                "hyperprior shape/rate parameters must be positive".into(),
            ));
        }
        Ok(HyperPrior { c_a, d_a, c_b, d_b })
    }

    /// Draws (a, b) from the hyperprior.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PdHyper {
        let a = BetaDist::new(self.c_a, self.d_a).unwrap().sample(rng);
        let g: f64 = Gamma::new(self.c_b, 1.0 / self.d_b).unwrap().sample(rng);
        PdHyper { a, b: g - a }
    }
}

/// log f(a, b) = log Ga(b + a | c_b, d_b) + log Be(a | c_a, d_a);
/// negative infinity outside the support.
pub fn hyperprior_log_density(hyper: &PdHyper, hp: &HyperPrior) -> f64 {
    let (a, b) = (hyper.a, hyper.b);
    let g = b + a;
    if !(a > 0.0 && a < 1.0 && g > 0.0) {
        return f64::NEG_INFINITY;
    }
    let lg = hp.c_b * hp.d_b.ln() - ln_gamma(hp.c_b) + (hp.c_b - 1.0) * g.ln() - hp.d_b * g;
    let lb = ln_gamma(hp.c_a + hp.d_a) - ln_gamma(hp.c_a) - ln_gamma(hp.d_a)
        + (hp.c_a - 1.0) * a.ln()
        + (hp.d_a - 1.0) * (-a).ln_1p();
    lg + lb
}

/// Occupancy counts of the distinct clusters; all counts >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCounts {
    sizes: Vec<usize>,
}

impl ClusterCounts {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidInput(format!(
                "cluster sizes must be nonempty and positive: {sizes:?}"
            )));
        }
        Ok(ClusterCounts { sizes })
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        let m = labels.iter().max().map_or(0, |&l| l + 1);
        let mut sizes = vec![0usize; m];
        for &l in labels {
            sizes[l] += 1;
        }
        debug_assert!(sizes.iter().all(|&s| s > 0));
        ClusterCounts { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Log EPPF of the Poisson-Dirichlet process:
/// Gamma(b+1)/Gamma(b+n) * prod_{j<m} (b + j a) * prod_j Gamma(n_j - a)/Gamma(1 - a).
pub fn eppf_log(counts: &ClusterCounts, hyper: &PdHyper) -> f64 {
    let (a, b) = (hyper.a, hyper.b);
    let n = counts.n() as f64;
    let mut v = ln_gamma(b + 1.0) - ln_gamma(b + n);
    for j in 1..counts.m() {
        v += (b + j as f64 * a).ln();
    }
    for &nj in counts.sizes() {
        v += ln_gamma(nj as f64 - a) - ln_gamma(1.0 - a);
    }
    v
}

/// Polya-urn weights for one observation given the occupancy of the others.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnWeights {
    /// Mass on a fresh draw from the centering measure: (b + a m)/(b + n).
    pub new_cluster: f64,
    /// Mass on each existing atom: (n_j - a)/(b + n).
    pub atoms: Vec<f64>,
}

/// Conditional urn weights given `sizes`, the occupancy counts excluding
/// the observation being updated (the `n - 1` others). Weights sum to one.
pub fn urn_weights(hyper: &PdHyper, sizes: &[usize]) -> UrnWeights {
    if sizes.is_empty() {
        return UrnWeights {
            new_cluster: 1.0,
            atoms: Vec::new(),
        };
    }
    let (a, b) = (hyper.a, hyper.b);
    let total: usize = sizes.iter().sum();
    let denom = b + total as f64;
    UrnWeights {
        new_cluster: (b + a * sizes.len() as f64) / denom,
        atoms: sizes.iter().map(|&nj| (nj as f64 - a) / denom).collect(),
    }
}

/// Stick-breaking weights: omega_k = nu_k prod_{j<k} (1 - nu_j) with
/// nu_k ~ Be(1 - a, b + k a). Partial sums are strictly below one.
pub fn stick_breaking_weights<R: Rng + ?Sized>(
    hyper: &PdHyper,
    k: usize,
    rng: &mut R,
) -> Vec<f64> {
    let (a, b) = (hyper.a, hyper.b);
    let mut remaining = 1.0;
    let mut out = Vec::with_capacity(k);
    for j in 1..=k {
        let nu = BetaDist::new(1.0 - a, b + j as f64 * a)
            .expect("valid Beta parameters by PdHyper invariant")
            .sample(rng);
        out.push(remaining * nu);
        remaining *= 1.0 - nu;
    }
    out
}

/// Mixture Kendall tau: sum_k w_k tau(theta_k) for weights summing to one.
pub fn mixture_tau(weights: &[f64], thetas: &[Theta]) -> Result<f64> {
    if weights.len() != thetas.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} parameters",
            weights.len(),
            thetas.len()
        )));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidInput("mixture weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "mixture weights sum to {total}, expected 1"
        )));
    }
    Ok(weights
        .iter()
        .zip(thetas)
        .map(|(w, t)| w * t.kendall_tau())
        .sum())
}

/// Family-specific centering measure G0 with support equal to the copula
/// parameter space: uniform on (-1, 1) for AMH, shifted gammas for
/// Clayton/Gumbel/Joe (shifts -1, 1 and 0.238734), a normal for Frank.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteringMeasure {
    family: CopulaFamily,
    kind: G0Kind,
}

#[derive(Debug, Clone, PartialEq)]
enum G0Kind {
    Uniform { lo: f64, hi: f64 },
    ShiftedGamma { shape: f64, rate: f64, shift: f64 },
    Normal { mean: f64, precision: f64 },
}

impl CenteringMeasure {
    /// Shift placing the gamma support onto the family's parameter space.
    fn gamma_shift(family: CopulaFamily) -> Option<f64> {
        match family {
            CopulaFamily::Clayton => Some(-1.0),
            CopulaFamily::Gumbel => Some(1.0),
            CopulaFamily::Joe => Some(JOE_THETA_MIN),
            _ => None,
        }
    }

    /// The centering measures used by the numerical experiments:
    /// Un(-1, 1) for AMH, Ga(4, 1) shifted for Clayton/Gumbel/Joe,
    /// N(0, precision 4) for Frank.
    pub fn default_for(family: CopulaFamily) -> Self {
        match family {
            CopulaFamily::Amh => CenteringMeasure {
                family,
                kind: G0Kind::Uniform { lo: -1.0, hi: 1.0 },
            },
            CopulaFamily::Frank => CenteringMeasure {
                family,
                kind: G0Kind::Normal {
                    mean: 0.0,
                    precision: 4.0,
                },
            },
            _ => CenteringMeasure {
                family,
                kind: G0Kind::ShiftedGamma {
                    shape: 4.0,
                    rate: 1.0,
                    shift: Self::gamma_shift(family).unwrap(),
                },
            },
        }
    }

    /// Shifted-gamma centering for Clayton, Gumbel or Joe.
    pub fn with_gamma(family: CopulaFamily, shape: f64, rate: f64) -> Result<Self> {
        let shift = Self::gamma_shift(family).ok_or_else(|| {
            Error::InvalidInput(format!("{family} does not use a gamma centering measure"))
        })?;
        if !(shape > 0.0 && rate > 0.0) {
            return Err(Error::InvalidInput(
                "gamma centering needs positive shape and rate".into(),
            ));
        }
        Ok(CenteringMeasure {
            family,
            kind: G0Kind::ShiftedGamma { shape, rate, shift },
        })
    }

    /// Normal centering for Frank.
    pub fn with_normal(family: CopulaFamily, mean: f64, precision: f64) -> Result<Self> {
        if family != CopulaFamily::Frank {
            return Err(Error::InvalidInput(format!(
                "{family} does not use a normal centering measure"
            )));
        }
        if !(precision > 0.0) {
            return Err(Error::InvalidInput(
                "normal centering needs positive precision".into(),
            ));
        }
        Ok(CenteringMeasure {
            family,
            kind: G0Kind::Normal { mean, precision },
        })
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Theta {
        loop {
            let v = match &self.kind {
                G0Kind::Uniform { lo, hi } => rng.random_range(*lo..*hi),
                G0Kind::ShiftedGamma { shape, rate, shift } => {
                    let g: f64 = Gamma::new(*shape, 1.0 / rate).unwrap().sample(rng);
                    g + shift
                }
                G0Kind::Normal { mean, precision } => {
                    let z: f64 = StandardNormal.sample(rng);
                    mean + z / precision.sqrt()
                }
            };
            // Excluded interior points (Clayton/Frank zero) have measure
            // zero but would poison Theta construction.
            if self.family.admits(v) {
                return Theta::unchecked(self.family, v);
            }
        }
    }

    /// log g0(value); negative infinity outside the support.
    pub fn log_density(&self, value: f64) -> f64 {
        match &self.kind {
            G0Kind::Uniform { lo, hi } => {
                if value > *lo && value < *hi {
                    -(hi - lo).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            G0Kind::ShiftedGamma { shape, rate, shift } => {
                let x = value - shift;
                if x <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                shape * rate.ln() - ln_gamma(*shape) + (shape - 1.0) * x.ln() - rate * x
            }
            G0Kind::Normal { mean, precision } => {
                0.5 * (precision.ln() - (2.0 * std::f64::consts::PI).ln())
                    - 0.5 * precision * (value - mean) * (value - mean)
            }
        }
    }
}
