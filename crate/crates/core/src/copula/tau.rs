//! Kendall tau: closed forms per family, the order-one Debye function for
//! Frank, and a Monte Carlo estimate from copula draws that serves as an
//! independent oracle for the closed forms.

use rand::Rng;

use crate::error::Result;
use crate::numeric::adaptive_simpson;

use super::sample::sample_copula;
use super::{CopulaFamily, Theta};

/// Order-one Debye function D1(x) = (1/x) int_0^x t/(e^t - 1) dt, extended
/// to negative arguments through D1(-x) = D1(x) + x/2. Absolute error is
/// well below 1e-10.
pub fn debye1(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        return 1.0;
    }
    if x < 0.0 {
        return debye1(-x) - x / 2.0;
    }
    let integrand = |t: f64| {
        if t.abs() < 1e-60 {
            1.0
        } else {
            t / t.exp_m1()
        }
    };
    adaptive_simpson(integrand, 0.0, x, 1e-13 * x.max(1.0)) / x
}

impl Theta {
    /// Kendall tau as a closed-form function of the parameter.
    ///
    /// The AMH expression is a removable 0/0 at theta = 0 and is replaced by
    /// its fourth-order expansion for |theta| < 1e-4 (leading term 2 theta/9);
    /// the Joe series is truncated once terms drop below 1e-12 (they decay
    /// like k^-3) or after 1e6 terms.
    pub fn kendall_tau(&self) -> f64 {
        let th = self.value();
        match self.family() {
            CopulaFamily::Amh => {
                if th.abs() < 1e-4 {
                    2.0 * th / 9.0 + th * th / 18.0 + th.powi(3) / 45.0 + th.powi(4) / 90.0
                } else {
                    let one_m = 1.0 - th;
                    // (1-theta)^2 ln(1-theta) -> 0 as theta -> 1.
                    let term = if one_m == 0.0 {
                        0.0
                    } else {
                        one_m * one_m * one_m.ln()
                    };
                    1.0 - 2.0 * (th + term) / (3.0 * th * th)
                }
            }
            CopulaFamily::Clayton => th / (th + 2.0),
            CopulaFamily::Frank => {
                if th.abs() < 1e-6 {
                    th / 9.0
                } else {
                    1.0 - 4.0 * (1.0 - debye1(th)) / th
                }
            }
            CopulaFamily::Gumbel => 1.0 - 1.0 / th,
            CopulaFamily::Joe => {
                let mut sum = 0.0;
                for k in 1..=1_000_000u64 {
                    let kf = k as f64;
                    let term = 1.0 / (kf * (th * kf + 2.0) * (th * (kf - 1.0) + 2.0));
                    sum += term;
                    if term < 1e-12 {
                        break;
                    }
                }
                1.0 - 4.0 * sum
            }
        }
    }
}

/// Monte Carlo Kendall tau: 4 E[C(U1, U2)] - 1 over copula draws.
#[derive(Debug, Clone, Copy)]
pub struct TauMonteCarlo {
    pub estimate: f64,
    /// Standard error of the estimate.
    pub std_error: f64,
}

impl Theta {
    /// Estimates Kendall tau by sampling the copula and averaging C(U).
    /// Serves as the independent oracle for `kendall_tau`.
    pub fn tau_monte_carlo<R: Rng + ?Sized>(
        &self,
        n_samples: usize,
        rng: &mut R,
    ) -> Result<TauMonteCarlo> {
        let draws = sample_copula(self, 2, n_samples, rng)?;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for u in &draws {
            let c = self.copula_cdf(u)?;
            sum += c;
            sumsq += c * c;
        }
        let nf = n_samples as f64;
        let mean = sum / nf;
        let var = (sumsq - nf * mean * mean) / (nf - 1.0);
        Ok(TauMonteCarlo {
            estimate: 4.0 * mean - 1.0,
            std_error: 4.0 * (var / nf).sqrt(),
        })
    }
}
