//! Exact copula sampling.
//!
//! Bivariate draws invert the conditional CDF
//! C(u2 | u1) = phi'(u1) / phi'(C(u1, u2)) numerically (bisection to 1e-10).
//! Positive Clayton in any dimension uses the gamma frailty construction;
//! other families above two dimensions fall back to sequential conditional
//! inversion through inverse-generator derivative ratios, which covers the
//! orders implemented (p <= 4). Clayton therefore has no dimension limit,
//! the rest stop at p = 4.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};

use super::{CopulaFamily, Theta, UnitPoint, EVAL_HI, EVAL_LO};

const BISECT_TOL: f64 = 1e-10;

/// Draws `n` points from C(. | theta) in dimension `p`.
pub fn sample_copula<R: Rng + ?Sized>(
    theta: &Theta,
    p: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<UnitPoint>> {
    if p < 2 {
        return Err(Error::InvalidInput(format!("copula dimension must be >= 2, got {p}")));
    }
    if p > 2 && !theta.family().admits_in_dim(theta.value(), p) {
        return Err(Error::UnsupportedDimension {
            family: theta.family(),
            value: theta.value(),
            dim: p,
        });
    }
    let mut out = Vec::with_capacity(n);
    if p == 2 {
        for _ in 0..n {
            let u1 = uniform_open(rng);
            let w = uniform_open(rng);
            let u2 = invert_bivariate_conditional(theta, u1, w)?;
            out.push(UnitPoint::new(vec![u1, u2])?);
        }
        return Ok(out);
    }
    if theta.family() == CopulaFamily::Clayton {
        // Marshall-Olkin: psi(s) = (1+s)^(-1/theta) is the Laplace transform
        // of Gamma(1/theta, 1).
        let frailty = Gamma::new(1.0 / theta.value(), 1.0)
            .map_err(|e| Error::InvalidInput(format!("frailty shape: {e}")))?;
        for _ in 0..n {
            let v: f64 = frailty.sample(rng);
            let mut coords = Vec::with_capacity(p);
            for _ in 0..p {
                let e: f64 = Exp1.sample(rng);
                coords.push(theta.inv_generator(e / v)?.clamp(EVAL_LO, EVAL_HI));
            }
            out.push(UnitPoint::new(coords)?);
        }
        return Ok(out);
    }
    if p > 4 {
        return Err(Error::UnsupportedDimension {
            family: theta.family(),
            value: theta.value(),
            dim: p,
        });
    }
    for _ in 0..n {
        let mut coords = vec![uniform_open(rng)];
        let mut s_prev = theta.generator(coords[0])?;
        for k in 2..=p {
            let w = uniform_open(rng);
            let t = invert_sequential_conditional(theta, k - 1, s_prev, w)?;
            coords.push(t);
            s_prev += theta.generator(t)?;
        }
        out.push(UnitPoint::new(coords)?);
    }
    Ok(out)
}

fn uniform_open<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>().clamp(EVAL_LO, EVAL_HI)
}

/// Solves C(u2 | u1) = w for u2. The conditional CDF is increasing in u2.
fn invert_bivariate_conditional(theta: &Theta, u1: f64, w: f64) -> Result<f64> {
    let s1 = theta.generator(u1)?;
    let log_d1_u1 = theta.log_neg_d1(u1);
    let cond = |u2: f64| -> Result<f64> {
        let c = theta.inv_generator(s1 + theta.generator(u2)?)?;
        if c <= 0.0 {
            return Ok(0.0);
        }
        Ok((log_d1_u1 - theta.log_neg_d1(c)).exp())
    };
    let mut lo = EVAL_LO;
    let mut hi = EVAL_HI;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if cond(mid)? < w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves |psi^(k)(s_prev + phi(t))| / |psi^(k)(s_prev)| = w for t; the ratio
/// is the conditional CDF of coordinate k+1 given the first k.
fn invert_sequential_conditional(theta: &Theta, k: usize, s_prev: f64, w: f64) -> Result<f64> {
    let base = theta.log_abs_inv_deriv(k, s_prev)?;
    let log_w = w.ln();
    let mut lo = EVAL_LO;
    let mut hi = EVAL_HI;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let lr = theta.log_abs_inv_deriv(k, s_prev + theta.generator(mid)?)? - base;
        if lr < log_w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
