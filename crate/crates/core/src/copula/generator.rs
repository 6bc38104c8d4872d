//! Generators, their first two derivatives, inverse generators and
//! inverse-generator derivatives for the five Archimedean families.
//!
//! For negative Clayton parameters the tabulated form `t^-theta - 1` is
//! increasing and negative; we use the rescaled generator
//! `(t^-theta - 1)/theta` there, which induces the same copula (generators
//! are unique only up to positive scaling) while keeping the generator
//! contract (nonnegative, decreasing, zero at one).

use crate::error::{Error, Result};

use super::{CopulaFamily, Theta};

/// ln(1 - e^z) for z < 0 without cancellation.
fn ln_one_minus_exp(z: f64) -> f64 {
    if z < -std::f64::consts::LN_2 {
        (-z.exp()).ln_1p()
    } else {
        (-z.exp_m1()).ln()
    }
}

/// ln|e^y - 1| for y != 0.
fn ln_abs_expm1(y: f64) -> f64 {
    if y > 0.0 {
        y + ln_one_minus_exp(-y)
    } else {
        ln_one_minus_exp(y)
    }
}

impl Theta {
    /// Generator value phi_theta(t) for t in (0, 1].
    pub fn generator(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("generator argument t={t} not in (0,1]")));
        }
        let th = self.value();
        Ok(match self.family() {
            CopulaFamily::Amh => (-th * (1.0 - t)).ln_1p() - t.ln(),
            CopulaFamily::Clayton => {
                let raw = (-th * t.ln()).exp_m1();
                if th > 0.0 {
                    raw
                } else {
                    raw / th
                }
            }
            CopulaFamily::Frank => {
                // ln|expm1(-theta)| - ln|expm1(-theta t)|; both factors share a sign.
                ln_abs_expm1(-th) - ln_abs_expm1(-th * t)
            }
            CopulaFamily::Gumbel => (-t.ln()).powf(th),
            CopulaFamily::Joe => -ln_one_minus_exp(th * (-t).ln_1p()),
        })
    }

    /// First generator derivative phi'_theta(t) for t in (0, 1); strictly negative.
    pub fn generator_d1(&self, t: f64) -> Result<f64> {
        check_open_unit(t)?;
        let th = self.value();
        Ok(match self.family() {
            CopulaFamily::Amh => (th - 1.0) / (t * (1.0 - th * (1.0 - t))),
            CopulaFamily::Clayton => {
                if th > 0.0 {
                    -th * (-(th + 1.0) * t.ln()).exp()
                } else {
                    -(-(th + 1.0) * t.ln()).exp()
                }
            }
            CopulaFamily::Frank => -th / (th * t).exp_m1(),
            CopulaFamily::Gumbel => -(th / t) * (-t.ln()).powf(th - 1.0),
            CopulaFamily::Joe => {
                let w = 1.0 - t;
                -th * w.powf(th - 1.0) / (-(th * w.ln()).exp_m1())
            }
        })
    }

    /// Second generator derivative phi''_theta(t) for t in (0, 1).
    pub fn generator_d2(&self, t: f64) -> Result<f64> {
        check_open_unit(t)?;
        let th = self.value();
        Ok(match self.family() {
            CopulaFamily::Amh => {
                let d = t * (1.0 - th * (1.0 - t));
                (1.0 - th) * (1.0 - th + 2.0 * th * t) / (d * d)
            }
            CopulaFamily::Clayton => {
                if th > 0.0 {
                    th * (th + 1.0) * (-(th + 2.0) * t.ln()).exp()
                } else {
                    (th + 1.0) * (-(th + 2.0) * t.ln()).exp()
                }
            }
            CopulaFamily::Frank => {
                let e = (th * t).exp_m1();
                th * th * (th * t).exp() / (e * e)
            }
            CopulaFamily::Gumbel => {
                let l = -t.ln();
                th / (t * t) * l.powf(th - 2.0) * (l + th - 1.0)
            }
            CopulaFamily::Joe => {
                let w = 1.0 - t;
                let denom = -(th * w.ln()).exp_m1();
                th * w.powf(th - 2.0) * ((th - 1.0) + w.powf(th)) / (denom * denom)
            }
        })
    }

    /// ln(-phi'(t)); callers guarantee t in (0, 1).
    pub(crate) fn log_neg_d1(&self, t: f64) -> f64 {
        let th = self.value();
        match self.family() {
            CopulaFamily::Amh => (1.0 - th).ln() - t.ln() - (-th * (1.0 - t)).ln_1p(),
            CopulaFamily::Clayton => {
                if th > 0.0 {
                    th.ln() - (th + 1.0) * t.ln()
                } else {
                    -(th + 1.0) * t.ln()
                }
            }
            CopulaFamily::Frank => th.abs().ln() - ln_abs_expm1(th * t),
            CopulaFamily::Gumbel => th.ln() - t.ln() + (th - 1.0) * (-t.ln()).ln(),
            CopulaFamily::Joe => {
                let lw = (-t).ln_1p();
                th.ln() + (th - 1.0) * lw - ln_one_minus_exp(th * lw)
            }
        }
    }

    /// ln(phi''(t)), or None where the second derivative is not strictly
    /// positive (degenerate parameters such as AMH theta=1, Clayton
    /// theta=-1, or Joe theta<1 whose tabulated generator is not convex).
    pub(crate) fn log_d2(&self, t: f64) -> Option<f64> {
        let th = self.value();
        let v = match self.family() {
            CopulaFamily::Amh => {
                let lead = (1.0 - th) * (1.0 - th + 2.0 * th * t);
                if lead <= 0.0 {
                    return None;
                }
                lead.ln() - 2.0 * (t.ln() + (-th * (1.0 - t)).ln_1p())
            }
            CopulaFamily::Clayton => {
                let lead = if th > 0.0 { th * (th + 1.0) } else { th + 1.0 };
                if lead <= 0.0 {
                    return None;
                }
                lead.ln() - (th + 2.0) * t.ln()
            }
            CopulaFamily::Frank => 2.0 * th.abs().ln() + th * t - 2.0 * ln_abs_expm1(th * t),
            CopulaFamily::Gumbel => {
                let l = -t.ln();
                th.ln() - 2.0 * t.ln() + (th - 2.0) * l.ln() + (l + th - 1.0).ln()
            }
            CopulaFamily::Joe => {
                let lw = (-t).ln_1p();
                let bracket = (th - 1.0) + (th * lw).exp();
                if bracket <= 0.0 {
                    return None;
                }
                th.ln() + (th - 2.0) * lw + bracket.ln() - 2.0 * ln_one_minus_exp(th * lw)
            }
        };
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    /// Inverse generator psi(s) = phi^{-1}(s) for s >= 0 (pseudo-inverse for
    /// the non-strict negative-Clayton case).
    pub fn inv_generator(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("inverse generator needs s >= 0, got {s}")));
        }
        let th = self.value();
        Ok(match self.family() {
            CopulaFamily::Amh => {
                let e = (-s).exp();
                // Denominator 1 - theta e^-s as a sum of positives.
                (1.0 - th) * e / ((1.0 - th) + th * (-(-s).exp_m1()))
            }
            CopulaFamily::Clayton => {
                if th > 0.0 {
                    (-s.ln_1p() / th).exp()
                } else {
                    let m = 1.0 + th * s;
                    if m <= 0.0 {
                        0.0
                    } else {
                        (-m.ln() / th).exp()
                    }
                }
            }
            CopulaFamily::Frank => {
                if th > 0.0 {
                    // psi(s) = -ln(1 - z)/theta with z = (1 - e^-theta) e^-s.
                    let z = (-(-th).exp_m1()) * (-s).exp();
                    if z < 0.5 {
                        -(-z).ln_1p() / th
                    } else {
                        // 1 - z rewritten as a sum of positives.
                        let delta = (-(th + s)).exp() + (-(-s).exp_m1());
                        -delta.ln() / th
                    }
                } else {
                    -((-s).exp() * (-th).exp_m1()).ln_1p() / th
                }
            }
            CopulaFamily::Gumbel => (-s.powf(1.0 / th)).exp(),
            CopulaFamily::Joe => -(ln_one_minus_exp(-s) / th).exp_m1(),
        })
    }

    /// d-th derivative of the inverse generator at s > 0.
    ///
    /// Orders 1 and 2 are available on the whole parameter space through the
    /// inverse-function rule. Orders 3 and up require a completely monotone
    /// inverse generator (positive parameter; at least 1 for Gumbel/Joe) and
    /// are implemented in closed form up to order 4, plus arbitrary order
    /// for Clayton.
    pub fn inv_generator_deriv(&self, order: usize, s: f64) -> Result<f64> {
        let lv = self.log_abs_inv_deriv(order, s)?;
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * lv.exp())
    }

    /// ln |psi^(d)(s)|; the sign of psi^(d) is (-1)^d.
    pub(crate) fn log_abs_inv_deriv(&self, order: usize, s: f64) -> Result<f64> {
        if order == 0 {
            return Ok(self.inv_generator(s)?.ln());
        }
        if !(s > 0.0) {
            return Err(Error::Domain(format!(
                "inverse-generator derivative needs s > 0, got {s}"
            )));
        }
        let th = self.value();
        let fam = self.family();

        if fam == CopulaFamily::Clayton && th > 0.0 {
            // psi(s) = (1+s)^(-1/theta): every order in closed form.
            let mut logc = 0.0;
            for k in 0..order {
                logc += (1.0 / th + k as f64).ln();
            }
            return Ok(logc - (1.0 / th + order as f64) * s.ln_1p());
        }

        match order {
            1 => {
                let t = self.inv_generator(s)?;
                if t <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                Ok(-self.log_neg_d1(t))
            }
            2 => {
                // psi'' = -phi''(psi) / phi'(psi)^3.
                let t = self.inv_generator(s)?;
                if t <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                match self.log_d2(t) {
                    Some(ld2) => Ok(ld2 - 3.0 * self.log_neg_d1(t)),
                    None => Ok(f64::NEG_INFINITY),
                }
            }
            3 | 4 => self.log_abs_inv_deriv_high(order, s),
            _ => Err(Error::UnsupportedOrder {
                family: fam,
                order,
            }),
        }
    }

    /// Orders 3 and 4 on the completely monotone part of the parameter space.
    fn log_abs_inv_deriv_high(&self, order: usize, s: f64) -> Result<f64> {
        let th = self.value();
        let fam = self.family();
        let cm_ok = match fam {
            CopulaFamily::Amh => th > 0.0 && th < 1.0,
            CopulaFamily::Clayton | CopulaFamily::Frank => th > 0.0,
            CopulaFamily::Gumbel | CopulaFamily::Joe => th >= 1.0,
        };
        if !cm_ok {
            return Err(Error::UnsupportedOrder { family: fam, order });
        }
        Ok(match fam {
            // psi(s) = (1-theta) e^-s / (1 - theta e^-s), so
            // psi^(d)(s) = (-1)^d ((1-theta)/theta) Li_{-d}(theta e^-s).
            CopulaFamily::Amh => {
                let z = th * (-s).exp();
                let one_minus_z = (1.0 - th) + th * (-(-s).exp_m1());
                ((1.0 - th) / th).ln() + log_polylog_neg(order, z, one_minus_z)
            }
            CopulaFamily::Clayton => unreachable!("positive Clayton handled above"),
            // psi(s) = -(1/theta) ln(1 - q e^-s) with q = 1 - e^-theta, so
            // psi^(d)(s) = ((-1)^d/theta) Li_{-(d-1)}(q e^-s).
            CopulaFamily::Frank => {
                let z = (-(-th).exp_m1()) * (-s).exp();
                let one_minus_z = -(-s).exp_m1() + (-(th + s)).exp();
                -th.ln() + log_polylog_neg(order - 1, z, one_minus_z)
            }
            CopulaFamily::Gumbel => {
                // x = s^alpha, psi = e^-x; bracket polynomials derived by
                // repeated differentiation (verified against finite differences).
                let alpha = 1.0 / th;
                let x = s.powf(alpha);
                let bracket = if order == 3 {
                    (1.0 - alpha) * (2.0 - alpha) + 3.0 * alpha * (1.0 - alpha) * x
                        + alpha * alpha * x * x
                } else {
                    (1.0 - alpha) * (2.0 - alpha) * (3.0 - alpha)
                        + alpha * (1.0 - alpha) * (11.0 - 7.0 * alpha) * x
                        + 6.0 * alpha * alpha * (1.0 - alpha) * x * x
                        + alpha.powi(3) * x.powi(3)
                };
                alpha.ln() + x.ln() - x - (order as f64) * s.ln() + bracket.ln()
            }
            CopulaFamily::Joe => {
                // w = e^-s, y = 1 - w, alpha = 1/theta.
                let alpha = 1.0 / th;
                let w = (-s).exp();
                let ln_y = (-w).ln_1p();
                let bracket = if order == 3 {
                    1.0 - (3.0 * alpha - 1.0) * w + alpha * alpha * w * w
                } else {
                    1.0 + (4.0 - 7.0 * alpha) * w
                        + (6.0 * alpha * alpha - 4.0 * alpha + 1.0) * w * w
                        - alpha.powi(3) * w.powi(3)
                };
                alpha.ln() + (alpha - order as f64) * ln_y - s + bracket.ln()
            }
        })
    }
}

/// ln Li_{-k}(z) for k = 1..=4 using the closed rational forms; `one_minus_z`
/// is supplied separately so callers can compute it without cancellation.
fn log_polylog_neg(k: usize, z: f64, one_minus_z: f64) -> f64 {
    debug_assert!(z > 0.0 && one_minus_z > 0.0);
    let lz = z.ln();
    let l1mz = one_minus_z.ln();
    match k {
        1 => lz - 2.0 * l1mz,
        2 => lz + z.ln_1p() - 3.0 * l1mz,
        3 => lz + (1.0 + 4.0 * z + z * z).ln() - 4.0 * l1mz,
        4 => lz + z.ln_1p() + (1.0 + 10.0 * z + z * z).ln() - 5.0 * l1mz,
        _ => unreachable!("polylog order {k} not needed"),
    }
}

fn check_open_unit(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("generator derivative argument t={t} not in (0,1)")))
    }
}

#[cfg(test)]
mod tests {
    use super::super::CopulaFamily::*;
    use super::*;

    fn th(family: crate::copula::CopulaFamily, v: f64) -> Theta {
        Theta::new(family, v).unwrap()
    }

    /// Central finite difference of the generator.
    fn fd1(t: &Theta, x: f64, h: f64) -> f64 {
        (t.generator(x + h).unwrap() - t.generator(x - h).unwrap()) / (2.0 * h)
    }

    fn fd2(t: &Theta, x: f64, h: f64) -> f64 {
        (t.generator_d1(x + h).unwrap() - t.generator_d1(x - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn generator_values_at_known_points() {
        // Gumbel theta=2 at t=1: phi(1) = 0 by definition.
        assert_eq!(th(Gumbel, 2.0).generator(1.0).unwrap(), 0.0);
        // Clayton theta=2 at t=0.5: 0.5^-2 - 1 = 3.
        assert!((th(Clayton, 2.0).generator(0.5).unwrap() - 3.0).abs() < 1e-12);
        // Gumbel theta=1 at t=e^-1: (-ln t)^1 = 1.
        assert!((th(Gumbel, 1.0).generator((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generator_is_decreasing_and_vanishes_at_one() {
        for (fam, v) in [(Amh, 0.7), (Amh, -0.9), (Clayton, 3.0), (Clayton, -0.5), (Frank, 4.0), (Frank, -6.0), (Gumbel, 2.5), (Joe, 3.0), (Joe, 0.3)] {
            let t = th(fam, v);
            assert!(t.generator(1.0).unwrap().abs() < 1e-12, "{fam:?} {v}");
            let mut prev = f64::INFINITY;
            for k in 1..40 {
                let x = k as f64 / 40.0;
                let g = t.generator(x).unwrap();
                assert!(g >= 0.0, "{fam:?} theta={v} t={x} gave {g}");
                assert!(g < prev, "{fam:?} theta={v} not decreasing at {x}");
                prev = g;
            }
        }
    }

    #[test]
    fn first_derivative_known_values() {
        // Clayton theta=2 at 0.5: -2 * 0.5^-3 = -16.
        assert!((th(Clayton, 2.0).generator_d1(0.5).unwrap() + 16.0).abs() < 1e-10);
        // Gumbel theta=1 at 0.5: -1/t.
        assert!((th(Gumbel, 1.0).generator_d1(0.5).unwrap() + 2.0).abs() < 1e-12);
        // Frank theta=1 at 0.5: e^-0.5/(e^-0.5 - 1).
        let expect = (-0.5f64).exp() / ((-0.5f64).exp() - 1.0);
        assert!((th(Frank, 1.0).generator_d1(0.5).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn second_derivative_known_values() {
        // Clayton theta=2 at 0.5: 2*3*0.5^-4 = 96.
        assert!((th(Clayton, 2.0).generator_d2(0.5).unwrap() - 96.0).abs() < 1e-9);
        // Gumbel theta=1 at 0.5: theta/t^2 = 4.
        assert!((th(Gumbel, 1.0).generator_d2(0.5).unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = [
            (Amh, 0.5),
            (Amh, -0.8),
            (Clayton, 2.0),
            (Clayton, 7.5),
            (Clayton, -0.4),
            (Frank, 3.0),
            (Frank, -8.0),
            (Gumbel, 1.7),
            (Gumbel, 6.0),
            (Joe, 2.2),
            (Joe, 9.0),
        ];
        for (fam, v) in cases {
            let t = th(fam, v);
            for &x in &[0.12f64, 0.35, 0.5, 0.71, 0.9] {
                let h = 1e-6 * x.min(1.0 - x);
                let d1 = t.generator_d1(x).unwrap();
                let d2 = t.generator_d2(x).unwrap();
                assert!(d1 < 0.0, "{fam:?} {v} d1 sign at {x}");
                assert!(d2 > 0.0, "{fam:?} {v} d2 sign at {x}");
                let rel1 = (d1 - fd1(&t, x, h)).abs() / d1.abs();
                let rel2 = (d2 - fd2(&t, x, h)).abs() / d2.abs();
                assert!(rel1 < 1e-6, "{fam:?} theta={v} t={x}: d1 rel err {rel1}");
                assert!(rel2 < 1e-6, "{fam:?} theta={v} t={x}: d2 rel err {rel2}");
            }
        }
    }

    #[test]
    fn log_forms_agree_with_linear_forms() {
        for (fam, v) in [(Amh, 0.6), (Clayton, 4.0), (Clayton, -0.3), (Frank, 5.0), (Frank, -2.0), (Gumbel, 3.0), (Joe, 4.0)] {
            let t = th(fam, v);
            for &x in &[0.2, 0.5, 0.8] {
                let want1 = (-t.generator_d1(x).unwrap()).ln();
                assert!((t.log_neg_d1(x) - want1).abs() < 1e-10, "{fam:?} {v} {x}");
                let want2 = t.generator_d2(x).unwrap().ln();
                assert!((t.log_d2(x).unwrap() - want2).abs() < 1e-10, "{fam:?} {v} {x}");
            }
        }
    }

    #[test]
    fn inverse_round_trips_generator() {
        for (fam, v) in [
            (Amh, 0.9),
            (Amh, -0.7),
            (Clayton, 2.0),
            (Clayton, -0.5),
            (Frank, 6.0),
            (Frank, -4.0),
            (Frank, 30.0),
            (Gumbel, 2.0),
            (Gumbel, 12.0),
            (Joe, 1.5),
            (Joe, 8.0),
        ] {
            let t = th(fam, v);
            for k in 1..30 {
                let x = k as f64 / 30.0;
                let s = t.generator(x).unwrap();
                let back = t.inv_generator(s).unwrap();
                assert!(
                    (back - x).abs() <= 1e-10 * x.max(1e-3),
                    "{fam:?} theta={v}: psi(phi({x})) = {back}"
                );
            }
        }
    }

    #[test]
    fn inverse_generator_known_values() {
        // psi(0) = 1 for every family.
        for (fam, v) in [(Amh, 0.5), (Clayton, 2.0), (Frank, 3.0), (Gumbel, 2.0), (Joe, 2.0)] {
            assert!((th(fam, v).inv_generator(0.0).unwrap() - 1.0).abs() < 1e-12);
        }
        // Clayton theta=2: psi(3) = 0.5.
        assert!((th(Clayton, 2.0).inv_generator(3.0).unwrap() - 0.5).abs() < 1e-12);
        // Gumbel theta=2: psi(1) = e^-1.
        assert!((th(Gumbel, 2.0).inv_generator(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn clayton_inverse_derivative_closed_form() {
        // psi^(d)(s) = (-1)^d (1+s)^(-(1/theta+d)) prod_{k<d} (1/theta + k).
        let t = th(Clayton, 2.0);
        let got = t.inv_generator_deriv(1, 3.0).unwrap();
        assert!((got - (-0.0625)).abs() < 1e-12, "got {got}");
        let t1 = th(Clayton, 1.0);
        let got2 = t1.inv_generator_deriv(2, 0.5).unwrap();
        let want2 = 2.0 * 1.5f64.powi(-3);
        assert!((got2 - want2).abs() < 1e-12, "got {got2} want {want2}");
    }

    #[test]
    fn inverse_derivatives_match_finite_differences() {
        // Ladder oracle: order d is checked against central differences of
        // the (analytic) order d-1, which keeps the stencil noise tiny.
        let cases = [
            (Amh, 0.6),
            (Clayton, 2.0),
            (Clayton, 5.0),
            (Frank, 3.0),
            (Frank, 12.0),
            (Gumbel, 1.8),
            (Gumbel, 5.0),
            (Joe, 1.4),
            (Joe, 6.0),
        ];
        for (fam, v) in cases {
            let t = th(fam, v);
            for &s in &[0.05f64, 0.4, 1.3, 4.0] {
                let h = 1e-5 * s.min(1.0);
                for order in 1..=4usize {
                    let lower = |x: f64| {
                        if order == 1 {
                            t.inv_generator(x).unwrap()
                        } else {
                            t.inv_generator_deriv(order - 1, x).unwrap()
                        }
                    };
                    let want = (lower(s + h) - lower(s - h)) / (2.0 * h);
                    let got = t.inv_generator_deriv(order, s).unwrap();
                    let scale = want.abs().max(1e-12);
                    assert!(
                        (got - want).abs() / scale < 1e-5,
                        "{fam:?} theta={v} s={s} order {order}: got {got}, fd {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn complete_monotonicity_signs() {
        for (fam, v) in [(Amh, 0.4), (Clayton, 3.0), (Frank, 7.0), (Gumbel, 2.5), (Joe, 2.0)] {
            let t = th(fam, v);
            for order in 1..=4 {
                for &s in &[0.1, 0.9, 2.5, 10.0] {
                    let d = t.inv_generator_deriv(order, s).unwrap();
                    let signed = if order % 2 == 0 { d } else { -d };
                    assert!(signed >= 0.0, "{fam:?} theta={v} order {order} s={s}: {d}");
                }
            }
        }
    }

    #[test]
    fn clayton_high_order_derivatives_beyond_four() {
        let t = th(Clayton, 2.0);
        // Order 6 exists for Clayton; its sign must be positive.
        assert!(t.inv_generator_deriv(6, 1.0).unwrap() > 0.0);
        // Other families stop at order 4.
        assert!(matches!(
            th(Gumbel, 2.0).inv_generator_deriv(5, 1.0),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn high_order_derivatives_reject_non_monotone_parameters() {
        assert!(th(Clayton, -0.5).inv_generator_deriv(3, 1.0).is_err());
        assert!(th(Joe, 0.5).inv_generator_deriv(3, 1.0).is_err());
    }

    #[test]
    fn domain_errors() {
        let t = th(Clayton, 2.0);
        assert!(t.generator(0.0).is_err());
        assert!(t.generator(1.1).is_err());
        assert!(t.generator_d1(1.0).is_err());
        assert!(t.inv_generator(-0.1).is_err());
    }
}
