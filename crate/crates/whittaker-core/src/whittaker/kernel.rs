//! Evaluation routes for the entire part of `I` and for `K` on the Riemann
//! surface of the logarithm.
//!
//! `K` is evaluated, in order of preference, by a terminating `2F0` sum, the
//! large-argument expansion, a power-series route (connection formula, or the
//! logarithmic series when `2m` is an integer) and finally by Taylor
//! continuation of the differential equation inward from the asymptotic
//! region. The series routes report a rounding-error estimate, so cancellation
//! is detected rather than returned.

use super::taylor::Equation;
use crate::error::{Error, Result};
use crate::hyper::{regularized_1f1_diag, Z_SWITCH};
use crate::special::{digamma, mag, rgamma, sin_pi, Polar};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Relative error accepted from a series route before falling back.
const ACCEPT: f64 = 1e-13;
/// Distance of `2m` to an integer treated as exactly degenerate.
const EXACT_DEGENERATE: f64 = 1e-12;
const TERMINATING: f64 = 1e-13;
const ASYMPTOTIC_TOL: f64 = 1e-17;
/// Smallest relative term accepted when the series turns before reaching
/// `ASYMPTOTIC_TOL`.
const OPTIMAL_TRUNCATION: f64 = 1e-15;
const MAX_RADIUS: f64 = 1e4;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Entire factor `E(z) = e^{-z/2} 1F1(1/2+m-beta; 1+2m; z) / Gamma(1+2m)`
/// by its power series, with the estimated relative rounding error.
pub(crate) fn entire_series(beta: C, m: C, z: C) -> Result<(C, f64)> {
    let (s, d) = regularized_1f1_diag(m + 0.5 - beta, m * 2.0 + 1.0, z)?;
    Ok(((-z * 0.5).exp() * s, d.rounding_error(s)))
}

/// `E(z)` such that `I(z) = z^{1/2+m} E(z)`, accurate at any `z`.
pub(crate) fn entire(beta: C, m: C, z: C) -> Result<C> {
    if z.norm() <= Z_SWITCH {
        if let Ok((v, err)) = entire_series(beta, m, z) {
            if err <= ACCEPT {
                return Ok(v);
            }
        }
    }
    let p = Polar::principal(z);
    Ok(i_large(beta, m, p)? / p.pow(m + 0.5))
}

/// `I(z)` as a combination of `K` on two sheets, free of the cancellation
/// that plagues the power series away from the positive axis.
fn i_large(beta: C, m: C, z: Polar) -> Result<C> {
    let s = if z.theta >= 0.0 { -1.0 } else { 1.0 };
    let i = C::i();
    let k_rot = k_polar(-beta, m, z.rotate(s * PI))?;
    let k_here = k_polar(beta, m, z)?;
    let t1 = (i * s * PI * beta).exp() * rgamma(m + 0.5 - beta) * k_rot;
    let t2 = (i * s * PI * (beta + 0.5 - m)).exp() * rgamma(m + 0.5 + beta) * k_here;
    Ok(t1 - t2)
}

fn nonpositive_integer(a: C) -> Option<usize> {
    let n = a.re.round();
    if n <= 0.0 && (a - c(n)).norm() < TERMINATING {
        Some((-n) as usize)
    } else {
        None
    }
}

/// `K_{beta,m}(z)` at a point of the logarithmic Riemann surface.
pub(crate) fn k_polar(beta: C, m: C, z: Polar) -> Result<C> {
    if z.r == 0.0 {
        return Err(Error::BranchPoint);
    }
    if !(z.r.is_finite() && z.theta.is_finite() && beta.is_finite() && m.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let a = m + 0.5 - beta;
    let b = -m + 0.5 - beta;
    if let Some(n) = nonpositive_integer(a).or(nonpositive_integer(b)) {
        return Ok(terminating(beta, a, b, n, z));
    }
    if z.r >= Z_SWITCH && asymptotic_converges(a.norm(), b.norm(), z.r) {
        return Ok(asymptotic(beta, a, b, z)?.0);
    }
    let radius = asymptotic_radius(a, b);
    let series = k_series(beta, m, z);
    if let Ok((v, err)) = series {
        if err <= ACCEPT {
            return Ok(v);
        }
    }
    if z.theta.abs() <= PI {
        return continuation(beta, m, a, b, radius, z);
    }
    match series {
        Ok((v, err)) if err < 1e-6 => Ok(v),
        Ok(_) => Err(Error::NoConvergence { terms: 0 }),
        Err(e) => Err(e),
    }
}

/// `z^beta e^{-z/2} sum_{k<=n} (a)_k (b)_k (-1/z)^k / k!`.
fn terminating(beta: C, a: C, b: C, n: usize, z: Polar) -> C {
    let w = -z.to_c().inv();
    let mut sum = c(1.0);
    let mut term = c(1.0);
    for k in 0..n {
        term *= (a + k as f64) * (b + k as f64) * w / (k as f64 + 1.0);
        sum += term;
    }
    z.pow(beta) * (-z.to_c() * 0.5).exp() * sum
}

/// Smallest radius at which the asymptotic series of `K` reaches full
/// precision without a large hump of intermediate terms.
fn asymptotic_radius(a: C, b: C) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    let mut radius = Z_SWITCH;
    while radius < MAX_RADIUS {
        if asymptotic_converges(na, nb, radius) {
            return radius;
        }
        radius *= 1.25;
    }
    MAX_RADIUS
}

/// Whether the majorant `prod (|a|+n)(|b|+n)/((n+1) r)` of the asymptotic
/// terms drops below the target with a hump under `1e2`.
fn asymptotic_converges(na: f64, nb: f64, radius: f64) -> bool {
    let mut term: f64 = 1.0;
    let mut hump: f64 = 1.0;
    for n in 0..400 {
        let nf = n as f64;
        term *= (na + nf) * (nb + nf) / ((nf + 1.0) * radius);
        hump = hump.max(term);
        if term < ASYMPTOTIC_TOL {
            return hump < 1e2;
        }
    }
    false
}

/// Large-argument expansion `z^beta e^{-z/2} 2F0(a, b; -1/z)` with its
/// `z`-derivative.
fn asymptotic(beta: C, a: C, b: C, z: Polar) -> Result<(C, C)> {
    let zc = z.to_c();
    let w = -zc.inv();
    let mut sum = c(1.0);
    let mut dsum = c(0.0);
    let mut term = c(1.0);
    let mut quiet = 0;
    let mut last = 1.0;
    let finish = |sum: C, dsum: C| {
        let pre = z.pow(beta) * (-zc * 0.5).exp();
        // dw/dz = 1/z^2
        let dv = pre * (sum * (beta / zc - 0.5) + dsum * w * w);
        Ok((pre * sum, dv))
    };
    for n in 0..2000 {
        let nf = n as f64;
        let next = term * (a + nf) * (b + nf) * w / (nf + 1.0);
        if mag(next) > last && n > 0 {
            // Past the smallest term: stop at optimal truncation.
            if last <= OPTIMAL_TRUNCATION * mag(sum) {
                return finish(sum, dsum);
            }
            break;
        }
        term = next;
        last = mag(term);
        sum += term;
        dsum += term * (nf + 1.0) / w;
        if last < ASYMPTOTIC_TOL * mag(sum) {
            quiet += 1;
            if quiet == 2 {
                return finish(sum, dsum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::AsymptoticDivergence { first_term: (a * b * w).norm() })
}

/// Power-series routes for `K`, with a relative error estimate.
fn k_series(beta: C, m: C, z: Polar) -> Result<(C, f64)> {
    let two_m = m * 2.0;
    let p = two_m.re.round();
    if (two_m - c(p)).norm() <= EXACT_DEGENERATE {
        return degenerate_series(beta, p.abs() as usize, z);
    }
    let zc = z.to_c();
    let (e_plus, err_plus) = entire_series(beta, m, zc)?;
    let (e_minus, err_minus) = entire_series(beta, -m, zc)?;
    let t1 = z.pow(m + 0.5) * e_plus * rgamma(-m + 0.5 - beta);
    let t2 = z.pow(-m + 0.5) * e_minus * rgamma(m + 0.5 - beta);
    let diff = t1 - t2;
    let value = diff * (-PI / sin_pi(two_m));
    let err = (t1.norm() * (err_plus + f64::EPSILON) + t2.norm() * (err_minus + f64::EPSILON)) / diff.norm();
    Ok((value, err))
}

/// The logarithmic series of `K_{beta, p/2}` for integer `p >= 0`.
pub(crate) fn degenerate_series(beta: C, p: usize, z: Polar) -> Result<(C, f64)> {
    let pf = p as f64;
    let a = c((1.0 + pf) / 2.0) - beta;
    let a_low = c((1.0 - pf) / 2.0) - beta;
    let zc = z.to_c();
    let rg_low = rgamma(a_low);
    let (e_p, err_p) = entire_series(beta, c(pf / 2.0), zc)?;
    let power = z.pow(c((1.0 + pf) / 2.0));
    let i_p = power * e_p;

    // sum_k (a)_k z^k / ((p+k)! k!) (psi(a+k) - psi(p+1+k) - psi(1+k))
    let mut coef = rgamma(c(pf + 1.0));
    let mut psi_a = digamma(a)?;
    let mut psi_p = digamma(c(pf + 1.0))?;
    let mut psi_1 = c(-crate::special::EULER_GAMMA);
    let mut sum = C::new(0.0, 0.0);
    let mut max_term: f64 = 0.0;
    let mut quiet = 0;
    for k in 0..5000 {
        let kf = k as f64;
        let t = coef * (psi_a - psi_p - psi_1);
        sum += t;
        max_term = max_term.max(mag(t));
        if mag(t) <= 1e-17 * mag(sum) && mag(coef) <= 1e-17 * mag(sum).max(1e-300) {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        coef *= (a + kf) * zc / ((pf + kf + 1.0) * (kf + 1.0));
        psi_a += (a + kf).inv();
        psi_p += 1.0 / (pf + kf + 1.0);
        psi_1 += 1.0 / (kf + 1.0);
        if k == 4999 {
            return Err(Error::NoConvergence { terms: 5000 });
        }
    }
    let decay = (-zc * 0.5).exp();

    let mut finite = C::new(0.0, 0.0);
    let mut finite_max: f64 = 0.0;
    let rg_a = rgamma(a);
    for j in 0..p {
        let jf = j as f64;
        let mut fact = 1.0;
        for i in 1..p - j {
            fact *= i as f64;
        }
        let mut inv_j_fact = 1.0;
        for i in 1..=j {
            inv_j_fact /= i as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let t =
            crate::special::pochhammer(a_low, j) * sign * fact * inv_j_fact * rg_a * z.pow(c((1.0 - pf) / 2.0 + jf));
        finite += t;
        finite_max = finite_max.max(mag(t));
    }
    let sign = if p.is_multiple_of(2) { -1.0 } else { 1.0 };
    let log_part = z.ln() * i_p;
    let series_part = decay * power * sum;
    let value = rg_low * (log_part + series_part) * sign + decay * finite;
    let scale = rg_low.norm() * (log_part.norm() * (1.0 + err_p) + (decay * power).norm() * max_term)
        + decay.norm() * finite_max;
    let err = (4.0 * f64::EPSILON * scale + rg_low.norm() * log_part.norm() * err_p) / value.norm();
    Ok((value, err))
}

/// Taylor continuation inward from the asymptotic region: radially along the
/// ray at angle `clamp(theta, -pi/2, pi/2)`, then along the circle of radius
/// `|z|`.
fn continuation(beta: C, m: C, a: C, b: C, radius: f64, z: Polar) -> Result<C> {
    let ray = z.theta.clamp(-PI / 2.0, PI / 2.0);
    let seed_point = Polar::new(radius, ray);
    let (v0, dv0) = asymptotic(beta, a, b, seed_point)?;
    let eq = Equation::hyperbolic(beta, m);
    let (v, dv) = eq.continue_segment(seed_point.to_c(), C::from_polar(z.r, ray), v0, dv0);
    let (v, _) = eq.continue_arc(z.r, ray, z.theta, v, dv);
    crate::special::check_finite(v)?;
    Ok(v)
}

#[cfg(test)]
pub(crate) mod routes {
    //! Direct access to the individual routes for cross-checking.
    use super::*;

    pub fn via_continuation(beta: C, m: C, z: Polar) -> C {
        let a = m + 0.5 - beta;
        let b = -m + 0.5 - beta;
        continuation(beta, m, a, b, asymptotic_radius(a, b), z).unwrap()
    }

    pub fn via_series(beta: C, m: C, z: Polar) -> (C, f64) {
        k_series(beta, m, z).unwrap()
    }

    pub fn via_large_i(beta: C, m: C, z: Polar) -> C {
        i_large(beta, m, z).unwrap()
    }
}
