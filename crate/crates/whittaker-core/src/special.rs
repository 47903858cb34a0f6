//! Gamma-family functions and principal branches of the elementary
//! multivalued functions.
//!
//! Every logarithm in the crate goes through [`ln`], which puts the cut on
//! `]-inf, 0]` and takes values on the cut from the upper half-plane, so that
//! `ln(-1) = i*pi` even when the imaginary part is a negative zero.
//! Arguments that must live on a non-principal sheet are carried as [`Polar`].

use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Distance to a pole of Gamma or digamma below which evaluation is refused.
pub const TOL_POLE: f64 = 1e-10;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k) for the digamma asymptotic series.
const DIGAMMA_ASY: [f64; 8] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32_760.0, 1.0 / 12.0, -3617.0 / 8160.0];

const ASYMPTOTIC_RADIUS: f64 = 15.0;

/// `|re| + |im|`, a cheap magnitude for convergence tests inside series loops.
pub(crate) fn mag(z: C) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Principal argument in `]-pi, pi]`, with the negative real axis mapped to `+pi`.
pub fn arg(z: C) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        PI
    } else {
        z.im.atan2(z.re)
    }
}

/// Principal logarithm. Returns `-inf` real part at zero.
pub fn ln(z: C) -> C {
    C::new(z.norm().ln(), arg(z))
}

/// Principal power `exp(lambda ln z)`, with `0^lambda = 0` for `Re lambda > 0`.
pub fn pow(z: C, lambda: C) -> C {
    if z == C::new(0.0, 0.0) {
        if lambda == C::new(0.0, 0.0) {
            return C::new(1.0, 0.0);
        }
        return C::new(0.0, 0.0);
    }
    (lambda * ln(z)).exp()
}

/// Principal square root.
pub fn sqrt(z: C) -> C {
    if z == C::new(0.0, 0.0) {
        return z;
    }
    C::from_polar(z.norm().sqrt(), 0.5 * arg(z))
}

/// The three principal-branch operations exposed as one entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrincipalOp {
    Ln,
    Sqrt,
    Pow(C),
}

/// Checked principal-branch evaluation.
pub fn principal(op: PrincipalOp, z: C) -> Result<C> {
    check_finite(z)?;
    let zero = z == C::new(0.0, 0.0);
    match op {
        PrincipalOp::Ln if zero => Err(Error::BranchPoint),
        PrincipalOp::Ln => Ok(ln(z)),
        PrincipalOp::Sqrt => Ok(sqrt(z)),
        PrincipalOp::Pow(l) if zero && l.re <= 0.0 && l != C::new(0.0, 0.0) => Err(Error::BranchPoint),
        PrincipalOp::Pow(l) => Ok(pow(z, l)),
    }
}

pub(crate) fn check_finite(z: C) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {z}")))
    }
}

/// A point on the Riemann surface of the logarithm: modulus and an
/// unreduced angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub r: f64,
    pub theta: f64,
}

impl Polar {
    pub fn new(r: f64, theta: f64) -> Self {
        Self { r, theta }
    }

    /// The principal representative of `z`.
    pub fn principal(z: C) -> Self {
        Self { r: z.norm(), theta: arg(z) }
    }

    pub fn to_c(self) -> C {
        C::from_polar(self.r, self.theta)
    }

    pub fn ln(self) -> C {
        C::new(self.r.ln(), self.theta)
    }

    pub fn pow(self, lambda: C) -> C {
        if self.r == 0.0 {
            return pow(C::new(0.0, 0.0), lambda);
        }
        (lambda * self.ln()).exp()
    }

    pub fn rotate(self, angle: f64) -> Self {
        Self { r: self.r, theta: self.theta + angle }
    }
}

fn nearest_nonpositive_integer(z: C) -> Option<(i64, f64)> {
    let n = z.re.round();
    if n > 0.0 {
        return None;
    }
    Some((n as i64, (z - C::new(n, 0.0)).norm()))
}

/// `sin(pi z)` after exact reduction of the integer part.
pub(crate) fn sin_pi(z: C) -> C {
    let n = z.re.round();
    let f = z - C::new(n, 0.0);
    let s = (f * PI).sin();
    if (n as i64).rem_euclid(2) == 1 {
        -s
    } else {
        s
    }
}

/// A logarithm of `sin(pi z)` that stays finite for large `|Im z|`.
fn ln_sin_pi(z: C) -> C {
    let n = z.re.round();
    let f = z - C::new(n, 0.0);
    let w = f * PI;
    let i = C::new(0.0, 1.0);
    let base = if w.im > 15.0 {
        -i * w + C::new(0.5f64.ln(), PI / 2.0) + ln(C::new(1.0, 0.0) - (2.0 * i * w).exp())
    } else if w.im < -15.0 {
        i * w + C::new(0.5f64.ln(), -PI / 2.0) + ln(C::new(1.0, 0.0) - (-2.0 * i * w).exp())
    } else {
        ln(w.sin())
    };
    if (n as i64).rem_euclid(2) == 1 {
        base + C::new(0.0, PI)
    } else {
        base
    }
}

/// `pi cot(pi z)`, stable for large `|Im z|`.
fn pi_cot_pi(z: C) -> C {
    let n = z.re.round();
    let w = (z - C::new(n, 0.0)) * PI;
    let i = C::new(0.0, 1.0);
    let one = C::new(1.0, 0.0);
    let cot = if w.im >= 0.0 {
        let e = (2.0 * i * w).exp();
        i * (e + one) / (e - one)
    } else {
        let e = (-2.0 * i * w).exp();
        i * (one + e) / (one - e)
    };
    cot * PI
}

fn check_pole(z: C) -> Result<()> {
    check_finite(z)?;
    if let Some((_, d)) = nearest_nonpositive_integer(z) {
        if d < TOL_POLE {
            return Err(Error::Pole(z));
        }
    }
    Ok(())
}

/// A logarithm of Gamma. Real for real positive arguments; elsewhere the
/// imaginary part is continuous away from the negative real axis.
pub fn ln_gamma(z: C) -> Result<C> {
    check_pole(z)?;
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: C) -> C {
    if z.re < 0.5 {
        let one = C::new(1.0, 0.0);
        return C::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_unchecked(one - z);
    }
    let mut w = z;
    let mut shift = C::new(0.0, 0.0);
    while w.norm_sqr() < ASYMPTOTIC_RADIUS * ASYMPTOTIC_RADIUS {
        shift += ln(w);
        w += 1.0;
    }
    stirling(w) - shift
}

/// Stirling series for `ln Gamma(w)`, `|w| >= ASYMPTOTIC_RADIUS`.
fn stirling(w: C) -> C {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * ln(w) - w + LN_SQRT_2PI + series
}

/// `(ln Gamma(w), z (z+1) ... (w-1))` with `w = z + n` past the Stirling
/// radius. The branch of the logarithm is irrelevant to callers that
/// exponentiate, so the shift is a plain product.
fn shifted_stirling(z: C) -> (C, C) {
    let mut w = z;
    let mut product = C::new(1.0, 0.0);
    while w.norm_sqr() < ASYMPTOTIC_RADIUS * ASYMPTOTIC_RADIUS {
        product *= w;
        w += 1.0;
    }
    (stirling(w), product)
}

/// Gamma function.
pub fn gamma(z: C) -> Result<C> {
    check_pole(z)?;
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(C::new(ln_gamma_unchecked(z).re.exp(), 0.0));
    }
    if z.re >= 0.5 {
        let (lg, product) = shifted_stirling(z);
        return Ok(lg.exp() / product);
    }
    Ok(ln_gamma_unchecked(z).exp())
}

/// Reciprocal Gamma function, entire. Within the pole tolerance it returns
/// the linearisation `(-1)^n n! (z + n)` around the zero at `-n`.
pub fn rgamma(z: C) -> C {
    if let Some((n, d)) = nearest_nonpositive_integer(z) {
        if d < TOL_POLE {
            let k = (-n) as u32;
            let fact: f64 = (1..=k).map(f64::from).product();
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            return (z - C::new(n as f64, 0.0)) * (sign * fact);
        }
    }
    if z.im == 0.0 && z.re > 0.0 {
        return C::new((-ln_gamma_unchecked(z).re).exp(), 0.0);
    }
    if z.re >= 0.5 {
        let (lg, product) = shifted_stirling(z);
        return (-lg).exp() * product;
    }
    (-ln_gamma_unchecked(z)).exp()
}

/// Digamma function.
pub fn digamma(z: C) -> Result<C> {
    check_pole(z)?;
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: C) -> C {
    if z.re < 0.5 {
        let one = C::new(1.0, 0.0);
        return digamma_unchecked(one - z) - pi_cot_pi(z);
    }
    let mut w = z;
    let mut shift = C::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_RADIUS {
        shift += w.inv();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C::new(0.0, 0.0);
    let mut p = inv2;
    for c in DIGAMMA_ASY {
        series += p * c;
        p *= inv2;
    }
    ln(w) - inv * 0.5 - series - shift
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer(a: C, k: usize) -> C {
    (0..k).fold(C::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// Generalised Laguerre polynomial `L_n^{(alpha)}(z)` from its finite sum.
pub fn laguerre(n: usize, alpha: C, z: C) -> C {
    let mut sum = C::new(0.0, 0.0);
    let mut zpow = C::new(1.0, 0.0);
    let mut jfact = 1.0;
    for j in 0..=n {
        if j > 0 {
            zpow *= z;
            jfact *= j as f64;
        }
        // binom(n + alpha, n - j) = prod_{i=1}^{n-j} (alpha + j + i) / i
        let mut binom = C::new(1.0, 0.0);
        for i in 1..=(n - j) {
            binom *= (alpha + (j + i) as f64) / i as f64;
        }
        let term = binom * zpow / jfact;
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `H_k(z) = 1/z + 1/(z+1) + ... + 1/(z+k-1)`.
pub fn harmonic_offset(k: usize, z: C) -> Result<C> {
    check_finite(z)?;
    let mut s = C::new(0.0, 0.0);
    for j in 0..k {
        let d = z + j as f64;
        if d.norm() < TOL_POLE {
            return Err(Error::Pole(z));
        }
        s += d.inv();
    }
    Ok(s)
}
