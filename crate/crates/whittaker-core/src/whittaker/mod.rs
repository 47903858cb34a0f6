//! The canonical solutions of the Whittaker equations.
//!
//! `I` and `K` solve the hyperbolic-type equation
//! `v'' + (-1/4 + beta/z + (1/4 - m^2)/z^2) v = 0`, `J` and `H±` the
//! trigonometric-type one obtained by `z -> i z`, `beta -> -i beta`.
//! `I` is normalised with `1/Gamma(1+2m)`, so it is entire in `(beta, m)`.

mod asymptotics;
mod kernel;
mod taylor;

pub use asymptotics::{asymptotic_leading, Regime};
pub(crate) use kernel::k_polar;

use crate::error::{Error, Result};
use crate::special::{gamma, pow, rgamma, sin_pi, sqrt, Polar};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Coupling `beta` and index `m` of the Whittaker operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerParams {
    pub beta: C,
    pub m: C,
}

impl WhittakerParams {
    /// Parameters for function evaluation; any `m` is accepted.
    pub fn new(beta: C, m: C) -> Self {
        Self { beta, m }
    }

    pub fn real(beta: f64, m: f64) -> Self {
        Self::new(C::new(beta, 0.0), C::new(m, 0.0))
    }

    /// Parameters of the closed operator, which requires `Re m > -1`.
    pub fn operator(beta: C, m: C) -> Result<Self> {
        if m.re <= -1.0 || !beta.is_finite() || !m.is_finite() {
            return Err(Error::Domain(format!("operator family needs Re m > -1, got m = {m}")));
        }
        Ok(Self::new(beta, m))
    }

    /// `(beta, m) = (0, -1/2)`, where the operator family is not holomorphic.
    pub fn is_singular_point(&self) -> bool {
        self.beta.norm() < 1e-14 && (self.m + 0.5).norm() < 1e-14
    }

    /// `alpha = m^2`, the coefficient of the inverse-square potential plus 1/4.
    pub fn alpha(&self) -> C {
        self.m * self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Which canonical solution a value belongs to. `I`, `K` solve the
/// hyperbolic-type equation, `J`, `H±` the trigonometric-type one, and
/// `JZero`, `YZero` the zero-energy equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionKind {
    I,
    K,
    J,
    HPlus,
    HMinus,
    JZero,
    YZero,
}

fn half() -> C {
    C::new(0.5, 0.0)
}

/// `I_{beta,m}(z) = z^{1/2+m} e^{-z/2} 1F1(1/2+m-beta; 1+2m; z) / Gamma(1+2m)`.
pub fn eval_i(p: WhittakerParams, z: C) -> Result<C> {
    crate::special::check_finite(z)?;
    i_polar(p.beta, p.m, Polar::principal(z))
}

pub(crate) fn i_polar(beta: C, m: C, z: Polar) -> Result<C> {
    let power = z.pow(m + half());
    if power == C::new(0.0, 0.0) {
        return Ok(power);
    }
    Ok(power * kernel::entire(beta, m, z.to_c())?)
}

/// `K_{beta,m}(z) = z^{1/2+m} e^{-z/2} U(1/2+m-beta; 1+2m; z)`, the solution
/// decaying along the positive axis.
pub fn eval_k(p: WhittakerParams, z: C) -> Result<C> {
    crate::special::check_finite(z)?;
    k_polar(p.beta, p.m, Polar::principal(z))
}

/// `I'_{beta,m}(z) = ((1/2+m)/z - 1/2) I_{beta,m}(z) + a z^{-1/2} I_{beta-1/2,m+1/2}(z)`
/// with `a = 1/2+m-beta`.
pub fn eval_i_derivative(p: WhittakerParams, z: C) -> Result<C> {
    crate::special::check_finite(z)?;
    let zp = Polar::principal(z);
    let value = i_polar(p.beta, p.m, zp)?;
    let raised = i_polar(p.beta - 0.5, p.m + 0.5, zp)?;
    let a = p.m + half() - p.beta;
    Ok(((p.m + half()) / z - 0.5) * value + a * zp.pow(-half()) * raised)
}

/// `K'_{beta,m}(z) = ((1/2+m)/z - 1/2) K_{beta,m}(z) - a z^{-1/2} K_{beta-1/2,m+1/2}(z)`.
pub fn eval_k_derivative(p: WhittakerParams, z: C) -> Result<C> {
    crate::special::check_finite(z)?;
    let zp = Polar::principal(z);
    let value = k_polar(p.beta, p.m, zp)?;
    let raised = k_polar(p.beta - 0.5, p.m + 0.5, zp)?;
    let a = p.m + half() - p.beta;
    Ok(((p.m + half()) / z - 0.5) * value - a * zp.pow(-half()) * raised)
}

/// `J_{beta,m}(z) = e^{-i pi (1/2+m)/2} I_{-i beta,m}(e^{i pi/2} z)`.
pub fn eval_j(p: WhittakerParams, z: C) -> Result<C> {
    Ok(eval_j_checked(p, z)?.0)
}

/// `J` through both admissible rotations, returning their mean and the
/// relative discrepancy between them.
pub fn eval_j_checked(p: WhittakerParams, z: C) -> Result<(C, f64)> {
    crate::special::check_finite(z)?;
    let zp = Polar::principal(z);
    let power = zp.pow(p.m + half());
    if power == C::new(0.0, 0.0) {
        return Ok((power, 0.0));
    }
    let i = C::i();
    let up = kernel::entire(-i * p.beta, p.m, i * z)?;
    // For real data the second rotation is the conjugate of the first.
    let real_data = p.beta.im == 0.0 && p.m.im == 0.0 && z.im == 0.0 && z.re > 0.0;
    let down = if real_data { up.conj() } else { kernel::entire(i * p.beta, p.m, -i * z)? };
    let mean = (up + down) * 0.5;
    let discrepancy = if mean.norm() > 0.0 { (up - down).norm() / mean.norm() } else { 0.0 };
    if discrepancy > 1e-10 {
        log::debug!("J rotation discrepancy {discrepancy:e} at beta={}, m={}, z={z}", p.beta, p.m);
    }
    Ok((power * mean, discrepancy))
}

/// `H±_{beta,m}(z) = e^{∓i pi (1/2+m)/2} K_{±i beta,m}(e^{∓i pi/2} z)`.
pub fn eval_h(p: WhittakerParams, sign: Sign, z: C) -> Result<C> {
    crate::special::check_finite(z)?;
    let s = sign.factor();
    let i = C::i();
    let zp = Polar::principal(z).rotate(-s * PI / 2.0);
    let phase = (-i * s * PI * 0.5 * (p.m + half())).exp();
    Ok(phase * k_polar(i * s * p.beta, p.m, zp)?)
}

/// Which zero-energy solution to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroEnergyKind {
    J,
    Y,
}

/// Solutions of `-v'' + ((m^2 - 1/4)/x^2 - beta/x) v = 0`:
/// `j = x^{1/4} J_{2m}(2 sqrt(beta x))`, `y = x^{1/4} Y_{2m}(2 sqrt(beta x))`
/// in terms of the one-dimensional Bessel functions, and the power basis
/// when `beta = 0`.
pub fn zero_energy(p: WhittakerParams, kind: ZeroEnergyKind, x: f64) -> Result<C> {
    if x == 0.0 {
        return Err(Error::BranchPoint);
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("zero-energy solutions need x > 0, got {x}")));
    }
    let xc = C::new(x, 0.0);
    if p.beta == C::new(0.0, 0.0) {
        return Ok(match kind {
            ZeroEnergyKind::J => pow(xc, half() + p.m),
            ZeroEnergyKind::Y if p.m == C::new(0.0, 0.0) => x.sqrt() * C::new(x.ln(), 0.0),
            ZeroEnergyKind::Y => pow(xc, half() - p.m),
        });
    }
    let nu = p.m * 2.0;
    let w = sqrt(p.beta * x) * 2.0;
    let quarter = x.powf(0.25);
    let bessel = WhittakerParams::new(C::new(0.0, 0.0), nu);
    match kind {
        ZeroEnergyKind::J => {
            if (half() + nu).re <= 0.0 && (half() + nu - C::new((half() + nu).re.round(), 0.0)).norm() < 1e-10 {
                return Err(Error::DegenerateCase(p.m));
            }
            Ok(quarter * gamma(half() + nu)? * 0.5 * eval_j(bessel, w * 2.0)?)
        }
        ZeroEnergyKind::Y => {
            let plus = eval_h(bessel, Sign::Plus, w * 2.0)?;
            let minus = eval_h(bessel, Sign::Minus, w * 2.0)?;
            Ok(quarter * (plus - minus) / (C::i() * 2.0))
        }
    }
}

/// `W(f, g; x) = f g' - f' g` by fourth-order central differences with step
/// `max(1e-4, 1e-4 x)`.
pub fn wronskian<F, G>(f: F, g: G, x: f64) -> Result<C>
where
    F: Fn(f64) -> Result<C>,
    G: Fn(f64) -> Result<C>,
{
    let h = (1e-4f64).max(1e-4 * x);
    let derivative = |u: &dyn Fn(f64) -> Result<C>| -> Result<C> {
        Ok((u(x - 2.0 * h)? - u(x + 2.0 * h)? + (u(x + h)? - u(x - h)?) * 8.0) / (12.0 * h))
    };
    let (fx, gx) = (f(x)?, g(x)?);
    Ok(fx * derivative(&g)? - derivative(&f)? * gx)
}

/// Right-hand side of
/// `I_{beta,m}(z) = Gamma(1/2-m+beta)/(2 pi) [e^{i pi m} K_{-beta,m}(e^{i pi} z) + e^{-i pi m} K_{-beta,m}(e^{-i pi} z)]`.
pub fn connection_i_from_k(p: WhittakerParams, z: C) -> Result<C> {
    check_nondegenerate(p.m)?;
    let zp = Polar::principal(z);
    let i = C::i();
    let up = (i * PI * p.m).exp() * k_polar(-p.beta, p.m, zp.rotate(PI))?;
    let down = (-i * PI * p.m).exp() * k_polar(-p.beta, p.m, zp.rotate(-PI))?;
    Ok(gamma(half() - p.m + p.beta)? / (2.0 * PI) * (up + down))
}

/// Right-hand side of
/// `K_{beta,m} = -pi/sin(2 pi m) (I_{beta,m}/Gamma(1/2-m-beta) - I_{beta,-m}/Gamma(1/2+m-beta))`.
pub fn connection_k_from_i(p: WhittakerParams, z: C) -> Result<C> {
    check_nondegenerate(p.m)?;
    let plus = eval_i(p, z)? * rgamma(half() - p.m - p.beta);
    let minus = eval_i(WhittakerParams::new(p.beta, -p.m), z)? * rgamma(half() + p.m - p.beta);
    Ok((plus - minus) * (-PI / sin_pi(p.m * 2.0)))
}

fn check_nondegenerate(m: C) -> Result<()> {
    let two_m = m * 2.0;
    if (two_m - C::new(two_m.re.round(), 0.0)).norm() < crate::hyper::TOL_DEGEN {
        return Err(Error::DegenerateCase(m));
    }
    Ok(())
}
