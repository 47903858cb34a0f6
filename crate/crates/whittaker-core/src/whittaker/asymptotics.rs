//! Leading terms of the canonical solutions near zero and near infinity.

use super::{SolutionKind, WhittakerParams};
use crate::error::{Error, Result};
use crate::special::{gamma, ln, pow, rgamma, sqrt};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Zero,
    Infinity,
}

const EXACT: f64 = 1e-14;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Leading behaviour of a canonical solution in the given regime.
///
/// Near zero, `K` and `H±` are only covered for `Re m >= 0`; reflect with
/// `m -> -m` first otherwise. For `J` at infinity the two-wave form with its
/// first correction is returned, for real `z`.
pub fn asymptotic_leading(kind: SolutionKind, p: WhittakerParams, regime: Regime, z: C) -> Result<C> {
    let WhittakerParams { beta, m } = p;
    let i = C::i();
    match (kind, regime) {
        (SolutionKind::I | SolutionKind::J, Regime::Zero) => Ok(pow(z, m + 0.5) * rgamma(m * 2.0 + 1.0)),
        (SolutionKind::I, Regime::Infinity) => Ok(pow(z, -beta) * (z * 0.5).exp() * rgamma(m + 0.5 - beta)),
        (SolutionKind::K, Regime::Zero) => near_zero_decaying(beta, m, ln(z)),
        (SolutionKind::K, Regime::Infinity) => Ok(pow(z, beta) * (-z * 0.5).exp()),
        (SolutionKind::HPlus | SolutionKind::HMinus, Regime::Zero) => {
            let s = if kind == SolutionKind::HPlus { 1.0 } else { -1.0 };
            let phase = (-i * s * PI * 0.5 * (m + 0.5)).exp();
            Ok(phase * near_zero_decaying(i * s * beta, m, ln(z) - i * (s * PI / 2.0))?)
        }
        (SolutionKind::HPlus | SolutionKind::HMinus, Regime::Infinity) => {
            let s = if kind == SolutionKind::HPlus { 1.0 } else { -1.0 };
            let phase = (-i * s * PI * 0.5 * (m + 0.5)).exp();
            Ok(phase * (PI * beta * 0.5).exp() * pow(z, i * s * beta) * (i * s * z * 0.5).exp())
        }
        (SolutionKind::J, Regime::Infinity) => {
            let a_minus = m + 0.5 - i * beta;
            let a_plus = m + 0.5 + i * beta;
            let incoming = (i * PI * 0.5 * (m + 0.5 + i * beta)).exp()
                * rgamma(a_minus)
                * (-i * z * 0.5).exp()
                * pow(z, -i * beta)
                * (c(1.0) + i * a_plus * (c(0.5) - m + i * beta) / z);
            let outgoing = (-i * PI * 0.5 * (m + 0.5 - i * beta)).exp()
                * rgamma(a_plus)
                * (i * z * 0.5).exp()
                * pow(z, i * beta)
                * (c(1.0) - i * a_minus * (c(0.5) - m - i * beta) / z);
            Ok(incoming + outgoing)
        }
        (SolutionKind::JZero | SolutionKind::YZero, _) => zero_energy_leading(kind, beta, m, regime, z),
    }
}

/// Leading term of `K_{beta,m}` near zero for `Re m >= 0`; `log` is the
/// logarithm of the argument on the sheet in use.
fn near_zero_decaying(beta: C, m: C, log: C) -> Result<C> {
    if m.re < 0.0 {
        return Err(Error::UnsupportedCase("leading term near zero needs Re m >= 0; reflect m first"));
    }
    let root = (log * 0.5).exp();
    if m.norm() < EXACT {
        return Ok(-root * log * rgamma(c(0.5) - beta));
    }
    let power = |e: C| (log * e).exp();
    if m.re.abs() < EXACT {
        let first = gamma(-m * 2.0)? * rgamma(c(0.5) - m - beta) * power(m);
        let second = gamma(m * 2.0)? * rgamma(c(0.5) + m - beta) * power(-m);
        return Ok(root * (first + second));
    }
    if (m - 0.5).norm() < EXACT {
        return Ok(rgamma(c(1.0) - beta));
    }
    Ok(gamma(m * 2.0)? * rgamma(c(0.5) + m - beta) * power(c(0.5) - m))
}

fn zero_energy_leading(kind: SolutionKind, beta: C, m: C, regime: Regime, z: C) -> Result<C> {
    if beta == c(0.0) {
        return Ok(match kind {
            SolutionKind::JZero => pow(z, m + 0.5),
            _ if m == c(0.0) => sqrt(z) * ln(z),
            _ => pow(z, c(0.5) - m),
        });
    }
    let nu = m * 2.0;
    let w = sqrt(beta * z) * 2.0;
    let quarter = pow(z, c(0.25));
    match regime {
        Regime::Zero if kind == SolutionKind::JZero => {
            Ok(PI.sqrt() * pow(beta, m + 0.25) * rgamma(nu + 1.0) * pow(z, m + 0.5))
        }
        Regime::Zero => {
            if nu.re <= 0.0 {
                return Err(Error::UnsupportedCase("leading term of y near zero needs Re m > 0"));
            }
            Ok(-quarter * (PI * w * 0.5).sqrt() * gamma(nu)? / PI * pow(w * 0.5, -nu))
        }
        Regime::Infinity => {
            let phase = w - nu * (PI / 2.0) - PI / 4.0;
            Ok(quarter * if kind == SolutionKind::JZero { phase.cos() } else { phase.sin() })
        }
    }
}
