//! Analytic continuation of solutions of `z^2 v'' = (mu - beta z + e z^2) v`
//! by local Taylor expansion.
//!
//! Each step stays inside a disc of radius `STEP_FRACTION * |z0|` around the
//! current point, well within the radius of convergence `|z0|`, and is also
//! capped at `MAX_STEP` so that the exponential factors of the solutions do
//! not produce large intermediate Taylor terms.

use crate::special::mag;
use num_complex::Complex64 as C;

const STEP_FRACTION: f64 = 0.4;
const MAX_STEP: f64 = 3.0;
const MAX_ORDER: usize = 400;
const TERM_TOL: f64 = 1e-18;

/// Coefficients of `z^2 v'' = (mu - beta z + energy z^2) v`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Equation {
    pub mu: C,
    pub beta: C,
    pub energy: C,
}

impl Equation {
    /// The hyperbolic-type Whittaker equation, whose solutions are `I` and `K`.
    pub fn hyperbolic(beta: C, m: C) -> Self {
        Self { mu: m * m - 0.25, beta, energy: C::new(0.25, 0.0) }
    }

    /// One Taylor step from `z0` to `z0 + h`.
    fn step(&self, z0: C, v0: C, dv0: C, h: C) -> (C, C) {
        let a = self.mu - self.beta * z0 + self.energy * z0 * z0;
        let b = -self.beta + self.energy * z0 * 2.0;
        let c = self.energy;
        let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
        let z02 = z0 * z0;
        // s[n] = c_n h^n, kept in a sliding window of four.
        let mut s = [C::new(0.0, 0.0), C::new(0.0, 0.0), v0, dv0 * h];
        let mut value = s[2] + s[3];
        let mut slope = s[3];
        let mut quiet = 0;
        for n in 0..MAX_ORDER {
            let nf = n as f64;
            let (s_nm2, s_nm1, s_n, s_np1) = (s[0], s[1], s[2], s[3]);
            let rhs = a * h2 * s_n + b * h3 * s_nm1 + c * h4 * s_nm2
                - z0 * h * (2.0 * (nf + 1.0) * nf) * s_np1
                - h2 * (nf * (nf - 1.0)) * s_n;
            let next = rhs / (z02 * ((nf + 2.0) * (nf + 1.0)));
            value += next;
            slope += next * (nf + 2.0);
            s = [s_nm1, s_n, s_np1, next];
            let scale = mag(value) + mag(slope);
            if mag(next) * (nf + 2.0) <= TERM_TOL * scale {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        (value, slope / h)
    }

    /// Continues `(v, v')` along the straight segment from `from` to `to`,
    /// which must not pass near the origin.
    pub fn continue_segment(&self, from: C, to: C, mut v: C, mut dv: C) -> (C, C) {
        let mut z = from;
        loop {
            let remaining = to - z;
            let limit = (STEP_FRACTION * z.norm()).min(MAX_STEP);
            let h = if remaining.norm() <= limit { remaining } else { remaining * (limit / remaining.norm()) };
            (v, dv) = self.step(z, v, dv, h);
            z += h;
            if h == remaining {
                return (v, dv);
            }
        }
    }

    /// Continues along a circular arc of radius `r` between two angles.
    pub fn continue_arc(&self, r: f64, from: f64, to: f64, mut v: C, mut dv: C) -> (C, C) {
        let pieces = ((to - from).abs() / 0.3).ceil().max(1.0) as usize;
        let mut z = C::from_polar(r, from);
        for i in 1..=pieces {
            let angle = from + (to - from) * i as f64 / pieces as f64;
            let next = C::from_polar(r, angle);
            (v, dv) = self.continue_segment(z, next, v, dv);
            z = next;
        }
        (v, dv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_solution_is_reproduced() {
        // beta = 0, m = 1/2 gives v'' = v/4 with solution e^{-z/2}.
        let eq = Equation::hyperbolic(C::new(0.0, 0.0), C::new(0.5, 0.0));
        let from = C::new(30.0, 0.0);
        let to = C::new(0.7, 1.1);
        let v0 = (-from * 0.5).exp();
        let (v, dv) = eq.continue_segment(from, to, v0, -v0 * 0.5);
        let exact = (-to * 0.5).exp();
        assert!((v - exact).norm() / exact.norm() < 1e-13);
        assert!((dv + exact * 0.5).norm() / exact.norm() < 1e-13);
    }

    #[test]
    fn arc_matches_closed_form() {
        let eq = Equation::hyperbolic(C::new(0.0, 0.0), C::new(0.5, 0.0));
        let r = 3.0;
        let start = C::from_polar(r, 0.2);
        let v0 = (-start * 0.5).exp();
        let (v, _) = eq.continue_arc(r, 0.2, 2.9, v0, -v0 * 0.5);
        let exact = (-C::from_polar(r, 2.9) * 0.5).exp();
        assert!((v - exact).norm() / exact.norm() < 1e-13);
    }
}
