//! Independent integration of the Whittaker-type equations
//! `v'' = ((m^2 - 1/4)/x^2 - beta/x + e) v` along the real axis.
//!
//! Solutions regular at zero start from their convergent Frobenius series;
//! `K` and `H±` start far out from their asymptotic series and are
//! integrated inward. The integrator is a Gragg-Bulirsch-Stoer scheme of
//! order 16 with step control on `|dv| / (|v| + |v'|)`.

use crate::error::{Error, Result};
use crate::hyper::f20_with_derivative;
use crate::par::{try_map_range, Execution};
use crate::special::{pow, rgamma, sin_pi};
use crate::whittaker::{SolutionKind, WhittakerParams};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Default local error per unit length.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Smallest admissible step before the integration is abandoned.
pub const MIN_STEP: f64 = 1e-12;
/// Default start of outward integrations.
pub const SERIES_START: f64 = 1e-3;
/// Smallest start of inward integrations.
pub const FAR_START: f64 = 60.0;
const FAR_LIMIT: f64 = 700.0;
const FAR_ACCURACY: f64 = 1e-11;

const SUBSTEPS: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];
const SAFETY: f64 = 0.9;

/// The energy term of the hyperbolic equation, `+1/4`.
pub const HYPERBOLIC: f64 = 0.25;
/// The energy term of the trigonometric equation, `-1/4`.
pub const TRIGONOMETRIC: f64 = -0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeProblem {
    pub params: WhittakerParams,
    /// Coefficient `e` of `v` in `-v'' + (mu/x^2 - beta/x + e) v = 0`.
    pub energy_term: C,
    /// Integrate `w(x) = v(e^{i theta} x)` instead of `v(x)`.
    pub rotation: f64,
    pub x_start: f64,
    pub x_end: f64,
    /// `(v, v')` at `x_start`.
    pub seed: (C, C),
}

impl OdeProblem {
    pub fn new(params: WhittakerParams, energy_term: C, x_start: f64, x_end: f64, seed: (C, C)) -> Result<Self> {
        if !(x_start > 0.0 && x_end > 0.0 && x_start.is_finite() && x_end.is_finite()) {
            return Err(Error::Domain(format!("integration needs positive endpoints, got [{x_start}, {x_end}]")));
        }
        Ok(Self { params, energy_term, rotation: 0.0, x_start, x_end, seed })
    }

    pub fn rotated(self, rotation: f64) -> Self {
        Self { rotation, ..self }
    }

    fn coefficients(&self) -> Coefficients {
        let phase = C::from_polar(1.0, self.rotation);
        Coefficients {
            mu: self.params.m * self.params.m - 0.25,
            beta: self.params.beta * phase,
            energy: self.energy_term * phase * phase,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Coefficients {
    mu: C,
    beta: C,
    energy: C,
}

impl Coefficients {
    fn rhs(&self, x: f64, (v, dv): (C, C)) -> (C, C) {
        (dv, (self.mu / (x * x) - self.beta / x + self.energy) * v)
    }
}

fn add(a: (C, C), b: (C, C), s: f64) -> (C, C) {
    (a.0 + b.0 * s, a.1 + b.1 * s)
}

fn modified_midpoint(c: &Coefficients, x: f64, y: (C, C), step: f64, n: usize) -> (C, C) {
    let h = step / n as f64;
    let mut prev = y;
    let mut cur = add(y, c.rhs(x, y), h);
    for k in 1..n {
        let next = add(prev, c.rhs(x + k as f64 * h, cur), 2.0 * h);
        prev = cur;
        cur = next;
    }
    let end = add(cur, c.rhs(x + step, cur), h);
    ((end.0 + prev.0) * 0.5, (end.1 + prev.1) * 0.5)
}

/// One extrapolated step; returns the new state and the scaled error.
fn gbs_step(c: &Coefficients, x: f64, y: (C, C), step: f64) -> ((C, C), f64) {
    let mut table: Vec<(C, C)> = Vec::with_capacity(SUBSTEPS.len());
    let mut error = f64::INFINITY;
    for (j, &n) in SUBSTEPS.iter().enumerate() {
        let mut cur = modified_midpoint(c, x, y, step, n);
        for k in 1..=j {
            let ratio = (n as f64 / SUBSTEPS[j - k] as f64).powi(2) - 1.0;
            let below = table[k - 1];
            table[k - 1] = cur;
            cur = (cur.0 + (cur.0 - below.0) / ratio, cur.1 + (cur.1 - below.1) / ratio);
            if k == j {
                let change = (cur.0 - table[k - 1].0).norm() + (cur.1 - table[k - 1].1).norm();
                error = change / (cur.0.norm() + cur.1.norm());
            }
        }
        table.push(cur);
    }
    (table[SUBSTEPS.len() - 1], error)
}

/// Adaptive integration from `(x0, y0)` to `x1`, recording accepted nodes.
fn drive(c: &Coefficients, x0: f64, y0: (C, C), x1: f64, tol: f64, nodes: &mut Vec<(f64, C, C)>) -> Result<(C, C)> {
    let direction = if x1 >= x0 { 1.0 } else { -1.0 };
    let (mut x, mut y) = (x0, y0);
    let mut step = (0.05 * x0).min(0.5);
    while (x1 - x) * direction > 1e-14 * x1 {
        let remaining = (x1 - x).abs();
        step = step.min(0.5 * x).min(2.0);
        if step < MIN_STEP {
            return Err(Error::StiffnessFailure(MIN_STEP, x));
        }
        step = step.min(remaining);
        let (next, error) = gbs_step(c, x, y, direction * step);
        let allowed = (tol * step).max(64.0 * f64::EPSILON);
        if error <= allowed {
            x = if step == remaining { x1 } else { x + direction * step };
            y = next;
            nodes.push((x, y.0, y.1));
        }
        let factor = if error == 0.0 { 4.0 } else { SAFETY * (allowed / error).powf(1.0 / 15.0) };
        if !factor.is_finite() {
            step *= 0.25;
            continue;
        }
        step *= factor.clamp(0.25, 4.0);
    }
    Ok(y)
}

/// Dense output of an integration: stored accepted steps plus
/// re-integration from the nearest node on the start side.
#[derive(Debug, Clone)]
pub struct Trajectory {
    problem: OdeProblem,
    tol: f64,
    /// `(x, v, v')`, ordered from `x_start` to `x_end`.
    nodes: Vec<(f64, C, C)>,
}

impl Trajectory {
    pub fn nodes(&self) -> &[(f64, C, C)] {
        &self.nodes
    }

    pub fn end(&self) -> (C, C) {
        let last = self.nodes.last().expect("trajectory has its seed node");
        (last.1, last.2)
    }

    /// `(v, v')` at `x` inside the integration interval.
    pub fn at(&self, x: f64) -> Result<(C, C)> {
        let (lo, hi) = (self.problem.x_start.min(self.problem.x_end), self.problem.x_start.max(self.problem.x_end));
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain(format!("x = {x} lies outside [{lo}, {hi}]")));
        }
        let outward = self.problem.x_end >= self.problem.x_start;
        let idx = if outward {
            self.nodes.partition_point(|n| n.0 <= x).saturating_sub(1)
        } else {
            self.nodes.partition_point(|n| n.0 >= x).saturating_sub(1)
        };
        let (x0, v, dv) = self.nodes[idx];
        if (x0 - x).abs() <= 1e-14 * x {
            return Ok((v, dv));
        }
        drive(&self.problem.coefficients(), x0, (v, dv), x, self.tol, &mut Vec::new())
    }

    pub fn value(&self, x: f64) -> Result<C> {
        Ok(self.at(x)?.0)
    }
}

/// Integrates `prob` with local error at most `tol` per unit length.
pub fn integrate(prob: &OdeProblem, tol: f64) -> Result<Trajectory> {
    let mut nodes = vec![(prob.x_start, prob.seed.0, prob.seed.1)];
    drive(&prob.coefficients(), prob.x_start, prob.seed, prob.x_end, tol, &mut nodes)?;
    Ok(Trajectory { problem: *prob, tol, nodes })
}

/// `x^s sum_n a_n x^n` with `n (n + 2m) a_n = -beta a_{n-1} + e a_{n-2}`,
/// `s = 1/2 + m`, summed to convergence together with its derivative.
fn frobenius(beta: C, m: C, energy: C, leading: C, x: C) -> Result<(C, C)> {
    let two_m = m * 2.0;
    let (mut a_prev, mut a_cur) = (C::new(0.0, 0.0), leading);
    let (mut sum, mut dsum) = (a_cur, a_cur * (m + 0.5));
    let mut power = C::new(1.0, 0.0);
    let mut n = 0usize;
    loop {
        n += 1;
        let denom = (two_m + n as f64) * n as f64;
        if denom.norm() < 1e-10 {
            return Err(Error::SeriesNotApplicable);
        }
        let a_next = (-beta * a_cur + energy * a_prev) / denom;
        power *= x;
        let term = a_next * power;
        sum += term;
        dsum += term * (m + 0.5 + n as f64);
        (a_prev, a_cur) = (a_cur, a_next);
        // Three-term recurrence: a single small term is not enough to stop.
        let previous = (a_prev * power / x).norm();
        if term.norm().max(previous) <= 1e-17 * sum.norm() && n > 4 {
            break;
        }
        if n > 2000 {
            return Err(Error::NoConvergence { terms: n });
        }
    }
    let lead = pow(x, m + 0.5);
    Ok((lead * sum, lead * dsum / x))
}

/// `(v, v')` at `x_start` for the solutions regular at zero, from their
/// Frobenius series. `K` and `H±` have no such seed; see [`far_seed`].
pub fn seed_from_series(kind: SolutionKind, p: WhittakerParams, x_start: f64) -> Result<(C, C)> {
    let x = C::new(x_start, 0.0);
    let (beta, m) = (p.beta, p.m);
    match kind {
        SolutionKind::I => frobenius(beta, m, C::new(HYPERBOLIC, 0.0), rgamma(m * 2.0 + 1.0), x),
        SolutionKind::J => frobenius(beta, m, C::new(TRIGONOMETRIC, 0.0), rgamma(m * 2.0 + 1.0), x),
        SolutionKind::JZero => frobenius(beta, m, C::new(0.0, 0.0), zero_energy_leading(beta, m), x),
        SolutionKind::YZero => {
            let (s, cs) = (sin_pi(m * 2.0), (m * (2.0 * PI)).cos());
            if s.norm() < 1e-8 {
                return Err(Error::SeriesNotApplicable);
            }
            let plus = frobenius(beta, m, C::new(0.0, 0.0), zero_energy_leading(beta, m), x)?;
            let minus = frobenius(beta, -m, C::new(0.0, 0.0), zero_energy_leading(beta, -m), x)?;
            Ok(((cs * plus.0 - minus.0) / s, (cs * plus.1 - minus.1) / s))
        }
        SolutionKind::K | SolutionKind::HPlus | SolutionKind::HMinus => Err(Error::SeriesNotApplicable),
    }
}

/// Leading coefficient `sqrt(pi) beta^{m+1/4} / Gamma(1+2m)` of `j`.
fn zero_energy_leading(beta: C, m: C) -> C {
    pow(beta, m + 0.25) * PI.sqrt() * rgamma(m * 2.0 + 1.0)
}

/// `c K_{b,m}(rho x)` and its `x`-derivative from the asymptotic series of
/// `K`, with `rho = e^{i angle}`, plus the relative truncation estimate.
fn decaying_seed(b: C, m: C, angle: f64, c: C, x: f64) -> Result<((C, C), f64)> {
    let rho = C::from_polar(1.0, angle);
    let z = rho * x;
    let log_z = C::new(x.ln(), angle);
    let front = (b * log_z - z * 0.5).exp();
    let (series, dseries, diag) = f20_with_derivative(m + 0.5 - b, -m + 0.5 - b, -z.inv())?;
    let value = front * series;
    let dz = value * (b / z - 0.5) + front * dseries / (z * z);
    Ok(((c * value, c * rho * dz), diag.error_estimate))
}

/// `(x_end, (v, v'))` for `K` or `H±`, with `x_end >= 60` grown until the
/// asymptotic series is accurate to about `1e-11`.
pub fn far_seed(kind: SolutionKind, p: WhittakerParams) -> Result<(f64, (C, C))> {
    let half_pi = PI / 2.0;
    let (b, angle, c) = match kind {
        SolutionKind::K => (p.beta, 0.0, C::new(1.0, 0.0)),
        SolutionKind::HPlus => (C::i() * p.beta, -half_pi, (-C::i() * half_pi * (p.m + 0.5)).exp()),
        SolutionKind::HMinus => (-C::i() * p.beta, half_pi, (C::i() * half_pi * (p.m + 0.5)).exp()),
        _ => return Err(Error::SeriesNotApplicable),
    };
    let mut x = FAR_START;
    loop {
        if let Ok((seed, estimate)) = decaying_seed(b, p.m, angle, c, x) {
            if estimate < FAR_ACCURACY {
                return Ok((x, seed));
            }
        }
        x *= 1.5;
        if x > FAR_LIMIT {
            return Err(Error::SeriesNotApplicable);
        }
    }
}

/// The equation a solution kind satisfies.
pub fn energy_of(kind: SolutionKind) -> C {
    match kind {
        SolutionKind::I | SolutionKind::K => C::new(HYPERBOLIC, 0.0),
        SolutionKind::J | SolutionKind::HPlus | SolutionKind::HMinus => C::new(TRIGONOMETRIC, 0.0),
        SolutionKind::JZero | SolutionKind::YZero => C::new(0.0, 0.0),
    }
}

/// A canonical solution assembled from one or two integrations that share
/// a seed point.
#[derive(Debug, Clone)]
pub struct Solution {
    pieces: Vec<Trajectory>,
}

impl Solution {
    pub fn pieces(&self) -> &[Trajectory] {
        &self.pieces
    }

    pub fn at(&self, x: f64) -> Result<(C, C)> {
        let covering = self.pieces.iter().find(|t| {
            let (a, b) = (t.problem.x_start, t.problem.x_end);
            x >= a.min(b) && x <= a.max(b)
        });
        match covering {
            Some(t) => t.at(x),
            None => Err(Error::Domain(format!("x = {x} lies outside the integrated interval"))),
        }
    }

    pub fn value(&self, x: f64) -> Result<C> {
        Ok(self.at(x)?.0)
    }
}

/// The canonical solution `kind` integrated over an interval covering
/// `[x_lo, x_hi]`, always in a direction in which it is not recessive.
pub fn solve(kind: SolutionKind, p: WhittakerParams, x_lo: f64, x_hi: f64, tol: f64) -> Result<Solution> {
    let energy = energy_of(kind);
    let problems = match kind {
        SolutionKind::K | SolutionKind::HPlus | SolutionKind::HMinus => {
            let (x_end, seed) = far_seed(kind, p)?;
            vec![OdeProblem::new(p, energy, x_end.max(x_hi), x_lo, seed)?]
        }
        // y dominates at zero, so it is integrated inward there; beyond the
        // turning region |2 sqrt(beta x)| ~ |2m| it may be recessive against
        // j inward, so it is integrated outward. Both start from the series.
        SolutionKind::YZero => {
            let turn = (p.m.norm_sqr() / p.beta.norm().max(1e-300)).clamp(x_lo, x_hi);
            let seed = seed_from_series(kind, p, turn)?;
            let mut problems = vec![OdeProblem::new(p, energy, turn, x_lo, seed)?];
            if turn < x_hi {
                problems.push(OdeProblem::new(p, energy, turn, x_hi, seed)?);
            }
            problems
        }
        _ => {
            // Outward integration amplifies the other solution by
            // (x/x_start)^{2|Re m|} when this one dominates at zero; the
            // series converges everywhere, so start at x_lo then.
            let start = if p.m.re < 0.0 { x_lo } else { SERIES_START.min(x_lo) };
            vec![OdeProblem::new(p, energy, start, x_hi, seed_from_series(kind, p, start)?)?]
        }
    };
    let pieces = problems.iter().map(|prob| integrate(prob, tol)).collect::<Result<Vec<_>>>()?;
    Ok(Solution { pieces })
}

/// Values of `kind` at `xs` by integration, one trajectory per call.
pub fn oracle_values(kind: SolutionKind, p: WhittakerParams, xs: &[f64], tol: f64) -> Result<Vec<C>> {
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(0.0, f64::max);
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let trajectory = solve(kind, p, lo, hi, tol)?;
    xs.iter().map(|&x| trajectory.value(x)).collect()
}

/// Independent oracle runs for many parameter sets.
pub fn oracle_batch(
    kind: SolutionKind,
    params: &[WhittakerParams],
    xs: &[f64],
    tol: f64,
    exec: Execution,
) -> Result<Vec<Vec<C>>> {
    try_map_range(exec, params.len(), |i| oracle_values(kind, params[i], xs, tol))
}

/// `max |W(x) - W(x_start)| / |W(x_start)|` for `W = u v' - u' v` of two
/// trajectories over the same interval, sampled at `xs`.
pub fn wronskian_drift(a: &Trajectory, b: &Trajectory, xs: &[f64]) -> Result<f64> {
    let w = |x: f64| -> Result<C> {
        let (u, du) = a.at(x)?;
        let (v, dv) = b.at(x)?;
        Ok(u * dv - du * v)
    };
    let reference = w(a.problem.x_start)?;
    let mut worst = 0.0f64;
    for &x in xs {
        worst = worst.max((w(x)? - reference).norm() / reference.norm());
    }
    Ok(worst)
}

/// `J_{beta,m}` on `xs` by integrating the hyperbolic equation with
/// parameters `(-i beta, m)` along the ray `i x`, started from the series
/// of `I` at `i x_start`, times `e^{-i pi (1/2+m)/2}`.
pub fn j_via_rotated_hyperbolic(p: WhittakerParams, xs: &[f64], tol: f64) -> Result<Vec<C>> {
    let rotated = WhittakerParams::new(-C::i() * p.beta, p.m);
    let start = SERIES_START;
    let (v, dv) = frobenius(rotated.beta, p.m, C::new(HYPERBOLIC, 0.0), rgamma(p.m * 2.0 + 1.0), C::new(0.0, start))?;
    let seed = (v, dv * C::i());
    let hi = xs.iter().cloned().fold(start, f64::max);
    let problem = OdeProblem::new(rotated, C::new(HYPERBOLIC, 0.0), start, hi, seed)?.rotated(PI / 2.0);
    let trajectory = integrate(&problem, tol)?;
    let phase = (-C::i() * PI * 0.5 * (p.m + 0.5)).exp();
    xs.iter().map(|&x| Ok(phase * trajectory.value(x)?)).collect()
}
