//! Spectral objects of the Whittaker operator `H_{beta,m}`: eigenvalues and
//! resonances, the resolvent kernel and its boundary values on the positive
//! axis, the spectral density, Riesz projections and the rotated spectrum
//! pictures obtained from dilation analyticity.
//!
//! `H_{beta,-1/2}` coincides with `H_{beta,1/2}` for `beta != 0`, so every
//! kernel routes `m = -1/2` to `m = 1/2`. At `(beta, m) = (0, -1/2)` the
//! holomorphic family is singular and evaluation is refused.

use crate::error::{Error, Result};
use crate::par::{try_map_range, Execution};
use crate::quad::GridFunction;
use crate::special::{arg, gamma, laguerre, ln_gamma, pow, sqrt, TOL_POLE};
use crate::whittaker::{eval_h, eval_i, eval_j, eval_k, Sign, WhittakerParams};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const CLASSIFY_TOL: f64 = 1e-13;
const HALF_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenKind {
    Eigenvalue,
    Resonance,
    Undefined,
}

/// `lambda = -beta^2 / (4 nu^2)` with `nu = n + m + 1/2`, and the pole of
/// the resolvent in `k` at `beta / (2 nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRecord {
    pub n: usize,
    pub lambda: C,
    pub kind: EigenKind,
    pub k_pole: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Resolvent(C),
    Boundary(f64, Sign),
    Density(f64),
    Projection(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub x: f64,
    pub y: f64,
    pub value: C,
    pub provenance: Provenance,
}

fn is_half(m: C, value: f64) -> bool {
    (m - value).norm() < HALF_TOL
}

/// Validates operator parameters and applies the `m = -1/2 -> 1/2` routing.
fn canonical(p: WhittakerParams) -> Result<WhittakerParams> {
    WhittakerParams::operator(p.beta, p.m)?;
    if p.is_singular_point() {
        return Err(Error::SingularFamilyPoint);
    }
    if is_half(p.m, -0.5) {
        return Ok(WhittakerParams::new(p.beta, C::new(0.5, 0.0)));
    }
    Ok(p)
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {x}")))
    }
}

fn classify(beta: C, nu: C) -> EigenKind {
    if nu.norm() < CLASSIFY_TOL {
        return EigenKind::Undefined;
    }
    // Sign of Re(beta/nu). The boundary Re = 0 puts lambda on the continuous
    // spectrum, so it is reported with the resonances.
    if (beta * nu.conj()).re > CLASSIFY_TOL * beta.norm() * nu.norm() {
        EigenKind::Eigenvalue
    } else {
        EigenKind::Resonance
    }
}

fn record(beta: C, m: C, n: usize) -> EigenRecord {
    let nu = m + 0.5 + n as f64;
    EigenRecord { n, lambda: -beta * beta / (nu * nu * 4.0), kind: classify(beta, nu), k_pole: beta / (nu * 2.0) }
}

/// Records for `N = 0..=n_max`. Empty for `beta = 0`; `N = 0` is skipped for
/// `m = -1/2`, where it would duplicate the `m = 1/2` series.
pub fn eigenvalues(p: WhittakerParams, n_max: usize) -> Result<Vec<EigenRecord>> {
    WhittakerParams::operator(p.beta, p.m)?;
    if p.is_singular_point() {
        return Err(Error::SingularFamilyPoint);
    }
    if p.beta == C::new(0.0, 0.0) {
        return Ok(Vec::new());
    }
    let first = usize::from(is_half(p.m, -0.5));
    Ok((first..=n_max).map(|n| record(p.beta, p.m, n)).collect())
}

/// Real `k > 0` at which a Gamma factor of the `side` boundary kernel has a
/// pole: `k = ±i beta / (2 (n + m + 1/2))`, for `n <= n_max`.
pub fn exceptional_energies(p: WhittakerParams, side: Sign, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .filter_map(|n| {
            let nu = p.m + 0.5 + n as f64;
            if nu.norm() < CLASSIFY_TOL {
                return None;
            }
            let k = C::i() * side.factor() * p.beta / (nu * 2.0);
            (k.re > 0.0 && k.im.abs() <= 1e-12 * k.re).then_some(k.re)
        })
        .collect()
}

/// Distance of `z` from the non-positive integers.
fn pole_distance(z: C) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    (z - C::new(z.re.round(), 0.0)).norm()
}

fn resolvent_factor(p: WhittakerParams, k: C) -> Result<(C, C)> {
    if k.re <= 0.0 || !k.is_finite() {
        return Err(Error::Domain(format!("resolvent needs Re k > 0, got k = {k}")));
    }
    let b = p.beta / (k * 2.0);
    let a = p.m + 0.5 - b;
    if pole_distance(a) < TOL_POLE {
        return Err(Error::PoleAtEigenvalue(k));
    }
    Ok((gamma(a)? / (k * 2.0), b))
}

/// Kernel of `(H_{beta,m} + k^2)^{-1}`:
/// `Gamma(1/2+m-b)/(2k) I_{b,m}(2k min(x,y)) K_{b,m}(2k max(x,y))`, `b = beta/(2k)`.
pub fn resolvent_kernel(p: WhittakerParams, k: C, x: f64, y: f64) -> Result<KernelSample> {
    check_positive(x, "x")?;
    check_positive(y, "y")?;
    let p = canonical(p)?;
    let (factor, b) = resolvent_factor(p, k)?;
    let q = WhittakerParams::new(b, p.m);
    let (lo, hi) = (x.min(y), x.max(y));
    let value = factor * eval_i(q, k * (2.0 * lo))? * eval_k(q, k * (2.0 * hi))?;
    Ok(KernelSample { x, y, value, provenance: Provenance::Resolvent(k) })
}

/// `g_i = sum_j w_j R(x_i, x_j) f_j` in O(n) using the product structure of
/// the kernel. Both factors are carried with `e^{∓Re(k) x}` removed, so the
/// running sums cannot overflow on long grids.
pub fn apply_resolvent(p: WhittakerParams, k: C, f: &GridFunction) -> Result<GridFunction> {
    apply_resolvent_with(p, k, f, Execution::default())
}

pub fn apply_resolvent_with(p: WhittakerParams, k: C, f: &GridFunction, exec: Execution) -> Result<GridFunction> {
    let p = canonical(p)?;
    let (factor, b) = resolvent_factor(p, k)?;
    let q = WhittakerParams::new(b, p.m);
    let xs = &f.nodes;
    let n = xs.len();
    let rate = k.re;
    let pairs = try_map_range(exec, n, |i| -> Result<(C, C)> {
        let x = xs[i];
        let z = k * (2.0 * x);
        Ok((eval_i(q, z)? * (-rate * x).exp(), eval_k(q, z)? * (rate * x).exp()))
    })?;
    let mut below = vec![C::new(0.0, 0.0); n];
    let mut running = C::new(0.0, 0.0);
    for i in 0..n {
        if i > 0 {
            running *= (-rate * (xs[i] - xs[i - 1])).exp();
        }
        running += pairs[i].0 * f.values[i] * f.weights[i];
        below[i] = running;
    }
    let mut values = vec![C::new(0.0, 0.0); n];
    let mut above = C::new(0.0, 0.0);
    for i in (0..n).rev() {
        if i + 1 < n {
            above = (above + pairs[i + 1].1 * f.values[i + 1] * f.weights[i + 1]) * (-rate * (xs[i + 1] - xs[i])).exp();
        }
        values[i] = factor * (pairs[i].1 * below[i] + pairs[i].0 * above);
    }
    Ok(GridFunction { values, ..f.clone() })
}

/// `(L_{beta,m^2} f)(x_i)` by second-order central differences at the
/// interior nodes of an equally spaced grid, where
/// `L = -d^2/dx^2 + (m^2 - 1/4)/x^2 - beta/x`.
pub fn apply_operator_fd(p: WhittakerParams, f: &GridFunction) -> Vec<C> {
    let xs = &f.nodes;
    let v = &f.values;
    let mu = p.m * p.m - 0.25;
    (1..xs.len().saturating_sub(1))
        .map(|i| {
            let h = (xs[i + 1] - xs[i - 1]) / 2.0;
            let second = (v[i + 1] - v[i] * 2.0 + v[i - 1]) / (h * h);
            let x = xs[i];
            -second + (mu / (x * x) - p.beta / x) * v[i]
        })
        .collect()
}

fn boundary_factor(p: WhittakerParams, k: f64, side: Sign) -> Result<(C, C)> {
    check_positive(k, "k")?;
    let s = side.factor();
    let b = p.beta / (2.0 * k);
    let a = p.m + 0.5 - C::i() * s * b;
    if pole_distance(a) < TOL_POLE {
        return Err(Error::ExceptionalEnergy(k));
    }
    Ok((C::i() * s / (2.0 * k) * gamma(a)?, b))
}

/// Boundary value `R(k^2 ± i0)`:
/// `±(i/2k) Gamma(1/2+m∓ib) J_{b,m}(2k min) H±_{b,m}(2k max)`.
pub fn resolvent_boundary_kernel(p: WhittakerParams, k: f64, side: Sign, x: f64, y: f64) -> Result<KernelSample> {
    check_positive(x, "x")?;
    check_positive(y, "y")?;
    let p = canonical(p)?;
    let (factor, b) = boundary_factor(p, k, side)?;
    let q = WhittakerParams::new(b, p.m);
    let (lo, hi) = (x.min(y), x.max(y));
    let value = factor * eval_j(q, C::new(2.0 * k * lo, 0.0))? * eval_h(q, side, C::new(2.0 * k * hi, 0.0))?;
    Ok(KernelSample { x, y, value, provenance: Provenance::Boundary(k, side) })
}

/// `p(k^2; x, y) = e^{pi b}/(4 pi k) Gamma(1/2+m+ib) Gamma(1/2+m-ib) J(2kx) J(2ky)`.
pub fn spectral_density_kernel(p: WhittakerParams, k: f64, x: f64, y: f64) -> Result<KernelSample> {
    check_positive(x, "x")?;
    check_positive(y, "y")?;
    let p = canonical(p)?;
    check_positive(k, "k")?;
    let b = p.beta / (2.0 * k);
    let (plus, minus) = (p.m + 0.5 + C::i() * b, p.m + 0.5 - C::i() * b);
    if pole_distance(plus) < TOL_POLE || pole_distance(minus) < TOL_POLE {
        return Err(Error::ExceptionalEnergy(k));
    }
    let q = WhittakerParams::new(b, p.m);
    let log_factor = b * PI + ln_gamma(plus)? + ln_gamma(minus)?;
    let jx = eval_j(q, C::new(2.0 * k * x, 0.0))?;
    let jy = if x == y { jx } else { eval_j(q, C::new(2.0 * k * y, 0.0))? };
    let value = log_factor.exp() / (4.0 * PI * k) * jx * jy;
    Ok(KernelSample { x, y, value, provenance: Provenance::Density(k) })
}

/// Kernel of the Riesz projection onto the eigenvalue with index `n`:
/// `n!/Gamma(1+2m+n) (beta/nu)^{2+2m}/(2 nu) e^{-beta(x+y)/(2nu)} (xy)^{1/2+m}
/// L_n^{(2m)}(beta x/nu) L_n^{(2m)}(beta y/nu)`.
///
/// The factor `beta/(2 nu^2)` relative to `(beta/nu)^{1+2m}` is the
/// Laguerre norm `int u^{2m+1} e^{-u} L_n^{(2m)}(u)^2 du = 2 nu Gamma(1+2m+n)/n!`;
/// it makes the trace one and matches the residue of the resolvent.
pub fn riesz_projection_kernel(p: WhittakerParams, n: usize, x: f64, y: f64) -> Result<KernelSample> {
    check_positive(x, "x")?;
    check_positive(y, "y")?;
    let records = eigenvalues(p, n)?;
    match records.last() {
        Some(r) if r.n == n && r.kind == EigenKind::Eigenvalue => {}
        _ => return Err(Error::NotAnEigenvalue(n)),
    }
    let (p, n_eff) = if is_half(p.m, -0.5) { (canonical(p)?, n - 1) } else { (p, n) };
    let (beta, m) = (p.beta, p.m);
    let nu = m + 0.5 + n_eff as f64;
    let scale = beta / nu;
    let alpha = m * 2.0;
    let norm = ln_gamma(C::new(n_eff as f64 + 1.0, 0.0))? - ln_gamma(alpha + 1.0 + n_eff as f64)?;
    let value = (norm - scale * (x + y) * 0.5).exp() * pow(scale, alpha + 2.0) / (nu * 2.0)
        * pow(C::new(x * y, 0.0), m + 0.5)
        * laguerre(n_eff, alpha, scale * x)
        * laguerre(n_eff, alpha, scale * y);
    Ok(KernelSample { x, y, value, provenance: Provenance::Projection(n) })
}

/// `(1/2 pi i) ∮ 2k R(-k^2; x, y) dk` over a counter-clockwise circle of
/// the given radius around `k_pole`, by the trapezoid rule with `points`
/// nodes. For an eigenvalue this reproduces the Riesz projection kernel.
pub fn contour_projection(p: WhittakerParams, k_pole: C, radius: f64, points: usize, x: f64, y: f64) -> Result<C> {
    let mut sum = C::new(0.0, 0.0);
    for j in 0..points {
        let step = C::from_polar(radius, 2.0 * PI * j as f64 / points as f64);
        let k = k_pole + step;
        sum += k * 2.0 * resolvent_kernel(p, k, x, y)?.value * step;
    }
    Ok(sum / points as f64)
}

/// A spectrum picture in the rotated presentation `e^{-2 i phi} sigma(H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDescriptor {
    pub params: WhittakerParams,
    pub rotation_phase: f64,
    /// Angle of the continuous spectrum `e^{-2 i phi} [0, inf)`.
    pub ray_angle: f64,
    /// Trajectory samples for the given `t` values, then the point `t = inf`.
    pub trajectory: Vec<C>,
    pub discrete: Vec<EigenRecord>,
    /// `e^{-2 i phi} lambda` for each discrete record.
    pub presented: Vec<C>,
}

impl SpectrumDescriptor {
    /// Point of the presented trajectory
    /// `e^{2i(arg beta - phi)} (-|beta|^2 / (4 (t + i Im m)^2))`.
    pub fn trajectory_at(&self, t: f64) -> C {
        trajectory_point(self.params, self.rotation_phase, t)
    }

    /// How far `point` is from the presented trajectory, measured in the
    /// trajectory parameter: `(t + i Im m)^2` is recovered from the point
    /// and the smaller deviation of its square roots from `Im m` is returned.
    pub fn trajectory_residual(&self, point: C) -> f64 {
        let beta = self.params.beta;
        if point.norm() == 0.0 {
            return 0.0;
        }
        let turn = C::from_polar(1.0, 2.0 * (arg(beta) - self.rotation_phase));
        let square = -turn * beta.norm_sqr() / (point * 4.0);
        let root = sqrt(square);
        let im_m = self.params.m.im;
        (root.im - im_m).abs().min((-root.im - im_m).abs())
    }
}

fn trajectory_point(p: WhittakerParams, phi: f64, t: f64) -> C {
    if t.is_infinite() {
        return C::new(0.0, 0.0);
    }
    let turn = C::from_polar(1.0, 2.0 * (arg(p.beta) - phi));
    let w = C::new(t, p.m.im);
    -turn * p.beta.norm_sqr() / (w * w * 4.0)
}

/// `samples` values of `t = tan(s)` for `s` equally spaced in `]-pi/2, pi/2[`.
pub fn default_t_grid(samples: usize) -> Vec<f64> {
    (0..samples).map(|i| (PI * (i as f64 + 0.5) / samples as f64 - PI / 2.0).tan()).collect()
}

pub fn spectrum_descriptor(p: WhittakerParams, phi: f64, n_max: usize, t_grid: &[f64]) -> Result<SpectrumDescriptor> {
    let discrete = eigenvalues(p, n_max)?;
    let rotation = C::from_polar(1.0, -2.0 * phi);
    let presented = discrete.iter().map(|r| rotation * r.lambda).collect();
    let trajectory =
        t_grid.iter().chain(std::iter::once(&f64::INFINITY)).map(|&t| trajectory_point(p, phi, t)).collect();
    Ok(SpectrumDescriptor {
        params: p,
        rotation_phase: phi,
        ray_angle: 0.0 - 2.0 * phi,
        trajectory,
        discrete,
        presented,
    })
}

#[cfg(test)]
mod tests;
