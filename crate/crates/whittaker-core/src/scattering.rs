//! Hankel-Whittaker transforms, the intrinsic scattering multiplier and
//! phase shift, and quadrature realisations of the transforms as operators.
//!
//! Kernels act from functions of the momentum `k` to functions of the
//! position `x`: `(F f)(x) = int F(x, k) f(k) dk`. The transpose `F^#`
//! integrates over `x` against the same kernel without conjugation.

use crate::error::{Error, Result};
use crate::par::{map_range, try_map_range, Execution};
use crate::quad::{Grid, GridFunction};
use crate::special::ln_gamma;
use crate::spectral::exceptional_energies;
use crate::whittaker::{eval_j, Sign, WhittakerParams};
use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

/// Distance in `k` kept from exceptional energies.
pub const EXCEPTIONAL_GUARD: f64 = 1e-8;
/// `|ln |g||` above which the multiplier is reported as unbounded.
pub const UNBOUNDED_LOG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// `F^+`, the outgoing Hankel-Whittaker transform.
    Outgoing,
    /// `F^-`, the incoming one.
    Incoming,
    /// `F = F^± e^{±i delta}`, real for real parameters.
    RealSymmetric,
    /// Sine transform `sqrt(2/pi) sin(xk)`.
    Dirichlet,
    /// Cosine transform `sqrt(2/pi) cos(xk)`.
    Neumann,
}

impl TransformKind {
    fn is_whittaker(self) -> bool {
        matches!(self, Self::Outgoing | Self::Incoming | Self::RealSymmetric)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformKernelSpec {
    pub params: WhittakerParams,
    pub kind: TransformKind,
}

fn is_real(p: WhittakerParams) -> bool {
    p.beta.im == 0.0 && p.m.im == 0.0
}

impl TransformKernelSpec {
    pub fn new(params: WhittakerParams, kind: TransformKind) -> Result<Self> {
        if kind.is_whittaker() {
            let params = WhittakerParams::operator(params.beta, params.m)?;
            if params.is_singular_point() {
                return Err(Error::SingularFamilyPoint);
            }
        }
        if kind == TransformKind::RealSymmetric && !is_real(params) {
            return Err(Error::RealOnly);
        }
        Ok(Self { params, kind })
    }

    pub fn outgoing(params: WhittakerParams) -> Result<Self> {
        Self::new(params, TransformKind::Outgoing)
    }

    pub fn incoming(params: WhittakerParams) -> Result<Self> {
        Self::new(params, TransformKind::Incoming)
    }

    pub fn sign(sign: Sign, params: WhittakerParams) -> Result<Self> {
        match sign {
            Sign::Plus => Self::outgoing(params),
            Sign::Minus => Self::incoming(params),
        }
    }
}

fn check_momentum(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("momentum must be positive, got k = {k}")));
    }
    Ok(())
}

/// Rejects `k` within [`EXCEPTIONAL_GUARD`] of a pole of `Gamma(1/2+m±ib)`.
pub fn check_exceptional(p: WhittakerParams, k: f64) -> Result<()> {
    check_momentum(k)?;
    let reach = p.beta.norm() / (2.0 * (k - EXCEPTIONAL_GUARD).max(EXCEPTIONAL_GUARD));
    let n_max = (reach + p.m.norm() + 1.0).ceil().min(1e6) as usize;
    for side in [Sign::Plus, Sign::Minus] {
        if let Some(&hit) = exceptional_energies(p, side, n_max).iter().find(|&&e| (e - k).abs() < EXCEPTIONAL_GUARD) {
            return Err(Error::ExceptionalEnergy(hit));
        }
    }
    Ok(())
}

/// `k`-dependent prefactor multiplying the base kernel: `J_{b,m}(2xk)` for
/// the Whittaker kinds, `sin(xk)` or `cos(xk)` otherwise.
fn kernel_factor(spec: &TransformKernelSpec, k: f64) -> Result<C> {
    let p = spec.params;
    let norm = (2.0 * PI).sqrt().recip();
    match spec.kind {
        TransformKind::Dirichlet | TransformKind::Neumann => {
            check_momentum(k)?;
            Ok(C::new((2.0 / PI).sqrt(), 0.0))
        }
        TransformKind::Outgoing | TransformKind::Incoming => {
            check_exceptional(p, k)?;
            let s = if spec.kind == TransformKind::Outgoing { 1.0 } else { -1.0 };
            let b = p.beta / (2.0 * k);
            let log = ln_gamma(p.m + 0.5 + C::i() * s * b)? + b * (PI / 2.0) + C::i() * s * (PI / 2.0) * p.m;
            Ok(log.exp() * norm)
        }
        TransformKind::RealSymmetric => {
            check_momentum(k)?;
            let b = p.beta.re / (2.0 * k);
            let log = ln_gamma(C::new(p.m.re + 0.5, b))?.re + b * PI / 2.0;
            Ok(C::new(log.exp() * norm, 0.0))
        }
    }
}

fn base_kernel(spec: &TransformKernelSpec, x: f64, k: f64) -> Result<C> {
    match spec.kind {
        TransformKind::Dirichlet => Ok(C::new((x * k).sin(), 0.0)),
        TransformKind::Neumann => Ok(C::new((x * k).cos(), 0.0)),
        _ => {
            let q = WhittakerParams::new(spec.params.beta / (2.0 * k), spec.params.m);
            eval_j(q, C::new(2.0 * x * k, 0.0))
        }
    }
}

/// Kernel value `F(x, k)` of the chosen transform.
pub fn hw_kernel(spec: &TransformKernelSpec, x: f64, k: f64) -> Result<C> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("position must be positive, got x = {x}")));
    }
    Ok(kernel_factor(spec, k)? * base_kernel(spec, x, k)?)
}

/// Leading two-wave form of `F^±(x, k)` for large `x`, with the Maslov
/// phases `e^{∓i pi/4}`.
pub fn hw_kernel_two_wave(p: WhittakerParams, sign: Sign, x: f64, k: f64) -> Result<C> {
    let g = g_scattering(p, k)?.g;
    let b = p.beta / (2.0 * k);
    let wave = |t: f64| (C::i() * t * (k * x + b * (2.0 * k * x).ln()) - C::i() * t * FRAC_PI_4).exp();
    let (direct, reflected) = match sign {
        Sign::Plus => (wave(1.0), wave(-1.0) / g),
        Sign::Minus => (wave(-1.0), wave(1.0) * g),
    };
    Ok((direct + reflected) / (2.0 * PI).sqrt())
}

/// Intrinsic scattering multiplier at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringValue {
    pub k: f64,
    /// `g = e^{-i pi m} Gamma(1/2+m-ib)/Gamma(1/2+m+ib)`, `b = beta/(2k)`.
    pub g: C,
    /// Phase shift with `g = e^{2i delta}`.
    pub delta: C,
    /// `ln |g|`, finite even where `g` itself over- or underflows.
    pub log_abs_g: f64,
}

impl ScatteringValue {
    /// `|ln |g|| > 30`: the multiplier or its inverse is numerically unbounded.
    pub fn unbounded(&self) -> bool {
        self.log_abs_g.abs() > UNBOUNDED_LOG
    }
}

/// `g` and the phase shift, both assembled from log-Gamma values.
pub fn g_scattering(p: WhittakerParams, k: f64) -> Result<ScatteringValue> {
    check_momentum(k)?;
    let a = p.m + 0.5;
    let ib = C::i() * p.beta / (2.0 * k);
    let ratio = ln_gamma(a - ib)? - ln_gamma(a + ib)?;
    let log_g = -C::i() * PI * p.m + ratio;
    let delta = log_g / (2.0 * C::i());
    Ok(ScatteringValue { k, g: log_g.exp(), delta, log_abs_g: log_g.re })
}

/// `max_x |F^+(x,k) g(k) - F^-(x,k)| / |F^-(x,k)|` over the given positions.
pub fn g_relation_check(p: WhittakerParams, k: f64, xs: &[f64]) -> Result<f64> {
    let g = g_scattering(p, k)?.g;
    let plus = TransformKernelSpec::outgoing(p)?;
    let minus = TransformKernelSpec::incoming(p)?;
    let mut worst = 0.0f64;
    for &x in xs {
        let (fp, fm) = (hw_kernel(&plus, x, k)?, hw_kernel(&minus, x, k)?);
        worst = worst.max((fp * g - fm).norm() / fm.norm());
    }
    Ok(worst)
}

/// Expected behaviour of the multiplication operator by `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierClass {
    Unitary,
    BoundedInvertible,
    /// `g` or `1/g` is unbounded.
    Unbounded,
}

pub fn predicted_class(p: WhittakerParams) -> MultiplierClass {
    if is_real(p) {
        MultiplierClass::Unitary
    } else if p.beta.im == 0.0 && (p.m.re + 0.5).abs() > 1e-14 {
        MultiplierClass::BoundedInvertible
    } else {
        MultiplierClass::Unbounded
    }
}

/// Sampled extremes of `ln |g|` on a logarithmic momentum grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport {
    pub k_min: f64,
    pub k_max: f64,
    /// `sup ln |g|` and `sup ln |1/g|` over the samples.
    pub sup_log_g: f64,
    pub sup_log_inverse: f64,
    /// The same extremes on `[k_min/2, 2 k_max]`.
    pub doubled_sup_log_g: f64,
    pub doubled_sup_log_inverse: f64,
    /// Samples skipped at Gamma poles.
    pub skipped: usize,
}

impl BoundednessReport {
    pub fn flagged(&self) -> bool {
        self.sup_log_g.max(self.sup_log_inverse) > UNBOUNDED_LOG
            || self.doubled_sup_log_g.max(self.doubled_sup_log_inverse) > UNBOUNDED_LOG
    }

    /// Both extremes move by less than `tol` when the range is doubled.
    pub fn stable(&self, tol: f64) -> bool {
        (self.doubled_sup_log_g - self.sup_log_g).abs() < tol
            && (self.doubled_sup_log_inverse - self.sup_log_inverse).abs() < tol
    }

    pub fn observed_class(&self, tol: f64) -> Option<MultiplierClass> {
        if self.flagged() || !self.stable(tol) {
            Some(MultiplierClass::Unbounded)
        } else if self.sup_log_g.abs() < 1e-12 && self.sup_log_inverse.abs() < 1e-12 {
            Some(MultiplierClass::Unitary)
        } else if self.skipped == 0 {
            Some(MultiplierClass::BoundedInvertible)
        } else {
            None
        }
    }
}

pub fn boundedness_report(p: WhittakerParams, k_min: f64, k_max: f64, samples: usize) -> Result<BoundednessReport> {
    check_momentum(k_min)?;
    check_momentum(k_max)?;
    let sweep = |lo: f64, hi: f64| {
        let (mut up, mut down, mut skipped) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0usize);
        for i in 0..samples {
            let t = i as f64 / (samples.max(2) - 1) as f64;
            let k = lo * (hi / lo).powf(t);
            match g_scattering(p, k) {
                Ok(v) => {
                    up = up.max(v.log_abs_g);
                    down = down.max(-v.log_abs_g);
                }
                Err(_) => skipped += 1,
            }
        }
        (up, down, skipped)
    };
    let (sup_log_g, sup_log_inverse, skipped) = sweep(k_min, k_max);
    let (doubled_sup_log_g, doubled_sup_log_inverse, extra) = sweep(k_min / 2.0, k_max * 2.0);
    Ok(BoundednessReport {
        k_min,
        k_max,
        sup_log_g,
        sup_log_inverse,
        doubled_sup_log_g,
        doubled_sup_log_inverse,
        skipped: skipped + extra,
    })
}

/// A transform discretised on a position grid and a momentum grid. The base
/// kernel matrix is computed once and shared between the kinds that use it.
#[derive(Debug, Clone)]
pub struct TransformOperator {
    spec: TransformKernelSpec,
    x: Grid,
    k: Grid,
    /// Row-major `x.len() x k.len()` base kernel values.
    matrix: Arc<Vec<C>>,
    factors: Vec<C>,
    exec: Execution,
}

impl TransformOperator {
    pub fn new(spec: TransformKernelSpec, x: &Grid, k: &Grid) -> Result<Self> {
        Self::with_execution(spec, x, k, Execution::default())
    }

    pub fn with_execution(spec: TransformKernelSpec, x: &Grid, k: &Grid, exec: Execution) -> Result<Self> {
        if x.nodes.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(Error::Domain("transform positions must be positive".into()));
        }
        let factors = k.nodes.iter().map(|&kk| kernel_factor(&spec, kk)).collect::<Result<Vec<_>>>()?;
        let nk = k.len();
        let rows = try_map_range(exec, x.len(), |i| {
            k.nodes.iter().map(|&kk| base_kernel(&spec, x.nodes[i], kk)).collect::<Result<Vec<C>>>()
        })?;
        let mut matrix = Vec::with_capacity(x.len() * nk);
        rows.into_iter().for_each(|r| matrix.extend(r));
        Ok(Self { spec, x: x.clone(), k: k.clone(), matrix: Arc::new(matrix), factors, exec })
    }

    /// The same grids and base matrix with another kind of the same family.
    pub fn with_kind(&self, kind: TransformKind) -> Result<Self> {
        if kind.is_whittaker() != self.spec.kind.is_whittaker() || (!kind.is_whittaker() && kind != self.spec.kind) {
            return Err(Error::Domain(format!("{kind:?} does not share the kernel of {:?}", self.spec.kind)));
        }
        let spec = TransformKernelSpec::new(self.spec.params, kind)?;
        let factors = self.k.nodes.iter().map(|&kk| kernel_factor(&spec, kk)).collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, factors, ..self.clone() })
    }

    /// The operator multiplied by a constant.
    pub fn scaled(&self, c: C) -> Self {
        Self { factors: self.factors.iter().map(|f| f * c).collect(), ..self.clone() }
    }

    pub fn spec(&self) -> &TransformKernelSpec {
        &self.spec
    }

    pub fn x_grid(&self) -> &Grid {
        &self.x
    }

    pub fn k_grid(&self) -> &Grid {
        &self.k
    }

    pub fn kernel(&self, i: usize, j: usize) -> C {
        self.factors[j] * self.matrix[i * self.k.len() + j]
    }

    fn check_on(f: &GridFunction, grid: &Grid, what: &str) -> Result<()> {
        if f.nodes != grid.nodes {
            return Err(Error::Domain(format!("function is not sampled on the {what} grid")));
        }
        Ok(())
    }

    /// `(F f)(x_i) = sum_j F(x_i, k_j) w_j f(k_j)`.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        Self::check_on(f, &self.k, "momentum")?;
        let nk = self.k.len();
        let weighted: Vec<C> = (0..nk).map(|j| self.factors[j] * f.weights[j] * f.values[j]).collect();
        let values = map_range(self.exec, self.x.len(), |i| {
            let row = &self.matrix[i * nk..(i + 1) * nk];
            row.iter().zip(&weighted).map(|(a, b)| a * b).sum()
        });
        GridFunction::on(&self.x, values)
    }

    fn contract_rows(&self, g: &GridFunction, conjugate: bool) -> Result<GridFunction> {
        Self::check_on(g, &self.x, "position")?;
        let nk = self.k.len();
        let chunk = 64;
        let blocks = self.x.len().div_ceil(chunk);
        let partial = map_range(self.exec, blocks, |b| {
            let mut acc = vec![C::new(0.0, 0.0); nk];
            for i in b * chunk..((b + 1) * chunk).min(self.x.len()) {
                let wg = g.values[i] * g.weights[i];
                let row = &self.matrix[i * nk..(i + 1) * nk];
                for (a, m) in acc.iter_mut().zip(row) {
                    *a += if conjugate { m.conj() } else { *m } * wg;
                }
            }
            acc
        });
        let mut sums = vec![C::new(0.0, 0.0); nk];
        for block in partial {
            sums.iter_mut().zip(block).for_each(|(s, v)| *s += v);
        }
        let values =
            sums.into_iter().zip(&self.factors).map(|(s, f)| s * if conjugate { f.conj() } else { *f }).collect();
        GridFunction::on(&self.k, values)
    }

    /// `(F^# g)(k_j) = sum_i F(x_i, k_j) w_i g(x_i)`.
    pub fn apply_transpose(&self, g: &GridFunction) -> Result<GridFunction> {
        self.contract_rows(g, false)
    }

    /// `(F^* g)(k_j) = sum_i conj F(x_i, k_j) w_i g(x_i)`.
    pub fn apply_adjoint(&self, g: &GridFunction) -> Result<GridFunction> {
        self.contract_rows(g, true)
    }

    /// Power iteration for the norm of the discretised map `L^2(k) -> L^2(x)`.
    pub fn norm_estimate(&self, iterations: usize) -> Result<f64> {
        let mut v = GridFunction::on(&self.k, vec![C::new(1.0, 0.0); self.k.len()])?;
        let mut estimate = 0.0;
        for _ in 0..iterations.max(1) {
            let n = v.l2_norm();
            if n == 0.0 {
                return Ok(0.0);
            }
            v = v.scale(C::new(1.0 / n, 0.0));
            let image = self.apply(&v)?;
            estimate = image.l2_norm();
            v = self.apply_adjoint(&image)?;
        }
        Ok(estimate)
    }
}

/// `F f` for a momentum-space function `f`, sampled at `out`.
pub fn apply_transform(spec: &TransformKernelSpec, f: &GridFunction, out: &Grid) -> Result<GridFunction> {
    TransformOperator::new(*spec, out, &f.grid())?.apply(f)
}

/// `F^{∓#} F^± f` on the momentum grid of `op`, an outgoing or incoming
/// operator.
pub fn isometry_image(op: &TransformOperator, f: &GridFunction) -> Result<GridFunction> {
    let other = match op.spec().kind {
        TransformKind::Outgoing => TransformKind::Incoming,
        TransformKind::Incoming => TransformKind::Outgoing,
        kind => kind,
    };
    op.with_kind(other)?.apply_transpose(&op.apply(f)?)
}

/// Møller operators `W^± = F^± F_D^{∓#}` applied to a position-space `f`.
/// The momentum grid must carry the band of `f`; only real parameters are
/// admitted.
pub fn moller_apply(p: WhittakerParams, sign: Sign, f: &GridFunction, k: &Grid) -> Result<GridFunction> {
    if !is_real(p) {
        return Err(Error::RealOnly);
    }
    let x = f.grid();
    let sine = TransformOperator::new(TransformKernelSpec::new(p, TransformKind::Dirichlet)?, &x, k)?;
    let whittaker = TransformOperator::new(TransformKernelSpec::sign(sign, p)?, &x, k)?;
    moller_apply_with(&sine, &whittaker, sign, f)
}

/// [`moller_apply`] with prebuilt sine and Hankel-Whittaker operators on
/// shared grids.
pub fn moller_apply_with(
    sine: &TransformOperator,
    whittaker: &TransformOperator,
    sign: Sign,
    f: &GridFunction,
) -> Result<GridFunction> {
    if !is_real(whittaker.spec().params) {
        return Err(Error::RealOnly);
    }
    let maslov = C::from_polar(1.0, -sign.factor() * FRAC_PI_4);
    let momentum = sine.scaled(maslov).apply_transpose(f)?;
    whittaker.apply(&momentum)
}

/// `i F^{-#} F^- f`, which equals `F_D S F_D f` for the scattering operator
/// `S = W^{-#} W^-` in the real case.
pub fn scattering_diagonal(incoming: &TransformOperator, f: &GridFunction) -> Result<GridFunction> {
    if incoming.spec().kind != TransformKind::Incoming {
        return Err(Error::Domain("scattering diagonal needs the incoming transform".into()));
    }
    Ok(incoming.apply_transpose(&incoming.apply(f)?)?.scale(C::i()))
}
