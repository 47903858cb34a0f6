//! Composite Gauss-Legendre grids and sampled functions on them.

use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use num_complex::Complex64 as C;
use std::sync::OnceLock;

/// Points per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 32;

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = GaussLegendre::new(PANEL_ORDER.try_into().expect("nonzero order"));
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Quadrature nodes with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Grid {
    /// Gauss-Legendre panels between consecutive breakpoints.
    pub fn panels(breaks: &[f64]) -> Self {
        let rule = reference_rule();
        let mut nodes = Vec::with_capacity(breaks.len().saturating_sub(1) * PANEL_ORDER);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let (mid, half) = ((pair[0] + pair[1]) / 2.0, (pair[1] - pair[0]) / 2.0);
            for &(t, w) in rule {
                nodes.push(mid + half * t);
                weights.push(half * w);
            }
        }
        Self { nodes, weights }
    }

    /// `count` equal Gauss-Legendre panels on `[a, b]`.
    pub fn uniform_panels(a: f64, b: f64, count: usize) -> Self {
        let breaks: Vec<f64> = (0..=count).map(|i| a + (b - a) * i as f64 / count as f64).collect();
        Self::panels(&breaks)
    }

    /// Panels doubling in width from `first` up to width `max_width`, then
    /// uniform up to `b`. Suited to integrands with power behaviour at zero.
    pub fn graded(first: f64, max_width: f64, b: f64) -> Self {
        let mut breaks = vec![0.0, first];
        let mut width = first;
        while *breaks.last().unwrap() < b {
            width = (2.0 * width).min(max_width);
            let next = (breaks.last().unwrap() + width).min(b);
            breaks.push(next);
        }
        Self::panels(&breaks)
    }

    /// Equally spaced nodes `a, a+h, ..., b` with trapezoid weights.
    pub fn trapezoid(a: f64, b: f64, intervals: usize) -> Self {
        let h = (b - a) / intervals as f64;
        let nodes: Vec<f64> = (0..=intervals).map(|i| a + h * i as f64).collect();
        let mut weights = vec![h; intervals + 1];
        weights[0] = h / 2.0;
        weights[intervals] = h / 2.0;
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, values: impl IntoIterator<Item = C>) -> C {
        self.weights.iter().zip(values).map(|(w, v)| v * *w).sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> C) -> GridFunction {
        GridFunction {
            values: self.nodes.iter().map(|&x| f(x)).collect(),
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
        }
    }
}

/// A function sampled on a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<C>,
}

impl GridFunction {
    /// Checks equal lengths, positive strictly increasing nodes and positive weights.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, values: Vec<C>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.len() != values.len() {
            return Err(Error::Domain("grid arrays differ in length".into()));
        }
        if nodes.iter().any(|&x| !(x > 0.0 && x.is_finite())) || nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Domain("grid nodes must be positive and strictly increasing".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        Ok(Self { nodes, weights, values })
    }

    pub fn on(grid: &Grid, values: Vec<C>) -> Result<Self> {
        Self::new(grid.nodes.clone(), grid.weights.clone(), values)
    }

    pub fn grid(&self) -> Grid {
        Grid { nodes: self.nodes.clone(), weights: self.weights.clone() }
    }

    pub fn l2_norm(&self) -> f64 {
        self.weights.iter().zip(&self.values).map(|(w, v)| w * v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum w_i conj(f_i) g_i`.
    pub fn inner(&self, other: &GridFunction) -> C {
        self.weights.iter().zip(self.values.iter().zip(&other.values)).map(|(w, (a, b))| a.conj() * b * *w).sum()
    }

    /// `||self - other|| / ||other||` on the shared grid.
    pub fn relative_distance(&self, other: &GridFunction) -> f64 {
        let diff: f64 = self
            .weights
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| w * (a - b).norm_sqr())
            .sum();
        diff.sqrt() / other.l2_norm()
    }

    pub fn scale(&self, factor: C) -> GridFunction {
        GridFunction { values: self.values.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    pub fn map_values(&self, f: impl Fn(f64, C) -> C) -> GridFunction {
        let values = self.nodes.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        GridFunction { values, ..self.clone() }
    }
}

/// Smooth compactly supported bump `exp(-1/(1-t^2))` on `[a, b]`.
pub fn bump(a: f64, b: f64) -> impl Fn(f64) -> C {
    move |x| {
        let t = (2.0 * x - a - b) / (b - a);
        if t.abs() >= 1.0 {
            C::new(0.0, 0.0)
        } else {
            C::new((-1.0 / (1.0 - t * t)).exp(), 0.0)
        }
    }
}
