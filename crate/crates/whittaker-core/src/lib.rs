//! Special functions, spectral kernels and scattering quantities of the
//! Whittaker operator `-d^2/dx^2 + (m^2 - 1/4)/x^2 - beta/x` on the half-line,
//! for complex coupling `beta` and complex index `m`.

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod error;
pub mod hyper;
pub mod ode;
pub mod par;
pub mod quad;
pub mod scattering;
pub mod special;
pub mod spectral;
pub mod verify;
pub mod whittaker;

pub use error::{Error, Result};
pub use num_complex::Complex64;
