//! Numerics for the sharp quantitative isoperimetric inequality in the plane.
//!
//! The crate evaluates the isoperimetric deficit, the Fraenkel asymmetry and
//! their quotient on star-shaped sets and polygons, runs a penalized shape
//! optimizer whose minimizers approach the ball with the optimal quotient,
//! and reproduces the asymptotic constant `π / (8 (4 − π))` by two
//! independent routes.
//!
//! Module map:
//! - [`shapes`]: star-shaped profiles, polygons, shape files.
//! - [`metrics`]: perimeter, volume, deficit, asymmetry, quotient, curvature, excess.
//! - [`spectral`]: Fourier analysis of the profile and the quadratic-form estimates.
//! - [`selection`]: the penalized functional and recovery sequences.
//! - [`experiments`]: sweeps, constant estimation, property suites.
//! - [`cli`]: the `isoq` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod metrics;
pub mod optim;
pub mod quadrature;
pub mod selection;
pub mod shapes;
pub mod spectral;
pub mod table;

pub use error::{Error, Result};
pub use geometry::Vec2;

/// Hall's optimal asymptotic constant `π / (8 (4 − π))`.
pub const HALL_CONSTANT: f64 = std::f64::consts::PI / (8.0 * (4.0 - std::f64::consts::PI));

/// Quotient of the second-mode (ellipse) family in the limit, `3π² / 64`.
pub const ELLIPSE_CONSTANT: f64 = 3.0 * std::f64::consts::PI * std::f64::consts::PI / 64.0;
