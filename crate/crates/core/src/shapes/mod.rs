//! Planar star-shaped sets and polygons.
//!
//! A [`StarShape`] is the region `{ t·(cos θ, sin θ) : 0 ≤ t < r(θ) }` with a
//! strictly positive radial profile `r = 1 + u`. Profiles are either a
//! trigonometric polynomial `u` or uniform samples of `r` read through their
//! trigonometric interpolant. All integrals use the periodic trapezoid rule
//! on the shape's own node grid.

mod file;
mod polygon;

pub use file::{Shape, ShapeFile};
pub use polygon::{make_regular_polygon, polygon_to_star, polygon_to_star_with, Polygon};

use crate::error::{Error, Result};
use crate::quadrature::{check_grid_size, node, DEFAULT_QUADRATURE_N};
use crate::spectral::FourierCoeffs;
use crate::Vec2;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Smallest admissible radius.
pub const MIN_RADIUS: f64 = 0.05;

/// How the radial profile was specified.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// Coefficients of `u = r − 1`.
    Fourier(FourierCoeffs),
    /// Values of `r` at the nodes `2πi/N`.
    Samples(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct StarShape {
    profile: Profile,
    r: Vec<f64>,
    dr: Vec<f64>,
    d2r: Vec<f64>,
    /// Coefficients of `r` used for off-grid evaluation.
    series: FourierCoeffs,
    r_sq: OnceLock<FourierCoeffs>,
}

impl PartialEq for StarShape {
    fn eq(&self, other: &Self) -> bool {
        self.profile == other.profile && self.r.len() == other.r.len()
    }
}

impl StarShape {
    /// Unit circle on the default grid.
    pub fn circle() -> Self {
        Self::from_fourier(FourierCoeffs::zeros(0)).expect("unit circle is valid")
    }

    /// Disk of radius `radius` about the origin.
    pub fn disk(radius: f64) -> Result<Self> {
        Self::from_fourier(FourierCoeffs::cosine(0, radius - 1.0))
    }

    /// `r = 1 + u` with `u` the given trigonometric polynomial, default grid.
    pub fn from_fourier(u: FourierCoeffs) -> Result<Self> {
        Self::from_fourier_with(u, DEFAULT_QUADRATURE_N)
    }

    pub fn from_fourier_with(u: FourierCoeffs, n: usize) -> Result<Self> {
        check_grid_size(n)?;
        if 2 * u.degree() >= n {
            return Err(Error::Domain(format!("degree {} needs more than {n} nodes", u.degree())));
        }
        let series = u.plus_constant(1.0);
        let r = series.synthesize(n);
        let d = series.derivative();
        let dr = d.synthesize(n);
        let d2r = d.derivative().synthesize(n);
        Self::assemble(Profile::Fourier(u), r, dr, d2r, series)
    }

    /// Profile given by `N` samples of `r`, `N` a power of two ≥ 256.
    pub fn from_samples(r: Vec<f64>) -> Result<Self> {
        let n = r.len();
        check_grid_size(n)?;
        if let Some(bad) = r.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite radius {bad}")));
        }
        let full = FourierCoeffs::interpolant(&r);
        // derivatives drop the Nyquist mode
        let smooth = full.with_degree(n / 2 - 1);
        let d = smooth.derivative();
        let dr = d.synthesize(n);
        let d2r = d.derivative().synthesize(n);
        let series = full.trimmed(1e-17);
        Self::assemble(Profile::Samples(r.clone()), r, dr, d2r, series)
    }

    fn assemble(profile: Profile, r: Vec<f64>, dr: Vec<f64>, d2r: Vec<f64>, series: FourierCoeffs) -> Result<Self> {
        let min_radius = r.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min_radius >= MIN_RADIUS) {
            return Err(Error::DegenerateShape { min_radius, threshold: MIN_RADIUS });
        }
        Ok(Self { profile, r, dr, d2r, series, r_sq: OnceLock::new() })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Number of quadrature nodes.
    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn node(&self, i: usize) -> f64 {
        node(i, self.n())
    }

    /// `r` at the nodes.
    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    /// `r′` at the nodes.
    pub fn radii_d1(&self) -> &[f64] {
        &self.dr
    }

    /// `r″` at the nodes.
    pub fn radii_d2(&self) -> &[f64] {
        &self.d2r
    }

    pub fn min_radius(&self) -> f64 {
        self.r.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.r.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `r(θ)` anywhere on the circle.
    pub fn radius_at(&self, theta: f64) -> f64 {
        self.series.eval(theta)
    }

    /// `(r, r′, r″)` anywhere on the circle.
    pub fn radius_derivs_at(&self, theta: f64) -> (f64, f64, f64) {
        self.series.eval_derivs(theta)
    }

    /// Boundary point at polar angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        Vec2::polar(theta) * self.radius_at(theta)
    }

    /// Coefficients of `r` (trimmed).
    pub fn radius_coeffs(&self) -> &FourierCoeffs {
        &self.series
    }

    /// Coefficients of `r²`, for exact arc integrals.
    pub fn radius_sq_coeffs(&self) -> &FourierCoeffs {
        self.r_sq.get_or_init(|| {
            let sq: Vec<f64> = self.r.iter().map(|v| v * v).collect();
            FourierCoeffs::interpolant(&sq).trimmed(1e-17)
        })
    }

    /// Coefficients of `u = r − 1` up to degree `N/2 − 1`.
    pub fn profile_coeffs(&self) -> FourierCoeffs {
        match &self.profile {
            Profile::Fourier(u) => u.clone(),
            Profile::Samples(_) => self.series.with_degree(self.n() / 2 - 1).plus_constant(-1.0),
        }
    }

    /// `‖u‖_∞ + ‖u′‖_∞` over the nodes.
    pub fn lipschitz_size(&self) -> f64 {
        let u = self.r.iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        let du = self.dr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        u + du
    }

    /// Dilation about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!("scale factor {factor} must be positive")));
        }
        match &self.profile {
            Profile::Fourier(u) => Self::from_fourier_with(u.plus_constant(1.0).scaled(factor).plus_constant(-1.0), self.n()),
            Profile::Samples(r) => Self::from_samples(r.iter().map(|v| v * factor).collect()),
        }
    }

    /// Area `½ ∫ r² dθ`.
    pub fn area(&self) -> f64 {
        0.5 * self.r.iter().map(|v| v * v).sum::<f64>() * std::f64::consts::TAU / self.n() as f64
    }

    /// Rescales to area `π`.
    pub fn normalize_volume(&self) -> Result<Self> {
        self.scaled((PI / self.area()).sqrt())
    }

    /// Rotation by `shift` grid steps, counterclockwise. Exact on samples.
    pub fn rotate_nodes(&self, shift: usize) -> Result<Self> {
        let n = self.n();
        let shift = shift % n;
        let rotated: Vec<f64> = (0..n).map(|i| self.r[(i + n - shift) % n]).collect();
        match &self.profile {
            Profile::Fourier(u) => {
                let angle = node(shift, n);
                let mut out = FourierCoeffs::zeros(u.degree());
                for k in 0..=u.degree() {
                    let (s, c) = (k as f64 * angle).sin_cos();
                    // u(θ − φ): a cos k(θ−φ) + b sin k(θ−φ)
                    out.set(k, u.a(k) * c - u.b(k) * s, u.a(k) * s + u.b(k) * c);
                }
                let mut shape = Self::from_fourier_with(out, n)?;
                // keep node values bit-identical to the permutation
                let permute = |v: &[f64]| (0..n).map(|i| v[(i + n - shift) % n]).collect::<Vec<f64>>();
                shape.dr = permute(&self.dr);
                shape.d2r = permute(&self.d2r);
                shape.r = rotated;
                Ok(shape)
            }
            Profile::Samples(_) => Self::from_samples(rotated),
        }
    }

    /// The set shifted by `x`: the new profile solves `ρ(ω)ω − x ∈ ∂E` on
    /// every ray, found by bisection.
    pub fn translate(&self, x: Vec2) -> Result<Self> {
        let shift = x.norm();
        let min_r = self.min_radius();
        if shift + MIN_RADIUS >= min_r {
            return Err(Error::NotStarShaped(format!(
                "shift |x| = {shift:.4} leaves less than {MIN_RADIUS} clearance inside min r = {min_r:.4}"
            )));
        }
        if shift == 0.0 {
            return Ok(self.clone());
        }
        let lo0 = min_r - shift;
        let hi0 = self.max_radius() * (1.0 + 1e-3) + shift;
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let w = Vec2::polar(self.node(i));
            let outside = |t: f64| {
                let p = w * t - x;
                p.norm() - self.radius_at(p.angle())
            };
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..60 {
                if hi - lo <= 1e-12 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if outside(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Self::from_samples(out)
    }
}

/// Ellipse with semi-axes `1 + eps` and `1/(1 + eps)` (area `π`), on the
/// default grid.
pub fn make_ellipse(eps: f64) -> Result<StarShape> {
    make_ellipse_with(eps, DEFAULT_QUADRATURE_N)
}

pub fn make_ellipse_with(eps: f64, n: usize) -> Result<StarShape> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Domain(format!("ellipse parameter {eps} outside (0, 1]")));
    }
    check_grid_size(n)?;
    let a = 1.0 + eps;
    let b = 1.0 / a;
    let r = (0..n)
        .map(|i| {
            let (s, c) = node(i, n).sin_cos();
            a * b / (b * b * c * c + a * a * s * s).sqrt()
        })
        .collect();
    StarShape::from_samples(r)
}
