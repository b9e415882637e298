//! Fourier analysis of boundary profiles and the quadratic-form estimates
//! for nearly spherical sets.
//!
//! Norms are taken with respect to the normalized measure `dσ = dθ / 2π`,
//! so for `u = a₀ + Σ (a_k cos kθ + b_k sin kθ)`
//!
//! ```text
//! ‖u‖²  = a₀² + ½ Σ (a_k² + b_k²)
//! ‖∇u‖² = ½ Σ λ_k (a_k² + b_k²),   λ_k = k (k + n − 2)
//! ```

use crate::error::{Error, Result};
use crate::metrics;
use crate::shapes::StarShape;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex<f64>], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let plan = if inverse { p.plan_fft_inverse(buf.len()) } else { p.plan_fft_forward(buf.len()) };
        plan.process(buf);
    });
}

/// Real trigonometric coefficients `a₀..a_K`, `b₁..b_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoeffs", into = "RawCoeffs")]
pub struct FourierCoeffs {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawCoeffs {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawCoeffs> for FourierCoeffs {
    type Error = Error;
    fn try_from(r: RawCoeffs) -> Result<Self> {
        FourierCoeffs::new(r.a, r.b)
    }
}

impl From<FourierCoeffs> for RawCoeffs {
    fn from(c: FourierCoeffs) -> Self {
        RawCoeffs { a: c.a, b: c.b }
    }
}

impl FourierCoeffs {
    /// `a` holds `a₀..a_K`, `b` holds `b₁..b_K`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("at least the constant coefficient a₀ is required".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::Domain(format!(
                "{} cosine coefficients need {} sine coefficients, got {}",
                a.len(),
                a.len() - 1,
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn zeros(degree: usize) -> Self {
        Self { a: vec![0.0; degree + 1], b: vec![0.0; degree] }
    }

    /// `amp · cos kθ`.
    pub fn cosine(k: usize, amp: f64) -> Self {
        let mut c = Self::zeros(k);
        c.a[k] += amp;
        c
    }

    /// `amp · sin kθ`.
    pub fn sine(k: usize, amp: f64) -> Self {
        assert!(k >= 1);
        let mut c = Self::zeros(k);
        c.b[k - 1] = amp;
        c
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self, k: usize) -> f64 {
        self.a.get(k).copied().unwrap_or(0.0)
    }

    pub fn b(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.b.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    pub fn set(&mut self, k: usize, a: f64, b: f64) {
        if k > self.degree() {
            self.a.resize(k + 1, 0.0);
            self.b.resize(k, 0.0);
        }
        self.a[k] = a;
        if k > 0 {
            self.b[k - 1] = b;
        }
    }

    /// Copy padded or truncated to `degree`.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.resize(degree + 1, 0.0);
        b.resize(degree, 0.0);
        Self { a, b }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { a: self.a.iter().map(|v| v * s).collect(), b: self.b.iter().map(|v| v * s).collect() }
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.a[0] += c;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let deg = self.degree().max(other.degree());
        let mut out = Self::zeros(deg);
        for k in 0..=deg {
            out.set(k, self.a(k) + other.a(k), self.b(k) + other.b(k));
        }
        out
    }

    /// Drops trailing modes whose magnitude is below `rel · max |coefficient|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let scale = self.a.iter().chain(&self.b).fold(0.0f64, |m, v| m.max(v.abs()));
        let mut deg = self.degree();
        while deg > 0 && self.a[deg].abs() + self.b[deg - 1].abs() <= rel * scale {
            deg -= 1;
        }
        self.with_degree(deg)
    }

    /// Value at `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.a[0];
        for_each_mode(self.degree(), theta, |k, c, s| {
            acc += self.a[k] * c + self.b[k - 1] * s;
        });
        acc
    }

    /// Value and first two derivatives at `theta`.
    pub fn eval_derivs(&self, theta: f64) -> (f64, f64, f64) {
        let (mut f, mut d1, mut d2) = (self.a[0], 0.0, 0.0);
        for_each_mode(self.degree(), theta, |k, c, s| {
            let (ak, bk, kf) = (self.a[k], self.b[k - 1], k as f64);
            f += ak * c + bk * s;
            d1 += kf * (bk * c - ak * s);
            d2 -= kf * kf * (ak * c + bk * s);
        });
        (f, d1, d2)
    }

    /// `∫₀^θ f` (including the secular term `a₀ θ`).
    pub fn integral_to(&self, theta: f64) -> f64 {
        let mut acc = self.a[0] * theta;
        for_each_mode(self.degree(), theta, |k, c, s| {
            let kf = k as f64;
            acc += (self.a[k] * s + self.b[k - 1] * (1.0 - c)) / kf;
        });
        acc
    }

    /// `f'` as coefficients.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zeros(self.degree());
        for k in 1..=self.degree() {
            let kf = k as f64;
            out.set(k, kf * self.b(k), -kf * self.a(k));
        }
        out
    }

    /// Values at the `n` nodes `2πj/n`; requires `degree < n/2`.
    pub fn synthesize(&self, n: usize) -> Vec<f64> {
        assert!(2 * self.degree() < n, "degree {} does not fit {} nodes", self.degree(), n);
        let mut z = vec![Complex::new(0.0, 0.0); n];
        z[0] = Complex::new(self.a[0], 0.0);
        for k in 1..=self.degree() {
            let c = Complex::new(0.5 * self.a[k], -0.5 * self.b[k - 1]);
            z[k] = c;
            z[n - k] = c.conj();
        }
        fft_in_place(&mut z, true);
        z.into_iter().map(|c| c.re).collect()
    }

    /// Full trigonometric interpolant of uniform samples, degree `n/2`. The
    /// Nyquist term is carried as a cosine.
    pub(crate) fn interpolant(samples: &[f64]) -> Self {
        let n = samples.len();
        let mut z: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft_in_place(&mut z, false);
        let nf = n as f64;
        let deg = n / 2;
        let mut out = Self::zeros(deg);
        out.a[0] = z[0].re / nf;
        for (k, zk) in z.iter().enumerate().take(deg).skip(1) {
            out.a[k] = 2.0 * zk.re / nf;
            out.b[k - 1] = -2.0 * zk.im / nf;
        }
        out.a[deg] = z[deg].re / nf;
        out
    }

    /// `‖f‖²` in `L²(σ)`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.a[0] * self.a[0] + 0.5 * (1..=self.degree()).map(|k| self.a[k].powi(2) + self.b[k - 1].powi(2)).sum::<f64>()
    }
}

/// Calls `f(k, cos kθ, sin kθ)` for `k = 1..=degree`, reseeding the rotation
/// recurrence periodically to bound drift.
fn for_each_mode<F: FnMut(usize, f64, f64)>(degree: usize, theta: f64, mut f: F) {
    if degree == 0 {
        return;
    }
    let (s1, c1) = theta.sin_cos();
    let (mut c, mut s) = (c1, s1);
    for k in 1..=degree {
        if k > 1 {
            if k % 32 == 0 {
                let (sk, ck) = (k as f64 * theta).sin_cos();
                c = ck;
                s = sk;
            } else {
                let cn = c * c1 - s * s1;
                s = s * c1 + c * s1;
                c = cn;
            }
        }
        f(k, c, s);
    }
}

/// Fourier coefficients up to degree `degree` of `N` uniform samples.
pub fn analyze(samples: &[f64], degree: usize) -> Result<FourierCoeffs> {
    let n = samples.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("sample count {n} is not a power of two")));
    }
    if 4 * degree > n {
        return Err(Error::Alias { degree, limit: n / 4, samples: n });
    }
    Ok(FourierCoeffs::interpolant(samples).with_degree(degree))
}

/// Eigenvalue `k (k + n − 2)` of the Laplace–Beltrami operator on `S^{n−1}`.
pub fn laplace_eigenvalue(k: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} must be at least 2")));
    }
    Ok((k * (k + n - 2)) as f64)
}

/// `(‖u‖, ‖∇u‖)` in `L²(σ)`. Dimensions other than two are interpreted in
/// sequence space: the same coefficient weights with `λ_k(n)`.
pub fn sobolev_norms(u: &FourierCoeffs, n: usize) -> Result<(f64, f64)> {
    let (l2, grad) = sobolev_norms_sq(u, n)?;
    Ok((l2.sqrt(), grad.sqrt()))
}

fn sobolev_norms_sq(u: &FourierCoeffs, n: usize) -> Result<(f64, f64)> {
    laplace_eigenvalue(0, n)?;
    let mut grad = 0.0;
    for k in 1..=u.degree() {
        grad += 0.5 * laplace_eigenvalue(k, n)? * (u.a(k).powi(2) + u.b(k).powi(2));
    }
    Ok((u.l2_norm_sq(), grad))
}

/// `½ (‖∇u‖² − (n − 1) ‖u‖²)`, the second variation of the deficit at the ball.
pub fn quadratic_form(u: &FourierCoeffs, n: usize) -> Result<f64> {
    let (l2, grad) = sobolev_norms_sq(u, n)?;
    Ok(0.5 * (grad - (n as f64 - 1.0) * l2))
}

/// Outcome of [`fuglede_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FugledeCheck {
    pub deficit: f64,
    pub bound: f64,
    pub pass: bool,
}

impl FugledeCheck {
    pub fn margin(&self) -> f64 {
        self.deficit - self.bound
    }
}

/// Largest admissible `‖u‖_∞ + ‖u′‖_∞` for the small-deformation checks.
pub const SMALLNESS: f64 = 0.05;

/// Largest admissible barycenter norm for [`fuglede_check`].
pub const CENTERING_TOL: f64 = 1e-6;

/// Compares the deficit of a volume- and barycenter-normalized nearly
/// circular set with `((1 − η)/2) ‖u‖² + ¼ ‖∇u‖²`.
pub fn fuglede_check(shape: &StarShape, eta: f64) -> Result<FugledeCheck> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!("eta = {eta} must lie in (0, 1)")));
    }
    require_small(shape)?;
    let bar = metrics::barycenter(shape);
    if bar.norm() > CENTERING_TOL {
        return Err(Error::Precondition(format!(
            "barycenter ({:e}, {:e}) is not centered within {CENTERING_TOL:e}",
            bar.x, bar.y
        )));
    }
    let deficit = metrics::deficit(shape).map_err(|e| Error::Precondition(e.to_string()))?;
    let u = shape.profile_coeffs();
    let (l2, grad) = sobolev_norms_sq(&u, 2)?;
    let bound = 0.5 * (1.0 - eta) * l2 + 0.25 * grad;
    Ok(FugledeCheck { deficit, bound, pass: deficit >= bound - 1e-12 })
}

/// Remainders of the second-order expansions of perimeter and volume:
/// `|P/2π − ∫(1 + |∇u|²/2 + u) dσ|` and `|∫u dσ + ½‖u‖²|`.
pub fn taylor_residuals(shape: &StarShape) -> Result<(f64, f64)> {
    metrics::check_normalized(shape).map_err(|e| Error::Precondition(e.to_string()))?;
    require_small(shape)?;
    let u = shape.profile_coeffs();
    let (l2, grad) = sobolev_norms_sq(&u, 2)?;
    let mean_u = u.a(0);
    let per = metrics::perimeter(shape) / std::f64::consts::TAU;
    let r1 = (per - (1.0 + 0.5 * grad + mean_u)).abs();
    let r2 = (mean_u + 0.5 * l2).abs();
    Ok((r1, r2))
}

fn require_small(shape: &StarShape) -> Result<()> {
    let size = shape.lipschitz_size();
    if size > SMALLNESS {
        return Err(Error::Precondition(format!(
            "‖u‖∞ + ‖u′‖∞ = {size:.4} exceeds {SMALLNESS}"
        )));
    }
    Ok(())
}

/// Translates until the barycenter vanishes, stepping by `−⅔·bar` (the
/// barycenter functional moves by `3/2` of a small translation).
pub fn recenter(shape: &StarShape) -> Result<StarShape> {
    let mut s = shape.clone();
    for _ in 0..20 {
        let bar = metrics::barycenter(&s);
        if bar.norm() <= CENTERING_TOL * 1e-2 {
            break;
        }
        s = s.translate(bar * (-2.0 / 3.0))?;
    }
    let bar = metrics::barycenter(&s);
    if bar.norm() > CENTERING_TOL {
        return Err(Error::Precondition(format!("recentering stalled at |bar| = {:e}", bar.norm())));
    }
    Ok(s)
}
