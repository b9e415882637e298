//! Scalar quantities of a planar set: perimeter, area, barycenter,
//! isoperimetric deficit, Fraenkel asymmetry, their quotient, curvature and
//! the excess in a ball.

use crate::error::{Error, Result};
use crate::optim::{bracketed_root, NelderMead};
use crate::quadrature::{rule, GaussLegendre};
use crate::shapes::{Polygon, Shape, StarShape};
use crate::table::csv_row;
use crate::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Volume tolerance for the normalized-shape preconditions.
pub const VOLUME_TOL: f64 = 1e-8;

/// Asymmetries at or below this are treated as the ball.
pub const BALL_TOL: f64 = 1e-12;

/// Operations every measurable shape supports.
pub trait Region {
    fn perimeter(&self) -> f64;
    fn volume(&self) -> f64;
    /// True barycenter `|E|⁻¹ ∫_E x dx`.
    fn centroid(&self) -> Vec2;
    /// `|E Δ B(x, 1)|` without range checks.
    fn ball_symdiff(&self, x: Vec2) -> f64;
    /// Boundary length inside `B(x, r)` and the integral of the outward
    /// normal over it.
    fn boundary_in_ball(&self, x: Vec2, r: f64) -> (f64, Vec2);
}

impl Region for StarShape {
    /// `∫ √(r² + r′²) dθ`.
    fn perimeter(&self) -> f64 {
        let sum: f64 = self.radii().iter().zip(self.radii_d1()).map(|(r, d)| r.hypot(*d)).sum();
        sum * TAU / self.n() as f64
    }

    fn volume(&self) -> f64 {
        self.area()
    }

    fn centroid(&self) -> Vec2 {
        barycenter(self) * (2.0 * PI / (3.0 * self.area()))
    }

    fn ball_symdiff(&self, x: Vec2) -> f64 {
        star_ball_symdiff(self, x)
    }

    fn boundary_in_ball(&self, x: Vec2, r: f64) -> (f64, Vec2) {
        star_boundary_in_ball(self, x, r)
    }
}

impl Region for Polygon {
    fn perimeter(&self) -> f64 {
        Polygon::perimeter(self)
    }

    fn volume(&self) -> f64 {
        self.area()
    }

    fn centroid(&self) -> Vec2 {
        Polygon::centroid(self)
    }

    fn ball_symdiff(&self, x: Vec2) -> f64 {
        self.area() + PI - 2.0 * self.disk_overlap(x, 1.0)
    }

    fn boundary_in_ball(&self, x: Vec2, r: f64) -> (f64, Vec2) {
        Polygon::boundary_in_ball(self, x, r)
    }
}

impl Region for Shape {
    fn perimeter(&self) -> f64 {
        match self {
            Shape::Star(s) => s.perimeter(),
            Shape::Polygon(p) => Region::perimeter(p),
        }
    }

    fn volume(&self) -> f64 {
        match self {
            Shape::Star(s) => s.volume(),
            Shape::Polygon(p) => p.volume(),
        }
    }

    fn centroid(&self) -> Vec2 {
        match self {
            Shape::Star(s) => s.centroid(),
            Shape::Polygon(p) => Region::centroid(p),
        }
    }

    fn ball_symdiff(&self, x: Vec2) -> f64 {
        match self {
            Shape::Star(s) => s.ball_symdiff(x),
            Shape::Polygon(p) => p.ball_symdiff(x),
        }
    }

    fn boundary_in_ball(&self, x: Vec2, r: f64) -> (f64, Vec2) {
        match self {
            Shape::Star(s) => s.boundary_in_ball(x, r),
            Shape::Polygon(p) => Region::boundary_in_ball(p, x, r),
        }
    }
}

pub fn perimeter<R: Region + ?Sized>(shape: &R) -> f64 {
    shape.perimeter()
}

pub fn volume<R: Region + ?Sized>(shape: &R) -> f64 {
    shape.volume()
}

/// `∫ (1 + u)³ x dσ`, which is `3/2` times the barycenter when the area is `π`.
pub fn barycenter(shape: &StarShape) -> Vec2 {
    let q = rule(shape.n());
    let (mut sx, mut sy) = (0.0, 0.0);
    for ((r, c), s) in shape.radii().iter().zip(q.cos()).zip(q.sin()) {
        let r3 = r * r * r;
        sx += r3 * c;
        sy += r3 * s;
    }
    let nf = shape.n() as f64;
    Vec2::new(sx / nf, sy / nf)
}

pub fn check_normalized<R: Region + ?Sized>(shape: &R) -> Result<()> {
    let area = shape.volume();
    if (area - PI).abs() > VOLUME_TOL {
        return Err(Error::NotNormalized { area });
    }
    Ok(())
}

/// `P(E) / 2π − 1` for a set of area `π`.
pub fn deficit<R: Region + ?Sized>(shape: &R) -> Result<f64> {
    check_normalized(shape)?;
    Ok(shape.perimeter() / TAU - 1.0)
}

/// Largest admissible translation of the comparison disk.
pub const MAX_BALL_SHIFT: f64 = 0.9;

/// `|E Δ B(x, 1)|`.
pub fn symdiff_with_ball<R: Region + ?Sized>(shape: &R, x: Vec2) -> Result<f64> {
    if !(x.norm() <= MAX_BALL_SHIFT) {
        return Err(Error::Domain(format!("ball center |x| = {:.4} exceeds {MAX_BALL_SHIFT}", x.norm())));
    }
    Ok(shape.ball_symdiff(x))
}

/// `½ ∫ |r_a² − r_b²| dθ`, the area of the symmetric difference of two sets
/// star-shaped about the origin, by the trapezoid rule on the common grid.
pub fn star_symdiff(a: &StarShape, b: &StarShape) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::Domain(format!("grids differ: {} vs {}", a.n(), b.n())));
    }
    let sum: f64 = a.radii().iter().zip(b.radii()).map(|(p, q)| (p * p - q * q).abs()).sum();
    Ok(0.5 * sum * TAU / a.n() as f64)
}

/// Radius of the unit disk centered at `x` along direction `(c, s)`.
fn shifted_disk_radius(x: Vec2, c: f64, s: f64) -> f64 {
    let xw = x.x * c + x.y * s;
    xw + (1.0 - x.norm_sq() + xw * xw).sqrt()
}

/// Exact symmetric difference with `B(x, 1)`: the sign changes of
/// `r − ρ_x` are located to rounding, and on each arc between them both
/// areas are integrated in closed form (`r²` through its Fourier
/// antiderivative, the disk through Green's formula along its boundary).
fn star_ball_symdiff(shape: &StarShape, x: Vec2) -> f64 {
    let n = shape.n();
    let q = rule(n);
    let r = shape.radii();
    let diff: Vec<f64> = (0..n).map(|i| r[i] - shifted_disk_radius(x, q.cos()[i], q.sin()[i])).collect();
    let trapezoid = || {
        let sum: f64 = (0..n)
            .map(|i| {
                let rho = r[i] - diff[i];
                (r[i] * r[i] - rho * rho).abs()
            })
            .sum();
        0.5 * sum * q.weight()
    };
    if diff.iter().all(|d| d.abs() < 1e-13) {
        return trapezoid();
    }

    let gap = |t: f64| {
        let (s, c) = t.sin_cos();
        shape.radius_at(t) - shifted_disk_radius(x, c, s)
    };
    let mut roots = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if (diff[i] >= 0.0) != (diff[j] >= 0.0) {
            let (a, b) = (q.node(i), q.node(i) + q.weight());
            roots.push(bracketed_root(gap, a, b, 1e-15));
        }
    }
    if roots.is_empty() {
        return (shape.area() - PI).abs();
    }
    if roots.len() % 2 == 1 {
        return trapezoid();
    }

    let r_sq = shape.radius_sq_coeffs();
    // angle of the disk boundary point seen from its center, minus t; lies in (−π/2, π/2)
    let phase = |t: f64| {
        let (s, c) = t.sin_cos();
        let p = Vec2::new(c, s) * shifted_disk_radius(x, c, s) - x;
        let d = p.angle() - t;
        d - TAU * (d / TAU).round()
    };
    let disk_part = |t0: f64, t1: f64| {
        let (g0, g1) = (phase(t0), phase(t1));
        let (phi0, phi1) = (t0 + g0, t1 + g1);
        (t1 - t0) + (g1 - g0) + x.x * (phi1.sin() - phi0.sin()) - x.y * (phi1.cos() - phi0.cos())
    };
    let m = roots.len();
    let mut total = 0.0;
    for k in 0..m {
        let t0 = roots[k];
        let t1 = if k + 1 < m { roots[k + 1] } else { roots[0] + TAU };
        let shape_part = r_sq.integral_to(t1) - r_sq.integral_to(t0);
        total += (shape_part - disk_part(t0, t1)).abs();
    }
    0.5 * total
}

/// Configuration of the translation search behind [`asymmetry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetrySearchConfig {
    /// Initial centers; the set's barycenter is appended when `add_centroid`.
    pub starts: Vec<Vec2>,
    pub add_centroid: bool,
    pub radius_bound: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AsymmetrySearchConfig {
    fn default() -> Self {
        let mut starts = vec![Vec2::ZERO];
        starts.extend((0..8).map(|k| Vec2::polar(TAU * k as f64 / 8.0) * 0.2));
        Self { starts, add_centroid: true, radius_bound: MAX_BALL_SHIFT, tol: 1e-10, max_iter: 500 }
    }
}

/// Fraenkel asymmetry and the optimal ball center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub value: f64,
    pub center: Vec2,
}

/// `min_x |E Δ B(x, 1)| / π` by multi-start Nelder–Mead. The returned value
/// is never larger than the objective at any start.
pub fn asymmetry<R: Region + ?Sized>(shape: &R, cfg: &AsymmetrySearchConfig) -> Result<Asymmetry> {
    check_normalized(shape)?;
    if !(cfg.radius_bound > 0.0 && cfg.radius_bound < 1.0) {
        return Err(Error::Config(format!("radius bound {} must lie in (0, 1)", cfg.radius_bound)));
    }
    let bound = cfg.radius_bound.min(MAX_BALL_SHIFT);
    let objective = |p: &[f64]| {
        let x = Vec2::new(p[0], p[1]);
        if x.norm() > bound {
            f64::INFINITY
        } else {
            shape.ball_symdiff(x) / PI
        }
    };
    let mut starts = cfg.starts.clone();
    if cfg.add_centroid {
        let c = shape.centroid();
        starts.push(if c.norm() > bound { c * (bound / c.norm()) } else { c });
    }
    let nm = NelderMead { ftol: cfg.tol, max_iter: cfg.max_iter, ..Default::default() };
    let mut best: Option<Asymmetry> = None;
    for start in starts.into_iter().filter(|s| s.norm() <= bound) {
        let m = nm.minimize(objective, &[start.x, start.y], &[0.05, 0.05]);
        let cand = Asymmetry { value: m.value, center: Vec2::new(m.x[0], m.x[1]) };
        best = Some(match best {
            None => cand,
            Some(b) if cand.value < b.value || (cand.value == b.value && cand.center.norm() < b.center.norm()) => cand,
            Some(b) => b,
        });
    }
    best.ok_or_else(|| Error::Config("no start lies inside the search region".into()))
}

/// `δP / α²`.
pub fn quotient<R: Region + ?Sized>(shape: &R, cfg: &AsymmetrySearchConfig) -> Result<f64> {
    let d = deficit(shape)?;
    let a = asymmetry(shape, cfg)?;
    quotient_from(d, a.value)
}

pub fn quotient_from(deficit: f64, asymmetry: f64) -> Result<f64> {
    if asymmetry <= BALL_TOL {
        return Err(Error::BallLike { asymmetry });
    }
    Ok(deficit / (asymmetry * asymmetry))
}

/// Curvature `(r² + 2r′² − r r″) / (r² + r′²)^{3/2}` at the nodes.
pub fn curvature(shape: &StarShape) -> Vec<f64> {
    shape
        .radii()
        .iter()
        .zip(shape.radii_d1())
        .zip(shape.radii_d2())
        .map(|((&r, &d1), &d2)| (r * r + 2.0 * d1 * d1 - r * d2) / (r * r + d1 * d1).powf(1.5))
        .collect()
}

/// `r⁻¹ (P(E; B(x, r)) − |∫_{∂E ∩ B(x, r)} ν|)`.
pub fn excess<R: Region + ?Sized>(shape: &R, x: Vec2, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("ball radius {r} must be positive")));
    }
    let (length, normal) = shape.boundary_in_ball(x, r);
    if length <= 0.0 {
        return Err(Error::EmptyBoundary { cx: x.x, cy: x.y, radius: r });
    }
    Ok((length - normal.norm()) / r)
}

fn star_boundary_in_ball(shape: &StarShape, x: Vec2, radius: f64) -> (f64, Vec2) {
    // fine enough that the ball spans several samples
    let arc_scale = radius / shape.max_radius();
    let m = shape.n().max((8.0 * TAU / arc_scale).ceil() as usize);
    let h = TAU / m as f64;
    let outside = |t: f64| (shape.boundary_point(t) - x).norm() - radius;
    let vals: Vec<f64> = (0..m).map(|i| outside(i as f64 * h)).collect();
    let mut roots = Vec::new();
    for i in 0..m {
        let j = (i + 1) % m;
        if (vals[i] < 0.0) != (vals[j] < 0.0) {
            let a = i as f64 * h;
            roots.push(bracketed_root(outside, a, a + h, 1e-15));
        }
    }
    let gl = GaussLegendre::new(16);
    let arc_length = |t0: f64, t1: f64| {
        let pieces = ((t1 - t0) / (TAU / 64.0)).ceil().max(1.0) as usize;
        let w = (t1 - t0) / pieces as f64;
        (0..pieces)
            .map(|p| {
                let a = t0 + p as f64 * w;
                gl.integrate(a, a + w, |t| {
                    let (r, d, _) = shape.radius_derivs_at(t);
                    r.hypot(d)
                })
            })
            .sum::<f64>()
    };
    if roots.is_empty() {
        return if vals[0] < 0.0 { (shape.perimeter(), Vec2::ZERO) } else { (0.0, Vec2::ZERO) };
    }
    let mut length = 0.0;
    let mut normal = Vec2::ZERO;
    let k = roots.len();
    for i in 0..k {
        let t0 = roots[i];
        let t1 = if i + 1 < k { roots[i + 1] } else { roots[0] + TAU };
        if outside(0.5 * (t0 + t1)) < 0.0 {
            length += arc_length(t0, t1);
            normal = normal + (shape.boundary_point(t1) - shape.boundary_point(t0)).perp_cw();
        }
    }
    (length, normal)
}

/// One row of `perimeter,volume,deficit,asymmetry,cx,cy,quotient`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub perimeter: f64,
    pub volume: f64,
    pub deficit: f64,
    pub asymmetry: f64,
    pub optimal_center: Vec2,
    /// `None` at the ball.
    pub quotient: Option<f64>,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str = "perimeter,volume,deficit,asymmetry,cx,cy,quotient";

    pub fn to_csv_row(&self) -> String {
        let q = self.quotient.unwrap_or(f64::NAN);
        csv_row(&[
            self.perimeter,
            self.volume,
            self.deficit,
            self.asymmetry,
            self.optimal_center.x,
            self.optimal_center.y,
            q,
        ])
    }
}

/// Every metric of a volume-normalized shape.
pub fn evaluate<R: Region + ?Sized>(shape: &R, cfg: &AsymmetrySearchConfig) -> Result<MetricsReport> {
    let deficit = deficit(shape)?;
    let asym = asymmetry(shape, cfg)?;
    Ok(MetricsReport {
        perimeter: shape.perimeter(),
        volume: shape.volume(),
        deficit,
        asymmetry: asym.value,
        optimal_center: asym.center,
        quotient: quotient_from(deficit, asym.value).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{make_ellipse, make_regular_polygon, polygon_to_star};
    use crate::spectral::FourierCoeffs;

    /// Circular segment of the unit disk cut at distance `h` from the center.
    fn segment(h: f64) -> f64 {
        h.acos() - h * (1.0 - h * h).sqrt()
    }

    fn lens_symdiff(d: f64) -> f64 {
        // two unit disks at distance d: overlap 2 acos(d/2) − (d/2)√(4 − d²)
        let overlap = 2.0 * (d / 2.0).acos() - (d / 2.0) * (4.0 - d * d).sqrt();
        TAU - 2.0 * overlap
    }

    fn square_axis_aligned() -> Polygon {
        let h = PI.sqrt() / 2.0;
        Polygon::new(vec![Vec2::new(h, -h), Vec2::new(h, h), Vec2::new(-h, h), Vec2::new(-h, -h)]).unwrap()
    }

    #[test]
    fn perimeter_and_volume_basics() {
        let c = StarShape::circle();
        assert!((perimeter(&c) - TAU).abs() < 1e-13);
        assert!((volume(&c) - PI).abs() < 1e-13);
        assert!((volume(&StarShape::disk(2.0).unwrap()) - 4.0 * PI).abs() < 1e-12);
        let sq = make_regular_polygon(4).unwrap();
        assert!((perimeter(&sq) - 4.0 * PI.sqrt()).abs() < 1e-12);
        assert!((volume(&make_regular_polygon(6).unwrap()) - PI).abs() < 1e-12);
    }

    #[test]
    fn ellipse_perimeter_matches_adaptive_oracle() {
        let e = make_ellipse(0.1).unwrap();
        let (a, b) = (1.1, 1.0 / 1.1);
        // adaptive Simpson on the polar integrand with the analytic r and r′
        let integrand = |t: f64| {
            let (s, c) = f64::sin_cos(t);
            let den = b * b * c * c + a * a * s * s;
            let r = a * b / den.sqrt();
            let dr = -0.5 * a * b * den.powf(-1.5) * 2.0 * (a * a - b * b) * s * c;
            r.hypot(dr)
        };
        #[allow(clippy::too_many_arguments)]
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fm, fb) = (integrand(0.0), integrand(PI), integrand(TAU));
        let whole = TAU / 6.0 * (fa + 4.0 * fm + fb);
        let oracle = simpson(&integrand, 0.0, TAU, fa, fm, fb, whole, 1e-13, 40);
        assert!((perimeter(&e) - oracle).abs() < 1e-8, "{} vs {oracle}", perimeter(&e));
    }

    #[test]
    fn barycenter_values() {
        assert!(barycenter(&StarShape::circle()).norm() < 1e-15);
        let t = StarShape::circle().translate(Vec2::new(0.1, 0.0)).unwrap();
        let b = barycenter(&t);
        assert!((b.x - 0.15).abs() < 0.01 && b.y.abs() < 1e-12);
        // exact: the centroid of the shifted disk is the shift
        assert!((t.centroid() - Vec2::new(0.1, 0.0)).norm() < 1e-10);
        let s = StarShape::from_fourier(FourierCoeffs::cosine(2, 0.1)).unwrap();
        assert!(barycenter(&s).norm() < 1e-10);
    }

    #[test]
    fn deficit_values() {
        assert!(deficit(&StarShape::circle()).unwrap().abs() < 1e-14);
        let closed = |m: f64| (m * (PI / m).tan() / PI).sqrt() - 1.0;
        assert!((deficit(&make_regular_polygon(6).unwrap()).unwrap() - closed(6.0)).abs() < 1e-12);
        assert!((deficit(&make_regular_polygon(6).unwrap()).unwrap() - 0.050_075_1).abs() < 1e-7);
        assert!((deficit(&make_regular_polygon(4).unwrap()).unwrap() - 0.128_379_2).abs() < 1e-7);
        assert!(matches!(deficit(&StarShape::disk(2.0).unwrap()), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn lens_area() {
        let c = StarShape::circle();
        let got = symdiff_with_ball(&c, Vec2::new(0.5, 0.0)).unwrap();
        let want = TAU - 2.0 * (2.0 * 0.25f64.acos() - 0.25 * 3.75f64.sqrt());
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        assert!((want - 1.978_966_8).abs() < 1e-7);
        for (d, ang) in [(0.1, 0.3), (0.37, 2.0), (0.8, -1.0)] {
            let got = symdiff_with_ball(&c, Vec2::polar(ang) * d).unwrap();
            assert!((got - lens_symdiff(d)).abs() < 1e-11, "d = {d}");
        }
        assert!(symdiff_with_ball(&c, Vec2::ZERO).unwrap().abs() < 1e-12);
        assert!(symdiff_with_ball(&c, Vec2::new(0.95, 0.0)).is_err());
    }

    #[test]
    fn square_symdiff_matches_segments() {
        let h = PI.sqrt() / 2.0;
        let want = 8.0 * segment(h);
        assert!((want - 0.568_920).abs() < 1e-5);
        let sq = square_axis_aligned();
        assert!((symdiff_with_ball(&sq, Vec2::ZERO).unwrap() - want).abs() < 1e-12);
        let star = polygon_to_star(&sq).unwrap();
        assert!((symdiff_with_ball(&star, Vec2::ZERO).unwrap() - want).abs() < 1e-5);
    }

    #[test]
    fn star_symdiff_agrees_with_exact_polygon_overlap_off_center() {
        let sq = square_axis_aligned();
        let star = polygon_to_star(&sq).unwrap();
        for x in [Vec2::new(0.1, 0.05), Vec2::new(-0.2, 0.15)] {
            let exact = symdiff_with_ball(&sq, x).unwrap();
            let approx = symdiff_with_ball(&star, x).unwrap();
            assert!((exact - approx).abs() < 1e-5, "{exact} vs {approx}");
        }
    }

    #[test]
    fn asymmetry_of_circle_and_square() {
        let cfg = AsymmetrySearchConfig::default();
        let a = asymmetry(&StarShape::circle(), &cfg).unwrap();
        assert!(a.value < 1e-12 && a.center.norm() < 1e-12);
        let sq = make_regular_polygon(4).unwrap();
        let a = asymmetry(&sq, &cfg).unwrap();
        let want = 8.0 * segment(PI.sqrt() / 2.0) / PI;
        assert!((a.value - want).abs() < 1e-9, "{} vs {want}", a.value);
        assert!((a.value - 0.181_09).abs() < 1e-4);
        assert!(a.center.norm() < 1e-4);
    }

    #[test]
    fn square_center_is_optimal_on_a_grid() {
        let sq = make_regular_polygon(4).unwrap();
        let at_origin = symdiff_with_ball(&sq, Vec2::ZERO).unwrap();
        for i in -6..=6 {
            for j in -6..=6 {
                let x = Vec2::new(i as f64 * 0.05, j as f64 * 0.05);
                if x.norm() <= 0.3 {
                    assert!(symdiff_with_ball(&sq, x).unwrap() >= at_origin - 1e-12);
                }
            }
        }
    }

    #[test]
    fn asymmetry_of_thin_ellipse() {
        let a = asymmetry(&make_ellipse(0.1).unwrap(), &AsymmetrySearchConfig::default()).unwrap();
        // elliptic-integral oracle for the centered ball
        assert!((a.value - 0.121_169_377_507).abs() < 1e-9, "{}", a.value);
        assert!(a.center.norm() < 1e-4);
    }

    #[test]
    fn asymmetry_needs_normalized_shape() {
        let err = asymmetry(&StarShape::disk(1.5).unwrap(), &AsymmetrySearchConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn asymmetry_bounded_by_every_start() {
        let mut u = FourierCoeffs::zeros(5);
        u.set(2, 0.05, 0.01);
        u.set(3, 0.02, -0.03);
        let s = StarShape::from_fourier(u).unwrap().normalize_volume().unwrap();
        let cfg = AsymmetrySearchConfig::default();
        let a = asymmetry(&s, &cfg).unwrap();
        for x in &cfg.starts {
            assert!(a.value <= s.ball_symdiff(*x) / PI);
        }
    }

    #[test]
    fn quotients() {
        let cfg = AsymmetrySearchConfig::default();
        let q = quotient(&make_regular_polygon(4).unwrap(), &cfg).unwrap();
        assert!((q - 0.128_379_2 / 0.181_09f64.powi(2)).abs() < 1e-2, "{q}");
        let q = quotient(&make_ellipse(0.1).unwrap(), &cfg).unwrap();
        assert!((q - 0.463).abs() < 0.01, "{q}");
        assert!(matches!(quotient(&StarShape::circle(), &cfg), Err(Error::BallLike { .. })));
    }

    #[test]
    fn curvature_values() {
        assert!(curvature(&StarShape::circle()).iter().all(|k| (k - 1.0).abs() < 1e-13));
        assert!(curvature(&StarShape::disk(2.5).unwrap()).iter().all(|k| (k - 0.4).abs() < 1e-13));
        let k = curvature(&StarShape::from_fourier(FourierCoeffs::cosine(2, 0.01)).unwrap());
        let want = 1.05 / 1.01f64.powi(2);
        assert!((k[0] - want).abs() < 1e-12);
        assert!((k[0] - 1.029_31).abs() < 1e-5);
    }

    #[test]
    fn excess_of_polygon() {
        let sq = make_regular_polygon(4).unwrap();
        let v = sq.vertices();
        let mid = (v[0] + v[1]) * 0.5;
        assert!(excess(&sq, mid, 0.3).unwrap().abs() < 1e-12);
        for r in [0.01, 0.1, 0.5] {
            assert!((excess(&sq, v[1], r).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        }
        assert!(matches!(excess(&sq, Vec2::ZERO, 0.1), Err(Error::EmptyBoundary { .. })));
    }

    #[test]
    fn excess_of_circle_decreases() {
        let c = StarShape::circle();
        let p = Vec2::new(1.0, 0.0);
        let vals: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&r| excess(&c, p, r).unwrap()).collect();
        for (r, v) in [0.2f64, 0.1, 0.05].iter().zip(&vals) {
            let beta = 2.0 * (r / 2.0).asin();
            assert!((v - (2.0 * beta - 2.0 * beta.sin()) / r).abs() < 1e-10);
        }
        assert!(vals[0] > vals[1] && vals[1] > vals[2] && vals[2] > 0.0);
        // whole boundary inside: closed curve, normal integral vanishes
        assert!((excess(&c, Vec2::ZERO, 2.0).unwrap() - PI).abs() < 1e-10);
    }

    #[test]
    fn report_row() {
        let r = evaluate(&StarShape::circle(), &AsymmetrySearchConfig::default()).unwrap();
        assert!(r.quotient.is_none());
        let row = r.to_csv_row();
        assert!(row.starts_with("6.28318531,3.14159265,"));
        assert!(row.ends_with(",NA"));
    }
}
