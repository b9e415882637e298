//! Sweeps, constant estimation, the linearized quotient, and the seeded
//! property suites.

use crate::error::{Error, Result};
use crate::metrics::{self, AsymmetrySearchConfig, Region};
use crate::optim::{bracketed_root, NelderMead};
use crate::selection::{extrapolate, Extrapolation};
use crate::shapes::{make_ellipse_with, make_regular_polygon, Shape, StarShape};
use crate::spectral::{self, quadratic_form, FourierCoeffs};
use crate::table::csv_row;
use crate::HALL_CONSTANT;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub deficit: f64,
    pub asymmetry: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const CSV_HEADER: &'static str = "parameter,deficit,asymmetry,quotient";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            out.push_str(&csv_row(&[r.parameter, r.deficit, r.asymmetry, r.quotient]));
            out.push('\n');
        }
        out
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.asymmetry, r.quotient)).collect()
    }
}

/// Largest ellipse parameter accepted by the sweep.
pub const MAX_SWEEP_EPS: f64 = 0.5;

/// Metrics of `make_ellipse(ε)` for each ε, in the given (strictly monotone) order.
pub fn ellipse_sweep(eps_list: &[f64], quadrature_n: usize) -> Result<SweepTable> {
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0 && **e <= MAX_SWEEP_EPS)) {
        return Err(Error::Domain(format!("ellipse parameter {e} must lie in (0, {MAX_SWEEP_EPS}]")));
    }
    let increasing = eps_list.windows(2).all(|w| w[1] > w[0]);
    let decreasing = eps_list.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::Domain("sweep parameters must be strictly monotone".into()));
    }
    let cfg = AsymmetrySearchConfig::default();
    let rows = eps_list
        .iter()
        .map(|&eps| {
            let shape = make_ellipse_with(eps, quadrature_n)?.normalize_volume()?;
            let deficit = metrics::deficit(&shape)?;
            let asymmetry = metrics::asymmetry(&shape, &cfg)?.value;
            let quotient = metrics::quotient_from(deficit, asymmetry)?;
            Ok(SweepRow { parameter: eps, deficit, asymmetry, quotient })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

/// The `α → 0` limit of the quotient read off a table.
pub fn estimate_constant(table: &SweepTable, model: Extrapolation) -> Result<f64> {
    if table.rows.len() < 2 {
        return Err(Error::InsufficientData(format!("{} row(s); a fit needs two", table.rows.len())));
    }
    extrapolate(&table.points(), model)
}

/// Sampling density for locating sign changes in the linearized quotient.
const ROOT_GRID: usize = 1024;

/// `min_c (1/π) ∫ |u − c₁ cos θ − c₂ sin θ| dθ`, with the integral exact
/// between refined sign changes.
fn l1_distance_to_translations(u: &FourierCoeffs) -> (f64, [f64; 2]) {
    let m = ROOT_GRID.max(32 * u.degree());
    let h = TAU / m as f64;
    let grid: Vec<f64> = u.synthesize(m);
    let trig: Vec<(f64, f64)> = (0..m).map(|i| (i as f64 * h).sin_cos()).collect();
    let l1 = |c: &[f64]| {
        let mut v = u.clone().with_degree(u.degree().max(1));
        v.set(1, v.a(1) - c[0], v.b(1) - c[1]);
        let vals: Vec<f64> = grid.iter().zip(&trig).map(|(g, (s, co))| g - c[0] * co - c[1] * s).collect();
        let mut roots = Vec::new();
        for i in 0..m {
            let j = (i + 1) % m;
            if (vals[i] >= 0.0) != (vals[j] >= 0.0) {
                let a = i as f64 * h;
                roots.push(bracketed_root(|t| v.eval(t), a, a + h, 1e-15));
            }
        }
        if roots.is_empty() {
            return (v.integral_to(TAU) - v.integral_to(0.0)).abs() / PI;
        }
        let k = roots.len();
        let mut total = 0.0;
        for i in 0..k {
            let t0 = roots[i];
            let t1 = if i + 1 < k { roots[i + 1] } else { roots[0] + TAU };
            total += (v.integral_to(t1) - v.integral_to(t0)).abs();
        }
        total / PI
    };
    let scale = u.l2_norm_sq().sqrt().max(1e-300);
    let nm = NelderMead { ftol: 1e-15 * scale, max_iter: 2000, max_evals: usize::MAX };
    let start = [u.a(1), u.b(1)];
    let first = nm.minimize(l1, &start, &[0.1 * scale, 0.1 * scale]);
    // one restart from the first optimum guards against a premature collapse
    let second = nm.minimize(l1, &first.x, &[0.01 * scale, 0.01 * scale]);
    let best = if second.value < first.value { second } else { first };
    (best.value, [best.x[0], best.x[1]])
}

/// Linearized quotient `J(u) = ½(‖∇u‖² − ‖u‖²) / (min_c (1/π)∫|u − c·e_θ| dθ)²`,
/// the second-order limit of `δP/α²` along `1 + t u` as `t → 0`.
pub fn asymptotic_quotient(u: &FourierCoeffs) -> Result<f64> {
    if !(2..=u.degree()).any(|k| u.a(k) != 0.0 || u.b(k) != 0.0) {
        return Err(Error::Precondition("profile has no mode of order two or higher".into()));
    }
    let (den, _) = l1_distance_to_translations(u);
    if den < 1e-12 {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(quadratic_form(u, 2)? / (den * den))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticMinimum {
    pub modes: usize,
    pub value: f64,
    pub coeffs: FourierCoeffs,
    /// Minimum at each truncation `2..=modes`.
    pub ladder: Vec<f64>,
}

/// Minimizes `J` over modes `2..=K`. `J` is invariant under scaling and
/// rotation, so the second mode is pinned to `cos 2θ`; truncation `K + 1`
/// starts from the optimum at `K`, which makes the ladder nonincreasing.
pub fn minimize_asymptotic(modes: usize, seed: u64) -> Result<AsymptoticMinimum> {
    if modes < 2 {
        return Err(Error::Config(format!("mode truncation {modes} must be at least 2")));
    }
    let build = |x: &[f64], k_max: usize| {
        let mut u = FourierCoeffs::cosine(2, 1.0).with_degree(k_max);
        for k in 3..=k_max {
            u.set(k, x[2 * (k - 3)], x[2 * (k - 3) + 1]);
        }
        u
    };
    let j = |x: &[f64], k_max: usize| asymptotic_quotient(&build(x, k_max)).unwrap_or(f64::INFINITY);
    let nm = NelderMead { ftol: 1e-13, max_iter: usize::MAX, max_evals: 6000 };
    let mut best_x: Vec<f64> = Vec::new();
    let mut best_v = j(&best_x, 2);
    let mut ladder = vec![best_v];
    for k_max in 3..=modes {
        best_x.extend([0.0, 0.0]);
        let dim = best_x.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k_max as u64);
        for restart in 0..3 {
            let x0: Vec<f64> = if restart == 0 {
                best_x.clone()
            } else {
                best_x.iter().map(|v| v + 0.01 * rng.gen_range(-1.0..=1.0)).collect()
            };
            let m = nm.minimize(|x| j(x, k_max), &x0, &vec![0.02; dim]);
            if m.value < best_v {
                best_v = m.value;
                best_x = m.x;
            }
        }
        ladder.push(best_v);
    }
    Ok(AsymptoticMinimum { modes, value: best_v, coeffs: build(&best_x, modes), ladder })
}

/// Named shape in a property corpus.
#[derive(Debug, Clone)]
pub struct CorpusShape {
    pub name: String,
    pub shape: Shape,
}

/// Fixed seed for the random part of the default corpus.
pub const CORPUS_SEED: u64 = 20_240_601;

/// Number of random Fourier shapes in the default corpus.
pub const CORPUS_RANDOM: usize = 24;

/// Random profile with modes `2..=10` and `‖u‖_∞ = amp`.
fn random_profile(rng: &mut ChaCha8Rng, amp: f64) -> FourierCoeffs {
    let mut u = FourierCoeffs::zeros(10);
    for k in 2..=10 {
        let w = 1.0 / (k * k) as f64;
        u.set(k, w * rng.gen_range(-1.0..=1.0), w * rng.gen_range(-1.0..=1.0));
    }
    let peak = u.synthesize(1024).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    u.scaled(amp / peak)
}

/// Regular m-gons for `m = 3..=12`, ellipses with `ε ≤ 0.4`, and seeded
/// random Fourier shapes (modes 2–10, `‖u‖_∞ ≤ 0.05`), all of area `π`.
pub fn default_corpus(quadrature_n: usize) -> Result<Vec<CorpusShape>> {
    let mut out = Vec::new();
    for m in 3..=12 {
        out.push(CorpusShape { name: format!("polygon-{m}"), shape: Shape::Polygon(make_regular_polygon(m)?) });
    }
    for eps in [0.05, 0.1, 0.2, 0.3, 0.4] {
        let s = make_ellipse_with(eps, quadrature_n)?.normalize_volume()?;
        out.push(CorpusShape { name: format!("ellipse-{eps}"), shape: Shape::Star(s) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut i = 0;
    while i < CORPUS_RANDOM {
        let amp = rng.gen_range(0.005..=0.05);
        let u = random_profile(&mut rng, amp);
        let s = StarShape::from_fourier_with(u, quadrature_n)?.normalize_volume()?;
        if s.min_radius() < 0.5 {
            continue;
        }
        out.push(CorpusShape { name: format!("fourier-{i}"), shape: Shape::Star(s) });
        i += 1;
    }
    Ok(out)
}

/// Constant checked against every corpus shape, `δP ≥ C α²`.
pub const QII_CONSTANT: f64 = 0.4;

/// Asymmetry below which the sharp form `δP ≥ C₀α² − 0.05α³` is checked.
pub const HALL_FORM_RANGE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub name: String,
    pub deficit: f64,
    pub asymmetry: f64,
    pub quotient: f64,
    pub qii_pass: bool,
    /// `None` when `α` exceeds [`HALL_FORM_RANGE`].
    pub hall_pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub rows: Vec<PropertyRow>,
    pub min_quotient: f64,
    pub all_pass: bool,
}

/// Evaluates the quantitative isoperimetric inequality over a corpus.
/// Shapes that cannot be measured are reported as failures.
pub fn qii_property_suite(corpus: &[CorpusShape]) -> PropertyReport {
    let cfg = AsymmetrySearchConfig::default();
    let mut rows: Vec<PropertyRow> = corpus
        .iter()
        .map(|c| {
            let measured = metrics::deficit(&c.shape).and_then(|d| Ok((d, metrics::asymmetry(&c.shape, &cfg)?.value)));
            match measured {
                Ok((d, a)) => {
                    let q = metrics::quotient_from(d, a).unwrap_or(f64::NAN);
                    let hall_pass = (a <= HALL_FORM_RANGE).then(|| d >= HALL_CONSTANT * a * a - 0.05 * a.powi(3));
                    PropertyRow { name: c.name.clone(), deficit: d, asymmetry: a, quotient: q, qii_pass: d >= QII_CONSTANT * a * a && a > 0.0, hall_pass }
                }
                Err(_) => PropertyRow {
                    name: c.name.clone(),
                    deficit: f64::NAN,
                    asymmetry: f64::NAN,
                    quotient: f64::NAN,
                    qii_pass: false,
                    hall_pass: Some(false),
                },
            }
        })
        .collect();
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let min_quotient = rows.iter().map(|r| r.quotient).fold(f64::INFINITY, |m, q| if q.is_nan() { f64::NAN } else { m.min(q) });
    let all_pass = rows.iter().all(|r| r.qii_pass && r.hall_pass != Some(false));
    PropertyReport { rows, min_quotient, all_pass }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FugledeTrial {
    pub trial_id: usize,
    pub deficit: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

impl FugledeTrial {
    pub const CSV_HEADER: &'static str = "trial_id,deficit,bound,margin,pass";

    pub fn to_csv_row(&self) -> String {
        format!("{},{}", self.trial_id, csv_row(&[self.deficit, self.bound, self.margin])) + if self.pass { ",true" } else { ",false" }
    }
}

/// `η` used by the seeded trials.
pub const FUGLEDE_ETA: f64 = 0.1;

/// Seeded trials of the nearly-circular deficit estimate: each profile has
/// modes 2–10 and `‖u‖_∞ + ‖u′‖_∞` a random fraction (0.2–0.95) of `amp`,
/// and is volume-normalized, recentered and normalized again before the check.
pub fn fuglede_trials(trials: usize, amp: f64, seed: u64, quadrature_n: usize) -> Result<Vec<FugledeTrial>> {
    if !(amp > 0.0 && amp <= spectral::SMALLNESS) {
        return Err(Error::Domain(format!("amplitude {amp} must lie in (0, {}]", spectral::SMALLNESS)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|trial_id| {
            let fraction = rng.gen_range(0.2..=0.95);
            let u = random_profile(&mut rng, 1.0);
            let peak = |c: &FourierCoeffs| c.synthesize(1024).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let size = peak(&u) + peak(&u.derivative());
            let u = u.scaled(fraction * amp / size);
            let s = StarShape::from_fourier_with(u, quadrature_n)?.normalize_volume()?;
            let s = spectral::recenter(&s)?.normalize_volume()?;
            let c = spectral::fuglede_check(&s, FUGLEDE_ETA)?;
            Ok(FugledeTrial { trial_id, deficit: c.deficit, bound: c.bound, margin: c.margin(), pass: c.pass })
        })
        .collect()
}

/// Lipschitz constant of the asymmetry with respect to `|E Δ F|` in the plane.
pub const ASYMMETRY_LIPSCHITZ: f64 = 16.0 / (3.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpPair {
    pub alpha_e: f64,
    pub alpha_f: f64,
    pub symdiff: f64,
    pub pass: bool,
}

/// Pairs `E`, `F` where `F` adds a smooth radial bump of angular width
/// `π/8` to `E` (both of area `π`), checking
/// `|α(E) − α(F)| ≤ (16/3π) |E Δ F| + 1e−6`.
pub fn lipschitz_bump_pairs(count: usize, seed: u64, quadrature_n: usize) -> Result<Vec<BumpPair>> {
    let cfg = AsymmetrySearchConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = PI / 8.0;
    (0..count)
        .map(|_| {
            let amp = rng.gen_range(0.01..=0.05);
            let u = random_profile(&mut rng, amp);
            let e = StarShape::from_fourier_with(u, quadrature_n)?.normalize_volume()?;
            let center = rng.gen_range(0.0..TAU);
            let height = rng.gen_range(-0.1..=0.1);
            let r: Vec<f64> = (0..e.n())
                .map(|i| {
                    let t = e.node(i);
                    let d = (t - center + PI).rem_euclid(TAU) - PI;
                    let bump = if d.abs() < width / 2.0 { (PI * d / width).cos().powi(4) } else { 0.0 };
                    e.radii()[i] + height * bump
                })
                .collect();
            let f = StarShape::from_samples(r)?.normalize_volume()?;
            let alpha_e = metrics::asymmetry(&e, &cfg)?.value;
            let alpha_f = metrics::asymmetry(&f, &cfg)?.value;
            let symdiff = metrics::star_symdiff(&e, &f)?;
            let pass = (alpha_e - alpha_f).abs() <= ASYMMETRY_LIPSCHITZ * symdiff + 1e-6;
            Ok(BumpPair { alpha_e, alpha_f, symdiff, pass })
        })
        .collect()
}

/// Deficit, asymmetry and quotient of any region, for invariance checks.
pub fn measure<R: Region + ?Sized>(shape: &R) -> Result<(f64, f64, f64)> {
    let d = metrics::deficit(shape)?;
    let a = metrics::asymmetry(shape, &AsymmetrySearchConfig::default())?.value;
    Ok((d, a, metrics::quotient_from(d, a)?))
}
