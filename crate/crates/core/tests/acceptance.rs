//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any asserted criterion fails. The curvature-oscillation
//! comparison in criterion 9 is a reported diagnostic and does not affect
//! the exit status.

use isoq::experiments::{
    default_corpus, ellipse_sweep, estimate_constant, fuglede_trials, lipschitz_bump_pairs, measure,
    minimize_asymptotic, qii_property_suite, FUGLEDE_ETA,
};
use isoq::metrics::{self, AsymmetrySearchConfig};
use isoq::selection::{curvature_oscillation_bound, recovery_sequence, Extrapolation, SelectionConfig};
use isoq::shapes::{make_regular_polygon, Shape};
use isoq::{Vec2, ELLIPSE_CONSTANT, HALL_CONSTANT};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: &str, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let pass = o.pass && elapsed < limit;
    println!(
        "{} [{id}] {name}: {} ({:.2}s, limit {}s)",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn segment(h: f64) -> f64 {
    h.acos() - h * (1.0 - h * h).sqrt()
}

fn main() {
    let mut ok = true;

    ok &= report("1", "regular-polygon deficit", Duration::from_secs(1), || {
        let mut worst = 0.0f64;
        for m in 3..=12 {
            let p = make_regular_polygon(m).unwrap();
            let want = ((m as f64) * (PI / m as f64).tan() / PI).sqrt() - 1.0;
            worst = worst.max((metrics::deficit(&p).unwrap() - want).abs());
        }
        Outcome { pass: worst <= 1e-9, detail: format!("max error {worst:.2e} (tol 1e-9)") }
    });

    ok &= report("2", "square asymmetry", Duration::from_secs(5), || {
        let sq = make_regular_polygon(4).unwrap();
        let a = metrics::asymmetry(&sq, &AsymmetrySearchConfig::default()).unwrap();
        let closed = 8.0 * segment(PI.sqrt() / 2.0) / PI;
        let pass = (a.value - 0.18109).abs() <= 1e-4 && (a.value - closed).abs() <= 1e-4 && a.center.norm() <= 1e-4;
        Outcome {
            pass,
            detail: format!("alpha {:.7} (closed form {closed:.7}), |x*| {:.1e}", a.value, a.center.norm()),
        }
    });

    ok &= report("3", "shifted-disk overlap", Duration::from_secs(1), || {
        let got = metrics::symdiff_with_ball(&isoq::shapes::StarShape::circle(), Vec2::new(0.5, 0.0)).unwrap();
        let lens = 2.0 * PI - 2.0 * (2.0 * 0.25f64.acos() - 0.25 * 3.75f64.sqrt());
        let pass = (got - 1.978_966_8).abs() <= 1e-7 && (got - lens).abs() <= 1e-8;
        Outcome { pass, detail: format!("{got:.10} vs lens {lens:.10}") }
    });

    ok &= report("4", "ellipse upper bound", Duration::from_secs(30), || {
        let t = ellipse_sweep(&[0.05, 0.1, 0.2], isoq::quadrature::DEFAULT_QUADRATURE_N).unwrap();
        let c = estimate_constant(&t, Extrapolation::Quadratic).unwrap();
        Outcome { pass: (c - 0.462638).abs() <= 1e-3, detail: format!("estimate {c:.6} vs 3π²/64 = {ELLIPSE_CONSTANT:.6} ± 1e-3") }
    });

    let mut route_a = f64::NAN;
    ok &= report("5a", "linearized route to the asymptotic constant", Duration::from_secs(120), || {
        route_a = minimize_asymptotic(12, 1).unwrap().value;
        let rel = (route_a - HALL_CONSTANT).abs() / HALL_CONSTANT;
        Outcome { pass: rel <= 0.02, detail: format!("J_min(K=12) {route_a:.7}, relative error {:.3}% (tol 2%)", 100.0 * rel) }
    });

    let mut recovery = None;
    ok &= report("5b", "recovery-sequence route to the asymptotic constant", Duration::from_secs(600), || {
        let run = recovery_sequence(&[0.2, 0.1, 0.05], &SelectionConfig::new(0.2, 8), Extrapolation::Quadratic).unwrap();
        let qb = run.extrapolated_qb;
        let rel = (qb - HALL_CONSTANT).abs() / HALL_CONSTANT;
        let detail = format!(
            "extrapolated {qb:.6} (two-point {:.6}), relative error {:.3}% (tol 3%)",
            run.two_point_qb,
            100.0 * rel
        );
        recovery = Some(run);
        Outcome { pass: rel <= 0.03, detail }
    });

    ok &= report("5c", "strict separation from the ellipse constant", Duration::from_secs(1), || {
        let qb = recovery.as_ref().map_or(f64::NAN, |r| r.extrapolated_qb);
        let limit = ELLIPSE_CONSTANT - 0.003;
        Outcome { pass: route_a <= limit && qb <= limit, detail: format!("routes {route_a:.6}, {qb:.6} vs limit {limit:.6}") }
    });

    ok &= report("6", "nearly-circular deficit estimate", Duration::from_secs(60), || {
        let trials = fuglede_trials(200, 0.05, 7, isoq::quadrature::DEFAULT_QUADRATURE_N).unwrap();
        let passed = trials.iter().filter(|t| t.pass).count();
        let min_margin = trials.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
        let eta_ok = (FUGLEDE_ETA - 0.1).abs() < 1e-15;
        Outcome { pass: passed == 200 && eta_ok, detail: format!("{passed}/200 pass, min margin {min_margin:.3e}") }
    });

    ok &= report("7", "quantitative isoperimetric inequality on the corpus", Duration::from_secs(120), || {
        let rep = qii_property_suite(&default_corpus(isoq::quadrature::DEFAULT_QUADRATURE_N).unwrap());
        let qii = rep.rows.iter().all(|r| r.deficit >= 0.4 * r.asymmetry * r.asymmetry);
        Outcome {
            pass: rep.min_quotient >= 0.45 && qii,
            detail: format!("{} shapes, min quotient {:.5}, δP ≥ 0.4α² on all: {qii}", rep.rows.len(), rep.min_quotient),
        }
    });

    ok &= report("8", "invariance and Lipschitz suite", Duration::from_secs(60), || {
        let corpus = default_corpus(isoq::quadrature::DEFAULT_QUADRATURE_N).unwrap();
        let (mut rot, mut dil) = (0.0f64, 0.0f64);
        for c in corpus.iter().filter(|c| c.name.starts_with("ellipse") || c.name.starts_with("fourier-1")) {
            let Shape::Star(s) = &c.shape else { continue };
            let base = measure(s).unwrap();
            for shift in [1, 37, s.n() / 4] {
                let m = measure(&s.rotate_nodes(shift).unwrap()).unwrap();
                rot = rot.max((m.0 - base.0).abs()).max((m.1 - base.1).abs()).max((m.2 - base.2).abs() * base.1 * base.1);
            }
            let m = measure(&s.scaled(1.7).unwrap().normalize_volume().unwrap()).unwrap();
            dil = dil.max((m.0 - base.0).abs()).max((m.1 - base.1).abs()).max((m.2 - base.2).abs() * base.1 * base.1);
        }
        let pairs = lipschitz_bump_pairs(50, 11, isoq::quadrature::DEFAULT_QUADRATURE_N).unwrap();
        let lip = pairs.iter().filter(|p| p.pass).count();
        Outcome {
            pass: rot <= 1e-9 && dil <= 1e-8 && lip == 50,
            detail: format!("rotation drift {rot:.1e} (tol 1e-9), dilation drift {dil:.1e} (tol 1e-8), Lipschitz {lip}/50"),
        }
    });

    ok &= report("9", "curvature trend along the recovery sequence", Duration::from_secs(1), || {
        let Some(run) = recovery.as_ref() else {
            return Outcome { pass: false, detail: "no recovery run".into() };
        };
        let devs: Vec<f64> = run.results.iter().map(|r| r.curvature_max_dev).collect();
        let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
        let last = *devs.last().unwrap();
        Outcome {
            pass: decreasing && last <= 0.5,
            detail: format!("‖κ−1‖∞ {:?}, strictly decreasing {decreasing}, final ≤ 0.5 {}", devs.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>(), last <= 0.5),
        }
    });

    // reported only; see the module docs
    if let Some(run) = recovery.as_ref() {
        let last = run.results.last().unwrap();
        let (observed, bound) = curvature_oscillation_bound(last, last.alpha_target);
        let ratio = observed / bound;
        println!(
            "{} [9-diagnostic] curvature oscillation vs first-variation bound: observed {observed:.4}, bound {bound:.4}, ratio {ratio:.2} (tol 1.5, not asserted)",
            if ratio <= 1.5 { "PASS" } else { "FAIL" }
        );
    }

    if !ok {
        std::process::exit(1);
    }
}
