use isoq::experiments::{default_corpus, qii_property_suite};
use isoq::metrics::{self, AsymmetrySearchConfig};
use isoq::selection::{minimize_penalized, minimize_penalized_from, SelectionConfig};
use isoq::shapes::{make_ellipse, Shape, StarShape};
use isoq::spectral::{analyze, FourierCoeffs};
use isoq::{Vec2, ELLIPSE_CONSTANT};
use proptest::prelude::*;
use std::f64::consts::PI;

fn profile(coeffs: &[f64], scale: f64) -> FourierCoeffs {
    let mut u = FourierCoeffs::zeros(coeffs.len() / 2 + 1);
    for (i, pair) in coeffs.chunks(2).enumerate() {
        let k = i + 2;
        u.set(k, scale * pair[0] / (k * k) as f64, scale * pair[1] / (k * k) as f64);
    }
    u
}

fn star(coeffs: &[f64], scale: f64) -> StarShape {
    StarShape::from_fourier_with(profile(coeffs, scale), 512).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symdiff_triangle_inequality(
        a in prop::collection::vec(-1.0f64..1.0, 8),
        b in prop::collection::vec(-1.0f64..1.0, 8),
        c in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let (a, b, c) = (star(&a, 0.3), star(&b, 0.3), star(&c, 0.3));
        let ab = metrics::star_symdiff(&a, &b).unwrap();
        let ac = metrics::star_symdiff(&a, &c).unwrap();
        let cb = metrics::star_symdiff(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-9);
    }

    #[test]
    fn normalization_is_idempotent(c in prop::collection::vec(-1.0f64..1.0, 8), k in 0.5f64..2.0) {
        let s = star(&c, 0.3).scaled(k).unwrap().normalize_volume().unwrap();
        prop_assert!((s.area() - PI).abs() < 1e-12);
        let again = s.normalize_volume().unwrap();
        for (x, y) in s.radii().iter().zip(again.radii()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_round_trip(c in prop::collection::vec(-1.0f64..1.0, 6), x in -0.2f64..0.2, y in -0.2f64..0.2) {
        let s = StarShape::from_fourier_with(profile(&c, 0.2), 256).unwrap();
        let back = s.translate(Vec2::new(x, y)).unwrap().translate(Vec2::new(-x, -y)).unwrap();
        for (p, q) in s.radii().iter().zip(back.radii()) {
            prop_assert!((p - q).abs() < 1e-8);
        }
    }

    #[test]
    fn coefficients_survive_shape_round_trip(c in prop::collection::vec(-1.0f64..1.0, 10)) {
        let u = profile(&c, 0.3);
        let s = StarShape::from_fourier_with(u.clone(), 256).unwrap();
        let r: Vec<f64> = s.radii().iter().map(|v| v - 1.0).collect();
        let back = analyze(&r, 64).unwrap();
        for k in 0..=u.degree() {
            prop_assert!((back.a(k) - u.a(k)).abs() < 1e-12 && (back.b(k) - u.b(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_is_second_mode_to_first_order(eps in 0.001f64..0.2) {
        let e = make_ellipse(eps).unwrap();
        let dev = (0..e.n())
            .map(|i| (e.radii()[i] - 1.0 - eps * (2.0 * e.node(i)).cos()).abs())
            .fold(0.0, f64::max);
        prop_assert!(dev <= 2.0 * eps * eps, "{dev}");
    }

    #[test]
    fn asymmetry_never_exceeds_any_start(c in prop::collection::vec(-1.0f64..1.0, 6)) {
        let s = star(&c, 0.4).normalize_volume().unwrap();
        let cfg = AsymmetrySearchConfig::default();
        let a = metrics::asymmetry(&s, &cfg).unwrap();
        for x in &cfg.starts {
            prop_assert!(a.value <= metrics::symdiff_with_ball(&s, *x).unwrap() / PI);
        }
        prop_assert!(a.value >= -1e-10 && a.value < 2.0);
    }
}

#[test]
fn corpus_ranges_and_consistency() {
    let corpus = default_corpus(1024).unwrap();
    let cfg = AsymmetrySearchConfig::default();
    for c in &corpus {
        let d = metrics::deficit(&c.shape).unwrap();
        let a = metrics::asymmetry(&c.shape, &cfg).unwrap().value;
        assert!(d > 1e-8, "{}: {d}", c.name);
        assert!((0.0..2.0).contains(&a), "{}: {a}", c.name);
        assert_eq!(metrics::quotient_from(d, a).unwrap(), d / (a * a));
    }
    let circle = Shape::Star(StarShape::circle());
    assert!(metrics::deficit(&circle).unwrap().abs() <= 1e-8);
}

#[test]
fn sharp_form_on_corpus() {
    let rep = qii_property_suite(&default_corpus(1024).unwrap());
    assert!(rep.all_pass);
    let checked = rep.rows.iter().filter(|r| r.hall_pass.is_some()).count();
    assert!(checked >= 30, "{checked}");
    assert!(rep.min_quotient >= 0.45);
}

#[test]
fn polygon_and_star_adapter_agree() {
    let p = isoq::shapes::make_regular_polygon(6).unwrap();
    let s = isoq::shapes::polygon_to_star(&p).unwrap().normalize_volume().unwrap();
    let cfg = AsymmetrySearchConfig::default();
    let ap = metrics::asymmetry(&p, &cfg).unwrap().value;
    let as_ = metrics::asymmetry(&s, &cfg).unwrap().value;
    assert!((ap - as_).abs() < 1e-4, "{ap} vs {as_}");
    // the adapter is for overlap integrals; its spectral perimeter rings at the corners
    assert!((metrics::symdiff_with_ball(&p, Vec2::ZERO).unwrap() - metrics::symdiff_with_ball(&s, Vec2::ZERO).unwrap()).abs() < 1e-4);
}

#[test]
fn selection_quotients_stay_in_band() {
    let cfg = SelectionConfig { restarts: 1, ..SelectionConfig::new(0.2, 4) };
    let r = minimize_penalized(&cfg).unwrap();
    assert!(r.q_value >= 0.45 && r.q_value <= ELLIPSE_CONSTANT + 0.01, "{}", r.q_value);
    assert!(r.penalty <= 1e-3, "{}", r.penalty);

    // one more free mode, warm-started from the optimum above
    let wider = SelectionConfig { restarts: 1, ..SelectionConfig::new(0.2, 5) };
    let r5 = minimize_penalized_from(&wider, &r.coeffs).unwrap();
    assert!(r5.q_value + r5.penalty <= r.q_value + r.penalty + 1e-9);
}

#[test]
fn selection_configs_reject_bad_input() {
    assert!(matches!(minimize_penalized(&SelectionConfig::new(0.0, 8)), Err(isoq::Error::Config(_))));
    assert!(matches!(minimize_penalized(&SelectionConfig::new(0.1, 1)), Err(isoq::Error::Config(_))));
}
