use std::f64::consts::{FRAC_PI_2, PI, TAU};

use curvedwave::geometry::{complexify, constraint_residual, embed, unembed, unit_modulus_residual};
use curvedwave::operators::{apply_hamiltonian, local_steps, p3_chart};
use curvedwave::specfun::{hyp2f1, principal_power, Hyp2F1Params};
use curvedwave::verify::{GridOverrides, SuiteConfig, Tolerances};
use curvedwave::waves::{alpha_from_epsilon, dispersion_residual, make_plane_wave, SpectrumFamily};
use curvedwave::{Branch, ChartId, ChartPoint, Complex64, Family, Orientation, Space};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(re, im)| c(re, im))
}

/// Complex value at least 0.3 away from every non-positive integer.
fn safe_c() -> impl Strategy<Value = Complex64> {
    complex(4.0).prop_filter("near a pole", |v| {
        let n = v.re.round();
        !(n <= 0.0 && c(v.re - n, v.im).norm() < 0.3) && !(v.re < -0.5 && v.im.abs() < 0.3)
    })
}

fn disk(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..TAU).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

fn interior_point() -> impl Strategy<Value = ChartPoint> {
    let h3 = (0.1..3.0, 0.0..TAU, -2.0..2.0);
    let s3 = (0.05..FRAC_PI_2 - 0.05, 0.0..TAU, -PI + 0.01..PI - 0.01);
    let complex_chart = (0.05..3.0, 0.0..TAU, 0.0..TAU);
    prop_oneof![
        h3.clone()
            .prop_map(|(a, b, c)| ChartPoint::new(ChartId::H3Cylindrical, [a, b, c]).unwrap()),
        h3.prop_map(|(a, b, c)| ChartPoint::new(ChartId::H3Horospherical, [a, b, c]).unwrap()),
        s3.prop_map(|(a, b, c)| ChartPoint::new(ChartId::S3Cylindrical, [a, b, c]).unwrap()),
        complex_chart.prop_map(|(a, b, c)| ChartPoint::new(ChartId::S3ComplexHorospherical, [a, b, c]).unwrap()),
    ]
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Terms `(a)_k (b)_k / ((c)_k k!) x^k` with every Pochhammer symbol rebuilt
/// from scratch for each term.
fn brute_terms(n: usize, b: Complex64, cc: Complex64, x: Complex64) -> Vec<Complex64> {
    let a = c(-(n as f64), 0.0);
    let poch = |v: Complex64, k: usize| (0..k).fold(c(1.0, 0.0), |acc, j| acc * (v + j as f64));
    let factorial = |k: usize| (1..=k).fold(1.0, |acc, j| acc * j as f64);
    (0..=n)
        .map(|k| poch(a, k) * poch(b, k) / (poch(cc, k) * factorial(k)) * x.powu(k as u32))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn embedding_satisfies_quadric(p in interior_point()) {
        let q = embed(&p);
        prop_assert!(q.constraint_residual() <= 1e-12, "{:?}: {}", p, q.constraint_residual());
    }

    #[test]
    fn unembed_inverts_embed(p in interior_point()) {
        let back = unembed(&embed(&p), p.chart()).unwrap();
        prop_assert!(!back.degenerate);
        let (x, y) = (p.coords(), back.point.coords());
        let periodic = p.chart().periodic_axes();
        for i in 0..3 {
            let gap = if periodic[i] { angle_gap(x[i], y[i]) } else { (x[i] - y[i]).abs() };
            prop_assert!(gap <= 1e-10, "{:?} -> {:?}", x, y);
        }
    }

    #[test]
    fn complexified_pair_meets_constraint(a in 0.0..3.0f64, b in 0.0..TAU) {
        let pair = complexify(a, b).unwrap();
        prop_assert!(constraint_residual(&pair) <= 1e-12);
        prop_assert!(unit_modulus_residual(&pair) <= 1e-12);
    }

    #[test]
    fn gauss_contiguous_relation(a in complex(3.0), b in complex(3.0), cc in safe_c(), x in disk(0.5)) {
        let f = |a: Complex64, b: Complex64, cc: Complex64| hyp2f1(&Hyp2F1Params::new(a, b, cc), x).unwrap();
        let terms = [
            cc * (1.0 - x) * f(a, b, cc),
            -cc * f(a - 1.0, b, cc),
            (cc - b) * x * f(a, b, cc + 1.0),
        ];
        let scale: f64 = terms.iter().map(|t| t.norm()).sum::<f64>().max(1.0);
        let sum: Complex64 = terms.iter().sum();
        prop_assert!(sum.norm() / scale <= 1e-10, "{}", sum.norm() / scale);
    }

    #[test]
    fn terminating_series_matches_brute_force(n in 0usize..12, b in complex(3.0), cc in safe_c(), x in complex(2.0)) {
        let got = hyp2f1(&Hyp2F1Params::new(c(-(n as f64), 0.0), b, cc), x).unwrap();
        let terms = brute_terms(n, b, cc, x);
        let want: Complex64 = terms.iter().sum();
        // Measured against the summed term moduli, the scale of any
        // cancellation between terms.
        let magnitude = terms.iter().map(|t| t.norm()).sum::<f64>();
        prop_assert!((got - want).norm() <= 1e-14 * magnitude, "{got} vs {want}");
    }

    #[test]
    fn zero_upper_parameter_gives_one(b in complex(5.0), cc in safe_c(), x in complex(5.0)) {
        prop_assert_eq!(hyp2f1(&Hyp2F1Params::new(c(0.0, 0.0), b, cc), x).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn principal_powers_add_exponents(
        m in 0.1..5.0f64,
        t in -FRAC_PI_2 + 1e-3..FRAC_PI_2 - 1e-3,
        a in complex(2.0),
        b in complex(2.0),
    ) {
        let base = Complex64::from_polar(m, t);
        let whole = principal_power(base, a + b).unwrap();
        let split = principal_power(base, a).unwrap() * principal_power(base, b).unwrap();
        prop_assert!((whole - split).norm() <= 1e-13 * whole.norm().max(1.0));
    }

    #[test]
    fn constructed_waves_close_dispersion(
        fi in 0usize..4,
        plus in any::<bool>(),
        oplus in any::<bool>(),
        eps in 0.5..20.0f64,
    ) {
        let family = Family::PLANE[fi];
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let orientation = if oplus { Orientation::Plus } else { Orientation::Minus };
        let w = make_plane_wave(family, orientation, eps, branch).unwrap();
        let alpha = w.alpha();
        prop_assert!(dispersion_residual(family.space(), alpha, eps).norm() <= 1e-12 * alpha.norm_sqr().max(1.0));
        prop_assert_eq!(alpha, alpha_from_epsilon(family, eps, branch).unwrap());
    }

    #[test]
    fn hamiltonian_is_linear(
        p in interior_point(),
        ka in complex(2.0),
        kb in complex(2.0),
        eps in 0.6..3.0f64,
    ) {
        let family = Family::plane_on(p.chart());
        let w1 = make_plane_wave(family, Orientation::Plus, eps, Branch::Plus).unwrap();
        let w2 = make_plane_wave(family, Orientation::Minus, eps + 0.7, Branch::Minus).unwrap();
        let step = 1e-3;
        let combo = |x: [f64; 3]| ka * w1.eval(x) + kb * w2.eval(x);
        let h1 = apply_hamiltonian(p.chart(), &|x| w1.eval(x), &p, step).unwrap();
        let h2 = apply_hamiltonian(p.chart(), &|x| w2.eval(x), &p, step).unwrap();
        let hc = apply_hamiltonian(p.chart(), &combo, &p, step).unwrap();
        // Floating-point stencils are linear up to roundoff in the sampled
        // values, amplified by 1/h^2.
        let h = local_steps(p.chart(), p.coords(), step).into_iter().fold(f64::INFINITY, f64::min);
        let inputs = (ka * w1.eval(p.coords())).norm() + (kb * w2.eval(p.coords())).norm();
        let err = (hc - ka * h1 - kb * h2).norm() / (inputs / (h * h));
        prop_assert!(err <= 1e-10, "{:?} {err:e}", p);
    }

    #[test]
    fn p3_is_linear(
        p in interior_point().prop_filter("P3 chart", |p| p.chart() != ChartId::S3Cylindrical),
        ka in complex(2.0),
        kb in complex(2.0),
        eps in 0.6..3.0f64,
    ) {
        let family = Family::plane_on(p.chart());
        let w1 = make_plane_wave(family, Orientation::Plus, eps, Branch::Plus).unwrap();
        let w2 = make_plane_wave(family, Orientation::Minus, eps + 0.7, Branch::Minus).unwrap();
        let combo = |x: [f64; 3]| ka * w1.eval(x) + kb * w2.eval(x);
        let step = 1e-3;
        let p1 = p3_chart(p.chart(), &|x| w1.eval(x), &p, step).unwrap();
        let p2 = p3_chart(p.chart(), &|x| w2.eval(x), &p, step).unwrap();
        let pc = p3_chart(p.chart(), &combo, &p, step).unwrap();
        let scale = (ka * p1).norm() + (kb * p2).norm();
        prop_assert!((pc - ka * p1 - kb * p2).norm() <= 1e-10 * scale, "{:?}", p);
    }

    #[test]
    fn s3_physical_waves_are_periodic(n in 1u32..8, oplus in any::<bool>(), x in interior_point()) {
        let orientation = if oplus { Orientation::Plus } else { Orientation::Minus };
        let eps = f64::from(n * n - 1) / 2.0;
        for family in [Family::S3CylPlane, Family::S3ComplexPlane] {
            let w = make_plane_wave(family, orientation, eps, Branch::Plus).unwrap();
            let mut y = x.coords();
            if x.chart() != family.chart() {
                y = [0.3 + 0.1 * y[0].min(1.0), y[1], 1.0];
            }
            let axis = if family == Family::S3CylPlane { 2 } else { 1 };
            let mut shifted = y;
            shifted[axis] += TAU;
            let (a, b) = (w.eval(y), w.eval(shifted));
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn complex_chart_orientations_are_conjugate(n in 1u32..8, a in 0.05..3.0f64, b in 0.0..TAU, phi in 0.0..TAU) {
        let eps = f64::from(n * n - 1) / 2.0;
        let minus = make_plane_wave(Family::S3ComplexPlane, Orientation::Minus, eps, Branch::Plus).unwrap();
        let plus = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, eps, Branch::Plus).unwrap();
        let x = [a, b, phi];
        prop_assert!((plus.eval(x) - minus.eval(x).conj()).norm() <= 1e-12 * plus.eval(x).norm().max(1.0));
    }

    #[test]
    fn names_round_trip(ci in 0usize..4, fi in 0usize..6, si in 0usize..2) {
        let chart = ChartId::ALL[ci];
        prop_assert_eq!(chart.to_string().parse::<ChartId>().unwrap(), chart);
        let families = [
            Family::H3CylPlane, Family::S3CylPlane, Family::H3HoroPlane,
            Family::S3ComplexPlane, Family::H3Sov, Family::S3Sov,
        ];
        let family = families[fi];
        prop_assert_eq!(family.to_string().parse::<Family>().unwrap(), family);
        let space = [Space::Hyperbolic, Space::Spherical][si];
        prop_assert_eq!(space.to_string().parse::<Space>().unwrap(), space);
        for o in Orientation::BOTH {
            prop_assert_eq!(o.to_string().parse::<Orientation>().unwrap(), o);
        }
        for b in Branch::BOTH {
            prop_assert_eq!(b.to_string().parse::<Branch>().unwrap(), b);
        }
    }

    #[test]
    fn suite_config_round_trips(
        seed in any::<u64>(),
        count in 2usize..40,
        margin in 0.0..0.2f64,
        tol in 1e-12..1e-3f64,
        step in 1e-4..1e-2f64,
        use_filter in any::<bool>(),
    ) {
        let config = SuiteConfig {
            charts: use_filter.then(|| vec![ChartId::H3Horospherical, ChartId::S3Cylindrical]),
            families: use_filter.then(|| vec![Family::S3Sov]),
            seed,
            step,
            tolerances: Tolerances { finite_difference: tol, ..Tolerances::default() },
            grid: GridOverrides { count, margin },
            ..SuiteConfig::default()
        };
        let toml_text = toml::to_string(&config).unwrap();
        prop_assert_eq!(&SuiteConfig::from_toml_str(&toml_text, "t").unwrap(), &config, "{}", toml_text);
        let json_text = serde_json::to_string(&config).unwrap();
        prop_assert_eq!(&SuiteConfig::from_json_str(&json_text, "j").unwrap(), &config);
    }
}

#[test]
fn spectrum_family_names_round_trip() {
    for family in [SpectrumFamily::CylPlane, SpectrumFamily::ComplexPlane] {
        assert_eq!(family.to_string().parse::<SpectrumFamily>().unwrap(), family);
    }
}
