//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;

use curvedwave::geometry::{complexify, constraint_residual, unit_modulus_residual};
use curvedwave::operators::{
    commutator_residual, fit_commutator, Generator, OperatorDomain, OperatorKind, OperatorSpec, QPoint,
    COMMUTATOR_STEP, DEFAULT_STEP,
};
use curvedwave::specfun::{hyp2f1, radial_ode_residual, Hyp2F1Params};
use curvedwave::verify::{
    eigen_residual, metric_consistency, q_eigen_residual, registry, run_check, CheckKind, GridSpec, SuiteConfig,
};
use curvedwave::waves::{
    make_plane_wave, make_sov_solution, quantize_s3, solution_catalog, QPlaneWave, Reason, Sign, SpectrumFamily,
    Verdict,
};
use curvedwave::{Branch, ChartId, Complex64, Family, Orientation, Space};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Complex64 = Complex64::new(0.0, 1.0);

struct Outcome {
    pass: bool,
    detail: String,
}

/// Failing items, or nothing when there are none.
fn issues(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", items.join(", "))
    }
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Run every registry check matching `select` and summarise them.
fn registry_checks(select: impl Fn(&CheckKind) -> bool) -> (bool, usize, f64, Vec<String>) {
    let config = SuiteConfig::default();
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    let mut count = 0;
    for spec in registry(&config).iter().filter(|s| select(&s.kind)) {
        let r = run_check(spec, &config);
        count += 1;
        worst = if r.relative_residual.is_nan() {
            f64::NAN
        } else {
            worst.max(r.relative_residual)
        };
        if !r.pass {
            failed.push(format!("{} ({:.3e})", r.name, r.relative_residual));
        }
    }
    (failed.is_empty() && count > 0, count, worst, failed)
}

fn plane_wave_residuals() -> Outcome {
    let (pass, count, worst, failed) =
        registry_checks(|k| matches!(k, CheckKind::Schrodinger { family, .. } if family.is_plane()));
    let families = Family::PLANE.len() * 2 * 2;
    Outcome::new(
        pass && count >= families,
        format!(
            "{count} family/orientation/branch/energy cases, worst {worst:.2e} <= 1e-6{}",
            issues(&failed)
        ),
    )
}

fn eigenvalues() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (family, epsilon) in [(Family::H3HoroPlane, 1.0), (Family::S3ComplexPlane, 1.5)] {
        let chart = family.chart();
        let op = OperatorSpec::new(OperatorKind::P3, OperatorDomain::Chart(chart), DEFAULT_STEP).unwrap();
        let grid = GridSpec::default_for(chart, 20);
        for orientation in Orientation::BOTH {
            for branch in Branch::BOTH {
                let w = make_plane_wave(family, orientation, epsilon, branch).unwrap();
                let stated = match orientation {
                    Orientation::Minus => I * w.alpha(),
                    Orientation::Plus => -I * w.alpha(),
                };
                let r = eigen_residual(&op, &w, stated, &grid, 1e-8).unwrap();
                let fitted = r.fitted_eigenvalue.unwrap_or(Complex64::new(f64::NAN, 0.0));
                let gap = (fitted - stated).norm();
                if !(gap <= 1e-8 && r.pass) {
                    pass = false;
                    notes.push(format!(
                        "{family} n{orientation} branch{branch}: |fit - stated| = {gap:.2e}"
                    ));
                }
            }
        }
    }
    let wave = QPlaneWave::new(Space::Hyperbolic, [0.0, 0.0, 1.0], 2.0, Branch::Plus).unwrap();
    let op = OperatorSpec::new(
        OperatorKind::MomentumComponent { n: [0.0, 0.0, 1.0] },
        OperatorDomain::QSpace(Space::Hyperbolic),
        DEFAULT_STEP,
    )
    .unwrap();
    let points: Vec<QPoint> = (0..50)
        .map(|k| {
            let t = k as f64;
            QPoint::new(
                Space::Hyperbolic,
                [0.3 * (0.7 * t).sin(), 0.3 * (1.3 * t).cos(), 0.3 * (0.4 * t).sin()],
            )
            .unwrap()
        })
        .collect();
    let expected = -I * wave.alpha;
    let r = q_eigen_residual(&op, &wave, expected, &points, 1e-6).unwrap();
    let q_gap = (r.fitted_eigenvalue.unwrap_or(Complex64::new(f64::NAN, 0.0)) - expected).norm();
    if !(q_gap <= 1e-6 && r.pass) {
        pass = false;
        notes.push(format!(
            "q-space: |fit + i alpha| = {q_gap:.2e}, residual {:.2e}",
            r.relative_residual
        ));
    }
    Outcome::new(
        pass,
        format!(
            "P3 on h3_horo and s3_complex, 8 waves within 1e-8; q-space {q_gap:.2e}{}",
            issues(&notes)
        ),
    )
}

fn quantization() -> Outcome {
    let mut bad = Vec::new();
    for family in [SpectrumFamily::CylPlane, SpectrumFamily::ComplexPlane] {
        let rows = quantize_s3(family, 10).unwrap();
        let ns: Vec<u32> = rows.iter().map(|r| r.n).collect();
        if ns != (1..=10).collect::<Vec<_>>() {
            bad.push(format!("{family}: levels {ns:?}"));
        }
        for row in &rows {
            let n = i64::from(row.n);
            if row.epsilon != Ratio::new(n * n - 1, 2) {
                bad.push(format!("{family} n={n}: eps {}", row.epsilon));
            }
        }
    }
    for family in [Family::S3CylPlane, Family::S3ComplexPlane] {
        for orientation in Orientation::BOTH {
            let ground = make_plane_wave(family, orientation, 0.0, Branch::Plus).unwrap();
            for x in [[0.3, 1.0, 0.5], [1.2, 4.0, 2.0]] {
                if ground.eval(x) != Complex64::new(1.0, 0.0) {
                    bad.push(format!("{family} ground state is not 1 at {x:?}"));
                }
            }
        }
    }
    let rows = quantize_s3(SpectrumFamily::Sov { m_max: 3, alpha_max: 3 }, 3).unwrap();
    for m in 0..=3u32 {
        for alpha in 0..=3u32 {
            for n in 0..=3u32 {
                let big_n = i64::from(m + alpha + 1 + 2 * n);
                let want = Ratio::new(big_n * big_n - 1, 2);
                let found = rows
                    .iter()
                    .any(|r| r.m == Some(m) && r.alpha_z == Some(alpha) && r.n == n && r.epsilon == want);
                if !found {
                    bad.push(format!("sov (m={m}, alpha={alpha}, n={n}) missing eps {want}"));
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("plane n=1..10 and 64 separated levels exact{}", issues(&bad)),
    )
}

fn classification() -> Outcome {
    let catalog = solution_catalog(10).unwrap();
    let mut agree = 0;
    let mut bad = Vec::new();
    for e in &catalog {
        let accepted = e.alpha.re >= 0.0;
        let ok = if accepted {
            e.verdict == Verdict::Physical && e.reason == Reason::Ok
        } else {
            let reason = match e.family {
                Family::S3CylPlane => Reason::DivergesAtRhoPi2,
                _ => Reason::GrowthAtAInfinity,
            };
            e.verdict == Verdict::Rejected && e.reason == reason
        };
        if ok {
            agree += 1;
        } else {
            bad.push(format!(
                "{} n{} branch{} n={}: {:?}",
                e.family, e.orientation, e.branch, e.n, e.reason
            ));
        }
    }
    let total = catalog.len();
    Outcome::new(
        agree == total && total == 80,
        format!("{agree}/{total} catalog entries agree{}", issues(&bad)),
    )
}

fn geometry() -> Outcome {
    let mut worst_metric: f64 = 0.0;
    let mut pass = true;
    for chart in ChartId::ALL {
        let r = metric_consistency(chart, 100, 11, 1e-8).unwrap();
        pass &= r.pass;
        worst_metric = worst_metric.max(r.relative_residual);
    }
    let mut worst_constraint: f64 = 0.0;
    for i in 0..50 {
        for j in 0..50 {
            let a = 3.0 * i as f64 / 49.0;
            let b = TAU * j as f64 / 50.0;
            let pair = complexify(a, b).unwrap();
            worst_constraint = worst_constraint
                .max(constraint_residual(&pair))
                .max(unit_modulus_residual(&pair));
        }
    }
    pass &= worst_constraint <= 1e-12;
    Outcome::new(
        pass,
        format!(
            "metric {worst_metric:.2e} <= 1e-8 on 4 charts; constraint/unit modulus {worst_constraint:.2e} <= 1e-12"
        ),
    )
}

fn sov_reduction() -> Outcome {
    let (pass, count, worst, failed) = registry_checks(|k| matches!(k, CheckKind::SovReduction { .. }));
    Outcome::new(
        pass && count == 2,
        format!("H3 and S3 reductions, worst {worst:.2e} <= 1e-10{}", issues(&failed)),
    )
}

fn representations() -> Outcome {
    let (p1, c1, w1, f1) = registry_checks(|k| matches!(k, CheckKind::Representation { .. }));
    let (p2, c2, w2, f2) = registry_checks(|k| matches!(k, CheckKind::HamiltonianForms { .. }));
    Outcome::new(
        p1 && p2 && c1 == 4 && c2 >= 1,
        format!(
            "pointwise {w1:.2e} <= 1e-10; (a,b) vs (z,z*) Hamiltonian {w2:.2e} <= 1e-6{}{}",
            issues(&f1),
            issues(&f2)
        ),
    )
}

fn flat_limit() -> Outcome {
    let (pass, count, worst, failed) = registry_checks(|k| matches!(k, CheckKind::FlatLimit { .. }));
    Outcome::new(
        pass && count == 2,
        format!(
            "H3 and S3, both signs, ratio off 1e3 by at most {:.2}%{}",
            100.0 * worst,
            issues(&failed)
        ),
    )
}

fn pochhammer(v: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (v + j as f64))
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cplx = |rng: &mut ChaCha8Rng, r: f64| Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r));
    let mut notes = Vec::new();

    let mut exact = true;
    for _ in 0..20 {
        let (b, c, x) = (cplx(&mut rng, 4.0), cplx(&mut rng, 4.0) + 5.0, cplx(&mut rng, 3.0));
        exact &= hyp2f1(&Hyp2F1Params::new(Complex64::new(0.0, 0.0), b, c), x).unwrap() == Complex64::new(1.0, 0.0);
    }
    if !exact {
        notes.push("F(0,B,C;x) != 1".to_string());
    }

    let mut worst_poly: f64 = 0.0;
    for n in 0..12usize {
        let (b, c, x) = (cplx(&mut rng, 3.0), cplx(&mut rng, 3.0) + 4.5, cplx(&mut rng, 1.5));
        let a = Complex64::new(-(n as f64), 0.0);
        let terms: Vec<Complex64> = (0..=n)
            .map(|k| {
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                pochhammer(a, k) * pochhammer(b, k) / (pochhammer(c, k) * fact) * x.powu(k as u32)
            })
            .collect();
        let brute: Complex64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        let got = hyp2f1(&Hyp2F1Params::new(a, b, c), x).unwrap();
        worst_poly = worst_poly.max((got - brute).norm() / scale);
    }
    if worst_poly > 1e-14 {
        notes.push(format!("polynomial {worst_poly:.2e}"));
    }

    let mut worst_contig: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (cplx(&mut rng, 3.0), cplx(&mut rng, 3.0));
        let c = cplx(&mut rng, 3.0) + 4.0;
        let x = Complex64::from_polar(rng.random_range(0.0..0.5), rng.random_range(0.0..TAU));
        let f = |a: Complex64, b: Complex64, c: Complex64| hyp2f1(&Hyp2F1Params::new(a, b, c), x).unwrap();
        let terms = [
            c * (1.0 - x) * f(a, b, c),
            -c * f(a - 1.0, b, c),
            (c - b) * x * f(a, b, c + 1.0),
        ];
        let scale = terms.iter().map(|t| t.norm()).sum::<f64>().max(1.0);
        worst_contig = worst_contig.max(terms.iter().sum::<Complex64>().norm() / scale);
    }
    if worst_contig > 1e-10 {
        notes.push(format!("contiguity {worst_contig:.2e}"));
    }

    let rows = quantize_s3(SpectrumFamily::Sov { m_max: 3, alpha_max: 3 }, 3).unwrap();
    let mut worst_ode: f64 = 0.0;
    let mut solved = 0;
    for row in rows.iter().step_by(rows.len() / 10).take(10) {
        let (m, alpha) = (i64::from(row.m.unwrap()), f64::from(row.alpha_z.unwrap()));
        let s = make_sov_solution(
            Space::Spherical,
            m,
            alpha.into(),
            row.epsilon_f64(),
            Sign::Plus,
            Sign::Plus,
        )
        .unwrap();
        let radial = |rho: f64| s.radial(rho).unwrap();
        let scale = alpha.max(m as f64).max(1.0);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for k in 1..20 {
            let rho = 0.05 + (PI / 2.0 - 0.1) * k as f64 / 20.0;
            let h = 6e-3 / scale * rho.min(PI / 2.0 - rho);
            let res = radial_ode_residual(Space::Spherical, m, alpha.into(), s.epsilon(), radial, rho, h).unwrap();
            num = num.max(res.norm());
            den = den.max(radial(rho).norm());
        }
        worst_ode = worst_ode.max(num / den);
        solved += 1;
    }
    if !(worst_ode <= 1e-6 && solved == 10) {
        notes.push(format!("radial ODE {worst_ode:.2e} over {solved}"));
    }
    Outcome::new(
        notes.is_empty(),
        format!(
            "F(0,B,C;x)=1; polynomial {worst_poly:.1e}; contiguity {worst_contig:.1e} (100 draws); radial ODE {worst_ode:.1e} (10 levels){}", issues(&notes)
        ),
    )
}

fn smooth_functions() -> Vec<Box<dyn Fn([f64; 3]) -> Complex64 + Sync>> {
    let mut out: Vec<Box<dyn Fn([f64; 3]) -> Complex64 + Sync>> = Vec::new();
    for (k, c) in [[0.5, -0.3, 0.2], [-0.2, 0.6, 0.4], [0.3, 0.1, -0.7], [0.4, 0.4, 0.4]]
        .into_iter()
        .enumerate()
    {
        let w = 0.2 + 0.1 * k as f64;
        out.push(Box::new(move |q: [f64; 3]| {
            let t: f64 = c.iter().zip(q).map(|(a, b)| a * b).sum();
            let q2: f64 = q.iter().map(|v| v * v).sum();
            Complex64::new(t - w * q2, w * t).exp()
        }));
    }
    out
}

fn lie_closure() -> Outcome {
    let (pass, count, worst, failed) = registry_checks(|k| matches!(k, CheckKind::LieClosure { .. }));
    let fns = smooth_functions();
    let refs: Vec<&(dyn Fn([f64; 3]) -> Complex64 + Sync)> = fns.iter().map(|f| f.as_ref()).collect();
    let mut coefficient = Vec::new();
    let mut verify_worst: f64 = 0.0;
    for space in [Space::Hyperbolic, Space::Spherical] {
        let fit_at: Vec<QPoint> = [[0.1, 0.2, -0.1], [-0.25, 0.05, 0.15], [0.2, -0.2, 0.25]]
            .into_iter()
            .map(|q| QPoint::new(space, q).unwrap())
            .collect();
        let fit = fit_commutator(Generator::p(0), Generator::p(1), &fit_at, &refs, COMMUTATOR_STEP).unwrap();
        coefficient.push(fit.coefficients[5]);
        for k in 0..10 {
            let t = k as f64;
            let q = QPoint::new(
                space,
                [0.3 * (1.1 * t).cos(), 0.3 * (0.7 * t).sin(), 0.25 * (1.9 * t).cos()],
            )
            .unwrap();
            for f in &refs {
                let r = commutator_residual(
                    Generator::p(0),
                    Generator::p(1),
                    &fit.expansion(),
                    *f,
                    &q,
                    COMMUTATOR_STEP,
                )
                .unwrap();
                verify_worst = verify_worst.max(r);
            }
        }
    }
    let (h, s) = (coefficient[0], coefficient[1]);
    let unit = (h.norm() - 1.0).abs() < 1e-4 && (s.norm() - 1.0).abs() < 1e-4;
    let flipped = (h + s).norm() < 1e-4;
    Outcome::new(
        pass && count == 2 && unit && flipped && verify_worst <= 1e-4,
        format!(
            "15 commutators per model, worst {worst:.1e} <= 1e-4; [P1,P2] = ({h:.6}) L3 on H3, ({s:.6}) L3 on S3{}",
            issues(&failed)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("plane-wave Schrodinger residuals", plane_wave_residuals),
        ("eigenvalue reproduction", eigenvalues),
        ("quantization tables", quantization),
        ("physicality classification", classification),
        ("geometry", geometry),
        ("separated-solution reduction", sov_reduction),
        ("representation equivalence", representations),
        ("flat-space limit", flat_limit),
        ("special functions", special_functions),
        ("Lie-algebra closure", lie_closure),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2}. {name}: {}", k + 1, outcome.detail);
        if !outcome.pass {
            failures += 1;
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
