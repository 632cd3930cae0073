//! The individual checks behind the suite. Every check takes a relative
//! `perturb` that is applied to its key input, so that a nonzero value must
//! make it fail.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{grid_report, nan_max, GridSpec, Metadata, ResidualReport};
use crate::error::{Error, Result};
use crate::geometry::{
    closed_form_metric, complexify, constraint_residual, metric_in_variables, unit_modulus_residual, ChartId, Space,
    VariableSet,
};
use crate::operators::{
    apply_generator, apply_hamiltonian_in, commutator_residual, fit_commutator, Generator, OperatorSpec, QPoint,
};
use crate::specfun::{h3_radial_y_residual, radial_ode_residual};
use crate::waves::{
    alpha_from_epsilon, alternate_representation, classify_physical, flat_limit_eigenvalue, make_plane_wave,
    make_sov_solution, quantize_s3, reduce_to_plane_wave, solution_catalog, Branch, Family, Orientation, QPlaneWave,
    Reason, Sign, SpectrumFamily, Verdict,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `x (1 + p) + p`, which moves zero as well as nonzero values.
pub(crate) fn nudge(x: Complex64, p: f64) -> Complex64 {
    x * (1.0 + p) + p
}

fn summary(name: String, residual: f64, tol: f64, meta: Metadata) -> ResidualReport {
    ResidualReport::new(name, residual, residual, tol, meta)
}

/// Metric of the complex chart in `(a, b, phi)` against the `(z, z*)` or
/// `(r, r*)` metric carried back through the analytic Jacobian.
pub fn variable_set_consistency(variables: VariableSet, samples: usize, seed: u64, tol: f64) -> Result<ResidualReport> {
    variable_set_check(variables, samples, seed, tol, 0.0)
}

pub(crate) fn variable_set_check(
    variables: VariableSet,
    samples: usize,
    seed: u64,
    tol: f64,
    perturb: f64,
) -> Result<ResidualReport> {
    let chart = ChartId::S3ComplexHorospherical;
    let points = GridSpec::default_for(chart, 2).random_points(samples, seed)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for p in &points {
        let [a, b, _] = p.coords();
        // jac[i][k] = d(old variable i) / d(a, b, phi)_k
        let jac = match variables {
            VariableSet::ZZstar => [[one, I, zero], [one, -I, zero], [zero, zero, one]],
            VariableSet::RRstar => {
                let r = complexify(a, b)?.r;
                let e = (2.0 * a).exp();
                let da = e / (2.0 * a).exp_m1();
                [
                    [r * da, I * r, zero],
                    [r.conj() * da, -I * r.conj(), zero],
                    [zero, zero, one],
                ]
            }
            other => return Err(Error::domain(format!("no chain rule check for {other}"))),
        };
        let back = metric_in_variables(p, variables)?
            .scaled(1.0 + perturb)
            .transformed(&jac, VariableSet::AB);
        worst = nan_max(worst, closed_form_metric(p).relative_deviation(&back));
    }
    let meta = Metadata {
        detail: Some(format!("{variables} vs a_b, {samples} samples, seed {seed}")),
        ..Metadata::default()
    };
    Ok(summary(format!("metric_variables/{variables}"), worst, tol, meta))
}

/// Constraint `r^2 = e^{z - z*} - e^{2z}` and `|e^{2z} + r^2| = 1` on a
/// `count x count` grid of `(a, b)`.
pub(crate) fn constraint_check(count: usize, tol: f64, perturb: f64) -> Result<ResidualReport> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        for j in 0..count {
            let a = 3.0 * i as f64 / (count - 1) as f64;
            let b = TAU * j as f64 / count as f64;
            let mut pair = complexify(a, b)?;
            pair.r *= 1.0 + perturb;
            worst = nan_max(worst, constraint_residual(&pair).max(unit_modulus_residual(&pair)));
        }
    }
    let meta = Metadata {
        detail: Some(format!("{count}x{count} grid, a in [0, 3], b in [0, 2pi)")),
        ..Metadata::default()
    };
    Ok(summary(
        "complex_constraint/s3_complex_horospherical".into(),
        worst,
        tol,
        meta,
    ))
}

/// `max |Op psi - lambda psi| / max |psi|` for a q-space generator at the
/// given points, with the fitted median eigenvalue.
pub fn q_eigen_residual(
    op: &OperatorSpec,
    wave: &QPlaneWave,
    expected: Complex64,
    points: &[QPoint],
    tol: f64,
) -> Result<ResidualReport> {
    let f = |q: [f64; 3]| wave.eval(q);
    let samples: Vec<(Complex64, Complex64, Complex64)> = points
        .par_iter()
        .map(|q| {
            let v = wave.eval(q.q());
            let o = apply_generator(op, &f, q)?;
            Ok((o - expected * v, v, o))
        })
        .collect::<Result<_>>()?;
    let max_abs = samples.iter().map(|s| s.0.norm()).fold(0.0, nan_max);
    let max_psi = samples.iter().map(|s| s.1.norm()).fold(0.0, nan_max);
    let meta = Metadata {
        family: Some(format!("q_plane_{}", wave.space)),
        alpha: Some(wave.alpha),
        epsilon: Some(wave.epsilon),
        step: Some(op.step),
        detail: Some(format!("expected eigenvalue {expected}")),
    };
    let mut report = ResidualReport::new(
        format!("eigen/q_momentum/{}", wave.space),
        max_abs,
        max_abs / max_psi,
        tol,
        meta,
    );
    report.fitted_eigenvalue = super::median_ratio(&samples);
    Ok(report)
}

pub(crate) fn random_q_points(space: Space, samples: usize, seed: u64, half_width: f64) -> Result<Vec<QPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| QPoint::new(space, [0; 3].map(|_| rng.random_range(-half_width..=half_width))))
        .collect()
}

/// The complex-chart plane waves evaluated through `(z, z*)` or `(r, r*)`
/// and through the holomorphic `(r, z)` form, against the chart evaluator.
pub(crate) fn representation_check(
    variables: VariableSet,
    orientation: Orientation,
    epsilon: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    perturb: f64,
) -> Result<ResidualReport> {
    let chart = ChartId::S3ComplexHorospherical;
    let points = GridSpec::default_for(chart, 2).random_points(samples, seed)?;
    let (mut worst_abs, mut worst_psi): (f64, f64) = (0.0, 0.0);
    for branch in Branch::BOTH {
        let w = make_plane_wave(Family::S3ComplexPlane, orientation, epsilon, branch)?;
        let rep = alternate_representation(&w, variables)?;
        for p in &points {
            let x = p.coords();
            let direct = w.eval(x);
            let via = rep.try_eval(x)? * (1.0 + perturb);
            let pair = complexify(x[0], x[1])?;
            let holo = w
                .eval_rz(pair.r, pair.z)
                .ok_or_else(|| Error::domain("complex-chart wave lacks an (r, z) form"))?;
            worst_abs = nan_max(worst_abs, (via - direct).norm().max((holo - direct).norm()));
            worst_psi = worst_psi.max(direct.norm());
        }
    }
    let meta = Metadata {
        family: Some(format!("s3_complex_plane n{orientation}")),
        epsilon: Some(epsilon),
        detail: Some(format!(
            "{variables} and (r, z) forms vs chart form, both branches, {samples} samples"
        )),
        ..Metadata::default()
    };
    Ok(ResidualReport::new(
        format!("representation/{variables}/n{orientation}"),
        worst_abs,
        worst_abs / worst_psi,
        tol,
        meta,
    ))
}

/// The complex-chart Hamiltonian in `variables` against the `(a, b, phi)`
/// form on a grid, applied to a plane wave modulated in `phi`.
pub(crate) fn hamiltonian_forms_check(
    variables: VariableSet,
    grid: &GridSpec,
    step: f64,
    tol: f64,
    perturb: f64,
) -> Result<ResidualReport> {
    let chart = ChartId::S3ComplexHorospherical;
    let w = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, 1.5, Branch::Plus)?;
    let f = |x: [f64; 3]| w.eval(x) * (1.0 + 0.3 * x[2].cos());
    let name = format!("hamiltonian_forms/{variables}_vs_a_b");
    let mut meta = Metadata::for_wave(&w, step);
    meta.detail = Some("psi = Psi+ (1 + 0.3 cos phi)".into());
    let local = step / super::wave_scale(&w);
    grid_report(&name, grid, step, tol, meta, |p| {
        let ab = apply_hamiltonian_in(chart, VariableSet::AB, &f, p, local)?;
        let other = apply_hamiltonian_in(chart, variables, &f, p, local)? * (1.0 + perturb);
        Ok((other - ab, f(p.coords()), other))
    })
}

/// Exponent choices on H3 that make `A` or `B` vanish.
fn h3_reduction_cases(epsilon: f64) -> Vec<(Sign, Complex64)> {
    let s = (2.0 * epsilon - 1.0).sqrt();
    vec![
        (Sign::Plus, Complex64::new(-1.0, -s)),
        (Sign::Plus, Complex64::new(-1.0, s)),
        (Sign::Minus, Complex64::new(1.0, s)),
        (Sign::Minus, Complex64::new(1.0, -s)),
    ]
}

/// Separated solutions with `m = 0` and `A = 0` or `B = 0` against the plane
/// wave they reduce to, pointwise and in the implied `alpha(eps)`.
pub(crate) fn sov_reduction_check(
    space: Space,
    samples: usize,
    seed: u64,
    tol: f64,
    perturb: f64,
) -> Result<ResidualReport> {
    let mut cases = Vec::new();
    match space {
        Space::Hyperbolic => {
            for eps in [0.6, 1.0, 2.5] {
                for (sign_b, alpha) in h3_reduction_cases(eps) {
                    cases.push(make_sov_solution(space, 0, alpha, eps, Sign::Plus, sign_b)?);
                }
            }
        }
        Space::Spherical => {
            for alpha in -3i32..=3 {
                let k = alpha.unsigned_abs() as f64;
                // A = 0 with b = |alpha|: N = |alpha| + 1.
                let eps = ((k + 1.0) * (k + 1.0) - 1.0) / 2.0;
                cases.push(make_sov_solution(
                    space,
                    0,
                    f64::from(alpha).into(),
                    eps,
                    Sign::Plus,
                    Sign::Plus,
                )?);
                if k >= 2.0 {
                    // B = 0 with b = -|alpha|: N = |alpha| - 1.
                    let eps = ((k - 1.0) * (k - 1.0) - 1.0) / 2.0;
                    cases.push(make_sov_solution(
                        space,
                        0,
                        f64::from(alpha).into(),
                        eps,
                        Sign::Plus,
                        Sign::Minus,
                    )?);
                }
            }
        }
    }
    let chart = match space {
        Space::Hyperbolic => ChartId::H3Cylindrical,
        Space::Spherical => ChartId::S3Cylindrical,
    };
    let points = GridSpec::default_for(chart, 2).random_points(samples, seed)?;
    let mut worst: f64 = 0.0;
    for s in &cases {
        let w = reduce_to_plane_wave(s)
            .ok_or_else(|| Error::domain(format!("separated solution with A B = 0 did not reduce: {:?}", s.hyp())))?;
        let branch = w
            .branch()
            .ok_or_else(|| Error::domain(format!("reduced alpha {} matches no dispersion root", w.alpha())))?;
        let implied = alpha_from_epsilon(w.family(), w.epsilon(), branch)?;
        let w = crate::waves::WaveFunction::from_alpha(
            w.family(),
            w.orientation(),
            nudge(w.alpha(), perturb),
            w.epsilon(),
        )?;
        worst = nan_max(worst, (w.alpha() - implied).norm());
        for p in &points {
            let sov = s.try_eval(p.coords())?;
            let plane = w.eval(p.coords());
            worst = nan_max(worst, (sov - plane).norm() / sov.norm().max(1.0));
        }
    }
    let meta = Metadata {
        detail: Some(format!("{} reductions, {samples} points each", cases.len())),
        ..Metadata::default()
    };
    Ok(summary(format!("sov_reduction/{space}"), worst, tol, meta))
}

/// Radial equation residuals of separated solutions: quantized S3 solutions
/// in `rho`, and non-terminating H3 solutions in `y = cosh^2 r` on `(0, 1)`.
pub(crate) fn sov_ode_check(space: Space, step: f64, tol: f64, perturb: f64) -> Result<ResidualReport> {
    let mut solutions = Vec::new();
    match space {
        Space::Spherical => {
            let rows = quantize_s3(SpectrumFamily::Sov { m_max: 3, alpha_max: 3 }, 3)?;
            // Ten levels spread across the table.
            for row in rows.iter().step_by(rows.len() / 10).take(10) {
                let (m, alpha) = (row.m.unwrap_or(0), row.alpha_z.unwrap_or(0));
                solutions.push(make_sov_solution(
                    space,
                    i64::from(m),
                    f64::from(alpha).into(),
                    row.epsilon_f64(),
                    Sign::Plus,
                    Sign::Plus,
                )?);
            }
        }
        Space::Hyperbolic => {
            for (m, alpha, eps) in [
                (0, Complex64::new(0.3, 0.7), 1.2),
                (1, Complex64::new(-1.0, 0.5), 0.8),
                (2, Complex64::new(0.0, 1.5), 3.0),
            ] {
                for sign_b in Sign::BOTH {
                    solutions.push(make_sov_solution(space, m, alpha, eps, Sign::Plus, sign_b)?);
                }
            }
        }
    }
    let mut worst_abs: f64 = 0.0;
    let mut worst_val: f64 = 0.0;
    for s in &solutions {
        let eps = nudge(s.epsilon().into(), perturb).re;
        let step = step / s.alpha().norm().max(s.m().abs() as f64).max(1.0);
        let radial = |x: f64| s.radial(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        for k in 1..20 {
            let (res, val) = match space {
                Space::Spherical => {
                    let rho = 0.05 + (FRAC_PI_2 - 0.1) * k as f64 / 20.0;
                    let h = step * rho.min(FRAC_PI_2 - rho).min(1.0);
                    let res = radial_ode_residual(space, s.m(), s.alpha(), eps, radial, rho, h)?;
                    (res, radial(rho))
                }
                Space::Hyperbolic => {
                    let y = k as f64 / 20.0;
                    if (y - 1.0).abs() < 0.05 {
                        continue;
                    }
                    let h = step * y.min((1.0 - y).abs()).min(1.0);
                    let res = h3_radial_y_residual(s.m(), s.alpha(), eps, radial, y, h)?;
                    (res, radial(y))
                }
            };
            worst_abs = nan_max(worst_abs, res.norm());
            worst_val = worst_val.max(val.norm());
        }
    }
    let meta = Metadata {
        step: Some(step),
        detail: Some(format!("{} separated solutions", solutions.len())),
        ..Metadata::default()
    };
    Ok(ResidualReport::new(
        format!("sov_ode/{space}"),
        worst_abs,
        worst_abs / worst_val,
        tol,
        meta,
    ))
}

/// Full Schrodinger residual of evaluable separated solutions on the grid.
pub(crate) fn sov_hamiltonian_check(
    space: Space,
    grid: &GridSpec,
    step: f64,
    tol: f64,
    perturb: f64,
) -> Result<ResidualReport> {
    let chart = grid.chart;
    let solution = match space {
        Space::Hyperbolic => {
            // A = -1 with a = 1/2, b = alpha/2: alpha = -4 - i sqrt(2 eps - 1).
            let eps = 1.5;
            let alpha = Complex64::new(-4.0, -(2.0 * eps - 1.0_f64).sqrt());
            make_sov_solution(space, 1, alpha, eps, Sign::Plus, Sign::Plus)?
        }
        Space::Spherical => make_sov_solution(space, 1, Complex64::new(2.0, 0.0), 17.5, Sign::Plus, Sign::Plus)?,
    };
    let w = solution.to_wave()?;
    let eps = nudge(w.epsilon().into(), perturb).re;
    let mut report = super::schrodinger_residual(chart, &w, eps, grid, step, tol)?;
    report.name = format!("sov_schrodinger/{space}");
    let (ea, eb) = solution.exponents();
    report.metadata.detail = Some(format!("m = {}, exponents ({ea}, {eb})", solution.m()));
    Ok(report)
}

/// Rational check of a quantization table: `N^2 = 2 eps + 1` and both listed
/// roots solve `alpha^2 + 2 alpha - 2 eps = 0` (plane families), or
/// `N = |m| + |alpha| + 1 + 2n` with a polynomial of degree `n` (separated).
pub(crate) fn quantization_check(family: SpectrumFamily, n_max: u32, perturb: f64) -> Result<ResidualReport> {
    let rows = quantize_s3(family, n_max)?;
    let mut mismatches = 0usize;
    for row in &rows {
        let eps = if perturb == 0.0 {
            row.epsilon
        } else {
            row.epsilon * Ratio::new(1000 + (perturb * 1000.0).round() as i64, 1000)
        };
        let big_n = i64::from(row.big_n);
        if Ratio::from_integer(big_n * big_n) != eps * 2 + 1 {
            mismatches += 1;
        }
        match family {
            SpectrumFamily::CylPlane | SpectrumFamily::ComplexPlane => {
                for alpha in [row.alpha_plus, row.alpha_minus] {
                    if Ratio::from_integer(alpha * alpha + 2 * alpha) != eps * 2 {
                        mismatches += 1;
                    }
                }
            }
            SpectrumFamily::Sov { .. } => {
                let (m, alpha) = (row.m.unwrap_or(0), row.alpha_z.unwrap_or(0));
                if row.big_n != m + alpha + 1 + 2 * row.n {
                    mismatches += 1;
                }
                let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
                let s = make_sov_solution(
                    Space::Spherical,
                    i64::from(m),
                    f64::from(alpha).into(),
                    eps_f,
                    Sign::Plus,
                    Sign::Plus,
                )?;
                if s.hyp().terminating_degree() != Some(row.n as usize) {
                    mismatches += 1;
                }
            }
        }
    }
    let meta = Metadata {
        detail: Some(format!("{} rows, mismatches counted", rows.len())),
        ..Metadata::default()
    };
    let count = mismatches as f64;
    Ok(summary(format!("quantization/{family}"), count, 0.0, meta))
}

/// Two-point check that the flat-space eigenvalue error falls like `1/rho`:
/// the error ratio between `rho = 1e3` and `1e6` is within 10% of 1000.
pub(crate) fn flat_limit_check(space: Space, tol: f64, perturb: f64) -> Result<ResidualReport> {
    let (energy, mass): (f64, f64) = (1.0, 1.0);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for branch in Branch::BOTH {
        let limit = branch.sign() * (2.0 * energy * mass).sqrt() * (1.0 + perturb);
        let err =
            |rho: f64| -> Result<f64> { Ok((flat_limit_eigenvalue(space, energy, mass, rho, branch)? - limit).norm()) };
        let ratio = err(1e3)? / err(1e6)?;
        detail.push(format!("branch{branch}: {ratio:.1}"));
        worst = nan_max(worst, (ratio / 1e3 - 1.0).abs());
    }
    let meta = Metadata {
        detail: Some(format!("error ratio rho=1e3 vs 1e6: {}", detail.join(", "))),
        ..Metadata::default()
    };
    Ok(summary(format!("flat_limit/{space}"), worst, tol, meta))
}

/// Classification of the S3 plane-wave catalog against the rule: physical
/// exactly when `alpha` is a non-negative integer, rejected at `rho = pi/2`
/// or `a -> infinity` otherwise.
pub(crate) fn classification_check(n_max: u32, perturb: f64) -> Result<ResidualReport> {
    let catalog = solution_catalog(n_max)?;
    let mut mismatches = 0usize;
    for entry in &catalog {
        let w = crate::waves::WaveFunction::from_alpha(
            entry.family,
            entry.orientation,
            nudge(entry.alpha, perturb),
            entry.epsilon,
        )?;
        let c = classify_physical(&w);
        let physical = entry.alpha.re >= 0.0;
        let expected_reason = match (physical, entry.family) {
            (true, _) => Reason::Ok,
            (false, Family::S3CylPlane) => Reason::DivergesAtRhoPi2,
            (false, _) => Reason::GrowthAtAInfinity,
        };
        let expected_verdict = if physical { Verdict::Physical } else { Verdict::Rejected };
        if c.verdict != expected_verdict || c.reason != expected_reason {
            mismatches += 1;
        }
    }
    let meta = Metadata {
        detail: Some(format!("{} catalog entries, mismatches counted", catalog.len())),
        ..Metadata::default()
    };
    Ok(summary("classification/s3_plane".into(), mismatches as f64, 0.0, meta))
}

/// Smooth test functions for the commutator fits.
pub(crate) fn test_functions() -> Vec<Box<dyn Fn([f64; 3]) -> Complex64 + Sync>> {
    let mut out: Vec<Box<dyn Fn([f64; 3]) -> Complex64 + Sync>> = vec![Box::new(|q: [f64; 3]| {
        let q2: f64 = q.iter().map(|v| v * v).sum();
        Complex64::new((-q2).exp() * (1.0 + q[0] * q[2]), 0.0)
    })];
    let dirs = [
        [0.7, -0.2, 0.4],
        [-0.3, 0.9, 0.1],
        [0.2, 0.3, -0.8],
        [0.5, 0.5, 0.5],
        [-0.6, 0.1, 0.7],
        [0.1, -0.7, -0.4],
        [0.9, 0.0, -0.3],
        [-0.2, -0.4, 0.6],
    ];
    for (k, c) in dirs.into_iter().enumerate() {
        let phase = 0.3 * k as f64;
        out.push(Box::new(move |q: [f64; 3]| {
            let t: f64 = c.iter().zip(q).map(|(a, b)| a * b).sum();
            Complex64::new(t, phase * t * t).exp()
        }));
    }
    out
}

/// Fit every commutator of the six generators on a few points and verify the
/// fitted expansion at ten others.
pub(crate) fn lie_closure_check(space: Space, seed: u64, step: f64, tol: f64, perturb: f64) -> Result<ResidualReport> {
    let fns = test_functions();
    let refs: Vec<&(dyn Fn([f64; 3]) -> Complex64 + Sync)> = fns.iter().map(|f| f.as_ref()).collect();
    let fit_points = [
        [0.15, -0.1, 0.2],
        [-0.2, 0.25, 0.05],
        [0.05, 0.2, -0.25],
        [-0.1, -0.15, -0.1],
    ]
    .into_iter()
    .map(|q| QPoint::new(space, q))
    .collect::<Result<Vec<_>>>()?;
    let checks = random_q_points(space, 10, seed, 0.4)?;
    let basis = Generator::basis();
    let mut worst: f64 = 0.0;
    let mut p1p2 = Complex64::new(0.0, 0.0);
    for i in 0..6 {
        for j in (i + 1)..6 {
            let fit = fit_commutator(basis[i], basis[j], &fit_points, &refs, step)?;
            if (i, j) == (0, 1) {
                p1p2 = fit.coefficients[5];
            }
            let expansion: Vec<_> = fit
                .expansion()
                .into_iter()
                .map(|(c, g)| (c * (1.0 + perturb), g))
                .collect();
            for q in &checks {
                for f in &refs {
                    let r = commutator_residual(basis[i], basis[j], &expansion, *f, q, step)?;
                    worst = nan_max(worst, r);
                }
            }
        }
    }
    let meta = Metadata {
        step: Some(step),
        detail: Some(format!("[P1, P2] = ({:.6}) L3", p1p2)),
        ..Metadata::default()
    };
    Ok(summary(format!("lie_closure/{space}"), worst, tol, meta))
}
