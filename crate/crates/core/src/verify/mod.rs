//! Verification harness: grids over chart interiors, residual reports, and
//! the configurable suite that aggregates every check.

mod checks;
mod output;
mod suite;

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{closed_form_metric, pullback_metric, ChartId, ChartPoint, MetricTensor, DEFAULT_PULLBACK_STEP};
use crate::operators::{
    apply_hamiltonian_in, apply_p3, radial_step, OperatorDomain, OperatorKind, OperatorSpec, INTERIOR_STEPS,
};
use crate::waves::WaveFunction;

pub use checks::{q_eigen_residual, variable_set_consistency};
pub use output::{render_table, write_csv, write_json, write_outputs, SuiteDocument, Summary};
pub use suite::{
    plane_energies, registry, run_check, run_suite, CheckKind, CheckSpec, GridOverrides, OutputPaths, SuiteConfig,
    Tolerances,
};

/// Seed used when a configuration does not name one.
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;
/// Points per axis in default grids.
pub const DEFAULT_COUNT: usize = 20;
/// Default clearance from singular loci.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Axis { min, max, count }
    }

    fn value(&self, k: usize) -> f64 {
        self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64
    }
}

/// A tensor-product grid on one chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub chart: ChartId,
    pub axes: [Axis; 3],
    /// Minimum distance of every grid point from the chart's singular loci.
    pub margin: f64,
}

impl GridSpec {
    /// The default interior grid with `count` points per axis.
    pub fn default_for(chart: ChartId, count: usize) -> Self {
        let axes = match chart {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => [
                Axis::new(0.1, 3.0, count),
                Axis::new(0.0, 6.0, count),
                Axis::new(-2.0, 2.0, count),
            ],
            ChartId::S3Cylindrical => [
                Axis::new(0.05, FRAC_PI_2 - 0.05, count),
                Axis::new(0.0, 6.0, count),
                Axis::new(-2.0, 2.0, count),
            ],
            ChartId::S3ComplexHorospherical => [
                Axis::new(0.05, 3.0, count),
                Axis::new(0.0, 6.2, count),
                Axis::new(0.0, 6.0, count),
            ],
        };
        GridSpec {
            chart,
            axes,
            margin: DEFAULT_MARGIN,
        }
    }

    /// Check the grid shape and that every point keeps `max(margin, 10 step)`
    /// away from the singular loci.
    pub fn validate(&self, step: f64) -> Result<()> {
        for (name, axis) in self.chart.coordinate_names().iter().zip(&self.axes) {
            if axis.count < 2 {
                return Err(Error::domain(format!("grid axis {name} needs at least 2 points")));
            }
            if !(axis.min < axis.max) {
                return Err(Error::domain(format!(
                    "grid axis {name}: min {} must be below max {}",
                    axis.min, axis.max
                )));
            }
        }
        let closest = self
            .points()?
            .iter()
            .map(|p| p.singular_distance())
            .fold(f64::INFINITY, f64::min);
        let clearance = self.margin.max(INTERIOR_STEPS * radial_step(closest, step));
        if closest < clearance {
            return Err(Error::domain(format!(
                "grid on {} comes within {closest} of its singular loci ({}); need {clearance}",
                self.chart,
                self.chart.singular_loci()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in row-major order (last axis fastest).
    pub fn points(&self) -> Result<Vec<ChartPoint>> {
        let [a0, a1, a2] = self.axes;
        let mut out = Vec::with_capacity(self.len());
        for i in 0..a0.count {
            for j in 0..a1.count {
                for k in 0..a2.count {
                    out.push(ChartPoint::new(self.chart, [a0.value(i), a1.value(j), a2.value(k)])?);
                }
            }
        }
        Ok(out)
    }

    /// `samples` uniformly random points inside the grid's box.
    pub fn random_points(&self, samples: usize, seed: u64) -> Result<Vec<ChartPoint>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let x = self.axes.map(|a| rng.random_range(a.min..=a.max));
                ChartPoint::new(self.chart, x)
            })
            .collect()
    }
}

/// Parameters recorded alongside a residual.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Metadata {
    pub fn for_wave(w: &WaveFunction, step: f64) -> Self {
        let orientation = if w.family().is_plane() {
            format!(" n{}", w.orientation())
        } else {
            String::new()
        };
        let branch = w.branch().map(|b| format!(" branch{b}")).unwrap_or_default();
        Metadata {
            family: Some(format!("{}{orientation}{branch}", w.family())),
            alpha: Some(w.alpha()),
            epsilon: Some(w.epsilon()),
            step: Some(step),
            detail: None,
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub max_abs_residual: f64,
    pub relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub metadata: Metadata,
    /// Median of `(Op psi) / psi` over the grid, for eigenvalue checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_eigenvalue: Option<Complex64>,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, max_abs: f64, relative: f64, tolerance: f64, metadata: Metadata) -> Self {
        ResidualReport {
            name: name.into(),
            grid: None,
            max_abs_residual: max_abs,
            relative_residual: relative,
            tolerance,
            // NaN compares false, so non-finite residuals fail.
            pass: relative <= tolerance,
            metadata,
            fitted_eigenvalue: None,
        }
    }

    /// Report for a check that could not be evaluated at all.
    pub fn errored(name: impl Into<String>, tolerance: f64, err: &Error) -> Self {
        let metadata = Metadata {
            detail: Some(err.to_string()),
            ..Metadata::default()
        };
        ResidualReport::new(name, f64::NAN, f64::NAN, tolerance, metadata)
    }
}

/// Sample of `(Op psi - lambda psi, psi, Op psi)` at one point.
type Sample = (Complex64, Complex64, Complex64);

fn grid_report<F>(
    name: &str,
    grid: &GridSpec,
    step: f64,
    tol: f64,
    metadata: Metadata,
    sample: F,
) -> Result<ResidualReport>
where
    F: Fn(&ChartPoint) -> Result<Sample> + Sync,
{
    grid.validate(step)?;
    let points = grid.points()?;
    let samples: Vec<Sample> = points.par_iter().map(&sample).collect::<Result<_>>()?;
    let max_abs = samples.iter().map(|s| s.0.norm()).fold(0.0, nan_max);
    let max_psi = samples.iter().map(|s| s.1.norm()).fold(0.0, nan_max);
    let relative = if max_abs == 0.0 { 0.0 } else { max_abs / max_psi };
    let mut report = ResidualReport::new(name, max_abs, relative, tol, metadata);
    report.grid = Some(*grid);
    report.fitted_eigenvalue = median_ratio(&samples);
    Ok(report)
}

fn nan_max(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

fn median_ratio(samples: &[Sample]) -> Option<Complex64> {
    let ratios: Vec<Complex64> = samples
        .iter()
        .filter(|s| s.1.norm() > 0.0)
        .map(|s| s.2 / s.1)
        .filter(|r| r.re.is_finite() && r.im.is_finite())
        .collect();
    if ratios.is_empty() {
        return None;
    }
    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    };
    Some(Complex64::new(
        median(ratios.iter().map(|r| r.re).collect()),
        median(ratios.iter().map(|r| r.im).collect()),
    ))
}

/// `max |H psi - eps psi| / max |psi|` over the grid, with the Hamiltonian in
/// the chart's own variables. `step` is the step for a unit-scale wave and is
/// divided by [`wave_scale`].
pub fn schrodinger_residual(
    chart: ChartId,
    psi: &WaveFunction,
    epsilon: f64,
    grid: &GridSpec,
    step: f64,
    tol: f64,
) -> Result<ResidualReport> {
    let vars = match chart {
        ChartId::S3ComplexHorospherical => crate::geometry::VariableSet::AB,
        _ => crate::geometry::VariableSet::ChartReal,
    };
    schrodinger_residual_in(chart, vars, psi, epsilon, grid, step, tol)
}

/// Inverse length scale of a wave: `max(1, |alpha|, |m|)`. Finite-difference
/// steps are divided by it so every wave is sampled at the same resolution.
pub fn wave_scale(psi: &WaveFunction) -> f64 {
    let m = psi.sov().map_or(0.0, |s| s.m().abs() as f64);
    psi.alpha().norm().max(m).max(1.0)
}

/// [`schrodinger_residual`] with an explicit variable set for the operator.
pub fn schrodinger_residual_in(
    chart: ChartId,
    variables: crate::geometry::VariableSet,
    psi: &WaveFunction,
    epsilon: f64,
    grid: &GridSpec,
    step: f64,
    tol: f64,
) -> Result<ResidualReport> {
    if grid.chart != chart || psi.chart() != chart {
        return Err(Error::domain(format!(
            "chart mismatch: check on {chart}, grid on {}, wave on {}",
            grid.chart,
            psi.chart()
        )));
    }
    let f = |x: [f64; 3]| psi.eval(x);
    let name = format!("schrodinger/{chart}/{variables}");
    let mut meta = Metadata::for_wave(psi, step);
    meta.epsilon = Some(epsilon);
    let local = step / wave_scale(psi);
    grid_report(&name, grid, step, tol, meta, |p| {
        let h = apply_hamiltonian_in(chart, variables, &f, p, local)?;
        let v = psi.eval(p.coords());
        Ok((h - epsilon * v, v, h))
    })
}

/// `max |Op psi - lambda psi| / max |psi|` for a chart operator (Hamiltonian
/// or `P3`), with the median fitted eigenvalue.
pub fn eigen_residual(
    op: &OperatorSpec,
    psi: &WaveFunction,
    expected: Complex64,
    grid: &GridSpec,
    tol: f64,
) -> Result<ResidualReport> {
    let OperatorDomain::Chart(chart) = op.domain else {
        return Err(Error::domain("q-space generators are checked with q_eigen_residual"));
    };
    if grid.chart != chart {
        return Err(Error::domain(format!("operator on {chart}, grid on {}", grid.chart)));
    }
    let step = op.step;
    let f = |x: [f64; 3]| psi.eval(x);
    let (label, apply): (&str, Box<dyn Fn(&ChartPoint) -> Result<Complex64> + Sync>) = match op.kind {
        OperatorKind::Hamiltonian => (
            "hamiltonian",
            Box::new(move |p| crate::operators::apply_hamiltonian(chart, &f, p, step)),
        ),
        OperatorKind::P3 => ("p3", Box::new(move |p| apply_p3(chart, psi, p, step))),
        _ => return Err(Error::domain("generators act in q-space")),
    };
    let name = format!("eigen/{label}/{chart}");
    let mut meta = Metadata::for_wave(psi, step);
    meta.detail = Some(format!("expected eigenvalue {expected}"));
    grid_report(&name, grid, step, tol, meta, |p| {
        let v = psi.eval(p.coords());
        let o = apply(p)?;
        Ok((o - expected * v, v, o))
    })
}

/// Largest entrywise relative deviation between the finite-difference
/// pullback of the ambient metric and the closed form, over random interior
/// points of the default grid box.
pub fn metric_consistency(chart: ChartId, samples: usize, seed: u64, tol: f64) -> Result<ResidualReport> {
    metric_consistency_with(chart, samples, seed, tol, &closed_form_metric)
}

/// [`metric_consistency`] against a caller-supplied closed form.
pub fn metric_consistency_with(
    chart: ChartId,
    samples: usize,
    seed: u64,
    tol: f64,
    closed_form: &(dyn Fn(&ChartPoint) -> MetricTensor + Sync),
) -> Result<ResidualReport> {
    if samples == 0 {
        return Err(Error::domain("metric consistency needs at least one sample"));
    }
    let points = GridSpec::default_for(chart, 2).random_points(samples, seed)?;
    let devs: Vec<f64> = points
        .par_iter()
        .map(|p| Ok(pullback_metric(p, DEFAULT_PULLBACK_STEP)?.relative_deviation(&closed_form(p))))
        .collect::<Result<_>>()?;
    let worst = devs.into_iter().fold(0.0, nan_max);
    let meta = Metadata {
        step: Some(DEFAULT_PULLBACK_STEP),
        detail: Some(format!("{samples} samples, seed {seed}")),
        ..Metadata::default()
    };
    Ok(ResidualReport::new(format!("metric/{chart}"), worst, worst, tol, meta))
}
