use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    classification_check, constraint_check, flat_limit_check, hamiltonian_forms_check, lie_closure_check, nudge,
    q_eigen_residual, quantization_check, random_q_points, representation_check, sov_hamiltonian_check, sov_ode_check,
    sov_reduction_check, variable_set_check,
};
use super::{
    eigen_residual, metric_consistency_with, schrodinger_residual, GridSpec, ResidualReport, DEFAULT_COUNT,
    DEFAULT_MARGIN, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::geometry::{closed_form_metric, ChartId, ChartPoint, Space, VariableSet};
use crate::operators::{OperatorDomain, OperatorKind, OperatorSpec, COMMUTATOR_STEP, DEFAULT_STEP, HAMILTONIAN_STEP};
use crate::waves::{make_plane_wave, Branch, Family, Orientation, QPlaneWave, SpectrumFamily, WaveFunction};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative Schrodinger residuals and other finite-difference checks.
    pub finite_difference: f64,
    /// Chart `P3` eigenvalue residuals.
    pub eigenvalue: f64,
    /// q-space generator eigenvalue residuals.
    pub generator: f64,
    pub metric: f64,
    pub representation: f64,
    pub constraint: f64,
    pub reduction: f64,
    pub commutator: f64,
    /// Relative deviation of the flat-limit error ratio from 1000.
    pub flat_limit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            finite_difference: 1e-6,
            eigenvalue: 1e-8,
            generator: 1e-6,
            metric: 1e-8,
            representation: 1e-10,
            constraint: 1e-12,
            reduction: 1e-10,
            commutator: 1e-4,
            flat_limit: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOverrides {
    /// Points per axis.
    pub count: usize,
    pub margin: f64,
}

impl Default for GridOverrides {
    fn default() -> Self {
        GridOverrides {
            count: DEFAULT_COUNT,
            margin: DEFAULT_MARGIN,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Suite configuration, read from TOML or JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Run only checks whose home chart is listed.
    pub charts: Option<Vec<ChartId>>,
    /// Run only wave checks whose family is listed; other checks are kept.
    pub families: Option<Vec<Family>>,
    pub seed: u64,
    /// Finite-difference step for first-order operators.
    pub step: f64,
    /// Step for Hamiltonians and radial equations, for a unit-scale wave.
    pub hamiltonian_step: f64,
    /// Step for nested commutators.
    pub commutator_step: f64,
    pub tolerances: Tolerances,
    pub grid: GridOverrides,
    pub output: OutputPaths,
    /// Relative perturbation applied to every check's key input. Any nonzero
    /// value should make every check fail.
    pub perturbation: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            charts: None,
            families: None,
            seed: DEFAULT_SEED,
            step: DEFAULT_STEP,
            hamiltonian_step: HAMILTONIAN_STEP,
            commutator_step: COMMUTATOR_STEP,
            tolerances: Tolerances::default(),
            grid: GridOverrides::default(),
            output: OutputPaths::default(),
            perturbation: 0.0,
        }
    }
}

fn config_error(path: &str, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

impl SuiteConfig {
    /// Read a config file; `.json` files are parsed as JSON, anything else as
    /// TOML.
    pub fn from_path(path: &Path) -> Result<Self> {
        let label = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: label.clone(),
            message: e.to_string(),
        })?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json_str(&text, &label)
        } else {
            Self::from_toml_str(&text, &label)
        }
    }

    pub fn from_toml_str(text: &str, label: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| config_error(label, "<document>", e.to_string()))?;
        let config: SuiteConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| config_error(label, e.path().to_string(), e.inner().to_string()))?;
        config.validated(label)
    }

    pub fn from_json_str(text: &str, label: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: SuiteConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| config_error(label, e.path().to_string(), e.inner().to_string()))?;
        config.validated(label)
    }

    /// Check value ranges that the types alone do not enforce.
    pub fn validated(self, label: &str) -> Result<Self> {
        for (name, v) in [
            ("step", self.step),
            ("hamiltonian_step", self.hamiltonian_step),
            ("commutator_step", self.commutator_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_error(label, name, format!("must be positive, got {v}")));
            }
        }
        if self.grid.count < 2 {
            return Err(config_error(label, "grid.count", "needs at least 2 points per axis"));
        }
        if !(self.grid.margin >= 0.0) {
            return Err(config_error(label, "grid.margin", "must be non-negative"));
        }
        if !(self.perturbation.is_finite()) {
            return Err(config_error(label, "perturbation", "must be finite"));
        }
        let t = &self.tolerances;
        let named = [
            ("finite_difference", t.finite_difference),
            ("eigenvalue", t.eigenvalue),
            ("generator", t.generator),
            ("metric", t.metric),
            ("representation", t.representation),
            ("constraint", t.constraint),
            ("reduction", t.reduction),
            ("commutator", t.commutator),
            ("flat_limit", t.flat_limit),
        ];
        for (name, v) in named {
            if !(v >= 0.0) {
                return Err(config_error(
                    label,
                    format!("tolerances.{name}"),
                    "must be non-negative",
                ));
            }
        }
        Ok(self)
    }

    fn grid(&self, chart: ChartId) -> GridSpec {
        let mut g = GridSpec::default_for(chart, self.grid.count);
        g.margin = self.grid.margin;
        g
    }
}

/// One entry of the check registry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "check")]
pub enum CheckKind {
    Metric {
        chart: ChartId,
    },
    MetricVariables {
        variables: VariableSet,
    },
    ComplexConstraint,
    Schrodinger {
        family: Family,
        orientation: Orientation,
        branch: Branch,
        epsilon: f64,
    },
    P3Eigen {
        family: Family,
        orientation: Orientation,
        branch: Branch,
        epsilon: f64,
    },
    QMomentumEigen {
        space: Space,
    },
    Representation {
        variables: VariableSet,
        orientation: Orientation,
    },
    HamiltonianForms {
        variables: VariableSet,
    },
    SovReduction {
        space: Space,
    },
    SovOde {
        space: Space,
    },
    SovSchrodinger {
        space: Space,
    },
    Quantization {
        family: SpectrumFamily,
    },
    FlatLimit {
        space: Space,
    },
    Classification,
    LieClosure {
        space: Space,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: String,
    /// Chart the check belongs to, used by the chart filter.
    pub chart: ChartId,
    pub family: Option<Family>,
    pub kind: CheckKind,
}

fn cyl_chart(space: Space) -> ChartId {
    match space {
        Space::Hyperbolic => ChartId::H3Cylindrical,
        Space::Spherical => ChartId::S3Cylindrical,
    }
}

/// Energies swept for each plane family: a spread above the H3 floor, and
/// the S3 levels `n = 1, 2, 3, 5`.
pub fn plane_energies(family: Family) -> Vec<f64> {
    match family.space() {
        Space::Hyperbolic => vec![0.6, 1.0, 2.5],
        Space::Spherical => [1.0f64, 2.0, 3.0, 5.0].iter().map(|n| (n * n - 1.0) / 2.0).collect(),
    }
}

fn all_checks() -> Vec<(ChartId, Option<Family>, CheckKind)> {
    let mut out = Vec::new();
    for chart in ChartId::ALL {
        out.push((chart, None, CheckKind::Metric { chart }));
    }
    let complex = ChartId::S3ComplexHorospherical;
    for variables in [VariableSet::ZZstar, VariableSet::RRstar] {
        out.push((complex, None, CheckKind::MetricVariables { variables }));
    }
    out.push((complex, None, CheckKind::ComplexConstraint));
    for family in Family::PLANE {
        for epsilon in plane_energies(family) {
            for orientation in Orientation::BOTH {
                for branch in Branch::BOTH {
                    out.push((
                        family.chart(),
                        Some(family),
                        CheckKind::Schrodinger {
                            family,
                            orientation,
                            branch,
                            epsilon,
                        },
                    ));
                }
            }
        }
    }
    for (family, epsilon) in [
        (Family::H3CylPlane, 1.0),
        (Family::H3HoroPlane, 1.0),
        (Family::S3ComplexPlane, 1.5),
    ] {
        for orientation in Orientation::BOTH {
            for branch in Branch::BOTH {
                out.push((
                    family.chart(),
                    Some(family),
                    CheckKind::P3Eigen {
                        family,
                        orientation,
                        branch,
                        epsilon,
                    },
                ));
            }
        }
    }
    for space in [Space::Hyperbolic, Space::Spherical] {
        out.push((cyl_chart(space), None, CheckKind::QMomentumEigen { space }));
    }
    for variables in [VariableSet::ZZstar, VariableSet::RRstar] {
        for orientation in Orientation::BOTH {
            out.push((
                complex,
                Some(Family::S3ComplexPlane),
                CheckKind::Representation { variables, orientation },
            ));
        }
    }
    out.push((
        complex,
        Some(Family::S3ComplexPlane),
        CheckKind::HamiltonianForms {
            variables: VariableSet::ZZstar,
        },
    ));
    for space in [Space::Hyperbolic, Space::Spherical] {
        let sov = match space {
            Space::Hyperbolic => Family::H3Sov,
            Space::Spherical => Family::S3Sov,
        };
        out.push((cyl_chart(space), Some(sov), CheckKind::SovReduction { space }));
        out.push((cyl_chart(space), Some(sov), CheckKind::SovOde { space }));
        out.push((cyl_chart(space), Some(sov), CheckKind::SovSchrodinger { space }));
    }
    out.push((
        ChartId::S3Cylindrical,
        Some(Family::S3CylPlane),
        CheckKind::Quantization {
            family: SpectrumFamily::CylPlane,
        },
    ));
    out.push((
        complex,
        Some(Family::S3ComplexPlane),
        CheckKind::Quantization {
            family: SpectrumFamily::ComplexPlane,
        },
    ));
    out.push((
        ChartId::S3Cylindrical,
        Some(Family::S3Sov),
        CheckKind::Quantization {
            family: SpectrumFamily::Sov { m_max: 3, alpha_max: 3 },
        },
    ));
    for space in [Space::Hyperbolic, Space::Spherical] {
        out.push((cyl_chart(space), None, CheckKind::FlatLimit { space }));
    }
    out.push((ChartId::S3Cylindrical, None, CheckKind::Classification));
    for space in [Space::Hyperbolic, Space::Spherical] {
        out.push((cyl_chart(space), None, CheckKind::LieClosure { space }));
    }
    out
}

fn check_name(kind: &CheckKind) -> String {
    match kind {
        CheckKind::Metric { chart } => format!("metric/{chart}"),
        CheckKind::MetricVariables { variables } => format!("metric_variables/{variables}"),
        CheckKind::ComplexConstraint => "complex_constraint".into(),
        CheckKind::Schrodinger {
            family,
            orientation,
            branch,
            epsilon,
        } => {
            format!("schrodinger/{family}/n{orientation}/branch{branch}/eps={epsilon}")
        }
        CheckKind::P3Eigen {
            family,
            orientation,
            branch,
            epsilon,
        } => {
            format!("p3_eigen/{family}/n{orientation}/branch{branch}/eps={epsilon}")
        }
        CheckKind::QMomentumEigen { space } => format!("q_momentum_eigen/{space}"),
        CheckKind::Representation { variables, orientation } => format!("representation/{variables}/n{orientation}"),
        CheckKind::HamiltonianForms { variables } => format!("hamiltonian_forms/{variables}"),
        CheckKind::SovReduction { space } => format!("sov_reduction/{space}"),
        CheckKind::SovOde { space } => format!("sov_ode/{space}"),
        CheckKind::SovSchrodinger { space } => format!("sov_schrodinger/{space}"),
        CheckKind::Quantization { family } => format!("quantization/{family}"),
        CheckKind::FlatLimit { space } => format!("flat_limit/{space}"),
        CheckKind::Classification => "classification/s3_plane".into(),
        CheckKind::LieClosure { space } => format!("lie_closure/{space}"),
    }
}

/// The checks selected by `config`, in registry order.
pub fn registry(config: &SuiteConfig) -> Vec<CheckSpec> {
    all_checks()
        .into_iter()
        .filter(|(chart, family, _)| {
            config.charts.as_ref().is_none_or(|cs| cs.contains(chart))
                && match (family, &config.families) {
                    (Some(f), Some(fs)) => fs.contains(f),
                    _ => true,
                }
        })
        .map(|(chart, family, kind)| CheckSpec {
            name: check_name(&kind),
            chart,
            family,
            kind,
        })
        .collect()
}

/// Run one check. Failures to evaluate become failing reports.
pub fn run_check(spec: &CheckSpec, config: &SuiteConfig) -> ResidualReport {
    let tol = &config.tolerances;
    let p = config.perturbation;
    let step = config.step;
    let step2 = config.hamiltonian_step;
    let seed = config.seed;
    let result = match &spec.kind {
        CheckKind::Metric { chart } => {
            let closed = |pt: &ChartPoint| closed_form_metric(pt).scaled(1.0 + p);
            metric_consistency_with(*chart, 100, seed, tol.metric, &closed)
        }
        CheckKind::MetricVariables { variables } => variable_set_check(*variables, 100, seed, tol.metric, p),
        CheckKind::ComplexConstraint => constraint_check(50, tol.constraint, p),
        CheckKind::Schrodinger {
            family,
            orientation,
            branch,
            epsilon,
        } => make_plane_wave(*family, *orientation, *epsilon, *branch).and_then(|w| {
            let w = perturbed(&w, p)?;
            schrodinger_residual(
                family.chart(),
                &w,
                *epsilon,
                &config.grid(family.chart()),
                step2,
                tol.finite_difference,
            )
        }),
        CheckKind::P3Eigen {
            family,
            orientation,
            branch,
            epsilon,
        } => make_plane_wave(*family, *orientation, *epsilon, *branch).and_then(|w| {
            let chart = family.chart();
            let op = OperatorSpec::new(OperatorKind::P3, OperatorDomain::Chart(chart), step)?;
            let expected = nudge(w.p3_eigenvalue().expect("plane waves on these charts carry P3"), p);
            eigen_residual(&op, &w, expected, &config.grid(chart), tol.eigenvalue)
        }),
        CheckKind::QMomentumEigen { space } => {
            QPlaneWave::new(*space, [0.0, 0.0, 1.0], 2.0, Branch::Plus).and_then(|w| {
                let op = OperatorSpec::new(
                    OperatorKind::MomentumComponent { n: [0.0, 0.0, 1.0] },
                    OperatorDomain::QSpace(*space),
                    step,
                )?;
                let points = random_q_points(*space, 50, seed, 0.4)?;
                q_eigen_residual(&op, &w, nudge(w.eigenvalue(), p), &points, tol.generator)
            })
        }
        CheckKind::Representation { variables, orientation } => {
            representation_check(*variables, *orientation, 2.2, 50, seed, tol.representation, p)
        }
        CheckKind::HamiltonianForms { variables } => hamiltonian_forms_check(
            *variables,
            &config.grid(ChartId::S3ComplexHorospherical),
            step2,
            tol.finite_difference,
            p,
        ),
        CheckKind::SovReduction { space } => sov_reduction_check(*space, 20, seed, tol.reduction, p),
        CheckKind::SovOde { space } => sov_ode_check(*space, step2, tol.finite_difference, p),
        CheckKind::SovSchrodinger { space } => {
            sov_hamiltonian_check(*space, &config.grid(cyl_chart(*space)), step2, tol.finite_difference, p)
        }
        CheckKind::Quantization { family } => quantization_check(*family, 10, p),
        CheckKind::FlatLimit { space } => flat_limit_check(*space, tol.flat_limit, p),
        CheckKind::Classification => classification_check(10, p),
        CheckKind::LieClosure { space } => lie_closure_check(*space, seed, config.commutator_step, tol.commutator, p),
    };
    let mut report = result.unwrap_or_else(|e| ResidualReport::errored(&spec.name, f64::NAN, &e));
    report.name = spec.name.clone();
    report
}

fn perturbed(w: &WaveFunction, p: f64) -> Result<WaveFunction> {
    if p == 0.0 {
        return Ok(w.clone());
    }
    WaveFunction::from_alpha(w.family(), w.orientation(), nudge(w.alpha(), p), w.epsilon())
}

/// Run every selected check. Checks execute in parallel; the report list is
/// in registry order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<ResidualReport>> {
    let config = config.clone().validated("<config>")?;
    let specs = registry(&config);
    Ok(specs.par_iter().map(|s| run_check(s, &config)).collect())
}
