use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chart::{embed_coords, ChartId, ChartPoint};
use crate::diff;
use crate::error::{Error, Result};

pub const DEFAULT_PULLBACK_STEP: f64 = 1e-4;

/// The variables a metric tensor is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableSet {
    /// The chart's own real coordinates.
    ChartReal,
    /// `(z, z*, phi)` on the complex horospherical chart.
    ZZstar,
    /// `(r, r*, phi)` on the complex horospherical chart.
    RRstar,
    /// The real parameters `(a, b, phi)` of the complex horospherical chart.
    AB,
}

impl fmt::Display for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariableSet::ChartReal => "chart_real",
            VariableSet::ZZstar => "z_zstar",
            VariableSet::RRstar => "r_rstar",
            VariableSet::AB => "a_b",
        })
    }
}

/// Spatial metric `dl^2 = g_ij dx^i dx^j`, complex symmetric.
///
/// The spacetime interval is `dS^2 = dt^2 - dl^2`; [`MetricTensor::spacetime_component`]
/// gives the spatial block of that 4x4 tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    variables: VariableSet,
    components: [[Complex64; 3]; 3],
}

impl MetricTensor {
    pub fn new(variables: VariableSet, components: [[Complex64; 3]; 3]) -> Self {
        MetricTensor { variables, components }
    }

    pub fn diagonal_real(variables: VariableSet, d: [f64; 3]) -> Self {
        let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            g[i][i] = Complex64::new(d[i], 0.0);
        }
        MetricTensor::new(variables, g)
    }

    pub fn variables(&self) -> VariableSet {
        self.variables
    }

    pub fn components(&self) -> [[Complex64; 3]; 3] {
        self.components
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.components[i][j]
    }

    /// Component of the 4x4 spacetime tensor (signature `+---`) for spatial
    /// indices, i.e. `-g_ij`.
    pub fn spacetime_component(&self, i: usize, j: usize) -> Complex64 {
        -self.components[i][j]
    }

    fn matrix(&self) -> Matrix3<Complex64> {
        Matrix3::from_fn(|i, j| self.components[i][j])
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix().determinant()
    }

    /// Determinant of `diag(1, -g)`, the full spacetime tensor.
    pub fn spacetime_determinant(&self) -> Complex64 {
        -self.determinant()
    }

    pub fn inverse(&self) -> Result<[[Complex64; 3]; 3]> {
        let inv = self
            .matrix()
            .try_inverse()
            .ok_or_else(|| Error::domain("metric tensor is singular"))?;
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])))
    }

    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..i {
                worst = worst.max((self.components[i][j] - self.components[j][i]).norm());
            }
        }
        worst
    }

    pub fn max_imaginary(&self) -> f64 {
        self.components.iter().flatten().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`, each entry scaled by
    /// `sqrt(|g_ii g_jj|)` of `self`.
    pub fn relative_deviation(&self, other: &MetricTensor) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let scale = (self.components[i][i].norm() * self.components[j][j].norm())
                    .sqrt()
                    .max(f64::MIN_POSITIVE);
                let d = (self.components[i][j] - other.components[i][j]).norm() / scale;
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn scaled(&self, factor: f64) -> MetricTensor {
        let mut g = self.components;
        g.iter_mut().flatten().for_each(|c| *c *= factor);
        MetricTensor::new(self.variables, g)
    }

    /// Congruence `J^T g J` for a change of variables with `jac[i][k] = dx^i / dy^k`.
    pub fn transformed(&self, jac: &[[Complex64; 3]; 3], variables: VariableSet) -> MetricTensor {
        let j = Matrix3::from_fn(|i, k| jac[i][k]);
        let g = j.transpose() * self.matrix() * j;
        MetricTensor::new(variables, std::array::from_fn(|a| std::array::from_fn(|b| g[(a, b)])))
    }
}

/// Closed-form spatial metric of the chart at `p`.
///
/// For the complex horospherical chart the result is written in `(a, b, phi)`.
pub fn closed_form_metric(p: &ChartPoint) -> MetricTensor {
    let x = p.coords();
    match p.chart() {
        ChartId::H3Cylindrical => {
            let r = x[0];
            MetricTensor::diagonal_real(VariableSet::ChartReal, [1.0, r.sinh().powi(2), r.cosh().powi(2)])
        }
        ChartId::S3Cylindrical => {
            let (s, c) = x[0].sin_cos();
            MetricTensor::diagonal_real(VariableSet::ChartReal, [1.0, s * s, c * c])
        }
        ChartId::H3Horospherical => {
            let [r, _, z] = x;
            let e = (-2.0 * z).exp();
            MetricTensor::diagonal_real(VariableSet::ChartReal, [e, e * r * r, 1.0])
        }
        ChartId::S3ComplexHorospherical => {
            let a = x[0];
            let em1 = (2.0 * a).exp_m1();
            let inv_e2a = (-2.0 * a).exp();
            MetricTensor::diagonal_real(VariableSet::AB, [1.0 / em1, inv_e2a, em1 * inv_e2a])
        }
    }
}

/// Metric pulled back through the embedding, with a Richardson error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct Pullback {
    pub metric: MetricTensor,
    /// Largest entrywise difference between step `h` and `h/2` results.
    pub error_estimate: f64,
}

pub fn pullback_metric(p: &ChartPoint, step: f64) -> Result<MetricTensor> {
    pullback_metric_with_error(p, step).map(|pb| pb.metric)
}

pub fn pullback_metric_with_error(p: &ChartPoint, step: f64) -> Result<Pullback> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(format!("pullback step must be positive, got {step}")));
    }
    let dist = p.singular_distance();
    if dist < 10.0 * step {
        return Err(Error::domain(format!(
            "{}: point at distance {dist:e} from the range boundary needs step <= {:e}",
            p.chart(),
            dist / 10.0
        )));
    }
    let chart = p.chart();
    let vars = match chart {
        ChartId::S3ComplexHorospherical => VariableSet::AB,
        _ => VariableSet::ChartReal,
    };
    // Ambient line element: -du0^2 + du^2 on H3, du0^2 + du^2 on S3.
    let eta = [chart.space().quadric_sign(), 1.0, 1.0, 1.0];
    let f = |x: [f64; 3]| embed_coords(chart, x);
    let contract = |h: f64| -> [[f64; 3]; 3] {
        let jac = diff::jacobian4(&f, p.coords(), h);
        std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| eta[k] * jac[k][i] * jac[k][j]).sum()))
    };
    let coarse = contract(step);
    let fine = contract(step / 2.0);
    let mut error_estimate: f64 = 0.0;
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            error_estimate = error_estimate.max((fine[i][j] - coarse[i][j]).abs());
            g[i][j] = Complex64::new(fine[i][j], 0.0);
        }
    }
    Ok(Pullback {
        metric: MetricTensor::new(vars, g),
        error_estimate,
    })
}
