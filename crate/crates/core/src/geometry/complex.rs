//! Complex horospherical coordinates on S3.
//!
//! A point of S3 is labelled by complex `(r, z)` subject to
//! `r^2 = exp(z - z*) - exp(2z)`, with the real parameterization
//! `z = a + i b`, `r = i sqrt(e^{2a} - 1) e^{ib}` and the real azimuth `phi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chart::{ChartId, ChartPoint};
use super::metric::{closed_form_metric, MetricTensor, VariableSet};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexHoroPair {
    pub z: Complex64,
    pub r: Complex64,
}

/// Build the constrained pair from the real parameters `(a, b)`.
pub fn complexify(a: f64, b: f64) -> Result<ComplexHoroPair> {
    if !(a >= 0.0) || !b.is_finite() || !a.is_finite() {
        return Err(Error::domain(format!(
            "complexify needs finite a >= 0, got a = {a}, b = {b}"
        )));
    }
    // Non-negative real branch of sqrt(e^{2a} - 1).
    let modulus = (2.0 * a).exp_m1().sqrt();
    Ok(ComplexHoroPair {
        z: Complex64::new(a, b),
        r: I * Complex64::from_polar(modulus, b),
    })
}

/// `|r^2 - e^{z - z*} + e^{2z}|`.
pub fn constraint_residual(pair: &ComplexHoroPair) -> f64 {
    let ComplexHoroPair { z, r } = *pair;
    (r * r - (z - z.conj()).exp() + (2.0 * z).exp()).norm()
}

/// `|(e^{2z} + r^2)(e^{2z} + r^2)* - 1|`.
pub fn unit_modulus_residual(pair: &ComplexHoroPair) -> f64 {
    let w = (2.0 * pair.z).exp() + pair.r * pair.r;
    (w.norm_sqr() - 1.0).abs()
}

impl ComplexHoroPair {
    pub fn from_point(p: &ChartPoint) -> Result<Self> {
        if p.chart() != ChartId::S3ComplexHorospherical {
            return Err(Error::domain(format!(
                "complex pair requested for {}, only defined on s3_complex_horospherical",
                p.chart()
            )));
        }
        let [a, b, _] = p.coords();
        complexify(a, b)
    }
}

/// Spatial metric in `(z, W = z*, phi)` as a function of `f = exp(z + W)`.
pub fn zzstar_metric(f: Complex64) -> MetricTensor {
    let fm1 = f - 1.0;
    let denom = 4.0 * f * fm1;
    let diag = 1.0 / denom;
    let cross = (2.0 * f - 1.0) / denom;
    let zero = Complex64::new(0.0, 0.0);
    MetricTensor::new(
        VariableSet::ZZstar,
        [[diag, cross, zero], [cross, diag, zero], [zero, zero, fm1 / f]],
    )
}

/// Spatial metric in `(r, r*, phi)`, treating `r` and `r*` as independent.
pub fn rrstar_metric(r: Complex64, rs: Complex64) -> MetricTensor {
    let rho = r * rs;
    let p = 1.0 + rho;
    let q = 4.0 * p * p;
    let zero = Complex64::new(0.0, 0.0);
    let cross = (2.0 * rho + 1.0) / (q * rho);
    MetricTensor::new(
        VariableSet::RRstar,
        [
            [-1.0 / (q * r * r), cross, zero],
            [cross, -1.0 / (q * rs * rs), zero],
            [zero, zero, rho / p],
        ],
    )
}

/// Metric tensor of the complex horospherical chart written in the requested
/// variables, evaluated at `p`.
pub fn metric_in_variables(p: &ChartPoint, variables: VariableSet) -> Result<MetricTensor> {
    if variables == VariableSet::ChartReal {
        return Ok(closed_form_metric(p));
    }
    let pair = ComplexHoroPair::from_point(p)?;
    if p.coords()[0] <= 0.0 {
        return Err(Error::domain(
            "a = 0 is the singular circle of the complex chart; the metric is degenerate there",
        ));
    }
    Ok(match variables {
        VariableSet::AB | VariableSet::ChartReal => closed_form_metric(p),
        VariableSet::ZZstar => zzstar_metric((pair.z + pair.z.conj()).exp()),
        VariableSet::RRstar => rrstar_metric(pair.r, pair.r.conj()),
    })
}
