use num_complex::Complex64;

use crate::diff::{self, shifted};
use crate::error::{Error, Result};
use crate::geometry::{complexify, rrstar_metric, ChartId, ChartPoint, MetricTensor, VariableSet};
use crate::waves::WaveFunction;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default finite-difference step for first-order operators.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Default step for the Hamiltonian and radial equations, for a unit-scale wave.
pub const HAMILTONIAN_STEP: f64 = 6e-3;

/// Default step for nested commutators.
pub const COMMUTATOR_STEP: f64 = 1e-2;

/// Points closer than this many local steps to a singular locus are rejected.
pub const INTERIOR_STEPS: f64 = 10.0;

fn check_interior(chart: ChartId, x: [f64; 3], step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let d = chart.singular_distance(x);
    if !(d > 0.0) || d < INTERIOR_STEPS * radial_step(d, step) {
        return Err(Error::domain(format!(
            "point {x:?} is within {} steps of the singular locus of {chart} ({})",
            INTERIOR_STEPS,
            chart.singular_loci()
        )));
    }
    Ok(())
}

/// Step along the axis normal to the singular locus at distance `d`. It
/// shrinks with `d`, where waves such as `cos^alpha rho` with negative
/// `alpha` vary on that scale.
pub fn radial_step(d: f64, step: f64) -> f64 {
    step * d.min(1.0)
}

/// Per-axis steps at `x`.
pub fn local_steps(chart: ChartId, x: [f64; 3], step: f64) -> [f64; 3] {
    [radial_step(chart.singular_distance(x), step), step, step]
}

/// `(H psi)(p)` in the chart's own coordinates, `(a, b, phi)` on the complex
/// chart.
pub fn apply_hamiltonian<F>(chart: ChartId, psi: &F, p: &ChartPoint, step: f64) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let vars = match chart {
        ChartId::S3ComplexHorospherical => VariableSet::AB,
        _ => VariableSet::ChartReal,
    };
    apply_hamiltonian_in(chart, vars, psi, p, step)
}

/// `(H psi)(p)` with the operator written in the chosen variables. On the
/// complex chart `a_b` uses the real form, `z_zstar` the form in `z` and
/// `W = z*` treated as independent, and `r_rstar` the general
/// Laplace-Beltrami expression on the `(r, r*, phi)` metric. In every case
/// `psi` is a function of the chart coordinates.
pub fn apply_hamiltonian_in<F>(
    chart: ChartId,
    variables: VariableSet,
    psi: &F,
    p: &ChartPoint,
    step: f64,
) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    if p.chart() != chart {
        return Err(Error::domain(format!("point is on {}, operator on {chart}", p.chart())));
    }
    let x = p.coords();
    check_interior(chart, x, step)?;
    let h = local_steps(chart, x, step);
    let d = |axis| diff::partial(psi, x, axis, h[axis]);
    let dd = |axis| diff::partial2(psi, x, axis, h[axis]);
    let lap = match (chart, variables) {
        (ChartId::H3Cylindrical, VariableSet::ChartReal) => {
            let (sh, ch) = (x[0].sinh(), x[0].cosh());
            dd(0) + d(0) * (ch / sh + sh / ch) + dd(1) / (sh * sh) + dd(2) / (ch * ch)
        }
        (ChartId::S3Cylindrical, VariableSet::ChartReal) => {
            let (s, c) = x[0].sin_cos();
            dd(0) + d(0) * (c / s - s / c) + dd(1) / (s * s) + dd(2) / (c * c)
        }
        (ChartId::H3Horospherical, VariableSet::ChartReal) => {
            let r = x[0];
            (dd(0) + d(0) / r + dd(1) / (r * r)) * (2.0 * x[2]).exp() + dd(2) - d(2) * 2.0
        }
        (ChartId::S3ComplexHorospherical, VariableSet::AB) => {
            let e = (2.0 * x[0]).exp();
            let em1 = (2.0 * x[0]).exp_m1();
            dd(2) * (e / em1) + dd(0) * em1 + d(0) * 2.0 + dd(1) * e
        }
        (ChartId::S3ComplexHorospherical, VariableSet::ZZstar) => {
            let f = (2.0 * x[0]).exp();
            let (daa, dbb) = (dd(0), dd(1));
            let dab = diff::mixed(psi, x, 0, 1, h[0], h[1]);
            let (da, db) = (d(0), d(1));
            let dz = (da - I * db) * 0.5;
            let dw = (da + I * db) * 0.5;
            let dzz = (daa - 2.0 * I * dab - dbb) * 0.25;
            let dww = (daa + 2.0 * I * dab - dbb) * 0.25;
            let dzw = (daa + dbb) * 0.25;
            // 2 eps psi = [-f/(f-1) d_phi^2 + d_z^2 + d_W^2 - 2 d_z - 2 d_W
            //              - 2 (2f - 1) d_z d_W] psi, and H psi = eps psi.
            let bracket = -dd(2) * (f / (f - 1.0)) + dzz + dww - dz * 2.0 - dw * 2.0 - dzw * (2.0 * (2.0 * f - 1.0));
            return Ok(bracket * 0.5);
        }
        (ChartId::S3ComplexHorospherical, VariableSet::RRstar) => {
            return rrstar_hamiltonian(psi, x, step);
        }
        (chart, vars) => {
            return Err(Error::domain(format!(
                "no Hamiltonian form for {chart} in {vars} variables"
            )))
        }
    };
    Ok(lap * -0.5)
}

/// Hamiltonian through `r = A + i B` with `A`, `B` real: the wave is pulled
/// back to `(A, B, phi)` and differentiated with Wirtinger derivatives.
fn rrstar_hamiltonian<F>(psi: &F, x: [f64; 3], step: f64) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let [a, b, phi] = x;
    let r = complexify(a, b)?.r;
    let b0 = b;
    // Invert r = i sqrt(e^{2a} - 1) e^{ib}, unwrapping b near its centre value.
    let to_chart = move |y: [f64; 3]| {
        let r = Complex64::new(y[0], y[1]);
        let a = 0.5 * r.norm_sqr().ln_1p();
        let raw = (r / I).arg();
        let b = raw + std::f64::consts::TAU * ((b0 - raw) / std::f64::consts::TAU).round();
        [a, b, y[2]]
    };
    let psi_r = |y: [f64; 3]| psi(to_chart(y));
    let metric = |y: [f64; 3]| {
        let r = Complex64::new(y[0], y[1]);
        Ok(rrstar_metric(r, r.conj()))
    };
    let hr = step * r.norm();
    let lap = laplace_beltrami_wirtinger(&psi_r, &metric, [r.re, r.im, phi], [hr, hr, step])?;
    Ok(lap * -0.5)
}

/// Laplace-Beltrami operator
/// `g^{ij} D_i D_j psi + (D_i g^{ij} + g^{ij} D_i(det g) / (2 det g)) D_j psi`
/// in the complex variables `(w, w*, x2)` with `w = x0 + i x1`, where `psi`
/// and `metric` are functions of the real triple `x`. `metric` must return
/// components in the order `(w, w*, x2)`.
pub fn laplace_beltrami_wirtinger<F, G>(psi: &F, metric: &G, x: [f64; 3], h: [f64; 3]) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
    G: Fn([f64; 3]) -> Result<MetricTensor> + ?Sized,
{
    let at = |y: [f64; 3]| -> Result<([[Complex64; 3]; 3], Complex64)> {
        let g = metric(y)?;
        Ok((g.inverse()?, g.determinant()))
    };
    let (ginv, det) = at(x)?;

    // Real partials of g^{ij} and det along each axis.
    let mut dginv = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
    let mut ddet = [Complex64::new(0.0, 0.0); 3];
    for axis in 0..3 {
        let hk = h[axis];
        let (m2, m1) = (at(shifted(x, axis, -2.0 * hk))?, at(shifted(x, axis, -hk))?);
        let (p1, p2) = (at(shifted(x, axis, hk))?, at(shifted(x, axis, 2.0 * hk))?);
        let stencil = |v: [Complex64; 4]| (v[0] - v[3] + (v[2] - v[1]) * 8.0) / (12.0 * hk);
        for i in 0..3 {
            for j in 0..3 {
                dginv[axis][i][j] = stencil([m2.0[i][j], m1.0[i][j], p1.0[i][j], p2.0[i][j]]);
            }
        }
        ddet[axis] = stencil([m2.1, m1.1, p1.1, p2.1]);
    }
    // Wirtinger combination of real partials.
    let wirt = |real: [Complex64; 3]| [(real[0] - I * real[1]) * 0.5, (real[0] + I * real[1]) * 0.5, real[2]];

    let p = |axis| diff::partial(psi, x, axis, h[axis]);
    let dpsi = wirt([p(0), p(1), p(2)]);
    let pp = |axis| diff::partial2(psi, x, axis, h[axis]);
    let (d00, d11, d22) = (pp(0), pp(1), pp(2));
    let d01 = diff::mixed(psi, x, 0, 1, h[0], h[1]);
    let d02 = diff::mixed(psi, x, 0, 2, h[0], h[2]);
    let d12 = diff::mixed(psi, x, 1, 2, h[1], h[2]);
    let mut second = [[Complex64::new(0.0, 0.0); 3]; 3];
    second[0][0] = (d00 - 2.0 * I * d01 - d11) * 0.25;
    second[1][1] = (d00 + 2.0 * I * d01 - d11) * 0.25;
    second[0][1] = (d00 + d11) * 0.25;
    second[1][0] = second[0][1];
    second[0][2] = (d02 - I * d12) * 0.5;
    second[2][0] = second[0][2];
    second[1][2] = (d02 + I * d12) * 0.5;
    second[2][1] = second[1][2];
    second[2][2] = d22;

    let dlogdet = wirt(ddet).map(|v| v / (2.0 * det));
    let mut out = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        let column = wirt([dginv[0][0][j], dginv[1][0][j], dginv[2][0][j]]);
        let column1 = wirt([dginv[0][1][j], dginv[1][1][j], dginv[2][1][j]]);
        let column2 = wirt([dginv[0][2][j], dginv[1][2][j], dginv[2][2][j]]);
        // D_i g^{ij} summed over i.
        let div = column[0] + column1[1] + column2[2];
        let mut coeff = div;
        for i in 0..3 {
            coeff += ginv[i][j] * dlogdet[i];
            out += ginv[i][j] * second[i][j];
        }
        out += coeff * dpsi[j];
    }
    Ok(out)
}

/// `-i d/dz` on the H3 cylindrical chart and `-i (r d/dr + d/dz)` on the
/// horospherical charts, applied to a function of the chart coordinates. On
/// the complex chart `r d/dr + d/dz` restricts to `-i d/db`.
pub fn p3_chart<F>(chart: ChartId, psi: &F, p: &ChartPoint, step: f64) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let x = p.coords();
    check_interior(chart, x, step)?;
    match chart {
        ChartId::H3Cylindrical => Ok(-I * diff::partial(psi, x, 2, step)),
        ChartId::H3Horospherical => {
            let h = local_steps(chart, x, step);
            let radial = diff::partial(psi, x, 0, h[0]) * x[0];
            Ok(-I * (radial + diff::partial(psi, x, 2, step)))
        }
        ChartId::S3ComplexHorospherical => Ok(-diff::partial(psi, x, 1, step)),
        other => Err(Error::domain(format!(
            "{other} has no P3 form; use the q-space generators"
        ))),
    }
}

/// `-i (r d/dr + d/dz)` on a holomorphic function of `(r, z)`, with the
/// derivatives taken along real displacements.
pub fn p3_holomorphic<G>(psi_rz: &G, r: Complex64, z: Complex64, step: f64) -> Complex64
where
    G: Fn(Complex64, Complex64) -> Complex64 + ?Sized,
{
    let dr = diff::d1(|t| psi_rz(r + t, z), 0.0, step);
    let dz = diff::d1(|t| psi_rz(r, z + t), 0.0, step);
    -I * (r * dr + dz)
}

/// `P3` applied to a wave function at `p`.
pub fn apply_p3(chart: ChartId, psi: &WaveFunction, p: &ChartPoint, step: f64) -> Result<Complex64> {
    if p.chart() != chart || psi.chart() != chart {
        return Err(Error::domain(format!(
            "chart mismatch: operator on {chart}, point on {}, wave on {}",
            p.chart(),
            psi.chart()
        )));
    }
    match chart {
        ChartId::S3Cylindrical => Err(Error::domain(
            "s3_cylindrical has no P3 form; use the q-space generators",
        )),
        _ => p3_chart(chart, &|x| psi.eval(x), p, step),
    }
}

/// Metric in `(z, z*, phi)` as a function of the chart parameters, for the
/// generic Laplace-Beltrami form.
#[cfg(test)]
pub(crate) fn zzstar_metric_at(x: [f64; 3]) -> Result<MetricTensor> {
    Ok(crate::geometry::zzstar_metric(Complex64::new((2.0 * x[0]).exp(), 0.0)))
}
