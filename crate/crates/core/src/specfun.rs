//! Complex powers and the Gauss hypergeometric series.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{Error, Result};
use crate::geometry::Space;

/// Terms of a non-terminating series are summed until this many consecutive
/// terms fall below `SERIES_EPS` relative to the partial sum.
const QUIET_TERMS: usize = 3;
const SERIES_EPS: f64 = 1e-16;
pub const MAX_SERIES_TERMS: usize = 100_000;

/// Tolerance used to recognise integer-valued complex parameters.
const INTEGER_TOL: f64 = 1e-12;

/// Principal logarithm with argument in `(-pi, pi]`.
pub fn principal_log(z: Complex64) -> Complex64 {
    let mut arg = z.im.atan2(z.re);
    if arg == -PI {
        // atan2(-0.0, x < 0) lands on the excluded end of the interval.
        arg = PI;
    }
    Complex64::new(z.norm().ln(), arg)
}

/// `exp(exponent * Log(base))` on the principal branch.
pub fn principal_power(base: Complex64, exponent: Complex64) -> Result<Complex64> {
    if base == Complex64::new(0.0, 0.0) {
        return if exponent.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::domain(format!(
                "0^({exponent}) is undefined for Re(exponent) <= 0"
            )))
        };
    }
    Ok((exponent * principal_log(base)).exp())
}

/// Principal power of a positive real base, which never fails.
pub(crate) fn real_power(base: f64, exponent: Complex64) -> Complex64 {
    debug_assert!(base > 0.0);
    (exponent * base.ln()).exp()
}

/// If `v` is a non-positive integer (within tolerance) return `-v`.
pub fn nonpositive_integer(v: Complex64) -> Option<usize> {
    let n = v.re.round();
    if n <= 0.0 && (v.re - n).abs() <= INTEGER_TOL && v.im.abs() <= INTEGER_TOL {
        Some((-n) as usize)
    } else {
        None
    }
}

/// Parameters `(A, B; C)` of the Gauss function `2F1(A, B; C; x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Hyp2F1Params { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Hyp2F1Params::new(a.into(), b.into(), c.into())
    }

    /// Degree of the polynomial when `A` or `B` is a non-positive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        match (nonpositive_integer(self.a), nonpositive_integer(self.b)) {
            (Some(n), Some(m)) => Some(n.min(m)),
            (n, m) => n.or(m),
        }
    }

    /// Fails when `C` is a non-positive integer that the series reaches
    /// before terminating.
    pub fn validate(&self) -> Result<()> {
        if let Some(j) = nonpositive_integer(self.c) {
            let safe = self.terminating_degree().is_some_and(|n| n <= j);
            if !safe {
                return Err(Error::domain(format!(
                    "C = {} is a non-positive integer and the series does not terminate before it",
                    self.c
                )));
            }
        }
        Ok(())
    }
}

/// Gauss hypergeometric function by direct summation of its power series.
///
/// Valid for `|x| < 1`, or for any `x` when the series terminates.
pub fn hyp2f1(params: &Hyp2F1Params, x: Complex64) -> Result<Complex64> {
    params.validate()?;
    let one = Complex64::new(1.0, 0.0);
    if x == Complex64::new(0.0, 0.0) {
        return Ok(one);
    }
    let Hyp2F1Params { a, b, c } = *params;
    if let Some(n) = params.terminating_degree() {
        let mut term = one;
        let mut sum = one;
        for k in 0..n {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
            sum += term;
        }
        return Ok(sum);
    }
    if x.norm() >= 1.0 {
        return Err(Error::domain(format!(
            "2F1 series does not converge at |x| = {} >= 1 (verify through the ODE instead)",
            x.norm()
        )));
    }
    let mut term = one;
    let mut sum = one;
    let mut quiet = 0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.norm() < SERIES_EPS * sum.norm() {
            quiet += 1;
            if quiet == QUIET_TERMS {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: format!("2F1({a}, {b}; {c}; {x})"),
        terms: MAX_SERIES_TERMS,
    })
}

/// Left-hand side of the separated radial equation applied to `radial`.
///
/// On H3 the variable is `r` and the equation is
/// `G'' + (coth r + tanh r) G' + (-m^2/sinh^2 r + alpha^2/cosh^2 r + 2 eps) G`;
/// on S3 it is `rho` and
/// `R'' + (cot rho - tan rho) R' + (2 eps - m^2/sin^2 rho - alpha^2/cos^2 rho) R`.
/// Derivatives use fourth-order central differences with the given step.
pub fn radial_ode_residual<F>(
    space: Space,
    m: i64,
    alpha: Complex64,
    epsilon: f64,
    radial: F,
    x: f64,
    step: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let upper = match space {
        Space::Hyperbolic => f64::INFINITY,
        Space::Spherical => FRAC_PI_2,
    };
    if !(x - 2.0 * step > 0.0 && x + 2.0 * step < upper) {
        return Err(Error::domain(format!(
            "radial point {x} (step {step}) touches the singular ends of the {space} radial range"
        )));
    }
    let g = radial(x);
    let g1 = diff::d1(&radial, x, step);
    let g2 = diff::d2(&radial, x, step);
    let m2 = (m * m) as f64;
    let out = match space {
        Space::Hyperbolic => {
            let (sh, ch) = (x.sinh(), x.cosh());
            g2 + g1 * (ch / sh + sh / ch) + g * (-m2 / (sh * sh) + alpha * alpha / (ch * ch) + 2.0 * epsilon)
        }
        Space::Spherical => {
            let (s, c) = x.sin_cos();
            g2 + g1 * (c / s - s / c) + g * (2.0 * epsilon - m2 / (s * s) - alpha * alpha / (c * c))
        }
    };
    Ok(out)
}

/// The H3 radial equation in the variable `y = cosh^2 r`:
/// `4y(y-1) G'' + 4(2y-1) G' + (-m^2/(y-1) + alpha^2/y + 2 eps) G`.
///
/// The equation is analytic in `y`, so it can be checked on `0 < y < 1`
/// where the hypergeometric series converges.
pub fn h3_radial_y_residual<F>(
    m: i64,
    alpha: Complex64,
    epsilon: f64,
    radial: F,
    y: f64,
    step: f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let near = |p: f64| (y - p).abs() <= 2.0 * step;
    if near(0.0) || near(1.0) {
        return Err(Error::domain(format!(
            "y = {y} (step {step}) touches a singular point of the radial equation"
        )));
    }
    let g = radial(y);
    let g1 = diff::d1(&radial, y, step);
    let g2 = diff::d2(&radial, y, step);
    let m2 = (m * m) as f64;
    Ok(g2 * (4.0 * y * (y - 1.0))
        + g1 * (4.0 * (2.0 * y - 1.0))
        + g * (-m2 / (y - 1.0) + alpha * alpha / y + 2.0 * epsilon))
}
