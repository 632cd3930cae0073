use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::plane::{alpha_from_epsilon, Branch, Family, Orientation, Sign, WaveFunction};
use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::specfun::{hyp2f1, principal_power, real_power, Hyp2F1Params};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Zero test used when deciding whether a separated solution collapses to a
/// plane wave.
const REDUCTION_TOL: f64 = 1e-12;

/// A separated solution `exp(i m phi) * exp(alpha z) * G(cosh^2 r)` on H3 or
/// `exp(i m phi) * exp(i alpha z) * R(rho)` on S3, with the radial factor
/// written as `(y-1)^a y^b 2F1(A, B; C; y)` (H3, `y = cosh^2 r`) or
/// `sin^a rho cos^b rho 2F1(A, B; C; cos^2 rho)` (S3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    space: Space,
    m: i64,
    alpha: Complex64,
    epsilon: f64,
    sign_a: Sign,
    sign_b: Sign,
    exp_a: Complex64,
    exp_b: Complex64,
    hyp: Hyp2F1Params,
    ode_verified_only: bool,
}

/// Build the separated solution for the given quantum numbers and exponent
/// signs.
///
/// On H3, `a = +-|m|/2`, `b = +-alpha/2`, `C = 2b + 1` and
/// `A, B = a + b + 1/2 +- i sqrt(2 eps - 1)/2`. On S3, `a = +-|m|`,
/// `b = +-|alpha|`, `C = b + 1` and `A, B = (a + b + 1 -+ sqrt(2 eps + 1))/2`;
/// `m` and `alpha` must be integers there.
pub fn make_sov_solution(
    space: Space,
    m: i64,
    alpha: Complex64,
    epsilon: f64,
    sign_a: Sign,
    sign_b: Sign,
) -> Result<SpectralSolution> {
    if !epsilon.is_finite() || !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::domain("alpha and epsilon must be finite"));
    }
    let (sa, sb) = (sign_a.sign(), sign_b.sign());
    let mabs = m.unsigned_abs() as f64;
    let (exp_a, exp_b, hyp) = match space {
        Space::Hyperbolic => {
            let a = Complex64::new(sa * mabs / 2.0, 0.0);
            let b = alpha * (sb / 2.0);
            let s = Complex64::new(2.0 * epsilon - 1.0, 0.0).sqrt();
            let centre = a + b + 0.5;
            let hyp = Hyp2F1Params::new(centre + I * s / 2.0, centre - I * s / 2.0, 2.0 * b + 1.0);
            (a, b, hyp)
        }
        Space::Spherical => {
            if alpha.im != 0.0 || alpha.re.fract() != 0.0 {
                return Err(Error::domain(format!(
                    "S3 separated solutions need an integer z-wavenumber for single-valuedness, got {alpha}"
                )));
            }
            if epsilon < -0.5 {
                return Err(Error::domain(format!(
                    "S3 separated solutions need 2 eps + 1 >= 0, got eps = {epsilon}"
                )));
            }
            let a = sa * mabs;
            let b = sb * alpha.re.abs();
            let root = (2.0 * epsilon + 1.0).sqrt();
            let hyp = Hyp2F1Params::real((a + b + 1.0 - root) / 2.0, (a + b + 1.0 + root) / 2.0, b + 1.0);
            (a.into(), b.into(), hyp)
        }
    };
    hyp.validate()?;
    let ode_verified_only = space == Space::Hyperbolic && hyp.terminating_degree().is_none();
    Ok(SpectralSolution {
        space,
        m,
        alpha,
        epsilon,
        sign_a,
        sign_b,
        exp_a,
        exp_b,
        hyp,
        ode_verified_only,
    })
}

impl SpectralSolution {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn signs(&self) -> (Sign, Sign) {
        (self.sign_a, self.sign_b)
    }

    /// The substitution exponents `(a, b)`.
    pub fn exponents(&self) -> (Complex64, Complex64) {
        (self.exp_a, self.exp_b)
    }

    pub fn hyp(&self) -> Hyp2F1Params {
        self.hyp
    }

    /// True for H3 solutions whose series does not terminate: the radial
    /// variable `cosh^2 r >= 1` lies outside the disk of convergence, so these
    /// are only checked through the radial equation on `0 < y < 1`.
    pub fn ode_verified_only(&self) -> bool {
        self.ode_verified_only
    }

    /// Largest deviation of `(A + B, A B, C)` from their closed forms in terms
    /// of `a`, `b` and `eps`.
    pub fn relation_residual(&self) -> f64 {
        let Hyp2F1Params { a: big_a, b: big_b, c } = self.hyp;
        let (a, b) = (self.exp_a, self.exp_b);
        let (sum, prod, cc) = match self.space {
            Space::Hyperbolic => {
                let centre = a + b + 0.5;
                (
                    2.0 * a + 2.0 * b + 1.0,
                    centre * centre + (2.0 * self.epsilon - 1.0) / 4.0,
                    2.0 * b + 1.0,
                )
            }
            Space::Spherical => {
                let t = a + b + 1.0;
                (t, (t * t - (2.0 * self.epsilon + 1.0)) / 4.0, b + 1.0)
            }
        };
        [
            (big_a + big_b - sum).norm(),
            (big_a * big_b - prod).norm(),
            (c - cc).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Radial factor in the variable `y = cosh^2 r` (H3) or `rho` (S3).
    /// On H3 any `y > 0` with `y != 1` is accepted, so the radial equation can
    /// be checked inside the unit disk.
    pub fn radial(&self, x: f64) -> Result<Complex64> {
        match self.space {
            Space::Hyperbolic => {
                let y = x;
                let f = hyp2f1(&self.hyp, y.into())?;
                let lower = principal_power(Complex64::new(y - 1.0, 0.0), self.exp_a)?;
                Ok(lower * real_power(y, self.exp_b) * f)
            }
            Space::Spherical => {
                let (s, c) = x.sin_cos();
                let f = hyp2f1(&self.hyp, (c * c).into())?;
                Ok(f * s.powi(self.exp_a.re as i32) * c.powi(self.exp_b.re as i32))
            }
        }
    }

    /// Full wave at chart coordinates `(r, phi, z)` or `(rho, phi, z)`.
    pub fn try_eval(&self, x: [f64; 3]) -> Result<Complex64> {
        let [radial, phi, z] = x;
        let angular = (I * (self.m as f64) * phi).exp();
        match self.space {
            Space::Hyperbolic => {
                if self.ode_verified_only {
                    return Err(Error::domain(
                        "non-terminating H3 series cannot be summed at cosh^2 r >= 1",
                    ));
                }
                let ch = radial.cosh();
                Ok(angular * (self.alpha * z).exp() * self.radial(ch * ch)?)
            }
            Space::Spherical => Ok(angular * (I * self.alpha * z).exp() * self.radial(radial)?),
        }
    }

    /// Wrap as a `WaveFunction` on the cylindrical chart of its space.
    pub fn to_wave(&self) -> Result<WaveFunction> {
        if self.ode_verified_only {
            return Err(Error::domain(
                "this H3 separated solution is only verified through its radial equation",
            ));
        }
        Ok(WaveFunction::from_sov(self.clone()))
    }
}

/// The plane wave a separated solution collapses to when `m = 0` and `A = 0`
/// or `B = 0`, so that the hypergeometric factor is identically one.
pub fn reduce_to_plane_wave(s: &SpectralSolution) -> Option<WaveFunction> {
    if s.m != 0 {
        return None;
    }
    let a_zero = s.hyp.a.norm() <= REDUCTION_TOL;
    let b_zero = s.hyp.b.norm() <= REDUCTION_TOL;
    if !a_zero && !b_zero {
        return None;
    }
    let (family, orientation, alpha) = match s.space {
        Space::Hyperbolic => match s.sign_b {
            Sign::Plus => (Family::H3CylPlane, Orientation::Plus, s.alpha),
            Sign::Minus => (Family::H3CylPlane, Orientation::Minus, -s.alpha),
        },
        Space::Spherical => {
            let beta = s.exp_b;
            let orientation = if beta == s.alpha {
                Orientation::Plus
            } else {
                Orientation::Minus
            };
            (Family::S3CylPlane, orientation, beta)
        }
    };
    let branch = Branch::BOTH
        .into_iter()
        .find(|&br| alpha_from_epsilon(family, s.epsilon, br).is_ok_and(|v| (v - alpha).norm() <= 1e-10));
    WaveFunction::from_alpha(family, orientation, alpha, s.epsilon)
        .ok()
        .map(|w| w.with_branch(branch))
}
