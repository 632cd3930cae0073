use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sov::SpectralSolution;
use crate::error::{Error, Result};
use crate::geometry::{complexify, ChartId, ChartPoint, Space, VariableSet};
use crate::specfun::{principal_log, principal_power, real_power};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    H3CylPlane,
    S3CylPlane,
    H3HoroPlane,
    S3ComplexPlane,
    H3Sov,
    S3Sov,
}

impl Family {
    pub const PLANE: [Family; 4] = [
        Family::H3CylPlane,
        Family::S3CylPlane,
        Family::H3HoroPlane,
        Family::S3ComplexPlane,
    ];

    pub fn chart(self) -> ChartId {
        match self {
            Family::H3CylPlane | Family::H3Sov => ChartId::H3Cylindrical,
            Family::S3CylPlane | Family::S3Sov => ChartId::S3Cylindrical,
            Family::H3HoroPlane => ChartId::H3Horospherical,
            Family::S3ComplexPlane => ChartId::S3ComplexHorospherical,
        }
    }

    pub fn space(self) -> Space {
        self.chart().space()
    }

    pub fn is_plane(self) -> bool {
        !matches!(self, Family::H3Sov | Family::S3Sov)
    }

    /// The plane-wave family living on `chart`.
    pub fn plane_on(chart: ChartId) -> Family {
        match chart {
            ChartId::H3Cylindrical => Family::H3CylPlane,
            ChartId::S3Cylindrical => Family::S3CylPlane,
            ChartId::H3Horospherical => Family::H3HoroPlane,
            ChartId::S3ComplexHorospherical => Family::S3ComplexPlane,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::H3CylPlane => "h3_cyl_plane",
            Family::S3CylPlane => "s3_cyl_plane",
            Family::H3HoroPlane => "h3_horo_plane",
            Family::S3ComplexPlane => "s3_complex_plane",
            Family::H3Sov => "h3_sov",
            Family::S3Sov => "s3_sov",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        [
            Family::H3CylPlane,
            Family::S3CylPlane,
            Family::H3HoroPlane,
            Family::S3ComplexPlane,
            Family::H3Sov,
            Family::S3Sov,
        ]
        .into_iter()
        .find(|f| f.name() == norm)
        .ok_or_else(|| Error::domain(format!("unknown wave family '{s}'")))
    }
}

/// Direction of the orientation vector `n = (0, 0, +-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Plus,
    Minus,
}

/// Root of the dispersion quadratic. `Plus` is the root with `+sqrt`:
/// `-1 + i sqrt(2 eps - 1)` on H3, `-1 + sqrt(2 eps + 1)` on S3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

macro_rules! signed_enum {
    ($t:ident) => {
        impl $t {
            pub const BOTH: [$t; 2] = [$t::Plus, $t::Minus];

            pub fn sign(self) -> f64 {
                match self {
                    $t::Plus => 1.0,
                    $t::Minus => -1.0,
                }
            }

            pub fn symbol(self) -> &'static str {
                match self {
                    $t::Plus => "+",
                    $t::Minus => "-",
                }
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.symbol())
            }
        }

        impl FromStr for $t {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    "+" | "+1" | "1" | "plus" => Ok($t::Plus),
                    "-" | "-1" | "minus" => Ok($t::Minus),
                    other => Err(Error::domain(format!(
                        "expected + or - for {}, got '{other}'",
                        stringify!($t)
                    ))),
                }
            }
        }
    };
}

/// Sign choice for a separation exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

signed_enum!(Orientation);
signed_enum!(Branch);
signed_enum!(Sign);

/// `alpha^2 + 2 alpha + 2 eps` on H3, `alpha^2 + 2 alpha - 2 eps` on S3.
pub fn dispersion_residual(space: Space, alpha: Complex64, epsilon: f64) -> Complex64 {
    let s = match space {
        Space::Hyperbolic => 1.0,
        Space::Spherical => -1.0,
    };
    alpha * alpha + 2.0 * alpha + 2.0 * s * epsilon
}

/// Root of the family's dispersion relation selected by `branch`.
pub fn alpha_from_epsilon(family: Family, epsilon: f64, branch: Branch) -> Result<Complex64> {
    if !family.is_plane() {
        return Err(Error::domain(format!(
            "{family} has independent alpha and epsilon; no dispersion relation"
        )));
    }
    if !epsilon.is_finite() {
        return Err(Error::domain("epsilon must be finite"));
    }
    let sign = branch.sign();
    match family.space() {
        Space::Hyperbolic => {
            if epsilon < 0.5 {
                return Err(Error::domain(format!(
                    "{family}: epsilon = {epsilon} below the H3 spectrum floor 1/2"
                )));
            }
            Ok(Complex64::new(-1.0, sign * (2.0 * epsilon - 1.0).sqrt()))
        }
        Space::Spherical => {
            if epsilon < 0.0 {
                return Err(Error::domain(format!(
                    "{family}: epsilon = {epsilon} below the S3 spectrum floor 0"
                )));
            }
            Ok(Complex64::new(-1.0 + sign * (2.0 * epsilon + 1.0).sqrt(), 0.0))
        }
    }
}

/// A closed-form wave function on one chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    family: Family,
    orientation: Orientation,
    alpha: Complex64,
    epsilon: f64,
    branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sov: Option<SpectralSolution>,
}

/// Build a plane wave from its energy, orientation and root choice.
pub fn make_plane_wave(family: Family, orientation: Orientation, epsilon: f64, branch: Branch) -> Result<WaveFunction> {
    let alpha = alpha_from_epsilon(family, epsilon, branch)?;
    Ok(WaveFunction {
        family,
        orientation,
        alpha,
        epsilon,
        branch: Some(branch),
        sov: None,
    })
}

impl WaveFunction {
    /// A plane wave with an explicit exponent. The dispersion relation is not
    /// enforced, which makes this the entry point for detuned inputs.
    pub fn from_alpha(family: Family, orientation: Orientation, alpha: Complex64, epsilon: f64) -> Result<Self> {
        if !family.is_plane() {
            return Err(Error::domain("use make_sov_solution for separated families"));
        }
        Ok(WaveFunction {
            family,
            orientation,
            alpha,
            epsilon,
            branch: None,
            sov: None,
        })
    }

    pub(crate) fn from_sov(s: SpectralSolution) -> Self {
        let family = match s.space() {
            Space::Hyperbolic => Family::H3Sov,
            Space::Spherical => Family::S3Sov,
        };
        WaveFunction {
            family,
            orientation: Orientation::Plus,
            alpha: s.alpha(),
            epsilon: s.epsilon(),
            branch: None,
            sov: Some(s),
        }
    }

    pub(crate) fn with_branch(mut self, branch: Option<Branch>) -> Self {
        self.branch = branch;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn chart(&self) -> ChartId {
        self.family.chart()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn branch(&self) -> Option<Branch> {
        self.branch
    }

    pub fn sov(&self) -> Option<&SpectralSolution> {
        self.sov.as_ref()
    }

    /// Residual of the family's dispersion relation (zero for separated
    /// solutions, where `alpha` and `epsilon` are independent).
    pub fn dispersion_residual(&self) -> Complex64 {
        if self.family.is_plane() {
            dispersion_residual(self.family.space(), self.alpha, self.epsilon)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Value at raw chart coordinates (no range check). Separated solutions
    /// whose series cannot be summed at the point evaluate to NaN.
    pub fn eval(&self, x: [f64; 3]) -> Complex64 {
        let alpha = self.alpha;
        let s = self.orientation.sign();
        match self.family {
            Family::H3CylPlane => {
                let [r, _, z] = x;
                real_power(r.cosh(), alpha) * (alpha * s * z).exp()
            }
            Family::S3CylPlane => {
                let [rho, _, z] = x;
                cos_power(rho.cos(), alpha) * (I * alpha * s * z).exp()
            }
            Family::H3HoroPlane => {
                let [r, _, z] = x;
                match self.orientation {
                    Orientation::Minus => (-alpha * z).exp(),
                    Orientation::Plus => real_power(z.exp() + r * r * (-z).exp(), alpha),
                }
            }
            Family::S3ComplexPlane => {
                let [a, b, _] = x;
                (-alpha * Complex64::new(a, s * -b)).exp()
            }
            Family::H3Sov | Family::S3Sov => self
                .sov
                .as_ref()
                .and_then(|sol| sol.try_eval(x).ok())
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }

    pub fn value_at(&self, p: &ChartPoint) -> Result<Complex64> {
        if p.chart() != self.chart() {
            return Err(Error::domain(format!(
                "{} lives on {}, point is on {}",
                self.family,
                self.chart(),
                p.chart()
            )));
        }
        match &self.sov {
            Some(sol) => sol.try_eval(p.coords()),
            None => Ok(self.eval(p.coords())),
        }
    }

    /// Holomorphic extension in independent `(r, z)`, used by the
    /// `P3 = -i (r d/dr + d/dz)` operator on the horospherical charts.
    ///
    /// For `Psi+ = (e^z + r^2 e^{-z})^alpha` on the complex chart the power is
    /// taken on the sheet continuous with `exp(-alpha z*)`.
    pub fn eval_rz(&self, r: Complex64, z: Complex64) -> Option<Complex64> {
        let alpha = self.alpha;
        match (self.family, self.orientation) {
            (Family::H3HoroPlane | Family::S3ComplexPlane, Orientation::Minus) => Some((-alpha * z).exp()),
            (Family::H3HoroPlane, Orientation::Plus) => principal_power(z.exp() + r * r * (-z).exp(), alpha).ok(),
            (Family::S3ComplexPlane, Orientation::Plus) => {
                let w = z.exp() + r * r * (-z).exp();
                let log = lift_log(principal_log(w), z.im);
                Some((alpha * log).exp())
            }
            _ => None,
        }
    }

    /// Eigenvalue of `P . n` predicted for the family, with `n` the
    /// orientation vector: `-i alpha` on H3, `alpha` on S3.
    pub fn momentum_eigenvalue(&self) -> Option<Complex64> {
        if !self.family.is_plane() {
            return None;
        }
        Some(match self.family.space() {
            Space::Hyperbolic => -I * self.alpha,
            Space::Spherical => self.alpha,
        })
    }

    /// Eigenvalue of the chart's `P3` operator where one exists:
    /// `-i d/dz` on H3 cylindrical, `-i (r d/dr + d/dz)` on both
    /// horospherical charts. On the complex chart the operator is the
    /// continuation of the H3 one, which is `-i` times the S3 generator.
    pub fn p3_eigenvalue(&self) -> Option<Complex64> {
        let s = self.orientation.sign();
        match self.family {
            Family::H3CylPlane | Family::H3HoroPlane => Some(-I * self.alpha * s),
            Family::S3ComplexPlane => Some(-I * self.alpha * s),
            _ => None,
        }
    }
}

fn cos_power(c: f64, alpha: Complex64) -> Complex64 {
    if alpha == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    principal_power(Complex64::new(c, 0.0), alpha).unwrap_or(Complex64::new(f64::INFINITY, 0.0))
}

/// Shift `log` by a multiple of `2 pi i` so its imaginary part lies within
/// `pi` of `target_im`.
fn lift_log(log: Complex64, target_im: f64) -> Complex64 {
    let k = ((target_im - log.im) / TAU).round();
    Complex64::new(log.re, log.im + k * TAU)
}

/// A plane wave on the complex chart evaluated through another set of
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct AltRepresentation {
    wave: WaveFunction,
    variables: VariableSet,
}

/// Re-express a complex-chart plane wave through `(z, z*)` or `(r, r*)`.
///
/// Both routes rebuild `V0 -+ i V3` from the requested variables and raise it
/// to `alpha` on the sheet where `b` lies in `[0, 2 pi)`. In `(r, r*)` the
/// square root of the radical is fixed by `r = i sqrt(e^{2a}-1) e^{ib}`:
/// `exp(-z) = i r* / sqrt(r r* (1 + r r*))`.
pub fn alternate_representation(w: &WaveFunction, variables: VariableSet) -> Result<AltRepresentation> {
    if w.family != Family::S3ComplexPlane {
        return Err(Error::domain(format!(
            "alternate representations exist only for s3_complex_plane, not {}",
            w.family
        )));
    }
    match variables {
        VariableSet::ZZstar | VariableSet::RRstar | VariableSet::AB => Ok(AltRepresentation {
            wave: w.clone(),
            variables,
        }),
        VariableSet::ChartReal => Err(Error::domain("the complex chart has no chart_real variables; use a_b")),
    }
}

impl AltRepresentation {
    pub fn variables(&self) -> VariableSet {
        self.variables
    }

    pub fn wave(&self) -> &WaveFunction {
        &self.wave
    }

    /// Evaluate at chart parameters `(a, b, phi)`.
    pub fn try_eval(&self, x: [f64; 3]) -> Result<Complex64> {
        let [a, b, _] = x;
        let pair = complexify(a, b)?;
        let (lower, upper) = match self.variables {
            VariableSet::AB | VariableSet::ChartReal => return Ok(self.wave.eval(x)),
            VariableSet::ZZstar => {
                // V0 = (e^{-z*} + e^{-z})/2, V3 = (e^{-z*} - e^{-z})/(2i)
                let (em, emc) = ((-pair.z).exp(), (-pair.z.conj()).exp());
                let v0 = (emc + em) * 0.5;
                let v3 = (emc - em) / (2.0 * I);
                (v0 - I * v3, v0 + I * v3)
            }
            VariableSet::RRstar => {
                let (r, rs) = (pair.r, pair.r.conj());
                let rr = r * rs;
                if rr.norm() == 0.0 {
                    return Err(Error::domain("a = 0 gives r = 0, where r*/r is indeterminate"));
                }
                let root = (rr * (1.0 + rr)).sqrt();
                let v0 = -(rs - r) / (2.0 * I) / root;
                let v3 = -(r + rs) / 2.0 / root;
                (v0 - I * v3, v0 + I * v3)
            }
        };
        let alpha = self.wave.alpha;
        // exp(-z) has argument -b, exp(-z*) has argument +b.
        Ok(match self.wave.orientation {
            Orientation::Minus => (alpha * lift_log(principal_log(lower), -b)).exp(),
            Orientation::Plus => (alpha * lift_log(principal_log(upper), b)).exp(),
        })
    }
}

/// A Shapiro wave in the projective coordinates `q = u / u0` with a general
/// unit orientation `n`: `(1 - q^2)^{-alpha/2} (1 + n.q)^alpha` on H3 and
/// `(1 + q^2)^{-alpha/2} (1 + i n.q)^alpha` on S3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QPlaneWave {
    pub space: Space,
    pub n: [f64; 3],
    pub alpha: Complex64,
    pub epsilon: f64,
}

impl QPlaneWave {
    pub fn new(space: Space, n: [f64; 3], epsilon: f64, branch: Branch) -> Result<Self> {
        let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-14 {
            return Err(Error::domain(format!(
                "orientation must be a unit vector, |n| = {norm}"
            )));
        }
        let family = match space {
            Space::Hyperbolic => Family::H3CylPlane,
            Space::Spherical => Family::S3CylPlane,
        };
        Ok(QPlaneWave {
            space,
            n,
            alpha: alpha_from_epsilon(family, epsilon, branch)?,
            epsilon,
        })
    }

    pub fn eval(&self, q: [f64; 3]) -> Complex64 {
        let q2: f64 = q.iter().map(|v| v * v).sum();
        let nq: f64 = q.iter().zip(self.n).map(|(a, b)| a * b).sum();
        let half = -self.alpha * 0.5;
        match self.space {
            Space::Hyperbolic => real_power(1.0 - q2, half) * real_power(1.0 + nq, self.alpha),
            Space::Spherical => {
                real_power(1.0 + q2, half) * (self.alpha * principal_log(Complex64::new(1.0, nq))).exp()
            }
        }
    }

    /// Eigenvalue of `P . n`: `-i alpha` on H3, `alpha` on S3.
    pub fn eigenvalue(&self) -> Complex64 {
        match self.space {
            Space::Hyperbolic => -I * self.alpha,
            Space::Spherical => self.alpha,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            alpha_from_epsilon(Family::H3CylPlane, 1.0, Branch::Plus).unwrap(),
            c(-1.0, 1.0)
        );
        assert_eq!(
            alpha_from_epsilon(Family::H3CylPlane, 1.0, Branch::Minus).unwrap(),
            c(-1.0, -1.0)
        );
        assert_eq!(
            alpha_from_epsilon(Family::S3CylPlane, 1.5, Branch::Plus).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            alpha_from_epsilon(Family::S3CylPlane, 1.5, Branch::Minus).unwrap(),
            c(-3.0, 0.0)
        );
        // Horospherical waves share the H3 relation alpha^2 + 2 alpha + 2 eps = 0.
        assert_eq!(
            alpha_from_epsilon(Family::H3HoroPlane, 1.0, Branch::Plus).unwrap(),
            c(-1.0, 1.0)
        );
    }

    #[test]
    fn alpha_floor_errors() {
        let err = alpha_from_epsilon(Family::H3HoroPlane, 0.3, Branch::Plus).unwrap_err();
        assert!(err.to_string().contains("1/2"));
        let err = alpha_from_epsilon(Family::S3ComplexPlane, -0.1, Branch::Plus).unwrap_err();
        assert!(err.to_string().contains("floor 0"));
        assert!(alpha_from_epsilon(Family::S3Sov, 1.0, Branch::Plus).is_err());
    }

    #[test]
    fn dispersion_closes() {
        for family in Family::PLANE {
            for branch in Branch::BOTH {
                for eps in [0.6, 1.0, 2.5, 12.0] {
                    let w = make_plane_wave(family, Orientation::Plus, eps, branch).unwrap();
                    assert!(w.dispersion_residual().norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn uniform_state_on_s3() {
        let w = make_plane_wave(Family::S3CylPlane, Orientation::Plus, 0.0, Branch::Plus).unwrap();
        assert_eq!(w.alpha(), c(0.0, 0.0));
        for x in [
            [0.1, 0.0, 0.0],
            [1.2, 3.0, -2.0],
            [std::f64::consts::FRAC_PI_2, 1.0, 1.0],
        ] {
            assert_eq!(w.eval(x), c(1.0, 0.0));
        }
    }

    #[test]
    fn horospherical_minus_ignores_r_and_phi() {
        let w = make_plane_wave(Family::H3HoroPlane, Orientation::Minus, 1.3, Branch::Plus).unwrap();
        let v = w.eval([0.2, 0.1, 0.4]);
        assert_eq!(v, w.eval([2.7, 5.0, 0.4]));
        assert!((v - (-w.alpha() * 0.4).exp()).norm() < 1e-15);
    }

    #[test]
    fn h3_cylindrical_value() {
        let w = make_plane_wave(Family::H3CylPlane, Orientation::Plus, 1.0, Branch::Plus).unwrap();
        let alpha = c(-1.0, 1.0);
        let want = (alpha * 1f64.cosh().ln()).exp() * (alpha * 0.5).exp();
        assert!((w.eval([1.0, 0.3, 0.5]) - want).norm() < 1e-15);
    }

    #[test]
    fn complex_chart_waves_are_conjugate_for_real_alpha() {
        let minus = make_plane_wave(Family::S3ComplexPlane, Orientation::Minus, 4.0, Branch::Plus).unwrap();
        let plus = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, 4.0, Branch::Plus).unwrap();
        let x = [0.8, 2.2, 0.0];
        assert!((plus.eval(x) - minus.eval(x).conj()).norm() < 1e-15);
    }

    #[test]
    fn representation_at_ln_sqrt2() {
        let w = make_plane_wave(Family::S3ComplexPlane, Orientation::Minus, 1.5, Branch::Plus).unwrap();
        let want = (w.alpha() * (-0.5 * LN_2)).exp();
        for vars in [VariableSet::ZZstar, VariableSet::RRstar, VariableSet::AB] {
            let rep = alternate_representation(&w, vars).unwrap();
            let v = rep.try_eval([0.5 * LN_2, 0.0, 0.2]).unwrap();
            assert!((v - want).norm() < 1e-14, "{vars}: {v}");
        }
    }

    #[test]
    fn representation_errors() {
        let w = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, 1.5, Branch::Plus).unwrap();
        let rep = alternate_representation(&w, VariableSet::RRstar).unwrap();
        assert!(rep.try_eval([0.0, 1.0, 0.0]).is_err());
        assert!(alternate_representation(&w, VariableSet::ChartReal).is_err());
        let h = make_plane_wave(Family::H3HoroPlane, Orientation::Plus, 1.5, Branch::Plus).unwrap();
        assert!(alternate_representation(&h, VariableSet::ZZstar).is_err());
    }

    #[test]
    fn zero_alpha_representations_are_one() {
        let w = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, 0.0, Branch::Plus).unwrap();
        for vars in [VariableSet::ZZstar, VariableSet::RRstar] {
            let rep = alternate_representation(&w, vars).unwrap();
            assert_eq!(rep.try_eval([0.9, 4.0, 1.0]).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn holomorphic_form_matches_chart_on_full_b_range() {
        let w = make_plane_wave(Family::S3ComplexPlane, Orientation::Plus, 0.9, Branch::Plus).unwrap();
        for b in [0.1, 1.5, 3.0, 3.3, 5.0, 6.2] {
            let pair = complexify(0.7, b).unwrap();
            let v = w.eval_rz(pair.r, pair.z).unwrap();
            assert!((v - w.eval([0.7, b, 0.0])).norm() < 1e-13, "b = {b}");
        }
    }

    #[test]
    fn parse_signs() {
        assert_eq!("-".parse::<Orientation>().unwrap(), Orientation::Minus);
        assert_eq!("+1".parse::<Branch>().unwrap(), Branch::Plus);
        assert!("x".parse::<Branch>().is_err());
        assert_eq!("s3-cyl-plane".parse::<Family>().unwrap(), Family::S3CylPlane);
    }

    #[test]
    fn q_wave_rejects_non_unit_orientation() {
        assert!(QPlaneWave::new(Space::Hyperbolic, [0.0, 0.0, 1.1], 1.0, Branch::Plus).is_err());
    }
}
