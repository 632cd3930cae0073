use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::plane::{make_plane_wave, Branch, Family, Orientation, WaveFunction};
use crate::error::{Error, Result};
use crate::geometry::Space;

/// `|Psi|` above this at a probe point counts as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Largest variation of `Psi` along a mute coordinate that still counts as
/// continuous.
pub const MUTE_TOLERANCE: f64 = 1e-8;
/// Distance from the singular circle at which S3 cylindrical waves are probed.
pub const RHO_PROBE_OFFSET: f64 = 1e-3;
/// Value of `a` standing in for `a -> infinity` on the complex chart.
pub const A_PROBE: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumFamily {
    CylPlane,
    ComplexPlane,
    /// Separated solutions with `|m| <= m_max` and `|alpha| <= alpha_max`.
    Sov {
        m_max: u32,
        alpha_max: u32,
    },
}

impl FromStr for SpectrumFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "cyl-plane" | "s3-cyl-plane" => Ok(SpectrumFamily::CylPlane),
            "complex-plane" | "s3-complex-plane" => Ok(SpectrumFamily::ComplexPlane),
            "sov" | "s3-sov" => Ok(SpectrumFamily::Sov { m_max: 3, alpha_max: 3 }),
            other => Err(Error::domain(format!(
                "unknown spectrum family '{other}' (cyl-plane, complex-plane, sov)"
            ))),
        }
    }
}

impl fmt::Display for SpectrumFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumFamily::CylPlane => f.write_str("cyl-plane"),
            SpectrumFamily::ComplexPlane => f.write_str("complex-plane"),
            SpectrumFamily::Sov { .. } => f.write_str("sov"),
        }
    }
}

/// One level of the S3 spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_z: Option<u32>,
    /// `sqrt(2 eps + 1)`.
    pub big_n: u32,
    pub epsilon: Ratio<i64>,
    /// Plane families: the two dispersion roots `-1 +- N`.
    /// Separated family: the two z-wavenumbers `+-|alpha|`.
    pub alpha_plus: i64,
    pub alpha_minus: i64,
}

impl SpectrumRow {
    pub fn epsilon_f64(&self) -> f64 {
        *self.epsilon.numer() as f64 / *self.epsilon.denom() as f64
    }
}

fn level(big_n: u32) -> Ratio<i64> {
    let n = i64::from(big_n);
    Ratio::new(n * n - 1, 2)
}

/// Discrete S3 spectrum `eps = (N^2 - 1)/2`.
///
/// Plane families list `n = 1..=n_max` with `N = n`. The separated family
/// lists `n = 0..=n_max` for every `(|m|, |alpha|)` in range, with
/// `N = |m| + |alpha| + 1 + 2n`.
pub fn quantize_s3(family: SpectrumFamily, n_max: u32) -> Result<Vec<SpectrumRow>> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let rows = match family {
        SpectrumFamily::CylPlane | SpectrumFamily::ComplexPlane => (1..=n_max)
            .map(|n| SpectrumRow {
                n,
                m: None,
                alpha_z: None,
                big_n: n,
                epsilon: level(n),
                alpha_plus: i64::from(n) - 1,
                alpha_minus: -1 - i64::from(n),
            })
            .collect(),
        SpectrumFamily::Sov { m_max, alpha_max } => {
            let mut rows = Vec::new();
            for m in 0..=m_max {
                for alpha in 0..=alpha_max {
                    for n in 0..=n_max {
                        let big_n = m + alpha + 1 + 2 * n;
                        rows.push(SpectrumRow {
                            n,
                            m: Some(m),
                            alpha_z: Some(alpha),
                            big_n,
                            epsilon: level(big_n),
                            alpha_plus: i64::from(alpha),
                            alpha_minus: -i64::from(alpha),
                        });
                    }
                }
            }
            rows
        }
    };
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Physical,
    Rejected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Ok,
    DivergesAtRhoPi2,
    DivergesAtRho0,
    NonperiodicB,
    NonperiodicZ,
    GrowthAtAInfinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Decays,
    Bounded,
    Grows,
}

impl Growth {
    fn from_ratio(ratio: f64) -> Growth {
        if ratio > 10.0 {
            Growth::Grows
        } else if ratio < 0.1 {
            Growth::Decays
        } else {
            Growth::Bounded
        }
    }
}

/// Behaviour of an H3 wave far out along the radial direction and along
/// both ends of the z axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asymptotics {
    pub radial: Growth,
    pub z_plus: Growth,
    pub z_minus: Growth,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: Reason,
    /// `|Psi|` at the divergence probe point, when one applies.
    pub probe_modulus: Option<f64>,
    /// Variation of `Psi` along the mute coordinate at the degenerate locus.
    pub mute_variation: Option<f64>,
    pub asymptotics: Option<Asymptotics>,
}

impl Classification {
    fn new(reason: Reason) -> Self {
        Classification {
            verdict: if reason == Reason::Ok {
                Verdict::Physical
            } else {
                Verdict::Rejected
            },
            reason,
            probe_modulus: None,
            mute_variation: None,
            asymptotics: None,
        }
    }
}

fn variation(values: &[Complex64]) -> f64 {
    let first = values[0];
    values.iter().map(|v| (v - first).norm()).fold(0.0, |acc, d| {
        if d.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(d)
        }
    })
}

fn periodic(w: &WaveFunction, axis: usize) -> bool {
    let samples = [[0.4, 0.3, 0.2], [0.9, 1.7, -1.1], [1.2, 4.0, 2.5]];
    samples.iter().all(|&x| {
        let mut shifted = x;
        shifted[axis] += TAU;
        let (v, s) = (w.eval(x), w.eval(shifted));
        (v - s).norm() <= 1e-10 * v.norm().max(1.0)
    })
}

fn exceeds(modulus: f64) -> bool {
    !modulus.is_finite() || modulus > DIVERGENCE_THRESHOLD
}

fn mute_bad(var: f64) -> bool {
    !var.is_finite() || var >= MUTE_TOLERANCE
}

/// Decide whether a wave is an acceptable state.
///
/// S3 waves must be single-valued in the periodic coordinates and bounded and
/// continuous at the degenerate loci (`rho = pi/2` on the cylindrical chart,
/// `a -> infinity` on the complex chart). H3 waves are always accepted and
/// carry a report of their growth.
pub fn classify_physical(w: &WaveFunction) -> Classification {
    match w.family() {
        Family::H3CylPlane | Family::H3HoroPlane | Family::H3Sov => {
            let mut c = Classification::new(Reason::Ok);
            c.asymptotics = Some(h3_asymptotics(w));
            c
        }
        Family::S3CylPlane => {
            if !periodic(w, 2) {
                return Classification::new(Reason::NonperiodicZ);
            }
            let rho = FRAC_PI_2 - RHO_PROBE_OFFSET;
            let probe = w.eval([rho, 0.3, 0.2]).norm();
            let on_circle: Vec<_> = [0.0, 1.0, 2.5, 4.0]
                .iter()
                .map(|&z| w.eval([FRAC_PI_2, 0.3, z]))
                .collect();
            let var = variation(&on_circle);
            let negative = w.alpha().re < 0.0;
            let mut c = Classification::new(if negative || exceeds(probe) || mute_bad(var) {
                Reason::DivergesAtRhoPi2
            } else {
                Reason::Ok
            });
            c.probe_modulus = Some(probe);
            c.mute_variation = Some(var);
            c
        }
        Family::S3ComplexPlane => {
            if !periodic(w, 1) {
                return Classification::new(Reason::NonperiodicB);
            }
            let probe = w.eval([A_PROBE, 0.3, 0.2]).norm();
            let far: Vec<_> = [0.0, 1.0, 2.5, 4.0]
                .iter()
                .map(|&b| w.eval([A_PROBE, b, 0.2]))
                .collect();
            let var = variation(&far);
            let negative = w.alpha().re < 0.0;
            let mut c = Classification::new(if negative || exceeds(probe) || mute_bad(var) {
                Reason::GrowthAtAInfinity
            } else {
                Reason::Ok
            });
            c.probe_modulus = Some(probe);
            c.mute_variation = Some(var);
            c
        }
        Family::S3Sov => {
            let Some(sol) = w.sov() else {
                return Classification::new(Reason::Ok);
            };
            let (a, b) = sol.exponents();
            let terminating = sol.hyp().terminating_degree().is_some();
            // A non-terminating series has C - A - B = -a <= 0 and blows up at
            // cos^2 rho = 1.
            let reason = if b.re < 0.0 {
                Reason::DivergesAtRhoPi2
            } else if a.re < 0.0 || !terminating {
                Reason::DivergesAtRho0
            } else {
                Reason::Ok
            };
            let mut c = Classification::new(reason);
            c.probe_modulus = sol
                .try_eval([FRAC_PI_2 - RHO_PROBE_OFFSET, 0.3, 0.2])
                .ok()
                .map(|v| v.norm());
            c
        }
    }
}

fn h3_asymptotics(w: &WaveFunction) -> Asymptotics {
    let modulus = |x: [f64; 3]| w.eval(x).norm();
    let base = modulus([1.0, 0.3, 0.0]);
    Asymptotics {
        radial: Growth::from_ratio(modulus([10.0, 0.3, 0.0]) / base),
        z_plus: Growth::from_ratio(modulus([1.0, 0.3, 10.0]) / base),
        z_minus: Growth::from_ratio(modulus([1.0, 0.3, -10.0]) / base),
    }
}

/// Dimensionful eigenvalue of the momentum projection at curvature radius
/// `rho_curv` (units with `hbar = 1`): `alpha / rho` on S3 and
/// `-i alpha / rho` on H3, with `alpha` the dispersion root for the energy
/// `E` of a particle of mass `M`. Tends to `+-sqrt(2 E M)` as `rho_curv` grows.
pub fn flat_limit_eigenvalue(space: Space, energy: f64, mass: f64, rho_curv: f64, branch: Branch) -> Result<Complex64> {
    if !(energy > 0.0 && mass > 0.0 && rho_curv > 0.0) {
        return Err(Error::domain("E, M and rho_curv must all be positive"));
    }
    let sign = branch.sign();
    let two_em = 2.0 * energy * mass;
    let inv = 1.0 / rho_curv;
    match space {
        Space::Spherical => Ok(Complex64::new(-inv + sign * (two_em + inv * inv).sqrt(), 0.0)),
        Space::Hyperbolic => {
            let radicand = two_em - inv * inv;
            if radicand < 0.0 {
                return Err(Error::domain(format!(
                    "2 E M rho^2 = {} is below the H3 floor 1",
                    two_em * rho_curv * rho_curv
                )));
            }
            Ok(Complex64::new(sign * radicand.sqrt(), inv))
        }
    }
}

/// One classified entry of the S3 plane-wave catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub orientation: Orientation,
    pub branch: Branch,
    pub n: u32,
    pub alpha: Complex64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub reason: Reason,
}

/// Every S3 plane wave with `N = 1..=n_max`, both orientations and both
/// roots, with its classification.
pub fn solution_catalog(n_max: u32) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for row in quantize_s3(SpectrumFamily::CylPlane, n_max)? {
        for family in [Family::S3CylPlane, Family::S3ComplexPlane] {
            for orientation in Orientation::BOTH {
                for branch in Branch::BOTH {
                    let w = make_plane_wave(family, orientation, row.epsilon_f64(), branch)?;
                    let c = classify_physical(&w);
                    out.push(CatalogEntry {
                        family,
                        orientation,
                        branch,
                        n: row.n,
                        alpha: w.alpha(),
                        epsilon: w.epsilon(),
                        verdict: c.verdict,
                        reason: c.reason,
                    });
                }
            }
        }
    }
    Ok(out)
}
