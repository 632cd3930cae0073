use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the quadric constraint of an ambient point, relative to
/// `max(1, u0^2)`.
pub const AMBIENT_TOLERANCE: f64 = 1e-12;

/// Radius below which an angle is treated as undefined during inversion.
const DEGENERATE_RADIUS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Hyperbolic,
    Spherical,
}

impl Space {
    /// Sign of the spatial part of the ambient quadratic form relative to `u0^2`.
    pub fn quadric_sign(self) -> f64 {
        match self {
            Space::Hyperbolic => -1.0,
            Space::Spherical => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Hyperbolic => "hyperbolic",
            Space::Spherical => "spherical",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperbolic" | "h3" | "H3" => Ok(Space::Hyperbolic),
            "spherical" | "s3" | "S3" => Ok(Space::Spherical),
            other => Err(Error::domain(format!("unknown space '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartId {
    H3Cylindrical,
    S3Cylindrical,
    H3Horospherical,
    S3ComplexHorospherical,
}

impl ChartId {
    pub const ALL: [ChartId; 4] = [
        ChartId::H3Cylindrical,
        ChartId::S3Cylindrical,
        ChartId::H3Horospherical,
        ChartId::S3ComplexHorospherical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartId::H3Cylindrical => "h3_cylindrical",
            ChartId::S3Cylindrical => "s3_cylindrical",
            ChartId::H3Horospherical => "h3_horospherical",
            ChartId::S3ComplexHorospherical => "s3_complex_horospherical",
        }
    }

    pub fn space(self) -> Space {
        match self {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => Space::Hyperbolic,
            ChartId::S3Cylindrical | ChartId::S3ComplexHorospherical => Space::Spherical,
        }
    }

    pub fn coordinate_names(self) -> [&'static str; 3] {
        match self {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => ["r", "phi", "z"],
            ChartId::S3Cylindrical => ["rho", "phi", "z"],
            ChartId::S3ComplexHorospherical => ["a", "b", "phi"],
        }
    }

    /// Declared coordinate ranges as human-readable intervals.
    pub fn range_descriptions(self) -> [&'static str; 3] {
        match self {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => ["[0, inf)", "[0, 2pi)", "(-inf, inf)"],
            ChartId::S3Cylindrical => ["[0, pi/2]", "[0, 2pi)", "[-pi, pi)"],
            ChartId::S3ComplexHorospherical => ["[0, inf)", "[0, 2pi)", "[0, 2pi)"],
        }
    }

    pub fn singular_loci(self) -> &'static str {
        match self {
            ChartId::H3Cylindrical => "r = 0 (phi undefined)",
            ChartId::S3Cylindrical => "rho = 0 (phi undefined); rho = pi/2 (z undefined)",
            ChartId::H3Horospherical => "r = 0 (phi undefined)",
            ChartId::S3ComplexHorospherical => "a = 0 (phi mute); a -> inf (b mute, outside the chart)",
        }
    }

    /// Which coordinates are periodic angles.
    pub fn periodic_axes(self) -> [bool; 3] {
        match self {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => [false, true, false],
            ChartId::S3Cylindrical => [false, true, true],
            ChartId::S3ComplexHorospherical => [false, true, true],
        }
    }

    /// Distance of raw coordinates from the nearest singular locus (and from
    /// the boundary of the bounded radial range).
    pub fn singular_distance(self, x: [f64; 3]) -> f64 {
        match self {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => x[0],
            ChartId::S3Cylindrical => x[0].min(FRAC_PI_2 - x[0]),
            ChartId::S3ComplexHorospherical => x[0],
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        ChartId::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::domain(format!("unknown chart '{s}'")))
    }
}

/// A point of one chart, validated against the chart's coordinate ranges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    chart: ChartId,
    coords: [f64; 3],
}

impl ChartPoint {
    pub fn new(chart: ChartId, coords: [f64; 3]) -> Result<Self> {
        let names = chart.coordinate_names();
        for (name, v) in names.iter().zip(coords) {
            if !v.is_finite() {
                return Err(Error::domain(format!("{chart}: coordinate {name} = {v} is not finite")));
            }
        }
        let check = |i: usize, ok: bool| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "{chart}: coordinate {} = {} outside {}",
                    names[i],
                    coords[i],
                    chart.range_descriptions()[i]
                )))
            }
        };
        let angle = |v: f64| (0.0..TAU).contains(&v);
        match chart {
            ChartId::H3Cylindrical | ChartId::H3Horospherical => {
                check(0, coords[0] >= 0.0)?;
                check(1, angle(coords[1]))?;
            }
            ChartId::S3Cylindrical => {
                check(0, (0.0..=FRAC_PI_2).contains(&coords[0]))?;
                check(1, angle(coords[1]))?;
                check(2, (-PI..PI).contains(&coords[2]))?;
            }
            ChartId::S3ComplexHorospherical => {
                check(0, coords[0] >= 0.0)?;
                check(1, angle(coords[1]))?;
                check(2, angle(coords[2]))?;
            }
        }
        Ok(ChartPoint { chart, coords })
    }

    /// Like [`ChartPoint::new`] but first reduces periodic coordinates into
    /// their canonical interval.
    pub fn wrapped(chart: ChartId, mut coords: [f64; 3]) -> Result<Self> {
        for (i, periodic) in chart.periodic_axes().into_iter().enumerate() {
            if periodic && coords[i].is_finite() {
                coords[i] = if chart == ChartId::S3Cylindrical && i == 2 {
                    wrap_signed(coords[i])
                } else {
                    wrap_angle(coords[i])
                };
            }
        }
        ChartPoint::new(chart, coords)
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    pub fn singular_distance(&self) -> f64 {
        self.chart.singular_distance(self.coords)
    }
}

/// Reduce an angle into `[0, 2pi)`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Reduce an angle into `[-pi, pi)`.
pub(crate) fn wrap_signed(x: f64) -> f64 {
    let w = wrap_angle(x + PI) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Quasi-Cartesian embedding coordinates `(u0, u1, u2, u3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    u: [f64; 4],
    space: Space,
}

impl AmbientPoint {
    pub fn new(space: Space, u: [f64; 4]) -> Result<Self> {
        let p = AmbientPoint { u, space };
        let scale = u[0].powi(2).max(1.0);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("ambient coordinates must be finite"));
        }
        if p.constraint_residual().abs() > AMBIENT_TOLERANCE * scale {
            return Err(Error::domain(format!(
                "{space} quadric violated: residual {:e}",
                p.constraint_residual()
            )));
        }
        if space == Space::Hyperbolic && u[0] < 1.0 - AMBIENT_TOLERANCE * scale {
            return Err(Error::domain("hyperbolic point must lie on the u0 >= 1 sheet"));
        }
        Ok(p)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn components(&self) -> [f64; 4] {
        self.u
    }

    /// `u0^2 -+ |u|^2 - 1`, zero on the model's quadric.
    pub fn constraint_residual(&self) -> f64 {
        let [u0, u1, u2, u3] = self.u;
        u0 * u0 + self.space.quadric_sign() * (u1 * u1 + u2 * u2 + u3 * u3) - 1.0
    }

    /// Projective coordinates `q = u / u0`.
    pub fn q(&self) -> Result<[f64; 3]> {
        let [u0, u1, u2, u3] = self.u;
        if u0.abs() < DEGENERATE_RADIUS {
            return Err(Error::domain("u0 = 0: point has no projective coordinates"));
        }
        Ok([u1 / u0, u2 / u0, u3 / u0])
    }
}

/// Embedding of raw chart coordinates, with no range checks. Used by the
/// finite-difference machinery, which steps outside canonical angle ranges.
pub fn embed_coords(chart: ChartId, x: [f64; 3]) -> [f64; 4] {
    match chart {
        ChartId::H3Cylindrical => {
            let [r, phi, z] = x;
            let (sh, ch) = (r.sinh(), r.cosh());
            [ch * z.cosh(), sh * phi.cos(), sh * phi.sin(), ch * z.sinh()]
        }
        ChartId::S3Cylindrical => {
            let [rho, phi, z] = x;
            let (s, c) = rho.sin_cos();
            [c * z.cos(), s * phi.cos(), s * phi.sin(), c * z.sin()]
        }
        ChartId::H3Horospherical => {
            let [r, phi, z] = x;
            let em = (-z).exp();
            let half_r2 = 0.5 * r * r * em;
            [
                z.cosh() + half_r2,
                r * em * phi.cos(),
                r * em * phi.sin(),
                z.sinh() + half_r2,
            ]
        }
        ChartId::S3ComplexHorospherical => {
            let [a, b, phi] = x;
            let em = (-a).exp();
            // sqrt(e^{2a} - 1) e^{-a} = sqrt(1 - e^{-2a})
            let rad = (-(-2.0 * a).exp_m1()).max(0.0).sqrt();
            [em * b.cos(), rad * phi.cos(), rad * phi.sin(), em * b.sin()]
        }
    }
}

pub fn embed(p: &ChartPoint) -> AmbientPoint {
    AmbientPoint {
        u: embed_coords(p.chart, p.coords),
        space: p.chart.space(),
    }
}

/// Result of inverting the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unembedded {
    pub point: ChartPoint,
    /// Set when the point lies on a singular locus and an undefined
    /// coordinate was set to its conventional value 0.
    pub degenerate: bool,
}

pub fn unembed(q: &AmbientPoint, chart: ChartId) -> Result<Unembedded> {
    if q.space != chart.space() {
        return Err(Error::domain(format!(
            "{} point cannot be expressed in chart {chart}",
            q.space
        )));
    }
    let [u0, u1, u2, u3] = q.u;
    let transverse = u1.hypot(u2);
    let mut degenerate = false;
    let mut azimuth = || {
        if transverse < DEGENERATE_RADIUS {
            degenerate = true;
            0.0
        } else {
            wrap_angle(u2.atan2(u1))
        }
    };
    let coords = match chart {
        ChartId::H3Cylindrical => {
            let phi = azimuth();
            let r = transverse.asinh();
            let z = (u3 / r.cosh()).asinh();
            [r, phi, z]
        }
        ChartId::S3Cylindrical => {
            let phi = azimuth();
            let axial = u0.hypot(u3);
            let rho = transverse.atan2(axial).clamp(0.0, FRAC_PI_2);
            let z = if axial < DEGENERATE_RADIUS {
                degenerate = true;
                0.0
            } else {
                wrap_signed(u3.atan2(u0))
            };
            [rho, phi, z]
        }
        ChartId::H3Horospherical => {
            let phi = azimuth();
            // u0 - u3 = e^{-z}; r e^{-z} = |(u1, u2)|
            let lower = u0 - u3;
            if lower <= 0.0 {
                return Err(Error::domain("u0 - u3 must be positive on the hyperboloid"));
            }
            [transverse / lower, phi, -lower.ln()]
        }
        ChartId::S3ComplexHorospherical => {
            let axial = u0.hypot(u3);
            if axial < DEGENERATE_RADIUS {
                return Err(Error::domain(
                    "V0 = V3 = 0 corresponds to a = infinity, outside the chart",
                ));
            }
            let a = (-axial.ln()).max(0.0);
            let b = wrap_angle(u3.atan2(u0));
            let phi = azimuth();
            [a, b, phi]
        }
    };
    Ok(Unembedded {
        point: ChartPoint::new(chart, coords)?,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn origin_of_h3_cylindrical() {
        let p = ChartPoint::new(ChartId::H3Cylindrical, [0.0, 0.0, 0.0]).unwrap();
        assert_eq!(embed(&p).components(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn s3_boundary_circle() {
        let p = ChartPoint::new(ChartId::S3Cylindrical, [FRAC_PI_2, 0.0, 0.7]).unwrap();
        assert!(close(embed(&p).components(), [0.0, 1.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn complex_chart_at_a_zero() {
        let p = ChartPoint::new(ChartId::S3ComplexHorospherical, [0.0, 0.3, 1.9]).unwrap();
        let want = [0.3f64.cos(), 0.0, 0.0, 0.3f64.sin()];
        assert!(close(embed(&p).components(), want, 1e-15));
    }

    #[test]
    fn out_of_range_names_coordinate() {
        let err = ChartPoint::new(ChartId::S3Cylindrical, [2.0, 0.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("rho"), "{err}");
        let err = ChartPoint::new(ChartId::H3Horospherical, [-0.1, 0.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("r ="), "{err}");
        let err = ChartPoint::new(ChartId::S3ComplexHorospherical, [1.0, 7.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("b ="), "{err}");
        assert!(ChartPoint::new(ChartId::H3Cylindrical, [1.0, 0.0, f64::NAN]).is_err());
    }

    #[test]
    fn unembed_origin_is_degenerate() {
        let q = AmbientPoint::new(Space::Hyperbolic, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let u = unembed(&q, ChartId::H3Cylindrical).unwrap();
        assert_eq!(u.point.coords(), [0.0, 0.0, 0.0]);
        assert!(u.degenerate);
    }

    #[test]
    fn unembed_horospherical_round_trip() {
        let p = ChartPoint::new(ChartId::H3Horospherical, [2.0, 1.0, 0.5]).unwrap();
        let u = unembed(&embed(&p), ChartId::H3Horospherical).unwrap();
        assert!(!u.degenerate);
        for (x, y) in u.point.coords().iter().zip([2.0, 1.0, 0.5]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn horospherical_z_from_lower_light_cone_coordinate() {
        // u0 - u3 = 1 with u1 = u2 = 0 is the point (1, 0, 0, 0).
        let q = AmbientPoint::new(Space::Hyperbolic, [1.0, 0.0, 0.0, 0.0]).unwrap();
        let u = unembed(&q, ChartId::H3Horospherical).unwrap();
        assert_eq!(u.point.coords()[2], 0.0);
    }

    #[test]
    fn space_mismatch_is_rejected() {
        let q = AmbientPoint::new(Space::Spherical, [1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(unembed(&q, ChartId::H3Cylindrical).is_err());
    }

    #[test]
    fn ambient_constraint_is_enforced() {
        assert!(AmbientPoint::new(Space::Spherical, [1.0, 0.1, 0.0, 0.0]).is_err());
        assert!(AmbientPoint::new(Space::Hyperbolic, [-1.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn s3_rho_pi_2_z_degenerate() {
        let q = AmbientPoint::new(Space::Spherical, [0.0, 0.0, 1.0, 0.0]).unwrap();
        let u = unembed(&q, ChartId::S3Cylindrical).unwrap();
        assert!(u.degenerate);
        assert_eq!(u.point.coords()[2], 0.0);
        assert!((u.point.coords()[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn chart_names_parse() {
        for c in ChartId::ALL {
            assert_eq!(c.name().parse::<ChartId>().unwrap(), c);
        }
        assert!("bogus".parse::<ChartId>().is_err());
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(TAU), 0.0);
        assert!((wrap_angle(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(wrap_signed(PI), -PI);
    }
}
