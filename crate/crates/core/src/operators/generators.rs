use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{Error, Result};
use crate::geometry::{ChartId, Space};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point of the projective chart `q = u / u0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QPoint {
    q: [f64; 3],
    space: Space,
}

impl QPoint {
    /// Hyperbolic points must satisfy `q^2 < 1` (the `u0 > 0` sheet).
    pub fn new(space: Space, q: [f64; 3]) -> Result<Self> {
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("q must be finite, got {q:?}")));
        }
        let q2: f64 = q.iter().map(|v| v * v).sum();
        if space == Space::Hyperbolic && q2 >= 1.0 {
            return Err(Error::domain(format!(
                "hyperbolic q must satisfy q^2 < 1, got q^2 = {q2}"
            )));
        }
        Ok(QPoint { q, space })
    }

    pub fn q(&self) -> [f64; 3] {
        self.q
    }

    pub fn space(&self) -> Space {
        self.space
    }
}

/// A component of `P` or `L` along a unit vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum Generator {
    Momentum([f64; 3]),
    Angular([f64; 3]),
}

impl Generator {
    pub fn p(axis: usize) -> Self {
        Generator::Momentum(unit(axis))
    }

    pub fn l(axis: usize) -> Self {
        Generator::Angular(unit(axis))
    }

    /// `P1, P2, P3, L1, L2, L3`.
    pub fn basis() -> [Generator; 6] {
        [
            Generator::p(0),
            Generator::p(1),
            Generator::p(2),
            Generator::l(0),
            Generator::l(1),
            Generator::l(2),
        ]
    }

    pub fn label(&self) -> String {
        let (name, n) = match self {
            Generator::Momentum(n) => ("P", n),
            Generator::Angular(n) => ("L", n),
        };
        match n.iter().position(|&v| v == 1.0) {
            Some(k) if n.iter().filter(|&&v| v == 0.0).count() == 2 => format!("{name}{}", k + 1),
            _ => format!("{name}.({:.3}, {:.3}, {:.3})", n[0], n[1], n[2]),
        }
    }

    fn direction(&self) -> [f64; 3] {
        match self {
            Generator::Momentum(n) | Generator::Angular(n) => *n,
        }
    }
}

fn unit(axis: usize) -> [f64; 3] {
    let mut n = [0.0; 3];
    n[axis] = 1.0;
    n
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-14 {
        return Err(Error::domain(format!("direction must be a unit vector, |n| = {norm}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OperatorKind {
    Hamiltonian,
    P3,
    MomentumComponent { n: [f64; 3] },
    AngularMomentumComponent { n: [f64; 3] },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorDomain {
    Chart(ChartId),
    QSpace(Space),
}

/// Which operator to apply, where, and with what step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub domain: OperatorDomain,
    pub step: f64,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, domain: OperatorDomain, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::domain(format!("step must be positive, got {step}")));
        }
        match (kind, domain) {
            (
                OperatorKind::MomentumComponent { n } | OperatorKind::AngularMomentumComponent { n },
                OperatorDomain::QSpace(_),
            ) => check_unit(n)?,
            (OperatorKind::Hamiltonian | OperatorKind::P3, OperatorDomain::Chart(_)) => {}
            _ => {
                return Err(Error::domain(
                    "generators act in q-space; Hamiltonian and P3 act on a chart",
                ))
            }
        }
        Ok(OperatorSpec { kind, domain, step })
    }

    /// The generator this spec names, if it is a q-space operator.
    pub fn generator(&self) -> Option<Generator> {
        match self.kind {
            OperatorKind::MomentumComponent { n } => Some(Generator::Momentum(n)),
            OperatorKind::AngularMomentumComponent { n } => Some(Generator::Angular(n)),
            _ => None,
        }
    }
}

fn gradient<F>(f: &F, q: [f64; 3], h: f64) -> [Complex64; 3]
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    [0, 1, 2].map(|k| diff::partial(f, q, k, h))
}

/// `P.n = -i (n.grad -+ (n.q)(q.grad))` (upper sign hyperbolic) and
/// `L.n = -i n.(q x grad)`, without domain checks.
fn raw_apply<F>(space: Space, g: Generator, f: &F, q: [f64; 3], h: f64) -> Complex64
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let grad = gradient(f, q, h);
    let n = g.direction();
    let dot = |u: [f64; 3], v: [Complex64; 3]| v[0] * u[0] + v[1] * u[1] + v[2] * u[2];
    match g {
        Generator::Momentum(_) => {
            let kappa = space.quadric_sign();
            let nq: f64 = n.iter().zip(q).map(|(a, b)| a * b).sum();
            -I * (dot(n, grad) + dot(q, grad) * (kappa * nq))
        }
        Generator::Angular(_) => {
            let cross = [
                grad[2] * q[1] - grad[1] * q[2],
                grad[0] * q[2] - grad[2] * q[0],
                grad[1] * q[0] - grad[0] * q[1],
            ];
            -I * dot(n, cross)
        }
    }
}

fn check_window(q: &QPoint, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    if q.space == Space::Hyperbolic {
        let norm = q.q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm + 4.0 * h * 3f64.sqrt() >= 1.0 {
            return Err(Error::domain(format!(
                "stencil around |q| = {norm} leaves the hyperbolic ball q^2 < 1"
            )));
        }
    }
    Ok(())
}

/// Apply a q-space generator to `f` at `q`.
pub fn apply_generator<F>(spec: &OperatorSpec, f: &F, q: &QPoint) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let (OperatorDomain::QSpace(space), Some(g)) = (spec.domain, spec.generator()) else {
        return Err(Error::domain(
            "apply_generator needs a q-space momentum or angular component",
        ));
    };
    if space != q.space {
        return Err(Error::domain(format!("operator on {space}, point on {}", q.space)));
    }
    check_window(q, spec.step)?;
    Ok(raw_apply(space, g, f, q.q, spec.step))
}

/// `([A, B] f)(q)` by nested differences with step `h`.
pub fn commutator<F>(a: Generator, b: Generator, f: &F, q: &QPoint, h: f64) -> Result<Complex64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    check_window(q, 2.0 * h)?;
    let space = q.space;
    let bf = |x: [f64; 3]| raw_apply(space, b, f, x, h);
    let af = |x: [f64; 3]| raw_apply(space, a, f, x, h);
    Ok(raw_apply(space, a, &bf, q.q, h) - raw_apply(space, b, &af, q.q, h))
}

/// `|([A, B] - sum c_k G_k) f (q)|`.
pub fn commutator_residual<F>(
    a: Generator,
    b: Generator,
    expected: &[(Complex64, Generator)],
    f: &F,
    q: &QPoint,
    h: f64,
) -> Result<f64>
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    let lhs = commutator(a, b, f, q, h)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for &(c, g) in expected {
        rhs += c * raw_apply(q.space, g, f, q.q, h);
    }
    Ok((lhs - rhs).norm())
}

/// Coefficients of `[A, B]` on the basis `P1, P2, P3, L1, L2, L3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorFit {
    pub coefficients: [Complex64; 6],
    /// Largest residual of the fitted combination over the fitting functions.
    pub fit_residual: f64,
}

impl CommutatorFit {
    pub fn expansion(&self) -> Vec<(Complex64, Generator)> {
        self.coefficients.iter().copied().zip(Generator::basis()).collect()
    }
}

/// Least-squares fit of `[A, B]` against the six generators, using the
/// values of both sides on each test function at each fitting point. At a
/// single point the generators span only three directions, so at least two
/// points are needed for a unique fit.
pub fn fit_commutator(
    a: Generator,
    b: Generator,
    points: &[QPoint],
    functions: &[&(dyn Fn([f64; 3]) -> Complex64 + Sync)],
    h: f64,
) -> Result<CommutatorFit> {
    let rows = functions.len() * points.len();
    if rows < 6 {
        return Err(Error::domain(
            "fitting six coefficients needs at least six (point, function) pairs",
        ));
    }
    let basis = Generator::basis();
    let mut m = DMatrix::<Complex64>::zeros(rows, 6);
    let mut rhs = DVector::<Complex64>::zeros(rows);
    for (pi, q) in points.iter().enumerate() {
        for (fi, f) in functions.iter().enumerate() {
            let i = pi * functions.len() + fi;
            rhs[i] = commutator(a, b, *f, q, h)?;
            for (j, g) in basis.iter().enumerate() {
                m[(i, j)] = raw_apply(q.space, *g, *f, q.q, h);
            }
        }
    }
    let solution = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::domain(format!("commutator fit failed: {e}")))?;
    let fit_residual = (&m * &solution - &rhs).iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut coefficients = [Complex64::new(0.0, 0.0); 6];
    coefficients.copy_from_slice(solution.as_slice());
    Ok(CommutatorFit {
        coefficients,
        fit_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::COMMUTATOR_STEP;
    use crate::waves::{Branch, QPlaneWave};

    fn qspec(space: Space, g: Generator) -> OperatorSpec {
        let kind = match g {
            Generator::Momentum(n) => OperatorKind::MomentumComponent { n },
            Generator::Angular(n) => OperatorKind::AngularMomentumComponent { n },
        };
        OperatorSpec::new(kind, OperatorDomain::QSpace(space), 1e-3).unwrap()
    }

    #[test]
    fn rotation_invariant_function() {
        let f = |q: [f64; 3]| Complex64::new(q[0] * q[0] + q[1] * q[1], 0.0);
        let q = QPoint::new(Space::Spherical, [0.3, -0.7, 1.1]).unwrap();
        let v = apply_generator(&qspec(Space::Spherical, Generator::l(2)), &f, &q).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn hyperbolic_domain() {
        assert!(QPoint::new(Space::Hyperbolic, [0.8, 0.7, 0.0]).is_err());
        assert!(QPoint::new(Space::Spherical, [0.8, 0.7, 0.0]).is_ok());
        assert!(OperatorSpec::new(
            OperatorKind::MomentumComponent { n: [0.0, 0.0, 2.0] },
            OperatorDomain::QSpace(Space::Hyperbolic),
            1e-3
        )
        .is_err());
    }

    #[test]
    fn q_plane_wave_eigenvalues() {
        for space in [Space::Hyperbolic, Space::Spherical] {
            let w = QPlaneWave::new(space, [0.0, 0.0, 1.0], 2.0, Branch::Plus).unwrap();
            let spec = qspec(space, Generator::p(2));
            for q in [[0.1, 0.2, 0.3], [-0.4, 0.1, 0.2]] {
                let q = QPoint::new(space, q).unwrap();
                let ratio = apply_generator(&spec, &|x| w.eval(x), &q).unwrap() / w.eval(q.q());
                assert!((ratio - w.eigenvalue()).norm() < 1e-9, "{space}: {ratio}");
            }
        }
    }

    #[test]
    fn angular_commutator() {
        let f = |q: [f64; 3]| {
            let q2: f64 = q.iter().map(|v| v * v).sum();
            Complex64::new((-q2).exp() * (1.0 + q[0] * q[2]), 0.0)
        };
        let q = QPoint::new(Space::Spherical, [0.2, -0.3, 0.4]).unwrap();
        let res = commutator_residual(
            Generator::l(0),
            Generator::l(1),
            &[(I, Generator::l(2))],
            &f,
            &q,
            COMMUTATOR_STEP,
        )
        .unwrap();
        assert!(res < 1e-4, "{res}");
        let zero = commutator(Generator::p(2), Generator::p(2), &f, &q, COMMUTATOR_STEP).unwrap();
        assert_eq!(zero, Complex64::new(0.0, 0.0));
    }
}
