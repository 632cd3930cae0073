//! Differential operators applied numerically to wave functions: the chart
//! Hamiltonians `H = -(1/2) Laplace-Beltrami`, the momentum component `P3`
//! in the charts that carry one, and the generators `P`, `L` in the
//! projective coordinates `q = u / u0`.

mod beltrami;
mod generators;

pub use beltrami::{
    apply_hamiltonian, apply_hamiltonian_in, apply_p3, laplace_beltrami_wirtinger, local_steps, p3_chart,
    p3_holomorphic, radial_step, COMMUTATOR_STEP, DEFAULT_STEP, HAMILTONIAN_STEP, INTERIOR_STEPS,
};
pub use generators::{
    apply_generator, commutator, commutator_residual, fit_commutator, CommutatorFit, Generator, OperatorDomain,
    OperatorKind, OperatorSpec, QPoint,
};
