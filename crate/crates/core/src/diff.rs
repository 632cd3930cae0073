//! Fourth-order central difference stencils.
//!
//! Every stencil samples the function at `x - 2h .. x + 2h`; callers are
//! responsible for keeping that window inside the function's domain.

use num_complex::Complex64;

/// First derivative, error `O(h^4)`.
pub fn d1<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    (f(x - 2.0 * h) - f(x + 2.0 * h) + (f(x + h) - f(x - h)) * 8.0) / (12.0 * h)
}

/// Second derivative, error `O(h^4)`.
pub fn d2<F>(f: F, x: f64, h: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let centre = f(x);
    (-(f(x + 2.0 * h) + f(x - 2.0 * h)) + (f(x + h) + f(x - h)) * 16.0 - centre * 30.0) / (12.0 * h * h)
}

/// Partial derivative of a function of three real variables along `axis`.
pub fn partial<F>(f: &F, x: [f64; 3], axis: usize, h: f64) -> Complex64
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    d1(|t| f(shifted(x, axis, t - x[axis])), x[axis], h)
}

/// Second partial derivative along one axis.
pub fn partial2<F>(f: &F, x: [f64; 3], axis: usize, h: f64) -> Complex64
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    d2(|t| f(shifted(x, axis, t - x[axis])), x[axis], h)
}

/// Mixed partial `d^2 f / dx_i dx_j` for `i != j`, built as a tensor product
/// of first-derivative stencils (16 evaluations).
pub fn mixed<F>(f: &F, x: [f64; 3], i: usize, j: usize, hi: f64, hj: f64) -> Complex64
where
    F: Fn([f64; 3]) -> Complex64 + ?Sized,
{
    debug_assert_ne!(i, j);
    let inner = |t: f64| partial(f, shifted(x, i, t - x[i]), j, hj);
    d1(inner, x[i], hi)
}

/// Gradient of a real-valued map `R^3 -> R^4` by columns: `jac[k][i] = du_k/dx_i`.
pub fn jacobian4<F>(f: &F, x: [f64; 3], h: f64) -> [[f64; 3]; 4]
where
    F: Fn([f64; 3]) -> [f64; 4] + ?Sized,
{
    let mut jac = [[0.0; 3]; 4];
    for i in 0..3 {
        let p2 = f(shifted(x, i, 2.0 * h));
        let p1 = f(shifted(x, i, h));
        let m1 = f(shifted(x, i, -h));
        let m2 = f(shifted(x, i, -2.0 * h));
        for k in 0..4 {
            jac[k][i] = (m2[k] - p2[k] + 8.0 * (p1[k] - m1[k])) / (12.0 * h);
        }
    }
    jac
}

pub(crate) fn shifted(mut x: [f64; 3], axis: usize, by: f64) -> [f64; 3] {
    x[axis] += by;
    x
}
