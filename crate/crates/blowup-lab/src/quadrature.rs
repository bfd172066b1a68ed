//! Composite trapezoid quadrature and L^p norms of nodal fields.
//!
//! One quadrature rule is used everywhere — space integrals, inner
//! products, and time integrals over stored norm series — so that
//! every integral in the fence machinery carries the same O(dx^2)
//! error model. For smooth rapidly decaying integrands (Gaussians,
//! heat kernels) the trapezoid rule on a uniform mesh is far better
//! than its generic order suggests, which is what makes the frozen
//! reference values below meaningful at tight tolerances.

use crate::error::{Error, Result};
use crate::grid::ScalarField;

/// ∫ field dx by the composite trapezoid rule over the whole grid.
pub fn integrate(field: &ScalarField) -> f64 {
    let dx = field.grid().dx();
    let v = field.values();
    let n = v.len();
    let mut sum = 0.5 * (v[0] + v[n - 1]);
    for &x in &v[1..n - 1] {
        sum += x;
    }
    sum * dx
}

/// ⟨a, b⟩ = ∫ a·b dx on a shared grid.
pub fn integrate_product(a: &ScalarField, b: &ScalarField) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let dx = a.grid().dx();
    let (va, vb) = (a.values(), b.values());
    let n = va.len();
    let mut sum = 0.5 * (va[0] * vb[0] + va[n - 1] * vb[n - 1]);
    for i in 1..n - 1 {
        sum += va[i] * vb[i];
    }
    Ok(sum * dx)
}

/// Trapezoid over irregularly spaced samples (used for time integrals
/// over stored norm series). Assumes `times` strictly increasing.
pub(crate) fn trapezoid_samples(times: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    let mut sum = 0.0;
    for i in 1..times.len() {
        sum += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
    }
    sum
}

/// L^p norm of a field, `p ∈ [1, ∞]`.
///
/// The essential-sup norm is requested by passing `f64::INFINITY` for
/// `p`; it is the plain max of |values| with no quadrature weight.
/// Finite p uses trapezoid quadrature of |v|^p with the largest value
/// factored out first, so huge fields neither overflow nor lose the
/// leading digits.
pub fn norm_lp(field: &ScalarField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param(
            "p",
            format!("norm order must satisfy p >= 1 (or be the +inf sentinel), got {p}"),
        ));
    }
    let vmax = field.values().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if p == f64::INFINITY {
        return Ok(vmax);
    }
    if vmax == 0.0 {
        return Ok(0.0);
    }
    let dx = field.grid().dx();
    let v = field.values();
    let n = v.len();
    let term = |x: f64| (x.abs() / vmax).powf(p);
    let mut sum = 0.5 * (term(v[0]) + term(v[n - 1]));
    for &x in &v[1..n - 1] {
        sum += term(x);
    }
    Ok(vmax * (sum * dx).powf(1.0 / p))
}
