//! Error function, complementary error function, and the heat kernel.
//!
//! `erf`/`erfc` follow W. J. Cody's rational Chebyshev approximations
//! (the classical SPECFUN scheme): one rational form in x^2 on
//! |x| <= 0.46875, a rational form times exp(-x^2) on the middle range,
//! and an asymptotic rational form in 1/x^2 beyond 4. Absolute error is
//! far below the 1e-12 the tail estimates here need; `erfc` keeps full
//! relative accuracy deep into the tail, which is what the domain
//! truncation bounds actually consume.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ScalarField};

/// 1/sqrt(pi), to double precision.
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_28;

const THRESH: f64 = 0.46875;
/// erfc underflows to zero past this argument.
const XBIG: f64 = 26.543;

// Rational coefficients for erf on |x| <= 0.46875.
const A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];

// Rational coefficients for erfc on 0.46875 < x <= 4.
const C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];

// Asymptotic coefficients for erfc on x > 4.
const P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

/// erf on the central interval |x| <= 0.46875.
fn erf_central(x: f64) -> f64 {
    let ysq = if x.abs() > 1.11e-16 { x * x } else { 0.0 };
    let mut num = A[4] * ysq;
    let mut den = ysq;
    for i in 0..3 {
        num = (num + A[i]) * ysq;
        den = (den + B[i]) * ysq;
    }
    x * (num + A[3]) / (den + B[3])
}

/// exp(-y^2) evaluated as exp(-hi^2)*exp(-del) with hi a 1/16-grid
/// truncation of y; keeps erfc relatively accurate deep in the tail.
fn exp_minus_sq(y: f64) -> f64 {
    let hi = (y * 16.0).trunc() / 16.0;
    let del = (y - hi) * (y + hi);
    (-hi * hi).exp() * (-del).exp()
}

/// erfc for y in (0.46875, 4].
fn erfc_mid(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    exp_minus_sq(y) * (num + C[7]) / (den + D[7])
}

/// erfc for y > 4, including the underflow cutoff.
fn erfc_tail(y: f64) -> f64 {
    if y >= XBIG {
        return 0.0;
    }
    let ysq = 1.0 / (y * y);
    let mut num = P[5] * ysq;
    let mut den = ysq;
    for i in 0..4 {
        num = (num + P[i]) * ysq;
        den = (den + Q[i]) * ysq;
    }
    let r = ysq * (num + P[4]) / (den + Q[4]);
    exp_minus_sq(y) * (FRAC_1_SQRT_PI - r) / y
}

/// The error function erf(x) = (2/sqrt(pi)) ∫_0^x exp(-s^2) ds.
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        return erf_central(x);
    }
    let tail = if y <= 4.0 { erfc_mid(y) } else { erfc_tail(y) };
    let r = (0.5 - tail) + 0.5;
    if x < 0.0 {
        -r
    } else {
        r
    }
}

/// The complementary error function erfc(x) = 1 − erf(x), computed
/// directly so the decaying tail keeps its relative accuracy.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    let r = if y <= THRESH {
        1.0 - erf_central(x.abs())
    } else if y <= 4.0 {
        erfc_mid(y)
    } else {
        erfc_tail(y)
    };
    if x < 0.0 {
        2.0 - r
    } else {
        r
    }
}

/// The fundamental solution of the heat equation on the line:
/// `(4πt)^{-1/2} exp(-(x-x0)^2 / 4t)`. Requires `t > 0`.
pub fn heat_kernel(t: f64, x: f64, x0: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::param("t", format!("heat kernel needs t > 0, got {t}")));
    }
    let d = x - x0;
    Ok((4.0 * std::f64::consts::PI * t).sqrt().recip() * (-d * d / (4.0 * t)).exp())
}

/// The heat kernel sampled over a whole grid.
pub fn heat_kernel_field(grid: Grid1D, t: f64, x0: f64) -> Result<ScalarField> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::param("t", format!("heat kernel needs t > 0, got {t}")));
    }
    let amp = (4.0 * std::f64::consts::PI * t).sqrt().recip();
    let inv4t = 1.0 / (4.0 * t);
    ScalarField::from_fn(grid, |x| {
        let d = x - x0;
        amp * (-d * d * inv4t).exp()
    })
}
