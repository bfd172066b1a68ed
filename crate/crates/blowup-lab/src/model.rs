//! The damping coefficient, the Gaussian initial-data family, and the
//! constant-selection procedure that assembles a certified blow-up
//! configuration.
//!
//! The construction picks, in order: an amplitude `β` a fixed fraction
//! below its admissible bound, the tail level `γ` tied to `β` through
//! the ratio `β/(27γ²) = K`, a point `x1` to the left of which the
//! coefficient `f` stays below `γ`, and a center `x0 < x1` far enough
//! out that heat flow starting at `x0` barely feels `f` over the whole
//! time window `(0, 1/(4γ²)]`. Each step is a one-dimensional monotone
//! search, so plain bisection is exact enough for every tolerance used
//! downstream.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ScalarField};
use crate::special::erfc;

/// The damping coefficient `f ≥ 0`.
///
/// Three kinds cover the experiments: a Gaussian bump centered at the
/// origin (`a·exp(−(x/b)²)`), a constant level, and zero. Derivative
/// sups are closed forms, so configurations can state their
/// smoothness budget without sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    GaussianBump { amplitude: f64, width: f64 },
    Constant(f64),
    Zero,
}

impl Potential {
    pub fn gaussian_bump(amplitude: f64, width: f64) -> Result<Self> {
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(Error::param("amplitude", format!("must be > 0, got {amplitude}")));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::param("width", format!("must be > 0, got {width}")));
        }
        Ok(Potential::GaussianBump { amplitude, width })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::param("c", format!("must be >= 0, got {c}")));
        }
        Ok(Potential::Constant(c))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Potential::GaussianBump { amplitude, width } => {
                let u = x / width;
                amplitude * (-u * u).exp()
            }
            Potential::Constant(c) => c,
            Potential::Zero => 0.0,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match *self {
            Potential::GaussianBump { amplitude, .. } => amplitude,
            Potential::Constant(c) => c,
            Potential::Zero => 0.0,
        }
    }

    /// sup |f'|; for the bump the extremum sits at x = b/√2.
    pub fn deriv_sup(&self) -> f64 {
        match *self {
            Potential::GaussianBump { amplitude, width } => {
                amplitude / width * std::f64::consts::SQRT_2 * (-0.5f64).exp()
            }
            _ => 0.0,
        }
    }

    /// sup |f''|; for the bump the extremum sits at the center.
    pub fn second_deriv_sup(&self) -> f64 {
        match *self {
            Potential::GaussianBump { amplitude, width } => 2.0 * amplitude / (width * width),
            _ => 0.0,
        }
    }

    /// Whether f(x) → 0 as |x| → ∞. A positive constant does not decay
    /// and cannot support the far-field construction.
    pub fn decays(&self) -> bool {
        match *self {
            Potential::GaussianBump { .. } => true,
            Potential::Constant(c) => c == 0.0,
            Potential::Zero => true,
        }
    }

    pub fn to_field(&self, grid: Grid1D) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.eval(x)).expect("potential values are finite")
    }
}

/// The nonpositive Gaussian initial profile
/// `h(x) = −β · exp(−β^{3/2} (x − center)²)`.
///
/// Its three norms drive the whole construction: `‖h‖_∞ = β`,
/// `‖h‖₁ = √π · β^{1/4}` (Gaussian integral), and the curvature bound
/// `μ = ‖h''‖_∞ = 2β^{5/2}` attained at the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIc {
    beta: f64,
    center: f64,
}

impl GaussianIc {
    pub fn new(beta: f64, center: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::param("beta", format!("must be > 0, got {beta}")));
        }
        if !center.is_finite() {
            return Err(Error::param("center", format!("must be finite, got {center}")));
        }
        Ok(GaussianIc { beta, center })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn eval(&self, x: f64) -> f64 {
        let d = x - self.center;
        -self.beta * (-self.beta.powf(1.5) * d * d).exp()
    }

    /// `‖h‖_∞ = β`.
    pub fn sup_norm(&self) -> f64 {
        self.beta
    }

    /// `μ = ‖h''‖_∞ = 2β^{5/2}`, attained at the center.
    pub fn curvature_sup(&self) -> f64 {
        2.0 * self.beta.powf(2.5)
    }

    /// Closed-form `‖h‖₁ = √π · β^{1/4}` on the whole line.
    pub fn norm_l1_exact(&self) -> f64 {
        std::f64::consts::PI.sqrt() * self.beta.powf(0.25)
    }

    /// 1/e-width of the profile, `β^{-3/4}`; useful for sizing grids.
    pub fn width(&self) -> f64 {
        self.beta.powf(-0.75)
    }

    pub fn to_field(&self, grid: Grid1D) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.eval(x)).expect("profile values are finite")
    }
}

/// Result of the left-tail search: either a concrete bound or the
/// sentinel meaning "f never exceeds the level anywhere".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    Finite(f64),
    Unbounded,
}

/// Largest `x1` with `f(x) ≤ gamma` for every `x < x1`, found by
/// bisection on the left tail.
///
/// Returns [`TailBound::Unbounded`] when `gamma ≥ sup f` (every x
/// qualifies). A positive constant above `gamma` has no admissible
/// `x1` at all; that case is an error naming the decay requirement.
pub fn find_x1(f: &Potential, gamma: f64) -> Result<TailBound> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param("gamma", format!("must be > 0, got {gamma}")));
    }
    if gamma >= f.sup_norm() {
        return Ok(TailBound::Unbounded);
    }
    match *f {
        Potential::Zero => Ok(TailBound::Unbounded),
        Potential::Constant(_) => Err(Error::DecayRequired { gamma }),
        Potential::GaussianBump { width, .. } => {
            // f is increasing on the left tail, so bracket the level
            // crossing and bisect. hi = center (f = sup > gamma there).
            let mut hi = 0.0;
            let mut lo = -width;
            let mut steps = 0;
            while f.eval(lo) > gamma {
                lo *= 2.0;
                steps += 1;
                if steps > 200 {
                    return Err(Error::param(
                        "gamma",
                        format!("no left-tail crossing found down to x = {lo}"),
                    ));
                }
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f.eval(mid) > gamma {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-13 * lo.abs().max(1.0) {
                    break;
                }
            }
            // lo is the safe side: f(x) <= gamma for all x <= lo.
            Ok(TailBound::Finite(lo))
        }
    }
}

/// The far-field tail expression `√t · ‖f‖_∞ · erfc((x1 − x0)/(2√t))`,
/// which must stay below γ throughout the window. It is increasing in
/// t (for x0 < x1), so its worst case is the window endpoint.
pub fn tail_condition_lhs(f: &Potential, x1: f64, x0: f64, t: f64) -> f64 {
    let st = t.sqrt();
    st * f.sup_norm() * erfc((x1 - x0) / (2.0 * st))
}

/// Center `x0 < x1` making the tail condition hold over the whole
/// window `(0, 1/(4γ²)]` with a 10% safety margin.
///
/// At the worst-case time `t = 1/(4γ²)` the condition collapses to
/// `erfc((x1 − x0)·γ) < 2γ²/‖f‖_∞`; the margin target
/// `erfc(u) = 0.9 · 2γ²/‖f‖_∞` is solved for `u` by bisection
/// (erfc is strictly decreasing).
pub fn find_x0(f: &Potential, gamma: f64, x1: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param("gamma", format!("must be > 0, got {gamma}")));
    }
    if !x1.is_finite() {
        return Err(Error::param("x1", format!("must be finite, got {x1}")));
    }
    let sup = f.sup_norm();
    if sup == 0.0 {
        // Condition is vacuous; any point to the left works.
        return Ok(x1 - 1.0);
    }
    if !f.decays() {
        return Err(Error::DecayRequired { gamma });
    }
    let target = 0.9 * 2.0 * gamma * gamma / sup;
    if target >= 1.0 {
        // erfc(u) <= 1 for u >= 0: even zero separation satisfies the
        // margin, but keep x0 strictly left of x1.
        return Ok(x1 - 1.0);
    }
    // erfc underflows to 0 near u = 27, so a valid crossing exists for
    // every representable positive target.
    let (mut lo, mut hi) = (0.0f64, 27.0f64);
    if erfc(hi) >= target {
        return Err(Error::param(
            "gamma",
            format!("tail target {target:.3e} below erfc underflow"),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if erfc(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    // hi is the safe side: erfc(hi) <= target.
    Ok(x1 - hi / gamma)
}

/// The constant bundle produced by the selection procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremParams {
    pub epsilon: f64,
    /// The target ratio K = β/(27γ²); the certificate's leading value.
    pub k_ratio: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x1: f64,
    pub x0: f64,
    /// The admissible time window endpoint, 1/(4γ²).
    pub t_window: f64,
}

impl TheoremParams {
    /// Re-checks every structural invariant against the coefficient
    /// the bundle was built for. Sampling is log-spaced: the two
    /// far-field conditions are monotone, so endpoint plus samples is
    /// a sound check.
    pub fn validate(&self, f: &Potential) -> Result<()> {
        let bound = self.epsilon.min(self.epsilon.powi(4) / (16.0 * std::f64::consts::PI.powi(2)));
        if !(self.epsilon > 0.0) {
            return Err(Error::param("epsilon", "must be > 0"));
        }
        if !(self.k_ratio > 1.0) {
            return Err(Error::param("k_ratio", "must be > 1"));
        }
        if !(self.beta > 0.0 && self.beta < bound) {
            return Err(Error::param(
                "beta",
                format!("must lie in (0, {bound:.6e}), got {:.6e}", self.beta),
            ));
        }
        let k_back = self.beta / (27.0 * self.gamma * self.gamma);
        if ((k_back - self.k_ratio) / self.k_ratio).abs() > 1e-9 {
            return Err(Error::param(
                "gamma",
                format!("beta/(27 gamma^2) = {k_back}, want {}", self.k_ratio),
            ));
        }
        if ((self.t_window - 1.0 / (4.0 * self.gamma * self.gamma)) / self.t_window).abs() > 1e-12 {
            return Err(Error::param("t_window", "must equal 1/(4 gamma^2)"));
        }
        if !(self.x0 < self.x1) {
            return Err(Error::param("x0", format!("must be < x1 = {}", self.x1)));
        }
        // f stays below gamma left of x1: sampled over nine decades of
        // distance (f is monotone there for the provided kinds).
        for k in 0..=36 {
            let d = 10f64.powf(-3.0 + k as f64 * 0.25);
            let x = self.x1 - d;
            let val = f.eval(x);
            if val > self.gamma * (1.0 + 1e-9) {
                return Err(Error::param(
                    "x1",
                    format!("f({x}) = {val:.6e} exceeds gamma = {:.6e}", self.gamma),
                ));
            }
        }
        // Far-field condition over the window, endpoint included.
        for k in 0..=27 {
            let t = self.t_window * 10f64.powf(-(k as f64) / 3.0);
            let lhs = tail_condition_lhs(f, self.x1, self.x0, t);
            if !(lhs < self.gamma) {
                return Err(Error::param(
                    "x0",
                    format!("tail condition fails at t = {t:.6e}: {lhs:.6e} >= {:.6e}", self.gamma),
                ));
            }
        }
        Ok(())
    }
}

/// Runs the full selection procedure:
/// `β = 0.9·min{ε, ε⁴/(16π²)}`, `γ = √(β/(27K))`, then the two
/// far-field searches. The fixed 90% fraction makes runs reproducible
/// where "sufficiently small" would not be.
pub fn select_parameters(epsilon: f64, k_ratio: f64, f: &Potential) -> Result<TheoremParams> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::param("epsilon", format!("must be > 0, got {epsilon}")));
    }
    if !(k_ratio > 1.0) || !k_ratio.is_finite() {
        return Err(Error::param("k_ratio", format!("must be > 1, got {k_ratio}")));
    }
    let beta = 0.9 * epsilon.min(epsilon.powi(4) / (16.0 * std::f64::consts::PI.powi(2)));
    let gamma = (beta / (27.0 * k_ratio)).sqrt();
    let x1 = match find_x1(f, gamma)? {
        TailBound::Finite(v) => v,
        // f never exceeds gamma; any finite anchor works, take the origin.
        TailBound::Unbounded => 0.0,
    };
    let x0 = find_x0(f, gamma, x1)?;
    let params = TheoremParams {
        epsilon,
        k_ratio,
        beta,
        gamma,
        x1,
        x0,
        t_window: 1.0 / (4.0 * gamma * gamma),
    };
    params.validate(f)?;
    Ok(params)
}
