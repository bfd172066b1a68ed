//! Time integration for the nonlinear reaction–diffusion problem, its
//! linearization, and plain heat flow, plus blow-up detection and
//! comparison checks.
//!
//! One scheme drives all three problems: Crank–Nicolson on the full
//! linear part `u_xx − 2 f u` (a tridiagonal solve per step), with the
//! nonlinear sink `−|u|^k` added explicitly. Keeping `−2fu` inside the
//! implicit half makes the update a rational function of a single
//! operator that is self-adjoint under the trapezoid weights, so the
//! duality pairing used by the fence module is conserved to rounding
//! on linear runs, and discrete mass bookkeeping is exact rather than
//! first-order.
//!
//! Guidance for configs: the scheme is unconditionally stable, but
//! sign preservation and pointwise comparisons are guaranteed only
//! when `dt/dx² + dt·sup f ≤ 1` (the explicit half of the update then
//! has nonnegative coefficients). The built-in configurations keep
//! that ratio at or below one.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, ScalarField, TimeSeries};
use crate::model::Potential;
use crate::quadrature::norm_lp;
use crate::special::heat_kernel_field;

/// Boundary treatment at the truncation points.
///
/// Neumann (mirror ghost) conserves discrete mass exactly for heat
/// flow; Dirichlet pins the ends to zero for decay experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Neumann,
    DirichletZero,
}

/// Run configuration shared by all three solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub grid: Grid1D,
    pub t_end: f64,
    /// Accuracy-motivated step cap; the adaptive rule only shrinks it.
    pub dt_init: f64,
    /// Floor below which the run halts and reports a blow-up.
    pub dt_min: f64,
    pub boundary: Boundary,
    /// Exponent k in the sink term −|u|^k (k ≥ 2).
    pub nonlinearity_degree: f64,
    /// Sup-norm level treated as numerically infinite.
    pub blowup_threshold: f64,
    /// Record every stride-th step (step 0 and the final step always).
    pub snapshot_stride: usize,
}

impl SimConfig {
    pub fn new(grid: Grid1D, t_end: f64, dt_init: f64) -> Self {
        SimConfig {
            grid,
            t_end,
            dt_init,
            dt_min: 1e-12,
            boundary: Boundary::Neumann,
            nonlinearity_degree: 2.0,
            blowup_threshold: 1e6,
            snapshot_stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::param("t_end", format!("must be > 0, got {}", self.t_end)));
        }
        if !(self.dt_init > 0.0) || !self.dt_init.is_finite() {
            return Err(Error::param("dt_init", format!("must be > 0, got {}", self.dt_init)));
        }
        if !(self.dt_min > 0.0) || !(self.dt_min < self.dt_init) {
            return Err(Error::param(
                "dt_min",
                format!("must satisfy 0 < dt_min < dt_init, got {}", self.dt_min),
            ));
        }
        if !(self.nonlinearity_degree >= 2.0) || !self.nonlinearity_degree.is_finite() {
            return Err(Error::param(
                "nonlinearity_degree",
                format!("must be >= 2, got {}", self.nonlinearity_degree),
            ));
        }
        if !(self.blowup_threshold > 0.0) || !self.blowup_threshold.is_finite() {
            return Err(Error::param(
                "blowup_threshold",
                format!("must be > 0, got {}", self.blowup_threshold),
            ));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::param("snapshot_stride", "must be >= 1"));
        }
        Ok(())
    }
}

/// Initial data for the linear solvers: a concrete profile, or a unit
/// point mass realized by an exact-kernel warm start at t = dx².
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Field(ScalarField),
    Delta { center: f64 },
}

/// A completed run: snapshots plus sup- and L¹-norm series sampled at
/// exactly the snapshot times, so the series can always be recomputed
/// from the stored fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    snapshots: Vec<(f64, ScalarField)>,
    norm_inf: TimeSeries,
    norm_1: TimeSeries,
}

impl Trajectory {
    /// Builds a trajectory from raw snapshots, computing the norm
    /// series on the spot. Times must be strictly increasing and all
    /// fields must share one grid.
    pub fn from_snapshots(snapshots: Vec<(f64, ScalarField)>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::InvalidSeries("trajectory needs at least one snapshot".into()));
        }
        let grid = snapshots[0].1.grid();
        let mut times = Vec::with_capacity(snapshots.len());
        let mut vinf = Vec::with_capacity(snapshots.len());
        let mut v1 = Vec::with_capacity(snapshots.len());
        for (t, field) in &snapshots {
            if field.grid() != grid {
                return Err(Error::GridMismatch);
            }
            if let Some(last) = times.last() {
                if *t <= *last {
                    return Err(Error::InvalidSeries(format!(
                        "snapshot times must increase strictly, got {t} after {last}"
                    )));
                }
            }
            times.push(*t);
            vinf.push(norm_lp(field, f64::INFINITY)?);
            v1.push(norm_lp(field, 1.0)?);
        }
        Ok(Trajectory {
            snapshots,
            norm_inf: TimeSeries::new(times.clone(), vinf)?,
            norm_1: TimeSeries::new(times, v1)?,
        })
    }

    pub fn snapshots(&self) -> &[(f64, ScalarField)] {
        &self.snapshots
    }

    pub fn norm_inf(&self) -> &TimeSeries {
        &self.norm_inf
    }

    pub fn norm_1(&self) -> &TimeSeries {
        &self.norm_1
    }

    pub fn grid(&self) -> Grid1D {
        self.snapshots[0].1.grid()
    }

    pub fn start_time(&self) -> f64 {
        self.snapshots[0].0
    }

    pub fn end_time(&self) -> f64 {
        self.snapshots[self.snapshots.len() - 1].0
    }

    pub fn final_snapshot(&self) -> (f64, &ScalarField) {
        let (t, f) = &self.snapshots[self.snapshots.len() - 1];
        (*t, f)
    }

    /// The stored field at time `t`, linearly interpolated between the
    /// two bracketing snapshots; exact at snapshot times.
    pub fn sample_at(&self, t: f64) -> Result<ScalarField> {
        let (t0, t1) = (self.start_time(), self.end_time());
        if !(t >= t0 && t <= t1) {
            return Err(Error::TimeOutOfRange { t, start: t0, end: t1 });
        }
        let idx = self.snapshots.partition_point(|(s, _)| *s <= t);
        if idx > 0 && self.snapshots[idx - 1].0 == t {
            return Ok(self.snapshots[idx - 1].1.clone());
        }
        let (ta, fa) = &self.snapshots[idx - 1];
        let (tb, fb) = &self.snapshots[idx];
        let lam = (t - ta) / (tb - ta);
        let vals = fa
            .values()
            .iter()
            .zip(fb.values())
            .map(|(a, b)| a + lam * (b - a))
            .collect();
        ScalarField::new(self.grid(), vals)
    }
}

/// How a blow-up time estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupMethod {
    ThresholdCrossing,
    ReciprocalExtrapolation,
    None,
}

/// Outcome of a nonlinear run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupReport {
    pub blew_up: bool,
    pub t_est: Option<f64>,
    pub method: BlowupMethod,
    pub final_time_reached: f64,
}

/// Solves a tridiagonal system in place; the solution lands in `rhs`.
/// `sub[i]` multiplies x[i−1] in row i, `sup[i]` multiplies x[i+1];
/// `diag` and `rhs` are overwritten.
fn thomas_solve(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
}

/// Scratch buffers reused across steps.
struct StepBuffers {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
}

/// One Crank–Nicolson step of u_t = u_xx − 2fu (+ explicit −|u|^k when
/// `nonlinear_k` is set). Overwrites `u` with the new state.
fn cn_step(
    u: &mut Vec<f64>,
    buf: &mut StepBuffers,
    f_vals: &[f64],
    dx: f64,
    dt: f64,
    boundary: Boundary,
    nonlinear_k: Option<f64>,
    t_next: f64,
) -> Result<()> {
    let n = u.len();
    let r = dt / (dx * dx);
    let (sub, diag, sup, rhs) = (&mut buf.sub, &mut buf.diag, &mut buf.sup, &mut buf.rhs);

    // Explicit half: rhs = (I + (dt/2)(T − 2F)) u, mirror-ghost rows at
    // the ends for Neumann.
    rhs[0] = (1.0 - r - dt * f_vals[0]) * u[0] + r * u[1];
    for i in 1..n - 1 {
        rhs[i] = (1.0 - r - dt * f_vals[i]) * u[i] + 0.5 * r * (u[i - 1] + u[i + 1]);
    }
    rhs[n - 1] = (1.0 - r - dt * f_vals[n - 1]) * u[n - 1] + r * u[n - 2];

    if let Some(k) = nonlinear_k {
        if k == 2.0 {
            for i in 0..n {
                rhs[i] -= dt * u[i] * u[i];
            }
        } else {
            for i in 0..n {
                rhs[i] -= dt * u[i].abs().powf(k);
            }
        }
    }

    // Implicit half: (I − (dt/2)(T − 2F)) u_next = rhs.
    for i in 0..n {
        sub[i] = -0.5 * r;
        diag[i] = 1.0 + r + dt * f_vals[i];
        sup[i] = -0.5 * r;
    }
    sub[0] = 0.0;
    sup[0] = -r;
    sub[n - 1] = -r;
    sup[n - 1] = 0.0;

    if boundary == Boundary::DirichletZero {
        diag[0] = 1.0;
        sup[0] = 0.0;
        rhs[0] = 0.0;
        diag[n - 1] = 1.0;
        sub[n - 1] = 0.0;
        rhs[n - 1] = 0.0;
    }

    thomas_solve(sub, diag, sup, rhs);

    for &v in rhs.iter() {
        if !v.is_finite() {
            return Err(Error::NonFiniteState { t: t_next });
        }
    }
    std::mem::swap(u, rhs);
    Ok(())
}

/// Snapshot recorder honoring the stride, with step 0 and the final
/// state always included.
struct Recorder {
    grid: Grid1D,
    stride: usize,
    snapshots: Vec<(f64, ScalarField)>,
}

impl Recorder {
    fn new(grid: Grid1D, stride: usize) -> Self {
        Recorder { grid, stride, snapshots: Vec::new() }
    }

    fn push(&mut self, t: f64, u: &[f64]) -> Result<()> {
        if let Some((last, _)) = self.snapshots.last() {
            if t <= *last {
                return Ok(());
            }
        }
        let field = ScalarField::new(self.grid, u.to_vec())?;
        self.snapshots.push((t, field));
        Ok(())
    }

    fn due(&self, step: u64) -> bool {
        step % self.stride as u64 == 0
    }

    fn finish(self) -> Result<Trajectory> {
        Trajectory::from_snapshots(self.snapshots)
    }
}

enum Mode {
    Linear,
    Nonlinear { k: f64 },
}

struct RunOutcome {
    traj: Trajectory,
    floor_hit: bool,
    final_time: f64,
}

/// The shared stepping loop. Linear runs use a constant dt (the cap),
/// with step times formed as t0 + n·dt so two runs over the same span
/// share bit-identical snapshot times; nonlinear runs adapt dt to the
/// reaction strength.
fn run(
    f: &Potential,
    u0: Vec<f64>,
    t0: f64,
    cfg: &SimConfig,
    mode: Mode,
) -> Result<RunOutcome> {
    let grid = cfg.grid;
    let n = grid.n_points();
    let dx = grid.dx();
    let f_vals: Vec<f64> = grid.nodes().map(|x| f.eval(x)).collect();
    let f_sup = f.sup_norm();

    let mut buf = StepBuffers {
        sub: vec![0.0; n],
        diag: vec![0.0; n],
        sup: vec![0.0; n],
        rhs: vec![0.0; n],
    };
    let mut rec = Recorder::new(grid, cfg.snapshot_stride);
    let mut u = u0;
    let mut t = t0;
    let mut step: u64 = 0;
    let mut floor_hit = false;
    rec.push(t, &u)?;

    while t < cfg.t_end {
        let mut dt = cfg.dt_init;
        let nonlinear_k = match mode {
            Mode::Linear => None,
            Mode::Nonlinear { k } => {
                let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let denom = k * sup.powf(k - 1.0) + 2.0 * f_sup;
                if denom > 0.0 {
                    dt = dt.min(0.5 / denom);
                }
                Some(k)
            }
        };
        if dt < cfg.dt_min {
            floor_hit = true;
            break;
        }
        // Land exactly on t_end; for constant-dt runs keep times on
        // the arithmetic progression t0 + n·dt to avoid drift.
        let planned = match mode {
            Mode::Linear => t0 + (step + 1) as f64 * dt,
            Mode::Nonlinear { .. } => t + dt,
        };
        let t_next = if planned >= cfg.t_end - 1e-9 * dt { cfg.t_end } else { planned };
        dt = t_next - t;

        cn_step(&mut u, &mut buf, &f_vals, dx, dt, cfg.boundary, nonlinear_k, t_next)?;
        t = t_next;
        step += 1;

        let crossed = match mode {
            Mode::Nonlinear { .. } => {
                let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                sup > cfg.blowup_threshold
            }
            Mode::Linear => false,
        };
        if rec.due(step) || crossed || t >= cfg.t_end {
            rec.push(t, &u)?;
        }
        if crossed {
            break;
        }
    }
    rec.push(t, &u)?;

    Ok(RunOutcome { traj: rec.finish()?, floor_hit, final_time: t })
}

fn field_values_on(grid: Grid1D, field: &ScalarField) -> Result<Vec<f64>> {
    if field.grid() != grid {
        return Err(Error::GridMismatch);
    }
    Ok(field.values().to_vec())
}

/// Evolves the full nonlinear problem u_t = u_xx − 2fu − |u|^k from
/// profile `h`, halting early when the sup norm crosses the threshold
/// or the adaptive step hits its floor; either halt is reported as a
/// blow-up with an estimated time.
pub fn solve_nonlinear(
    f: &Potential,
    h: &ScalarField,
    cfg: &SimConfig,
) -> Result<(Trajectory, BlowupReport)> {
    cfg.validate()?;
    let u0 = field_values_on(cfg.grid, h)?;

    // Truncation sanity: the profile should be numerically dead at the
    // domain ends, otherwise the artificial boundary shapes the run.
    let sup0 = h.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = h.value(0).abs().max(h.value(h.len() - 1).abs());
    if sup0 > 0.0 && edge >= 1e-10 * sup0 {
        log::warn!(
            "initial profile is not negligible at the domain boundary \
             (edge {:.3e} vs sup {:.3e}); widen the grid",
            edge,
            sup0
        );
    }

    let k = cfg.nonlinearity_degree;
    let out = run(f, u0, 0.0, cfg, Mode::Nonlinear { k })?;
    let mut report = detect_blowup(out.traj.norm_inf(), cfg.blowup_threshold, out.floor_hit, k);
    report.final_time_reached = out.final_time;
    if let Some(t_est) = report.t_est {
        report.t_est = Some(t_est.min(cfg.t_end));
    }
    Ok((out.traj, report))
}

/// Evolves the linearized problem w_t = w_xx − 2fw from nonnegative
/// data. Point-mass data is realized by an exact heat-kernel warm
/// start at t = dx², so the trajectory begins there instead of at 0.
pub fn solve_linearized(f: &Potential, w0: &InitialData, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let (vals, t0) = match w0 {
        InitialData::Field(field) => {
            let vals = field_values_on(cfg.grid, field)?;
            for (i, &v) in vals.iter().enumerate() {
                if v < 0.0 {
                    return Err(Error::NegativeData { index: i, value: v });
                }
            }
            (vals, 0.0)
        }
        InitialData::Delta { center } => {
            if !(*center > cfg.grid.x_min() && *center < cfg.grid.x_max()) {
                return Err(Error::param(
                    "center",
                    format!("must lie inside the grid, got {center}"),
                ));
            }
            let t_delta = cfg.grid.dx() * cfg.grid.dx();
            if cfg.t_end <= t_delta {
                return Err(Error::param(
                    "t_end",
                    format!("must exceed the warm-start time {t_delta:.3e}"),
                ));
            }
            let field = heat_kernel_field(cfg.grid, t_delta, *center)?;
            (field.values().to_vec(), t_delta)
        }
    };
    let out = run(f, vals, t0, cfg, Mode::Linear)?;
    Ok(out.traj)
}

/// Plain heat flow: the linearized solver with the coefficient off.
pub fn solve_heat(w0: &InitialData, cfg: &SimConfig) -> Result<Trajectory> {
    solve_linearized(&Potential::Zero, w0, cfg)
}

/// Least-squares root of v^{−(k−1)} against t over the given window;
/// None when the fit is unusable (nonpositive values, flat or rising
/// reciprocal).
fn reciprocal_root(times: &[f64], vals: &[f64], k: f64) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let mut ys = Vec::with_capacity(vals.len());
    for &v in vals {
        if v <= 0.0 {
            return None;
        }
        let y = v.powf(-(k - 1.0));
        if !y.is_finite() {
            return None;
        }
        ys.push(y);
    }
    let n = times.len() as f64;
    let tbar = times.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    for (t, y) in times.iter().zip(&ys) {
        stt += (t - tbar) * (t - tbar);
        sty += (t - tbar) * (y - ybar);
    }
    if stt == 0.0 {
        return None;
    }
    let slope = sty / stt;
    if slope >= 0.0 {
        return None;
    }
    Some(tbar - ybar / slope)
}

/// Classifies a sup-norm series: no blow-up if the threshold was never
/// crossed and the step floor never tripped; otherwise estimates the
/// blow-up time by straight-line extrapolation of ‖u‖^{−(k−1)} over
/// the last (up to ten) samples ending at the crossing, falling back
/// to the bracketed threshold crossing when the fit is implausible
/// (rising reciprocal, or a root far beyond the fitted window).
pub fn detect_blowup(
    norm_series: &TimeSeries,
    threshold: f64,
    dt_floor_hit: bool,
    nonlinearity_degree: f64,
) -> BlowupReport {
    let times = norm_series.times();
    let vals = norm_series.values();
    let final_time = *times.last().expect("series is nonempty");
    let crossing = vals.iter().position(|&v| v >= threshold);

    if crossing.is_none() && !dt_floor_hit {
        return BlowupReport {
            blew_up: false,
            t_est: None,
            method: BlowupMethod::None,
            final_time_reached: final_time,
        };
    }

    let j = crossing.unwrap_or(times.len() - 1);
    let lo = j.saturating_sub(9);
    let t_b = times[j];
    let span = t_b - times[lo];
    let fit = reciprocal_root(&times[lo..=j], &vals[lo..=j], nonlinearity_degree);

    let (t_est, method) = match fit {
        Some(root) if root >= t_b && span > 0.0 && root - t_b <= span => {
            (root, BlowupMethod::ReciprocalExtrapolation)
        }
        _ => match crossing {
            Some(0) => (times[0], BlowupMethod::ThresholdCrossing),
            Some(j) => {
                let (ta, tb) = (times[j - 1], times[j]);
                let (va, vb) = (vals[j - 1], vals[j]);
                let lam = ((threshold - va) / (vb - va)).clamp(0.0, 1.0);
                (ta + lam * (tb - ta), BlowupMethod::ThresholdCrossing)
            }
            None => (final_time, BlowupMethod::ThresholdCrossing),
        },
    };

    BlowupReport {
        blew_up: true,
        t_est: Some(t_est),
        method,
        final_time_reached: final_time,
    }
}

/// True iff `upper ≥ lower − tol` at every node and every sampled
/// time; times are the union of both snapshot sets over the common
/// window, with linear interpolation in between.
pub fn comparison_assert(upper: &Trajectory, lower: &Trajectory, tol: f64) -> Result<bool> {
    if upper.grid() != lower.grid() {
        return Err(Error::GridMismatch);
    }
    let t0 = upper.start_time().max(lower.start_time());
    let t1 = upper.end_time().min(lower.end_time());
    if t0 > t1 {
        return Err(Error::InvalidSeries(
            "trajectories share no common time window".into(),
        ));
    }
    let mut times: Vec<f64> = upper
        .snapshots()
        .iter()
        .chain(lower.snapshots())
        .map(|(t, _)| *t)
        .filter(|t| *t >= t0 && *t <= t1)
        .collect();
    times.push(t0);
    times.push(t1);
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();

    for t in times {
        let hi = upper.sample_at(t)?;
        let lovals = lower.sample_at(t)?;
        for (a, b) in hi.values().iter().zip(lovals.values()) {
            if *a < *b - tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff every snapshot is numerically dead at both domain ends:
/// |value| and the one-sided difference quotient at the two outermost
/// nodes stay below `tol`. A failure means the truncation radius was
/// too small for the run.
pub fn boundary_decay_check(traj: &Trajectory, tol: f64) -> bool {
    let dx = traj.grid().dx();
    for (_, field) in traj.snapshots() {
        let v = field.values();
        let n = v.len();
        let left = v[0].abs().max(((v[1] - v[0]) / dx).abs());
        let right = v[n - 1].abs().max(((v[n - 1] - v[n - 2]) / dx).abs());
        if left >= tol || right >= tol {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::special::heat_kernel;

    fn small_grid() -> Grid1D {
        Grid1D::new(-1.0, 1.0, 41).unwrap()
    }

    #[test]
    fn thomas_reproduces_dense_solution() {
        // System: [[2,1,0],[1,3,1],[0,1,2]] x = [4,10,8] has x = [1,2,3].
        let sub = [0.0, 1.0, 1.0];
        let mut diag = [2.0, 3.0, 2.0];
        let sup = [1.0, 1.0, 0.0];
        let mut rhs = [4.0, 10.0, 8.0];
        thomas_solve(&sub, &mut diag, &sup, &mut rhs);
        for (got, want) in rhs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "solution {rhs:?}");
        }
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let g = small_grid();
        assert!(SimConfig::new(g, 1.0, 0.01).validate().is_ok());
        assert!(SimConfig::new(g, -1.0, 0.01).validate().is_err());
        assert!(SimConfig::new(g, 1.0, 0.0).validate().is_err());
        let mut c = SimConfig::new(g, 1.0, 0.01);
        c.dt_min = 0.02;
        assert!(c.validate().is_err());
        let mut c = SimConfig::new(g, 1.0, 0.01);
        c.nonlinearity_degree = 1.5;
        assert!(c.validate().is_err());
        let mut c = SimConfig::new(g, 1.0, 0.01);
        c.snapshot_stride = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn constant_data_follows_the_riccati_clock() {
        // Spatially constant data u0 = -0.1 under Neumann reduces the
        // PDE to u' = -u^2, which reaches -inf at t = 1/0.1 = 10.
        let g = small_grid();
        let mut cfg = SimConfig::new(g, 12.0, 0.01);
        cfg.dt_min = 1e-10;
        let h = ScalarField::constant(g, -0.1).unwrap();
        let (traj, report) = solve_nonlinear(&Potential::Zero, &h, &cfg).unwrap();
        assert!(report.blew_up);
        let t_est = report.t_est.unwrap();
        println!(
            "riccati: T_est = {t_est:.4} via {:?}, final t {:.4}, {} snapshots",
            report.method,
            report.final_time_reached,
            traj.snapshots().len()
        );
        assert!((t_est - 10.0).abs() / 10.0 < 0.02, "T_est = {t_est}");
        assert!(t_est <= cfg.t_end);
        // The profile stays spatially constant all the way down.
        let (_, last) = traj.final_snapshot();
        let spread = last.values().iter().fold((f64::MAX, f64::MIN), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
        assert!((spread.1 - spread.0).abs() < 1e-6 * spread.0.abs());
    }

    #[test]
    fn bounded_run_reaches_t_end_without_blowup() {
        let g = small_grid();
        let cfg = SimConfig::new(g, 0.5, 0.005);
        let h = ScalarField::from_fn(g, |x| -0.01 * (-x * x).exp()).unwrap();
        let (traj, report) = solve_nonlinear(&Potential::Constant(0.05), &h, &cfg).unwrap();
        assert!(!report.blew_up);
        assert_eq!(report.method, BlowupMethod::None);
        assert_eq!(report.t_est, None);
        assert_eq!(report.final_time_reached, 0.5);
        assert_eq!(traj.end_time(), 0.5);
        // Decay: the sup norm shrinks under damping.
        let vinf = traj.norm_inf().values();
        assert!(vinf[vinf.len() - 1] < vinf[0]);
    }

    #[test]
    fn sign_is_preserved_for_nonpositive_data() {
        let g = Grid1D::new(-5.0, 5.0, 201).unwrap();
        let mut cfg = SimConfig::new(g, 1.0, 0.002); // r = dt/dx^2 = 0.8
        cfg.snapshot_stride = 25;
        let h = ScalarField::from_fn(g, |x| -0.3 * (-x * x).exp()).unwrap();
        let f = Potential::gaussian_bump(0.05, 1.0).unwrap();
        let (traj, _) = solve_nonlinear(&f, &h, &cfg).unwrap();
        for (t, field) in traj.snapshots() {
            for &v in field.values() {
                assert!(v <= 1e-10, "u({t}) = {v} went positive");
            }
        }
    }

    #[test]
    fn delta_run_matches_the_heat_kernel() {
        let g = Grid1D::new(-20.0, 20.0, 401).unwrap(); // dx = 0.1
        let mut cfg = SimConfig::new(g, 0.5, 0.01); // dt = dx^2
        cfg.snapshot_stride = 10;
        let traj = solve_heat(&InitialData::Delta { center: 0.0 }, &cfg).unwrap();
        assert!((traj.start_time() - 0.01).abs() < 1e-15);
        let (t, field) = traj.final_snapshot();
        assert_eq!(t, 0.5);
        let mut err = 0.0f64;
        for (i, x) in g.nodes().enumerate() {
            err = err.max((field.value(i) - heat_kernel(t, x, 0.0).unwrap()).abs());
        }
        println!("kernel sup error at t = {t}: {err:.3e}");
        assert!(err < 2e-3);
        // Discrete mass conservation under Neumann is exact.
        let m0 = integrate(&traj.snapshots()[0].1);
        let m1 = integrate(field);
        assert!((m1 - m0).abs() < 1e-13, "mass drifted {m0} -> {m1}");
        assert!((m0 - 1.0).abs() < 1e-9, "warm start mass {m0}");
    }

    #[test]
    fn linearized_rejects_bad_data() {
        let g = small_grid();
        let cfg = SimConfig::new(g, 0.1, 0.001);
        let neg = ScalarField::from_fn(g, |x| x).unwrap();
        match solve_linearized(&Potential::Zero, &InitialData::Field(neg), &cfg) {
            Err(Error::NegativeData { value, .. }) => assert!(value < 0.0),
            other => panic!("expected NegativeData, got {other:?}"),
        }
        let off_grid = ScalarField::constant(Grid1D::new(-1.0, 1.0, 11).unwrap(), 1.0).unwrap();
        assert!(matches!(
            solve_linearized(&Potential::Zero, &InitialData::Field(off_grid), &cfg),
            Err(Error::GridMismatch)
        ));
        assert!(solve_linearized(
            &Potential::Zero,
            &InitialData::Delta { center: 7.0 },
            &cfg
        )
        .is_err());
    }

    #[test]
    fn heat_and_linearized_agree_when_f_is_zero() {
        let g = Grid1D::new(-10.0, 10.0, 201).unwrap();
        let mut cfg = SimConfig::new(g, 0.3, 0.008);
        cfg.snapshot_stride = 5;
        let w0 = InitialData::Delta { center: 0.5 };
        let z = solve_heat(&w0, &cfg).unwrap();
        let w = solve_linearized(&Potential::Zero, &w0, &cfg).unwrap();
        assert!(comparison_assert(&z, &w, 1e-10).unwrap());
        assert!(comparison_assert(&w, &z, 1e-10).unwrap());
    }

    #[test]
    fn heat_dominates_damped_flow() {
        let g = Grid1D::new(-20.0, 20.0, 401).unwrap();
        let mut cfg = SimConfig::new(g, 0.5, 0.008); // r = 0.8
        cfg.snapshot_stride = 5;
        let w0 = InitialData::Delta { center: 0.0 };
        let f = Potential::gaussian_bump(0.05, 1.0).unwrap();
        let z = solve_heat(&w0, &cfg).unwrap();
        let w = solve_linearized(&f, &w0, &cfg).unwrap();
        assert!(comparison_assert(&z, &w, 1e-8).unwrap());
        // And w itself stays nonnegative.
        for (_, field) in w.snapshots() {
            for &v in field.values() {
                assert!(v >= -1e-10);
            }
        }
        // Mass of the damped flow never grows.
        let m = w.norm_1().values();
        for pair in m.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-8);
        }
        // Grid mismatch is rejected.
        let other = solve_heat(
            &w0,
            &SimConfig::new(Grid1D::new(-20.0, 20.0, 201).unwrap(), 0.1, 0.008),
        )
        .unwrap();
        assert!(matches!(comparison_assert(&z, &other, 1e-8), Err(Error::GridMismatch)));
    }

    #[test]
    fn detect_blowup_recovers_the_riccati_time() {
        // norm(t) = 0.1/(1 - 0.1 t): reciprocal is exactly 10 - t.
        let times: Vec<f64> = (0..10).map(|i| 9.0 + 0.1 * i as f64).collect();
        let vals: Vec<f64> = times.iter().map(|t| 0.1 / (1.0 - 0.1 * t)).collect();
        let series = TimeSeries::new(times, vals).unwrap();
        let report = detect_blowup(&series, 5.0, false, 2.0);
        assert!(report.blew_up);
        assert_eq!(report.method, BlowupMethod::ReciprocalExtrapolation);
        let t_est = report.t_est.unwrap();
        assert!((t_est - 10.0).abs() < 1e-3, "t_est = {t_est}");
    }

    #[test]
    fn detect_blowup_leaves_bounded_series_alone() {
        let series = TimeSeries::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 1.5]).unwrap();
        let report = detect_blowup(&series, 1e6, false, 2.0);
        assert!(!report.blew_up);
        assert_eq!(report.t_est, None);
        assert_eq!(report.final_time_reached, 2.0);
    }

    #[test]
    fn detect_blowup_brackets_a_sudden_crossing() {
        // Flat then a jump: the reciprocal fit is meaningless here and
        // the estimate must fall back to the bracketed crossing.
        let times: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let mut vals = vec![1.0; 11];
        vals[10] = 1e7;
        let series = TimeSeries::new(times, vals).unwrap();
        let report = detect_blowup(&series, 1e6, false, 2.0);
        assert!(report.blew_up);
        assert_eq!(report.method, BlowupMethod::ThresholdCrossing);
        let t_est = report.t_est.unwrap();
        assert!((9.0..=10.0).contains(&t_est), "t_est = {t_est}");
    }

    #[test]
    fn boundary_decay_check_flags_tight_domains() {
        let mut cfg = SimConfig::new(Grid1D::new(-40.0, 40.0, 801).unwrap(), 1.0, 0.008);
        cfg.snapshot_stride = 25;
        let wide = solve_heat(&InitialData::Delta { center: 0.0 }, &cfg).unwrap();
        assert!(boundary_decay_check(&wide, 1e-8));

        let mut cfg = SimConfig::new(Grid1D::new(-3.0, 3.0, 61).unwrap(), 1.0, 0.008);
        cfg.snapshot_stride = 25;
        let tight = solve_heat(&InitialData::Delta { center: 0.0 }, &cfg).unwrap();
        assert!(!boundary_decay_check(&tight, 1e-8));

        let zero = Trajectory::from_snapshots(vec![
            (0.0, ScalarField::zeros(wide.grid())),
            (1.0, ScalarField::zeros(wide.grid())),
        ])
        .unwrap();
        assert!(boundary_decay_check(&zero, 1e-8));
    }

    #[test]
    fn trajectory_sampling_is_exact_at_knots() {
        let g = small_grid();
        let snaps = vec![
            (0.0, ScalarField::constant(g, 1.0).unwrap()),
            (1.0, ScalarField::constant(g, 3.0).unwrap()),
            (2.0, ScalarField::constant(g, 3.0).unwrap()),
        ];
        let traj = Trajectory::from_snapshots(snaps).unwrap();
        assert_eq!(traj.sample_at(1.0).unwrap().value(0), 3.0);
        assert_eq!(traj.sample_at(0.5).unwrap().value(0), 2.0);
        assert!(traj.sample_at(-0.1).is_err());
        assert!(traj.sample_at(2.1).is_err());
        // Norm series live on the snapshot times.
        assert_eq!(traj.norm_inf().times(), &[0.0, 1.0, 2.0]);
        assert_eq!(traj.norm_1().interpolate(0.0).unwrap(), 2.0 * 1.0);
        // Dirichlet runs pin the ends.
        let mut cfg = SimConfig::new(g, 0.05, 0.001);
        cfg.boundary = Boundary::DirichletZero;
        let w0 = ScalarField::from_fn(g, |x| (1.0 - x * x).max(0.0)).unwrap();
        let traj = solve_linearized(&Potential::Zero, &InitialData::Field(w0), &cfg).unwrap();
        let (_, last) = traj.final_snapshot();
        assert_eq!(last.value(0), 0.0);
        assert_eq!(last.value(last.len() - 1), 0.0);
    }
}
