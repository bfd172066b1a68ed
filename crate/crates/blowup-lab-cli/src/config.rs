//! Flat `key = value` run configuration: parsing, per-experiment key
//! validation, and resolution into ready-to-run plans.
//!
//! The format is deliberately primitive — UTF-8 lines, `#` comments,
//! no nesting — so any language can read and write it. Unknown keys
//! are rejected rather than ignored: a typo must never silently fall
//! back to a default.

use blowup_lab::{
    select_parameters, Boundary, GaussianIc, Grid1D, Potential, ScalarField, SimConfig,
    TheoremParams,
};

use crate::{lift, CliError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Experiment {
    Simulate,
    Linearize,
    Certify,
    Fence,
    Sweep,
    DemoInstability,
    DemoStability,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Linearize => "linearize",
            Experiment::Certify => "certify",
            Experiment::Fence => "fence",
            Experiment::Sweep => "sweep",
            Experiment::DemoInstability => "demo-instability",
            Experiment::DemoStability => "demo-stability",
        }
    }

    /// Demos are nonlinear runs with a built-in configuration.
    fn is_nonlinear_run(self) -> bool {
        matches!(
            self,
            Experiment::Simulate | Experiment::DemoInstability | Experiment::DemoStability
        )
    }

    fn allowed_keys(self) -> Vec<&'static str> {
        const GRID_TIME: &[&str] = &[
            "x_min", "x_max", "n_points", "t_end", "dt_init", "dt_min", "boundary",
            "snapshot_stride",
        ];
        const NONLINEAR: &[&str] = &["nonlinearity_degree", "blowup_threshold"];
        const POTENTIAL: &[&str] =
            &["potential", "potential_amplitude", "potential_width", "potential_value"];
        const INITIAL: &[&str] = &[
            "initial", "initial_beta", "initial_amplitude", "initial_center", "initial_width",
            "initial_value",
        ];
        let mut keys = vec!["experiment"];
        match self {
            Experiment::Simulate | Experiment::DemoInstability | Experiment::DemoStability => {
                keys.extend(GRID_TIME);
                keys.extend(NONLINEAR);
                keys.extend(POTENTIAL);
                keys.extend(INITIAL);
                keys.extend(["extra_norm_p", "plot"]);
            }
            Experiment::Linearize => {
                keys.extend(GRID_TIME);
                keys.extend(POTENTIAL);
                keys.extend(["initial", "initial_center", "extra_norm_p", "plot"]);
            }
            Experiment::Fence => {
                keys.extend(GRID_TIME);
                keys.extend(POTENTIAL);
                keys.extend(INITIAL);
                keys.extend(["delta_center", "plot"]);
            }
            Experiment::Certify => {
                keys.extend(POTENTIAL);
                keys.extend(["epsilon", "k_ratio"]);
            }
            Experiment::Sweep => {
                keys.extend(GRID_TIME);
                keys.extend(NONLINEAR);
                keys.extend(POTENTIAL);
                keys.extend(["sweep_amplitudes", "sweep_centers", "workers"]);
            }
        }
        keys
    }
}

/// Every key any experiment understands, for friendlier rejections.
fn known_anywhere(key: &str) -> bool {
    [
        Experiment::Simulate,
        Experiment::Linearize,
        Experiment::Certify,
        Experiment::Fence,
        Experiment::Sweep,
    ]
    .iter()
    .any(|e| e.allowed_keys().contains(&key))
}

/// Ordered, duplicate-free key/value pairs as read from disk.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pairs: Vec<(String, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig, CliError> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    i + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            if pairs.iter().any(|(k, _)| *k == key) {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
            }
            pairs.push((key, value));
        }
        Ok(RawConfig { pairs })
    }

    /// Demo merging: start from the built-in defaults, let the file
    /// override in place, and append any extra keys for the usual
    /// validation to judge.
    pub fn with_defaults(defaults: &[(&str, &str)], file: RawConfig) -> RawConfig {
        let mut pairs: Vec<(String, String)> = defaults
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        for (k, v) in file.pairs {
            match pairs.iter_mut().find(|(key, _)| *key == k) {
                Some(slot) => slot.1 = v,
                None => pairs.push((k, v)),
            }
        }
        RawConfig { pairs }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn demo_defaults(experiment: Experiment) -> &'static [(&'static str, &'static str)] {
    match experiment {
        Experiment::DemoInstability => &[
            ("x_min", "-600"),
            ("x_max", "120"),
            ("n_points", "2881"),
            ("t_end", "500"),
            ("dt_init", "0.05"),
            ("snapshot_stride", "10"),
            ("potential", "bump"),
            ("potential_amplitude", "0.05"),
            ("potential_width", "1"),
            ("initial", "pit"),
            ("initial_beta", "0.005"),
            ("initial_center", "-200"),
            ("plot", "true"),
        ],
        Experiment::DemoStability => &[
            ("x_min", "-60"),
            ("x_max", "60"),
            ("n_points", "1201"),
            ("t_end", "200"),
            ("dt_init", "0.01"),
            ("snapshot_stride", "100"),
            ("potential", "constant"),
            ("potential_value", "0.05"),
            ("initial", "gaussian"),
            ("initial_amplitude", "-0.01"),
            ("initial_center", "0"),
            ("initial_width", "1"),
            ("plot", "true"),
        ],
        _ => &[],
    }
}

/// How the damping coefficient was specified, kept for the echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Bump { amplitude: f64, width: f64 },
    Constant { value: f64 },
    Zero,
}

/// How the starting profile was specified, kept for the echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialSpec {
    Pit { beta: f64, center: f64 },
    Gaussian { amplitude: f64, center: f64, width: f64 },
    Constant { value: f64 },
    Delta { center: f64 },
}

/// A fully validated run, ready to execute.
#[derive(Debug)]
pub struct ResolvedRun {
    pub experiment: Experiment,
    pub plan: Plan,
    /// Complete effective configuration: parsing this again yields
    /// the identical plan.
    pub echo: Vec<(String, String)>,
}

#[derive(Debug)]
pub enum Plan {
    Evolve(EvolvePlan),
    Certify(CertifyPlan),
    Fence(FencePlan),
    Sweep(SweepPlan),
}

#[derive(Debug)]
pub struct EvolvePlan {
    pub f: Potential,
    pub data: EvolveData,
    pub sim: SimConfig,
    pub extra_norm_p: Option<f64>,
    pub plot: bool,
}

#[derive(Debug)]
pub enum EvolveData {
    Field(ScalarField),
    Delta { center: f64 },
}

#[derive(Debug)]
pub struct CertifyPlan {
    pub params: TheoremParams,
}

#[derive(Debug)]
pub struct FencePlan {
    pub f: Potential,
    pub h: ScalarField,
    pub delta_center: f64,
    pub sim: SimConfig,
    pub plot: bool,
}

#[derive(Debug)]
pub struct SweepPlan {
    pub f: Potential,
    pub sim: SimConfig,
    pub amplitudes: Vec<f64>,
    pub centers: Vec<f64>,
    pub workers: usize,
}

pub fn resolve(experiment: Experiment, raw: &RawConfig) -> Result<ResolvedRun, CliError> {
    let allowed = experiment.allowed_keys();
    for (key, _) in &raw.pairs {
        if !allowed.contains(&key.as_str()) {
            let msg = if known_anywhere(key) {
                format!("key `{key}` does not apply to {}", experiment.name())
            } else {
                format!("unknown key `{key}`")
            };
            return Err(CliError::Config(msg));
        }
    }
    if let Some(named) = raw.get("experiment") {
        if named != experiment.name() {
            return Err(CliError::Config(format!(
                "config names experiment `{named}` but the subcommand is `{}`",
                experiment.name()
            )));
        }
    }

    let mut echo = vec![("experiment".to_string(), experiment.name().to_string())];
    let plan = match experiment {
        Experiment::Certify => Plan::Certify(resolve_certify(raw, &mut echo)?),
        Experiment::Fence => Plan::Fence(resolve_fence(raw, &mut echo)?),
        Experiment::Sweep => Plan::Sweep(resolve_sweep(raw, &mut echo)?),
        _ => Plan::Evolve(resolve_evolve(experiment, raw, &mut echo)?),
    };
    Ok(ResolvedRun { experiment, plan, echo })
}

fn resolve_evolve(
    experiment: Experiment,
    raw: &RawConfig,
    echo: &mut Vec<(String, String)>,
) -> Result<EvolvePlan, CliError> {
    let nonlinear = experiment.is_nonlinear_run();
    let (sim, x_min, x_max) = grid_and_stepping(raw, nonlinear, echo)?;
    let f = potential_spec(raw)?;
    let initial = initial_spec(raw, nonlinear)?;
    let data = match initial {
        InitialSpec::Delta { center } => {
            require_inside(center, x_min, x_max, "initial_center")?;
            EvolveData::Delta { center }
        }
        other => EvolveData::Field(build_field(&other, sim.grid)?),
    };
    echo_potential(&f, echo);
    echo_initial(&initial, echo);
    let extra_norm_p = extra_norm_p(raw, echo)?;
    let plot = opt_bool(raw, "plot", false)?;
    echo.push(("plot".to_string(), plot.to_string()));
    Ok(EvolvePlan { f: build_potential(&f)?, data, sim, extra_norm_p, plot })
}

fn resolve_fence(raw: &RawConfig, echo: &mut Vec<(String, String)>) -> Result<FencePlan, CliError> {
    let (sim, x_min, x_max) = grid_and_stepping(raw, false, echo)?;
    let f = potential_spec(raw)?;
    let initial = initial_spec(raw, true)?;
    let h = build_field(&initial, sim.grid)?;
    for (i, &v) in h.values().iter().enumerate() {
        if v > 0.0 {
            return Err(CliError::Config(format!(
                "fence runs need nonpositive initial data, but node {i} holds {v}"
            )));
        }
    }
    let delta_center = opt_f64(raw, "delta_center", 0.0)?;
    require_inside(delta_center, x_min, x_max, "delta_center")?;
    echo_potential(&f, echo);
    echo_initial(&initial, echo);
    echo.push(("delta_center".to_string(), fmt(delta_center)));
    let plot = opt_bool(raw, "plot", false)?;
    echo.push(("plot".to_string(), plot.to_string()));
    Ok(FencePlan { f: build_potential(&f)?, h, delta_center, sim, plot })
}

fn resolve_certify(
    raw: &RawConfig,
    echo: &mut Vec<(String, String)>,
) -> Result<CertifyPlan, CliError> {
    let f = potential_spec(raw)?;
    let epsilon = req_f64(raw, "epsilon")?;
    let k_ratio = req_f64(raw, "k_ratio")?;
    echo_potential(&f, echo);
    echo.push(("epsilon".to_string(), fmt(epsilon)));
    echo.push(("k_ratio".to_string(), fmt(k_ratio)));
    let params = select_parameters(epsilon, k_ratio, &build_potential(&f)?).map_err(lift)?;
    Ok(CertifyPlan { params })
}

fn resolve_sweep(raw: &RawConfig, echo: &mut Vec<(String, String)>) -> Result<SweepPlan, CliError> {
    let (sim, _, _) = grid_and_stepping(raw, true, echo)?;
    let f = potential_spec(raw)?;
    echo_potential(&f, echo);
    let amplitudes = req_f64_list(raw, "sweep_amplitudes")?;
    for &a in &amplitudes {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(CliError::Config(format!(
                "sweep_amplitudes entries must be finite and >= 0, got {a}"
            )));
        }
    }
    let centers = req_f64_list(raw, "sweep_centers")?;
    let workers = opt_usize(raw, "workers", 1)?;
    if workers == 0 || workers > 256 {
        return Err(CliError::Config(format!("workers must be in 1..=256, got {workers}")));
    }
    echo.push(("sweep_amplitudes".to_string(), fmt_list(&amplitudes)));
    echo.push(("sweep_centers".to_string(), fmt_list(&centers)));
    echo.push(("workers".to_string(), workers.to_string()));
    Ok(SweepPlan { f: build_potential(&f)?, sim, amplitudes, centers, workers })
}

/// Shared grid and time-stepping block; nonlinear runs additionally
/// understand the degree and threshold keys.
fn grid_and_stepping(
    raw: &RawConfig,
    nonlinear: bool,
    echo: &mut Vec<(String, String)>,
) -> Result<(SimConfig, f64, f64), CliError> {
    let x_min = req_f64(raw, "x_min")?;
    let x_max = req_f64(raw, "x_max")?;
    let n_points = req_usize(raw, "n_points")?;
    let t_end = req_f64(raw, "t_end")?;
    let dt_init = req_f64(raw, "dt_init")?;
    let grid = Grid1D::new(x_min, x_max, n_points).map_err(lift)?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(CliError::Config(format!("t_end must be finite and > 0, got {t_end}")));
    }
    if !(dt_init > 0.0) || !dt_init.is_finite() {
        return Err(CliError::Config(format!("dt_init must be finite and > 0, got {dt_init}")));
    }
    let mut sim = SimConfig::new(grid, t_end, dt_init);
    sim.dt_min = opt_f64(raw, "dt_min", sim.dt_min)?;
    if !(sim.dt_min > 0.0) {
        return Err(CliError::Config(format!("dt_min must be > 0, got {}", sim.dt_min)));
    }
    sim.boundary = match raw.get("boundary") {
        None => sim.boundary,
        Some("neumann") => Boundary::Neumann,
        Some("dirichlet") => Boundary::DirichletZero,
        Some(other) => {
            return Err(CliError::Config(format!(
                "boundary must be `neumann` or `dirichlet`, got `{other}`"
            )))
        }
    };
    sim.snapshot_stride = opt_usize(raw, "snapshot_stride", sim.snapshot_stride)?;
    if sim.snapshot_stride == 0 {
        return Err(CliError::Config("snapshot_stride must be >= 1".to_string()));
    }
    if nonlinear {
        sim.nonlinearity_degree = opt_f64(raw, "nonlinearity_degree", sim.nonlinearity_degree)?;
        if !(sim.nonlinearity_degree >= 2.0) || !sim.nonlinearity_degree.is_finite() {
            return Err(CliError::Config(format!(
                "nonlinearity_degree must be finite and >= 2, got {}",
                sim.nonlinearity_degree
            )));
        }
        sim.blowup_threshold = opt_f64(raw, "blowup_threshold", sim.blowup_threshold)?;
        if !(sim.blowup_threshold > 0.0) {
            return Err(CliError::Config(format!(
                "blowup_threshold must be > 0, got {}",
                sim.blowup_threshold
            )));
        }
    }

    echo.push(("x_min".to_string(), fmt(x_min)));
    echo.push(("x_max".to_string(), fmt(x_max)));
    echo.push(("n_points".to_string(), n_points.to_string()));
    echo.push(("t_end".to_string(), fmt(t_end)));
    echo.push(("dt_init".to_string(), fmt(dt_init)));
    echo.push(("dt_min".to_string(), fmt(sim.dt_min)));
    let boundary = match sim.boundary {
        Boundary::Neumann => "neumann",
        Boundary::DirichletZero => "dirichlet",
    };
    echo.push(("boundary".to_string(), boundary.to_string()));
    echo.push(("snapshot_stride".to_string(), sim.snapshot_stride.to_string()));
    if nonlinear {
        echo.push(("nonlinearity_degree".to_string(), fmt(sim.nonlinearity_degree)));
        echo.push(("blowup_threshold".to_string(), fmt(sim.blowup_threshold)));
    }
    Ok((sim, x_min, x_max))
}

fn potential_spec(raw: &RawConfig) -> Result<PotentialSpec, CliError> {
    let spec = match raw.get("potential") {
        None => return Err(CliError::Config("missing required key `potential`".to_string())),
        Some("bump") => PotentialSpec::Bump {
            amplitude: req_f64(raw, "potential_amplitude")?,
            width: req_f64(raw, "potential_width")?,
        },
        Some("constant") => PotentialSpec::Constant { value: req_f64(raw, "potential_value")? },
        Some("zero") => PotentialSpec::Zero,
        Some(other) => {
            return Err(CliError::Config(format!(
                "potential must be `bump`, `constant`, or `zero`, got `{other}`"
            )))
        }
    };
    let used: &[&str] = match spec {
        PotentialSpec::Bump { .. } => &["potential_amplitude", "potential_width"],
        PotentialSpec::Constant { .. } => &["potential_value"],
        PotentialSpec::Zero => &[],
    };
    for key in ["potential_amplitude", "potential_width", "potential_value"] {
        if raw.get(key).is_some() && !used.contains(&key) {
            return Err(CliError::Config(format!(
                "key `{key}` does not belong to potential = {}",
                raw.get("potential").unwrap()
            )));
        }
    }
    Ok(spec)
}

fn initial_spec(raw: &RawConfig, nonlinear: bool) -> Result<InitialSpec, CliError> {
    let spec = match raw.get("initial") {
        None => return Err(CliError::Config("missing required key `initial`".to_string())),
        Some("pit") => InitialSpec::Pit {
            beta: req_f64(raw, "initial_beta")?,
            center: req_f64(raw, "initial_center")?,
        },
        Some("gaussian") if nonlinear => InitialSpec::Gaussian {
            amplitude: req_f64(raw, "initial_amplitude")?,
            center: req_f64(raw, "initial_center")?,
            width: req_f64(raw, "initial_width")?,
        },
        Some("constant") if nonlinear => {
            InitialSpec::Constant { value: req_f64(raw, "initial_value")? }
        }
        Some("delta") if !nonlinear => {
            InitialSpec::Delta { center: req_f64(raw, "initial_center")? }
        }
        Some(other) => {
            let menu = if nonlinear { "`pit`, `gaussian`, or `constant`" } else { "`delta`" };
            return Err(CliError::Config(format!("initial must be {menu}, got `{other}`")));
        }
    };
    let used: &[&str] = match spec {
        InitialSpec::Pit { .. } => &["initial_beta", "initial_center"],
        InitialSpec::Gaussian { .. } => &["initial_amplitude", "initial_center", "initial_width"],
        InitialSpec::Constant { .. } => &["initial_value"],
        InitialSpec::Delta { .. } => &["initial_center"],
    };
    for key in
        ["initial_beta", "initial_amplitude", "initial_center", "initial_width", "initial_value"]
    {
        if raw.get(key).is_some() && !used.contains(&key) {
            return Err(CliError::Config(format!(
                "key `{key}` does not belong to initial = {}",
                raw.get("initial").unwrap()
            )));
        }
    }
    if nonlinear {
        if matches!(spec, InitialSpec::Delta { .. }) {
            return Err(CliError::Config(
                "point-mass data only makes sense for the linearized runs".to_string(),
            ));
        }
    } else if !matches!(spec, InitialSpec::Delta { .. }) {
        return Err(CliError::Config(
            "linearized runs start from initial = delta".to_string(),
        ));
    }
    Ok(spec)
}

fn build_potential(spec: &PotentialSpec) -> Result<Potential, CliError> {
    match *spec {
        PotentialSpec::Bump { amplitude, width } => {
            Potential::gaussian_bump(amplitude, width).map_err(lift)
        }
        PotentialSpec::Constant { value } => Potential::constant(value).map_err(lift),
        PotentialSpec::Zero => Ok(Potential::Zero),
    }
}

fn build_field(spec: &InitialSpec, grid: Grid1D) -> Result<ScalarField, CliError> {
    match *spec {
        InitialSpec::Pit { beta, center } => {
            let ic = GaussianIc::new(beta, center).map_err(lift)?;
            Ok(ic.to_field(grid))
        }
        InitialSpec::Gaussian { amplitude, center, width } => {
            if !amplitude.is_finite() || !center.is_finite() {
                return Err(CliError::Config(format!(
                    "gaussian initial data needs finite amplitude and center, got {amplitude} and {center}"
                )));
            }
            if !(width > 0.0) || !width.is_finite() {
                return Err(CliError::Config(format!(
                    "initial_width must be finite and > 0, got {width}"
                )));
            }
            ScalarField::from_fn(grid, |x| {
                let s = (x - center) / width;
                amplitude * (-s * s).exp()
            })
            .map_err(lift)
        }
        InitialSpec::Constant { value } => {
            if !value.is_finite() {
                return Err(CliError::Config(format!(
                    "initial_value must be finite, got {value}"
                )));
            }
            ScalarField::constant(grid, value).map_err(lift)
        }
        InitialSpec::Delta { .. } => unreachable!("delta data never builds a field"),
    }
}

fn echo_potential(spec: &PotentialSpec, echo: &mut Vec<(String, String)>) {
    match *spec {
        PotentialSpec::Bump { amplitude, width } => {
            echo.push(("potential".to_string(), "bump".to_string()));
            echo.push(("potential_amplitude".to_string(), fmt(amplitude)));
            echo.push(("potential_width".to_string(), fmt(width)));
        }
        PotentialSpec::Constant { value } => {
            echo.push(("potential".to_string(), "constant".to_string()));
            echo.push(("potential_value".to_string(), fmt(value)));
        }
        PotentialSpec::Zero => echo.push(("potential".to_string(), "zero".to_string())),
    }
}

fn echo_initial(spec: &InitialSpec, echo: &mut Vec<(String, String)>) {
    match *spec {
        InitialSpec::Pit { beta, center } => {
            echo.push(("initial".to_string(), "pit".to_string()));
            echo.push(("initial_beta".to_string(), fmt(beta)));
            echo.push(("initial_center".to_string(), fmt(center)));
        }
        InitialSpec::Gaussian { amplitude, center, width } => {
            echo.push(("initial".to_string(), "gaussian".to_string()));
            echo.push(("initial_amplitude".to_string(), fmt(amplitude)));
            echo.push(("initial_center".to_string(), fmt(center)));
            echo.push(("initial_width".to_string(), fmt(width)));
        }
        InitialSpec::Constant { value } => {
            echo.push(("initial".to_string(), "constant".to_string()));
            echo.push(("initial_value".to_string(), fmt(value)));
        }
        InitialSpec::Delta { center } => {
            echo.push(("initial".to_string(), "delta".to_string()));
            echo.push(("initial_center".to_string(), fmt(center)));
        }
    }
}

fn extra_norm_p(
    raw: &RawConfig,
    echo: &mut Vec<(String, String)>,
) -> Result<Option<f64>, CliError> {
    let Some(text) = raw.get("extra_norm_p") else { return Ok(None) };
    let p = if text.eq_ignore_ascii_case("inf") {
        f64::INFINITY
    } else {
        parse_f64("extra_norm_p", text)?
    };
    if !(p >= 1.0) {
        return Err(CliError::Config(format!(
            "norm order must satisfy p >= 1, got {text}"
        )));
    }
    let shown = if p.is_infinite() { "inf".to_string() } else { fmt(p) };
    echo.push(("extra_norm_p".to_string(), shown));
    Ok(Some(p))
}

fn require_inside(x: f64, x_min: f64, x_max: f64, key: &str) -> Result<(), CliError> {
    if !(x >= x_min && x <= x_max) {
        return Err(CliError::Config(format!(
            "{key} = {x} lies outside the grid [{x_min}, {x_max}]"
        )));
    }
    Ok(())
}

/// Shortest exact decimal form; `parse::<f64>` recovers the value
/// bit for bit, so echoes round-trip.
fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_list(vs: &[f64]) -> String {
    vs.iter().map(|&v| fmt(v)).collect::<Vec<_>>().join(", ")
}

fn parse_f64(key: &str, text: &str) -> Result<f64, CliError> {
    text.parse::<f64>().map_err(|_| {
        CliError::Config(format!("key `{key}`: cannot parse `{text}` as a number"))
    })
}

fn req_f64(raw: &RawConfig, key: &'static str) -> Result<f64, CliError> {
    match raw.get(key) {
        None => Err(CliError::Config(format!("missing required key `{key}`"))),
        Some(text) => parse_f64(key, text),
    }
}

fn opt_f64(raw: &RawConfig, key: &'static str, default: f64) -> Result<f64, CliError> {
    match raw.get(key) {
        None => Ok(default),
        Some(text) => parse_f64(key, text),
    }
}

fn req_usize(raw: &RawConfig, key: &'static str) -> Result<usize, CliError> {
    match raw.get(key) {
        None => Err(CliError::Config(format!("missing required key `{key}`"))),
        Some(text) => text.parse::<usize>().map_err(|_| {
            CliError::Config(format!("key `{key}`: cannot parse `{text}` as a whole number"))
        }),
    }
}

fn opt_usize(raw: &RawConfig, key: &'static str, default: usize) -> Result<usize, CliError> {
    match raw.get(key) {
        None => Ok(default),
        Some(text) => text.parse::<usize>().map_err(|_| {
            CliError::Config(format!("key `{key}`: cannot parse `{text}` as a whole number"))
        }),
    }
}

fn req_f64_list(raw: &RawConfig, key: &'static str) -> Result<Vec<f64>, CliError> {
    let Some(text) = raw.get(key) else {
        return Err(CliError::Config(format!("missing required key `{key}`")));
    };
    let values: Result<Vec<f64>, CliError> =
        text.split(',').map(|part| parse_f64(key, part.trim())).collect();
    let values = values?;
    if values.is_empty() {
        return Err(CliError::Config(format!("key `{key}` holds no values")));
    }
    Ok(values)
}

fn opt_bool(raw: &RawConfig, key: &'static str, default: bool) -> Result<bool, CliError> {
    match raw.get(key) {
        None => Ok(default),
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(other) => Err(CliError::Config(format!(
            "key `{key}` must be `true` or `false`, got `{other}`"
        ))),
    }
}
