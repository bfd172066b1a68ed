//! Executes resolved plans and persists their artifacts.
//!
//! Every experiment leaves a `record.json` behind; data files (CSV,
//! SVG) sit next to it and are listed in the record. Numeric payloads
//! are a pure function of the echoed configuration — only the wall
//! clock differs between identical runs.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use blowup_lab::{
    certificate_a, fence_check, norm_lp, solve_linearized, solve_nonlinear, BlowupMethod,
    BlowupReport, GaussianIc, InitialData, Potential, ScalarField, SimConfig, Trajectory,
};

use crate::config::{EvolveData, EvolvePlan, FencePlan, Plan, ResolvedRun, SweepPlan};
use crate::output::{
    write_fences_csv, write_norm_svg, write_norms_csv, write_record, write_sweep_csv,
    CertificateRecord, FenceRecord, ReportRecord, RunRecord, SeriesRecord, SvgSeries, SweepRow,
    SweepSummary,
};
use crate::{lift, CliError};

const SUP_COLOR: &str = "#1f77b4";
const MASS_COLOR: &str = "#d62728";

/// Run the plan, write record + artifacts into `out_dir`, and report
/// success or the violated invariant. Artifacts are on disk even when
/// the run ends in a violation, so failures can be inspected.
pub fn execute(run: ResolvedRun, out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let start = Instant::now();

    let mut record = RunRecord {
        experiment: run.experiment.name().to_string(),
        config_echo: run.echo,
        series: None,
        report: None,
        fence: None,
        certificate: None,
        sweep: None,
        artifacts: Vec::new(),
        wall_clock_secs: 0.0,
    };
    let mut violation = None;

    match &run.plan {
        Plan::Evolve(plan) => run_evolve(plan, out_dir, &mut record)?,
        Plan::Certify(plan) => {
            let cert = certificate_a(&plan.params);
            let p = plan.params;
            record.certificate = Some(CertificateRecord {
                epsilon: p.epsilon,
                k_ratio: p.k_ratio,
                beta: p.beta,
                gamma: p.gamma,
                x1: p.x1,
                x0: p.x0,
                t_window: p.t_window,
                t0: cert.t0,
                a_max: cert.a_max,
                asym_value: cert.asym_value,
                within_window: cert.within_window,
                passes: cert.passes,
            });
            println!(
                "certificate: A_max = {:.6} at t0 = {:.6e} (window {:.6e}); expansion {:.6}; {}",
                cert.a_max,
                cert.t0,
                p.t_window,
                cert.asym_value,
                if cert.passes { "PASSES" } else { "FAILS" }
            );
            if !cert.passes {
                violation = Some(format!(
                    "certificate failed: A_max = {}, within_window = {}",
                    cert.a_max, cert.within_window
                ));
            }
        }
        Plan::Fence(plan) => violation = run_fence(plan, out_dir, &mut record)?,
        Plan::Sweep(plan) => violation = run_sweep(plan, out_dir, &mut record)?,
    }

    record.wall_clock_secs = start.elapsed().as_secs_f64();
    let record_path = out_dir.join("record.json");
    write_record(&record_path, &record)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", record_path.display())))?;
    println!("record: {}", record_path.display());

    match violation {
        Some(msg) => Err(CliError::Numerics(msg)),
        None => Ok(()),
    }
}

fn run_evolve(plan: &EvolvePlan, out_dir: &Path, record: &mut RunRecord) -> Result<(), CliError> {
    let (traj, report): (Trajectory, Option<BlowupReport>) = match &plan.data {
        EvolveData::Field(h) => {
            let (traj, report) = solve_nonlinear(&plan.f, h, &plan.sim).map_err(lift)?;
            (traj, Some(report))
        }
        EvolveData::Delta { center } => {
            let data = InitialData::Delta { center: *center };
            let traj = solve_linearized(&plan.f, &data, &plan.sim).map_err(lift)?;
            (traj, None)
        }
    };

    let series = series_record(&traj, plan.extra_norm_p)?;
    write_artifact(out_dir, "norms.csv", record, |p| write_norms_csv(p, &series))?;
    if plan.plot {
        plot_norms(out_dir, &record.experiment.clone(), &series, record)?;
    }

    match report {
        Some(report) => {
            match (report.blew_up, report.t_est) {
                (true, Some(t)) => println!(
                    "blow-up detected: T_est = {:.6} ({}); marched to t = {:.6}",
                    t,
                    method_name(report.method),
                    report.final_time_reached
                ),
                (true, None) => println!(
                    "blow-up detected; marched to t = {:.6}",
                    report.final_time_reached
                ),
                _ => println!(
                    "no blow-up by t = {:.6}; final sup norm {:.3e}",
                    report.final_time_reached,
                    series.norm_inf.last().copied().unwrap_or(0.0)
                ),
            }
            record.report = Some(ReportRecord {
                blew_up: report.blew_up,
                t_est: report.t_est,
                method: method_name(report.method).to_string(),
                final_time_reached: report.final_time_reached,
            });
        }
        None => println!(
            "linear run complete: final sup norm {:.6e}, final L1 norm {:.6e}",
            series.norm_inf.last().copied().unwrap_or(0.0),
            series.norm_1.last().copied().unwrap_or(0.0)
        ),
    }
    record.series = Some(series);
    Ok(())
}

fn run_fence(
    plan: &FencePlan,
    out_dir: &Path,
    record: &mut RunRecord,
) -> Result<Option<String>, CliError> {
    let data = InitialData::Delta { center: plan.delta_center };
    let w = solve_linearized(&plan.f, &data, &plan.sim).map_err(lift)?;

    // The first stored time has an empty norm integral (infinite
    // right-hand side), so evaluation starts at the second.
    let mut fences = Vec::new();
    for &(t, _) in w.snapshots().iter().skip(1) {
        let check = fence_check(&w, &plan.h, t).map_err(lift)?;
        fences.push(FenceRecord {
            t: check.t,
            lhs: check.lhs,
            rhs: check.rhs,
            satisfied: check.satisfied,
        });
    }

    let series = series_record(&w, None)?;
    write_artifact(out_dir, "norms.csv", record, |p| write_norms_csv(p, &series))?;
    write_artifact(out_dir, "fences.csv", record, |p| write_fences_csv(p, &fences))?;
    if plan.plot {
        plot_norms(out_dir, &record.experiment.clone(), &series, record)?;
    }

    let violated = fences.iter().find(|f| !f.satisfied);
    let verdict = match violated {
        None => {
            println!("fence held at all {} sampled times", fences.len());
            None
        }
        Some(f) => Some(format!(
            "fence violated at t = {}: lhs {} > rhs {}",
            f.t, f.lhs, f.rhs
        )),
    };
    record.series = Some(series);
    record.fence = Some(fences);
    Ok(verdict)
}

fn run_sweep(
    plan: &SweepPlan,
    out_dir: &Path,
    record: &mut RunRecord,
) -> Result<Option<String>, CliError> {
    let cells: Vec<(f64, f64)> = plan
        .amplitudes
        .iter()
        .flat_map(|&a| plan.centers.iter().map(move |&c| (a, c)))
        .collect();

    let rows: Vec<SweepRow> = if plan.workers == 1 {
        cells
            .iter()
            .map(|&(a, c)| sweep_cell(&plan.f, &plan.sim, a, c))
            .collect()
    } else {
        // Workers pull the next cell index; every slot is written
        // exactly once, so assembly order never depends on timing.
        let slots: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; cells.len()]);
        let cursor = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..plan.workers.min(cells.len()) {
                scope.spawn(|| loop {
                    let i = cursor.fetch_add(1, Ordering::SeqCst);
                    if i >= cells.len() {
                        break;
                    }
                    let row = sweep_cell(&plan.f, &plan.sim, cells[i].0, cells[i].1);
                    slots.lock().unwrap()[i] = Some(row);
                });
            }
        });
        slots
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|slot| slot.expect("every sweep slot is filled"))
            .collect()
    };

    write_artifact(out_dir, "sweep.csv", record, |p| write_sweep_csv(p, &rows))?;
    let failures = rows.iter().filter(|r| r.outcome.is_err()).count();
    let blew_up_count = rows
        .iter()
        .filter(|r| matches!(r.outcome, Ok((true, _))))
        .count();
    println!(
        "sweep: {} rows ({} failed), {} blew up",
        rows.len(),
        failures,
        blew_up_count
    );
    record.sweep = Some(SweepSummary { rows: rows.len(), failures, blew_up_count });

    if failures == rows.len() {
        let first = rows
            .iter()
            .find_map(|r| r.outcome.as_ref().err())
            .cloned()
            .unwrap_or_default();
        return Ok(Some(format!("every sweep row failed; first error: {first}")));
    }
    Ok(None)
}

fn sweep_cell(f: &Potential, sim: &SimConfig, amplitude: f64, center: f64) -> SweepRow {
    let outcome = (|| {
        let data = if amplitude == 0.0 {
            ScalarField::constant(sim.grid, 0.0)
        } else {
            GaussianIc::new(amplitude, center).map(|ic| ic.to_field(sim.grid))
        }
        .map_err(|e| e.to_string())?;
        let (_, report) = solve_nonlinear(f, &data, sim).map_err(|e| e.to_string())?;
        Ok((report.blew_up, report.t_est))
    })();
    SweepRow { amplitude, center, outcome }
}

fn series_record(traj: &Trajectory, extra_p: Option<f64>) -> Result<SeriesRecord, CliError> {
    let norm_p = match extra_p {
        None => None,
        Some(p) => {
            let extra: Result<Vec<f64>, _> = traj
                .snapshots()
                .iter()
                .map(|(_, field)| norm_lp(field, p))
                .collect();
            Some(extra.map_err(lift)?)
        }
    };
    Ok(SeriesRecord {
        times: traj.norm_inf().times().to_vec(),
        norm_inf: traj.norm_inf().values().to_vec(),
        norm_1: traj.norm_1().values().to_vec(),
        norm_p,
    })
}

fn plot_norms(
    out_dir: &Path,
    title: &str,
    series: &SeriesRecord,
    record: &mut RunRecord,
) -> Result<(), CliError> {
    let curves = [
        SvgSeries {
            label: "sup norm",
            color: SUP_COLOR,
            times: &series.times,
            values: &series.norm_inf,
        },
        SvgSeries {
            label: "L1 norm",
            color: MASS_COLOR,
            times: &series.times,
            values: &series.norm_1,
        },
    ];
    let path = out_dir.join("norms.svg");
    let drew = write_norm_svg(&path, title, &curves)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    if drew {
        record.artifacts.push("norms.svg".to_string());
    } else {
        log::warn!("no positive norm values to plot; skipped norms.svg");
    }
    Ok(())
}

fn write_artifact(
    out_dir: &Path,
    name: &str,
    record: &mut RunRecord,
    write: impl FnOnce(&Path) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let path = out_dir.join(name);
    write(&path).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    record.artifacts.push(name.to_string());
    Ok(())
}

fn method_name(method: BlowupMethod) -> &'static str {
    match method {
        BlowupMethod::None => "none",
        BlowupMethod::ReciprocalExtrapolation => "reciprocal-extrapolation",
        BlowupMethod::ThresholdCrossing => "threshold-crossing",
    }
}
