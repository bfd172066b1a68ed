//! Run persistence: the structured record, CSV emission, and native
//! SVG line plots (log-scale norms against time).

use std::borrow::Cow;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Everything a run leaves behind, one JSON document per run.
///
/// Re-running the echoed config must reproduce every numeric payload
/// bit for bit; only `wall_clock_secs` is allowed to differ.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    /// Complete effective configuration, defaults included, in the
    /// same key = value form the config file uses.
    pub config_echo: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fence: Option<Vec<FenceRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
    /// File names written next to the record, relative to the output
    /// directory.
    pub artifacts: Vec<String>,
    pub wall_clock_secs: f64,
}

/// Norm time series sampled at the stored snapshots.
#[derive(Debug, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub times: Vec<f64>,
    pub norm_inf: Vec<f64>,
    pub norm_1: Vec<f64>,
    /// Extra ‖·‖_p column when the config requested one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_p: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportRecord {
    pub blew_up: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_est: Option<f64>,
    pub method: String,
    pub final_time_reached: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FenceRecord {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub epsilon: f64,
    pub k_ratio: f64,
    pub beta: f64,
    pub gamma: f64,
    pub x1: f64,
    pub x0: f64,
    pub t_window: f64,
    pub t0: f64,
    pub a_max: f64,
    pub asym_value: f64,
    pub within_window: bool,
    pub passes: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub failures: usize,
    pub blew_up_count: usize,
}

/// One sweep cell, ready for CSV.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub amplitude: f64,
    pub center: f64,
    /// (blew_up, t_est) on success, message on failure.
    pub outcome: Result<(bool, Option<f64>), String>,
}

/// 17 significant digits — enough to reproduce any f64 exactly.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Minimal RFC-4180 quoting: only fields containing a comma, quote,
/// or newline get wrapped.
fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

pub fn write_record(path: &Path, record: &RunRecord) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let text = serde_json::to_string_pretty(record).map_err(io::Error::other)?;
    writeln!(out, "{text}")
}

pub fn write_norms_csv(path: &Path, series: &SeriesRecord) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match &series.norm_p {
        Some(_) => writeln!(out, "t,norm_inf,norm_1,norm_p")?,
        None => writeln!(out, "t,norm_inf,norm_1")?,
    }
    for i in 0..series.times.len() {
        write!(
            out,
            "{},{},{}",
            num(series.times[i]),
            num(series.norm_inf[i]),
            num(series.norm_1[i])
        )?;
        if let Some(extra) = &series.norm_p {
            write!(out, ",{}", num(extra[i]))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_fences_csv(path: &Path, fences: &[FenceRecord]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,lhs,rhs,satisfied")?;
    for f in fences {
        writeln!(out, "{},{},{},{}", num(f.t), num(f.lhs), num(f.rhs), f.satisfied)?;
    }
    Ok(())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "amplitude,center,blew_up,t_est,error")?;
    for row in rows {
        write!(out, "{},{},", num(row.amplitude), num(row.center))?;
        match &row.outcome {
            Ok((blew_up, t_est)) => {
                write!(out, "{blew_up},")?;
                if let Some(t) = t_est {
                    write!(out, "{}", num(*t))?;
                }
                writeln!(out, ",")?;
            }
            Err(msg) => writeln!(out, ",,{}", csv_field(msg))?,
        }
    }
    Ok(())
}

/// One curve on the plot.
pub struct SvgSeries<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub times: &'a [f64],
    pub values: &'a [f64],
}

/// Log-scale line plot of norms against time, in the usual
/// norm-blow-up figure style. Returns false (and writes nothing)
/// when no series has a positive value to place on the log axis.
pub fn write_norm_svg(path: &Path, title: &str, series: &[SvgSeries<'_>]) -> io::Result<bool> {
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut vmin, mut vmax) = (f64::INFINITY, 0.0f64);
    for s in series {
        for (&t, &v) in s.times.iter().zip(s.values) {
            x0 = x0.min(t);
            x1 = x1.max(t);
            if v > 0.0 && v.is_finite() {
                vmin = vmin.min(v);
                vmax = vmax.max(v);
            }
        }
    }
    if !(vmax > 0.0) || !x0.is_finite() {
        return Ok(false);
    }
    if x1 - x0 < f64::EPSILON * x1.abs().max(1.0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let mut ly0 = vmin.log10().floor();
    let mut ly1 = vmax.log10().ceil();
    if ly1 - ly0 < 1.0 {
        ly0 -= 1.0;
        ly1 += 1.0;
    }
    // Cap the span so a decayed-to-rounding-noise tail cannot squash
    // the interesting decades; clipped points sit on the floor line.
    if ly1 - ly0 > 24.0 {
        ly0 = ly1 - 24.0;
    }

    const W: f64 = 760.0;
    const H: f64 = 460.0;
    const L: f64 = 70.0;
    const R: f64 = 24.0;
    const T: f64 = 42.0;
    const B: f64 = 52.0;
    let px = |t: f64| L + (t - x0) / (x1 - x0) * (W - L - R);
    let py = |v: f64| {
        let lv = v.max(10f64.powf(ly0)).log10();
        H - B - (lv - ly0) / (ly1 - ly0) * (H - T - B)
    };

    let mut out = BufWriter::new(File::create(path)?);
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    )?;
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>")?;
    writeln!(
        out,
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
        (L + W - R) / 2.0,
        xml_escape(title)
    )?;

    // Horizontal grid lines and y labels at whole decades.
    let decades = (ly1 - ly0) as i64;
    let step = (decades as f64 / 8.0).ceil().max(1.0) as i64;
    let mut k = ly0 as i64;
    while k <= ly1 as i64 {
        let y = py(10f64.powi(k as i32));
        writeln!(
            out,
            "<line x1=\"{L}\" y1=\"{y:.2}\" x2=\"{:.1}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>",
            W - R
        )?;
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.2}\" text-anchor=\"end\">1e{k}</text>",
            L - 6.0,
            y + 4.0
        )?;
        k += step;
    }
    // x ticks.
    for i in 0..=5 {
        let t = x0 + (x1 - x0) * i as f64 / 5.0;
        let x = px(t);
        writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" stroke=\"#333333\"/>",
            H - B,
            H - B + 5.0
        )?;
        writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            H - B + 20.0,
            trim_number(t)
        )?;
    }
    writeln!(
        out,
        "<rect x=\"{L}\" y=\"{T}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#333333\"/>",
        W - L - R,
        H - T - B
    )?;
    writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">t</text>",
        (L + W - R) / 2.0,
        H - 12.0
    )?;

    for s in series {
        write!(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", s.color)?;
        for (&t, &v) in s.times.iter().zip(s.values) {
            if v > 0.0 && v.is_finite() {
                write!(out, "{:.2},{:.2} ", px(t), py(v))?;
            }
        }
        writeln!(out, "\"/>")?;
    }
    for (i, s) in series.iter().enumerate() {
        let y = T + 16.0 + 18.0 * i as f64;
        let x = W - R - 150.0;
        writeln!(
            out,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            y - 4.0,
            x + 24.0,
            y - 4.0,
            s.color
        )?;
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{y:.1}\">{}</text>",
            x + 30.0,
            xml_escape(s.label)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(true)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Short human-friendly tick label.
fn trim_number(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_significant_digits() {
        let s = num(10.0641);
        assert_eq!(s, "1.0064100000000000e1");
        let parsed: f64 = s.parse().unwrap();
        assert_eq!(parsed, 10.0641);
    }

    #[test]
    fn csv_quoting_only_when_needed() {
        assert_eq!(csv_field("plain message"), "plain message");
        assert_eq!(csv_field("a, b"), "\"a, b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn tick_labels_drop_trailing_zeros() {
        assert_eq!(trim_number(500.0), "500");
        assert_eq!(trim_number(0.25), "0.25");
        assert_eq!(trim_number(0.0), "0");
    }
}
