//! Output files. Aggregate tables are tab-separated with a header row and
//! use rounded figures; per-run records are JSON lines at full precision.
//!
//! | file | one row per |
//! |---|---|
//! | `degrees.tsv` | instance |
//! | `degree_samples.tsv` | sampled solution (long format) |
//! | `plateaus.tsv` | instance |
//! | `walks.jsonl` | neutral walk |
//! | `solve_runs.tsv` | solver run (long format) |
//! | `solve_summary.tsv` | instance and MNS configuration |
//! | `runs.jsonl` | solver run |

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gcp_neutral::landscape::WalkReport;
use gcp_neutral::search::{downsample_trajectory, RunRecord};
use gcp_neutral::stats::StatSummary;
use serde::Serialize;

use crate::experiment::{DegreeResult, PlateauResult, SolveResult};
use crate::HarnessError;

/// Cap on trajectory points written per run.
pub const MAX_TRAJECTORY_POINTS: usize = 1000;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Results {
    pub degrees: Vec<DegreeResult>,
    pub plateaus: Vec<PlateauResult>,
    pub solves: Vec<SolveResult>,
}

/// Three significant figures, never dropping integer digits; whole numbers
/// print without decimals.
pub fn sig3(x: f64) -> String {
    if x.fract() == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = x.abs().log10().floor() as i32 + 1;
    let decimals = (3 - digits).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A ratio as a percentage with one decimal.
pub fn pct1(ratio: f64) -> String {
    format!("{:.1}", ratio * 100.0)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn summary_cells(s: Option<StatSummary>) -> [String; 4] {
    match s {
        Some(s) => [sig3(s.min), sig3(s.median), sig3(s.mean), sig3(s.max)],
        None => Default::default(),
    }
}

fn tsv(path: &Path) -> Result<csv::Writer<File>, HarnessError> {
    csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .map_err(|e| HarnessError::Output(format!("{}: {e}", path.display())))
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Output(e.to_string())
}

fn write_degrees(
    rows: &[DegreeResult],
    dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<(), HarnessError> {
    let path = dir.join("degrees.tsv");
    let mut w = tsv(&path)?;
    w.write_record([
        "instance",
        "V",
        "chi",
        "nbh",
        "nd_random",
        "ratio_random",
        "nd_lo",
        "ratio_lo",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.k.to_string(),
            r.nbh.to_string(),
            sig3(r.nd_random),
            pct1(r.ratio_random),
            sig3(r.nd_lo),
            pct1(r.ratio_lo),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("degree_samples.tsv");
    let mut w = tsv(&path)?;
    w.write_record(["instance", "kind", "sample", "fitness", "nd", "ratio"])
        .map_err(csv_err)?;
    for r in rows {
        for s in &r.samples {
            let kind = match s.kind {
                crate::experiment::SampleKind::Random => "random",
                crate::experiment::SampleKind::Optimum => "lo",
            };
            w.write_record([
                r.instance.clone(),
                kind.to_string(),
                s.index.to_string(),
                s.fitness.to_string(),
                s.neutral.to_string(),
                s.ratio.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    written.push(path);
    Ok(())
}

#[derive(Serialize)]
struct WalkLine<'a> {
    instance: &'a str,
    walk: usize,
    #[serde(flatten)]
    report: &'a WalkReport,
    rho: Option<&'a [f64]>,
}

fn write_plateaus(
    rows: &[PlateauResult],
    dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<(), HarnessError> {
    let path = dir.join("plateaus.tsv");
    let mut w = tsv(&path)?;
    w.write_record([
        "instance",
        "V",
        "k",
        "nbh",
        "walks",
        "walk_length",
        "T1",
        "T2",
        "T3",
        "rho1",
        "nbs_min",
        "nbs_med",
        "nbs_mean",
        "nbs_max",
        "L_min",
        "L_med",
        "L_mean",
        "L_max",
        "revisits",
        "nd_lo",
        "ratio_lo",
        "skipped",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let s = &r.report.summary;
        let walked = r.report.walks_skipped.is_none();
        let cell = |x: usize| if walked { x.to_string() } else { String::new() };
        let mut rec = vec![
            r.instance.clone(),
            r.n.to_string(),
            r.report.k.to_string(),
            r.nbh.to_string(),
            r.report.walks.len().to_string(),
            r.report.walk_limit.to_string(),
            cell(s.t1),
            cell(s.t2),
            cell(s.t3),
            s.rho1_mean.map(|x| format!("{x:.2}")).unwrap_or_default(),
        ];
        rec.extend(summary_cells(s.portal_steps));
        rec.extend(summary_cells(s.step_lengths));
        rec.push(cell(s.revisits));
        rec.push(opt(s.lo_nd_mean.map(sig3)));
        rec.push(opt(s.lo_ratio_mean.map(pct1)));
        rec.push(r.report.walks_skipped.clone().unwrap_or_default());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("walks.jsonl");
    let mut out = BufWriter::new(File::create(&path)?);
    for r in rows {
        for (i, walk) in r.report.walks.iter().enumerate() {
            let rho = r.report.autocorrelations[i]
                .as_ref()
                .map(|a| a.rho.as_slice());
            let line = WalkLine {
                instance: &r.instance,
                walk: i,
                report: walk,
                rho,
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    written.push(path);
    Ok(())
}

#[derive(Serialize)]
struct RunLine<'a> {
    instance: &'a str,
    config: &'a str,
    run: usize,
    #[serde(flatten)]
    record: RunRecord,
    /// Best coloring, canonical, space-separated.
    solution: String,
}

fn write_solves(
    rows: &[SolveResult],
    dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<(), HarnessError> {
    let path = dir.join("solve_runs.tsv");
    let mut w = tsv(&path)?;
    w.write_record([
        "instance",
        "config",
        "run",
        "fitness",
        "evaluations",
        "legal",
    ])
    .map_err(csv_err)?;
    for r in rows {
        for c in &r.configs {
            for (i, run) in c.runs.iter().enumerate() {
                w.write_record([
                    r.instance.clone(),
                    c.label.clone(),
                    i.to_string(),
                    run.best_fitness.to_string(),
                    run.evaluations_used.to_string(),
                    run.legal_found.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("solve_summary.tsv");
    let mut w = tsv(&path)?;
    w.write_record([
        "instance",
        "k",
        "config",
        "mns",
        "runs",
        "min",
        "median",
        "mean",
        "max",
        "legal_runs",
        "ils_median",
        "median_minus_ils",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let ils = r.ils_median();
        for c in &r.configs {
            let s = c.fitness_summary();
            let mut rec = vec![
                r.instance.clone(),
                r.k.to_string(),
                c.label.clone(),
                c.mns.to_string(),
                c.runs.len().to_string(),
            ];
            rec.extend(summary_cells(s));
            rec.push(c.runs.iter().filter(|x| x.legal_found).count().to_string());
            rec.push(opt(ils.map(sig3)));
            rec.push(opt(ils.zip(s).map(|(i, s)| sig3(s.median - i))));
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("runs.jsonl");
    let mut out = BufWriter::new(File::create(&path)?);
    for r in rows {
        for c in &r.configs {
            for (i, run) in c.runs.iter().enumerate() {
                let mut record = run.clone();
                record.trajectory = downsample_trajectory(&run.trajectory, MAX_TRAJECTORY_POINTS);
                let line = RunLine {
                    instance: &r.instance,
                    config: &c.label,
                    run: i,
                    solution: run.best_coloring.to_line(),
                    record,
                };
                serde_json::to_writer(&mut out, &line)?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    written.push(path);
    Ok(())
}

/// Writes every table that has content and returns the paths written.
pub fn emit_reports(results: &Results, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    if !results.degrees.is_empty() {
        write_degrees(&results.degrees, out_dir, &mut written)?;
    }
    if !results.plateaus.is_empty() {
        write_plateaus(&results.plateaus, out_dir, &mut written)?;
    }
    if !results.solves.is_empty() {
        write_solves(&results.solves, out_dir, &mut written)?;
    }
    Ok(written)
}
