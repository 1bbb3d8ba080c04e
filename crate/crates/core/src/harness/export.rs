use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{AnalysisConfig, SweepAnalysis, SweepConfig, SweepOutcome};
use crate::error::{Error, Result};
use crate::expressibility::{
    min_trainable_gates, substituted_constants, QUOTED_LOG_CONSTANTS, QUOTED_OPERATOR_NORM,
};

pub const SWEEP_FILE: &str = "sweep.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const META_FILE: &str = "meta.json";

/// Provenance echoed into `meta.json`.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub hamiltonian_path: String,
    pub hamiltonian_source: String,
}

#[derive(Clone, Debug)]
pub struct ExportedFiles {
    pub sweep_csv: PathBuf,
    pub report: PathBuf,
    pub meta: PathBuf,
}

#[derive(Serialize)]
struct SweepRow {
    template: u8,
    depth: usize,
    n_gt: usize,
    mean_error: f64,
    error_std: f64,
    mean_bond: f64,
    log_lower: f64,
    log_upper: f64,
    avg_expressibility: f64,
    /// Lower error bar for plotting; never reaches below zero.
    bar_lower: f64,
    bar_upper: f64,
}

#[derive(Serialize)]
struct BoundsRow {
    template: u8,
    depth: usize,
    n_gt: usize,
    log_lower: f64,
    log_upper: f64,
    avg_expressibility: f64,
}

#[derive(Serialize)]
struct SeedEntry {
    template: u8,
    depth: usize,
    trial: usize,
    seed: u64,
}

#[derive(Serialize)]
struct Meta<'a> {
    artifact: &'static str,
    version: &'static str,
    run: &'a RunMeta,
    sweep: &'a SweepConfig,
    analysis: &'a AnalysisConfig,
    op_norm_used: f64,
    reference: &'a super::ExactReference,
    seeds: Vec<SeedEntry>,
}

fn sweep_csv(outcome: &SweepOutcome, analysis: &SweepAnalysis) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (r, b) in outcome.records.iter().zip(&analysis.bounds) {
        let bar_lower = if r.mean_error - r.error_std < 0.0 {
            r.mean_error.max(0.0)
        } else {
            r.error_std
        };
        w.serialize(SweepRow {
            template: r.template.id(),
            depth: r.depth,
            n_gt: r.n_gt,
            mean_error: r.mean_error,
            error_std: r.error_std,
            mean_bond: r.mean_bond_length,
            log_lower: b.bounds.log_lower,
            log_upper: b.bounds.log_upper,
            avg_expressibility: b.avg_expressibility,
            bar_lower,
            bar_upper: r.error_std,
        })?;
    }
    w.into_inner()
        .map_err(|e| Error::io("flushing sweep.csv", e.into_error()))
}

/// Writes the bound table `template,depth,n_gt,log_lower,log_upper,avg_expressibility`.
pub fn write_bounds_csv<W: std::io::Write>(
    out: W,
    outcome: &SweepOutcome,
    analysis: &SweepAnalysis,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (r, b) in outcome.records.iter().zip(&analysis.bounds) {
        w.serialize(BoundsRow {
            template: r.template.id(),
            depth: r.depth,
            n_gt: r.n_gt,
            log_lower: b.bounds.log_lower,
            log_upper: b.bounds.log_upper,
            avg_expressibility: b.avg_expressibility,
        })?;
    }
    w.flush().map_err(|e| Error::io("writing bounds table", e))
}

pub fn format_report(
    outcome: &SweepOutcome,
    analysis: &SweepAnalysis,
    cfg: &AnalysisConfig,
) -> String {
    let r = &outcome.reference;
    let mut s = String::new();
    let _ = writeln!(s, "# Best expressive range per template");
    let _ = writeln!(
        s,
        "# spans use natural-log covering bounds (log domain), d=2 k=2 eps={} accept_factor={}",
        cfg.eps, cfg.accept_factor
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "exact reference energy: {:.10} Ha at {} Å",
        r.energy, r.bond
    );
    let _ = writeln!(
        s,
        "operator norm at {} Å: {:.8} (with identity), {:.8} (without identity)",
        r.bond, r.operator_norm, r.operator_norm_without_identity
    );
    let source = if cfg.op_norm.is_some() {
        "user supplied"
    } else {
        "with identity"
    };
    let _ = writeln!(
        s,
        "operator norm used for bounds: {:.8} ({source})",
        analysis.op_norm
    );
    if let Ok(floor) = min_trainable_gates(analysis.op_norm) {
        let _ = writeln!(s, "trainable-gate floor ceil(2/norm): {floor}");
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<9} {:<24} {:>14} {:>14} {:>14}",
        "template", "acceptable_depths", "range_span", "average_error", "min_error"
    );
    for t in &analysis.templates {
        let depths: Vec<String> = t
            .report
            .acceptable_depths
            .iter()
            .map(usize::to_string)
            .collect();
        let _ = writeln!(
            s,
            "{:<9} {:<24} {:>14.2} {:>14.6} {:>14.6}",
            t.template.id(),
            depths.join(","),
            t.report.range_span,
            t.report.average_error,
            t.min_mean_error
        );
    }
    let _ = writeln!(s);
    match analysis.span_error_correlation {
        Some(rho) => {
            let _ = writeln!(s, "spearman(range_span, average_error) = {rho:.4}");
        }
        None => {
            let _ = writeln!(s, "spearman(range_span, average_error) = n/a");
        }
    }
    let _ = writeln!(s);
    let (lo, up) = substituted_constants(0.01, QUOTED_OPERATOR_NORM);
    let _ = writeln!(
        s,
        "closed form 16·N·ln(c·N) at eps=0.01, norm={QUOTED_OPERATOR_NORM}: \
         substitution gives c_lower={lo:.6}, c_upper={up:.6}; \
         quoted constants {}/{} are not reproduced",
        QUOTED_LOG_CONSTANTS.0, QUOTED_LOG_CONSTANTS.1
    );
    s
}

fn meta_json(
    outcome: &SweepOutcome,
    analysis: &SweepAnalysis,
    sweep: &SweepConfig,
    cfg: &AnalysisConfig,
    run: &RunMeta,
) -> Result<Vec<u8>> {
    let seeds = outcome
        .records
        .iter()
        .flat_map(|r| {
            r.trials
                .iter()
                .enumerate()
                .map(move |(trial, m)| SeedEntry {
                    template: r.template.id(),
                    depth: r.depth,
                    trial,
                    seed: m.seed,
                })
        })
        .collect();
    let meta = Meta {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        run,
        sweep,
        analysis: cfg,
        op_norm_used: analysis.op_norm,
        reference: &outcome.reference,
        seeds,
    };
    let mut bytes = serde_json::to_vec_pretty(&meta)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `sweep.csv`, `report.txt` and `meta.json` into `out_dir`.
///
/// Existing results are replaced only when `overwrite` is set. Files are
/// staged under temporary names and renamed once all three are written.
pub fn export_results(
    outcome: &SweepOutcome,
    analysis: &SweepAnalysis,
    sweep: &SweepConfig,
    cfg: &AnalysisConfig,
    run: &RunMeta,
    out_dir: &Path,
    overwrite: bool,
) -> Result<ExportedFiles> {
    if outcome.records.is_empty() {
        return Err(Error::Invalid("no sweep records to export".into()));
    }
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;
    let names = [SWEEP_FILE, REPORT_FILE, META_FILE];
    if !overwrite && names.iter().any(|n| out_dir.join(n).exists()) {
        return Err(Error::OutputExists(out_dir.to_path_buf()));
    }

    let contents = [
        sweep_csv(outcome, analysis)?,
        format_report(outcome, analysis, cfg).into_bytes(),
        meta_json(outcome, analysis, sweep, cfg, run)?,
    ];
    let mut staged = Vec::new();
    for (name, bytes) in names.iter().zip(&contents) {
        let tmp = out_dir.join(format!(".{name}.partial"));
        if let Err(e) = fs::write(&tmp, bytes) {
            for p in &staged {
                let _ = fs::remove_file(p);
            }
            return Err(Error::io(format!("writing {}", tmp.display()), e));
        }
        staged.push(tmp);
    }
    for (tmp, name) in staged.iter().zip(names) {
        let dest = out_dir.join(name);
        fs::rename(tmp, &dest).map_err(|e| Error::io(format!("writing {}", dest.display()), e))?;
    }
    Ok(ExportedFiles {
        sweep_csv: out_dir.join(SWEEP_FILE),
        report: out_dir.join(REPORT_FILE),
        meta: out_dir.join(META_FILE),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{analyze, DepthSweepRecord, ExactReference, TrialMinimum};
    use super::*;
    use crate::ansatz::AnsatzTemplate;

    fn outcome(mean: f64, std: f64) -> SweepOutcome {
        SweepOutcome {
            reference: ExactReference {
                energy: -1.1,
                bond: 0.7,
                operator_norm: 1.1,
                operator_norm_without_identity: 1.0,
            },
            records: vec![DepthSweepRecord {
                template: AnsatzTemplate::Two,
                depth: 1,
                n_gt: 16,
                mean_error: mean,
                error_std: std,
                mean_bond_length: 0.7,
                trials: vec![TrialMinimum {
                    energy: -1.1 + mean,
                    bond: 0.7,
                    seed: 42,
                    unconverged: 0,
                }],
            }],
        }
    }

    fn run() -> RunMeta {
        RunMeta {
            hamiltonian_path: "mem".into(),
            hamiltonian_source: "test".into(),
        }
    }

    #[test]
    fn one_record_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let o = outcome(0.002, 0.001);
        let cfg = AnalysisConfig::default();
        let a = analyze(&o, &cfg).unwrap();
        let files = export_results(
            &o,
            &a,
            &SweepConfig::default(),
            &cfg,
            &run(),
            dir.path(),
            false,
        )
        .unwrap();
        let csv = fs::read_to_string(&files.sweep_csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "template,depth,n_gt,mean_error,error_std,mean_bond,log_lower,log_upper,avg_expressibility,bar_lower,bar_upper"
        );
        assert!(files.report.exists());
        let meta: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&files.meta).unwrap()).unwrap();
        assert_eq!(meta["seeds"][0]["seed"], 42);
        assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
        let leftovers = fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 3);
    }

    #[test]
    fn lower_bar_is_clamped() {
        let dir = tempfile::tempdir().unwrap();
        let o = outcome(0.001, 0.005);
        let cfg = AnalysisConfig::default();
        let a = analyze(&o, &cfg).unwrap();
        let files = export_results(
            &o,
            &a,
            &SweepConfig::default(),
            &cfg,
            &run(),
            dir.path(),
            false,
        )
        .unwrap();
        let mut rdr = csv::Reader::from_path(&files.sweep_csv).unwrap();
        let row = rdr.records().next().unwrap().unwrap();
        assert_eq!(row[3].parse::<f64>().unwrap(), 0.001);
        assert_eq!(row[4].parse::<f64>().unwrap(), 0.005);
        assert_eq!(row[9].parse::<f64>().unwrap(), 0.001);
        assert_eq!(row[10].parse::<f64>().unwrap(), 0.005);
    }

    #[test]
    fn refuses_to_mix_results() {
        let dir = tempfile::tempdir().unwrap();
        let o = outcome(0.002, 0.001);
        let cfg = AnalysisConfig::default();
        let a = analyze(&o, &cfg).unwrap();
        let sweep = SweepConfig::default();
        export_results(&o, &a, &sweep, &cfg, &run(), dir.path(), false).unwrap();
        assert!(matches!(
            export_results(&o, &a, &sweep, &cfg, &run(), dir.path(), false),
            Err(Error::OutputExists(_))
        ));
        export_results(&o, &a, &sweep, &cfg, &run(), dir.path(), true).unwrap();
    }

    #[test]
    fn unwritable_output() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("not-a-dir");
        fs::write(&file, "x").unwrap();
        let o = outcome(0.002, 0.001);
        let cfg = AnalysisConfig::default();
        let a = analyze(&o, &cfg).unwrap();
        let err = export_results(&o, &a, &SweepConfig::default(), &cfg, &run(), &file, false);
        assert!(matches!(err, Err(Error::Io { .. })));
    }

    #[test]
    fn bounds_table_columns() {
        let o = outcome(0.002, 0.001);
        let a = analyze(&o, &AnalysisConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_bounds_csv(&mut buf, &o, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("template,depth,n_gt,log_lower,log_upper,avg_expressibility\n"));
    }
}
