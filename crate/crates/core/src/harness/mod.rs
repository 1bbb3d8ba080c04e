//! Bond scans, depth sweeps and multi-trial averaging.
//!
//! For each (template, depth, trial) every bond length on the grid is
//! optimized; the trial keeps its lowest energy. The error of a trial is that
//! energy minus the lowest exact ground energy on the grid.

mod export;

pub use export::{export_results, format_report, write_bounds_csv, ExportedFiles, RunMeta};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build, AnsatzCircuit, AnsatzTemplate};
use crate::error::{Error, Result};
use crate::expressibility::{
    average_expressibility, best_expressive_range, covering_log_bounds, spearman, BoundInputs,
    CoveringBounds, ExpressiveRangeReport, RangePoint, DEFAULT_ACCEPT_FACTOR, DEFAULT_EPS,
};
use crate::hamiltonian::{ground_energy_exact, operator_norm, MolecularHamiltonianSet};
use crate::optimizer::{minimize, OptimizerConfig};

/// 0.3, 0.5, …, 2.1 Å
pub fn default_bond_grid() -> Vec<f64> {
    (0..10).map(|i| ((3 + 2 * i) as f64) / 10.0).collect()
}

pub const DEFAULT_MAX_DEPTH: usize = 15;
pub const DEFAULT_TEMPLATE1_MAX_DEPTH: usize = 10;
pub const DEFAULT_TRIALS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub templates: Vec<AnsatzTemplate>,
    pub min_depth: usize,
    pub max_depth: usize,
    /// Depth cap applied to template 1 only.
    pub template1_max_depth: usize,
    pub trials: usize,
    pub bond_grid: Vec<f64>,
    /// `seed` is ignored; every run gets a derived seed.
    pub optimizer: OptimizerConfig,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            templates: AnsatzTemplate::ALL.to_vec(),
            min_depth: 1,
            max_depth: DEFAULT_MAX_DEPTH,
            template1_max_depth: DEFAULT_TEMPLATE1_MAX_DEPTH,
            trials: DEFAULT_TRIALS,
            bond_grid: default_bond_grid(),
            optimizer: OptimizerConfig::default(),
            master_seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self, set: &MolecularHamiltonianSet) -> Result<()> {
        if self.templates.is_empty() {
            return Err(Error::Invalid("no templates selected".into()));
        }
        if self.min_depth < 1 || self.min_depth > self.max_depth {
            return Err(Error::Invalid(format!(
                "empty depth range {}..{}",
                self.min_depth, self.max_depth
            )));
        }
        if self.trials < 1 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if self.bond_grid.is_empty() {
            return Err(Error::Invalid("bond grid is empty".into()));
        }
        for &b in &self.bond_grid {
            set.require(b)?;
        }
        if set.num_qubits() != crate::ansatz::TEMPLATE_QUBITS {
            return Err(Error::Invalid(format!(
                "templates act on {} qubits, Hamiltonians on {}",
                crate::ansatz::TEMPLATE_QUBITS,
                set.num_qubits()
            )));
        }
        self.optimizer.validate()
    }

    /// Depths swept for `template`, after the template-1 cap.
    pub fn depths_for(&self, template: AnsatzTemplate) -> std::ops::RangeInclusive<usize> {
        let max = if template == AnsatzTemplate::One {
            self.max_depth.min(self.template1_max_depth)
        } else {
            self.max_depth
        };
        self.min_depth..=max
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one trial, a pure function of its key.
pub fn trial_seed(master: u64, template: AnsatzTemplate, depth: usize, trial: usize) -> u64 {
    [template.id() as u64, depth as u64, trial as u64]
        .iter()
        .fold(splitmix64(master), |acc, &x| splitmix64(acc ^ x))
}

/// Seed for one bond length within a trial.
pub fn bond_seed(trial_seed: u64, bond_index: usize) -> u64 {
    splitmix64(trial_seed ^ (bond_index as u64).wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Energies closer than this (Hartree) count as a tie.
pub const ENERGY_TIE_TOLERANCE: f64 = 1e-12;

/// Lowest VQE energy of one trial over the bond grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialMinimum {
    pub energy: f64,
    pub bond: f64,
    pub seed: u64,
    /// Bond-grid runs that hit the iteration cap.
    pub unconverged: usize,
}

/// Runs one VQE per bond length and keeps the lowest energy; ties (within
/// [`ENERGY_TIE_TOLERANCE`]) go to the shorter bond.
pub fn run_single_trial(
    circuit: &AnsatzCircuit,
    bond_grid: &[f64],
    set: &MolecularHamiltonianSet,
    optimizer: &OptimizerConfig,
    seed: u64,
) -> Result<TrialMinimum> {
    if bond_grid.is_empty() {
        return Err(Error::Invalid("bond grid is empty".into()));
    }
    let mut best: Option<TrialMinimum> = None;
    let mut unconverged = 0;
    for (i, &bond) in bond_grid.iter().enumerate() {
        let h = set.require(bond)?;
        let cfg = optimizer.clone().with_seed(bond_seed(seed, i));
        let r = minimize(circuit, h, &cfg)?;
        if !r.converged {
            unconverged += 1;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                r.final_energy < b.energy - ENERGY_TIE_TOLERANCE
                    || ((r.final_energy - b.energy).abs() <= ENERGY_TIE_TOLERANCE && bond < b.bond)
            }
        };
        if better {
            best = Some(TrialMinimum {
                energy: r.final_energy,
                bond,
                seed,
                unconverged: 0,
            });
        }
    }
    let mut best = best.expect("nonempty grid");
    best.unconverged = unconverged;
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthSweepRecord {
    pub template: AnsatzTemplate,
    pub depth: usize,
    pub n_gt: usize,
    pub mean_error: f64,
    /// Sample standard deviation over trials (zero for a single trial).
    pub error_std: f64,
    pub mean_bond_length: f64,
    pub trials: Vec<TrialMinimum>,
}

/// Lowest exact energy on the bond grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactReference {
    pub energy: f64,
    pub bond: f64,
    pub operator_norm: f64,
    pub operator_norm_without_identity: f64,
}

pub fn exact_reference(set: &MolecularHamiltonianSet, bond_grid: &[f64]) -> Result<ExactReference> {
    let mut best: Option<(f64, f64)> = None;
    for &bond in bond_grid {
        let e = ground_energy_exact(set.require(bond)?)?;
        if best.is_none_or(|(be, bb)| e < be || (e == be && bond < bb)) {
            best = Some((e, bond));
        }
    }
    let (energy, bond) = best.ok_or_else(|| Error::Invalid("bond grid is empty".into()))?;
    let h = set.require(bond)?;
    Ok(ExactReference {
        energy,
        bond,
        operator_norm: operator_norm(h)?,
        operator_norm_without_identity: operator_norm(&h.without_identity()).unwrap_or(0.0),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub reference: ExactReference,
    /// Sorted by (template, depth).
    pub records: Vec<DepthSweepRecord>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_depth_sweep(
    config: &SweepConfig,
    set: &MolecularHamiltonianSet,
) -> Result<SweepOutcome> {
    config.validate(set)?;
    let reference = exact_reference(set, &config.bond_grid)?;

    let mut tasks = Vec::new();
    for &t in &config.templates {
        for depth in config.depths_for(t) {
            for trial in 0..config.trials {
                tasks.push((t, depth, trial));
            }
        }
    }
    let results: Vec<Result<TrialMinimum>> = tasks
        .par_iter()
        .map(|&(t, depth, trial)| {
            let circuit = build(t, depth)?;
            let seed = trial_seed(config.master_seed, t, depth, trial);
            run_single_trial(&circuit, &config.bond_grid, set, &config.optimizer, seed)
        })
        .collect();

    let mut records: Vec<DepthSweepRecord> = Vec::new();
    for (&(t, depth, _), result) in tasks.iter().zip(results) {
        let trial = result?;
        match records.last_mut() {
            Some(r) if r.template == t && r.depth == depth => r.trials.push(trial),
            _ => records.push(DepthSweepRecord {
                template: t,
                depth,
                n_gt: t.trainable_gates(depth)?,
                mean_error: 0.0,
                error_std: 0.0,
                mean_bond_length: 0.0,
                trials: vec![trial],
            }),
        }
    }
    for r in &mut records {
        let errors: Vec<f64> = r
            .trials
            .iter()
            .map(|m| m.energy - reference.energy)
            .collect();
        let (mean, std) = mean_std(&errors);
        r.mean_error = mean;
        r.error_std = std;
        r.mean_bond_length = r.trials.iter().map(|m| m.bond).sum::<f64>() / r.trials.len() as f64;
    }
    records.sort_by_key(|r| (r.template, r.depth));
    Ok(SweepOutcome { reference, records })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub eps: f64,
    pub accept_factor: f64,
    /// Norm used in the bounds; defaults to the norm at the reference bond.
    pub op_norm: Option<f64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            accept_factor: DEFAULT_ACCEPT_FACTOR,
            op_norm: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordBounds {
    pub bounds: CoveringBounds,
    pub avg_expressibility: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TemplateSummary {
    pub template: AnsatzTemplate,
    pub min_mean_error: f64,
    pub report: ExpressiveRangeReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepAnalysis {
    pub op_norm: f64,
    /// Parallel to the outcome's records.
    pub bounds: Vec<RecordBounds>,
    pub templates: Vec<TemplateSummary>,
    /// Spearman correlation of range span against average error across
    /// templates; `None` with fewer than two templates or constant columns.
    pub span_error_correlation: Option<f64>,
}

pub fn analyze(outcome: &SweepOutcome, cfg: &AnalysisConfig) -> Result<SweepAnalysis> {
    let op_norm = cfg.op_norm.unwrap_or(outcome.reference.operator_norm);
    let bounds = outcome
        .records
        .iter()
        .map(|r| {
            let b = covering_log_bounds(&BoundInputs::qubits(r.n_gt as u64, cfg.eps, op_norm))?;
            Ok(RecordBounds {
                bounds: b,
                avg_expressibility: average_expressibility(&b),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut templates = Vec::new();
    let mut i = 0;
    while i < outcome.records.len() {
        let t = outcome.records[i].template;
        let mut points = Vec::new();
        while i < outcome.records.len() && outcome.records[i].template == t {
            points.push(RangePoint {
                depth: outcome.records[i].depth,
                mean_error: outcome.records[i].mean_error,
                bounds: bounds[i].bounds,
            });
            i += 1;
        }
        let report = best_expressive_range(&points, cfg.accept_factor)?;
        let min_mean_error = points
            .iter()
            .map(|p| p.mean_error)
            .fold(f64::INFINITY, f64::min);
        templates.push(TemplateSummary {
            template: t,
            min_mean_error,
            report,
        });
    }
    let spans: Vec<f64> = templates.iter().map(|s| s.report.range_span).collect();
    let errors: Vec<f64> = templates.iter().map(|s| s.report.average_error).collect();
    Ok(SweepAnalysis {
        op_norm,
        bounds,
        span_error_correlation: spearman(&spans, &errors),
        templates,
    })
}

/// Everything one `sweep` invocation produces.
#[derive(Clone, Debug)]
pub struct SweepRun {
    pub outcome: SweepOutcome,
    pub analysis: SweepAnalysis,
    pub files: ExportedFiles,
}

/// Sweep, analysis and export in one call.
pub fn run_sweep(
    sweep: &SweepConfig,
    analysis: &AnalysisConfig,
    set: &MolecularHamiltonianSet,
    run: &RunMeta,
    out_dir: &std::path::Path,
    overwrite: bool,
) -> Result<SweepRun> {
    let outcome = run_depth_sweep(sweep, set)?;
    let result = analyze(&outcome, analysis)?;
    let files = export_results(&outcome, &result, sweep, analysis, run, out_dir, overwrite)?;
    Ok(SweepRun {
        outcome,
        analysis: result,
        files,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{parse_hamiltonians, HamiltonianMetadata};
    use crate::pauli::PauliSum;

    fn constant_set(entries: &[(f64, f64)]) -> MolecularHamiltonianSet {
        let meta = HamiltonianMetadata {
            molecule: "test".into(),
            basis: String::new(),
            mapping: String::new(),
            num_qubits: 4,
            includes_nuclear_repulsion: true,
            source: String::new(),
        };
        MolecularHamiltonianSet::new(
            meta,
            entries
                .iter()
                .map(|&(b, c)| (b, PauliSum::constant(4, c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn grid_values() {
        let g = default_bond_grid();
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 0.3);
        assert_eq!(g[2], 0.7);
        assert_eq!(g[9], 2.1);
    }

    #[test]
    fn seeds_are_keyed() {
        let a = trial_seed(1, AnsatzTemplate::Two, 3, 0);
        assert_eq!(a, trial_seed(1, AnsatzTemplate::Two, 3, 0));
        assert_ne!(a, trial_seed(1, AnsatzTemplate::Two, 3, 1));
        assert_ne!(a, trial_seed(1, AnsatzTemplate::Three, 3, 0));
        assert_ne!(a, trial_seed(2, AnsatzTemplate::Two, 3, 0));
        assert_ne!(bond_seed(a, 0), bond_seed(a, 1));
    }

    #[test]
    fn singleton_grid() {
        let set = constant_set(&[(0.9, -0.5)]);
        let c = build(AnsatzTemplate::Four, 1).unwrap();
        let m = run_single_trial(&c, &[0.9], &set, &OptimizerConfig::default(), 7).unwrap();
        assert_eq!(m.bond, 0.9);
        assert!((m.energy + 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_pair() {
        let set = constant_set(&[(0.3, 2.0), (0.5, 1.0)]);
        let c = build(AnsatzTemplate::Two, 1).unwrap();
        let m = run_single_trial(&c, &[0.3, 0.5], &set, &OptimizerConfig::default(), 1).unwrap();
        assert!((m.energy - 1.0).abs() < 1e-12);
        assert_eq!(m.bond, 0.5);
    }

    #[test]
    fn ties_go_to_shorter_bond() {
        let set = constant_set(&[(0.3, 1.0), (0.5, 1.0)]);
        let c = build(AnsatzTemplate::Two, 1).unwrap();
        let m = run_single_trial(&c, &[0.5, 0.3], &set, &OptimizerConfig::default(), 1).unwrap();
        assert_eq!(m.bond, 0.3);
    }

    #[test]
    fn missing_bond() {
        let set = constant_set(&[(0.3, 1.0)]);
        let c = build(AnsatzTemplate::Two, 1).unwrap();
        assert!(matches!(
            run_single_trial(&c, &[0.7], &set, &OptimizerConfig::default(), 1),
            Err(Error::MissingBond(_))
        ));
    }

    #[test]
    fn single_trial_single_depth() {
        let set = crate::hamiltonian::bundled_h2_grid();
        let cfg = SweepConfig {
            templates: vec![AnsatzTemplate::Four],
            min_depth: 1,
            max_depth: 1,
            trials: 1,
            bond_grid: vec![0.7, 0.9],
            ..Default::default()
        };
        let out = run_depth_sweep(&cfg, &set).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].error_std, 0.0);
        assert_eq!(out.records[0].n_gt, 8);
        assert!(out.records[0].mean_error >= -1e-9);
    }

    #[test]
    fn constant_file_has_zero_error() {
        let text = "# molecule=X qubits=4\nbond 0.5\nIIII -1.5\nbond 0.7\nIIII -2.0\n";
        let set = parse_hamiltonians(text, "mem").unwrap();
        let cfg = SweepConfig {
            templates: vec![AnsatzTemplate::One, AnsatzTemplate::Four],
            min_depth: 1,
            max_depth: 3,
            trials: 2,
            bond_grid: vec![0.5, 0.7],
            ..Default::default()
        };
        let out = run_depth_sweep(&cfg, &set).unwrap();
        assert_eq!(out.records.len(), 6);
        assert_eq!(out.reference.bond, 0.7);
        for r in &out.records {
            assert!(r.mean_error.abs() < 1e-9);
            assert_eq!(r.mean_bond_length, 0.7);
        }
        let a = analyze(&out, &AnalysisConfig::default()).unwrap();
        assert_eq!(a.templates.len(), 2);
        assert_eq!(a.op_norm, 2.0);
    }

    #[test]
    fn template_one_cap() {
        let cfg = SweepConfig::default();
        assert_eq!(cfg.depths_for(AnsatzTemplate::One), 1..=10);
        assert_eq!(cfg.depths_for(AnsatzTemplate::Three), 1..=15);
    }

    #[test]
    fn config_errors() {
        let set = crate::hamiltonian::bundled_h2_grid();
        let bad = [
            SweepConfig {
                templates: vec![],
                ..Default::default()
            },
            SweepConfig {
                min_depth: 3,
                max_depth: 2,
                ..Default::default()
            },
            SweepConfig {
                trials: 0,
                ..Default::default()
            },
            SweepConfig {
                bond_grid: vec![],
                ..Default::default()
            },
            SweepConfig {
                bond_grid: vec![0.8],
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(run_depth_sweep(&cfg, &set).is_err());
        }
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
    }
}
