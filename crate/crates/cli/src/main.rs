use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vqe_lab::ansatz::AnsatzTemplate;
use vqe_lab::expressibility::{
    average_expressibility, covering_log_bounds, min_trainable_gates, BoundInputs, DEFAULT_EPS,
};
use vqe_lab::hamiltonian::{
    bundled_h2_equilibrium, exact_summary, ground_energy_exact, parse_hamiltonians, BUNDLED_H2_GRID,
};
use vqe_lab::harness::{run_sweep as run_sweep_protocol, AnalysisConfig, RunMeta, SweepConfig};
use vqe_lab::optimizer::{minimize, GradientMethod, OptimizerConfig};
use vqe_lab::{build_circuit, load_hamiltonians, operator_norm, Error, MolecularHamiltonianSet};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Statevector VQE runs, depth sweeps and covering-number bounds.
#[derive(Parser, Debug)]
#[command(name = "vqe-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single VQE run at one bond length.
    Vqe(VqeArgs),
    /// Full protocol: bond scans over a depth sweep for several templates.
    Sweep(SweepArgs),
    /// Covering-number bounds and the trainable-gate floor.
    Bounds(BoundsArgs),
    /// Exact ground energies and operator norms per bond length.
    Exact(ExactArgs),
    /// Gate listing of a template circuit.
    DumpCircuit(DumpArgs),
}

#[derive(Args, Debug)]
struct OptimizerArgs {
    #[arg(long, default_value_t = 0.4)]
    lr: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 5000)]
    max_iter: usize,
    /// Gradient evaluation: adjoint or parameter-shift (identical values).
    #[arg(long, default_value = "adjoint", value_parser = parse_gradient)]
    gradient: GradientMethod,
}

impl OptimizerArgs {
    fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            learning_rate: self.lr,
            tolerance: self.tol,
            max_iterations: self.max_iter,
            seed,
            gradient: self.gradient,
        }
    }
}

#[derive(Args, Debug)]
struct VqeArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    template: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Bond length in Å; must be present in the Hamiltonian file.
    #[arg(long)]
    bond: f64,
    /// Hamiltonian file (defaults to the bundled H₂ grid).
    #[arg(long)]
    ham: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    opt: OptimizerArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value = "1,2,3,4", value_delimiter = ',',
          value_parser = clap::value_parser!(u8).range(1..=4))]
    templates: Vec<u8>,
    /// Inclusive depth range, `1..15` or a single depth.
    #[arg(long, default_value = "1..15", value_parser = parse_depths)]
    depths: (usize, usize),
    /// Depth cap for template 1.
    #[arg(long = "template1-max-depth", default_value_t = 10)]
    template1_max_depth: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Bond lengths in Å (defaults to 0.3..2.1 step 0.2).
    #[arg(long, value_delimiter = ',')]
    bonds: Option<Vec<f64>>,
    #[arg(long)]
    ham: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "accept-factor", default_value_t = 2.0)]
    accept_factor: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Operator norm for the bounds (defaults to the norm at the reference bond).
    #[arg(long)]
    opnorm: Option<f64>,
    /// Replace results already present in the output directory.
    #[arg(long)]
    overwrite: bool,
    #[command(flatten)]
    opt: OptimizerArgs,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    ngt: u64,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Defaults to the norm of the bundled H₂ Hamiltonian at 0.8 Å.
    #[arg(long)]
    opnorm: Option<f64>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    ham: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    template: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
}

fn parse_gradient(s: &str) -> Result<GradientMethod, String> {
    match s {
        "adjoint" => Ok(GradientMethod::Adjoint),
        "parameter-shift" => Ok(GradientMethod::ParameterShift),
        other => Err(format!("unknown gradient method {other:?}")),
    }
}

fn parse_depths(s: &str) -> Result<(usize, usize), String> {
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad depth {x:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let d = parse(s)?;
            (d, d)
        }
    };
    if lo < 1 || lo > hi {
        return Err(format!("empty depth range {s:?}"));
    }
    Ok((lo, hi))
}

fn load(ham: Option<&Path>) -> vqe_lab::Result<(MolecularHamiltonianSet, String)> {
    match ham {
        Some(p) => Ok((load_hamiltonians(p)?, p.display().to_string())),
        None => Ok((
            parse_hamiltonians(BUNDLED_H2_GRID, "<bundled>")?,
            "<bundled h2_sto3g_parity.ham>".to_string(),
        )),
    }
}

fn run_vqe(args: VqeArgs) -> vqe_lab::Result<()> {
    let (set, _) = load(args.ham.as_deref())?;
    let h = set.require(args.bond)?;
    let circuit = build_circuit(args.template, args.depth as usize)?;
    let cfg = args.opt.config(args.seed);
    let result = minimize(&circuit, h, &cfg)?;
    let exact = ground_energy_exact(h)?;
    println!("template        {}", args.template);
    println!("depth           {}", args.depth);
    println!("bond            {}", args.bond);
    println!("n_params        {}", circuit.num_params());
    println!("energy          {:.12}", result.final_energy);
    println!("exact           {:.12}", exact);
    println!("error           {:.3e}", result.final_energy - exact);
    println!("iterations      {}", result.iterations_used);
    println!("converged       {}", result.converged);
    let params: Vec<String> = result
        .final_params
        .iter()
        .map(|p| format!("{p:.10}"))
        .collect();
    println!("params          {}", params.join(","));
    Ok(())
}

fn run_sweep(args: SweepArgs) -> vqe_lab::Result<()> {
    let (set, path) = load(args.ham.as_deref())?;
    let templates = args
        .templates
        .iter()
        .map(|&t| AnsatzTemplate::from_id(t))
        .collect::<vqe_lab::Result<Vec<_>>>()?;
    let mut sweep = SweepConfig {
        templates,
        min_depth: args.depths.0,
        max_depth: args.depths.1,
        template1_max_depth: args.template1_max_depth,
        trials: args.trials,
        optimizer: args.opt.config(0),
        master_seed: args.seed,
        ..Default::default()
    };
    if let Some(b) = args.bonds {
        sweep.bond_grid = b;
    }
    let analysis_cfg = AnalysisConfig {
        eps: args.eps,
        accept_factor: args.accept_factor,
        op_norm: args.opnorm,
    };
    let run = RunMeta {
        hamiltonian_path: path,
        hamiltonian_source: set.metadata().source.clone(),
    };
    let done = run_sweep_protocol(&sweep, &analysis_cfg, &set, &run, &args.out, args.overwrite)?;
    let files = done.files;
    print!(
        "{}",
        std::fs::read_to_string(&files.report).unwrap_or_default()
    );
    eprintln!("wrote {}", files.sweep_csv.display());
    Ok(())
}

fn run_bounds(args: BoundsArgs) -> vqe_lab::Result<()> {
    let op_norm = match args.opnorm {
        Some(n) => n,
        None => operator_norm(&bundled_h2_equilibrium())?,
    };
    let inp = BoundInputs {
        d: args.d,
        k: args.k,
        n_gt: args.ngt,
        eps: args.eps,
        op_norm,
    };
    let b = covering_log_bounds(&inp)?;
    println!("d               {}", inp.d);
    println!("k               {}", inp.k);
    println!("n_gt            {}", inp.n_gt);
    println!("eps             {}", inp.eps);
    println!("op_norm         {:.10}", inp.op_norm);
    println!("exponent        {}", inp.exponent()?);
    println!("log_lower       {:.6}", b.log_lower);
    println!("log_upper       {:.6}", b.log_upper);
    println!("avg             {:.6}", average_expressibility(&b));
    let floor = min_trainable_gates(op_norm)?;
    println!("min_n_gt        {floor}");
    if args.ngt < floor {
        println!("warning         n_gt below the floor; the lower bound does not apply");
    }
    Ok(())
}

fn run_exact(args: ExactArgs) -> vqe_lab::Result<()> {
    let (set, _) = load(args.ham.as_deref())?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "bond,ground_energy,operator_norm,operator_norm_without_identity"
    );
    for row in exact_summary(&set)? {
        let _ = writeln!(
            out,
            "{},{:.12},{:.12},{:.12}",
            row.bond, row.ground_energy, row.operator_norm, row.operator_norm_without_identity
        );
    }
    Ok(())
}

fn run_dump(args: DumpArgs) -> vqe_lab::Result<()> {
    print!(
        "{}",
        build_circuit(args.template, args.depth as usize)?.dump()
    );
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::UnknownTemplate(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Vqe(a) => run_vqe(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Exact(a) => run_exact(a),
        Command::DumpCircuit(a) => run_dump(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
