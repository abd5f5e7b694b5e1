mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{int, real, Table};
use std::path::PathBuf;
use std::process::ExitCode;
use stdg::diagnostics::{entropy_trace, DiagnosticsRecord};
use stdg::exec::Execution;
use stdg::presets::{
    convergence_preset, run_ladder, SweepConfig, CONVERGENCE_PRESETS, ENTROPY_STABILITY_DEGREES, ENTROPY_STABILITY_KS,
    PRESERVATION_CONFIGS,
};
use stdg::problems::{density_wave_euler, manufactured_euler, shock_euler, ProblemSpec};
use stdg::sbp::lgl_rule;
use stdg::solver::march::march_with;
use stdg::solver::{SolverConfig, SpatialFlux, TemporalState};

#[derive(Parser)]
#[command(name = "stdg", version, about = "Entropy-stable space-time DGSEM experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L2 errors and convergence orders on the manufactured solution.
    Convergence(ConvergenceArgs),
    /// Entropy change at every slab boundary of the shock problem.
    EntropyStability(StabilityArgs),
    /// Entropy preservation balance with entropy-conservative kernels.
    EntropyConservation(SweepArgs),
    /// Kinetic-energy balance on the density wave.
    KepCheck(SweepArgs),
    /// LGL nodes, weights and derivative matrix of degree K.
    DumpOperator(DumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Flux {
    Eckep,
    Es,
}

#[derive(Clone, Copy, ValueEnum)]
enum Temporal {
    Upwind,
    Ec,
}

#[derive(Args)]
struct Common {
    /// Spatial interface flux.
    #[arg(long, value_enum)]
    flux: Option<Flux>,
    /// Temporal interface state.
    #[arg(long, value_enum)]
    temporal_state: Option<Temporal>,
    /// Final time; defaults to the problem's.
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Newton iteration cap per solve.
    #[arg(long)]
    newton_max_iter: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn solver(&self, flux: SpatialFlux, temporal: TemporalState) -> SolverConfig {
        SolverConfig {
            spatial_flux: match self.flux {
                Some(Flux::Eckep) => SpatialFlux::Eckep,
                Some(Flux::Es) => SpatialFlux::Es,
                None => flux,
            },
            temporal_state: match self.temporal_state {
                Some(Temporal::Upwind) => TemporalState::Upwind,
                Some(Temporal::Ec) => TemporalState::EntropyConservative,
                None => temporal,
            },
            newton_max_iter: self.newton_max_iter.unwrap_or(SolverConfig::default().newton_max_iter),
            ..Default::default()
        }
    }

    fn problem(&self, p: ProblemSpec) -> ProblemSpec {
        match self.t_final {
            Some(t) => p.with_t_final(t),
            None => p,
        }
    }
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Refinement ladder.
    #[arg(long, default_value = "table1", value_parser = clap::builder::PossibleValuesParser::new(CONVERGENCE_PRESETS))]
    preset: String,
    /// Override the temporal degree of the preset.
    #[arg(short = 'm', long)]
    m: Option<usize>,
    /// Override the spatial degree of the preset.
    #[arg(short = 'n', long)]
    n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StabilityArgs {
    #[arg(long = "kt", default_value_t = 4)]
    k_t: usize,
    #[arg(long = "ks", default_value_t = ENTROPY_STABILITY_KS)]
    k_s: usize,
    #[arg(short = 'm', long, default_value_t = ENTROPY_STABILITY_DEGREES.0)]
    m: usize,
    #[arg(short = 'n', long, default_value_t = ENTROPY_STABILITY_DEGREES.1)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Run a single configuration instead of the six standard ones; needs
    /// all of --kt, --ks, -m and -n.
    #[arg(long = "kt", requires_all = ["k_s", "m", "n"])]
    k_t: Option<usize>,
    #[arg(long = "ks", requires_all = ["k_t", "m", "n"])]
    k_s: Option<usize>,
    #[arg(short = 'm', long, requires_all = ["k_t", "k_s", "n"])]
    m: Option<usize>,
    #[arg(short = 'n', long, requires_all = ["k_t", "k_s", "m"])]
    n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

impl SweepArgs {
    fn configs(&self) -> Vec<SweepConfig> {
        match (self.k_t, self.k_s, self.m, self.n) {
            (Some(k_t), Some(k_s), Some(m), Some(n)) => vec![SweepConfig { k_t, k_s, m, n }],
            _ => PRESERVATION_CONFIGS.to_vec(),
        }
    }
}

#[derive(Args)]
struct DumpArgs {
    /// Polynomial degree.
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classified by exit code: 2 for configuration errors, 3 for
/// solver failures, 1 for I/O.
enum Failure {
    Solver(stdg::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<stdg::Error> for Failure {
    fn from(e: stdg::Error) -> Self {
        Failure::Solver(e)
    }
}

fn exit_code(e: &stdg::Error) -> u8 {
    match e {
        stdg::Error::NonConvergence { .. } | stdg::Error::AdmissibilityLoss { .. } => 3,
        _ => 2,
    }
}

/// Size of the pool for ladder runs, from `STDG_THREADS`.
fn threads() -> Result<Option<usize>, stdg::Error> {
    match std::env::var("STDG_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(stdg::Error::Config(format!(
                "STDG_THREADS={v:?} is not a positive count"
            ))),
        },
        Err(_) => Ok(None),
    }
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(anyhow::Error::from)?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    threads()?;
    Ok(f())
}

fn convergence(args: &ConvergenceArgs) -> Result<(), Failure> {
    let mut ladder = convergence_preset(&args.preset)?;
    ladder.m = args.m.unwrap_or(ladder.m);
    ladder.n = args.n.unwrap_or(ladder.n);
    let cfg = args.common.solver(SpatialFlux::Es, TemporalState::Upwind);
    cfg.validate()?;
    let problem = args.common.problem(manufactured_euler());
    let rows = in_pool(|| run_ladder(&problem, &ladder, cfg, Execution::Parallel))?;
    let mut table = Table::create(
        args.common.out.as_deref(),
        &[
            "k_t", "k_s", "m", "n", "l2_rho", "l2_rhou", "l2_e", "eoc_rho", "eoc_rhou", "eoc_e", "status",
        ],
    )?;
    let mut first_error = None;
    for r in &rows {
        let mut fields = vec![int(r.k_t), int(r.k_s), int(ladder.m), int(ladder.n)];
        match &r.l2 {
            Ok(l2) => fields.extend(l2.iter().map(|v| real(*v))),
            Err(_) => fields.extend(std::iter::repeat_n(String::new(), 3)),
        }
        match r.eoc {
            Some(e) => fields.extend(e.iter().map(|v| real(*v))),
            None => fields.extend(std::iter::repeat_n(String::new(), 3)),
        }
        match &r.l2 {
            Ok(_) => fields.push("ok".into()),
            Err(e) => {
                fields.push(format!("failed: {e}"));
                first_error.get_or_insert_with(|| e.clone());
            }
        }
        table.row(&fields)?;
    }
    table.finish()?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn entropy_stability(args: &StabilityArgs) -> Result<(), Failure> {
    let cfg = args.common.solver(SpatialFlux::Es, TemporalState::Upwind);
    let run = march_with(
        &args.common.problem(shock_euler()),
        args.m,
        args.n,
        args.k_s,
        args.k_t,
        cfg,
    )?;
    let trace = entropy_trace(&run)?;
    let mut table = Table::create(args.common.out.as_deref(), &["t", "delta_s"])?;
    for (t, ds) in trace {
        table.row(&[real(t), real(ds)])?;
    }
    table.finish()?;
    Ok(())
}

fn sweep(
    args: &SweepArgs,
    problem: ProblemSpec,
    header: &[&str],
    fields: fn(&DiagnosticsRecord) -> Vec<f64>,
) -> Result<(), Failure> {
    let cfg = args
        .common
        .solver(SpatialFlux::Eckep, TemporalState::EntropyConservative);
    let problem = args.common.problem(problem);
    // Runs complete before any output so a failure leaves no partial table.
    let mut rows = Vec::new();
    for c in args.configs() {
        let run = march_with(&problem, c.m, c.n, c.k_s, c.k_t, cfg)?;
        rows.push((c, DiagnosticsRecord::from_run(&run)?));
    }
    let mut cols = vec!["k_t", "k_s", "m", "n"];
    cols.extend_from_slice(header);
    let mut table = Table::create(args.common.out.as_deref(), &cols)?;
    for (c, rec) in rows {
        let mut row = vec![int(c.k_t), int(c.k_s), int(c.m), int(c.n)];
        row.extend(fields(&rec).into_iter().map(real));
        table.row(&row)?;
    }
    table.finish()?;
    Ok(())
}

fn dump_operator(args: &DumpArgs) -> Result<(), Failure> {
    let rule = lgl_rule(args.k).map_err(|e| stdg::Error::Config(e.to_string()))?;
    let mut header = vec!["i".to_string(), "node".into(), "weight".into()];
    header.extend((0..rule.len()).map(|j| format!("d{j}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::create(args.out.as_deref(), &header)?;
    for i in 0..rule.len() {
        let mut row = vec![int(i), real(rule.nodes()[i]), real(rule.weights()[i])];
        row.extend((0..rule.len()).map(|j| real(rule.d(i, j))));
        table.row(&row)?;
    }
    table.finish()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Convergence(a) => convergence(a),
        Command::EntropyStability(a) => entropy_stability(a),
        Command::EntropyConservation(a) => sweep(
            a,
            shock_euler(),
            &["xi_s", "delta_s", "initial_projection_term_s"],
            |r| vec![r.xi_s, r.delta_s, r.initial_projection_term_s],
        ),
        Command::KepCheck(a) => sweep(
            a,
            density_wave_euler(),
            &[
                "theta_k",
                "k_initial",
                "k_final",
                "pressure_work_volume",
                "pressure_work_surface",
                "initial_projection_term_k",
            ],
            |r| {
                vec![
                    r.theta_k,
                    r.k_initial,
                    r.k_final,
                    r.pressure_work_volume,
                    r.pressure_work_surface,
                    r.initial_projection_term_k,
                ]
            },
        ),
        Command::DumpOperator(a) => dump_operator(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Solver(e)) => {
            eprintln!("stdg: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Other(e)) => {
            eprintln!("stdg: {e:#}");
            ExitCode::FAILURE
        }
    }
}
