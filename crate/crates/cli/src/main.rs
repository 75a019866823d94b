use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hoinet::io::{
    read_beat_series, read_dataset, result_dot, write_benchmark_csv, write_dataset, write_json,
    write_result_json, write_sweep_csv, Dataset, SimulationSidecar,
};
use hoinet::netinfer::{
    analyze_dynamic, analyze_static_with, benchmark, AnalysisMode, BenchmarkConfig, DynamicOptions,
    NetworkResult, Scenario, StaticOptions,
};
use hoinet::physio::{
    aligned_series, derive_cardiac_output, derive_discrete_dataset, derive_peripheral_resistance,
    measured, BeatAligned, BeatColumn, DiscreteKind,
};
use hoinet::seed::stream_rng;
use hoinet::significance::{ConditionalNull, SurrogateConfig, SurrogateMethod};
use hoinet::simgen::{
    dynamic_sweep, exact_three_node_dynamic, exact_three_node_static, gen_binary10,
    gen_three_node_dynamic, gen_three_node_static, gen_var_stars, static_sweep, Binary10Params,
    StarStructure, SweepPoint, ThreeNodeDynamicParams, ThreeNodeStaticParams, VarStarsParams,
};

#[derive(Parser)]
#[command(
    name = "hoinet",
    version,
    about = "High-order interaction analysis of networks"
)]
struct Cli {
    /// Worker threads for surrogate and benchmark workloads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Display information values in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset from a simulated system, with a JSON sidecar.
    Simulate(SimulateArgs),
    /// Analyze every link of a dataset and reconstruct the network.
    Analyze(AnalyzeArgs),
    /// Exact measures of the theoretical systems.
    Theory {
        #[command(subcommand)]
        system: TheorySystem,
    },
    /// Reconstruction accuracy over repeated simulations.
    Benchmark(BenchmarkArgs),
    /// Derive beat-to-beat variables from a beat-series CSV.
    Derive(DeriveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    ThreeNodeStatic,
    ThreeNodeDynamic,
    Binary10,
    VarStars,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Competing,
    Propagation,
}

impl From<Structure> for StarStructure {
    fn from(s: Structure) -> Self {
        match s {
            Structure::Competing => StarStructure::Competing,
            Structure::Propagation => StarStructure::Propagation,
        }
    }
}

#[derive(Args)]
struct SeedArg {
    /// Master seed; falls back to HOINET_SEED, then 0.
    #[arg(long, env = "HOINET_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    system: System,
    #[arg(long, short = 'n', default_value_t = 1000)]
    n: usize,
    #[command(flatten)]
    seed: SeedArg,
    /// Dataset CSV to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Sidecar JSON path (default: output with a .json extension).
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 0.9)]
    gamma1: f64,
    #[arg(long, default_value_t = 0.9)]
    gamma2: f64,
    #[arg(long, default_value_t = 0.8)]
    gamma3: f64,
    #[arg(long, value_enum, default_value_t = Structure::Propagation)]
    structure: Structure,
    #[arg(long, default_value_t = 0.5)]
    hub_out: f64,
    /// Defaults to 1 - hub-out.
    #[arg(long)]
    other_arm: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Static,
    Dynamic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Shuffle,
    Iaaft,
}

#[derive(Clone, Copy, ValueEnum)]
enum CondNull {
    Stratified,
    Joint,
}

#[derive(Args)]
struct SurrogateArgs {
    #[arg(long, default_value_t = 100)]
    surrogates: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Default: shuffle for static, iaaft for dynamic analysis.
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long, default_value_t = 100)]
    iaaft_max_iter: usize,
    /// Null used for conditional information in static mode.
    #[arg(long, value_enum, default_value_t = CondNull::Stratified)]
    conditional_null: CondNull,
    #[arg(long, default_value_t = 20)]
    p_max: usize,
    #[arg(long, default_value_t = 20)]
    q: usize,
    #[command(flatten)]
    seed: SeedArg,
}

impl SurrogateArgs {
    fn config(&self, dynamic: bool) -> SurrogateConfig {
        let method = match (self.method, dynamic) {
            (Some(Method::Shuffle), _) | (None, false) => SurrogateMethod::Shuffle,
            (Some(Method::Iaaft), _) | (None, true) => SurrogateMethod::Iaaft,
        };
        SurrogateConfig {
            count: self.surrogates,
            alpha: self.alpha,
            method,
            iaaft_max_iter: self.iaaft_max_iter,
            master_seed: self.seed.seed,
        }
    }

    fn static_options(&self) -> StaticOptions {
        StaticOptions {
            conditional_null: match self.conditional_null {
                CondNull::Stratified => ConditionalNull::Stratified,
                CondNull::Joint => ConditionalNull::Joint,
            },
            ..StaticOptions::default()
        }
    }

    fn dynamic_options(&self) -> DynamicOptions {
        DynamicOptions {
            p_max: self.p_max,
            q: self.q,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    surrogate: SurrogateArgs,
    /// Result JSON to write.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Graphviz file of the reconstructed network.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TheorySystem {
    /// The three-node common-target system.
    ThreeNode(TheoryArgs),
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    kind: Mode,
    /// Sweep alpha (static, gamma = 1.5 - alpha, beta = 0.9) or a
    /// (dynamic, c = 1 - a, b = 1) over its range.
    #[arg(long)]
    sweep: bool,
    /// Sweep step (default 0.025 static, 0.05 dynamic).
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    beta: f64,
    #[arg(long, default_value_t = 0.75)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Restricted-model order for the dynamic system.
    #[arg(long, default_value_t = 20)]
    q: usize,
    /// CSV to write (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Binary10,
    VarStarsCompeting,
    VarStarsPropagation,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    #[arg(long, value_delimiter = ',', default_values_t = [250, 500, 1000])]
    lengths: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Hub coupling values for the star scenarios (other arm = 1 - value).
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    hub_out: Vec<f64>,
    #[command(flatten)]
    surrogate: SurrogateArgs,
    /// Report CSV to write (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON file with every run outcome.
    #[arg(long)]
    outcomes: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeriveKind {
    Hv,
    Sv,
    Rp,
    Co,
    Pr,
    Hp,
    Sp,
    Dp,
    Ra,
    Map,
}

#[derive(Args)]
struct DeriveArgs {
    /// Variables to derive, aligned on their common beats. Binary
    /// (hv, sv, rp) and real-valued (co, pr, measured columns) kinds
    /// cannot be mixed.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    kind: Vec<DeriveKind>,
    #[arg(long, short)]
    input: PathBuf,
    /// Stroke-volume calibration factor.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, short)]
    output: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker pool")?;
    }
    let scale = if cli.bits {
        std::f64::consts::LOG2_E
    } else {
        1.0
    };
    match cli.command {
        Command::Simulate(args) => simulate(&args),
        Command::Analyze(args) => analyze(&args, scale),
        Command::Theory {
            system: TheorySystem::ThreeNode(args),
        } => theory(&args, scale),
        Command::Benchmark(args) => run_benchmark(&args),
        Command::Derive(args) => derive(&args),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let seed = args.seed.seed;
    let mut rng = stream_rng(seed, 0);
    let (name, params, dataset, truth) = match args.system {
        System::ThreeNodeStatic => {
            let p = ThreeNodeStaticParams {
                alpha: args.alpha,
                beta: args.beta,
                gamma: args.gamma,
            };
            let g = gen_three_node_static(&p, args.n, &mut rng)?;
            (
                "three-node-static",
                serde_json::to_value(p)?,
                Dataset::Symbols(g.dataset),
                g.truth,
            )
        }
        System::ThreeNodeDynamic => {
            let p = ThreeNodeDynamicParams {
                a: args.a,
                b: args.b,
                c: args.c,
            };
            let g = gen_three_node_dynamic(&p, args.n, &mut rng)?;
            (
                "three-node-dynamic",
                serde_json::to_value(p)?,
                Dataset::Series(g.dataset),
                g.truth,
            )
        }
        System::Binary10 => {
            let p = Binary10Params {
                gamma1: args.gamma1,
                gamma2: args.gamma2,
                gamma3: args.gamma3,
                n: args.n,
                seed,
            };
            let g = gen_binary10(&p)?;
            (
                "binary10",
                serde_json::to_value(p)?,
                Dataset::Symbols(g.dataset),
                g.truth,
            )
        }
        System::VarStars => {
            let p = VarStarsParams {
                structure: args.structure.into(),
                hub_out: args.hub_out,
                other_arm: args.other_arm.unwrap_or(1.0 - args.hub_out),
                n: args.n,
                seed,
            };
            let g = gen_var_stars(&p)?;
            (
                "var-stars",
                serde_json::to_value(p)?,
                Dataset::Series(g.dataset),
                g.truth,
            )
        }
    };
    write_dataset(&args.output, &dataset)
        .with_context(|| format!("writing {}", args.output.display()))?;
    let channels = match &dataset {
        Dataset::Symbols(d) => d.channel_names().to_vec(),
        Dataset::Series(s) => s.channel_names().to_vec(),
    };
    let sidecar = SimulationSidecar::new(name, &params, seed, &channels, &truth, args.n)?;
    let sidecar_path = args
        .sidecar
        .clone()
        .unwrap_or_else(|| args.output.with_extension("json"));
    write_json(create(&sidecar_path)?, &sidecar)?;
    Ok(())
}

fn fmt_value(v: f64, scale: f64) -> String {
    format!("{:>9.5}", v * scale)
}

fn print_summary(result: &NetworkResult, scale: f64) -> io::Result<()> {
    let unit = if scale == 1.0 { "nats" } else { "bits" };
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<18} {:>9} {:>9} {:>9} {:>7}  class ({unit})",
        "link", "IS", "cIS", "nIS", "B"
    )?;
    for l in &result.links {
        let pair = format!(
            "{} -- {}",
            result.channel_names[l.i], result.channel_names[l.j]
        );
        let b = l.b_index.map_or("NaN".to_string(), |b| format!("{b:.3}"));
        writeln!(
            out,
            "{pair:<18} {} {} {} {b:>7}  {}",
            fmt_value(l.is_value, scale),
            fmt_value(l.cis_value, scale),
            fmt_value(l.nis_value, scale),
            l.link_class
        )?;
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs, scale: f64) -> Result<()> {
    let mode = match args.mode {
        Mode::Static => AnalysisMode::Static,
        Mode::Dynamic => AnalysisMode::Dynamic,
    };
    let dataset = read_dataset(&args.input, mode)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let s = &args.surrogate;
    let result = match dataset {
        Dataset::Symbols(d) => analyze_static_with(&d, &s.config(false), &s.static_options())?,
        Dataset::Series(series) => analyze_dynamic(&series, &s.config(true), &s.dynamic_options())?,
    };
    if let Some(path) = &args.output {
        write_result_json(create(path)?, &result)?;
    }
    if let Some(path) = &args.dot {
        std::fs::write(path, result_dot(&result))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print_summary(&result, scale)?;
    Ok(())
}

fn theory(args: &TheoryArgs, scale: f64) -> Result<()> {
    let (parameter, points) = match args.kind {
        Mode::Static => {
            let points = if args.sweep {
                static_sweep(args.step.unwrap_or(0.025))?
            } else {
                let p = ThreeNodeStaticParams {
                    alpha: args.alpha,
                    beta: args.beta,
                    gamma: args.gamma,
                };
                vec![SweepPoint {
                    parameter: args.alpha,
                    measures: exact_three_node_static(&p)?,
                }]
            };
            ("alpha", points)
        }
        Mode::Dynamic => {
            let points = if args.sweep {
                dynamic_sweep(args.step.unwrap_or(0.05), args.q)?
            } else {
                let p = ThreeNodeDynamicParams {
                    a: args.a,
                    b: args.b,
                    c: args.c,
                };
                vec![SweepPoint {
                    parameter: args.a,
                    measures: exact_three_node_dynamic(&p, args.q)?,
                }]
            };
            ("a", points)
        }
    };
    match &args.output {
        Some(path) => write_sweep_csv(create(path)?, parameter, &points, 1.0)?,
        None => write_sweep_csv(io::stdout().lock(), parameter, &points, scale)?,
    }
    Ok(())
}

fn run_benchmark(args: &BenchmarkArgs) -> Result<()> {
    let scenario = match args.scenario {
        ScenarioArg::Binary10 => Scenario::binary10_default(),
        ScenarioArg::VarStarsCompeting => Scenario::VarStars {
            structure: StarStructure::Competing,
            hub_out: args.hub_out.clone(),
        },
        ScenarioArg::VarStarsPropagation => Scenario::VarStars {
            structure: StarStructure::Propagation,
            hub_out: args.hub_out.clone(),
        },
    };
    let s = &args.surrogate;
    let config = BenchmarkConfig {
        lengths: args.lengths.clone(),
        runs: args.runs,
        surrogates: s.config(!matches!(scenario, Scenario::Binary10 { .. })),
        static_options: s.static_options(),
        dynamic: s.dynamic_options(),
    };
    let report = benchmark(&scenario, &config)?;
    match &args.output {
        Some(path) => write_benchmark_csv(create(path)?, &report)?,
        None => write_benchmark_csv(io::stdout().lock(), &report)?,
    }
    if let Some(path) = &args.outcomes {
        write_json(create(path)?, &report.outcomes)?;
    }
    Ok(())
}

fn derive(args: &DeriveArgs) -> Result<()> {
    let beats = read_beat_series(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let discrete: Vec<DiscreteKind> = args
        .kind
        .iter()
        .filter_map(|k| match k {
            DeriveKind::Hv => Some(DiscreteKind::Hv),
            DeriveKind::Sv => Some(DiscreteKind::Sv),
            DeriveKind::Rp => Some(DiscreteKind::Rp),
            _ => None,
        })
        .collect();
    let (first_beat, dataset) = if discrete.len() == args.kind.len() {
        let (first, d) = derive_discrete_dataset(&beats, &discrete)?;
        (first, Dataset::Symbols(d))
    } else if discrete.is_empty() {
        let needs_co = args
            .kind
            .iter()
            .any(|k| matches!(k, DeriveKind::Co | DeriveKind::Pr));
        let co = if needs_co {
            Some(derive_cardiac_output(&beats, args.beta)?)
        } else {
            None
        };
        let mut named: Vec<(&str, BeatAligned<f64>)> = Vec::new();
        for k in &args.kind {
            let entry = match k {
                DeriveKind::Co => ("CO", co.clone().expect("computed above")),
                DeriveKind::Pr => (
                    "PR",
                    derive_peripheral_resistance(&beats, co.as_ref().expect("computed above"))?,
                ),
                DeriveKind::Hp => ("HP", measured(&beats, BeatColumn::Hp)?),
                DeriveKind::Sp => ("SP", measured(&beats, BeatColumn::Sp)?),
                DeriveKind::Dp => ("DP", measured(&beats, BeatColumn::Dp)?),
                DeriveKind::Ra => ("RA", measured(&beats, BeatColumn::Ra)?),
                DeriveKind::Map => ("MAP", measured(&beats, BeatColumn::Map)?),
                DeriveKind::Hv | DeriveKind::Sv | DeriveKind::Rp => unreachable!(),
            };
            named.push(entry);
        }
        let refs: Vec<(&str, &BeatAligned<f64>)> = named.iter().map(|(n, s)| (*n, s)).collect();
        let (first, s) = aligned_series(&refs)?;
        (first, Dataset::Series(s))
    } else {
        bail!("binary (hv, sv, rp) and real-valued kinds cannot be mixed");
    };
    write_dataset(&args.output, &dataset)
        .with_context(|| format!("writing {}", args.output.display()))?;
    log::info!("derived series start at beat {first_beat}");
    Ok(())
}
