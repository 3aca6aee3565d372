//! Command-line surface: scenario generation, simulation, evaluation and
//! multi-seed strategy comparison, each reproducible from its manifest.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use streamforage::engine::{
    complexity_trace_csv, emit_timeline, gaze_trace_csv, load_timeline, run_with_options,
    ForagerConfig, RunOptions,
};
use streamforage::error::Error;
use streamforage::eval::{compare_strategies, evaluate, fit_strategy_configs};
use streamforage::manifest::RunManifest;
use streamforage::scenario::{generate_scenario, load_scenario, save_scenario, ScenarioConfig};

const OUT_DIR_ENV: &str = "STREAMFORAGE_OUT";

#[derive(Parser)]
#[command(
    name = "streamforage",
    version,
    about = "Bayesian-foraging monitor for multiple concurrent streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario file.
    Gen(GenArgs),
    /// Simulate a forager over a scenario and emit its timeline.
    Run(RunArgs),
    /// Score a timeline against its scenario's ground truth.
    Eval(EvalArgs),
    /// Compare giving-up strategies over multiple seeds.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Scenario preset: ucr-like, sparse or crowded.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Full scenario-generator config (JSON) instead of a preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output scenario file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file.
    #[arg(short, long)]
    scenario: PathBuf,
    /// Forager config (JSON); defaults apply when omitted.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (or $STREAMFORAGE_OUT).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Extra traces: complexity, gaze (repeatable).
    #[arg(long, value_parser = ["complexity", "gaze"])]
    trace: Vec<String>,
    /// Dump per-tick priority maps and proto ellipses (large!).
    #[arg(long)]
    dump_priority: bool,
    /// Worker threads for the pre-attentive pass.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// Scenario file.
    #[arg(short, long)]
    scenario: PathBuf,
    /// Timeline CSV produced by `run`.
    #[arg(short, long)]
    timeline: PathBuf,
    /// Report output path (JSON); stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Scenario file.
    #[arg(short, long)]
    scenario: PathBuf,
    /// Comma-separated strategy kinds: bayes, charnov, det, random.
    #[arg(long, value_delimiter = ',', default_value = "bayes,charnov,det,random")]
    strategies: Vec<String>,
    /// Number of seeds (0..n).
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// Runs reaching this switch count are flagged and excluded.
    #[arg(long, default_value_t = 280)]
    switch_bound: u64,
    /// Base forager config applied to every strategy.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Output directory (or $STREAMFORAGE_OUT).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Parallel (strategy, seed) workers.
    #[arg(long, default_value_t = 2)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_)
                | Error::Format { .. }
                | Error::Validation(_)
                | Error::Parameter(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn resolve_out_dir(arg: Option<PathBuf>) -> Result<PathBuf, Error> {
    arg.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).ok_or_else(|| {
        Error::Config(format!(
            "no output directory: pass -o/--output or set ${OUT_DIR_ENV}"
        ))
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_gen(args: GenArgs) -> Result<(), Error> {
    let cfg = match (&args.preset, &args.config) {
        (Some(name), None) => ScenarioConfig::preset(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Format {
                path: path.display().to_string(),
                detail: e.to_string(),
            })?
        }
        (None, None) => ScenarioConfig::preset("ucr-like")?,
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let landscape = generate_scenario(&cfg, args.seed)?;
    save_scenario(&landscape, &args.output)?;

    let mut manifest = RunManifest::new("gen").with_scenario(&args.output)?;
    manifest.seed = Some(args.seed);
    manifest.outputs.push(args.output.clone());
    let manifest_path = args.output.with_extension("manifest.json");
    manifest.save(&manifest_path)?;
    println!(
        "wrote scenario: {} (K={}, {}x{}, T_total={}, {} activities)",
        args.output.display(),
        landscape.stream_count(),
        landscape.width,
        landscape.height,
        landscape.t_total,
        landscape.activities().count()
    );
    println!("wrote manifest: {}", manifest_path.display());
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    // Validate all inputs before touching the output directory so a corrupt
    // config leaves no partial outputs behind.
    let landscape = load_scenario(&args.scenario)?;
    let mut config = match &args.config {
        Some(path) => ForagerConfig::load(path)?,
        None => ForagerConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    let out_dir = resolve_out_dir(args.output)?;

    let opts = RunOptions {
        jobs: args.jobs,
        trace_complexity: args.trace.iter().any(|t| t == "complexity"),
        dump_dir: args.dump_priority.then(|| out_dir.join("priority")),
    };
    let output = run_with_options(&landscape, &config, &opts)?;

    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let mut manifest = RunManifest::new("run").with_scenario(&args.scenario)?;
    manifest.seed = Some(config.seed);
    manifest.config_path = args.config.clone();
    manifest.config = Some(config.clone());
    manifest.output_dir = Some(out_dir.clone());

    let timeline_path = out_dir.join("timeline.csv");
    emit_timeline(&output.timeline, &timeline_path)?;
    manifest.outputs.push(timeline_path.clone());

    if let Some(rows) = &output.complexity_trace {
        let path = out_dir.join("trace_complexity.csv");
        write_text(&path, &complexity_trace_csv(rows))?;
        manifest.outputs.push(path);
    }
    if args.trace.iter().any(|t| t == "gaze") {
        let path = out_dir.join("trace_gaze.csv");
        write_text(&path, &gaze_trace_csv(&output.timeline))?;
        manifest.outputs.push(path);
    }
    if let Some(dir) = &opts.dump_dir {
        manifest.outputs.push(dir.clone());
    }
    let manifest_path = out_dir.join("manifest.json");
    manifest.save(&manifest_path)?;

    println!(
        "wrote timeline: {} ({} ticks, {} switches)",
        timeline_path.display(),
        output.timeline.entries.len(),
        output.timeline.leave_count()
    );
    println!("wrote manifest: {}", manifest_path.display());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), Error> {
    let landscape = load_scenario(&args.scenario)?;
    let timeline = load_timeline(&args.timeline)?;
    let report = evaluate(&timeline, &landscape)?;
    let json = report.to_json();
    match &args.output {
        Some(path) => {
            write_text(path, &json)?;
            let mut manifest = RunManifest::new("eval").with_scenario(&args.scenario)?;
            manifest.outputs.push(path.clone());
            manifest.save(&path.with_extension("manifest.json"))?;
            println!(
                "accuracy={:.4} avg_accuracy={:.4} switches={} kl={:.4} -> {}",
                report.accuracy,
                report.avg_accuracy,
                report.switch_count,
                report.kl_activity,
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<(), Error> {
    let landscape = load_scenario(&args.scenario)?;
    let base = match &args.config {
        Some(path) => ForagerConfig::load(path)?,
        None => ForagerConfig::default(),
    };
    if args.seeds == 0 {
        return Err(Error::Config("compare needs at least one seed".into()));
    }
    let kinds: Vec<&str> = args.strategies.iter().map(String::as_str).collect();
    let configs = fit_strategy_configs(&landscape, &base, &kinds, args.switch_bound)?;
    for (name, cfg) in &configs {
        eprintln!("fitted {name}: {}", serde_json::to_string(&cfg.strategy).unwrap());
    }
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let comparison =
        compare_strategies(&landscape, &configs, &seeds, args.switch_bound, args.jobs)?;

    print!("{}", comparison.to_csv());
    let out_dir = args.output.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    if let Some(out_dir) = out_dir {
        std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
        let csv_path = out_dir.join("comparison.csv");
        write_text(&csv_path, &comparison.to_csv())?;
        let json_path = out_dir.join("comparison.json");
        write_text(&json_path, &comparison.to_json())?;
        let mut manifest = RunManifest::new("compare").with_scenario(&args.scenario)?;
        manifest.config = Some(base);
        manifest.output_dir = Some(out_dir.clone());
        manifest.outputs.push(csv_path);
        manifest.outputs.push(json_path);
        manifest.save(&out_dir.join("manifest.json"))?;
        println!("wrote comparison under {}", out_dir.display());
    }
    Ok(())
}
