use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use uam_sched::batch::{run_batch, summarize, write_rows_csv, write_summary_csv, EpisodeRow, SweepConfig};
use uam_sched::engine::run_episode;
use uam_sched::network::{generate_network, NetworkParams};
use uam_sched::protocols::ProtocolKind;
use uam_sched::scenario::{parse_scenario, Scenario};

#[derive(Parser)]
#[command(name = "uam-sched", version, about = "Urban air mobility intersection scheduling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one episode and print its metrics.
    Run(RunArgs),
    /// Run a batch over protocols, densities and non-compliance levels.
    Sweep(SweepArgs),
    /// Emit the default two-hub network as a scenario file.
    GenNetwork(GenArgs),
    /// Parse and validate a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file; the default network is used when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<ProtocolKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write per-aircraft records as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = ProtocolKind::ALL)]
    protocols: Vec<ProtocolKind>,
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 15, 20, 25])]
    densities: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
    noncompliance: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    episodes: usize,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Per-episode rows as CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cell means and confidence half-widths as CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = NetworkParams::default().legs_per_hub)]
    legs: usize,
    #[arg(long, default_value_t = NetworkParams::default().leg_length)]
    leg_length: f64,
    #[arg(long, default_value_t = NetworkParams::default().hub_spacing)]
    hub_spacing: f64,
    #[arg(long, default_value_t = NetworkParams::default().stagger)]
    stagger: f64,
    #[arg(long, default_value_t = NetworkParams::default().spawn_gap)]
    spawn_gap: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Runtime(String),
}

impl Failure {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Runtime(format!("{}: {e}", path.display()))
    }
}

fn load(path: Option<&Path>) -> Result<Scenario, Failure> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            parse_scenario(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
        }
        None => generate_network(&NetworkParams::default()).map_err(|e| Failure::Invalid(e.to_string())),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| Failure::io(p, e))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut scenario = load(args.scenario.as_deref())?;
    if let Some(p) = args.protocol {
        scenario.protocol = p;
    }
    if let Some(s) = args.seed {
        scenario.seed = s;
    }
    let airspace = scenario.validate().map_err(|e| Failure::Invalid(e.to_string()))?;
    let report = run_episode(Arc::new(airspace), &scenario.per_route(), scenario.engine_config());
    println!("protocol                    {}", report.protocol);
    println!("seed                        {}", report.seed);
    println!("aircraft                    {} ({} compliant)", report.aircraft, report.compliant_aircraft);
    println!("steps                       {}", report.steps);
    println!("cross-corridor LOS          {}", report.cross_corridor_los);
    println!("same-route LOS              {}", report.same_route_los);
    println!("compliant/compliant LOS     {}", report.compliant_compliant_los);
    println!("compliant/noncompliant LOS  {}", report.compliant_noncompliant_los);
    println!("max flight time (s)         {:.1}", report.max_flight_time_s);
    println!("mean halting (%)            {:.3}", report.mean_halt_pct);
    println!("timed out                   {}", report.timeout);
    if let Some(path) = args.out {
        let mut w = csv::Writer::from_writer(File::create(&path).map_err(|e| Failure::io(&path, e))?);
        for r in &report.records {
            w.serialize(r).map_err(|e| Failure::io(&path, e))?;
        }
        w.flush().map_err(|e| Failure::io(&path, e))?;
    }
    if report.timeout {
        return Err(Failure::Runtime(format!("episode hit max_steps ({})", scenario.max_steps)));
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let scenario = load(args.scenario.as_deref())?;
    scenario.validate().map_err(|e| Failure::Invalid(e.to_string()))?;
    if let Some(p) = args.noncompliance.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Failure::Invalid(format!("noncompliance levels must lie in [0, 1], got {p}")));
    }
    let config = SweepConfig {
        protocols: args.protocols,
        densities: args.densities,
        noncompliance: args.noncompliance,
        episodes: args.episodes,
        base_seed: args.base_seed,
    };
    let rows = run_batch(&config, &scenario);
    let out_name = args.out.clone().unwrap_or_else(|| "stdout".into());
    write_rows_csv(sink(args.out.as_deref())?, &rows).map_err(|e| Failure::io(&out_name, e))?;
    if let Some(path) = args.summary {
        write_summary_csv(sink(Some(&path))?, &summarize(&rows)).map_err(|e| Failure::io(&path, e))?;
    }
    let failed: Vec<&EpisodeRow> = rows.iter().filter(|r| !r.ok()).collect();
    match failed.first() {
        Some(r) => Err(Failure::Runtime(format!("{} episode(s) failed, first: {}", failed.len(), r.error))),
        None => Ok(()),
    }
}

fn gen_network(args: GenArgs) -> Result<(), Failure> {
    let params = NetworkParams {
        legs_per_hub: args.legs,
        leg_length: args.leg_length,
        hub_spacing: args.hub_spacing,
        stagger: args.stagger,
        spawn_gap: args.spawn_gap,
        ..NetworkParams::default()
    };
    let scenario = generate_network(&params).map_err(|e| Failure::Invalid(e.to_string()))?;
    let name = args.out.clone().unwrap_or_else(|| "stdout".into());
    sink(args.out.as_deref())?
        .write_all(scenario.to_toml().map_err(|e| Failure::Invalid(e.to_string()))?.as_bytes())
        .map_err(|e| Failure::io(&name, e))
}

fn validate(path: &Path) -> Result<(), Failure> {
    let scenario = load(Some(path))?;
    let airspace = scenario.validate().map_err(|e| Failure::Invalid(e.to_string()))?;
    println!(
        "ok: {} corridors, {} routes, {} intersections",
        airspace.corridors().len(),
        airspace.routes().len(),
        airspace.intersections().len()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::GenNetwork(a) => gen_network(a),
        Command::Validate { scenario } => validate(&scenario),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
