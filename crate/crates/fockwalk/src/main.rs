use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fockwalk::commands::{self, ChainParams, DecohereParams, Model, RateParams, Sweep, TransferParams, VarianceParams, WalkParams};
use fockwalk::config::{load_experiment, ExperimentFile};
use fockwalk::manifest::RunManifest;
use fockwalk::{Grid, Table};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fockwalk", version, about = "Fock-state beam-splitter walks, chiral chains and heralded photon counting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// CSV file to write; a JSON mirror is written next to it. Without it the
    /// CSV goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run log to append to (default: `manifest.jsonl` beside the output).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long, value_enum, default_value = "generalized")]
    model: Model,
    /// Couplings in the chain; it has one more site than this.
    #[arg(long)]
    total_photons: usize,
    /// SSH dimerisation.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta: f64,
    /// SSH hopping `J`; couplings are `2J(1 ± δ)`.
    #[arg(long, default_value_t = 0.5)]
    hopping: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Output photon-number distribution of |l, S-l⟩.
    Walk {
        #[arg(long)]
        total_photons: usize,
        /// Photons entering mode a.
        #[arg(long)]
        input_a: usize,
        #[arg(long)]
        reflectivity: f64,
        /// Beam-splitter phase; adds amplitude columns.
        #[arg(long)]
        phase: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Mirror-transfer fidelity and distribution across a reflectivity sweep.
    Transfer {
        #[arg(long)]
        total_photons: usize,
        #[arg(long, default_value_t = 0)]
        input_a: usize,
        /// Arbitrary input as a JSON list of [re, im] pairs (normalised).
        #[arg(long)]
        state: Option<String>,
        /// `start:stop:steps`, a number, or a list.
        #[arg(long, default_value = "0:1:101")]
        reflectivity: Grid,
        #[command(flatten)]
        out: Output,
    },
    /// Eigenvalues and (near-)zero mode of a chain.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Variance of S_z against reflectivity or walk angle.
    Variance {
        #[arg(long)]
        total_photons: usize,
        #[arg(long, conflicts_with = "imbalance")]
        input_a: Option<usize>,
        /// Δ = S - 2l.
        #[arg(long, allow_negative_numbers = true)]
        imbalance: Option<i64>,
        #[arg(long, conflicts_with = "theta")]
        reflectivity: Option<Grid>,
        /// Walk angle θ ∈ [0, π].
        #[arg(long)]
        theta: Option<Grid>,
        #[command(flatten)]
        out: Output,
    },
    /// Output distribution for partially distinguishable input.
    Decohere {
        #[arg(long)]
        total_photons: usize,
        #[arg(long)]
        input_a: usize,
        #[arg(long, default_value_t = 0.5)]
        reflectivity: f64,
        /// Distinguishability angle y ∈ [0, π/2].
        #[arg(long, default_value = "0:pi/2:7")]
        mixing_angle: Grid,
        #[command(flatten)]
        out: Output,
    },
    /// Altland-Zirnbauer class of a chain Hamiltonian (JSON on stdout).
    Classify {
        #[command(flatten)]
        chain: ChainArgs,
        /// Uniform on-site energy added to the chain.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        onsite: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo run of the heralded experiment from a TOML config.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Print a config with every default filled in and exit.
        #[arg(long)]
        print_default_config: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Sampled rate of n-pair emissions from one source.
    Rate {
        #[arg(long, default_value_t = 0.2)]
        mean_photon_number: f64,
        #[arg(long, default_value_t = 4)]
        pairs: usize,
        /// Pump repetition rate in Hz.
        #[arg(long, default_value_t = 75e3)]
        repetition_rate: f64,
        #[arg(long, default_value_t = 10_000_000)]
        pulses: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

struct Run {
    name: &'static str,
    parameters: Value,
    seed: Option<u64>,
    table: Table,
    stdout_json: Option<Value>,
}

fn chain_params(c: &ChainArgs, onsite: f64) -> ChainParams {
    ChainParams { model: c.model, total: c.total_photons, delta: c.delta, hopping: c.hopping, onsite }
}

fn execute(command: &Command) -> Result<Option<Run>> {
    let run = match command {
        Command::Walk { total_photons, input_a, reflectivity, phase, .. } => {
            let p = WalkParams { total: *total_photons, input_a: *input_a, reflectivity: *reflectivity, phase: *phase };
            Run { name: "walk", parameters: json!(p), seed: None, table: commands::walk(&p)?, stdout_json: None }
        }
        Command::Transfer { total_photons, input_a, state, reflectivity, .. } => {
            let p = TransferParams {
                total: *total_photons,
                input_a: *input_a,
                state: state.as_deref().map(commands::parse_state).transpose()?,
                reflectivity: reflectivity.to_string(),
            };
            Run { name: "transfer", parameters: json!(p), seed: None, table: commands::transfer(&p, reflectivity)?, stdout_json: None }
        }
        Command::Spectrum { chain, .. } => {
            let p = chain_params(chain, 0.0);
            Run { name: "spectrum", parameters: json!(p), seed: None, table: commands::spectrum(&p)?, stdout_json: None }
        }
        Command::Variance { total_photons, input_a, imbalance, reflectivity, theta, .. } => {
            let p = match imbalance {
                Some(d) => VarianceParams::from_imbalance(*total_photons, *d)?,
                None => VarianceParams::from_input(*total_photons, input_a.unwrap_or(total_photons / 2))?,
            };
            let default_grid: Grid = "0:1:101".parse()?;
            let (sweep, label) = match (reflectivity, theta) {
                (_, Some(g)) => (Sweep::Theta(g), json!({ "theta": g.to_string() })),
                (Some(g), None) => (Sweep::Reflectivity(g), json!({ "reflectivity": g.to_string() })),
                (None, None) => (Sweep::Reflectivity(&default_grid), json!({ "reflectivity": default_grid.to_string() })),
            };
            let table = commands::variance(&p, sweep)?;
            Run { name: "variance", parameters: json!({ "input": p, "sweep": label }), seed: None, table, stdout_json: None }
        }
        Command::Decohere { total_photons, input_a, reflectivity, mixing_angle, .. } => {
            let p = DecohereParams {
                total: *total_photons,
                input_a: *input_a,
                reflectivity: *reflectivity,
                mixing_angle: mixing_angle.to_string(),
            };
            Run { name: "decohere", parameters: json!(p), seed: None, table: commands::decohere(&p, mixing_angle)?, stdout_json: None }
        }
        Command::Classify { chain, onsite, .. } => {
            let p = chain_params(chain, *onsite);
            let (table, report) = commands::classify(&p)?;
            Run {
                name: "classify",
                parameters: json!(p),
                seed: None,
                table,
                stdout_json: Some(commands::report_json(&report)),
            }
        }
        Command::Experiment { config, seed, print_default_config, .. } => {
            if *print_default_config {
                print!("{}", toml::to_string(&ExperimentFile::default())?);
                return Ok(None);
            }
            let path = config.as_ref().context("--config is required")?;
            let mut cfg = load_experiment(path)?;
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            let table = commands::experiment(&cfg)?;
            if table.summary.get("heralded") == Some(&json!(0)) {
                eprintln!("warning: no heralded events in {} pulses", cfg.pulses);
            }
            let parameters = json!({ "config": ExperimentFile::from(cfg.clone()), "config_path": path });
            Run { name: "experiment", parameters, seed: Some(cfg.seed), table, stdout_json: None }
        }
        Command::Rate { mean_photon_number, pairs, repetition_rate, pulses, seed, .. } => {
            let p = RateParams {
                mean_photon_number: *mean_photon_number,
                pairs: *pairs,
                repetition_rate: *repetition_rate,
                pulses: *pulses,
                seed: *seed,
            };
            Run { name: "rate", parameters: json!(p), seed: Some(*seed), table: commands::rate(&p)?, stdout_json: None }
        }
    };
    Ok(Some(run))
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Walk { out, .. }
        | Command::Transfer { out, .. }
        | Command::Spectrum { out, .. }
        | Command::Variance { out, .. }
        | Command::Decohere { out, .. }
        | Command::Classify { out, .. }
        | Command::Experiment { out, .. }
        | Command::Rate { out, .. } => out,
    }
}

fn write_outputs(run: &Run, out: &Output, mut manifest: RunManifest) -> Result<()> {
    let Some(csv_path) = &out.output else {
        let stdout = std::io::stdout();
        match &run.stdout_json {
            Some(v) => writeln!(stdout.lock(), "{}", serde_json::to_string_pretty(v)?)?,
            None => run.table.write_csv(stdout.lock())?,
        }
        if let Some(log) = &out.manifest {
            manifest.append_to(log).with_context(|| format!("appending to {}", log.display()))?;
        }
        return Ok(());
    };
    let json_path = csv_path.with_extension("json");
    manifest.outputs = vec![csv_path.clone(), json_path.clone()];
    let file = std::fs::File::create(csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    run.table.write_csv(file)?;
    let doc = run.table.to_json(&serde_json::to_value(&manifest)?);
    std::fs::write(&json_path, serde_json::to_string_pretty(&doc)?)
        .with_context(|| format!("writing {}", json_path.display()))?;
    let log = out.manifest.clone().unwrap_or_else(|| {
        csv_path.parent().unwrap_or(Path::new(".")).join("manifest.jsonl")
    });
    manifest.append_to(&log).with_context(|| format!("appending to {}", log.display()))?;
    if let Some(v) = &run.stdout_json {
        println!("{}", serde_json::to_string_pretty(v)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = SystemTime::now();
    let clock = Instant::now();
    let result = execute(&cli.command).and_then(|run| match run {
        Some(run) => {
            let manifest = RunManifest::new(run.name, run.parameters.clone(), run.seed, started, clock.elapsed());
            write_outputs(&run, output_of(&cli.command), manifest)
        }
        None => Ok(()),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn decohere_default_grid_ends_at_right_angle() {
        let g: Grid = "0:pi/2:7".parse().unwrap();
        assert_eq!(*g.values().last().unwrap(), FRAC_PI_2);
    }
}
