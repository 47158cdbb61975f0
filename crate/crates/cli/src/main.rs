use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use topomix::config::{self, ExperimentConfig, Quantity, Row};
use topomix::convexroof::trace_json_lines;

#[derive(Parser)]
#[command(name = "topomix", version, about = "Entropy, CMI, negativity and anyon data for mixed topological states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Von Neumann entropy of a region under Pauli noise.
    Entropy(Common),
    /// Conditional mutual information I(A:C|B).
    Cmi(Common),
    /// Logarithmic negativity across a cut.
    Negativity(Common),
    /// Mutual braiding and self-statistics of e, m, f.
    Braiding(Common),
    /// Quantum / classical / trivial memory classification.
    Memory(Common),
    /// Topological entanglement witness check.
    Witness(Common),
    /// Convex-roof CMI minimization.
    Roof(Common),
    /// Run the config's sweep, whatever its quantity.
    Sweep(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest syndrome dimension enumerated exactly.
    #[arg(long)]
    budget_qubits: Option<usize>,
    /// Switch entropy and CMI to the sampled estimator.
    #[arg(long)]
    mc_samples: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cmd: Command) -> Result<(), Box<dyn std::error::Error>> {
    let (quantity, args) = match cmd {
        Command::Entropy(a) => (Some(Quantity::Entropy), a),
        Command::Cmi(a) => (Some(Quantity::Cmi), a),
        Command::Negativity(a) => (Some(Quantity::Negativity), a),
        Command::Braiding(a) => (Some(Quantity::BraidingTable), a),
        Command::Memory(a) => (Some(Quantity::MemoryClass), a),
        Command::Witness(a) => (Some(Quantity::TeeWitness), a),
        Command::Roof(a) => (Some(Quantity::ConvexRoof), a),
        Command::Sweep(a) => (None, a),
    };
    let text = fs::read_to_string(&args.config).map_err(|e| format!("reading {}: {e}", args.config.display()))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(q) = quantity {
        cfg.quantity = q;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(b) = args.budget_qubits {
        cfg.budgets.syndrome_bits = b;
    }
    if args.mc_samples.is_some() {
        cfg.budgets.mc_samples = args.mc_samples;
    }
    let out_path = args.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));

    let result = if quantity.is_none() { config::sweep(&cfg)? } else { config::run(&cfg)? };

    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&result.document)? + "\n",
        Format::Csv => to_csv(&result.rows)?,
    };
    match &out_path {
        Some(p) => fs::write(p, body)?,
        None => print!("{body}"),
    }
    if !result.trace.is_empty() {
        let trace_path = match &out_path {
            Some(p) => trace_path_for(p),
            None => PathBuf::from("roof.trace.jsonl"),
        };
        fs::write(&trace_path, trace_json_lines(&result.trace))?;
        eprintln!("optimizer trace written to {}", trace_path.display());
    }
    Ok(())
}

fn trace_path_for(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".trace.jsonl");
    PathBuf::from(name)
}

fn to_csv(rows: &[Row]) -> Result<String, Box<dyn std::error::Error>> {
    let mut columns: Vec<&String> = rows.iter().flat_map(|r| r.keys()).collect();
    columns.sort();
    columns.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for r in rows {
        w.write_record(columns.iter().map(|c| match r.get(*c) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
        }))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
