use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use distill_core::circuit::subcircuit_rounds;
use distill_core::harness::{
    apply_key_values, csv_string, json_string, parse_key_values, plot_data, qubit_cycles, rows_for,
    run_distillation, run_logical, run_memory, run_subcircuit_comparison, ExperimentConfig,
    OutputFormat, ResultRow,
};
use distill_core::pauli::Basis;
use distill_core::protocols::{
    analytic_accept, analytic_pout, build_protocol, exhaustive_oracle, leading_coefficient,
};
use distill_core::Error;

#[derive(Parser)]
#[command(
    name = "distill",
    version,
    about = "Surface-code magic-state distillation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form output error and discard ratio over the p_in sweep
    Analytic(Opts),
    /// Exhaustive enumeration of resource-error patterns, checked against the closed form
    Oracle(Opts),
    /// Logical-level Monte Carlo (no surface code)
    Logical(Opts),
    /// Surface-code distillation with iterative decoding and post-selection
    Distill(Opts),
    /// Single-patch memory baseline in both bases
    Memory(Opts),
    /// CNOT sub-circuit against the matched memory baseline
    Subcircuit(Opts),
    /// Space-time cost in qubit-cycles
    Cost(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// 7to1 or 15to1
    #[arg(long)]
    protocol: Option<String>,
    /// Code distance
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p_circuit: Option<f64>,
    /// Input error rate; repeat for a sweep
    #[arg(long)]
    p_in: Vec<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on global decoder iterations
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Plot-data file; defaults to `<out>.plot.csv` when --out is given
    #[arg(long)]
    plot_out: Option<PathBuf>,
}

impl Opts {
    fn resolve(&self) -> distill_core::Result<ExperimentConfig> {
        let mut map: BTreeMap<String, String> = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_key_values(&text)?
            }
            None => BTreeMap::new(),
        };
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        set("protocol", self.protocol.clone());
        set("d", self.d.map(|v| v.to_string()));
        set("p_circuit", self.p_circuit.map(|v| v.to_string()));
        if !self.p_in.is_empty() {
            let list: Vec<String> = self.p_in.iter().map(f64::to_string).collect();
            set("p_in", Some(list.join(",")));
        }
        set("shots", self.shots.map(|v| v.to_string()));
        set("seed", self.seed.map(|v| v.to_string()));
        set("max_iters", self.max_iters.map(|v| v.to_string()));
        set("out", self.out.as_ref().map(|p| p.display().to_string()));
        set(
            "format",
            self.format.map(|f| match f {
                Format::Csv => "csv".to_string(),
                Format::Json => "json".to_string(),
            }),
        );
        apply_key_values(ExperimentConfig::default(), &map)
    }
}

/// Writes to the configured output file or stdout.
fn emit(config: &ExperimentConfig, text: &str) -> distill_core::Result<()> {
    match &config.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_plot(
    opts: &Opts,
    config: &ExperimentConfig,
    rows: &[ResultRow],
) -> distill_core::Result<()> {
    let path = opts
        .plot_out
        .clone()
        .or_else(|| config.out.as_deref().map(plot_path));
    if let Some(path) = path {
        fs::write(path, plot_data(config.protocol, rows))?;
    }
    Ok(())
}

fn plot_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".plot.csv");
    out.with_file_name(name)
}

/// Serializes flat records as CSV, or as JSON alongside the configuration.
fn render<T: Serialize>(config: &ExperimentConfig, records: &[T]) -> distill_core::Result<String> {
    match config.format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "config": config,
            "results": records,
        }))?),
    }
}

fn render_rows(config: &ExperimentConfig, rows: &[ResultRow]) -> distill_core::Result<String> {
    match config.format {
        OutputFormat::Csv => csv_string(rows),
        OutputFormat::Json => json_string(config, rows),
    }
}

#[derive(Serialize)]
struct AnalyticRow {
    protocol: &'static str,
    p_in: f64,
    p_out: f64,
    leading_order: f64,
    discard_ratio: f64,
}

#[derive(Serialize)]
struct OracleRow {
    protocol: &'static str,
    weight: usize,
    patterns: u64,
    accepted: u64,
    accepted_errors: u64,
}

#[derive(Serialize)]
struct SubcircuitRow {
    d: usize,
    p_circuit: f64,
    basis: String,
    observables: usize,
    shots: u64,
    failures: Option<u64>,
    p_fail: f64,
    per_observable_rate: Option<f64>,
    memory_rate: f64,
    ratio: Option<f64>,
    seed: u64,
}

#[derive(Serialize)]
struct CostRow {
    protocol: &'static str,
    d: usize,
    qubit_cycles: u64,
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

enum Failure {
    Config(Error),
    Run(Error),
    Acceptance,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidDistance(_) | Error::InvalidProbability(_) => {
                Failure::Config(e)
            }
            e => Failure::Run(e),
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analytic(opts) => {
            let config = opts.resolve()?;
            let kind = config.protocol;
            let rows: Vec<AnalyticRow> = config
                .p_in
                .iter()
                .map(|&p| AnalyticRow {
                    protocol: kind.label(),
                    p_in: p,
                    p_out: analytic_pout(kind, &p),
                    leading_order: leading_coefficient(kind) as f64 * p.powi(3),
                    discard_ratio: 1.0 - analytic_accept(kind, &p),
                })
                .collect();
            emit(&config, &render(&config, &rows)?)?;
        }
        Command::Oracle(opts) => {
            let config = opts.resolve()?;
            let kind = config.protocol;
            let table = exhaustive_oracle(&build_protocol(kind));
            let k = table.num_resources;
            let rows: Vec<OracleRow> = (0..=k)
                .map(|w| OracleRow {
                    protocol: kind.label(),
                    weight: w,
                    patterns: binomial(k, w),
                    accepted: table.accepted.counts[w],
                    accepted_errors: table.accepted_errors.counts[w],
                })
                .collect();
            emit(&config, &render(&config, &rows)?)?;
            let worst = (0..20)
                .map(|i| 0.5 * i as f64 / 19.0)
                .map(|p| {
                    (table.p_out(&p) - analytic_pout(kind, &p))
                        .abs()
                        .max((table.p_accept(&p) - analytic_accept(kind, &p)).abs())
                })
                .fold(0.0f64, f64::max);
            let pass = worst <= 1e-12;
            eprintln!(
                "{}: oracle vs closed form, max deviation {worst:.3e} over 20 points: {}",
                kind.label(),
                if pass { "PASS" } else { "FAIL" }
            );
            if !pass {
                return Err(Failure::Acceptance);
            }
        }
        Command::Logical(opts) => {
            let config = opts.resolve()?;
            let rows = rows_for(&config, &run_logical(&config)?);
            emit(&config, &render_rows(&config, &rows)?)?;
            emit_plot(&opts, &config, &rows)?;
        }
        Command::Distill(opts) => {
            let config = opts.resolve()?;
            let rows = rows_for(&config, &run_distillation(&config)?);
            emit(&config, &render_rows(&config, &rows)?)?;
            emit_plot(&opts, &config, &rows)?;
        }
        Command::Memory(opts) => {
            let config = opts.resolve()?;
            let rounds = subcircuit_rounds(&build_protocol(config.protocol));
            let rows = [Basis::X, Basis::Z]
                .into_iter()
                .enumerate()
                .map(|(i, b)| {
                    run_memory(
                        config.d,
                        rounds,
                        config.p_circuit,
                        b,
                        config.shots,
                        config.seed.wrapping_add(i as u64),
                    )
                })
                .collect::<distill_core::Result<Vec<_>>>()?;
            emit(&config, &render(&config, &rows)?)?;
        }
        Command::Subcircuit(opts) => {
            let config = opts.resolve()?;
            let r = run_subcircuit_comparison(&config)?;
            let mut rows: Vec<SubcircuitRow> = r
                .runs
                .iter()
                .map(|b| SubcircuitRow {
                    d: config.d,
                    p_circuit: config.p_circuit,
                    basis: b.basis.to_string(),
                    observables: b.num_observables,
                    shots: b.shots,
                    failures: Some(b.failures),
                    p_fail: b.failures as f64 / b.shots as f64,
                    per_observable_rate: None,
                    memory_rate: b.memory.rate,
                    ratio: None,
                    seed: config.seed,
                })
                .collect();
            rows.push(SubcircuitRow {
                d: config.d,
                p_circuit: config.p_circuit,
                basis: "XZ".into(),
                observables: r.num_observables,
                shots: config.shots,
                failures: None,
                p_fail: r.p_fail,
                per_observable_rate: Some(r.per_observable_rate),
                memory_rate: r.memory_rate,
                ratio: Some(r.ratio),
                seed: config.seed,
            });
            emit(&config, &render(&config, &rows)?)?;
        }
        Command::Cost(opts) => {
            let config = opts.resolve()?;
            let rows = [CostRow {
                protocol: config.protocol.label(),
                d: config.d,
                qubit_cycles: qubit_cycles(config.protocol, config.d as u64),
            }];
            emit(&config, &render(&config, &rows)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("distill: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("distill: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Acceptance) => ExitCode::from(3),
    }
}
