use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwprobe::experiments::{self, ExperimentConfig, Outcome, Scenario};
use qwprobe::topology::{parse_graph, ShiftOperator};

/// Quantum-walk probes for single-parameter estimation.
#[derive(Parser)]
#[command(name = "qwprobe", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one probe on a graph file or a ring and report every step.
    Simulate(RunArgs),
    /// Gaussian-probe sweep on a ring (QFI and FI against t, one block per sigma).
    LineSweep(RunArgs),
    /// Optimal probes on the enhanced topology against (D-1)^2 t^2.
    Enhanced(RunArgs),
    /// Simulated values against closed forms; exits 1 on any deviation above 1e-8.
    Check(RunArgs),
    /// Graph file utilities.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Print the version.
    Version,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Parse a graph file and check that its shift is unitary.
    Validate { file: PathBuf },
}

/// Flags mirror the config-file keys; a flag wins over the file.
#[derive(Args, Default)]
struct RunArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path; the CSV goes to stdout when omitted.
    #[arg(short, long)]
    output: Option<String>,
    /// Encoding axes, e.g. `x,y`.
    #[arg(long)]
    axis: Option<String>,
    /// Encoded angles, e.g. `pi/2,0.3`.
    #[arg(long)]
    theta: Option<String>,
    /// Gaussian widths, e.g. `1,2,5,10`.
    #[arg(long)]
    sigma: Option<String>,
    /// Number of walk steps.
    #[arg(long, visible_alias = "t_max", visible_alias = "t-max")]
    steps: Option<String>,
    /// Coin dimensions.
    #[arg(long)]
    dim: Option<String>,
    /// localized, gaussian or uniform.
    #[arg(long)]
    probe: Option<String>,
    /// minus, plus, optimal or qubit.
    #[arg(long)]
    coin: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Ring size.
    #[arg(long)]
    n: Option<String>,
    /// Initial vertex (1-based).
    #[arg(long)]
    x0: Option<String>,
    /// Measurement count for the Cramér–Rao bound.
    #[arg(long)]
    m: Option<String>,
    /// Graph file for `simulate`.
    #[arg(long)]
    graph: Option<String>,
    /// Closed-form families for `check`: line_z, line_xy, enhanced.
    #[arg(long)]
    families: Option<String>,
    /// Angle of a fixed rotation appended to every coin (fault injection).
    #[arg(long, allow_hyphen_values = true)]
    perturb: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("output", &self.output),
            ("axis", &self.axis),
            ("theta", &self.theta),
            ("sigma", &self.sigma),
            ("steps", &self.steps),
            ("dim", &self.dim),
            ("probe", &self.probe),
            ("coin", &self.coin),
            ("alpha", &self.alpha),
            ("gamma", &self.gamma),
            ("n", &self.n),
            ("x0", &self.x0),
            ("m", &self.m),
            ("graph", &self.graph),
            ("families", &self.families),
            ("perturb", &self.perturb),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }

    fn config(&self, scenario: Scenario) -> qwprobe::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let mut cfg = ExperimentConfig::from_file(path, Some(scenario))?;
                cfg.scenario = scenario;
                cfg
            }
            None => ExperimentConfig::new(scenario),
        };
        for (key, value) in self.overrides() {
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }
}

fn write_output(outcome: &Outcome, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            experiments::write_csv(&outcome.rows, &mut out)?;
            out.flush()?;
            println!("{}", outcome.summary());
        }
        None => {
            experiments::write_csv(&outcome.rows, std::io::stdout().lock())?;
            eprintln!("{}", outcome.summary());
        }
    }
    Ok(())
}

fn run(args: &RunArgs, scenario: Scenario) -> ExitCode {
    let outcome = args.config(scenario).and_then(|cfg| {
        let outcome = experiments::run(&cfg)?;
        write_output(&outcome, cfg.output.as_deref())?;
        Ok(outcome)
    });
    match outcome {
        Ok(o) if o.passed() => ExitCode::SUCCESS,
        Ok(o) => {
            for row in o.flagged().take(5) {
                eprintln!("flagged: {}", row.to_line());
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn validate_graph(file: &Path) -> ExitCode {
    let result = std::fs::read_to_string(file)
        .map_err(qwprobe::Error::from)
        .and_then(|text| parse_graph(&text))
        .and_then(|g| ShiftOperator::from_graph(&g).map(|s| (g, s)));
    match result {
        Ok((g, shift)) => {
            println!(
                "{}: ok, {} vertices, D={}, {} edges{}",
                file.display(),
                g.n_vertices(),
                g.coin_dim(),
                g.edge_count(),
                if shift.is_permutation() {
                    ", permutation shift"
                } else {
                    ""
                }
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(a) => run(a, Scenario::Custom),
        Command::LineSweep(a) => run(a, Scenario::LineSweep),
        Command::Enhanced(a) => run(a, Scenario::EnhancedTable),
        Command::Check(a) => run(a, Scenario::ClosedFormCheck),
        Command::Graph {
            command: GraphCommand::Validate { file },
        } => validate_graph(file),
        Command::Version => {
            println!("qwprobe {}", env!("CARGO_PKG_VERSION"));
            ExitCode::SUCCESS
        }
    }
}
