use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use ladm_core::approximants::hbm_omega;
use ladm_core::csv::{format_e12, CsvTable};
use ladm_core::oracle::{self, OracleConfig};
use ladm_core::plot::render_svg;
use ladm_core::report::{self, parse_methods, CompareParams, ComparisonReport, SweepParams, Units};
use ladm_core::solver::{oscillator_series, DEFAULT_TERMS};
use ladm_core::{Error, Execution};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ladm",
    version,
    about = "LADM series for the relativistic harmonic oscillator"
)]
struct Cli {
    /// Evaluate independent work items one after another instead of in parallel.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the scaled series coefficients c_k of x(t) = sum c_k t^k / k!.
    Series {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate methods on a time grid and measure them against the reference integrator.
    Compare {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
        dt: f64,
        /// Comma-separated subset of ladm,hbm,dtm,hpm,oracle.
        #[arg(long, default_value = "ladm,hbm,oracle")]
        methods: String,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        /// CSV table destination.
        #[arg(long)]
        out: PathBuf,
        /// JSON report destination.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record the generation time in the JSON report.
        #[arg(long)]
        stamp: bool,
    },
    /// Tabulate LADM accuracy and frequencies over a range of beta.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        beta_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.1)]
        dt: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a JSON comparison report as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Oscillation period from the reference integrator, with frequency estimates.
    Period {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// LADM trajectory in dimensionless and dimensional units.
    Dimensional {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega0: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.5)]
        dt: f64,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) | Failure::Core(Error::Parse(_)) => EXIT_IO,
            Failure::Core(e) if e.is_oracle_failure() => EXIT_ORACLE,
            Failure::Core(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match run(cli.command, exec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(command: Command, exec: Execution) -> CliResult<()> {
    match command {
        Command::Series { beta, terms, format } => cmd_series(beta, terms, format),
        Command::Compare {
            beta,
            t_max,
            dt,
            methods,
            terms,
            out,
            json,
            stamp,
        } => {
            let methods = parse_methods(&methods).map_err(|e| Failure::Usage(e.to_string()))?;
            let params = CompareParams {
                t_max,
                dt,
                n_terms: terms,
                ..CompareParams::new(beta, methods)
            };
            cmd_compare(&params, &out, json.as_deref(), stamp, exec)
        }
        Command::Sweep {
            beta_min,
            beta_max,
            steps,
            t_max,
            dt,
            out,
        } => {
            let params = SweepParams {
                t_max,
                dt,
                ..SweepParams::new(beta_min, beta_max, steps)
            };
            cmd_sweep(&params, &out, exec)
        }
        Command::Plot { input, out } => cmd_plot(&input, &out),
        Command::Period { beta } => cmd_period(beta),
        Command::Dimensional {
            beta,
            omega0,
            c,
            t_max,
            dt,
            terms,
            out,
        } => cmd_dimensional(beta, omega0, c, t_max, dt, terms, out.as_deref()),
    }
}

fn cmd_series(beta: f64, terms: usize, format: Format) -> CliResult<()> {
    if terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let sol = oscillator_series(beta, terms)?;
    let coefficients: Vec<(u32, f64)> = sol.full_sum().terms().collect();
    let text = match format {
        Format::Csv => {
            let mut table = CsvTable::new(vec!["degree".into(), "coefficient".into()]);
            for (k, c) in coefficients {
                table.push(vec![f64::from(k), c]);
            }
            table.render()
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = coefficients
                .into_iter()
                .map(|(k, c)| serde_json::json!({ "degree": k, "coefficient": c }))
                .collect();
            let doc = serde_json::json!({
                "beta": beta,
                "terms": terms,
                "kappa": sol.kappa,
                "omega": sol.omega(),
                "coefficients": rows,
            });
            serde_json::to_string_pretty(&doc).expect("series serializes") + "\n"
        }
    };
    print!("{text}");
    Ok(())
}

fn cmd_compare(params: &CompareParams, out: &Path, json: Option<&Path>, stamp: bool, exec: Execution) -> CliResult<()> {
    let comparison = report::compare(params, exec)?;
    write(out, &comparison.csv().render())?;
    if let Some(path) = json {
        write(path, &report_json(&comparison.report, stamp))?;
    }
    for (method, e) in &comparison.report.errors {
        println!(
            "{method}: max_abs_err = {}, rms_err = {}",
            format_e12(e.max_abs),
            format_e12(e.rms)
        );
    }
    Ok(())
}

fn report_json(report: &ComparisonReport, stamp: bool) -> String {
    if !stamp {
        return report.to_json();
    }
    let mut doc = serde_json::to_value(report).expect("report serializes");
    let seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    doc["generated_unix_seconds"] = serde_json::json!(seconds);
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

fn cmd_sweep(params: &SweepParams, out: &Path, exec: Execution) -> CliResult<()> {
    if !(0.0 < params.beta_min && params.beta_min < params.beta_max && params.beta_max < 1.0) {
        return Err(Failure::Usage(format!(
            "sweep needs 0 < --beta-min < --beta-max < 1, got [{}, {}]",
            params.beta_min, params.beta_max
        )));
    }
    if params.steps < 2 {
        return Err(Failure::Usage(format!(
            "--steps must be at least 2, got {}",
            params.steps
        )));
    }
    let rows = report::sweep(params, exec)?;
    write(out, &report::sweep_csv(&rows).render())
}

fn cmd_plot(input: &Path, out: &Path) -> CliResult<()> {
    let text = fs::read_to_string(input).map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
    let report = ComparisonReport::from_json(&text)?;
    write(out, &render_svg(&report)?)
}

fn cmd_period(beta: f64) -> CliResult<()> {
    let sol = oscillator_series(beta, DEFAULT_TERMS)?;
    let omega_hbm = hbm_omega(beta)?;
    let period = oracle::period(beta, &OracleConfig::default())?;
    let mut table = CsvTable::new(
        ["beta", "oracle_period", "omega_oracle", "omega_ladm", "omega_hbm"]
            .iter()
            .map(|s| (*s).to_owned())
            .collect(),
    );
    let omega_ladm = sol.omega().expect("oscillator series carries its frequency");
    table.push(vec![
        beta,
        period,
        std::f64::consts::TAU / period,
        omega_ladm,
        omega_hbm,
    ]);
    print!("{}", table.render());
    Ok(())
}

fn cmd_dimensional(
    beta: f64,
    omega0: f64,
    c: f64,
    t_max: f64,
    dt: f64,
    terms: usize,
    out: Option<&Path>,
) -> CliResult<()> {
    let units = Units::new(omega0, c).map_err(|e| Failure::Usage(e.to_string()))?;
    let table = report::dimensional_table(beta, units, t_max, dt, terms)?.render();
    match out {
        Some(path) => write(path, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}
