mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hzml::coeff::{self, IdentityReport, Mode};
use hzml::moments::{self, DEFAULT_DENSITY, DEFAULT_QUAD_TOL};
use hzml::theta_roots::trunc_exp_roots;
use serde::Serialize;

const EXIT_VALIDATION: u8 = 2;
const EXIT_ALARM: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hzml", version, about = "Discrete moments of derivatives of Hardy's Z-function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Write the zero table as CSV (zeros only).
    #[arg(long, global = true)]
    csv: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true, env = "HZML_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Local error tolerance of the continuous-moment quadrature.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots of the truncated exponential series and their power sums.
    ThetaRoots {
        #[arg(long)]
        k: usize,
    },
    /// Zeros of Z^(k) on [2, T].
    Zeros {
        #[arg(long)]
        k: usize,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: usize,
    },
    /// Measured discrete moment of Z^(j) over the zeros of Z^(k).
    Moment {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: usize,
    },
    /// Continuous moment of Z^(j) against the Hall prediction.
    Cmoment {
        #[arg(long)]
        j: usize,
        #[arg(long = "t-max")]
        t_max: f64,
    },
    /// Breakdown of the main coefficient.
    Coeff {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "T", conflicts_with = "asymptotic", required_unless_present = "asymptotic")]
        t_big: Option<f64>,
        #[arg(long)]
        asymptotic: bool,
        /// Use Newton-refined zeros of the operator polynomial.
        #[arg(long, conflicts_with = "asymptotic")]
        refined: bool,
    },
    /// Exact and floating identity sweep.
    Identities {
        #[arg(long = "j-max")]
        j_max: usize,
        #[arg(long = "k-max")]
        k_max: usize,
    },
    /// Measured discrete moment against the finite-T main term.
    Verify {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ThetaRoots { .. } => "theta-roots",
            Command::Zeros { .. } => "zeros",
            Command::Moment { .. } => "moment",
            Command::Cmoment { .. } => "cmoment",
            Command::Coeff { .. } => "coeff",
            Command::Identities { .. } => "identities",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Alarm(hzml::Error),
    Io(String),
}

impl From<hzml::Error> for Failure {
    fn from(e: hzml::Error) -> Self {
        if e.is_numerical_alarm() {
            Failure::Alarm(e)
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

#[derive(Serialize)]
struct MomentOnly {
    j: usize,
    k: usize,
    #[serde(rename = "T")]
    t_big: f64,
    measured: f64,
    n_zeros_used: usize,
    count_expected: f64,
    census_deviation: f64,
    census_bound: f64,
    doublings: usize,
    max_imag_leak: f64,
}

#[derive(Serialize)]
struct IdentitySummary {
    checked: usize,
    nonzero_gaps: Vec<IdentityReport>,
}

#[derive(Serialize)]
struct AlarmRecord {
    alarm: &'static str,
    message: String,
}

enum Report {
    Json(Vec<u8>),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(cmd: &Command, value: &T) -> Result<Report, Failure> {
    output::to_json(cmd.name(), value)
        .map(Report::Json)
        .map_err(|e| Failure::Io(e.to_string()))
}

fn execute(cmd: &Command, common: &Common) -> Result<(Report, bool), Failure> {
    if common.csv && !matches!(cmd, Command::Zeros { .. }) {
        return Err(Failure::Validation(format!("--csv is only available for zeros, not {}", cmd.name())));
    }
    if let Some(tol) = common.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Validation(format!("--tol {tol} must be positive")));
        }
    }
    let mut alarm = false;
    let report = match *cmd {
        Command::ThetaRoots { k } => json(cmd, &trunc_exp_roots(k)?)?,
        Command::Zeros { k, t_max, density } => {
            let c = moments::census(k, t_max, density)?;
            if common.csv {
                Report::Csv(output::zeros_csv(&c.zeros))
            } else {
                json(cmd, &c)?
            }
        }
        Command::Moment { j, k, t_max, density } => {
            let c = moments::census(k, t_max, density)?;
            let m = moments::discrete_moment_detailed(j, &c.zeros)?;
            json(
                cmd,
                &MomentOnly {
                    j,
                    k,
                    t_big: t_max,
                    measured: m.value,
                    n_zeros_used: m.n_zeros,
                    count_expected: moments::expected_count(t_max),
                    census_deviation: c.deviation,
                    census_bound: c.bound,
                    doublings: c.doublings,
                    max_imag_leak: m.max_imag_leak,
                },
            )?
        }
        Command::Cmoment { j, t_max } => {
            let tol = common.tol.unwrap_or(DEFAULT_QUAD_TOL);
            json(cmd, &moments::continuous_report(j, t_max, tol)?)?
        }
        Command::Coeff {
            j,
            k,
            t_big,
            asymptotic,
            refined,
        } => {
            let (t, mode) = match (asymptotic, refined) {
                (true, _) => (1e6, Mode::Asymptotic),
                (false, true) => (t_big.unwrap_or_default(), Mode::FiniteRefined),
                (false, false) => (t_big.unwrap_or_default(), Mode::Finite),
            };
            json(cmd, &coeff::breakdown(j, k, t, mode)?)?
        }
        Command::Identities { j_max, k_max } => {
            let all = coeff::identities_sweep(j_max, k_max)?;
            let failing: Vec<IdentityReport> = all.iter().filter(|r| !r.passes()).cloned().collect();
            alarm = !failing.is_empty();
            json(
                cmd,
                &IdentitySummary {
                    checked: all.len(),
                    nonzero_gaps: failing,
                },
            )?
        }
        Command::Verify { j, k, t_max, density } => json(cmd, &moments::verify(j, k, t_max, density)?)?,
    };
    Ok((report, alarm))
}

fn write_out(common: &Common, bytes: &[u8]) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.common.workers == 0 {
        return Err(Failure::Validation("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.workers)
        .build()
        .map_err(|e| Failure::Io(e.to_string()))?;
    let (report, alarm) = pool.install(|| execute(&cli.command, &cli.common))?;
    let bytes = match report {
        Report::Json(b) | Report::Csv(b) => b,
    };
    write_out(&cli.common, &bytes)?;
    Ok(alarm)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("hzml: identity check failed");
            ExitCode::from(EXIT_ALARM)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("hzml: invalid input: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Alarm(e)) => {
            eprintln!("hzml: numerical alarm: {e}");
            let record = AlarmRecord {
                alarm: cli.command.name(),
                message: e.to_string(),
            };
            if let Ok(bytes) = output::to_json("alarm", &record) {
                let _ = write_out(&cli.common, &bytes);
            }
            ExitCode::from(EXIT_ALARM)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("hzml: {msg}");
            ExitCode::FAILURE
        }
    }
}
