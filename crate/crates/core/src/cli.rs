//! Command-line front end.
//!
//! Data (JSON profiles, CSV tables) go to `--output` or stdout; the
//! human-readable summary goes to stderr so the two can be piped apart.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::{main_link_rate, NormalizedCovariance, WiretapChannel};
use crate::error::{Error, Result};
use crate::fading::{
    average_derivatives, avg_secrecy_capacity_single_tx, correlated_pair_c1, FadingModel,
    MonteCarloConfig,
};
use crate::lowsnr::{
    energy_curve_from, energy_rate_curve, main_beamforming, min_energy_per_secret_bit,
    no_secrecy_derivatives, rate_curve, relaxed_eigenspace_minimum, secrecy_derivatives_with,
    CovarianceStrategy, LowSnrOptions, DEFAULT_MULTIPLICITY_TOL,
};
use crate::sweep::{check_snr_grid, grid, GridScale, SweepTable};

/// Successful run.
pub const EXIT_OK: i32 = 0;
/// Bad arguments, unreadable or malformed input, unsupported request.
pub const EXIT_INPUT: i32 = 2;
/// The eigensolver failed to converge.
pub const EXIT_CONVERGENCE: i32 = 3;

const CSV_HELP: &str = "\
CSV columns:
  sweep-rate         snr,power,rate_nats_per_dim
  sweep-energy       snr,eb_n0_db,rate_bits_per_dim   (zero-rate points omitted)
  fading --csv       snr,rate_nats_per_dim,std_error_nats,rate_bits_per_dim,eb_n0_db
  correlation-sweep  rho,c1,eb_n0_min_db

Exit codes: 0 success, 2 input error, 3 eigensolver did not converge.
The SECRECY_ANALYZER_THREADS environment variable caps Monte Carlo workers.";

#[derive(Debug, Parser)]
#[command(
    name = "secrecy-analyzer",
    version,
    about = "Low-SNR secrecy capacity analysis for Gaussian MIMO wiretap channels",
    after_help = CSV_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derivatives at zero SNR, optimal covariance, minimum energy per bit.
    Analyze(AnalyzeArgs),
    /// Secrecy rate (nats/dimension) against SNR for one covariance.
    SweepRate(SweepArgs),
    /// Secrecy rate (bits/dimension) against energy per secret bit.
    SweepEnergy(SweepArgs),
    /// Monte Carlo averages over a fading model.
    Fading(FadingArgs),
    /// Minimum energy per bit of the correlated scalar pair against rho.
    CorrelationSweep(CorrelationArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Channel JSON: {"Hm": [[[re, im], ...]], "He": ..., "Nm": ..., "Ne": ...}
    #[arg(long)]
    pub input: PathBuf,
    /// Write the profile JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Relative tolerance for grouping eigenvalues with the largest one.
    #[arg(long, default_value_t = DEFAULT_MULTIPLICITY_TOL)]
    pub multiplicity_tol: f64,
    /// Also optimize over full weight matrices on the maximal eigenspace.
    #[arg(long)]
    pub relaxed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Optimal,
    MainBeamforming,
    Uniform,
    /// Covariance read from --covariance.
    File,
    /// Legitimate link alone, beamforming on its strongest direction.
    NoSecrecy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.01)]
    pub snr_start: f64,
    #[arg(long, default_value_t = 2.0)]
    pub snr_stop: f64,
    #[arg(long, default_value_t = 200)]
    pub snr_points: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    pub snr_scale: ScaleArg,
}

impl GridArgs {
    pub fn values(&self) -> Result<Vec<f64>> {
        let scale = match self.snr_scale {
            ScaleArg::Linear => GridScale::Linear,
            ScaleArg::Log => GridScale::Log,
        };
        let g = grid(self.snr_start, self.snr_stop, self.snr_points, scale)?;
        check_snr_grid(&g)?;
        Ok(g)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Optimal)]
    pub strategy: StrategyArg,
    /// Covariance JSON {"K": [[[re, im], ...]]}; rescaled to unit trace.
    #[arg(long, required_if_eq("strategy", "file"))]
    pub covariance: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_MULTIPLICITY_TOL)]
    pub multiplicity_tol: f64,
}

#[derive(Debug, Args)]
pub struct FadingArgs {
    /// Fading model JSON: {"kind", "nT", "nR", "nE", "rho"?, "Nm", "Ne", "variances"?}
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the averaged secrecy capacity on the SNR grid (nT = 1 only).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct CorrelationArgs {
    /// Comma-separated power correlation values in [0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8,0.95")]
    pub rho_list: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub noise_m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub noise_e: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, stdout, stderr),
        Command::SweepRate(a) => cmd_sweep_rate(a, stdout, stderr),
        Command::SweepEnergy(a) => cmd_sweep_energy(a, stdout, stderr),
        Command::Fading(a) => cmd_fading(a, stdout, stderr),
        Command::CorrelationSweep(a) => cmd_correlation_sweep(a, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

fn options(tol: f64) -> Result<LowSnrOptions> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "multiplicity tolerance must be >= 0, got {tol}"
        )));
    }
    Ok(LowSnrOptions {
        multiplicity_tol: tol,
    })
}

fn summary(stderr: &mut dyn Write, lines: &[String]) {
    for l in lines {
        let _ = writeln!(stderr, "{l}");
    }
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.5}")).collect();
    format!("[{}]", items.join(", "))
}

pub fn cmd_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let ch = WiretapChannel::from_json(&read(&a.input)?)?;
    let p = secrecy_derivatives_with(&ch, &options(a.multiplicity_tol)?)?;
    let mut lines = vec![
        format!("c1 = {:.5}", p.c1),
        format!("c2 = {:.5}", p.c2),
        format!("lambda_max = {:.5}", p.lambda_max),
        format!("multiplicity = {}", p.multiplicity()),
        format!("alpha = {}", fmt_list(&p.alpha)),
        format!("eb_min = {:.3} dB", p.eb_n0_min_db),
        format!("wideband_slope = {:.5}", p.wideband_slope),
        format!("secrecy_possible = {}", p.secrecy_possible),
    ];
    if a.relaxed && p.secrecy_possible {
        let r = relaxed_eigenspace_minimum(&ch, &p.eigenspace)?;
        lines.push(format!("diagonal_objective = {:.8}", r.diagonal_value));
        lines.push(format!("relaxed_objective = {:.8}", r.relaxed_value));
    }
    summary(stderr, &lines);
    emit(a.output.as_deref(), &(p.to_json() + "\n"), stdout)
}

enum Resolved {
    Secrecy(NormalizedCovariance),
    MainLink(NormalizedCovariance),
}

fn resolve(a: &SweepArgs, ch: &WiretapChannel) -> Result<Resolved> {
    let p = secrecy_derivatives_with(ch, &options(a.multiplicity_tol)?)?;
    let cov = match a.strategy {
        StrategyArg::Optimal => CovarianceStrategy::Optimal.covariance(ch, &p)?,
        StrategyArg::MainBeamforming => CovarianceStrategy::MainBeamforming.covariance(ch, &p)?,
        StrategyArg::Uniform => CovarianceStrategy::Uniform.covariance(ch, &p)?,
        StrategyArg::File => {
            let path = a
                .covariance
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("--strategy file needs --covariance".into()))?;
            let k = NormalizedCovariance::from_json(&read(path)?)?;
            if k.dim() != ch.n_t() {
                return Err(Error::Shape(format!(
                    "covariance is {0}x{0} but the channel has {1} transmit antennas",
                    k.dim(),
                    ch.n_t()
                )));
            }
            k
        }
        StrategyArg::NoSecrecy => return Ok(Resolved::MainLink(main_beamforming(ch)?)),
    };
    Ok(Resolved::Secrecy(cov))
}

pub fn cmd_sweep_rate(a: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let ch = WiretapChannel::from_json(&read(&a.input)?)?;
    let g = a.grid.values()?;
    let table = match resolve(a, &ch)? {
        Resolved::Secrecy(k) => rate_curve(&ch, &k, &g)?,
        Resolved::MainLink(k) => {
            let mut t = SweepTable::new(&["snr", "power", "rate_nats_per_dim"]);
            for &s in &g {
                t.push(vec![
                    s,
                    ch.power_for_snr(s),
                    main_link_rate(&ch, &k, s)?.nats(),
                ]);
            }
            t
        }
    };
    summary(
        stderr,
        &[format!("{} points, strategy {:?}", table.len(), a.strategy)],
    );
    emit(a.output.as_deref(), &table.to_csv_string(), stdout)
}

pub fn cmd_sweep_energy(
    a: &SweepArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let ch = WiretapChannel::from_json(&read(&a.input)?)?;
    let g = a.grid.values()?;
    let opts = options(a.multiplicity_tol)?;
    let (table, limit) = match resolve(a, &ch)? {
        Resolved::Secrecy(k) => {
            let slope = crate::channel::rate_first_derivative(&ch, &k)?;
            (
                energy_rate_curve(&ch, &k, &g)?,
                min_energy_per_secret_bit(slope),
            )
        }
        Resolved::MainLink(k) => (
            energy_curve_from(&g, |s| Ok(main_link_rate(&ch, &k, s)?.nats()))?,
            no_secrecy_derivatives(&ch, &opts)?.eb_n0_min_db,
        ),
    };
    summary(
        stderr,
        &[
            format!(
                "{} points, {} zero-rate points omitted",
                table.len(),
                table.omitted
            ),
            format!("eb_min = {limit:.3} dB (strategy {:?})", a.strategy),
        ],
    );
    emit(a.output.as_deref(), &table.to_csv_string(), stdout)
}

pub fn cmd_fading(a: &FadingArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let model = FadingModel::from_json(&read(&a.input)?)?;
    let mc = MonteCarloConfig::new(a.samples, a.seed);
    // validate the grid before the expensive part
    let g = a.csv.as_ref().map(|_| a.grid.values()).transpose()?;
    let p = average_derivatives(&model, &mc)?;
    summary(
        stderr,
        &[
            format!("c1_avg = {:.6} +/- {:.6}", p.c1_avg, p.standard_error_c1),
            format!("c2_avg = {:.6} +/- {:.6}", p.c2_avg, p.standard_error_c2),
            format!("eb_min = {:.3} dB", p.eb_n0_min_db),
            format!(
                "samples = {}, seed = {}, Nm = {}, Ne = {}",
                p.samples, p.seed, p.nm, p.ne
            ),
        ],
    );
    if let (Some(path), Some(g)) = (&a.csv, g) {
        let table = avg_secrecy_capacity_single_tx(&model, &g, &mc)?;
        emit(Some(path), &table.to_csv_string(), stdout)?;
    }
    emit(a.output.as_deref(), &(p.to_json() + "\n"), stdout)
}

pub fn cmd_correlation_sweep(
    a: &CorrelationArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    if a.rho_list.is_empty() {
        return Err(Error::InvalidInput("empty rho list".into()));
    }
    if a.rho_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "rho list must be strictly increasing".into(),
        ));
    }
    let mut table = SweepTable::new(&["rho", "c1", "eb_n0_min_db"]);
    for &rho in &a.rho_list {
        let c1 = correlated_pair_c1(rho, a.noise_m, a.noise_e)?;
        table.push(vec![rho, c1, min_energy_per_secret_bit(c1)]);
    }
    summary(stderr, &[format!("{} correlation values", table.len())]);
    emit(a.output.as_deref(), &table.to_csv_string(), stdout)
}
