//! `qsrm point | sweep | example`: command-line front end of the library.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsrm::hermitian::RankMetric;
use qsrm::srm::Route;
use qsrm::sweep::{self, SweepSpec};
use qsrm::system::{default_epsilon, DEFAULT_NU};
use qsrm::{evaluate, worked, DetectionResult, Error, Modulation, PointConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_GOLDEN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qsrm",
    version,
    about = "Square root measurement error probabilities of noisy coherent-state constellations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModKind {
    Psk,
    Qam,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ModArgs {
    /// Modulation format.
    #[arg(long = "mod", value_enum)]
    kind: ModKind,
    /// PSK order.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// QAM side (L²-QAM).
    #[arg(long, default_value_t = 4)]
    l: usize,
    /// Truncation accuracy (default 1e-5 for PSK, 1e-7 for QAM).
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// Rank accuracy.
    #[arg(long, default_value_t = DEFAULT_NU, allow_negative_numbers = true)]
    nu: f64,
    /// Reconstruction error measure for the practical rank.
    #[arg(long, default_value = "frobenius")]
    metric: RankMetric,
}

impl ModArgs {
    fn modulation(&self) -> Modulation {
        match self.kind {
            ModKind::Psk => Modulation::Psk { order: self.m },
            ModKind::Qam => Modulation::Qam { side: self.l },
        }
    }

    fn epsilon(&self) -> f64 {
        self.eps.unwrap_or_else(|| default_epsilon(self.modulation()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point and print the detection result as JSON.
    Point {
        #[command(flatten)]
        modulation: ModArgs,
        /// Average signal photons per symbol.
        #[arg(long, allow_negative_numbers = true)]
        ns: f64,
        /// Thermal noise photons.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        noise: f64,
        /// Fixed Fock dimension (overrides --eps).
        #[arg(long)]
        n: Option<usize>,
        /// Fixed rank per state (overrides --nu).
        #[arg(long)]
        rank: Option<usize>,
        /// Use the general SRM for PSK too.
        #[arg(long)]
        general: bool,
        /// Gram route of the general SRM.
        #[arg(long, default_value = "auto")]
        route: Route,
    },
    /// Evaluate a grid of (Ns, N) points.
    Sweep {
        #[command(flatten)]
        modulation: ModArgs,
        /// Strictly increasing photon numbers, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        ns: Vec<f64>,
        /// Noise levels, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        noise: Vec<f64>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Skip the homodyne baseline.
        #[arg(long)]
        no_homodyne: bool,
        /// Skip the binary Helstrom bound.
        #[arg(long)]
        no_helstrom: bool,
    },
    /// Reproduce a worked example: psk4-worked, qam16-worked or rank-demo.
    Example { name: String },
}

#[derive(Serialize)]
struct PointOutput {
    modulation: String,
    ns: f64,
    noise: f64,
    #[serde(flatten)]
    result: DetectionResult,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::InvalidParameter { name, .. } if *name != "example" => eprintln!("  (check --{name})"),
        _ => {}
    }
    ExitCode::from(match e {
        Error::Io(_) | Error::Csv(_) => EXIT_IO,
        Error::NoConvergence | Error::NonFinite => 1,
        _ => EXIT_USAGE,
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Point {
            modulation,
            ns,
            noise,
            n,
            rank,
            general,
            route,
        } => {
            let mut cfg = PointConfig::new(modulation.modulation(), ns, noise)
                .with_epsilon(modulation.epsilon())
                .with_nu(modulation.nu);
            cfg.metric = modulation.metric;
            cfg.route = route;
            cfg.force_general = general;
            cfg.dim = n;
            cfg.rank = rank;
            let result = evaluate(&cfg)?;
            let out = PointOutput {
                modulation: cfg.modulation.label(),
                ns,
                noise,
                result,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            modulation,
            ns,
            noise,
            out,
            format,
            no_homodyne,
            no_helstrom,
        } => {
            let mut spec = SweepSpec::new(modulation.modulation(), ns, noise);
            spec.epsilon = modulation.epsilon();
            spec.nu = modulation.nu;
            spec.metric = modulation.metric;
            spec.homodyne = !no_homodyne;
            spec.helstrom = !no_helstrom;
            let rows = sweep::run(&spec)?;
            let mut sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(io::stdout().lock()),
            };
            match format {
                Format::Csv => sweep::write_csv(&rows, &mut sink)?,
                Format::Json => writeln!(sink, "{}", sweep::to_json(&rows))?,
            }
            sink.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { name } => {
            let report = worked::run_example(&name)?;
            print!("{}", report.render());
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_GOLDEN))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
