use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use covsteer::analysis::{AnalysisConfig, InputSource, ScanCriterion, ScanRequest};
use covsteer::{read_explicit_state, read_gaussian_cm, run_analysis, Criterion, Direction, Error, Family};

#[derive(Parser)]
#[command(name = "covsteer", version, about = "Covariance-matrix steering criteria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate steering criteria on one state or Gaussian covariance matrix.
    Analyze(AnalyzeArgs),
    /// Locate the detection threshold of a built-in family.
    Scan(ScanArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Built-in family: noisy-singlet, isotropic-qutrit-F, werner-2, two-qutrit-Fprime.
    #[arg(long)]
    family: Option<String>,
    /// Explicit state file {"dimA", "dimB", "re", "im"}.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Gaussian covariance matrix file {"modesA", "modesB", "gamma"}.
    #[arg(long)]
    gaussian: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// Family parameter (required with --family).
    #[arg(long)]
    param: Option<f64>,
    /// Comma-separated subset of prop1,prop2,witness,gaussian.
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<String>,
    /// Comma-separated subset of ab,ba.
    #[arg(long, value_delimiter = ',')]
    direction: Vec<String>,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    family: String,
    /// prop1, prop2, witness, or best (smaller of the prop1/prop2 thresholds).
    #[arg(long, default_value = "prop1")]
    criterion: String,
    #[arg(long, default_value = "ab")]
    direction: String,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    #[arg(long, default_value_t = covsteer::analysis::DEFAULT_SCAN_TOL)]
    tol: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn analyze_config(args: &AnalyzeArgs) -> Result<AnalysisConfig, Error> {
    let input = if let Some(id) = &args.source.family {
        let parameter = args
            .param
            .ok_or_else(|| Error::Config("--family needs --param".into()))?;
        InputSource::Family {
            family: id.parse()?,
            parameter,
        }
    } else if let Some(path) = &args.source.state {
        InputSource::Explicit {
            label: path.display().to_string(),
            state: read_explicit_state(&read(path)?)?,
        }
    } else if let Some(path) = &args.source.gaussian {
        InputSource::Gaussian {
            label: path.display().to_string(),
            cm: read_gaussian_cm(&read(path)?)?,
        }
    } else {
        return Err(Error::Config("one of --family, --state, --gaussian is required".into()));
    };
    let mut config = AnalysisConfig::for_input(input);
    config.criteria = args
        .criteria
        .iter()
        .map(|s| s.parse::<Criterion>())
        .collect::<Result<_, _>>()?;
    config.directions = args
        .direction
        .iter()
        .map(|s| s.parse::<Direction>())
        .collect::<Result<_, _>>()?;
    Ok(config)
}

fn scan_config(args: &ScanArgs) -> Result<AnalysisConfig, Error> {
    let family: Family = args.family.parse()?;
    let mut scan = ScanRequest::new(
        family,
        args.criterion.parse::<ScanCriterion>()?,
        args.direction.parse()?,
    );
    scan.lo = args.lo;
    scan.hi = args.hi;
    scan.tol = args.tol;
    Ok(AnalysisConfig::for_scan(scan))
}

fn run(cli: Cli) -> Result<(), Error> {
    let (config, json) = match &cli.command {
        Command::Analyze(args) => (analyze_config(args)?, args.json.clone()),
        Command::Scan(args) => (scan_config(args)?, args.json.clone()),
    };
    let report = run_analysis(&config)?;
    match json {
        Some(path) if path.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(path) => {
            fs::write(&path, report.to_json()).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
