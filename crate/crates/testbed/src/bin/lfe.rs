use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lfe_core::window::{build_reference, ReferenceFactors, WindowConfig};
use lfe_core::{correction, engine, Error as CoreError};
use lfe_testbed::registry::{lookup, FunctionId, Params};
use lfe_testbed::report::ReportSummary;
use lfe_testbed::sweep::{self, Format, Method, SweepSpec};
use lfe_testbed::{cache, ingest, CliError};

#[derive(Parser)]
#[command(name = "lfe", version, about = "Local Fourier extension quadrature on uniform grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate samples read from a two-column x,f CSV file.
    Integrate {
        #[arg(long)]
        input: PathBuf,
        /// Detect and correct windows containing a derivative singularity.
        #[arg(long)]
        correct: bool,
        #[arg(long, default_value_t = 1e-15)]
        epsilon: f64,
        /// Half-width of the mode set; windows hold 2n+1 nodes.
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Extension ratio.
        #[arg(long = "T", default_value_t = 6.0)]
        t: f64,
        #[arg(long)]
        json: bool,
        /// Reuse (or create) a binary file holding the reference SVD.
        #[arg(long)]
        factor_cache: Option<PathBuf>,
    },
    /// Error sweeps over the built-in test functions.
    Bench {
        #[arg(long, conflicts_with_all = ["function", "param", "m_values"])]
        preset: Option<String>,
        #[arg(long, required_unless_present = "preset")]
        function: Option<String>,
        /// Parameter assignment such as omega=100 or xi=pi/5 (repeatable).
        #[arg(long)]
        param: Vec<String>,
        #[arg(long = "M", value_delimiter = ',', id = "m_values")]
        m_values: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "lfe,simpson,cc")]
        methods: Vec<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Record wall-clock time per row (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        factor_cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

fn factors_for(config: &WindowConfig, cache_path: Option<&PathBuf>) -> Result<ReferenceFactors, CliError> {
    Ok(match cache_path {
        Some(p) => cache::load_or_build(config, p)?,
        None => build_reference(config)?,
    })
}

fn integrate(
    input: PathBuf,
    correct: bool,
    config: WindowConfig,
    json: bool,
    cache_path: Option<PathBuf>,
) -> Result<(), CliError> {
    config.validate()?;
    let samples = ingest::read_samples_from_path(&input)?;
    let factors = factors_for(&config, cache_path.as_ref())?;
    let mut report = engine::integrate(&samples, &config, &factors)?;
    let mut notes = Vec::new();
    if correct {
        match correction::correct(&samples, &factors, &report) {
            Ok(r) => report = r,
            Err(e @ CoreError::DetectionUnavailable { .. }) => notes.push(format!("no correction: {e}")),
            Err(CoreError::ConfigMismatch) => notes.push("no correction: grid uses the small-grid rule".into()),
            Err(e) => return Err(e.into()),
        }
    }
    let summary = ReportSummary::new(&report, &notes);
    let mut out = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut out, &summary)?;
        writeln!(out)?;
    } else {
        out.write_all(summary.to_text().as_bytes())?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    preset: Option<String>,
    function: Option<String>,
    param: Vec<String>,
    m_values: Vec<usize>,
    methods: Vec<String>,
    out: Option<PathBuf>,
    format: OutputFormat,
    timing: bool,
    cache_path: Option<PathBuf>,
) -> Result<(), CliError> {
    let specs = match (preset, function) {
        (Some(name), _) => sweep::preset(&name)?,
        (None, Some(id)) => {
            let id: FunctionId = id.parse()?;
            let mut params = Params::new();
            for p in &param {
                params.parse_assignment(p)?;
            }
            let methods = methods.iter().map(|m| m.parse::<Method>()).collect::<Result<Vec<_>, _>>()?;
            vec![SweepSpec::new(lookup(id, &params)?, m_values, methods)?]
        }
        (None, None) => return Err(CliError::Usage("either --preset or --function is required".into())),
    };
    let factors = factors_for(&WindowConfig::default(), cache_path.as_ref())?;
    let mut rows = Vec::new();
    for spec in &specs {
        rows.extend(sweep::run_sweep(spec, &factors, timing)?);
    }
    let format = match format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            sweep::write_rows(&rows, format, &mut w)?;
            w.flush()?;
        }
        None => sweep::write_rows(&rows, format, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Integrate { input, correct, epsilon, n, t, json, factor_cache } => {
            let config = WindowConfig { n, m: 2 * n + 1, t, epsilon };
            integrate(input, correct, config, json, factor_cache)
        }
        Command::Bench { preset, function, param, m_values, methods, out, format, timing, factor_cache } => {
            bench(preset, function, param, m_values, methods, out, format, timing, factor_cache)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lfe: {} error: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
