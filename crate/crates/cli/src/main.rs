//! `cval`: command-line runner for the contact-valuations experiments.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contact_valuations::contact_local::{ContactChart, SearchOptions, SurfaceDescription, SurfaceSpec};
use contact_valuations::crofton_flat::OffsetSign;
use contact_valuations::grassmann_mc::Normalization;
use contact_valuations::report::{ExperimentConfig, ReportDocument, DEFAULT_SEED};
use contact_valuations::suite;

use output::{emit, Format};

#[derive(Parser)]
#[command(name = "cval", version, about = "Contact and symplectic valuation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// RNG seed [default: 20240917]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples per experiment
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Half dimension of the symplectic space
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Half dimension of the sampled planes
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Exponents, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    s: Option<Vec<f64>>,
    /// Write the report here (`mc` appends one JSON line instead)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Angle-density convention for printed closed forms and constants
    #[arg(long, global = true, value_enum)]
    variant: Option<Variant>,
    /// Sign attached to the offset integral in the Crofton average
    #[arg(long, global = true, value_enum)]
    offset_sign: Option<OffsetSignArg>,
    /// JSON experiment configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Tolerance override `name=value`, repeatable
    #[arg(long = "tolerance", global = true, value_parser = parse_override)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact valuation tables of contact spheres
    Tables,
    /// Contact points of a surface and its local contact areas
    ContactPoints(ContactArgs),
    /// Grassmannian sampling experiments
    Mc,
    /// The full acceptance suite
    CheckAll,
}

#[derive(Args)]
struct ContactArgs {
    /// Surface in the mini-language, e.g. `sphere 1.0` or `torus 2 0.5 at 0.7 0 0`
    #[arg(long, conflicts_with = "surface_file")]
    surface: Option<String>,
    /// JSON surface description, or a file holding one mini-language line
    #[arg(long)]
    surface_file: Option<PathBuf>,
    /// `darboux`, `symmetric` or `symmetric:<scale>`
    #[arg(long)]
    chart: Option<String>,
    /// Degrees of the valuation sums, comma separated [default: all]
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Seed grid points per axis
    #[arg(long)]
    grid: Option<usize>,
    /// Root tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Paper,
    MassNormalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum OffsetSignArg {
    Relative,
    Substituted,
}

fn parse_override(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or("expected name=value")?;
    let value = value.parse::<f64>().map_err(|e| format!("{value:?}: {e}"))?;
    Ok((name.trim().to_owned(), value))
}

fn config(common: &Common) -> Result<ExperimentConfig, String> {
    let mut c = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = common.seed {
        c.seed = v;
    }
    if let Some(v) = common.samples {
        c.samples = v;
    }
    if let Some(v) = common.n {
        c.n = v;
    }
    if let Some(v) = common.k {
        c.k = v;
    }
    if let Some(v) = &common.s {
        c.s_values = v.clone();
    }
    if let Some(v) = common.variant {
        c.variant = match v {
            Variant::Paper => Normalization::Factorial,
            Variant::MassNormalized => Normalization::Mass,
        };
    }
    if let Some(v) = common.offset_sign {
        c.offset_sign = match v {
            OffsetSignArg::Relative => OffsetSign::Relative,
            OffsetSignArg::Substituted => OffsetSign::Substituted,
        };
    }
    c.tolerance_overrides.extend(common.tolerances.iter().cloned());
    c.thresholds().map_err(|e| e.to_string())?;
    Ok(c)
}

fn surface_description(args: &ContactArgs) -> Result<(String, SurfaceDescription), String> {
    let (text, from_file) = match (&args.surface, &args.surface_file) {
        (Some(s), _) => (s.clone(), false),
        (None, Some(path)) => {
            (std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?, true)
        }
        (None, None) => return Err("one of --surface or --surface-file is required".into()),
    };
    let mut description = if from_file && text.trim_start().starts_with('{') {
        SurfaceDescription::from_json(&text).map_err(|e| e.to_string())?
    } else {
        let spec: SurfaceSpec = text.trim().parse().map_err(|e: contact_valuations::Error| e.to_string())?;
        SurfaceDescription { surface: spec, chart: ContactChart::Darboux, grid_per_axis: None, tol: None }
    };
    if let Some(chart) = &args.chart {
        description.chart = chart.parse().map_err(|e: contact_valuations::Error| e.to_string())?;
    }
    if args.grid.is_some() {
        description.grid_per_axis = args.grid;
    }
    if args.tol.is_some() {
        description.tol = args.tol;
    }
    Ok((text.trim().to_owned(), description))
}

fn contact_points(args: &ContactArgs) -> Result<ReportDocument, String> {
    let (text, description) = surface_description(args)?;
    let surface = description.build().map_err(|e| e.to_string())?;
    let options: SearchOptions = description.search_options(surface.n());
    let degrees = args.degrees.clone().unwrap_or_else(|| (0..=2 * surface.n()).collect());
    Ok(suite::contact_points_report(&text, &description.surface, &surface, options, &degrees))
}

fn run(cli: &Cli) -> Result<(ReportDocument, bool), String> {
    let c = config(&cli.common)?;
    match &cli.command {
        Command::Tables => {
            let n = cli.common.n.unwrap_or(3);
            Ok((suite::tables_report(n, c.variant).map_err(|e| e.to_string())?, false))
        }
        Command::ContactPoints(args) => Ok((contact_points(args)?, false)),
        Command::Mc => Ok((suite::mc_report(&c).map_err(|e| e.to_string())?, true)),
        Command::CheckAll => Ok((suite::check_all(&c).map_err(|e| e.to_string())?, false)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    debug_assert_eq!(DEFAULT_SEED, ExperimentConfig::default().seed);
    match run(&cli) {
        Ok((doc, append)) => {
            if let Err(e) = emit(&doc, cli.common.format, cli.common.out.as_deref(), append) {
                eprintln!("cval: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(doc.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("cval: {e}");
            ExitCode::from(1)
        }
    }
}
