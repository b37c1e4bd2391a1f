use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use slitpaths::config::ScanRequest;
use slitpaths::run::{configure_workers, exit_code, run, OutputFormat, RunRequest, SetupSource};
use slitpaths::sorkin::Normalization;
use slitpaths::Preset;

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Photon,
    Electron,
    Microwave,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    CentralMax,
    InterferenceSum,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Sorkin parameter of multi-slit interference with looped paths.
#[derive(Parser)]
#[command(name = "slitpaths", version, about)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "config"])))]
#[command(group(ArgGroup::new("positions").args(["scan", "point"])))]
struct Cli {
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Evenly spaced detector positions in metres.
    #[arg(long, num_args = 3, value_names = ["YMIN", "YMAX", "N"], allow_hyphen_values = true)]
    scan: Option<Vec<String>>,
    /// A single detector position in metres.
    #[arg(long, value_name = "Y", allow_negative_numbers = true)]
    point: Option<f64>,
    #[arg(long, value_enum)]
    normalization: Option<NormalizationArg>,
    /// Result file; a `.meta.toml` sidecar is written next to it.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, value_name = "R")]
    points_per_cycle: Option<f64>,
    /// Relative tolerance between successive mesh doublings.
    #[arg(long, value_name = "T")]
    tolerance: Option<f64>,
    #[arg(long)]
    disable_nonclassical: bool,
    #[arg(long)]
    no_inclination_factor: bool,
    #[arg(long)]
    include_z_factor: bool,
    /// Print the error budget.
    #[arg(long)]
    errors: bool,
}

fn parse_scan(values: &[String]) -> Result<ScanRequest, String> {
    let y_min: f64 = values[0].parse().map_err(|_| format!("invalid YMIN {:?}", values[0]))?;
    let y_max: f64 = values[1].parse().map_err(|_| format!("invalid YMAX {:?}", values[1]))?;
    let n_points: usize = values[2].parse().map_err(|_| format!("invalid N {:?}", values[2]))?;
    Ok(ScanRequest::Range { y_min, y_max, n_points })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let source = match (cli.preset, cli.config) {
        (Some(p), None) => SetupSource::Preset(match p {
            PresetArg::Photon => Preset::Photon,
            PresetArg::Electron => Preset::Electron,
            PresetArg::Microwave => Preset::Microwave,
        }),
        (None, Some(path)) => SetupSource::Config(path),
        _ => unreachable!("clap enforces exactly one source"),
    };
    let mut request = RunRequest::new(source);
    request.scan = match (&cli.scan, cli.point) {
        (Some(v), _) => match parse_scan(v) {
            Ok(s) => Some(s),
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
        },
        (None, Some(y)) => Some(ScanRequest::Point(y)),
        (None, None) => None,
    };
    request.normalization = cli.normalization.map(|n| match n {
        NormalizationArg::CentralMax => Normalization::CentralMax,
        NormalizationArg::InterferenceSum => Normalization::InterferenceSum,
    });
    request.format = match cli.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    request.out = cli.out;
    request.points_per_cycle = cli.points_per_cycle;
    request.tolerance = cli.tolerance;
    request.disable_nonclassical = cli.disable_nonclassical;
    request.no_inclination_factor = cli.no_inclination_factor;
    request.include_z_factor = cli.include_z_factor;
    request.errors = cli.errors;

    let result = configure_workers().and_then(|()| run(&request, &mut std::io::stdout().lock()));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
