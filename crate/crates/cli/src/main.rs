use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drp_cli::{
    analyze_report, compare_report, drp_report, parse_config, simulate_report, verify, CliError,
    CliResult, RunConfig, VerifyOptions,
};

/// Nine-point advection scheme laboratory.
#[derive(Parser)]
#[command(name = "drp-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Printed and optimal spatial weights with their integrated errors.
    Drp {
        /// Grid spacing (overrides the config's h).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectra, objectives and norm bound of the matrix form.
    Analyze {
        #[command(flatten)]
        io: Io,
        /// Also write m1.csv, m2.csv, m0.csv and f.csv here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
    /// Time-step one scheme and report its error series.
    Simulate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        svg: bool,
    },
    /// Run several schemes and tabulate their error series side by side.
    Compare {
        /// Repeat for each scheme; the first is expected to end lowest.
        #[arg(long = "config", required = true, num_args = 1)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Audit the matrix form and the minimum-norm solve.
    Verify {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `--out`, else the config's `output_path`, else stdout.
fn target(out: Option<PathBuf>, cfg: Option<&RunConfig>) -> Option<PathBuf> {
    out.or_else(|| cfg.and_then(|c| c.output_path.as_ref().map(PathBuf::from)))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_svg(csv_path: Option<&Path>, svg: Option<String>) -> CliResult<()> {
    let Some(svg) = svg else { return Ok(()) };
    let path = csv_path
        .ok_or_else(|| CliError::Usage("an SVG needs --out or output_path".into()))?
        .with_extension("svg");
    write_file(&path, &svg)
}

fn execute(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Drp { h, config, out } => {
            let cfg = config.as_deref().map(load).transpose()?;
            let h = h
                .or(cfg.as_ref().map(|c| c.h))
                .ok_or_else(|| CliError::Usage("drp needs --h or --config".into()))?;
            if h.is_nan() || h <= 0.0 {
                return Err(CliError::Usage(format!("h must be positive, got {h}")));
            }
            let path = target(out, cfg.as_ref());
            emit(path.as_deref(), &drp_report(h)?)
        }
        Command::Analyze { io, dump_dir } => {
            let cfg = load(&io.config)?;
            let report = analyze_report(&cfg)?;
            if let Some(dir) = dump_dir {
                fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
                for (stem, body) in &report.matrices {
                    write_file(&dir.join(format!("{stem}.csv")), body)?;
                }
            }
            let path = target(io.out, Some(&cfg));
            emit(path.as_deref(), &report.csv)
        }
        Command::Simulate { io, svg } => {
            let cfg = load(&io.config)?;
            let report = simulate_report(&cfg, svg || cfg.emit_svg)?;
            let path = target(io.out, Some(&cfg));
            emit(path.as_deref(), &report.csv)?;
            emit_svg(path.as_deref(), report.svg)
        }
        Command::Compare { configs, out, svg } => {
            let cfgs = configs
                .iter()
                .map(|p| load(p))
                .collect::<CliResult<Vec<_>>>()?;
            let want_svg = svg || cfgs.iter().any(|c| c.emit_svg);
            let report = compare_report(&cfgs, want_svg)?;
            let path = target(out, cfgs.first());
            emit(path.as_deref(), &report.csv)?;
            emit_svg(path.as_deref(), report.svg)
        }
        Command::Verify { io } => {
            let cfg = load(&io.config)?;
            let report = verify(&cfg, VerifyOptions::default())?;
            let path = target(io.out, None);
            emit(path.as_deref(), &report.text())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Audit(report.failing().join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("drp-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
