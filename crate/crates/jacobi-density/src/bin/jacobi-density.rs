//! Thin command-line front end over the library's subcommand pipeline.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand};

use jacobi_density::cli::{
    parse_config, run_subcommand, GridSpec, OutputFormat, RunConfig, RunOutput, Subcommand,
};

#[derive(Parser)]
#[command(
    name = "jacobi-density",
    about = "Asymptotic eigenvalue density of scaled, asymptotically periodic Jacobi matrices"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Band edges and discriminant of the periodic limit matrix
    Bands(CommonArgs),
    /// The limiting density rho(z) on a grid
    Density(CommonArgs),
    /// Eigenvalues of the scaled truncation J(n)/phi(n-1)
    Spectrum(CommonArgs),
    /// KS distance and moment table against thresholds
    Validate(CommonArgs),
    /// Moment oracles K_M, omega factor, m_M
    Moments(CommonArgs),
    /// Density CSV plus a gnuplot render script
    Plot(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// JSON configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output file (plot: directory-relative stem for its three files)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format override
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Block count override
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    zmin: Option<f64>,
    #[arg(long)]
    zmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Highest moment order
    #[arg(long)]
    max_order: Option<u32>,
    #[arg(long)]
    ks_threshold: Option<f64>,
    /// Worker threads (fallback: JACOBI_DENSITY_THREADS)
    #[arg(long)]
    threads: Option<usize>,
}

fn apply_overrides(cfg: &mut RunConfig, args: &CommonArgs) -> Result<(), String> {
    if let Some(fmt) = &args.format {
        cfg.format = match fmt.as_str() {
            "json" => OutputFormat::Json,
            _ => OutputFormat::Csv,
        };
    }
    if args.n.is_some() {
        cfg.n = args.n;
    }
    match (args.zmin, args.zmax) {
        (Some(zmin), Some(zmax)) => {
            let points = args
                .points
                .or(cfg.grid.map(|g| g.points))
                .unwrap_or(jacobi_density::cli::DEFAULT_GRID_POINTS);
            cfg.grid = Some(GridSpec {
                zmin,
                zmax,
                points,
            });
        }
        (None, None) => {
            if let (Some(points), Some(grid)) = (args.points, &mut cfg.grid) {
                grid.points = points;
            } else if let Some(points) = args.points {
                if cfg.grid.is_none() {
                    return Err("--points needs --zmin/--zmax or a grid in the config".into());
                }
                let _ = points;
            }
        }
        _ => return Err("--zmin and --zmax must be given together".into()),
    }
    if args.max_order.is_some() {
        cfg.moments_max = args.max_order;
    }
    if args.ks_threshold.is_some() {
        cfg.ks_threshold = args.ks_threshold;
    }
    if let Some(path) = &args.output {
        cfg.output = Some(path.display().to_string());
    }
    Ok(())
}

fn init_threads(args: &CommonArgs) {
    let threads = args.threads.or_else(|| {
        std::env::var("JACOBI_DENSITY_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(threads) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn write_output(out: &RunOutput, target: Option<&str>) -> std::io::Result<()> {
    match (out.files.len(), target) {
        (1, None) => {
            print!("{}", out.files[0].contents);
        }
        (1, Some(path)) => {
            std::fs::write(path, &out.files[0].contents)?;
        }
        (_, target) => {
            // multi-file output (plot): default names, next to the stem
            let dir = target
                .map(|p| {
                    Path::new(p)
                        .parent()
                        .filter(|d| !d.as_os_str().is_empty())
                        .unwrap_or_else(|| Path::new("."))
                        .to_path_buf()
                })
                .unwrap_or_else(|| PathBuf::from("."));
            for f in &out.files {
                std::fs::write(dir.join(&f.name), &f.contents)?;
            }
        }
    }
    Ok(())
}

fn error_exit(err: impl std::fmt::Display) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({"error": format!("{err}")})
    );
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (sub, common) = match &args.command {
        Command::Bands(c) => (Subcommand::Bands, c),
        Command::Density(c) => (Subcommand::Density, c),
        Command::Spectrum(c) => (Subcommand::Spectrum, c),
        Command::Validate(c) => (Subcommand::Validate, c),
        Command::Moments(c) => (Subcommand::Moments, c),
        Command::Plot(c) => (Subcommand::Plot, c),
    };
    init_threads(common);

    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => return error_exit(format!("cannot read {}: {e}", common.config.display())),
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return error_exit(e),
    };
    if let Err(e) = apply_overrides(&mut cfg, common) {
        return error_exit(e);
    }
    let out = match run_subcommand(sub, &cfg) {
        Ok(o) => o,
        Err(e) => return error_exit(e),
    };
    if let Err(e) = write_output(&out, cfg.output.as_deref()) {
        return error_exit(e);
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
