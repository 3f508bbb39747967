use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ringspread::cli::{
    cmd_catalog, cmd_centers, cmd_figure, cmd_measure, cmd_relations, cmd_scan, cmd_state,
    exit_code, Figure, OutputFormat, RunConfig, ScanQuantity,
};
use ringspread::error::Result;

/// Position-uncertainty measures for quantum states on the circle.
#[derive(Parser)]
#[command(name = "ringspread", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number of phi0 samples over one 2pi interval
    #[arg(long, global = true, default_value_t = 720)]
    grid: usize,

    /// Composite quadrature panel count (cross-check path)
    #[arg(long, global = true, default_value_t = 64)]
    panels: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Output file (or directory for `figure`); stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Rescale explicit fourier coefficients to unit norm
    #[arg(long, global = true)]
    normalize: bool,

    /// Truncate the state to |m| <= N before computing
    #[arg(long, global = true)]
    mmax: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityArg {
    Mean,
    Variance,
    CovRe,
    CovIm,
}

impl From<QuantityArg> for ScanQuantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::Mean => ScanQuantity::Mean,
            QuantityArg::Variance => ScanQuantity::Variance,
            QuantityArg::CovRe => ScanQuantity::CovRe,
            QuantityArg::CovIm => ScanQuantity::CovIm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
}

#[derive(Subcommand)]
enum Command {
    /// Show a state's coefficients, l_z moments and density samples
    State {
        /// Catalog name or spec file path
        spec: Option<String>,
        /// List the built-in catalog states instead
        #[arg(long)]
        catalog: bool,
    },
    /// Compute all delocalization measures
    Measure { spec: String },
    /// Scan a windowed moment over phi0 (CSV)
    Scan {
        spec: String,
        #[arg(value_enum)]
        quantity: QuantityArg,
    },
    /// Find packet centers and the global-minimum-selected subset
    Centers { spec: String },
    /// Evaluate every uncertainty relation
    Relations { spec: String },
    /// Emit figure data files (densities + measure sidecar)
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
    },
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig {
        grid_n: cli.grid,
        quad_panels: cli.panels,
        format: cli.format.into(),
        out: cli.out.clone(),
        normalize: cli.normalize,
        mmax: cli.mmax,
    };
    let output = match cli.command {
        Command::State { spec, catalog } => {
            if catalog {
                cmd_catalog()
            } else {
                let spec = spec.ok_or_else(|| {
                    ringspread::Error::Parse("state needs a spec argument or --catalog".into())
                })?;
                cmd_state(&spec, &cfg)?
            }
        }
        Command::Measure { spec } => cmd_measure(&spec, &cfg)?,
        Command::Scan { spec, quantity } => cmd_scan(&spec, quantity.into(), &cfg)?,
        Command::Centers { spec } => cmd_centers(&spec, &cfg)?,
        Command::Relations { spec } => cmd_relations(&spec, &cfg)?,
        Command::Figure { which } => {
            let which = match which {
                FigureArg::Fig1 => Figure::Fig1,
                FigureArg::Fig2 => Figure::Fig2,
            };
            let paths = cmd_figure(which, &cfg)?;
            for p in paths {
                println!("{}", p.display());
            }
            return Ok(());
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
