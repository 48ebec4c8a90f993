use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "specrange", version, about = "Spectra and numerical ranges of random tridiagonal operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the `--out` extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    /// Laurent operators of the random hopping alphabet
    Fz,
    /// 3-periodic five-diagonal example
    FiveDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Nr,
    NrSquared,
    NrOfSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Fz,
    FzSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Sigma1,
    Sigma05,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the symbol over a θ-grid.
    SymbolSpectrum {
        #[arg(long, value_enum, default_value = "fz")]
        operator: OperatorArg,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Boundary of the numerical range of the random hopping operator.
    Numrange {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 720)]
        angles: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Support function N(φ) of the numerical range of the square.
    FzNphi {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 720)]
        angles: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form boundary curves.
    FzBoundary {
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_enum, default_value = "nr")]
        kind: KindArg,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Boundary of the square root of the numerical range of the square.
    FzSqrtRegion {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Certify the bound N(φ) on random sign windows.
    Certify {
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Best finite-section abscissae against closed-form supports.
    Sections {
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_enum, default_value = "fz")]
        model: ModelArg,
        #[arg(long, default_value_t = 32)]
        angles: usize,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Numbers of the five-diagonal counterexample.
    Counterexample5 {
        #[command(flatten)]
        output: Output,
    },
    /// Layered data for the two region figures.
    Figure {
        #[arg(long, value_enum)]
        name: FigureArg,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
}
