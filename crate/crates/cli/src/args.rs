use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by the randomized suites unless overridden.
pub const DEFAULT_SEED: u64 = 0x5ca1e;

/// Spectra, growth functions and fractal scale spaces from the command line.
#[derive(Debug, Parser)]
#[command(name = "scalecalc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of a model operator, in nondecreasing order.
    Spectrum {
        /// circle, torus:N, sphere:N, interval:BC or orderd:n=N,d=D
        model: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
    },
    /// Weyl power-law fit `λ_μ ≈ C μ^q` over the spectrum tail.
    Fit {
        model: String,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// Fraction of the largest eigenvalues used by the regression.
        #[arg(long, default_value_t = 0.5)]
        tail: f64,
    },
    /// Sorted merge `f * h` of two growth functions.
    Star {
        /// power:p=P[,a=A], map:n=N[,d=D] or a model spec (shifted spectrum)
        left: String,
        right: String,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// Eigenvalues enumerated for spectrum-backed operands.
        #[arg(long, default_value_t = 10_000)]
        materialize: u64,
    },
    /// Invariant table `(i, j) ↦ [f^{j−i}]` of a fractal scale space.
    Invariant {
        /// map:n=N[,d=D], power:p=P or a model spec
        space: String,
        #[arg(long = "jmax", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=16))]
        j_max: u32,
        /// Report a single entry `I,J` instead of the full table.
        #[arg(long, value_parser = parse_entry)]
        entry: Option<(u32, u32)>,
    },
    /// Decides whether two fractal scale spaces are isomorphic.
    Isom { left: String, right: String },
    /// Fourier coefficients and Sobolev norm comparison of sampled data.
    Sobolev {
        /// File with one sample per line on a uniform grid of [0, 2π)
        samples: PathBuf,
        /// Highest frequency kept.
        #[arg(long = "max-frequency", short = 'K', default_value_t = 16)]
        max_frequency: usize,
        #[arg(long = "kmax", default_value_t = 3)]
        k_max: u32,
        /// Emit the coefficients instead of the norm report.
        #[arg(long)]
        coefficients: bool,
    },
    /// Runs a verification suite; exits 1 on the first failing property.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gram,
    Weyl,
    Star,
    Idempotent,
    #[value(name = "productB", alias = "product-b")]
    ProductB,
    Bounds,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: Option<u64>,
    #[arg(long)]
    pub modes: Option<usize>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n1: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n2: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub tail: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub tolerance: Option<f64>,
    #[arg(long, env = "SCALECALC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn parse_entry(s: &str) -> Result<(u32, u32), String> {
    let (i, j) = s.split_once(',').ok_or("expected I,J")?;
    let i: u32 = i.trim().parse().map_err(|e| format!("{i}: {e}"))?;
    let j: u32 = j.trim().parse().map_err(|e| format!("{j}: {e}"))?;
    if i >= j {
        return Err(format!("({i}, {j}) is not in Λ: need i < j"));
    }
    Ok((i, j))
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("{x} is not positive")),
        Err(e) => Err(e.to_string()),
    }
}
