//! catalens: exact submajorization and catalysis checks, lazy spectrum
//! estimates, and the end-to-end counterexample pipeline.
//!
//! Exit codes: 0 = verified/pass, 1 = checked and failed (e.g. not
//! submajorized, catalyst not found), 2 = usage or input error.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "catalens",
    version,
    about = "Exact submajorization, catalysis certificates, and Dixmier-trace envelopes"
)]
struct Cli {
    /// Output directory for JSON reports and CSV files.
    /// The CATALENS_OUT environment variable overrides this flag.
    #[arg(long, global = true, default_value = "catalens-out")]
    out: PathBuf,

    /// Error-bound budget in bits: float tails target 2^-PRECISION.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Largest catalyst dimension to try.
    #[arg(long, default_value_t = 6)]
    max_dim: usize,
    /// Exact objective evaluations allowed.
    #[arg(long, default_value_t = 20_000)]
    budget: u64,
    /// Seed for the randomized search phase (recorded in all outputs).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check Hardy–Littlewood submajorization: is B ≺≺ A?
    Majorize {
        /// Spectrum file for the dominating side A.
        a: PathBuf,
        /// Spectrum file for the dominated side B.
        b: PathBuf,
    },
    /// Sorted tensor-product spectrum of two finite spectra.
    Tensor {
        a: PathBuf,
        c: PathBuf,
        /// Only the first K entries (lazy enumeration).
        #[arg(long)]
        top_k: Option<usize>,
    },
    /// Power-trace membership: Tr(B^p) ≤ Tr(A^p) for all p > 1 (grid
    /// evidence plus exact integer-p and sup-norm checks).
    PmCheck {
        a: PathBuf,
        b: PathBuf,
        /// Exponent grid as lo:hi:count with p−1 log-spaced (lo > 1).
        #[arg(long, value_parser = parse_p_grid)]
        p_grid: Option<catalens::catalysis::PGrid>,
    },
    /// Strict ℓp dominance ‖B‖_p < ‖A‖_p on [1, ∞] (labeled evidence).
    StrictDominance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_p_grid)]
        p_grid: Option<catalens::catalysis::PGrid>,
    },
    /// Search for a catalyst C with B⊗C ≺≺ A⊗C; exact certificate on success.
    FindCatalyst {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact verification that B⊗C ≺≺ A⊗C for a given C.
    VerifyCatalyst {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
    },
    /// Truncate-and-scale approximation: find n, certify strict dominance
    /// of (A_n, (1−ε)B_n), search for a catalyst, bound the L1 distance.
    L1Approximate {
        a: PathBuf,
        b: PathBuf,
        /// ε in (0,1), exact rational (e.g. 1/10 or 0.1).
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_parser = parse_p_grid)]
        p_grid: Option<catalens::catalysis::PGrid>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Envelope of the log-average sequence x_N for a lazy spectrum
    /// descriptor (liminf/limsup estimates from attained values).
    DixmierEstimate {
        /// Lazy spectrum descriptor JSON (harmonic, dyadic-B, scaled,
        /// direct-sum, finite).
        spec: PathBuf,
        /// auto | dyadic | blocks
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Dyadic strategy: smallest exponent.
        #[arg(long, default_value_t = 10)]
        min_exp: u32,
        /// Dyadic strategy: largest exponent.
        #[arg(long, default_value_t = 26)]
        max_exp: u32,
        /// Block strategy: last block-boundary index.
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        /// Work budget for spectra without closed forms.
        #[arg(long, default_value_t = catalens::asymptotics::DEFAULT_WORK_BUDGET)]
        budget: u64,
    },
    /// Summation identities: the dilation identity for a sequence x and/or
    /// the weighted square sum closed form.
    IdentityCheck {
        /// Exponent s > 0; integer s is checked in exact rationals.
        #[arg(long)]
        s: String,
        /// Sequence: "delta0", "chi-I:LEN", or comma-separated integers.
        #[arg(long)]
        x: Option<String>,
        /// Also check Σ (m+1)² 2^{-ms} against its closed form.
        #[arg(long)]
        weighted_square: bool,
    },
    /// The weak-trace-class counterexample pipeline.
    #[command(subcommand)]
    Counterexample(CounterexampleCommand),
}

#[derive(Subcommand)]
enum CounterexampleCommand {
    /// Sweep the upper bound, build α/δ/A, verify membership on both
    /// regimes, report the Dixmier gap, and profile the density function.
    RunAll {
        /// Override α (must lie strictly inside the admissible bracket).
        #[arg(long)]
        alpha: Option<f64>,
        /// Sweep grid as lo:hi:count (geometric).
        #[arg(long, value_parser = parse_s_grid)]
        s_grid: Option<catalens::counterexample::SGrid>,
        /// Last block-boundary index for the lower-bound table.
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        /// Gap margin that must be cleared at matched scales.
        #[arg(long, default_value_t = 0.05)]
        gap_margin: f64,
        /// Density profile: discrete sweep bound m ≤ m_max.
        #[arg(long, default_value_t = 1 << 20)]
        density_m_max: u64,
        /// Seed recorded in the report (the pipeline is deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_s_grid(text: &str) -> Result<catalens::counterexample::SGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("expected lo:hi:count".into());
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad count: {e}"))?;
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err("need 0 < lo < hi and count >= 2".into());
    }
    Ok(catalens::counterexample::SGrid::geometric(lo, hi, count))
}

fn parse_p_grid(text: &str) -> Result<catalens::catalysis::PGrid, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("expected lo:hi:count with lo > 1".into());
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad count: {e}"))?;
    if !(lo > 1.0 && hi > lo && count >= 2) {
        return Err("need 1 < lo < hi and count >= 2".into());
    }
    Ok(catalens::catalysis::PGrid::log_spaced(
        lo - 1.0,
        hi - 1.0,
        count,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = std::env::var_os("CATALENS_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| cli.out.clone());
    match commands::dispatch(cli.command, &out_dir, cli.precision) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
