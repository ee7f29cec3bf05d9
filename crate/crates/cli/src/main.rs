//! `modeq`: command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
//! error, 3 numerical failure (non-convergence, exhausted precision, or an
//! inconclusive polynomial fit), 4 internal error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modeq::ModeqError;

use crate::output::Format;

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "modeq",
    version,
    about = "Generalized modular equations in signatures 2, 3 and 4"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Working precision in bits (at least 53). Defaults to 128, or 256 for polyfit.
    #[arg(long, global = true, env = "MODEQ_PRECISION_BITS")]
    pub precision_bits: Option<u32>,
    /// Output format. Defaults to text on a terminal and JSON when piped.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sampling.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

/// Either an arithmetic signature or a rational `t`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SigArgs {
    /// Signature 2, 3 or 4.
    #[arg(long)]
    pub sig: Option<u32>,
    /// Rational parameter t in (0, 1/2], e.g. 1/3.
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve R(β) = p·R(α) for β.
    Solve {
        #[command(flatten)]
        sig: SigArgs,
        /// Modulus α in (0, 1), decimal or rational.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Order p ≥ 1.
        #[arg(short, long)]
        p: u64,
        /// Residual tolerance; defaults to 2^(16 − precision_bits).
        #[arg(long)]
        tol: Option<String>,
        /// Bisection only, without Newton polishing.
        #[arg(long)]
        no_newton: bool,
    },
    /// Degrees μ(p, 2) = μ(p, 4) and μ(p, 3) for p = 2..=P_MAX (CSV by default).
    Table { p_max: u64 },
    /// Dedekind's Ψ(N).
    Psi { n: u64 },
    /// Degree μ(p, sig) of the modular polynomial.
    Mu {
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        sig: u32,
    },
    /// Russell's (m, l) for a prime p, with the relation to μ.
    Russell {
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        sig: u32,
    },
    /// Check an identity on solved pairs.
    Verify {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(short, long)]
        p: u64,
        /// equation, fricke, cube-root, multiplier-difference, multiplier-sum or multiplier-sum-squared.
        #[arg(long, default_value = "equation")]
        identity: String,
        /// A single α to check instead of a sweep.
        #[arg(long, conflicts_with_all = ["samples", "random"])]
        alpha: Option<String>,
        /// Number of equally spaced α in [0.05, 0.95].
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Number of uniformly random α in [0.05, 0.95] (seeded) instead of a sweep.
        #[arg(long)]
        random: Option<usize>,
        /// Seed for --random.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual threshold; defaults to the identity's own.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Recover the integer polynomial P(α, β) from solved pairs.
    Polyfit {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(short, long)]
        p: u64,
        /// Degree in each variable; derived from the signature when omitted.
        #[arg(long)]
        mu: Option<usize>,
        /// Number of fitted samples.
        #[arg(long)]
        samples: Option<usize>,
        /// Number of held-out pairs for validation.
        #[arg(long, default_value_t = 50)]
        heldout: usize,
    },
    /// Exact Hecke-group arithmetic. Matrices are written "[a b; c d]" for
    /// (a, bλ; cλ, d), optionally followed by "lambda2=n".
    Hecke {
        #[command(subcommand)]
        op: HeckeOp,
    },
}

#[derive(Debug, Subcommand)]
pub enum HeckeOp {
    /// Product X·Y.
    Mul {
        x: String,
        y: String,
        #[arg(long)]
        sig: Option<u32>,
    },
    /// Inverse of X.
    Inv {
        x: String,
        #[arg(long)]
        sig: Option<u32>,
    },
    /// Whether X lies in H_{M_p} (c divisible by p).
    Member {
        x: String,
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        sig: Option<u32>,
    },
    /// Image (a, b; cλ², d) in SL(2, Z).
    Theta {
        x: String,
        #[arg(long)]
        sig: Option<u32>,
    },
    /// Conjugate by the Fricke involution z ↦ −1/(pz).
    Fricke {
        x: String,
        #[arg(short, long)]
        p: u64,
        #[arg(long)]
        sig: Option<u32>,
    },
    /// Index of Γ₀(N) in the modular group, by enumeration.
    Cosets { n: u64 },
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<ModeqError> for Failure {
    fn from(e: ModeqError) -> Self {
        let code = match e {
            ModeqError::Domain(_)
            | ModeqError::Range(_)
            | ModeqError::Signature(_)
            | ModeqError::LambdaMismatch { .. }
            | ModeqError::Divisibility { .. }
            | ModeqError::Parse(_) => EXIT_USAGE,
            ModeqError::NonConvergence { .. }
            | ModeqError::PrecisionExhausted(_)
            | ModeqError::AmbiguousNullspace { .. }
            | ModeqError::RoundingFailure(_)
            | ModeqError::DegreeMismatch { .. } => EXIT_NUMERICAL,
            ModeqError::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            ExitCode::from(if outcome.passed {
                0
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
