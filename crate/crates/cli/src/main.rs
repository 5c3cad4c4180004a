mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit code for unreadable or malformed input.
pub const EXIT_INPUT: u8 = 3;
/// Exit code when a required verdict could not be reached within the budget.
pub const EXIT_BUDGET: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "spoly", version, about = "Stable polynomials: operators, symbols, stability tests and lattice models")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Falsifier trial budget (suite default for `verify`).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Boundary tolerance for domain membership.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// `json` or `csv` to pick the format, or a file path (`.csv` selects CSV).
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a polynomial and print its canonical and JSON forms.
    Parse {
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Evaluate at a point, e.g. `--at 'i;1+2i'`.
    Eval {
        poly: String,
        #[arg(long)]
        at: String,
    },
    /// Apply a catalog operator.
    Op(commands::OpArgs),
    /// Decide stability on a product of circular domains.
    Stab {
        poly: String,
        #[arg(long, default_value = "halfplane:0")]
        domain: String,
        #[arg(long, default_value = "auto")]
        mode: String,
        /// Exit 4 instead of 2 when no verdict is reached.
        #[arg(long)]
        require_verdict: bool,
    },
    /// Algebraic or truncated transcendental symbol of an operator.
    Symbol {
        /// JSON file (`@op.json`) or built-in name (`sym`, `asano:1,2`, ...).
        #[arg(long)]
        op: String,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long, default_value = "halfplane")]
        kind: String,
        /// Also test preservation of stability on this domain.
        #[arg(long)]
        preserve: Option<String>,
    },
    /// Apolar pairing, optionally with a Grace-type hypothesis audit.
    Apolar {
        f: String,
        g: String,
        #[arg(long)]
        kappa: String,
        /// `disk-ext`, `halfplane` or `univariate`.
        #[arg(long)]
        audit: Option<String>,
        /// Domains for `f`.
        #[arg(long)]
        domains: Option<String>,
        /// Domains for `g` (half-plane variant).
        #[arg(long)]
        g_domains: Option<String>,
    },
    /// Classify a diagonal operator as a κ-multiplier sequence.
    Multiplier {
        #[arg(long)]
        kappa: Option<String>,
        /// Values `λ(0..=κ)` for one variable.
        #[arg(long)]
        lambda: Option<String>,
        /// JSON operator spec with a `diagonal` field.
        #[arg(long)]
        diagonal: Option<String>,
        /// Weak-Hurwitz (complex λ) classification instead.
        #[arg(long)]
        hurwitz: bool,
    },
    /// Ferromagnetic Ising partition polynomial from a coupling CSV.
    Ising {
        coupling: String,
        #[arg(long, default_value = "reweight")]
        route: String,
    },
    /// Lee-Yang polynomial of a Hermitian contraction matrix CSV.
    Circle {
        matrix: String,
        #[arg(long, default_value = "schur")]
        route: String,
    },
    /// Multivariate matching polynomial of an edge-list graph.
    Matching { graph: String },
    /// Degree-weighted subgraph polynomial.
    Wagner {
        graph: String,
        /// Per-vertex degree bounds (default: the vertex degrees).
        #[arg(long)]
        kappa: Option<String>,
        /// `ones`, `matching`, or `;`-separated per-vertex sequences.
        #[arg(long, default_value = "ones")]
        u: String,
    },
    /// Roots along a one-parameter family of restrictions, as CSV.
    Zeros {
        poly: String,
        /// `diagonal`, `imaginary` or `axis:k`.
        #[arg(long, default_value = "diagonal")]
        family: String,
        /// `a:b:n` or a comma list.
        #[arg(long, default_value = "1")]
        grid: String,
    },
    /// Run a property suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if let Some(eps) = cli.global.tol {
        if let Err(e) = spoly::domains::set_boundary_tolerance(eps) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
