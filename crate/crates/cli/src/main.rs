//! `liewb`: fixture-driven verification and search commands.

mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "liewb", version, about = "Exact Lie algebra workbench")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Abort searches that need more candidate monomials than this.
    #[arg(long, global = true, default_value_t = liewb_core::enveloping::DEFAULT_MAX_MONOMIALS)]
    pub max_monomials: usize,
    /// Treat discrepancies reported by diff commands as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Recompute bracket tables and diff them against transcribed ones.
    VerifyTables {
        /// Algebra fixture; with --expected, diffs that single pair.
        #[arg(long, requires = "expected")]
        algebra: Option<String>,
        /// Expected-table fixture.
        #[arg(long)]
        expected: Option<String>,
    },
    /// Graded pieces, violations, sl(2) and Levi checks, lower central series.
    Grading {
        #[arg(long, default_value = "w")]
        algebra: String,
        #[arg(long, default_value = "grading")]
        grading: String,
        /// Multiplet-set fixture providing the sl(2) triple and the radical.
        #[arg(long, default_value = "multiplets")]
        multiplets: String,
    },
    /// Casimir elements of the enveloping algebra up to a degree.
    CasimirNc {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Keep only monomials of zero total ad-weight under this element.
        #[arg(long)]
        weight_filter: Option<String>,
        /// Comma-separated basis elements allowed in candidates.
        #[arg(long)]
        restrict_vars: Option<String>,
    },
    /// Polynomial Casimirs of the Lie-Poisson bracket up to a degree.
    CasimirPoisson {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Comma-separated basis elements whose coordinates are allowed.
        #[arg(long)]
        restrict_vars: Option<String>,
    },
    /// Check expected-invariant fixtures (all of them by default).
    VerifyInvariants {
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Solve the Jacobi constraints of a central extension ansatz.
    CentralExt {
        #[arg(long, required_unless_present = "fixture")]
        algebra: Option<String>,
        /// Deformed pairs, e.g. `C1:C2,C1:C3`.
        #[arg(long, required_unless_present = "fixture")]
        pairs: Option<String>,
        #[arg(long, default_value = "Z")]
        central: String,
        /// Virtual-copy-map fixture supplying algebra and pairs.
        #[arg(long, conflicts_with_all = ["algebra", "pairs"])]
        fixture: Option<String>,
    },
    /// Verify a virtual sl(2) copy and build its Casimir.
    VirtualCopy {
        #[arg(long, default_value = "v2-ext")]
        fixture: String,
    },
    /// Substitute a realization into an enveloping-algebra expression.
    Realize {
        /// Algebra fixture carrying a realization.
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        expression: String,
    },
    /// Label vectors of every basis element and their additivity.
    Labels {
        #[arg(long, default_value = "multiplet")]
        algebra: String,
        #[arg(long, default_value = "grading")]
        grading: String,
    },
}

/// Outcome of a command: its report and whether it counts as passing.
pub struct Outcome {
    pub report: serde_json::Value,
    pub passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.report).expect("serializable") + "\n",
                Format::Text => render::text(&out.report),
            };
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
