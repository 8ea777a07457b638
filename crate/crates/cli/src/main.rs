use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;

use report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(
    name = "tatetorsor",
    version,
    about = "Lattices in Tate spaces, determinant lines and multiplicative torsors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Base field: `F<p>` or `Q`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Coefficient group, e.g. `Z`, `Z/2`, `Z+Z/3`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    #[arg(long, global = true, default_value_t = commands::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Upper bound on the number of objects enumerated.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    #[arg(long, global = true)]
    pub degree: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Relative index `[A : B]` of two lattices.
    Index { a: String, b: String },
    /// Intersection of two lattices.
    Meet { a: String, b: String },
    /// Sum of two lattices.
    Join { a: String, b: String },
    /// `U ∩ X'` for the sequence `X' -i-> X -j-> X''`.
    Lift { i: String, j: String, u: String },
    /// `j(U)` for the sequence `X' -i-> X -j-> X''`.
    Project { i: String, j: String, u: String },
    /// Check that `X' -i-> X -j-> X''` is a short exact sequence of Tate spaces.
    SesCheck { i: String, j: String },
    /// `d'(U ∩ X') + d''(j U)` with both theories anchored at the standard lattice.
    MuEval { i: String, j: String, u: String },
    /// Check the symmetry of a determinantal theory on pairs and grids.
    DetSymmetry {
        /// `graded`, `ungraded` or `sign-fault`.
        #[arg(long, default_value = "graded")]
        theory: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Cohomology of a complex (a `.sset` file or a builtin name).
    Cohomology { complex: String },
    /// Check a multiplicative torsor given by its cocycle and classify it;
    /// with a second cocycle, decide whether the two are isomorphic.
    Classify { complex: String, alpha: String, other: Option<String> },
    /// The degree-2 multiplicative torsor of a gerbe.
    GerbeTorsor { complex: String, beta: String },
    /// Enumerate the truncated S-construction and check its identities.
    SEnumerate {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Run a verification suite.
    Verify { suite: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = commands::run(&cli);
    emit(&report, cli.json)
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        match &report.outcome {
            Outcome::Usage(msg) => eprintln!("error: {msg}"),
            _ => print!("{}", report.text),
        }
    }
    ExitCode::from(report.outcome.exit_code())
}
