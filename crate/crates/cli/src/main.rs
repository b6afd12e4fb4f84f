mod commands;
mod input;
mod repro;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "rexlen",
    version,
    about = "Expression length of finite languages: conversions, certificates and oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
    /// Limit on enumerated words, search steps or generated languages.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub budget: usize,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Letters of the alphabet, in order; inferred from the input if absent.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its normal form and measurements.
    Parse {
        /// Expression text, or a file containing it.
        #[arg(long)]
        expr: String,
        /// Print only the rpn length.
        #[arg(long)]
        rpn: bool,
    },
    /// Generate, count or enumerate languages.
    Lang {
        #[command(subcommand)]
        action: LangAction,
    },
    /// Convert an automaton slice to an expression.
    Convert {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        automaton: Option<String>,
        #[arg(long)]
        family: Option<String>,
        /// Word length of the slice; defaults to the family's length.
        #[arg(long)]
        slice: Option<usize>,
        /// What to print.
        #[arg(long, value_enum, default_value_t = ConvertOut::Expr)]
        show: ConvertOut,
    },
    /// Monotone arithmetic formula of a homogeneous binary expression.
    Arith {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = ArithOut::Formula)]
        show: ArithOut,
    },
    /// Log-product analysis.
    Logprod {
        #[command(subcommand)]
        action: LogprodAction,
    },
    /// Shortest, longest, lightest or heaviest words of an expression.
    Envelope {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "lower")]
        dir: String,
        /// Weight file (`letter weight` lines); plain length if absent.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Lower and upper bounds on the expression length of a family.
    Bound {
        #[arg(long)]
        family: String,
        /// Also run the exact minimum and fooling-set searches.
        #[arg(long)]
        exact: bool,
        /// Build the upper-bound expressions (on by default).
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        upper: bool,
    },
    /// Exact oracles on small languages.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Regenerate the reference tables and compare with recorded targets.
    Repro {
        #[arg(value_enum)]
        table: repro::Table,
        /// Largest n for the permutation table.
        #[arg(long, default_value_t = 7)]
        n_max: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertOut {
    Expr,
    Stats,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithOut {
    Formula,
    ProducedSet,
}

#[derive(Subcommand)]
pub enum LangAction {
    /// List the words of a family.
    Generate {
        #[arg(long)]
        family: String,
        /// Write the plain-text language file format instead.
        #[arg(long)]
        ids: bool,
    },
    /// Exact size of a family without enumeration.
    Count {
        #[arg(long)]
        family: String,
    },
    /// Words of an expression, up to a length bound for infinite languages.
    Words {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Subcommand)]
pub enum LogprodAction {
    /// Test the log-product property and print the spine.
    Check {
        #[arg(long)]
        expr: String,
    },
    /// Write a homogeneous expression as a union of log-product expressions.
    Decompose {
        #[arg(long)]
        expr: String,
    },
    /// Canonical factorization, or the γ-factorization with `--gamma`.
    Factorize {
        #[arg(long)]
        expr: String,
        /// An integer, `a/b`, `log2(p)` or `klnk(k)`.
        #[arg(long)]
        gamma: Option<String>,
        /// Print the balanced split instead.
        #[arg(long, conflicts_with = "gamma")]
        split: bool,
    },
    /// Largest subset of a language described by a log-product expression.
    Maxsub {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        language: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum OracleAction {
    /// Exact minimum rpn of a small language.
    Minrpn {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        language: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Largest fooling set of a language.
    Fooling {
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        language: Option<String>,
        #[arg(long)]
        family: Option<String>,
        /// Allow a different split position for every pair.
        #[arg(long)]
        general: bool,
    },
    /// Random property checks of the reductions, driven by `--seed`.
    Selfcheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = commands::run(cli.command, &cli.global, &mut out);
    print!("{out}");
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
