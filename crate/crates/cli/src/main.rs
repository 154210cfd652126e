//! `qzeta`: verify q-analogues of zeta(2) and zeta(4), run the representation-count oracles
//! and watch the q -> 1 limits, from the command line.
//!
//! Exit status is 0 when every check passes, 1 on a mismatch or a numerical
//! convergence failure, 2 on bad usage or unparsable input.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, Parser)]
#[command(name = "qzeta", version, about = "Exact q-series laboratory for q-analogues of zeta(2) and zeta(4)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true, hide = true)]
    json: bool,

    /// Truncation order N: coefficients of q^0 .. q^(N-1).
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..=200_000))]
    order: u64,

    /// Significant decimal digits for numerical work.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(12..=5000))]
    precision: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Lhs,
    Rhs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    /// four triangular numbers vs sigma(2n+1)
    T4,
    /// eight triangular numbers vs the odd-divisor cube sum
    T8,
    /// T_u + T_v + 2T_x + 2T_y vs the divisors of 4n+3
    Williams,
    /// four squares vs Jacobi's formula
    R4,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog identities.
    List,
    /// Compare both sides of catalog identities coefficient by coefficient.
    Verify {
        /// Identity ids, or `all`.
        #[arg(required = true)]
        ids: Vec<String>,
    },
    /// Print the first N coefficients of an identity side or a DSL expression.
    Expand {
        /// Catalog id.
        #[arg(required_unless_present = "expr", conflicts_with = "expr")]
        id: Option<String>,
        /// DSL expression instead of a catalog id.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = Side::Lhs)]
        side: Side,
    },
    /// Check a two-sided identity written in the DSL.
    Check {
        #[arg(required_unless_present = "id", requires = "rhs")]
        lhs: Option<String>,
        rhs: Option<String>,
        /// Use the shipped DSL texts of a catalog identity.
        #[arg(long, conflicts_with = "lhs")]
        id: Option<String>,
    },
    /// Compare brute-force representation counts with closed forms.
    Oracle {
        #[arg(value_enum)]
        lemma: Lemma,
        /// Largest n to check.
        #[arg(long = "max", default_value_t = 100, value_parser = clap::value_parser!(u64).range(0..=1_000_000))]
        max: u64,
    },
    /// Evaluate both sides at q = 1 - 2^-j and compare with the limit constant.
    Limit {
        /// Catalog id with a limit target, or `gamma-half`.
        id: String,
        /// Scaling exponent s in (1-q)^s; defaults to the identity's own.
        #[arg(short = 's', long = "s")]
        s: Option<u32>,
        /// Range of j, as `A..B`.
        #[arg(short = 'j', long = "j", default_value = "1..10", value_parser = parse_j_range)]
        j: (u32, u32),
        /// Largest acceptable relative error at the last point.
        #[arg(long, default_value_t = 0.02)]
        bound: f64,
    },
    /// Exact Bernoulli numbers B_0 .. B_M.
    Bernoulli {
        #[arg(value_parser = clap::value_parser!(u32).range(0..=2000))]
        m: u32,
    },
    /// zeta(2m) from the Bernoulli numbers.
    Zeta {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=500))]
        m: u32,
    },
}

fn parse_j_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("bad start `{a}`: {e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("bad end `{b}`: {e}"))?;
    if a < 1 || a > b || b > 20 {
        return Err(format!("need 1 <= A <= B <= 20, got {a}..{b}"));
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    let echo = std::env::args().skip(1).fold(String::from("qzeta"), |acc, a| acc + " " + &a);
    let opts = commands::Options {
        format: if cli.json { Format::Json } else { cli.format },
        order: cli.order as usize,
        precision: cli.precision,
        echo,
    };
    let result = match cli.command {
        Command::List => commands::list(&opts),
        Command::Verify { ids } => commands::verify(&opts, &ids),
        Command::Expand { id, expr, side } => commands::expand(&opts, id.as_deref(), expr.as_deref(), side),
        Command::Check { lhs, rhs, id } => commands::check(&opts, lhs.as_deref(), rhs.as_deref(), id.as_deref()),
        Command::Oracle { lemma, max } => commands::oracle(&opts, lemma, max),
        Command::Limit { id, s, j, bound } => commands::limit(&opts, &id, s, j, bound),
        Command::Bernoulli { m } => commands::bernoulli(&opts, m),
        Command::Zeta { m } => commands::zeta(&opts, m),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("qzeta: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn j_ranges() {
        assert_eq!(parse_j_range("1..10"), Ok((1, 10)));
        assert_eq!(parse_j_range(" 3 .. 3"), Ok((3, 3)));
        assert!(parse_j_range("0..4").is_err());
        assert!(parse_j_range("5..4").is_err());
        assert!(parse_j_range("1..21").is_err());
        assert!(parse_j_range("1-4").is_err());
    }

    #[test]
    fn global_flags_parse_after_subcommand() {
        let cli = Cli::try_parse_from(["qzeta", "verify", "eq13", "--order", "30", "--json"]).unwrap();
        assert_eq!(cli.order, 30);
        assert!(cli.json);
        assert!(Cli::try_parse_from(["qzeta", "verify", "eq13", "--order", "0"]).is_err());
        assert!(Cli::try_parse_from(["qzeta", "expand"]).is_err());
        assert!(Cli::try_parse_from(["qzeta", "check", "q"]).is_err());
    }
}
