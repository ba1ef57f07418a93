//! Command-line argument model.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

pub const MAX_DIGITS: u32 = 200;

#[derive(Parser, Debug)]
#[command(
    name = "commat",
    version,
    about = "Counts of commuting matrix pairs over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact commuting-pair counts Q_q(n)
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long, value_enum, default_value_t = CountKind::Pairs)]
        kind: CountKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact nilpotent counts and ratios
    Nilpotent {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long, value_enum, default_value_t = NilpotentKind::Count)]
        kind: NilpotentKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Asymptotic coefficients C_{m,q}(n)
    #[command(name = "coeff-c")]
    CoeffC {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        m: NList,
        /// Defaults to every residue 1..=m
        #[arg(long, value_parser = parse_n_list)]
        n: Option<NList>,
        /// Also report |P_m F| at the real point, the argmax over roots of unity and the exp bound
        #[arg(long)]
        bounds: bool,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Truncated expansion sum_{m<=N} C_m(n) q^{n/m}
    Expand {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long = "N", default_value_t = 1)]
        big_n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact normalized coefficient minus the truncated expansion
    Remainder {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long = "N", default_value_t = 1)]
        big_n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Truncated closed-form series for |Nilp_n| / |GL_n|
    #[command(name = "cl-series")]
    ClSeries {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long = "M", default_value_t = 10)]
        big_m: u32,
        #[arg(long = "N", default_value_t = 100)]
        big_n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force enumeration over a prime field
    Brute {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long, value_enum, default_value_t = BruteKind::Pairs)]
        kind: BruteKind,
        /// Work budget; overrides COMMAT_BUDGET
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Infinite-product constants for a field size q
    Constants {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the self-verification checks
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field size, a prime power
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    pub q: Option<u64>,
    /// Field characteristic, with --r
    #[arg(long)]
    pub p: Option<u64>,
    /// Field degree, q = p^r
    #[arg(long, requires = "p")]
    pub r: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..=MAX_DIGITS as i64))]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time in elapsed_ms (otherwise 0, keeping output reproducible)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    /// Q_q(n)
    Pairs,
    /// Q_q(n) / |GL_n(F_q)|
    Series,
    /// Q_q(n) / q^{n^2+n}
    Growth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NilpotentKind {
    /// |Nilp_n(F_q)|
    Count,
    /// |Nilp_n(F_q)| / |GL_n(F_q)|
    Ratio,
    /// Commuting nilpotent pairs
    Pairs,
    /// Commuting nilpotent pairs / |GL_n(F_q)|
    PairsRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BruteKind {
    Pairs,
    Nilpotent,
    NilpotentPairs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Quick,
    Full,
}

/// A list of non-negative integers in request order.
pub type NList = Vec<u32>;

const MAX_LIST: usize = 100_000;

/// Parses `3`, `1,4,9` or `2-6` (and mixtures like `0-3,10`).
pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        let parsed = match item.split_once('-') {
            Some((a, b)) => {
                let a: u32 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start in {item:?}"))?;
                let b: u32 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end in {item:?}"))?;
                if a > b {
                    return Err(format!("empty range {item:?}"));
                }
                if (b - a) as usize >= MAX_LIST {
                    return Err(format!("range {item:?} is too long"));
                }
                (a..=b).collect()
            }
            None => vec![item
                .parse::<u32>()
                .map_err(|_| format!("not a non-negative integer: {item:?}"))?],
        };
        out.extend(parsed);
        if out.len() > MAX_LIST {
            return Err("too many values".into());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_n_list("3").unwrap(), vec![3]);
        assert_eq!(parse_n_list("1,4, 9").unwrap(), vec![1, 4, 9]);
        assert_eq!(parse_n_list("2-5,0").unwrap(), vec![2, 3, 4, 5, 0]);
        assert!(parse_n_list("5-2").is_err());
        assert!(parse_n_list("-1").is_err());
        assert!(parse_n_list("x").is_err());
        assert!(parse_n_list("").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
