mod commands;
mod field;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dualpair", version, about = "Finite commutative group schemes as dual pairs of algebras")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Plain,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    A,
    B,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a pair file describes a finite group scheme.
    Validate {
        file: PathBuf,
        /// Certified numeric validation over Q.
        #[arg(long, conflicts_with = "modulus")]
        numeric: bool,
        /// Starting precision in bits for --numeric.
        #[arg(long, requires = "numeric")]
        prec: Option<usize>,
        /// Reduce modulo a prime first and validate over the splitting field.
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
    },
    /// Group structure of the base-field points.
    Structure {
        file: PathBuf,
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
    },
    /// List the points over a field, 1-based.
    Points {
        file: PathBuf,
        #[arg(long, default_value = "base")]
        over: String,
        #[arg(long, value_enum, default_value_t = SideArg::A)]
        side: SideArg,
    },
    /// Sum of two points.
    Add {
        file: PathBuf,
        /// Two 1-based point indices, `I,J`.
        #[arg(long, value_name = "I,J")]
        points: String,
        #[arg(long, default_value = "base")]
        over: String,
        #[arg(long, value_enum, default_value_t = SideArg::A)]
        side: SideArg,
    },
    /// Pairing of the i-th A-point with the j-th B-point.
    Pairing {
        file: PathBuf,
        #[arg(short)]
        i: usize,
        #[arg(short)]
        j: usize,
        #[arg(long, default_value = "base")]
        over: String,
    },
    /// Negative of a point.
    Negate {
        file: PathBuf,
        #[arg(short)]
        i: usize,
        #[arg(long, default_value = "base")]
        over: String,
        #[arg(long, value_enum, default_value_t = SideArg::A)]
        side: SideArg,
    },
    /// All morphisms from the first pair to the second.
    Hom { source: PathBuf, target: PathBuf },
    /// Direct sum of two pairs.
    Sum {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Kernel of multiplication by k.
    Kernel {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        mult: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cokernel of multiplication by k.
    Cokernel {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        mult: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cartier dual.
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Frobenius matrices at one prime or a range of primes.
    Frobenius {
        file: PathBuf,
        #[arg(short, required_unless_present = "range", conflicts_with = "range")]
        p: Option<u64>,
        /// Inclusive range `P1..P2`.
        #[arg(long)]
        range: Option<String>,
    },
    /// Reduce a pair over Q modulo a prime.
    Reduce {
        file: PathBuf,
        #[arg(short)]
        p: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a standard pair.
    Gallery {
        #[command(subcommand)]
        which: GalleryCmd,
        /// `Q` or a prime.
        #[arg(long, default_value = "Q", global = true)]
        base: String,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Identify the group behind a pairing table.
    IdentifyTable {
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        /// Generate a random table for the sequence `d1,d2,..` instead.
        #[arg(long, conflicts_with = "file")]
        random: Option<String>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GalleryCmd {
    Trivial,
    /// 2-torsion of y^2 = x^3 - a x over Q.
    E2 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// 2-torsion of the supersingular curve over F_2.
    Ss2,
    /// mu_n with the constant group as its dual.
    Mu {
        #[arg(long)]
        n: usize,
    },
    /// Constant Z/n.
    Constant {
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
