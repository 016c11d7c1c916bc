use clap::{Args, Parser, Subcommand, ValueEnum};
use cwb_core::Alphabet;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cwb", version, about = "Workbench for packing norms, truncated conditions and amalgamation")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Alphabet such as `2`, `Z3` or `3x2`; used where no input file fixes one.
    #[arg(long, global = true)]
    pub alphabet: Option<Alphabet>,
    /// Largest number of points an enumeration may visit.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Enforce every finitary clause of the norm sequence.
    #[arg(long, global = true, conflicts_with = "relaxed")]
    pub strict: bool,
    /// Waive the growth clauses of the norm sequence.
    #[arg(long, global = true)]
    pub relaxed: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Single creatures: norms, values and the composition operations.
    Creature {
        #[command(subcommand)]
        verb: CreatureVerb,
    },
    /// Truncated conditions built from creatures.
    Cond {
        #[command(subcommand)]
        verb: CondVerb,
    },
    /// Block-partition conditions over a norm sequence.
    Qhn {
        #[command(subcommand)]
        verb: QhnVerb,
    },
    /// Property suites.
    Suite {
        #[command(subcommand)]
        verb: SuiteVerb,
    },
    /// Seeded random instances that pass their validator.
    Gen(GenArgs),
    /// A common upper bound of the inputs, with an independent check.
    Amalgamate(AmalgamateArgs),
    /// Exact measure of POS for a block-partition condition.
    Measure { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CreatureVerb {
    /// Packing number and membership.
    Norm { file: PathBuf },
    /// All values on the domain.
    Values { file: PathBuf },
    /// One value from a system of distinct representatives.
    Witness { file: PathBuf },
    /// Restriction to a sub-domain keeping half the packing number.
    Restrict {
        file: PathBuf,
        /// Coordinates such as `0,1` or `0..4`.
        #[arg(long)]
        zstar: String,
    },
    /// Split along a coordinate set into two creatures.
    Cut {
        file: PathBuf,
        #[arg(long)]
        low: String,
    },
    /// Join creatures with disjoint domains.
    Glue {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Union of the constraint families of two creatures on one domain.
    Link { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CondVerb {
    Validate { file: PathBuf },
    /// POS size by enumeration and by the cylinder product.
    Pos { file: PathBuf },
    /// Decide `p ≤ q`, by certificate replay when one is given.
    Leq {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Move bound for the certificate search.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Replay a certificate and print the resulting condition.
    #[command(name = "move", alias = "apply")]
    Move { p: PathBuf, cert: PathBuf },
    /// Projection along `i ↦ i + shift`.
    Project {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        shift: u32,
    },
    /// Lift `r ≥ f(p)` to `q ≥ p` with `f(q) = r`, for `f` the projection along `i ↦ i + shift`.
    Lift {
        p: PathBuf,
        r: PathBuf,
        cert: PathBuf,
        #[arg(long, default_value_t = 1)]
        shift: u32,
    },
    Amalgamate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "auto")]
        slack: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum QhnVerb {
    Validate { file: PathBuf },
    /// Check a norm-sequence prefix.
    SeqCheck { file: PathBuf },
    /// POS size by enumeration against the exact measure.
    Pos { file: PathBuf },
    /// Syntactic order against POS inclusion.
    Leq { p: PathBuf, q: PathBuf },
    /// A witness point and a condition above both inputs.
    Compat { p0: PathBuf, p1: PathBuf },
    /// Class amalgam when all inputs share a class key, else the compatibility bound.
    Amalgamate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Shrink every σ to the dense normal size.
    Normalize { file: PathBuf },
    Measure { file: PathBuf },
    /// A compatible condition whose POS set has small measure.
    Null { file: PathBuf },
    /// Whether every stem on at most `depth` coordinates can leave POS.
    NowhereDense {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Projection along `i ↦ i + shift` and the pullback condition for `r`.
    Project {
        p: PathBuf,
        r: PathBuf,
        #[arg(long, default_value_t = 1)]
        shift: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuiteVerb {
    /// Names and descriptions of the property suites.
    List,
    /// Run suites by name (`all` for every suite), or replay counterexamples.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(required_unless_present = "replay", conflicts_with = "replay")]
    pub names: Vec<String>,
    /// A report or single counterexample to re-check.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Instance count for seeded suites.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub z_max: Option<usize>,
    #[arg(long)]
    pub delta_max: Option<usize>,
    #[arg(long)]
    pub window_max: Option<u32>,
    /// Largest family handed to the packing-number oracle.
    #[arg(long)]
    pub oracle_family: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Creature,
    Cond,
    Qcond,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Creature domain sizes.
    #[arg(long, default_value_t = 1)]
    pub z_min: usize,
    #[arg(long, default_value_t = 4)]
    pub z_max: usize,
    /// Constraint family sizes.
    #[arg(long, default_value_t = 1)]
    pub delta_min: usize,
    #[arg(long, default_value_t = 3)]
    pub delta_max: usize,
    /// Least packing number of generated creatures.
    #[arg(long, default_value_t = 1)]
    pub min_n: u64,
    /// Window size for conditions.
    #[arg(long, default_value_t = 8)]
    pub window: u32,
    #[arg(long, default_value_t = 0)]
    pub stem_min: usize,
    #[arg(long, default_value_t = 2)]
    pub stem_max: usize,
    /// `q-empty` or `q-infty`.
    #[arg(long, default_value = "q-infty")]
    pub flavor: String,
    /// Norm-sequence prefix such as `5,5;1601,1601`.
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub m_star: usize,
    #[arg(long, default_value_t = 0)]
    pub sigmas_min: usize,
    #[arg(long, default_value_t = 3)]
    pub sigmas_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    QInfty,
    Qhn,
}

#[derive(Debug, Args)]
pub struct AmalgamateArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Input documents; a file may also hold an array of them.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// `auto`, `nor-growth`, or `BASE,STEP` for `BASE + STEP·i` (q-infty mode).
    #[arg(long, default_value = "auto")]
    pub slack: String,
}
