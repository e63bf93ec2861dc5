use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "formstr", version, about = "Strength of homogeneous forms, torsor calculus and GL checks")]
pub struct Cli {
    /// Skip the result cache (neither read nor write).
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Indented output instead of one JSON line.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Strength, absolute strength or certified bounds of a form.
    Strength(StrengthArgs),
    /// Search for an extension over which the strength drops to a target.
    Extend(ExtendArgs),
    /// Torsor algebra: Taylor components, derivatives, Frobenius descent, witnesses
    #[command(subcommand)]
    Torsor(TorsorCommand),
    /// Polynomial-functor checks: shift dimensions and the GF(2) example
    #[command(subcommand)]
    Glcase(GlcaseCommand),
    /// Run the acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Field spec, e.g. QQ, GF(5), GF(2)(t1,t2), QQ[i]/(i^2+1).
    #[arg(long, default_value = "QQ")]
    pub field: String,
    #[arg(long)]
    pub form: String,
    /// Comma-separated variables; inferred from the form when absent.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Astr,
    Exact,
    Bounds,
}

#[derive(Args, Debug)]
pub struct StrengthArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[arg(long, value_enum, default_value = "bounds")]
    pub mode: Mode,
    /// Largest s tried by exact enumeration or the rational search.
    #[arg(long)]
    pub max_s: Option<u32>,
    /// Enumeration budget (number of g-tuples) for exact mode.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub form: FormArgs,
    #[arg(long)]
    pub target_s: u32,
    #[arg(long, default_value_t = 2)]
    pub degree_budget: u64,
}

#[derive(Args, Debug, Clone)]
pub struct TorsorArgs {
    #[arg(long, default_value = "QQ")]
    pub field: String,
    /// Comma-separated base variables.
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub base: Vec<String>,
    /// Comma-separated fiber variables.
    #[arg(long, value_delimiter = ',')]
    pub fiber: Vec<String>,
    #[arg(long)]
    pub f: String,
}

#[derive(Subcommand, Debug)]
pub enum TorsorCommand {
    /// Components of Δ(f) by shadow degree.
    Delta(TorsorArgs),
    /// Directional derivative along a covector on the fiber.
    Derive {
        #[command(flatten)]
        torsor: TorsorArgs,
        /// One field element per fiber variable, comma-separated.
        #[arg(long, value_delimiter = ',')]
        r: Vec<String>,
    },
    /// Least q with Δ_q(f) ≠ 0 and f over q-th powers of fiber monomials.
    Descend(TorsorArgs),
    /// Embedding witness in the shifted Sym^d model.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long, default_value = "QQ")]
    pub field: String,
    /// Comma-separated parameter variables.
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub params: Vec<String>,
    /// dim U
    #[arg(long)]
    pub m: usize,
    /// dim V
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub f: String,
    /// Generators whose GL-orbit spans J, separated by ';' (default: f).
    #[arg(long, value_delimiter = ';')]
    pub ideal: Option<Vec<String>>,
    /// Covector on pure-U coordinates, e.g. "zu1u1=1,zu1u2=-2".
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub r0: Vec<String>,
    /// Images of u1..um among v1..vn (0-based), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub phi: Vec<usize>,
}

#[derive(Subcommand, Debug)]
pub enum GlcaseCommand {
    /// Graded pieces of Sym^a(K^m ⊕ K^n).
    ShiftDims {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// The characteristic-2 F-elementary example at level n.
    NsCheck {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run only these criteria (comma-separated ids).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<u8>>,
}
