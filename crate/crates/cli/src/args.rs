use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bispectra",
    version,
    about = "Exact bispectral polynomial families, their weights, tau functions and Toda flows"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Coefficients a_1,…,a_{d+1} of q, e.g. "0,0,-1/3". Defaults to Gould-Hopper.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient table of P_0 … P_n.
    Polys {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Exact verifications.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Moments of the first weight functional.
    Moments {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 7)]
        count: usize,
    },
    /// Functions of the second kind.
    Weights {
        #[command(subcommand)]
        what: Weights,
    },
    /// Exact large-x expansion of ν(s, x).
    Expand {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Tau function of the charge-m plane.
    Tau {
        #[command(flatten)]
        plane: PlaneArgs,
        /// Emit log τ instead of τ.
        #[arg(long)]
        log: bool,
    },
    /// Plücker coordinates and relations.
    Plucker {
        #[command(flatten)]
        plane: PlaneArgs,
    },
    Virasoro {
        #[command(subcommand)]
        what: Virasoro,
    },
    Toda {
        #[command(subcommand)]
        what: Toda,
    },
}

#[derive(Args, Debug, Clone)]
pub struct PlaneArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub m: i64,
    /// Weight cap for the times.
    #[arg(long, default_value_t = 6)]
    pub weight: u32,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// L P_n = n P_n, ∂P_n = n P_(n-1) and the recurrence.
    Bochner {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 20)]
        max_n: usize,
    },
    /// Duality and d-orthogonality.
    Orthogonality {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ContourArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Subcommand, Debug)]
pub enum Weights {
    /// ν(s, x) by contour quadrature.
    Eval {
        #[command(flatten)]
        contour: ContourArgs,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x_im: f64,
    },
    /// ODE, recurrence and lowering residuals at random points.
    Residuals {
        #[command(flatten)]
        contour: ContourArgs,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Virasoro {
    /// Operators L_-1 … L_k and the convention log.
    Build {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long, default_value_t = 2)]
        k_max: i64,
    },
    /// Commutation relations and constraints on the family's tau.
    Check {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        m: i64,
        /// Constraint residuals are checked through this weight.
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[arg(long, default_value_t = 2)]
        k_max: i64,
        /// Weight of the monomials the commutators are tested on.
        #[arg(long, default_value_t = 4)]
        commutator_weight: u32,
        /// Test the constraints on the trivial plane (τ = 1) instead.
        #[arg(long)]
        trivial_plane: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum Toda {
    /// D^(1/d) by dressing.
    Root {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// [(D^(k/d))_+, D] in both forms.
    Flow {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
}
