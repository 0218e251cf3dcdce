use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::parse::{parse_grid, parse_list, Grid, List};

#[derive(Parser, Debug)]
#[command(name = "sdl", version, about = "Numerical checks for sharp L² division, ∂̄ and extension estimates")]
pub struct Cli {
    /// Write reports here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write `parameter,lhs,rhs` rows for sweeps.
    #[arg(long = "plot-data", global = true)]
    pub plot_data: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gain triples: ODE residuals, sharpness, construction from a profile.
    #[command(subcommand)]
    Triples(TriplesCmd),
    /// Minimal division solutions and estimate ratios.
    #[command(subcommand)]
    Division(DivisionCmd),
    /// Equality cases of the ∂̄ estimate on the disk.
    #[command(subcommand)]
    Dbar(DbarCmd),
    /// Rank-constrained positivity of Hermitian tensor forms.
    #[command(subcommand)]
    Positivity(PositivityCmd),
    /// Extension constants, the mean-value test and the two-weight functional.
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Worked examples and the acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone)]
pub struct TripleArg {
    /// Catalog name: skoda, log, qexp, hormrefine, affine, extension.
    #[arg(long, allow_hyphen_values = true)]
    pub name: String,
    /// Comma-separated parameters.
    #[arg(long, value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
    pub param: List,
}

#[derive(Subcommand, Debug)]
pub enum TriplesCmd {
    Verify {
        #[command(flatten)]
        triple: TripleArg,
        /// `start:end:count`; defaults to 1000 log-spaced points below the interval's end.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<Grid>,
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
    },
    Build {
        /// Profile for C, e.g. `exp(1)`.
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
        #[arg(long = "A", default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    Sharp {
        #[command(flatten)]
        triple: TripleArg,
        #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
        tol: f64,
    },
    /// Every catalog instance through the ODE check.
    Catalog {
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DivisionCmd {
    Solve {
        /// Problem description (JSON).
        #[arg(long, allow_hyphen_values = true)]
        config: PathBuf,
        /// Overrides the config's truncation degree.
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
    },
    Ratio {
        /// Exponent φ, e.g. `saddle(0.3)`; omitted means φ ≡ 0.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        delta: f64,
        /// Comma-separated ε values.
        #[arg(long, value_parser = parse_list, default_value = "1", allow_hyphen_values = true)]
        eps: List,
        #[arg(long, default_value = "qexp(1)", allow_hyphen_values = true)]
        triple: String,
        #[arg(long, default_value_t = 6, allow_hyphen_values = true)]
        degree: usize,
    },
    SkodaCompare {
        /// `plane` (g = (1, z₁, z₂) on ℂ²) or `disk` (g = (1/2, z/2) on the disk).
        #[arg(long, default_value = "plane", allow_hyphen_values = true)]
        setting: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        degree: usize,
        #[arg(long, default_value_t = 2e-3, allow_hyphen_values = true)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum DbarCmd {
    Verify {
        /// hormander-disk, apriori-affine, apriori-hormrefine or all.
        #[arg(long, default_value = "all", allow_hyphen_values = true)]
        case: String,
        #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
        tol: f64,
        /// Also check orthogonality to monomials up to this degree.
        #[arg(long, allow_hyphen_values = true)]
        orthogonality: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PositivityCmd {
    Test {
        /// identity, diag, fs2 (Fubini–Study; `fubini-study` uses --n) or custom.
        #[arg(long, default_value = "fs2", allow_hyphen_values = true)]
        form: String,
        /// JSON array `[i][j][k][l] = [re, im]` for the custom form.
        #[arg(long, allow_hyphen_values = true)]
        file: Option<PathBuf>,
        /// Dimension for the identity and Fubini–Study forms.
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        n: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        m: usize,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        trials: usize,
    },
    Lemma24 {
        #[arg(long = "rq", default_value_t = 2, allow_hyphen_values = true)]
        r_q: usize,
        #[arg(long = "rs", default_value_t = 2, allow_hyphen_values = true)]
        r_s: usize,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        n: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        q: usize,
        #[arg(long, default_value_t = 100, allow_hyphen_values = true)]
        seeds: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtensionCmd {
    Limit {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: usize,
        #[arg(long = "B", default_value_t = 0.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_parser = parse_list, default_value = "1e2,1e4,1e6", allow_hyphen_values = true)]
        t: List,
        #[arg(long, default_value_t = 1e-4, allow_hyphen_values = true)]
        tol: f64,
    },
    Demo {
        /// Profile c, e.g. `one` or `exp(0.5)`.
        #[arg(long, default_value = "one", allow_hyphen_values = true)]
        profile: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        f0: f64,
        #[arg(long, value_parser = parse_list, default_value = "1e4", allow_hyphen_values = true)]
        t: List,
        #[arg(long, default_value_t = 12, allow_hyphen_values = true)]
        degree: usize,
        #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
        tol: f64,
    },
    Meanvalue {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        /// The center as `re,im,re,im,...`.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        x: List,
        /// Diagonal of A.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        a: List,
        #[arg(long, value_parser = parse_list, default_value = "0.1,0.5,1", allow_hyphen_values = true)]
        eps: List,
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
    },
    #[command(name = "thmD")]
    ThmD {
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        /// Diagonal of A.
        #[arg(long, value_parser = parse_list, default_value = "1", allow_hyphen_values = true)]
        a: List,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Real coefficients of F in the first variable, lowest degree first; G = 1 - F.
        #[arg(long = "F", value_parser = parse_list, default_value = "", allow_hyphen_values = true)]
        f: List,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    Example {
        #[arg(long, allow_hyphen_values = true)]
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<f64>,
    },
    All,
}
