use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const REPRESENT_HELP: &str = "\
Without --mode the representation is chosen in this order:
  1. PlainCayley    det R = +1 and R has no eigenvalue -1
  2. SquaredCayley  det R = +1 and R has eigenvalue -1 (float backend)
  3. SignedCayley   det R = -1 (and obstructed rotations on the exact backend)";

const CHECKS_HELP: &str = "\
Sign matrices E_k are indexed by k = k_n ... k_1 in binary: entry i of E_k is
-1 exactly when bit k_i is 1. E_0 = I and E_(2^n - 1) = -I.
With no check selected, --sum-zero 4, --det-identity (20 trials, n = 4) and
--chain 4 are run.";

#[derive(Debug, Parser)]
#[command(name = "cayley", version, about = "Cayley representations of orthogonal matrices and sign-chosen diagonal perturbations")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Use exact rational arithmetic.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Seed for every random generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Orthogonality tolerance: max |R^T R - I| accepted on floats.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Represent an orthogonal matrix with skew-symmetric Cayley parameters.
    #[command(after_help = REPRESENT_HELP)]
    Represent(RepresentArgs),
    /// Choose perturbation signs so that A + diag(eps_i c_i) is invertible.
    Perturb(PerturbArgs),
    /// Run the sign-matrix identity checks.
    #[command(after_help = CHECKS_HELP)]
    Checks(ChecksArgs),
    /// Generate test matrices.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Plain,
    Squared,
    TwoFactor,
    Signed,
}

#[derive(Debug, Args)]
pub struct RepresentArgs {
    /// Matrix file (text or JSON), `-` for stdin.
    pub input: PathBuf,

    /// Force a specific representation.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Skip the orthogonality gate.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// Matrix file (text or JSON), `-` for stdin.
    pub input: PathBuf,

    /// Comma-separated nonzero magnitudes c_1,...,c_n (decimals or p/q).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "c_scale")]
    pub c: Option<Vec<String>>,

    /// Use c_i = s for every i.
    #[arg(long, allow_hyphen_values = true)]
    pub c_scale: Option<String>,

    /// Also enumerate all 2^n sign vectors (n <= 12) and check membership.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct ChecksArgs {
    /// Check that E_0 + ... + E_(2^N - 1) = 0.
    #[arg(long, value_name = "N")]
    pub sum_zero: Option<usize>,

    /// Check det(A + B) = 2^(n-1) (det A + det B) on random one-column pairs.
    #[arg(long)]
    pub det_identity: bool,

    #[arg(long, default_value_t = 20)]
    pub trials: usize,

    /// Dimension for --det-identity.
    #[arg(long, default_value_t = 4)]
    pub n: usize,

    /// List every E_k with det(I + E_k A) != 0 for the matrix in PATH.
    #[arg(long, value_name = "PATH")]
    pub enumerate: Option<PathBuf>,

    /// Check the block pairing of E_0, ..., E_(2^N - 1).
    #[arg(long, value_name = "N")]
    pub chain: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Haar-random rotation (or improper orthogonal matrix).
    Haar {
        #[arg(long)]
        n: usize,
        /// Force determinant -1 instead of +1.
        #[arg(long)]
        improper: bool,
    },
    /// Integer matrix of exact rank `rank < n`.
    Singular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
    },
    /// Skew-symmetric matrix with standard Gaussian entries.
    Skew {
        #[arg(long)]
        n: usize,
    },
    /// Integer matrix with entries uniform in -5..=5.
    Int {
        #[arg(long)]
        n: usize,
    },
}
