use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use darboux_core::darboux::{DEFAULT_MAX_STEPS, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Certified Darboux enclosures, Volterra sandwich checks and flatness reports")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adaptive enclosure of the lower and upper integrals of f on [a, b].
    Enclose(EncloseArgs),
    /// Checks lower sum <= H(b) - H(a) <= upper sum of H' on partitions of [a, b].
    Volterra(VolterraArgs),
    /// Checks the flatness conditions on [0, 1] and evaluates the contradiction chain.
    Flatness(FlatnessArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EncloseArgs {
    /// Integrand expression in x.
    #[arg(long = "f", conflicts_with = "oracle", required_unless_present = "oracle")]
    pub f: Option<String>,
    /// Built-in range oracle instead of an expression.
    #[arg(long, value_parser = ["dirichlet", "thomae-like"])]
    pub oracle: Option<String>,
    /// Define f(0) = 0 where the expression is singular at 0.
    #[arg(long)]
    pub zero_extend: bool,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, env = "DARBOUX_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Write the convergence history (step, lower_sum, upper_sum) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VolterraArgs {
    /// Antiderivative expression H; its symbolic derivative is integrated.
    #[arg(long = "H")]
    pub big_h: String,
    #[arg(long)]
    pub zero_extend: bool,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Uniform partitions with these block counts (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub uniform: Vec<usize>,
    /// Seeded random partitions with these block counts (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub random: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also reconstruct H(b) - H(a) adaptively to within --tol.
    #[arg(long)]
    pub ftc: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, env = "DARBOUX_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FlatnessArgs {
    #[arg(long = "f")]
    pub f: String,
    #[arg(long)]
    pub zero_extend: bool,
    /// Constant of the inequality |x f'(x)| <= C |f(x)|.
    #[arg(long = "C")]
    pub c: f64,
    /// Orders n for |f(x)| < x^n (comma separated, each > 1).
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("darboux").chain(args.iter().copied()))
    }

    #[test]
    fn comma_separated_lists() {
        let cli = parse(&["flatness", "--f", "x^3", "--C", "3", "--n", "5,6,10"]).unwrap();
        let Command::Flatness(a) = cli.command else { panic!() };
        assert_eq!(a.n, vec![5, 6, 10]);
        let cli = parse(&["volterra", "--H", "x", "--a", "-1", "--b", "1", "--uniform", "4,8", "--random", "3"]).unwrap();
        let Command::Volterra(a) = cli.command else { panic!() };
        assert_eq!((a.uniform, a.random, a.a), (vec![4, 8], vec![3], -1.0));
    }

    #[test]
    fn function_or_oracle_but_not_both() {
        assert!(parse(&["enclose", "--a", "0", "--b", "1"]).is_err());
        assert!(parse(&["enclose", "--f", "x", "--oracle", "dirichlet", "--a", "0", "--b", "1"]).is_err());
        assert!(parse(&["enclose", "--oracle", "thomae-like", "--a", "0", "--b", "1"]).is_ok());
        assert!(parse(&["enclose", "--oracle", "cantor", "--a", "0", "--b", "1"]).is_err());
    }
}
