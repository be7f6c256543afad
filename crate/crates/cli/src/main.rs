//! `bergman-hypo`: decide, certify or refute hyponormality of Bergman-space
//! Toeplitz operators with polynomial symbols.
//!
//! Exit status: 0 proven hyponormal, 1 not hyponormal, 2 inconclusive,
//! 64 unparseable input or usage error, 3 any other failure.

mod output;
mod reproduce;

use std::process::ExitCode;

use bergman_hypo::criteria::{check_with, construct_hypo_plus_cohypo, liu_lu_report, CheckOptions, Verdict};
use bergman_hypo::operator::commutator_matrix;
use bergman_hypo::spectral::norm_report;
use bergman_hypo::symbol::parse_symbol;
use bergman_hypo::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

const EXIT_USAGE: u8 = 64;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bergman-hypo", version, about = "Hyponormality of Bergman-space Toeplitz operators with polynomial symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Finite-section size.
    #[arg(long, default_value_t = 200)]
    size: usize,
    /// Last alpha checked row by row by the Mellin and phase criteria.
    #[arg(long, default_value_t = 200)]
    alpha_max: i64,
    /// Last k checked exactly before a tail certificate takes over.
    #[arg(long, default_value_t = 10_000)]
    k_max: i64,
    /// Rasterization grid for area estimates.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Eigenvalue threshold below which a witness is sought.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide hyponormality of T_phi.
    Check {
        symbol: String,
        /// Largest section tried when no criterion decides.
        #[arg(long, default_value_t = 1600)]
        max_section: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print the self-commutator section in the orthonormal basis.
    Matrix {
        symbol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Exact, finite-section and area bounds for the self-commutator norm.
    Norm {
        symbol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build the explicit hyponormal z-dominant plus zb-dominant example.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Mellin-transform criterion rows for a fixed relative degree symbol.
    Mellin {
        symbol: String,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun a published computation and compare. Run without an id to list them.
    Reproduce {
        id: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn format_of(c: &Common) -> Format {
    match c.format {
        FormatArg::Human => Format::Human,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    }
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::ProvenHyponormal(_) => 0,
        Verdict::NotHyponormal(_) => 1,
        Verdict::Inconclusive(_) => 2,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::OddAbsolutePower { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Check { symbol: text, max_section, common } => {
            let s = parse_symbol(&text)?;
            let opts = CheckOptions {
                section_size: common.size,
                max_section: max_section.max(common.size),
                alpha_check: common.alpha_max,
                k_max: common.k_max,
                threshold: common.tolerance,
            };
            let report = check_with(&s, &opts);
            print!("{}", output::check_report(&s, &report, format_of(&common)));
            Ok(verdict_code(&report.verdict))
        }
        Command::Matrix { symbol: text, common } => {
            let s = parse_symbol(&text)?;
            let m = commutator_matrix(&s, common.size)?;
            print!("{}", output::matrix(&m, format_of(&common)));
            Ok(0)
        }
        Command::Norm { symbol: text, common } => {
            let s = parse_symbol(&text)?;
            let r = norm_report(&s, common.size, common.grid)?;
            print!("{}", output::norm(&s, &r, format_of(&common)));
            Ok(0)
        }
        Command::Construct { n, delta, common } => {
            let r = construct_hypo_plus_cohypo(n, delta)?;
            print!("{}", output::construction(&r, format_of(&common)));
            Ok(verdict_code(&r.verdict))
        }
        Command::Mellin { symbol: text, common } => {
            let s = parse_symbol(&text)?;
            let r = liu_lu_report(&s, common.alpha_max)?;
            print!("{}", output::mellin(&s, &r, format_of(&common)));
            Ok(verdict_code(&r.verdict))
        }
        Command::Reproduce { id, common } => {
            let Some(id) = id else {
                print!("{}", reproduce::list());
                return Ok(0);
            };
            let Some(item) = reproduce::lookup(&id) else {
                eprintln!("unknown example '{id}'\n\n{}", reproduce::list());
                return Ok(EXIT_FAILURE);
            };
            let opts = reproduce::Options {
                size: common.size,
                alpha_max: common.alpha_max,
                k_max: common.k_max,
            };
            let lines = item.run(&opts)?;
            print!("{}", output::reproduction(item.name(), &lines, format_of(&common)));
            Ok(if lines.iter().all(|l| l.pass) { 0 } else { 1 })
        }
    }
}

fn limit_threads() {
    let Ok(v) = std::env::var("BERGMAN_HYPO_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the thread pool: {e}");
            }
        }
        _ => log::warn!("ignoring BERGMAN_HYPO_THREADS={v:?}; expected a positive integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    limit_threads();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
