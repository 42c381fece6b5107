use clap::{Parser, Subcommand};

use crate::commands::{self, Check, Outcome, VerifyOpts};
use crate::demo::{self, DemoOpts};
use crate::error::{CliError, EXIT_INPUT, EXIT_PASS};

#[derive(Parser, Debug)]
#[command(name = "abvar", version, about = "Exact checks on polarized abelian varieties modelled as lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polarization type of a lattice
    Type { file: String },
    /// Dual polarized lattice and its type
    Dual { file: String },
    /// The kernel K(L) of lambda_L
    Kernel { file: String },
    /// Quotient by the scenario subgroup
    Quotient { file: String },
    /// Pairing of the two scenario points
    Pairing { file: String },
    /// Orthogonal complement of the scenario subgroup
    Orth { file: String },
    /// Run one of the verification checks
    Verify {
        /// lemma-ker, dual-quotient, pullback-lemmas, degree-ledger or prym-duality
        check: String,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        genus: Option<usize>,
        /// log2 of the subgroup order
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 6)]
        branch_points: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// List isotropic planes of the standard symplectic space over F_2
    EnumerateIsotropic {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Genus of a cover, and tower data for degree 4
    Genus { file: String },
    /// Bigonal construction of a tower
    Bigonal { file: String },
    /// Run every check with fixed seeds
    DemoPaper {
        #[arg(long, default_value_t = commands::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Result of a run: what goes to stdout and stderr, and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

fn render(out: Outcome, json: bool) -> Run {
    let stdout = match (&out.text, json) {
        (Some(t), false) => t.clone(),
        _ => serde_json::to_string(&out.value).expect("serializable") + "\n",
    };
    Run { stdout, stderr: String::new(), exit: out.exit }
}

fn failure(e: CliError) -> Run {
    Run { stdout: String::new(), stderr: e.to_json().to_string() + "\n", exit: EXIT_INPUT }
}

pub fn dispatch(cmd: Command) -> Run {
    let jobs_ok = |j: usize| if j == 0 { Err(CliError::input("InvalidJobs", "--jobs must be at least 1", "--jobs")) } else { Ok(j) };
    let (res, json) = match cmd {
        Command::Type { file } => (commands::cmd_type(&file), true),
        Command::Dual { file } => (commands::cmd_dual(&file), true),
        Command::Kernel { file } => (commands::cmd_kernel(&file), true),
        Command::Quotient { file } => (commands::cmd_quotient(&file), true),
        Command::Pairing { file } => (commands::cmd_pairing(&file), true),
        Command::Orth { file } => (commands::cmd_orth(&file), true),
        Command::Genus { file } => (commands::cmd_genus(&file), true),
        Command::Bigonal { file } => (commands::cmd_bigonal(&file), true),
        Command::Verify { check, scenario, seed, count, genus, rank, branch_points, jobs, json } => {
            let res = match Check::parse(&check) {
                None => Err(CliError::input(
                    "UnknownCheck",
                    format!("unknown check {check:?}; expected one of {}", Check::ALL.map(Check::name).join(", ")),
                    "check",
                )),
                Some(c) => jobs_ok(jobs).and_then(|jobs| {
                    commands::cmd_verify(c, &VerifyOpts { scenario, seed, count, genus, rank, branch_points, jobs })
                }),
            };
            (res, json)
        }
        Command::EnumerateIsotropic { dim, oracle, jobs, json } => {
            (jobs_ok(jobs).and_then(|jobs| commands::cmd_enumerate_isotropic(dim, oracle, jobs)), json)
        }
        Command::DemoPaper { seed, count, jobs, json } => {
            (jobs_ok(jobs).and_then(|jobs| demo::cmd_demo_paper(&DemoOpts { seed, count, jobs })), json)
        }
    };
    match res {
        Ok(out) => render(out, json),
        Err(e) => failure(e),
    }
}

/// Parses arguments and runs. Usage errors become JSON on stderr with exit 2;
/// `--help` and `--version` print normally and exit 0.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli.command),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                Run { stdout: e.to_string(), stderr: String::new(), exit: EXIT_PASS }
            }
            _ => {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                failure(CliError::input("Usage", first, ""))
            }
        },
    }
}
