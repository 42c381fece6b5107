use std::io::Write;
use std::process::ExitCode;

use abvar::error::{CliError, EXIT_INPUT};

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        let e = CliError::input("Internal", info.to_string(), "");
        eprintln!("{}", e.to_json());
        std::process::exit(EXIT_INPUT);
    }));
    let run = abvar::cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(run.stdout.as_bytes()).and_then(|_| out.flush());
    if !run.stderr.is_empty() {
        let _ = std::io::stderr().write_all(run.stderr.as_bytes());
    }
    ExitCode::from(run.exit as u8)
}
