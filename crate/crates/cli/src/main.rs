use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use fibzeta_cli::commands::{env_precision, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let env = env_precision();
    let result = run(&cli, env.as_deref(), &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fibzeta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
