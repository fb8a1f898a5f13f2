use std::process::ExitCode;

use clap::Parser;
use spinmediate_cli::args::Cli;
use spinmediate_cli::{emit, execute};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let status = execute(&cli).and_then(|(reports, output)| emit(&reports, &output, &mut std::io::stdout().lock()));
    let code = match status {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    };
    ExitCode::from(code as u8)
}
