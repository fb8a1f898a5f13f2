//! Command-line front end: argument grammar, config overlay and the
//! subcommand pipelines. `main.rs` only wires these to stdout and the exit code.

pub mod args;
pub mod commands;
pub mod error;
pub mod parse;

use std::path::Path;

use args::{overlay, Cli, Command, Format, OutputArgs};
use commands::Report;
use error::{CliError, Exit};

fn resolve<T>(flags: &T, output: &OutputArgs, command: &str) -> Result<T, CliError>
where
    T: serde::Serialize + serde::de::DeserializeOwned + Clone,
{
    match &output.config {
        None => Ok(flags.clone()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            overlay(flags, command, &text)
        }
    }
}

/// Run one parsed command line; returns the reports and where to put them.
pub fn execute(cli: &Cli) -> Result<(Vec<Report>, OutputArgs), CliError> {
    let name = cli.command.name();
    Ok(match &cli.command {
        Command::Solve(a) => {
            let a = resolve(a, &a.output, name)?;
            (vec![commands::solve(&a)?], a.output)
        }
        Command::CompileFlips(a) => {
            let a = resolve(a, &a.output, name)?;
            (vec![commands::compile_flips(&a)?], a.output)
        }
        Command::Run(a) => {
            let a = resolve(a, &a.output, name)?;
            (vec![commands::run(&a)?], a.output)
        }
        Command::Noise(a) => {
            let a = resolve(a, &a.output, name)?;
            (vec![commands::noise(&a)?], a.output)
        }
        Command::Reproduce(a) => {
            let a = resolve(a, &a.output, name)?;
            (commands::reproduce(&a)?, a.output)
        }
        Command::ListPresets(a) => {
            let a = resolve(a, &a.output, name)?;
            (vec![commands::list_presets(&a)?], a.output)
        }
    })
}

fn write(dir: &Path, file: &str, body: &str) -> Result<(), CliError> {
    let path = dir.join(file);
    std::fs::write(&path, body).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Write artifacts and render stdout.
pub fn emit(reports: &[Report], output: &OutputArgs, stdout: &mut impl std::io::Write) -> Result<Exit, CliError> {
    if let Some(dir) = &output.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        for r in reports {
            write(dir, &format!("{}.json", r.stem), &pretty(&r.json))?;
            if let Some(csv) = &r.csv {
                write(dir, &format!("{}.csv", r.stem), csv)?;
            }
            for (file, body) in &r.extra {
                write(dir, file, body)?;
            }
        }
    }
    let rendered: String = match output.format.unwrap_or_default() {
        Format::Text => reports.iter().map(|r| r.text.as_str()).collect::<Vec<_>>().join("\n"),
        Format::Json if reports.len() == 1 => pretty(&reports[0].json) + "\n",
        Format::Json => pretty(&serde_json::Value::Array(reports.iter().map(|r| r.json.clone()).collect())) + "\n",
        Format::Csv => reports
            .iter()
            .map(|r| r.csv.clone().unwrap_or_else(|| pretty(&r.json) + "\n"))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    stdout
        .write_all(rendered.as_bytes())
        .map_err(|e| CliError::io("writing stdout", e))?;
    Ok(if reports.iter().all(|r| r.pass) {
        Exit::Ok
    } else {
        Exit::AcceptanceFailure
    })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}
