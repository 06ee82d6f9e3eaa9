use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use logkdv_lab::cli::{execute, Cli};
use logkdv_lab::OUTPUT_DIR_ENV;

fn main() -> ExitCode {
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    match execute(Cli::parse(), env_dir) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(text) = report.text {
                print!("{text}");
            }
            for dir in &report.outputs {
                println!("{}", dir.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
