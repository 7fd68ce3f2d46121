use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use varietas::cli::{run, Cli};
use varietas::docs::{error_document, render};
use varietas::WorkbenchError;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("VARIETAS_LOG", "warn")).init();
    match Cli::try_parse() {
        Ok(cli) => ExitCode::from(run(&cli)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            let message = e.kind().as_str().unwrap_or("invalid arguments").to_string();
            print!("{}", render(&error_document(&WorkbenchError::Usage(message))));
            ExitCode::from(2)
        }
    }
}
