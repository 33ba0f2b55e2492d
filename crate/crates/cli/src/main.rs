use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use khav_cli::{configure_threads, render, run, Cli, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim_end().to_string())),
    };
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let rec = match run(&cli).and_then(|rec| Ok((render(&rec, cli.format)?, rec.success))) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(rec.0.as_bytes()).and_then(|_| out.flush()) {
        return fail(&CliError::Output(e.to_string()));
    }
    // a verification that ran but did not pass
    if rec.1 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
