use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use laxkit::cli::Cli;
use laxkit::output::write_all;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // exit code 2 is reserved for negative reports
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let artifacts = match laxkit::run(&cli) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("laxkit: error: {e}");
            return ExitCode::from(1);
        }
    };
    for line in &artifacts.summary {
        eprintln!("{line}");
    }
    match &cli.out {
        Some(dir) => match write_all(dir, &artifacts.files) {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("laxkit: error: {e}");
                return ExitCode::from(1);
            }
        },
        None => {
            let text = artifacts.primary(cli.format).unwrap_or("");
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    if artifacts.negative {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
