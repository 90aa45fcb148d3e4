use std::process::ExitCode;

use clap::Parser;
use pointspec_cli::{emit::to_text, run, Cli, CliError, ExperimentConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = ExperimentConfig::resolve(cli)?;
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg.to_json()).expect("configuration serializes"));
        return Ok(());
    }
    let (table, written) = run(&cfg)?;
    print!("{}", to_text(&table));
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
