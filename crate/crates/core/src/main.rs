use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dimer_reid::cli::{exit_code, run, Command, RunConfig};

/// Perfect matchings, toric fans, chamber walls and Reid's recipe for a dimer model.
#[derive(Parser)]
#[command(name = "dimer-reid", version)]
struct Args {
    /// Stage to run; earlier stages run first but only this one writes a report.
    #[arg(value_enum)]
    command: Command,
    /// Dimer model in JSON form.
    #[arg(long)]
    input: PathBuf,
    /// `special` or comma separated weights, for example `-2,1,1` or `-1/2,1/2`.
    #[arg(long, default_value = "special", allow_hyphen_values = true)]
    theta: String,
    /// Directory for reports.
    #[arg(long)]
    out: PathBuf,
    /// Also write SVG drawings.
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let config = RunConfig { command: args.command, input: args.input, theta: args.theta, out: args.out, svg: args.svg };
    match run(&config) {
        Ok(written) => {
            for path in written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
