use clap::Parser;

use acpose_cli::cli::Cli;
use acpose_cli::commands;

fn main() {
    // clap exits with code 2 on flag errors.
    let cli = Cli::parse();
    if let Err(err) = commands::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
