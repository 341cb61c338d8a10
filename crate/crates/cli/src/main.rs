use clap::Parser;

use crosslap_cli::{run, Cli, TOL_ZERO_ENV};

fn main() {
    let cli = Cli::parse();
    match run(&cli, std::env::var(TOL_ZERO_ENV).ok()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
        }
        Err(e) => {
            eprintln!("crosslap: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
