use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use sqhom::cli::{execute, format_outcome, unreadable, Cli, SEED_ENV};

fn read_spec(cli: &Cli) -> std::io::Result<String> {
    let path = cli.command.spec_path();
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match read_spec(&cli) {
        Ok(text) => execute(&cli, &text, std::env::var(SEED_ENV).ok().as_deref()),
        Err(e) => unreadable(&cli, format!("cannot read {}: {e}", cli.command.spec_path().display())),
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(format_outcome(&cli, &outcome).as_bytes());
    ExitCode::from(outcome.exit_code as u8)
}
