use std::io::Write;

use clap::Parser;
use pseudo_poisson::cli::{run, CliConfig};

fn main() {
    let cfg = CliConfig::parse();
    let outcome = run(&cfg);
    if cfg.output_path.is_none() {
        let _ = std::io::stdout().write_all(outcome.output.as_bytes());
    }
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    std::process::exit(outcome.exit_code);
}
