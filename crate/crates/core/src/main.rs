use std::process::ExitCode;

use clap::Parser;
use rl2dl::cli::{run, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(report) => {
            if let Some(stats) = report.stats {
                println!("{stats}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
