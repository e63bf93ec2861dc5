mod args;
mod cache;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{Ctx, UsageError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx { cache: (!cli.no_cache).then(|| cache::Cache::new(cache::cache_dir())) };
    match commands::run(&cli.command, &ctx) {
        Ok(env) => {
            let text = if cli.pretty { serde_json::to_string_pretty(&env) } else { serde_json::to_string(&env) };
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text.expect("envelope serializes"));
            if env.falsified() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
