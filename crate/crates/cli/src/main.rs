use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use cuspcenter_cli::{run, Command, RunConfig};
use cuspcenter_core::classes::oracle::DEFAULT_MAX_GROUP_ORDER;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

/// Exact verification of the endomorphism ring of a cuspidal block of GL_n(F_q).
#[derive(Debug, Parser)]
#[command(name = "cuspcenter", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    ell: Option<u64>,
    /// Defaults to d times the order of q^d modulo ell.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    d: u64,
    #[arg(long, value_enum, default_value = "json")]
    out: OutputFormat,
    #[arg(long, env = "CUSPCENTER_CACHE")]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: u64,
    /// Number of T_i generators in the deformation presentation.
    #[arg(long)]
    t_count: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        command: cli.command,
        q: cli.q,
        ell: cli.ell,
        n: cli.n,
        d: cli.d,
        cache_dir: cli.cache_dir,
        max_group_order: cli.max_group_order,
        t_count: cli.t_count,
    };
    let report = run(&cfg);
    match cli.out {
        OutputFormat::Json => print!("{}", report.to_json()),
        OutputFormat::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}
