use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use tiler_cli::{run, Pipeline, RunConfig};

/// Følner tilings, tight multipackings and hyperfinite sequences on finite
/// graphs.
#[derive(Parser, Debug)]
#[command(name = "tiler", version)]
struct Args {
    pipeline: Pipeline,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the report and artifacts; overrides `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<bool> {
    let mut cfg = RunConfig::load(&args.config)?;
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    let out = args.out.clone().or_else(|| cfg.out.as_ref().map(|o| cfg.base_dir.join(o)));
    let start = Instant::now();
    let report = run(args.pipeline, &cfg)?;
    let text = report.render();
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        std::fs::write(dir.join("report.txt"), &text).context("writing report")?;
        for a in &report.artifacts {
            std::fs::write(dir.join(&a.file), &a.contents).with_context(|| format!("writing {}", a.file))?;
        }
    }
    eprintln!("wall-clock: {:.3} s", start.elapsed().as_secs_f64());
    Ok(report.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
