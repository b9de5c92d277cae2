//! Pipelines, configuration and reports for the `tiler` binary.

pub mod config;
pub mod oracle;
pub mod pipelines;
pub mod report;
pub mod sweep;

use anyhow::{Context, Result};

pub use config::{Pipeline, RunConfig};
pub use report::Report;

/// Runs one pipeline and returns its report; nothing is written to disk.
pub fn run(pipeline: Pipeline, cfg: &RunConfig) -> Result<Report> {
    cfg.validate(pipeline)?;
    let mut report = Report::new(pipeline.name());
    if let Some(seed) = cfg.seed {
        report.header("seed", seed);
    }
    report.config = cfg.source.clone();
    let graph = match &cfg.graph {
        Some(spec) => {
            let g = spec.build(&cfg.base_dir).context("building graph")?;
            report.header("graph", format!("{spec} ({} vertices, {} edges)", g.vertex_count(), g.edge_count()));
            Some(g)
        }
        None => None,
    };
    let seed = cfg.seed.unwrap_or(0);
    let need = |g: &Option<tiler_core::Graph>| g.clone().expect("validated");
    let ctx = || format!("pipeline {pipeline}");
    match pipeline {
        Pipeline::ValidateWitness => pipelines::validate_witness_pipeline(
            &need(&graph),
            cfg.validate_witness.as_ref().expect("validated"),
            &cfg.base_dir,
            &mut report,
        ),
        Pipeline::Multipack => {
            pipelines::multipack_pipeline(&need(&graph), cfg.multipack.as_ref().expect("validated"), seed, &mut report)
        }
        Pipeline::Quasitile => {
            pipelines::quasitile_pipeline(&need(&graph), cfg.quasitile.as_ref().expect("validated"), &mut report)
        }
        Pipeline::OwAudit => {
            pipelines::ow_pipeline(&need(&graph), cfg.ow_audit.as_ref().expect("validated"), seed, &mut report)
        }
        Pipeline::Cfw => pipelines::cfw_pipeline(&need(&graph), cfg.cfw.as_ref().expect("validated"), seed, &mut report),
        Pipeline::RankPartition => {
            pipelines::rank_pipeline(&need(&graph), cfg.rank_partition.as_ref().expect("validated"), seed, &mut report)
        }
        Pipeline::OracleSuite => {
            let default = config::OracleParams {
                select: vec!["all".into()],
                sweep_instances: 200,
            };
            oracle::suite(cfg.oracle_suite.as_ref().unwrap_or(&default), seed, &mut report)
        }
    }
    .with_context(ctx)?;
    Ok(report)
}
