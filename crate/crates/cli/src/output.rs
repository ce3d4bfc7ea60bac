//! Artifact writers and the stdout summary table.

use std::fs;
use std::io::Write;
use std::path::Path;

use lpbound::experiment::{ExperimentConfig, ExperimentResult, LevelSummary};
use lpbound::graph::Graph;
use serde::Serialize;

use crate::manifest::RunManifest;

#[derive(Serialize)]
struct GraphInfo {
    path: String,
    nodes: usize,
    edges: usize,
    directed: bool,
    self_loops_allowed: bool,
}

#[derive(Serialize)]
struct BoundsArtifact<'a> {
    manifest: &'a RunManifest,
    graph: GraphInfo,
    config: &'a ExperimentConfig,
    trials: usize,
    redraws: usize,
    global: &'a LevelSummary,
    per_k: &'a [LevelSummary],
    trial_results: &'a [lpbound::experiment::TrialResult],
}

pub fn write_bounds_json(
    path: &Path,
    manifest: &RunManifest,
    g: &Graph,
    graph_path: &Path,
    cfg: &ExperimentConfig,
    result: &ExperimentResult,
) -> std::io::Result<()> {
    let artifact = BoundsArtifact {
        manifest,
        graph: GraphInfo {
            path: graph_path.display().to_string(),
            nodes: g.node_count(),
            edges: g.edge_count(),
            directed: g.directed(),
            self_loops_allowed: g.self_loops_allowed(),
        },
        config: cfg,
        trials: result.trials,
        redraws: result.redraws,
        global: &result.summary.global,
        per_k: &result.summary.per_k,
        trial_results: &result.trial_results,
    };
    let json = serde_json::to_string_pretty(&artifact).expect("artifact serializes");
    fs::write(path, json)
}

/// Plot data: one row per trial per k, plus the global rows with k = "inf".
pub fn write_plot_csv(
    path: &Path,
    manifest: &RunManifest,
    result: &ExperimentResult,
) -> std::io::Result<()> {
    let mut buf = Vec::new();
    manifest.write_comment_line(&mut buf)?;
    writeln!(buf, "k,trial,aupr_bound")?;
    for t in &result.trial_results {
        for kl in &t.per_k {
            writeln!(buf, "{},{},{}", kl.k, t.trial, kl.bounds.report.max_aupr)?;
        }
    }
    for t in &result.trial_results {
        writeln!(buf, "inf,{},{}", t.trial, t.global.report.max_aupr)?;
    }
    fs::write(path, buf)
}

fn fmt_metric(s: &lpbound::experiment::MetricSummary) -> String {
    match s.ci_halfwidth {
        Some(hw) => format!("{:.6} ± {:.6}", s.mean, hw),
        None => format!("{:.6} ± n/a", s.mean),
    }
}

pub fn print_summary_table(result: &ExperimentResult) {
    println!(
        "{:>8}  {:>22}  {:>22}  {:>22}  {:>7}",
        "k", "roc", "aupr", "ap_bound", "trials"
    );
    for level in &result.summary.per_k {
        println!(
            "{:>8}  {:>22}  {:>22}  {:>22}  {:>7}",
            level.k.expect("per-k level"),
            fmt_metric(&level.roc),
            fmt_metric(&level.aupr),
            fmt_metric(&level.ap_bound),
            level.trials_counted
        );
    }
    let g = &result.summary.global;
    println!(
        "{:>8}  {:>22}  {:>22}  {:>22}  {:>7}",
        "global",
        fmt_metric(&g.roc),
        fmt_metric(&g.aupr),
        fmt_metric(&g.ap_bound),
        g.trials_counted
    );
    if let Some(ds) = &g.downsampled {
        println!(
            "{:>8}  {:>22}  {:>22}  {:>22}  {:>7}",
            "glob-ds",
            fmt_metric(&ds.roc),
            fmt_metric(&ds.aupr),
            fmt_metric(&ds.ap_bound),
            g.trials_counted
        );
    }
    if result.redraws > 0 {
        println!("degenerate redraws: {}", result.redraws);
    }
}
