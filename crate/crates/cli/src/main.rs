//! `lpbound`: upper bounds on topology-only link prediction.

mod manifest;
mod output;

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use lpbound::canon::{automorphism_generators, Coloring};
use lpbound::experiment::{run_experiment, ExperimentConfig};
use lpbound::graph::{load_edge_list, Graph, HopMode};
use lpbound::metrics::{
    average_precision, bound_report, downsample_negatives, parse_cells_csv, LabeledCells,
};
use lpbound::oracle::{
    aupr_numeric, best_ordering_exhaustive, brute_automorphisms, generated_group, OracleBudget,
    OrderingMetric,
};
use lpbound::partition::{global_orbit_partition, khop_partition, khop_partition_approx_wl};

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "lpbound", version, about = "Hard upper bounds on topology-only link prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized edge-removal experiment and emit bound summaries
    Bounds(BoundsArgs),
    /// Compute bounds for a standalone cells CSV ("p,n" rows)
    Metrics(MetricsArgs),
    /// Dump the non-edge partition (global orbits, or k-hop classes with --k)
    Orbits(OrbitsArgs),
    /// Brute-force audits of the closed forms
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file ("src dst [weight]"; '#'/'%' comments)
    #[arg(long)]
    graph: PathBuf,
    /// Treat edges as directed
    #[arg(long)]
    directed: bool,
    /// Enumerate self-loop pairs as candidate non-edges even if the file has
    /// no self-loops
    #[arg(long)]
    include_self_loops: bool,
    /// Follow edge direction in k-hop reachability (default: ignore it)
    #[arg(long)]
    respect_direction_in_hops: bool,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph, CliError> {
        let file = fs::File::open(&self.graph)
            .map_err(|e| CliError::input(format!("{}: {e}", self.graph.display())))?;
        let mut g = load_edge_list(BufReader::new(file), self.directed, true)
            .map_err(CliError::from_core)?;
        if self.include_self_loops {
            g = g.with_self_loop_pairs();
        }
        Ok(g)
    }

    fn hop_mode(&self) -> HopMode {
        if self.respect_direction_in_hops {
            HopMode::Forward
        } else {
            HopMode::Undirected
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Edge removal probability
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hop cap for the per-k loop
    #[arg(long, default_value_t = 16)]
    k_max: usize,
    /// Stop once the k-hop AUPR bound is within this of the global bound
    #[arg(long, default_value_t = 0.005)]
    stop_epsilon: f64,
    /// Positives-per-negative downsampling ratio (1 = one negative per
    /// positive); adds a downsampled bound column
    #[arg(long)]
    downsample: Option<f64>,
    /// Output directory for the result JSON and plot CSV
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Profiling only: key k-hop cells by a refinement digest, not exact codes
    #[arg(long)]
    approx_wl: bool,
}

#[derive(Args)]
struct MetricsArgs {
    /// Cells CSV: one "p,n" row per cell
    #[arg(long)]
    cells: PathBuf,
    /// Also report AP for the cells in file order (AP is ordering-sensitive)
    #[arg(long)]
    keep_order: bool,
    /// Downsample negatives at this positives-per-negative ratio first
    #[arg(long)]
    downsample: Option<f64>,
    /// Seed for the downsampling draw
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the scored cells (post-downsampling) back out as "p,n" rows
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitsArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Partition by k-hop neighborhood classes instead of global orbits
    #[arg(long)]
    k: Option<usize>,
    /// Profiling only: refinement-digest keys instead of exact codes
    #[arg(long)]
    approx_wl: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Enumerate all automorphisms by brute force and cross-check the search
    Autos {
        #[command(flatten)]
        graph: GraphArgs,
        /// Node budget for the n! search
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
    },
    /// Evaluate a metric under every ordering of the cells
    Orderings {
        #[arg(long)]
        cells: PathBuf,
        /// roc, aupr, or ap
        #[arg(long)]
        metric: String,
        /// Cell budget for the k! search
        #[arg(long, default_value_t = 8)]
        max_cells: usize,
    },
    /// Compare the closed-form AUPR against adaptive quadrature
    Aupr {
        #[arg(long)]
        cells: PathBuf,
    },
}

/// Exit codes: 0 success, 2 input error, 3 resource/budget, 4 degenerate.
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn input(message: String) -> Self {
        CliError { message, code: 2 }
    }

    fn from_core(e: lpbound::Error) -> Self {
        let code = if e.is_resource() {
            3
        } else if e.is_degenerate() || matches!(e, lpbound::Error::DegenerateTrial(_)) {
            4
        } else {
            2
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Orbits(args) => cmd_orbits(args),
        Command::Oracle(cmd) => cmd_oracle(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_cells(path: &Path) -> Result<LabeledCells, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_cells_csv(&text).map_err(CliError::from_core)
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let g = args.graph.load()?;
    let load_s = started.elapsed().as_secs_f64();

    let cfg = ExperimentConfig {
        removal_prob: args.p,
        trials: args.trials,
        master_seed: args.seed,
        k_max: args.k_max,
        stop_epsilon: args.stop_epsilon,
        downsample: args.downsample,
        hop_mode: args.graph.hop_mode(),
        max_redraws: 64,
        approx_wl: args.approx_wl,
    };

    let run_started = Instant::now();
    let result = run_experiment(&g, &cfg).map_err(CliError::from_core)?;
    let run_s = run_started.elapsed().as_secs_f64();

    let manifest = RunManifest::new(
        Some(&args.graph.graph),
        serde_json::to_value(&cfg).expect("config serializes"),
        started.elapsed().as_secs_f64(),
        [("load", load_s), ("run", run_s)],
    )?;

    fs::create_dir_all(&args.out)?;
    let stem = args
        .graph
        .graph
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_string());
    let json_path = args.out.join(format!("{stem}_bounds.json"));
    let csv_path = args.out.join(format!("{stem}_plot.csv"));

    output::write_bounds_json(&json_path, &manifest, &g, &args.graph.graph, &cfg, &result)?;
    output::write_plot_csv(&csv_path, &manifest, &result)?;
    output::print_summary_table(&result);
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let cells = read_cells(&args.cells)?;

    let cells_scored = match args.downsample {
        Some(ratio) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            downsample_negatives(&cells, ratio, &mut rng).map_err(CliError::from_core)?
        }
        None => cells.clone(),
    };

    let report = bound_report(&cells_scored).map_err(CliError::from_core)?;
    println!(
        "cells: {} (P={}, N={})",
        cells_scored.len(),
        cells_scored.total_positives(),
        cells_scored.total_negatives()
    );
    if let Some(ratio) = args.downsample {
        println!(
            "downsampled from N={} at ratio {ratio}",
            cells.total_negatives()
        );
    }
    println!("max_roc:         {}", report.max_roc);
    println!("max_aupr:        {}", report.max_aupr);
    println!("ap_bound:        {}", report.max_ap);
    println!("ap_sorted_order: {}", report.ap_sorted_order);
    if args.keep_order {
        let listed = average_precision(&cells_scored).map_err(CliError::from_core)?;
        println!("ap_listed_order: {listed}");
    }
    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        lpbound::metrics::write_cells_csv(&cells_scored, &mut buf)?;
        fs::write(path, buf)?;
    }
    Ok(())
}

fn cmd_orbits(args: OrbitsArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let g = args.graph.load()?;
    let part = match (args.k, args.approx_wl) {
        (None, _) => global_orbit_partition(&g).map_err(CliError::from_core)?,
        (Some(k), false) => {
            khop_partition(&g, k, args.graph.hop_mode()).map_err(CliError::from_core)?
        }
        (Some(k), true) => {
            khop_partition_approx_wl(&g, k, args.graph.hop_mode()).map_err(CliError::from_core)?
        }
    };
    let manifest = RunManifest::new(
        Some(&args.graph.graph),
        serde_json::json!({
            "mode": format!("{:?}", part.mode()),
            "k": args.k,
            "approx_wl": args.approx_wl,
        }),
        started.elapsed().as_secs_f64(),
        [],
    )?;

    let mut buf = Vec::new();
    manifest.write_comment_line(&mut buf)?;
    part.write_dump(&g, &mut buf)?;
    match &args.out {
        Some(path) => fs::write(path, &buf)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&buf)?;
        }
    }
    eprintln!(
        "{} non-edges in {} blocks",
        part.pairs().len(),
        part.block_count()
    );
    Ok(())
}

fn cmd_oracle(cmd: OracleCommand) -> Result<(), CliError> {
    match cmd {
        OracleCommand::Autos { graph, max_nodes } => {
            let g = graph.load()?;
            let budget = OracleBudget {
                max_nodes,
                ..Default::default()
            };
            let brute = brute_automorphisms(&g, &budget).map_err(CliError::from_core)?;
            println!("brute-force |Aut| = {}", brute.generators.len());

            let gens = automorphism_generators(&g, &Coloring::uniform(g.node_count()))
                .map_err(CliError::from_core)?;
            let closure = generated_group(&gens, g.node_count(), brute.generators.len() * 2 + 16)
                .map_err(CliError::from_core)?;
            println!(
                "search found {} generators; generated group order = {}",
                gens.generators.len(),
                closure.len()
            );
            let brute_set: std::collections::HashSet<&[u32]> =
                brute.generators.iter().map(|p| p.image()).collect();
            let closure_set: std::collections::HashSet<&[u32]> =
                closure.iter().map(|p| p.image()).collect();
            if brute_set == closure_set {
                println!("AGREE: generated group equals the brute-force automorphism set");
                Ok(())
            } else {
                Err(CliError::input(
                    "DISAGREE: generated group differs from brute force".into(),
                ))
            }
        }
        OracleCommand::Orderings {
            cells,
            metric,
            max_cells,
        } => {
            let cells = read_cells(&cells)?;
            let metric: OrderingMetric = metric.parse().map_err(CliError::from_core)?;
            let budget = OracleBudget {
                max_cells,
                ..Default::default()
            };
            let best =
                best_ordering_exhaustive(&cells, metric, &budget).map_err(CliError::from_core)?;
            println!("exhaustive best value = {}", best.value);
            println!("exhaustive best order = {:?}", best.order);

            let oc = lpbound::metrics::sort_cells(&cells).map_err(CliError::from_core)?;
            let sorted_value = match metric {
                OrderingMetric::Roc => lpbound::metrics::max_roc(&oc),
                OrderingMetric::Aupr => lpbound::metrics::max_aupr(&oc),
                OrderingMetric::Ap => lpbound::metrics::max_ap_bound(&oc).sorted_order_ap,
            };
            println!("density-sorted value  = {sorted_value}");
            match metric {
                OrderingMetric::Ap => {
                    if best.value > sorted_value + 1e-12 {
                        println!(
                            "NOTE: sorted order is NOT AP-optimal (gap {:.6e}); \
                             the AP upper bound is the max AUPR value",
                            best.value - sorted_value
                        );
                    } else {
                        println!("sorted order happens to be AP-optimal here");
                    }
                }
                _ => {
                    if (best.value - sorted_value).abs() <= 1e-9 {
                        println!("AGREE: sorted order attains the exhaustive maximum");
                    } else {
                        return Err(CliError::input(format!(
                            "DISAGREE: sorted {} vs exhaustive {}",
                            sorted_value, best.value
                        )));
                    }
                }
            }
            Ok(())
        }
        OracleCommand::Aupr { cells } => {
            let cells = read_cells(&cells)?;
            let oc = lpbound::metrics::sort_cells(&cells).map_err(CliError::from_core)?;
            let closed = lpbound::metrics::max_aupr(&oc);
            let numeric =
                aupr_numeric(oc.cells(), 1e-9).map_err(CliError::from_core)?;
            let delta = (closed - numeric).abs();
            println!("closed form = {closed}");
            println!("quadrature  = {numeric}");
            println!("delta       = {delta:e}");
            if delta < 1e-9 {
                println!("AGREE: delta < 1e-9");
                Ok(())
            } else {
                Err(CliError::input("DISAGREE: delta >= 1e-9".into()))
            }
        }
    }
}
