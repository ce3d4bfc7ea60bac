//! Shared graphs for the integration suites.
#![allow(dead_code)] // each test target compiles its own subset

use lpbound::graph::{Graph, PairRef};
use rand::rngs::StdRng;
use rand::Rng;
use rand::SeedableRng;

/// Six-node residual graph: hub 3 joined to everything, pendant 0, plus
/// edges 2-5 and 1-4. Its automorphism group has order 8 and its eight
/// non-edges fall into two orbits of four.
pub fn fig_residual() -> Graph {
    Graph::from_edges(
        6,
        false,
        false,
        [(2, 5), (5, 3), (3, 2), (3, 0), (3, 1), (3, 4), (4, 1)],
    )
    .unwrap()
}

/// The residual graph plus its three held-out edges 0-1, 0-4, 4-5.
pub fn fig_full() -> Graph {
    let mut edges = fig_residual().edges().to_vec();
    edges.extend([(0, 1), (0, 4), (4, 5)]);
    Graph::from_edges(6, false, false, edges).unwrap()
}

pub fn fig_positives() -> Vec<PairRef> {
    vec![
        PairRef::new(0, 1, false),
        PairRef::new(0, 4, false),
        PairRef::new(4, 5, false),
    ]
}

/// Erdos-Renyi G(n, p), seeded.
pub fn er_gnp(n: usize, p: f64, directed: bool, self_loops: bool, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a == b && !self_loops {
                continue;
            }
            if !directed && b < a {
                continue;
            }
            if rng.gen::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, directed, self_loops, edges).unwrap()
}

/// Erdos-Renyi G(n, m) with an exact edge count, seeded.
pub fn er_gnm(n: usize, m: usize, directed: bool, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut set = std::collections::BTreeSet::new();
    while set.len() < m {
        let a = rng.gen_range(0..n as u32);
        let b = rng.gen_range(0..n as u32);
        if a == b {
            continue;
        }
        let pair = PairRef::new(a, b, directed);
        set.insert((pair.a, pair.b));
    }
    Graph::from_edges(n, directed, false, set).unwrap()
}

/// Structured plus random graphs with at most 8 nodes: small enough for the
/// brute-force n! oracles.
pub fn brute_corpus() -> Vec<(String, Graph)> {
    let mut graphs: Vec<(String, Graph)> = vec![
        (
            "path_p3".into(),
            Graph::from_edges(3, false, false, [(0, 1), (1, 2)]).unwrap(),
        ),
        (
            "cycle_c4".into(),
            Graph::from_edges(4, false, false, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        ),
        (
            "cycle_c6".into(),
            Graph::from_edges(
                6,
                false,
                false,
                [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
            )
            .unwrap(),
        ),
        (
            "star_s5".into(),
            Graph::from_edges(6, false, false, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap(),
        ),
        ("fig_residual".into(), fig_residual()),
        ("fig_full".into(), fig_full()),
        (
            "directed_2cycle".into(),
            Graph::from_edges(2, true, false, [(0, 1), (1, 0)]).unwrap(),
        ),
        (
            "directed_3cycle".into(),
            Graph::from_edges(3, true, false, [(0, 1), (1, 2), (2, 0)]).unwrap(),
        ),
        (
            "directed_path4".into(),
            Graph::from_edges(4, true, false, [(0, 1), (1, 2), (2, 3)]).unwrap(),
        ),
        (
            "directed_selfloops".into(),
            Graph::from_edges(4, true, true, [(0, 0), (0, 1), (1, 2), (2, 2), (2, 3)]).unwrap(),
        ),
        (
            "undirected_selfloops".into(),
            Graph::from_edges(5, false, true, [(0, 0), (0, 1), (1, 2), (3, 3), (3, 4)]).unwrap(),
        ),
    ];
    for n in 4..=8usize {
        for seed in 0..8u64 {
            graphs.push((
                format!("er_u_n{n}_s{seed}"),
                er_gnp(n, 0.4, false, false, 1000 + n as u64 * 100 + seed),
            ));
        }
    }
    for n in 4..=7usize {
        for seed in 0..6u64 {
            graphs.push((
                format!("er_d_n{n}_s{seed}"),
                er_gnp(n, 0.3, true, false, 2000 + n as u64 * 100 + seed),
            ));
        }
    }
    for n in 5..=7usize {
        for seed in 0..3u64 {
            graphs.push((
                format!("er_dl_n{n}_s{seed}"),
                er_gnp(n, 0.3, true, true, 3000 + n as u64 * 100 + seed),
            ));
        }
    }
    graphs
}

/// Medium graphs (up to ~25 nodes) for the invariance and chain suites.
pub fn medium_corpus() -> Vec<(String, Graph)> {
    vec![
        ("fig_full".into(), fig_full()),
        ("er_u12".into(), er_gnp(12, 0.3, false, false, 41)),
        ("er_u20".into(), er_gnp(20, 0.2, false, false, 42)),
        ("er_u25_sparse".into(), er_gnp(25, 0.1, false, false, 43)),
        ("er_d12".into(), er_gnp(12, 0.2, true, false, 44)),
        ("er_d18".into(), er_gnp(18, 0.12, true, false, 45)),
        ("er_dl10".into(), er_gnp(10, 0.25, true, true, 46)),
    ]
}

/// Dataset file fallback: `$LPBOUND_DATA_DIR` or `<workspace>/data`.
pub fn data_file(name: &str) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os("LPBOUND_DATA_DIR")
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| {
            std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("../..")
                .join("data")
        });
    let path = dir.join(name);
    path.exists().then_some(path)
}
