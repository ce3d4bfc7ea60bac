//! Equivalence cells of non-edges: global automorphism orbits (k = infinity)
//! and k-hop canonical classes, plus positive/negative labeling.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::canon::{
    automorphism_generators, canonical_code, color_refine, pair_orbits, partition_invariant,
    Coloring, StableHasher,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, HopMode, PairRef};
use crate::metrics::{Cell, LabeledCells};

/// How a partition's cells were keyed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    /// Orbits of non-edges under the full automorphism group.
    Global,
    /// Equal endpoint-colored canonical codes of k-hop neighborhoods.
    Khop { k: u32 },
    /// Profiling only: k-hop cells keyed by a color-refinement digest
    /// instead of an exact canonical code.
    KhopApproxWl { k: u32 },
}

/// A partition of the non-edge universe into equivalence cells. Blocks are
/// disjoint, exhaustive, and deterministically ordered by key.
#[derive(Clone, Debug)]
pub struct CellPartition {
    mode: PartitionMode,
    pairs: Vec<PairRef>,
    blocks: Vec<Vec<u32>>,
    key_hex: Vec<String>,
}

impl CellPartition {
    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    /// The designated pair universe, in lexicographic order.
    pub fn pairs(&self) -> &[PairRef] {
        &self.pairs
    }

    /// Blocks as ascending index lists into `pairs`.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_key_hex(&self, block: usize) -> &str {
        &self.key_hex[block]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Multiset of block sizes, descending. Relabeling-invariant.
    pub fn block_size_multiset(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Block index containing each pair; inverse of `blocks`.
    pub fn block_of_pairs(&self) -> Vec<u32> {
        let mut owner = vec![0u32; self.pairs.len()];
        for (bi, block) in self.blocks.iter().enumerate() {
            for &i in block {
                owner[i as usize] = bi as u32;
            }
        }
        owner
    }

    fn assert_valid(&self) {
        let mut seen = vec![false; self.pairs.len()];
        let mut covered = 0usize;
        for block in &self.blocks {
            assert!(!block.is_empty(), "empty partition block");
            for &i in block {
                assert!(!seen[i as usize], "pair appears in two blocks");
                seen[i as usize] = true;
                covered += 1;
            }
        }
        assert_eq!(covered, self.pairs.len(), "partition does not cover universe");
        assert_eq!(self.blocks.len(), self.key_hex.len());
    }

    /// Audit dump: CSV with columns `pair_a, pair_b, block_key_hex`,
    /// using the graph's external node labels.
    pub fn write_dump<W: Write>(&self, g: &Graph, mut w: W) -> std::io::Result<()> {
        writeln!(w, "pair_a,pair_b,block_key_hex")?;
        for (bi, block) in self.blocks.iter().enumerate() {
            for &i in block {
                let p = self.pairs[i as usize];
                writeln!(
                    w,
                    "{},{},{}",
                    g.label(p.a),
                    g.label(p.b),
                    self.key_hex[bi]
                )?;
            }
        }
        Ok(())
    }
}

/// Partition the non-edges of the residual graph `h` into automorphism
/// orbits: one group computation, then union-find closure over the pairs.
pub fn global_orbit_partition(h: &Graph) -> Result<CellPartition> {
    let gens = automorphism_generators(h, &Coloring::uniform(h.node_count()))?;
    let pairs: Vec<PairRef> = h.non_edges().collect();
    let blocks = pair_orbits(h, &gens, &pairs)?;
    let key_hex = blocks
        .iter()
        .map(|b| {
            let rep = pairs[b[0] as usize];
            format!("{:08x}{:08x}", rep.a, rep.b)
        })
        .collect();
    let part = CellPartition {
        mode: PartitionMode::Global,
        pairs,
        blocks,
        key_hex,
    };
    part.assert_valid();
    Ok(part)
}

/// Partition the non-edges of `h` by the endpoint-colored canonical code of
/// their k-hop neighborhood subgraphs. Exact codes arbitrate equality; the
/// 64-bit digest only buckets.
pub fn khop_partition(h: &Graph, k: usize, hop_mode: HopMode) -> Result<CellPartition> {
    assert!(k >= 1, "khop partition requires k >= 1");
    let pairs: Vec<PairRef> = h.non_edges().collect();
    let hood = NeighborhoodIndex::build(h, k, hop_mode);

    // Chunked so transient per-pair data stays bounded. Extracted
    // neighborhoods repeat heavily (identical relabeled subgraph and
    // endpoint marks), so the canonical search runs once per distinct
    // input; the cache maps input bytes to the final cell key.
    let mut groups: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    let mut cache: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    let chunk = 1 << 16;
    let mut start = 0usize;
    while start < pairs.len() {
        let end = (start + chunk).min(pairs.len());
        let inputs: Vec<Vec<u8>> = pairs[start..end]
            .par_iter()
            .map(|&pair| khop_input_key(h, &hood, pair))
            .collect();

        let mut fresh: Vec<(Vec<u8>, PairRef)> = Vec::new();
        {
            let mut seen: std::collections::HashSet<&[u8]> = std::collections::HashSet::new();
            for (off, input) in inputs.iter().enumerate() {
                if !cache.contains_key(input) && seen.insert(input.as_slice()) {
                    fresh.push((input.clone(), pairs[start + off]));
                }
            }
        }
        let computed: Vec<Result<Vec<u8>>> = fresh
            .par_iter()
            .map(|&(_, pair)| khop_cell_key(h, &hood, pair))
            .collect();
        for ((input, _), key) in fresh.into_iter().zip(computed) {
            cache.insert(input, key?);
        }
        for (off, input) in inputs.into_iter().enumerate() {
            let key = cache.get(&input).expect("every input cached above");
            match groups.get_mut(key) {
                Some(block) => block.push((start + off) as u32),
                None => {
                    groups.insert(key.clone(), vec![(start + off) as u32]);
                }
            }
        }
        start = end;
    }

    let part = assemble_keyed(PartitionMode::Khop { k: k as u32 }, pairs, groups);
    part.assert_valid();
    Ok(part)
}

/// Profiling-only variant: cells keyed by a color-refinement digest of the
/// endpoint-colored neighborhood. Possibly coarser than the exact partition;
/// never used in acceptance runs.
pub fn khop_partition_approx_wl(h: &Graph, k: usize, hop_mode: HopMode) -> Result<CellPartition> {
    assert!(k >= 1, "khop partition requires k >= 1");
    let pairs: Vec<PairRef> = h.non_edges().collect();
    let hood = NeighborhoodIndex::build(h, k, hop_mode);

    let digests: Vec<u64> = pairs
        .par_iter()
        .map(|&pair| {
            let (sub, pos_a, pos_b) = extract_neighborhood(h, &hood, pair);
            let init = endpoint_coloring(&sub, pos_a, pos_b);
            let refined = color_refine(&sub, &init);
            let cells: Vec<Vec<u32>> = {
                let mut cells = vec![Vec::new(); refined.num_colors() as usize];
                for v in 0..sub.node_count() as u32 {
                    cells[refined.color(v) as usize].push(v);
                }
                cells
            };
            let mut hasher = StableHasher::new();
            hasher.write_u64(if pair.is_self_pair() { 1 } else { 0 });
            hasher.write_u64(sub.node_count() as u64);
            hasher.write_u64(partition_invariant(&sub, &refined, &cells));
            hasher.finish()
        })
        .collect();

    let mut groups: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    for (i, d) in digests.into_iter().enumerate() {
        groups.entry(d.to_le_bytes().to_vec()).or_default().push(i as u32);
    }
    let part = assemble_keyed(PartitionMode::KhopApproxWl { k: k as u32 }, pairs, groups);
    part.assert_valid();
    Ok(part)
}

fn assemble_keyed(
    mode: PartitionMode,
    pairs: Vec<PairRef>,
    groups: HashMap<Vec<u8>, Vec<u32>>,
) -> CellPartition {
    let mut entries: Vec<(Vec<u8>, Vec<u32>)> = groups.into_iter().collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut blocks = Vec::with_capacity(entries.len());
    let mut key_hex = Vec::with_capacity(entries.len());
    let mut prev_digest: Option<u64> = None;
    let mut collision_run = 0usize;
    for (key, mut block) in entries {
        let mut h = StableHasher::new();
        h.write_bytes(&key);
        let digest = h.finish();
        // distinct keys sharing a digest get a deterministic suffix
        if prev_digest == Some(digest) {
            collision_run += 1;
            key_hex.push(format!("{digest:016x}-{collision_run}"));
        } else {
            collision_run = 0;
            key_hex.push(format!("{digest:016x}"));
        }
        prev_digest = Some(digest);
        block.sort_unstable();
        blocks.push(block);
    }
    CellPartition {
        mode,
        pairs,
        blocks,
        key_hex,
    }
}

/// Per-node k-hop node sets, precomputed once per residual graph.
struct NeighborhoodIndex {
    sets: Vec<Vec<u32>>,
}

impl NeighborhoodIndex {
    fn build(g: &Graph, k: usize, hop_mode: HopMode) -> Self {
        let n = g.node_count();
        let sets = (0..n as u32)
            .into_par_iter()
            .map(|v| g.khop_nodes(PairRef { a: v, b: v }, k, hop_mode))
            .collect();
        NeighborhoodIndex { sets }
    }

    /// Sorted union of the two endpoints' k-hop sets.
    fn pair_nodes(&self, pair: PairRef) -> Vec<u32> {
        let (xs, ys) = (&self.sets[pair.a as usize], &self.sets[pair.b as usize]);
        let mut out = Vec::with_capacity(xs.len() + ys.len());
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            match xs[i].cmp(&ys[j]) {
                std::cmp::Ordering::Less => {
                    out.push(xs[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(ys[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(xs[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&xs[i..]);
        out.extend_from_slice(&ys[j..]);
        out
    }
}

fn extract_neighborhood(
    h: &Graph,
    hood: &NeighborhoodIndex,
    pair: PairRef,
) -> (Graph, u32, u32) {
    let nodes = hood.pair_nodes(pair);
    let (sub, map) = h.induced_subgraph(&nodes);
    let pos_a = map.binary_search(&pair.a).expect("endpoint in own neighborhood") as u32;
    let pos_b = map.binary_search(&pair.b).expect("endpoint in own neighborhood") as u32;
    (sub, pos_a, pos_b)
}

/// Endpoint colors per the canonical rule: undirected pairs share one
/// endpoint color; directed pairs distinguish source and target. Values are
/// compacted order-preservingly.
fn endpoint_coloring(sub: &Graph, pos_a: u32, pos_b: u32) -> Coloring {
    let mut values = vec![0u32; sub.node_count()];
    if sub.directed() && pos_a != pos_b {
        values[pos_a as usize] = 1;
        values[pos_b as usize] = 2;
    } else {
        values[pos_a as usize] = 1;
        values[pos_b as usize] = 1;
    }
    Coloring::from_classes(&values)
}

/// Cell key for one non-edge: a self-pair tag byte plus the exact canonical
/// code of the endpoint-colored neighborhood.
fn khop_cell_key(h: &Graph, hood: &NeighborhoodIndex, pair: PairRef) -> Result<Vec<u8>> {
    let (sub, pos_a, pos_b) = extract_neighborhood(h, hood, pair);
    let init = endpoint_coloring(&sub, pos_a, pos_b);
    let code = canonical_code(&sub, &init)?;
    let mut key = Vec::with_capacity(1 + code.code.len());
    key.push(if pair.is_self_pair() { b'S' } else { b'N' });
    key.extend_from_slice(&code.code);
    Ok(key)
}

/// Literal bytes of the canonicalization input for one non-edge: the
/// relabeled neighborhood edge list plus the endpoint marks. Two pairs with
/// equal input bytes get the same cell key without a second search.
fn khop_input_key(h: &Graph, hood: &NeighborhoodIndex, pair: PairRef) -> Vec<u8> {
    let (sub, pos_a, pos_b) = extract_neighborhood(h, hood, pair);
    // undirected endpoint marks are symmetric in the pair order
    let (lo, hi) = if sub.directed() || pos_a <= pos_b {
        (pos_a, pos_b)
    } else {
        (pos_b, pos_a)
    };
    let mut key = Vec::with_capacity(14 + 8 * sub.edge_count());
    key.push(if pair.is_self_pair() { b'S' } else { b'N' });
    key.push(if sub.directed() { b'D' } else { b'U' });
    key.extend((sub.node_count() as u32).to_le_bytes());
    key.extend(lo.to_le_bytes());
    key.extend(hi.to_le_bytes());
    for &(a, b) in sub.edges() {
        key.extend(a.to_le_bytes());
        key.extend(b.to_le_bytes());
    }
    key
}

/// Count positives and negatives per block, preserving block order.
/// Every positive must lie in the partition's pair universe.
pub fn label_cells(part: &CellPartition, positives: &[PairRef]) -> Result<LabeledCells> {
    let pairs = part.pairs();
    debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    let mut is_positive = vec![false; pairs.len()];
    for pos in positives {
        match pairs.binary_search(pos) {
            Ok(i) if !is_positive[i] => is_positive[i] = true,
            Ok(_) => {
                return Err(Error::Inconsistent(format!(
                    "duplicate positive ({},{})",
                    pos.a, pos.b
                )))
            }
            Err(_) => {
                return Err(Error::Inconsistent(format!(
                    "positive ({},{}) is not in the partition universe",
                    pos.a, pos.b
                )))
            }
        }
    }
    let cells = part
        .blocks()
        .iter()
        .map(|block| {
            let p = block.iter().filter(|&&i| is_positive[i as usize]).count() as u64;
            Cell {
                p,
                n: block.len() as u64 - p,
            }
        })
        .collect();
    LabeledCells::new(cells)
}
