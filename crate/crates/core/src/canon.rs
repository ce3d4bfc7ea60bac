//! Canonical forms, automorphism generators, and orbit computation for
//! vertex-colored graphs, via individualization-refinement search.
//!
//! Codes are exact: the 64-bit digest indexes buckets, the full byte code
//! is the arbiter of equality.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, PairRef, Permutation};

/// Node cap for exact canonicalization. Experiment-scale neighborhoods are
/// far below this.
pub const DEFAULT_NODE_CAP: usize = 100_000;

/// A node coloring with contiguous color classes `0..num_colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    num_colors: u32,
}

impl Coloring {
    /// All nodes share one class.
    pub fn uniform(n: usize) -> Self {
        Coloring {
            colors: vec![0; n],
            num_colors: if n == 0 { 0 } else { 1 },
        }
    }

    /// Build from arbitrary class values, compacting them order-preservingly
    /// (ascending input values map to 0, 1, ...).
    pub fn from_classes(values: &[u32]) -> Self {
        let mut distinct: Vec<u32> = values.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let colors = values
            .iter()
            .map(|v| distinct.binary_search(v).unwrap() as u32)
            .collect();
        Coloring {
            colors,
            num_colors: distinct.len() as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, v: u32) -> u32 {
        self.colors[v as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn is_discrete(&self) -> bool {
        self.num_colors as usize == self.colors.len()
    }

    /// Coloring consistent with relabeling by `pi`: node `pi(v)` gets the
    /// color `v` had here.
    pub fn permuted(&self, pi: &Permutation) -> Coloring {
        let mut colors = vec![0u32; self.colors.len()];
        for (v, &c) in self.colors.iter().enumerate() {
            colors[pi.apply(v as u32) as usize] = c;
        }
        Coloring {
            colors,
            num_colors: self.num_colors,
        }
    }

    /// Cells in color order; nodes within a cell in ascending id order.
    fn cells(&self) -> Vec<Vec<u32>> {
        let mut cells = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(v as u32);
        }
        cells
    }
}

/// Deterministic FNV-1a, used for digests and search invariants.
/// Never the arbiter of equality.
#[derive(Clone, Copy)]
pub(crate) struct StableHasher(u64);

impl StableHasher {
    pub(crate) fn new() -> Self {
        StableHasher(0xcbf2_9ce4_8422_2325)
    }

    #[inline]
    pub(crate) fn write_u64(&mut self, v: u64) {
        for byte in v.to_le_bytes() {
            self.0 ^= byte as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn write_bytes(&mut self, bytes: &[u8]) {
        for &byte in bytes {
            self.0 ^= byte as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn finish(self) -> u64 {
        self.0
    }
}

/// Coarsest stable refinement of `init`: two nodes share a final color iff
/// they shared an initial color and have identical neighbor-color multisets
/// (in- and out-multisets separately for directed graphs). Idempotent and
/// equivariant under relabeling.
pub fn color_refine(g: &Graph, init: &Coloring) -> Coloring {
    assert_eq!(init.len(), g.node_count());
    let n = g.node_count();
    if n == 0 {
        return init.clone();
    }
    let mut current = init.clone();
    // Per-round signature: current color, then the sorted neighbor-color
    // multiset(s), with degrees included so differing lengths cannot alias.
    // One shared buffer; nodes are compared by their spans.
    let mut buf: Vec<u32> = Vec::new();
    let mut spans: Vec<(u32, u32)> = Vec::with_capacity(n);
    let mut order: Vec<u32> = Vec::with_capacity(n);
    loop {
        buf.clear();
        spans.clear();
        for v in 0..n as u32 {
            let start = buf.len();
            buf.push(current.color(v));
            let out = g.out_neighbors(v);
            buf.push(out.len() as u32);
            let colors_at = buf.len();
            buf.extend(out.iter().map(|&w| current.color(w)));
            buf[colors_at..].sort_unstable();
            if g.directed() {
                let inn = g.in_neighbors(v);
                buf.push(inn.len() as u32);
                let colors_at = buf.len();
                buf.extend(inn.iter().map(|&w| current.color(w)));
                buf[colors_at..].sort_unstable();
            }
            spans.push((start as u32, (buf.len() - start) as u32));
        }
        let sig = |v: u32| -> &[u32] {
            let (s, l) = spans[v as usize];
            &buf[s as usize..(s + l) as usize]
        };
        order.clear();
        order.extend(0..n as u32);
        order.sort_unstable_by(|&a, &b| sig(a).cmp(sig(b)));

        let mut colors = vec![0u32; n];
        let mut next = 0u32;
        for i in 0..n {
            if i > 0 && sig(order[i]) != sig(order[i - 1]) {
                next += 1;
            }
            colors[order[i] as usize] = next;
        }
        let refined = Coloring {
            colors,
            num_colors: next + 1,
        };
        if refined.num_colors == current.num_colors {
            return refined;
        }
        current = refined;
    }
}

/// Split `v` out of its class, placing the singleton immediately before the
/// remainder of the class.
fn individualize(coloring: &Coloring, v: u32) -> Coloring {
    let cv = coloring.color(v);
    let colors = coloring
        .colors()
        .iter()
        .enumerate()
        .map(|(u, &c)| {
            if c < cv {
                c
            } else if u as u32 == v {
                cv
            } else if c == cv {
                cv + 1
            } else {
                c + 1
            }
        })
        .collect();
    Coloring {
        colors,
        num_colors: coloring.num_colors + 1,
    }
}

/// Isomorphism-invariant fingerprint of a stable ordered coloring: cell
/// sizes plus the quotient adjacency counts taken from one representative
/// per cell (well defined because the coloring is equitable).
pub(crate) fn partition_invariant(g: &Graph, coloring: &Coloring, cells: &[Vec<u32>]) -> u64 {
    let mut h = StableHasher::new();
    h.write_u64(cells.len() as u64);
    for cell in cells {
        h.write_u64(cell.len() as u64);
        let rep = cell[0];
        let mut counts: Vec<(u32, u32)> = Vec::new();
        count_by_color(coloring, g.out_neighbors(rep), &mut counts);
        for &(c, k) in &counts {
            h.write_u64(((c as u64) << 32) | k as u64);
        }
        if g.directed() {
            h.write_u64(u64::MAX);
            count_by_color(coloring, g.in_neighbors(rep), &mut counts);
            for &(c, k) in &counts {
                h.write_u64(((c as u64) << 32) | k as u64);
            }
        }
        h.write_u64(u64::MAX - 1);
    }
    h.finish()
}

fn count_by_color(coloring: &Coloring, nbrs: &[u32], out: &mut Vec<(u32, u32)>) {
    out.clear();
    for &w in nbrs {
        let c = coloring.color(w);
        match out.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => out[i].1 += 1,
            Err(i) => out.insert(i, (c, 1)),
        }
    }
}

/// A byte sequence uniquely representing a colored-graph isomorphism class,
/// plus a digest for fast grouping.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    pub code: Vec<u8>,
    pub hash64: u64,
}

impl CanonicalCode {
    fn from_bytes(code: Vec<u8>) -> Self {
        let mut h = StableHasher::new();
        h.write_bytes(&code);
        let hash64 = h.finish();
        CanonicalCode { code, hash64 }
    }
}

/// Automorphism generators discovered by the search. The generated group
/// equals the color-preserving automorphism group.
#[derive(Clone, Debug, Default)]
pub struct GeneratorSet {
    pub generators: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn identity_only() -> Self {
        GeneratorSet {
            generators: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Canonical code of the colored graph `(g, init)`. Relabeling `g` (with a
/// consistently permuted `init`) leaves the code unchanged; non-isomorphic
/// colored graphs yield different codes.
pub fn canonical_code(g: &Graph, init: &Coloring) -> Result<CanonicalCode> {
    Ok(canonicalize(g, init)?.0)
}

/// Generators of the color-preserving automorphism group of `(g, init)`.
pub fn automorphism_generators(g: &Graph, init: &Coloring) -> Result<GeneratorSet> {
    Ok(canonicalize(g, init)?.1)
}

/// One search pass computing both the canonical code and the automorphism
/// generators.
pub fn canonicalize(g: &Graph, init: &Coloring) -> Result<(CanonicalCode, GeneratorSet)> {
    if g.node_count() > DEFAULT_NODE_CAP {
        return Err(Error::NodeCapExceeded {
            nodes: g.node_count(),
            cap: DEFAULT_NODE_CAP,
        });
    }
    assert_eq!(init.len(), g.node_count());
    let mut search = Search {
        g,
        init,
        first: None,
        best: None,
        gens: Vec::new(),
        gen_seen: HashMap::new(),
    };
    let root = color_refine(g, init);
    let cells = root.cells();
    let inv = partition_invariant(g, &root, &cells);
    let mut fixed = Vec::new();
    search.descend(root, cells, vec![inv], &mut fixed, true, true)?;
    let best = search.best.expect("search yields at least one leaf");
    Ok((
        CanonicalCode::from_bytes(best.code),
        GeneratorSet {
            generators: search.gens,
        },
    ))
}

struct Leaf {
    inv_path: Vec<u64>,
    code: Vec<u8>,
    order: Vec<u32>, // node at each canonical position
}

struct Search<'g> {
    g: &'g Graph,
    init: &'g Coloring,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Permutation>,
    gen_seen: HashMap<Vec<u32>, ()>,
}

impl<'g> Search<'g> {
    /// Explore the node given by a stable `coloring` (cells precomputed) and
    /// the invariant path leading here. `tied` means the invariant path
    /// matches the current best leaf's prefix; `on_first` that it matches
    /// the first leaf's prefix.
    fn descend(
        &mut self,
        coloring: Coloring,
        cells: Vec<Vec<u32>>,
        inv_path: Vec<u64>,
        fixed: &mut Vec<u32>,
        tied: bool,
        on_first: bool,
    ) -> Result<()> {
        if coloring.is_discrete() {
            return self.handle_leaf(&coloring, inv_path);
        }

        // Target cell: first smallest non-singleton class.
        let smallest = cells
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.len())
            .min()
            .expect("non-discrete coloring has a non-singleton cell");
        let target = cells
            .iter()
            .position(|c| c.len() == smallest)
            .expect("cell with minimal size exists");

        let n = self.g.node_count();
        let mut orbit = UnionFind::new(n);
        let mut gens_applied = 0;
        let mut tried: Vec<u32> = Vec::new();

        let candidates = cells[target].clone();
        for v in candidates {
            // Fold in any automorphisms (old or newly found) that fix the
            // individualized prefix pointwise; skip candidates equivalent
            // to an already-explored sibling under them.
            while gens_applied < self.gens.len() {
                let gen = &self.gens[gens_applied];
                if fixed.iter().all(|&u| gen.apply(u) == u) {
                    for u in 0..n as u32 {
                        orbit.union(u, gen.apply(u));
                    }
                }
                gens_applied += 1;
            }
            if tried.iter().any(|&u| orbit.same(u, v)) {
                continue;
            }
            tried.push(v);

            let child = color_refine(self.g, &individualize(&coloring, v));
            let child_cells = child.cells();
            let child_inv = partition_invariant(self.g, &child, &child_cells);
            let pos = inv_path.len();

            let child_on_first = match &self.first {
                None => true,
                Some(f) => on_first && f.inv_path.get(pos) == Some(&child_inv),
            };
            let (explore_for_best, child_tied) = match &self.best {
                None => (true, true),
                Some(_) if !tied => (false, false),
                Some(b) => match b.inv_path.get(pos) {
                    Some(&bi) if child_inv < bi => (false, false),
                    Some(&bi) if child_inv == bi => (true, true),
                    _ => {
                        // Everything below dominates the current best.
                        self.best = None;
                        (true, true)
                    }
                },
            };
            if !explore_for_best && !child_on_first {
                continue;
            }

            let mut child_path = inv_path.clone();
            child_path.push(child_inv);
            fixed.push(v);
            self.descend(child, child_cells, child_path, fixed, child_tied, child_on_first)?;
            fixed.pop();
        }
        Ok(())
    }

    fn handle_leaf(&mut self, coloring: &Coloring, inv_path: Vec<u64>) -> Result<()> {
        let n = self.g.node_count();
        let mut order = vec![0u32; n];
        for v in 0..n as u32 {
            order[coloring.color(v) as usize] = v;
        }
        let code = encode_leaf(self.g, self.init, &order);
        let leaf = Leaf {
            inv_path,
            code,
            order,
        };

        match &self.first {
            None => {
                self.best = Some(Leaf {
                    inv_path: leaf.inv_path.clone(),
                    code: leaf.code.clone(),
                    order: leaf.order.clone(),
                });
                self.first = Some(leaf);
                return Ok(());
            }
            Some(f) if f.code == leaf.code => {
                let gamma = alignment(&f.order, &leaf.order);
                self.record_generator(gamma)?;
            }
            _ => {
                if let Some(b) = &self.best {
                    if b.code == leaf.code {
                        let gamma = alignment(&b.order, &leaf.order);
                        self.record_generator(gamma)?;
                    }
                }
            }
        }

        let better = match &self.best {
            None => true,
            Some(b) => (&leaf.inv_path, &leaf.code) > (&b.inv_path, &b.code),
        };
        if better {
            self.best = Some(leaf);
        }
        Ok(())
    }

    fn record_generator(&mut self, gamma: Permutation) -> Result<()> {
        if gamma.is_identity() || self.gen_seen.contains_key(gamma.image()) {
            return Ok(());
        }
        if !gamma.is_automorphism(self.g) {
            return Err(Error::NotAnAutomorphism);
        }
        debug_assert!((0..self.g.node_count() as u32)
            .all(|v| self.init.color(gamma.apply(v)) == self.init.color(v)));
        self.gen_seen.insert(gamma.image().to_vec(), ());
        self.gens.push(gamma);
        Ok(())
    }
}

/// Permutation sending `from[i]` to `to[i]` for every position `i`.
fn alignment(from: &[u32], to: &[u32]) -> Permutation {
    let mut image = vec![0u32; from.len()];
    for (i, &src) in from.iter().enumerate() {
        image[src as usize] = to[i];
    }
    Permutation::new(image).expect("two labelings align to a bijection")
}

/// Byte encoding of the graph relabeled by `order` (node at position i gets
/// id i): mode tag, node count, initial colors by position, sorted relabeled
/// edge list.
fn encode_leaf(g: &Graph, init: &Coloring, order: &[u32]) -> Vec<u8> {
    let n = g.node_count();
    let mut pos = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let p = PairRef::new(pos[a as usize], pos[b as usize], g.directed());
            (p.a, p.b)
        })
        .collect();
    edges.sort_unstable();

    let mut bytes = Vec::with_capacity(9 + 4 * n + 8 * edges.len());
    bytes.push(if g.directed() { b'D' } else { b'U' });
    bytes.extend((n as u32).to_le_bytes());
    for &v in order {
        bytes.extend(init.color(v).to_le_bytes());
    }
    bytes.extend((edges.len() as u32).to_le_bytes());
    for (a, b) in edges {
        bytes.extend(a.to_le_bytes());
        bytes.extend(b.to_le_bytes());
    }
    bytes
}

/// Partition `pairs` into orbits under the group generated by `gens`.
/// Blocks are reported as ascending index lists, ordered by smallest member.
pub fn pair_orbits(g: &Graph, gens: &GeneratorSet, pairs: &[PairRef]) -> Result<Vec<Vec<u32>>> {
    for gen in &gens.generators {
        if !gen.is_automorphism(g) {
            return Err(Error::NotAnAutomorphism);
        }
    }
    let index: HashMap<PairRef, u32> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u32))
        .collect();
    if index.len() != pairs.len() {
        return Err(Error::Inconsistent("duplicate pairs in orbit input".into()));
    }
    let mut uf = UnionFind::new(pairs.len());
    for gen in &gens.generators {
        for (i, pair) in pairs.iter().enumerate() {
            let (ga, gb) = (gen.apply(pair.a), gen.apply(pair.b));
            if ga == pair.a && gb == pair.b {
                continue;
            }
            let mapped = PairRef::new(ga, gb, g.directed());
            let j = *index.get(&mapped).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "automorphism maps ({},{}) outside the pair universe",
                    pair.a, pair.b
                ))
            })?;
            uf.union(i as u32, j);
        }
    }
    let mut blocks: HashMap<u32, Vec<u32>> = HashMap::new();
    for i in 0..pairs.len() as u32 {
        blocks.entry(uf.find(i)).or_default().push(i);
    }
    let mut out: Vec<Vec<u32>> = blocks.into_values().collect();
    out.sort_unstable_by_key(|b| b[0]);
    Ok(out)
}

/// Union-find with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub(crate) fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig_residual;
    use crate::oracle::generated_group;
    use rand::SeedableRng;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(
            n,
            false,
            false,
            (0..n as u32).map(|i| (i, (i + 1) % n as u32)),
        )
        .unwrap()
    }

    fn group_order(gens: &GeneratorSet, n: usize) -> usize {
        generated_group(gens, n, 10_000).unwrap().len()
    }

    #[test]
    fn refine_fig_residual() {
        let g = fig_residual();
        let refined = color_refine(&g, &Coloring::uniform(6));
        // classes: {a} (pendant), {b,c,e,f} (degree two), {d} (hub)
        assert_eq!(refined.num_colors(), 3);
        assert_eq!(refined.color(1), refined.color(2));
        assert_eq!(refined.color(1), refined.color(4));
        assert_eq!(refined.color(1), refined.color(5));
        assert_ne!(refined.color(0), refined.color(3));
        assert_ne!(refined.color(0), refined.color(1));
    }

    #[test]
    fn refine_vertex_transitive_stays_uniform() {
        let g = cycle(6);
        let refined = color_refine(&g, &Coloring::uniform(6));
        assert_eq!(refined.num_colors(), 1);
    }

    #[test]
    fn refine_discrete_is_fixpoint() {
        let g = cycle(4);
        let discrete = Coloring::from_classes(&[3, 1, 0, 2]);
        let refined = color_refine(&g, &discrete);
        assert_eq!(refined, discrete);
    }

    #[test]
    fn refine_idempotent() {
        let g = fig_residual();
        let once = color_refine(&g, &Coloring::uniform(6));
        let twice = color_refine(&g, &once);
        assert_eq!(once, twice);
    }

    #[test]
    fn refine_equivariant() {
        let g = fig_residual();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let pi = Permutation::random(6, &mut rng);
            let h = g.permute(&pi);
            let rg = color_refine(&g, &Coloring::uniform(6));
            let rh = color_refine(&h, &Coloring::uniform(6));
            // same classes transported through pi
            for v in 0..6u32 {
                for w in 0..6u32 {
                    assert_eq!(
                        rg.color(v) == rg.color(w),
                        rh.color(pi.apply(v)) == rh.color(pi.apply(w))
                    );
                }
            }
        }
    }

    #[test]
    fn code_invariant_under_relabeling() {
        let g = fig_residual();
        let base = canonical_code(&g, &Coloring::uniform(6)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let pi = Permutation::random(6, &mut rng);
            let h = g.permute(&pi);
            let code = canonical_code(&h, &Coloring::uniform(6)).unwrap();
            assert_eq!(code, base);
        }
    }

    #[test]
    fn code_distinguishes_non_isomorphic() {
        let p3 = Graph::from_edges(3, false, false, [(0, 1), (1, 2)]).unwrap();
        let c3 = Graph::from_edges(3, false, false, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let cp = canonical_code(&p3, &Coloring::uniform(3)).unwrap();
        let cc = canonical_code(&c3, &Coloring::uniform(3)).unwrap();
        assert_ne!(cp, cc);
    }

    #[test]
    fn code_respects_colors() {
        let g = fig_residual();
        // endpoints (a,b) vs (a,e): same orbit of the graph, so the
        // endpoint-colored codes must agree
        let ab = Coloring::from_classes(&[1, 1, 0, 0, 0, 0]);
        let ae = Coloring::from_classes(&[1, 0, 0, 0, 1, 0]);
        let code_ab = canonical_code(&g, &ab).unwrap();
        let code_ae = canonical_code(&g, &ae).unwrap();
        assert_eq!(code_ab, code_ae);
        // (a,b) vs (b,c): different orbits, different codes
        let bc = Coloring::from_classes(&[0, 1, 1, 0, 0, 0]);
        let code_bc = canonical_code(&g, &bc).unwrap();
        assert_ne!(code_ab, code_bc);
    }

    #[test]
    fn fig_group_order_eight() {
        let g = fig_residual();
        let gens = automorphism_generators(&g, &Coloring::uniform(6)).unwrap();
        assert_eq!(group_order(&gens, 6), 8);
    }

    #[test]
    fn cycle_c6_dihedral() {
        let g = cycle(6);
        let gens = automorphism_generators(&g, &Coloring::uniform(6)).unwrap();
        assert_eq!(group_order(&gens, 6), 12);
    }

    #[test]
    fn near_rigid_graphs() {
        // path 0-1-2-3 with pendant 4 on node 1: nodes 0 and 4 are twins
        let g = Graph::from_edges(5, false, false, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        let gens = automorphism_generators(&g, &Coloring::uniform(5)).unwrap();
        assert_eq!(group_order(&gens, 5), 2);

        // triangle with a two-edge tail: only the 0<->1 swap survives
        let g = Graph::from_edges(5, false, false, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
            .unwrap();
        let gens = automorphism_generators(&g, &Coloring::uniform(5)).unwrap();
        assert_eq!(group_order(&gens, 5), 2);
    }

    #[test]
    fn rigid_graph_identity_only() {
        // triangle 0-1-2 with a pendant on 0 and a two-edge tail on 1:
        // every node is distinguishable, Aut is trivial
        let g = Graph::from_edges(
            6,
            false,
            false,
            [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (4, 5)],
        )
        .unwrap();
        let gens = automorphism_generators(&g, &Coloring::uniform(6)).unwrap();
        assert_eq!(group_order(&gens, 6), 1);
        assert!(gens.is_trivial());
    }

    #[test]
    fn directed_two_cycle() {
        let g = Graph::from_edges(2, true, false, [(0, 1), (1, 0)]).unwrap();
        let gens = automorphism_generators(&g, &Coloring::uniform(2)).unwrap();
        assert_eq!(group_order(&gens, 2), 2);
    }

    #[test]
    fn pair_orbits_fig_non_edges() {
        let g = fig_residual();
        let gens = automorphism_generators(&g, &Coloring::uniform(6)).unwrap();
        let pairs: Vec<PairRef> = g.non_edges().collect();
        let blocks = pair_orbits(&g, &gens, &pairs).unwrap();
        assert_eq!(blocks.len(), 2);
        let mut sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 4]);
        // the a-incident non-edges form one orbit
        let a_block: Vec<PairRef> = blocks
            .iter()
            .find(|b| b.iter().any(|&i| pairs[i as usize].a == 0))
            .unwrap()
            .iter()
            .map(|&i| pairs[i as usize])
            .collect();
        assert!(a_block.iter().all(|p| p.a == 0));
        assert_eq!(a_block.len(), 4);
    }

    #[test]
    fn pair_orbits_identity_only() {
        let g = fig_residual();
        let pairs: Vec<PairRef> = g.non_edges().collect();
        let blocks = pair_orbits(&g, &GeneratorSet::identity_only(), &pairs).unwrap();
        assert_eq!(blocks.len(), pairs.len());
    }

    #[test]
    fn pair_orbits_c4_diagonals() {
        let g = cycle(4);
        let gens = automorphism_generators(&g, &Coloring::uniform(4)).unwrap();
        let pairs: Vec<PairRef> = g.non_edges().collect();
        assert_eq!(pairs.len(), 2);
        let blocks = pair_orbits(&g, &gens, &pairs).unwrap();
        assert_eq!(blocks.len(), 1);
    }

    #[test]
    fn pair_orbits_rejects_non_automorphism() {
        let g = fig_residual();
        let bogus = GeneratorSet {
            generators: vec![Permutation::new(vec![1, 0, 2, 4, 3, 5]).unwrap()],
        };
        let pairs: Vec<PairRef> = g.non_edges().collect();
        assert!(matches!(
            pair_orbits(&g, &bogus, &pairs),
            Err(Error::NotAnAutomorphism)
        ));
    }

    #[test]
    fn coloring_compaction_preserves_order() {
        let c = Coloring::from_classes(&[7, 2, 7, 9]);
        assert_eq!(c.colors(), &[1, 0, 1, 2]);
        assert_eq!(c.num_colors(), 3);
    }
}
