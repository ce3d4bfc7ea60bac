//! Graph representation, edge-list ingestion, non-edge enumeration,
//! k-hop neighborhoods, induced subgraphs, and label permutation.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::io::BufRead;

use crate::error::{Error, Result};

/// A node pair. For undirected use the pair is stored normalized
/// (`a <= b`); for directed use the order is significant.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairRef {
    pub a: u32,
    pub b: u32,
}

impl PairRef {
    /// Build a pair, normalizing the endpoint order when `oriented` is false.
    pub fn new(a: u32, b: u32, oriented: bool) -> Self {
        if !oriented && a > b {
            PairRef { a: b, b: a }
        } else {
            PairRef { a, b }
        }
    }

    pub fn is_self_pair(&self) -> bool {
        self.a == self.b
    }

    /// Image of this pair under a node permutation, re-normalizing when
    /// `oriented` is false.
    pub fn map(&self, perm: &Permutation, oriented: bool) -> Self {
        PairRef::new(perm.apply(self.a), perm.apply(self.b), oriented)
    }
}

/// A bijection on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::InvalidPermutation(format!(
                    "image is not a bijection on 0..{n}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// A uniformly random permutation (Fisher-Yates).
    pub fn random<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            image.swap(i, j);
        }
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        self.image[v as usize]
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { image: inv }
    }

    /// Composition `self . other`: maps `v` to `self(other(v))`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Permutation {
            image: other.image.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    /// Direct check that this permutation maps the edge set onto itself.
    pub fn is_automorphism(&self, g: &Graph) -> bool {
        if self.len() != g.node_count() {
            return false;
        }
        g.edges().iter().all(|&(a, b)| {
            let p = PairRef::new(self.apply(a), self.apply(b), g.directed());
            g.has_edge(p.a, p.b)
        })
    }
}

/// Node label table: original names from the source file, or plain dense ids.
#[derive(Clone, Debug)]
enum Labels {
    Named(Vec<String>),
    Dense,
}

/// Compressed sparse adjacency: per-node sorted neighbor ranges.
#[derive(Clone, Debug, Default)]
struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    fn build(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> Self {
        let mut offsets = vec![0u32; n + 1];
        for (src, _) in pairs.clone() {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; offsets[n] as usize];
        for (src, dst) in pairs {
            targets[cursor[src as usize] as usize] = dst;
            cursor[src as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// An immutable simple graph (directed or undirected, optional self-loops)
/// over dense node ids `0..n`.
///
/// Undirected edges are stored once, normalized low-id-first. All read
/// operations are safe for concurrent use.
#[derive(Clone, Debug)]
pub struct Graph {
    n: u32,
    directed: bool,
    self_loops_allowed: bool,
    edges: Vec<(u32, u32)>,
    // Out-neighbors for directed graphs; all neighbors for undirected.
    out_adj: Adjacency,
    // In-neighbors; empty when undirected.
    in_adj: Adjacency,
    labels: Labels,
}

impl Graph {
    /// Build a graph from an explicit edge list. Undirected edges are
    /// normalized and deduplicated; duplicate edges collapse.
    pub fn from_edges(
        n: usize,
        directed: bool,
        self_loops_allowed: bool,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let mut set: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if (a as usize) >= n || (b as usize) >= n {
                return Err(Error::Inconsistent(format!(
                    "edge ({a},{b}) out of range for {n} nodes"
                )));
            }
            if a == b && !self_loops_allowed {
                return Err(Error::Inconsistent(format!(
                    "self-loop ({a},{a}) in a graph without self-loops"
                )));
            }
            let p = PairRef::new(a, b, directed);
            set.push((p.a, p.b));
        }
        set.sort_unstable();
        set.dedup();
        Ok(Self::from_normalized(
            n as u32,
            directed,
            self_loops_allowed,
            set,
            Labels::Dense,
        ))
    }

    fn from_normalized(
        n: u32,
        directed: bool,
        self_loops_allowed: bool,
        edges: Vec<(u32, u32)>,
        labels: Labels,
    ) -> Self {
        let (out_adj, in_adj) = if directed {
            (
                Adjacency::build(n as usize, edges.iter().copied()),
                Adjacency::build(n as usize, edges.iter().map(|&(a, b)| (b, a))),
            )
        } else {
            let both = edges
                .iter()
                .copied()
                .chain(edges.iter().filter(|&&(a, b)| a != b).map(|&(a, b)| (b, a)));
            (Adjacency::build(n as usize, both), Adjacency::default())
        };
        Graph {
            n,
            directed,
            self_loops_allowed,
            edges,
            out_adj,
            in_adj,
            labels,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n as usize
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn self_loops_allowed(&self) -> bool {
        self.self_loops_allowed
    }

    /// Stored edges, sorted; normalized low-id-first when undirected.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Membership test. Arguments in either order work for undirected graphs.
    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let p = PairRef::new(a, b, self.directed);
        self.out_adj.neighbors(p.a).binary_search(&p.b).is_ok()
    }

    /// Out-neighbors (directed) or all neighbors (undirected), sorted.
    #[inline]
    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        self.out_adj.neighbors(v)
    }

    /// In-neighbors for directed graphs. For undirected graphs this is the
    /// same as `out_neighbors`.
    #[inline]
    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        if self.directed {
            self.in_adj.neighbors(v)
        } else {
            self.out_adj.neighbors(v)
        }
    }

    pub fn label(&self, v: u32) -> String {
        match &self.labels {
            Labels::Named(names) => names[v as usize].clone(),
            Labels::Dense => v.to_string(),
        }
    }

    /// Mark self-loop pairs as part of the pair universe even though the
    /// edge list contains none. Construction-time option only.
    pub fn with_self_loop_pairs(mut self) -> Self {
        self.self_loops_allowed = true;
        self
    }

    /// Total number of candidate pairs for this graph's mode
    /// (ordered pairs if directed, unordered otherwise; diagonal included
    /// only when self-loop pairs are allowed).
    pub fn total_pair_count(&self) -> u64 {
        let n = self.n as u64;
        let base = if self.directed {
            n * (n - 1)
        } else {
            n * (n - 1) / 2
        };
        if self.self_loops_allowed {
            base + n
        } else {
            base
        }
    }

    /// Number of non-edges: total pairs minus stored edges.
    pub fn non_edge_count(&self) -> u64 {
        self.total_pair_count() - self.edges.len() as u64
    }

    /// Iterate all pairs absent from the edge set, in lexicographic order.
    pub fn non_edges(&self) -> NonEdges<'_> {
        NonEdges {
            g: self,
            a: 0,
            b: 0,
            done: self.n == 0,
        }
    }

    /// Nodes reachable from either endpoint of `pair` by a walk of at most
    /// `k` steps, as a sorted id list. Both endpoints are always included.
    /// With `HopMode::Undirected`, edge direction is ignored; with
    /// `HopMode::Forward`, only out-edges are followed.
    pub fn khop_nodes(&self, pair: PairRef, k: usize, mode: HopMode) -> Vec<u32> {
        let mut dist: Vec<u32> = vec![u32::MAX; self.n as usize];
        let mut queue = VecDeque::new();
        for seed in [pair.a, pair.b] {
            if dist[seed as usize] == u32::MAX {
                dist[seed as usize] = 0;
                queue.push_back(seed);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            if d as usize >= k {
                continue;
            }
            let mut push = |w: u32| {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            };
            for &w in self.out_neighbors(v) {
                push(w);
            }
            if self.directed && mode == HopMode::Undirected {
                for &w in self.in_neighbors(v) {
                    push(w);
                }
            }
        }
        (0..self.n).filter(|&v| dist[v as usize] != u32::MAX).collect()
    }

    /// Induced subgraph on `nodes` plus the mapping from new dense ids to
    /// original ids. `nodes` must be sorted and deduplicated.
    pub fn induced_subgraph(&self, nodes: &[u32]) -> (Graph, Vec<u32>) {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut edges = Vec::new();
        for (new_a, &a) in nodes.iter().enumerate() {
            for &b in self.out_neighbors(a) {
                if !self.directed && b < a {
                    continue; // each undirected edge once
                }
                if let Ok(new_b) = nodes.binary_search(&b) {
                    edges.push((new_a as u32, new_b as u32));
                }
            }
        }
        edges.sort_unstable();
        let sub = Graph::from_normalized(
            nodes.len() as u32,
            self.directed,
            self.self_loops_allowed,
            edges,
            Labels::Dense,
        );
        (sub, nodes.to_vec())
    }

    /// Relabel nodes by `pi`: edge (a,b) exists here iff (pi(a),pi(b))
    /// exists in the result. Labels follow their nodes.
    pub fn permute(&self, pi: &Permutation) -> Graph {
        assert_eq!(pi.len(), self.node_count());
        let mut edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let p = PairRef::new(pi.apply(a), pi.apply(b), self.directed);
                (p.a, p.b)
            })
            .collect();
        edges.sort_unstable();
        let labels = match &self.labels {
            Labels::Named(names) => {
                let mut new_names = vec![String::new(); names.len()];
                for (i, name) in names.iter().enumerate() {
                    new_names[pi.apply(i as u32) as usize] = name.clone();
                }
                Labels::Named(new_names)
            }
            Labels::Dense => Labels::Dense,
        };
        Graph::from_normalized(self.n, self.directed, self.self_loops_allowed, edges, labels)
    }

    /// Remove the given edges, returning the residual graph. Pairs must be
    /// stored edges.
    pub fn remove_edges_set(&self, removed: &[PairRef]) -> Result<Graph> {
        let mut drop: Vec<(u32, u32)> = removed.iter().map(|p| (p.a, p.b)).collect();
        drop.sort_unstable();
        for &(a, b) in &drop {
            if !self.has_edge(a, b) {
                return Err(Error::Inconsistent(format!(
                    "cannot remove non-existent edge ({a},{b})"
                )));
            }
        }
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Ok(Graph::from_normalized(
            self.n,
            self.directed,
            self.self_loops_allowed,
            edges,
            self.labels.clone(),
        ))
    }

    /// Degree multiset (total degree; in+out for directed graphs).
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = (0..self.n)
            .map(|v| {
                if self.directed {
                    self.out_neighbors(v).len() + self.in_neighbors(v).len()
                } else {
                    self.out_neighbors(v).len()
                }
            })
            .collect();
        degs.sort_unstable();
        degs
    }
}

/// Reachability mode for k-hop neighborhoods.
#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum HopMode {
    /// Ignore edge direction (default; keeps neighborhoods symmetric in the
    /// pair's endpoints).
    Undirected,
    /// Follow out-edges only.
    Forward,
}

/// Lexicographic iterator over the pairs absent from the edge set.
pub struct NonEdges<'g> {
    g: &'g Graph,
    a: u32,
    b: u32,
    done: bool,
}

impl<'g> NonEdges<'g> {
    fn advance(&mut self) {
        let n = self.g.n;
        self.b += 1;
        if self.b >= n {
            self.a += 1;
            if self.a >= n {
                self.done = true;
                return;
            }
            self.b = if self.g.directed { 0 } else { self.a };
        }
    }

    fn valid(&self) -> bool {
        let (a, b) = (self.a, self.b);
        if a == b && !self.g.self_loops_allowed {
            return false;
        }
        !self.g.has_edge(a, b)
    }
}

impl<'g> Iterator for NonEdges<'g> {
    type Item = PairRef;

    fn next(&mut self) -> Option<PairRef> {
        if self.done {
            return None;
        }
        // Position (a,b) is a candidate; emit if valid, then advance.
        loop {
            if self.valid() {
                let item = PairRef { a: self.a, b: self.b };
                self.advance();
                return Some(item);
            }
            self.advance();
            if self.done {
                return None;
            }
        }
    }
}

/// Parse a whitespace-separated edge list.
///
/// Each non-comment line is `src dst` or `src dst weight`; lines beginning
/// with `#` or `%` are comments. Nodes are densely renumbered in
/// first-appearance order; weights are parsed and discarded; duplicate edges
/// (including reciprocal duplicates for undirected input) collapse;
/// self-loops are dropped unless `keep_self_loops`.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    directed: bool,
    keep_self_loops: bool,
) -> Result<Graph> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut saw_self_loop = false;

    let intern = |tok: &str, ids: &mut HashMap<String, u32>, names: &mut Vec<String>| -> u32 {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = names.len() as u32;
        ids.insert(tok.to_string(), id);
        names.push(tok.to_string());
        id
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected 2-3 tokens, found {}", tokens.len()),
            });
        }
        if tokens.len() == 3 {
            tokens[2].parse::<f64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("unparseable weight token '{}'", tokens[2]),
            })?; // weight discarded
        }
        let a = intern(tokens[0], &mut ids, &mut names);
        let b = intern(tokens[1], &mut ids, &mut names);
        if a == b {
            saw_self_loop = true;
            if !keep_self_loops {
                continue;
            }
        }
        let p = PairRef::new(a, b, directed);
        edges.push((p.a, p.b));
    }

    if names.is_empty() {
        return Err(Error::EmptyGraph);
    }
    edges.sort_unstable();
    edges.dedup();
    let self_loops_allowed = keep_self_loops && saw_self_loop;
    Ok(Graph::from_normalized(
        names.len() as u32,
        directed,
        self_loops_allowed,
        edges,
        Labels::Named(names),
    ))
}

/// `load_edge_list` over an in-memory string.
pub fn parse_edge_list(text: &str, directed: bool, keep_self_loops: bool) -> Result<Graph> {
    load_edge_list(text.as_bytes(), directed, keep_self_loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig_residual;
    use rand::SeedableRng;

    #[test]
    fn parse_basic_undirected() {
        let g = parse_edge_list("a b\nb c", false, false).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.self_loops_allowed());
    }

    #[test]
    fn parse_drops_self_loops() {
        let g = parse_edge_list("a a\na b", false, false).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(!g.self_loops_allowed());
    }

    #[test]
    fn parse_keeps_self_loops() {
        let g = parse_edge_list("a a\na b", false, true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.self_loops_allowed());
        assert!(g.has_edge(0, 0));
    }

    #[test]
    fn parse_collapses_reciprocal_undirected() {
        let g = parse_edge_list("a b 1.5\nb a 2.0", false, false).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_weights_discarded_directed() {
        let g = parse_edge_list("x y 3\ny x 4", true, false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = parse_edge_list("# header\n% other\n\na b\n", false, false).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn parse_errors() {
        let err = parse_edge_list("a", false, false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("a b c d", false, false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("# nothing\n", false, false).unwrap_err();
        assert!(matches!(err, Error::EmptyGraph));
        let err = parse_edge_list("a b zzz", false, false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn first_appearance_order() {
        let g = parse_edge_list("zeta alpha\nalpha beta", false, false).unwrap();
        assert_eq!(g.label(0), "zeta");
        assert_eq!(g.label(1), "alpha");
        assert_eq!(g.label(2), "beta");
    }

    #[test]
    fn non_edges_fig_residual() {
        let g = fig_residual();
        let ne: Vec<PairRef> = g.non_edges().collect();
        assert_eq!(ne.len(), 8); // C(6,2) - 7
        let expected: Vec<(u32, u32)> = vec![
            (0, 1),
            (0, 2),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 5),
            (2, 4),
            (4, 5),
        ];
        assert_eq!(ne.iter().map(|p| (p.a, p.b)).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn non_edges_complete_triangle() {
        let g = Graph::from_edges(3, false, false, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.non_edges().count(), 0);
    }

    #[test]
    fn non_edges_directed_two_nodes() {
        let g = Graph::from_edges(2, true, false, [(0, 1)]).unwrap();
        let ne: Vec<PairRef> = g.non_edges().collect();
        assert_eq!(ne, vec![PairRef { a: 1, b: 0 }]);
    }

    #[test]
    fn non_edge_count_identity() {
        for (directed, self_loops) in [(false, false), (true, false), (true, true)] {
            let g = Graph::from_edges(
                5,
                directed,
                self_loops,
                [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
            )
            .unwrap();
            assert_eq!(
                g.edge_count() as u64 + g.non_edges().count() as u64,
                g.total_pair_count()
            );
            assert_eq!(g.non_edge_count(), g.non_edges().count() as u64);
        }
    }

    #[test]
    fn khop_zero_is_endpoints() {
        let g = fig_residual();
        let nodes = g.khop_nodes(PairRef::new(0, 1, false), 0, HopMode::Undirected);
        assert_eq!(nodes, vec![0, 1]);
    }

    #[test]
    fn khop_one_pendant() {
        let g = fig_residual();
        // node a (=0) alone: 1-hop = {a, d}
        let nodes = g.khop_nodes(PairRef::new(0, 0, false), 1, HopMode::Undirected);
        assert_eq!(nodes, vec![0, 3]);
    }

    #[test]
    fn khop_saturates_at_component() {
        let g = fig_residual();
        let all = g.khop_nodes(PairRef::new(0, 1, false), 10, HopMode::Undirected);
        assert_eq!(all, vec![0, 1, 2, 3, 4, 5]);
        // monotone in k
        let mut prev: Vec<u32> = Vec::new();
        for k in 0..6 {
            let cur = g.khop_nodes(PairRef::new(0, 1, false), k, HopMode::Undirected);
            assert!(prev.iter().all(|v| cur.contains(v)));
            prev = cur;
        }
    }

    #[test]
    fn khop_direction_modes() {
        // 0 -> 1 -> 2; from node 2, forward reaches nothing, undirected reaches all.
        let g = Graph::from_edges(3, true, false, [(0, 1), (1, 2)]).unwrap();
        let fwd = g.khop_nodes(PairRef { a: 2, b: 2 }, 2, HopMode::Forward);
        assert_eq!(fwd, vec![2]);
        let und = g.khop_nodes(PairRef { a: 2, b: 2 }, 2, HopMode::Undirected);
        assert_eq!(und, vec![0, 1, 2]);
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = fig_residual();
        let (full, map) = g.induced_subgraph(&[0, 1, 2, 3, 4, 5]);
        assert_eq!(full.edges(), g.edges());
        assert_eq!(map, vec![0, 1, 2, 3, 4, 5]);

        // {a, d, b} -> edges {(d,a),(d,b)} under new ids a=0,b=1,d=2
        let (sub, map) = g.induced_subgraph(&[0, 1, 3]);
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(sub.edges(), &[(0, 2), (1, 2)]);

        let (empty, _) = g.induced_subgraph(&[]);
        assert_eq!(empty.node_count(), 0);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn permute_laws() {
        let g = fig_residual();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let id = Permutation::identity(6);
        assert_eq!(g.permute(&id).edges(), g.edges());
        for _ in 0..20 {
            let pi = Permutation::random(6, &mut rng);
            let h = g.permute(&pi);
            assert_eq!(h.degree_multiset(), g.degree_multiset());
            let back = h.permute(&pi.inverse());
            assert_eq!(back.edges(), g.edges());
        }
    }

    #[test]
    fn permutation_validity() {
        assert!(Permutation::new(vec![0, 1, 1]).is_err());
        assert!(Permutation::new(vec![0, 2, 1]).is_ok());
        let pi = Permutation::new(vec![1, 2, 0]).unwrap();
        let inv = pi.inverse();
        assert!(pi.compose(&inv).is_identity());
    }

    #[test]
    fn self_loop_pairs_in_non_edges() {
        let g = Graph::from_edges(3, true, true, [(0, 0), (0, 1)]).unwrap();
        let ne: Vec<PairRef> = g.non_edges().collect();
        // ordered pairs + diagonal = 9, minus 2 edges
        assert_eq!(ne.len(), 7);
        assert!(ne.contains(&PairRef { a: 1, b: 1 }));
        assert!(!ne.contains(&PairRef { a: 0, b: 0 }));
    }

    #[test]
    fn forced_self_loop_pairs() {
        let g = Graph::from_edges(2, false, false, [(0, 1)]).unwrap();
        assert_eq!(g.non_edges().count(), 0);
        let g = g.with_self_loop_pairs();
        assert_eq!(g.non_edges().count(), 2);
    }
}
