//! Labelled trees on the vertex set `1..=n`.
//!
//! Trees are handled through their Prüfer codes: a code of length `n - 2`
//! over the alphabet `1..=n` determines exactly one tree, which gives
//! exhaustive enumeration (lexicographic over codes, split into contiguous
//! shards) and uniform sampling for free.
//!
//! The module also counts the trees containing a fixed forest. For a forest
//! with edge set `E` and non-trivial components of sizes `v_1, ..., v_p`,
//! the number of labelled trees on `n` vertices containing it is
//! `n^(n - |E| - 2) * v_1 * ... * v_p`.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::Rng;

use crate::error::{Error, Result};

/// An undirected edge between two distinct labels, stored with the smaller
/// label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Edge> {
        if a == b {
            return Err(Error::Argument(format!("self-loop {a}-{b}")));
        }
        if a == 0 || b == 0 {
            return Err(Error::Argument("labels start at 1".into()));
        }
        Ok(Edge {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    #[inline]
    pub(crate) fn new_unchecked(a: usize, b: usize) -> Edge {
        debug_assert!(a != b && a > 0 && b > 0);
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    #[inline]
    pub fn lo(&self) -> usize {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> usize {
        self.hi
    }

    #[inline]
    pub fn has_vertex(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    #[inline]
    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.has_vertex(other.lo) || self.has_vertex(other.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Parses an edge list of the form `"1-2,3-4"`.
pub fn parse_edge_list(text: &str) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once('-')
            .ok_or_else(|| Error::Argument(format!("expected a-b, got {item:?}")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Argument(format!("bad label {s:?} in {item:?}")))
        };
        edges.push(Edge::new(parse(a)?, parse(b)?)?);
    }
    Ok(edges)
}

/// Number of labelled trees on `n` vertices, `n^(n-2)`, with one tree for
/// `n <= 2`.
pub fn tree_count(n: usize) -> BigUint {
    if n <= 2 {
        BigUint::one()
    } else {
        BigUint::from(n).pow((n - 2) as u32)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// A Prüfer code for a labelled tree on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferCode {
    n: usize,
    code: Vec<usize>,
}

impl PruferCode {
    pub fn new(n: usize, code: Vec<usize>) -> Result<PruferCode> {
        if n == 0 {
            return Err(Error::InvalidCode("n must be at least 1".into()));
        }
        let expected = n.saturating_sub(2);
        if code.len() != expected {
            return Err(Error::InvalidCode(format!(
                "length {} but n = {n} needs {expected}",
                code.len()
            )));
        }
        if let Some(&bad) = code.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::InvalidCode(format!("entry {bad} outside 1..={n}")));
        }
        Ok(PruferCode { n, code })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.code
    }
}

/// A labelled tree on `1..=n`. Edges are kept sorted, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<Edge>,
}

impl LabeledTree {
    /// Validates that `edges` form a spanning tree of `1..=n`.
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<LabeledTree> {
        if n == 0 {
            return Err(Error::InvalidTree("n must be at least 1".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges, a tree on {n} vertices has {}",
                edges.len(),
                n - 1
            )));
        }
        let mut sets = DisjointSets::new(n + 1);
        for e in &edges {
            if e.hi > n {
                return Err(Error::InvalidTree(format!("edge {e} outside 1..={n}")));
            }
            if !sets.union(e.lo, e.hi) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
        }
        // n - 1 edges without a cycle on n vertices is connected.
        edges.sort_unstable();
        Ok(LabeledTree { n, edges })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<Edge>) -> LabeledTree {
        LabeledTree { n, edges }
    }

    /// Star centred at `center`.
    pub fn star(n: usize, center: usize) -> Result<LabeledTree> {
        let edges = (1..=n)
            .filter(|&v| v != center)
            .map(|v| Edge::new(center, v))
            .collect::<Result<Vec<_>>>()?;
        LabeledTree::new(n, edges)
    }

    /// The path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> LabeledTree {
        let edges = (1..n).map(|v| Edge::new_unchecked(v, v + 1)).collect();
        LabeledTree { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }
}

/// Standard linear-time Prüfer decoding. `degree` must have length `n + 1`;
/// `emit` receives the `n - 1` edges as unordered label pairs.
#[inline]
pub(crate) fn decode_with(
    n: usize,
    code: &[usize],
    degree: &mut [u32],
    mut emit: impl FnMut(usize, usize),
) {
    if n < 2 {
        return;
    }
    degree[1..=n].fill(1);
    for &x in code {
        degree[x] += 1;
    }
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &x in code {
        emit(leaf, x);
        degree[leaf] = 0;
        degree[x] -= 1;
        if degree[x] == 1 && x < ptr {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    emit(leaf, n);
}

pub fn prufer_decode(code: &PruferCode) -> LabeledTree {
    let n = code.n;
    let mut degree = vec![0u32; n + 1];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    decode_with(n, &code.code, &mut degree, |a, b| {
        edges.push(Edge::new_unchecked(a, b))
    });
    edges.sort_unstable();
    LabeledTree::from_sorted_unchecked(n, edges)
}

pub fn prufer_encode(tree: &LabeledTree) -> PruferCode {
    let n = tree.n;
    if n <= 2 {
        return PruferCode { n, code: Vec::new() };
    }
    let mut degree = vec![0u32; n + 1];
    // XOR of neighbour labels; for a leaf this is its unique neighbour.
    let mut neighbours = vec![0usize; n + 1];
    for e in &tree.edges {
        degree[e.lo] += 1;
        degree[e.hi] += 1;
        neighbours[e.lo] ^= e.hi;
        neighbours[e.hi] ^= e.lo;
    }
    let mut code = Vec::with_capacity(n - 2);
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for _ in 0..n - 2 {
        let next = neighbours[leaf];
        code.push(next);
        degree[leaf] = 0;
        degree[next] -= 1;
        neighbours[next] ^= leaf;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    PruferCode { n, code }
}

/// Size of the code space, `n^(n-2)`, if it fits in a `u128`.
fn code_space(n: usize) -> Result<u128> {
    let mut total: u128 = 1;
    for _ in 0..n.saturating_sub(2) {
        total = total
            .checked_mul(n as u128)
            .ok_or_else(|| Error::Argument(format!("code space for n = {n} is too large")))?;
    }
    Ok(total)
}

/// Half-open range of code indices `[start, end)` owned by `shard`.
pub fn shard_range(n: usize, shard: usize, num_shards: usize) -> Result<(u128, u128)> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if num_shards == 0 || shard >= num_shards {
        return Err(Error::Argument(format!(
            "shard {shard} out of range for {num_shards} shards"
        )));
    }
    let total = code_space(n)?;
    let bound = |s: usize| -> Result<u128> {
        total
            .checked_mul(s as u128)
            .map(|x| x / num_shards as u128)
            .ok_or_else(|| Error::Argument("too many shards".into()))
    };
    Ok((bound(shard)?, bound(shard + 1)?))
}

/// Walks a contiguous block of Prüfer codes in lexicographic order.
#[derive(Debug, Clone)]
pub(crate) struct CodeOdometer {
    n: usize,
    digits: Vec<usize>,
    remaining: u128,
    started: bool,
}

impl CodeOdometer {
    pub(crate) fn new(n: usize, start: u128, end: u128) -> CodeOdometer {
        let len = n.saturating_sub(2);
        let mut digits = vec![1; len];
        let mut rest = start;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % n as u128) as usize + 1;
            rest /= n as u128;
        }
        CodeOdometer {
            n,
            digits,
            remaining: end.saturating_sub(start),
            started: false,
        }
    }

    #[inline]
    pub(crate) fn next_code(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.started {
            for slot in self.digits.iter_mut().rev() {
                if *slot < self.n {
                    *slot += 1;
                    break;
                }
                *slot = 1;
            }
        }
        self.started = true;
        Some(&self.digits)
    }
}

/// Iterator over one shard of all labelled trees on `n` vertices.
pub struct TreeEnumerator {
    odometer: CodeOdometer,
    degree: Vec<u32>,
}

impl Iterator for TreeEnumerator {
    type Item = LabeledTree;

    fn next(&mut self) -> Option<LabeledTree> {
        let n = self.odometer.n;
        let code = self.odometer.next_code()?;
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        decode_with(n, code, &mut self.degree, |a, b| {
            edges.push(Edge::new_unchecked(a, b))
        });
        edges.sort_unstable();
        Some(LabeledTree::from_sorted_unchecked(n, edges))
    }
}

/// Trees whose Prüfer codes fall in shard `shard` of `num_shards`
/// contiguous, near-equal lexicographic blocks.
pub fn enumerate_trees(n: usize, shard: usize, num_shards: usize) -> Result<TreeEnumerator> {
    let (start, end) = shard_range(n, shard, num_shards)?;
    Ok(TreeEnumerator {
        odometer: CodeOdometer::new(n, start, end),
        degree: vec![0; n + 1],
    })
}

/// Reusable buffers for drawing many uniform trees of one size.
pub struct TreeSampler {
    n: usize,
    code: Vec<usize>,
    degree: Vec<u32>,
    edges: Vec<Edge>,
}

impl TreeSampler {
    pub fn new(n: usize) -> Result<TreeSampler> {
        if n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        Ok(TreeSampler {
            n,
            code: vec![0; n.saturating_sub(2)],
            degree: vec![0; n + 1],
            edges: Vec::with_capacity(n - 1),
        })
    }

    /// Draws a uniform tree; the returned edges are not sorted.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[Edge] {
        let n = self.n;
        // gen_range draws by rejection, so labels carry no modulo bias.
        for slot in self.code.iter_mut() {
            *slot = rng.gen_range(1..=n);
        }
        let edges = &mut self.edges;
        edges.clear();
        decode_with(n, &self.code, &mut self.degree, |a, b| {
            edges.push(Edge::new_unchecked(a, b))
        });
        &self.edges
    }
}

/// Draws a uniformly random labelled tree on `1..=n`.
pub fn sample_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LabeledTree> {
    let mut sampler = TreeSampler::new(n)?;
    let mut edges = sampler.sample(rng).to_vec();
    edges.sort_unstable();
    Ok(LabeledTree::from_sorted_unchecked(n, edges))
}

/// Vertex-disjoint subtrees of the complete graph on `1..=n`.
///
/// Vertices outside every component count as singleton components and
/// contribute nothing to the edge set or the size product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    components: Vec<Vec<Edge>>,
    sizes: Vec<usize>,
}

impl Forest {
    pub fn empty(n: usize) -> Forest {
        Forest {
            n,
            components: Vec::new(),
            sizes: Vec::new(),
        }
    }

    /// Builds a forest from explicit components, each of which must be a
    /// non-empty tree; components must not share vertices.
    pub fn new(n: usize, components: Vec<Vec<Edge>>) -> Result<Forest> {
        let mut owner = vec![usize::MAX; n + 1];
        let mut sets = DisjointSets::new(n + 1);
        let mut sizes = Vec::with_capacity(components.len());
        let mut canonical = Vec::with_capacity(components.len());
        for (idx, mut comp) in components.into_iter().enumerate() {
            if comp.is_empty() {
                return Err(Error::InvalidForest(format!("component {idx} has no edges")));
            }
            let mut vertices = Vec::with_capacity(comp.len() + 1);
            for e in &comp {
                if e.hi > n {
                    return Err(Error::InvalidForest(format!("edge {e} outside 1..={n}")));
                }
                for v in [e.lo, e.hi] {
                    match owner[v] {
                        o if o == idx => {}
                        usize::MAX => {
                            owner[v] = idx;
                            vertices.push(v);
                        }
                        other => {
                            return Err(Error::InvalidForest(format!(
                                "vertex {v} shared by components {other} and {idx}"
                            )))
                        }
                    }
                }
                if !sets.union(e.lo, e.hi) {
                    return Err(Error::InvalidForest(format!("edge {e} closes a cycle")));
                }
            }
            if vertices.len() != comp.len() + 1 {
                return Err(Error::InvalidForest(format!("component {idx} is disconnected")));
            }
            comp.sort_unstable();
            sizes.push(vertices.len());
            canonical.push(comp);
        }
        Ok(Forest {
            n,
            components: canonical,
            sizes,
        })
    }

    /// Groups an arbitrary acyclic edge list into its connected components.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Forest> {
        let mut sets = DisjointSets::new(n + 1);
        for e in edges {
            if e.hi > n {
                return Err(Error::InvalidForest(format!("edge {e} outside 1..={n}")));
            }
            if !sets.union(e.lo, e.hi) {
                return Err(Error::InvalidForest(format!("edge {e} closes a cycle")));
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<Edge>> = Default::default();
        for e in edges {
            let root = sets.find(e.lo);
            groups.entry(root).or_default().push(*e);
        }
        Forest::new(n, groups.into_values().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Vec<Edge>] {
        &self.components
    }

    /// Vertex counts of the non-trivial components.
    pub fn component_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.components.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .components
            .iter()
            .flatten()
            .flat_map(|e| [e.lo, e.hi])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Combines two vertex-disjoint forests on the same ground set.
    pub fn union(&self, other: &Forest) -> Result<Forest> {
        if self.n != other.n {
            return Err(Error::Argument(format!(
                "forests on {} and {} vertices",
                self.n, other.n
            )));
        }
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        Forest::new(self.n, comps)
    }
}

fn check_forest_size(n: usize, forest: &Forest) -> Result<()> {
    if n == 0 || forest.n != n {
        return Err(Error::Argument(format!(
            "forest on {} vertices used with n = {n}",
            forest.n
        )));
    }
    Ok(())
}

/// Number of labelled trees on `1..=n` containing every edge of `forest`.
pub fn count_trees_containing(n: usize, forest: &Forest) -> Result<BigUint> {
    check_forest_size(n, forest)?;
    let edges = forest.edge_count();
    if n <= 2 || edges == n - 1 {
        // A spanning forest is contained only in itself.
        return Ok(BigUint::one());
    }
    let sizes: BigUint = forest.sizes.iter().map(|&v| BigUint::from(v)).product();
    Ok(BigUint::from(n).pow((n - edges - 2) as u32) * sizes)
}

/// Probability that a uniform random tree contains `forest`.
pub fn forest_probability(n: usize, forest: &Forest) -> Result<BigRational> {
    let count = count_trees_containing(n, forest)?;
    Ok(BigRational::new(count.into(), tree_count(n).into()))
}

pub fn contains_forest(tree: &LabeledTree, forest: &Forest) -> bool {
    forest
        .components
        .iter()
        .flatten()
        .all(|e| tree.has_edge(e))
}
