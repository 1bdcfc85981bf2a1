use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};
use rayon::prelude::*;

use super::Rational;
use crate::error::{Error, Result};
use crate::geometry::{edges_cross, validate_general_position, ConfigKind, PointConfig};
use crate::tree::{decode_with, shard_range, tree_count, CodeOdometer, Edge};

/// Default largest `n` enumerated without `force`.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 10;

/// Hard ceiling: the edge sets of `K_n` must fit a 128-bit mask.
pub const MAX_ENUMERATION_N: usize = 16;

/// Called with `(finished_shards, total_shards)` as shards complete.
pub type ProgressFn = Arc<dyn Fn(usize, usize) + Send + Sync>;

#[derive(Clone)]
pub struct EnumerationOptions {
    pub shards: usize,
    pub limit: usize,
    pub force: bool,
    pub progress: Option<ProgressFn>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            shards: 64,
            limit: DEFAULT_ENUMERATION_LIMIT,
            force: false,
            progress: None,
        }
    }
}

impl std::fmt::Debug for EnumerationOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnumerationOptions")
            .field("shards", &self.shards)
            .field("limit", &self.limit)
            .field("force", &self.force)
            .finish()
    }
}

/// Number of labelled trees with exactly `k` crossings, for `k = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingDistribution {
    n: usize,
    kind: ConfigKind,
    counts: Vec<BigUint>,
}

impl CrossingDistribution {
    /// Checks that the counts sum to `n^(n-2)`; trailing zeros are dropped.
    pub fn from_counts(n: usize, kind: ConfigKind, mut counts: Vec<BigUint>) -> Result<Self> {
        while counts.len() > 1 && counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        let total: BigUint = counts.iter().sum();
        if total != tree_count(n) {
            return Err(Error::Argument(format!(
                "counts sum to {total}, expected {}",
                tree_count(n)
            )));
        }
        let max_pairs = n.saturating_sub(1) * n.saturating_sub(2) / 2;
        if counts.len() > max_pairs + 1 {
            return Err(Error::Argument(format!(
                "crossing count {} exceeds {max_pairs}",
                counts.len() - 1
            )));
        }
        Ok(CrossingDistribution { n, kind, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ConfigKind {
        &self.kind
    }

    /// Dense counts indexed by crossing number.
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn max_crossings(&self) -> usize {
        self.counts.len() - 1
    }

    /// CSV with header `k,count`, one row per `k` from 0 to the maximum.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{k},{c}\n"));
        }
        out
    }
}

/// `E[X^j]` for the crossing count `X` of a uniform tree.
pub fn raw_moment(dist: &CrossingDistribution, j: u32) -> Rational {
    let mut sum = BigUint::zero();
    for (k, c) in dist.counts.iter().enumerate() {
        if !c.is_zero() {
            sum += BigUint::from(k).pow(j) * c;
        }
    }
    Rational::new(BigInt::from(sum), BigInt::from(dist.total()))
}

/// Precomputed crossing relation between all edges of `K_n`.
struct CrossingTable {
    stride: usize,
    index: Vec<u8>,
    crosses: Vec<u128>,
}

impl CrossingTable {
    fn new(config: &PointConfig) -> Result<Self> {
        let n = config.len();
        let stride = n + 1;
        let mut index = vec![u8::MAX; stride * stride];
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                index[a * stride + b] = edges.len() as u8;
                index[b * stride + a] = edges.len() as u8;
                edges.push(Edge::new(a, b)?);
            }
        }
        let mut crosses = vec![0u128; edges.len()];
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if edges_cross(edges[i], edges[j], config)? {
                    crosses[i] |= 1 << j;
                    crosses[j] |= 1 << i;
                }
            }
        }
        Ok(CrossingTable {
            stride,
            index,
            crosses,
        })
    }

    /// Tallies crossing counts over the code indices `[start, end)`.
    fn tally(&self, n: usize, start: u128, end: u128) -> Vec<u64> {
        let max_pairs = n.saturating_sub(1) * n.saturating_sub(2) / 2;
        let mut tally = vec![0u64; max_pairs + 1];
        let mut odometer = CodeOdometer::new(n, start, end);
        let mut degree = vec![0u32; n + 1];
        let mut ids = [0u8; MAX_ENUMERATION_N];
        while let Some(code) = odometer.next_code() {
            let mut mask = 0u128;
            let mut m = 0;
            decode_with(n, code, &mut degree, |a, b| {
                let id = self.index[a * self.stride + b];
                ids[m] = id;
                m += 1;
                mask |= 1 << id;
            });
            let twice: u32 = ids[..m]
                .iter()
                .map(|&id| (self.crosses[id as usize] & mask).count_ones())
                .sum();
            tally[(twice / 2) as usize] += 1;
        }
        tally
    }
}

fn check_enumeration(n: usize, config: &PointConfig, opts: &EnumerationOptions) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if config.len() != n {
        return Err(Error::Argument(format!(
            "configuration has {} points, n = {n}",
            config.len()
        )));
    }
    if n > MAX_ENUMERATION_N || (n > opts.limit && !opts.force) {
        return Err(Error::EnumerationGuard {
            n,
            limit: opts.limit.min(MAX_ENUMERATION_N),
            trees: tree_count(n).to_string(),
        });
    }
    validate_general_position(config)
}

/// Partial crossing tally for one shard of the Prüfer code space.
pub fn exact_distribution_shard(
    n: usize,
    config: &PointConfig,
    shard: usize,
    num_shards: usize,
) -> Result<Vec<u64>> {
    check_enumeration(
        n,
        config,
        &EnumerationOptions {
            force: true,
            ..Default::default()
        },
    )?;
    let table = CrossingTable::new(config)?;
    let (start, end) = shard_range(n, shard, num_shards)?;
    Ok(table.tally(n, start, end))
}

/// Exact crossing distribution over all `n^(n-2)` labelled trees, by sharded
/// exhaustive enumeration. Shard tallies are merged by pointwise addition.
pub fn exact_distribution(
    n: usize,
    config: &PointConfig,
    opts: &EnumerationOptions,
) -> Result<CrossingDistribution> {
    check_enumeration(n, config, opts)?;
    let table = CrossingTable::new(config)?;
    let shards = opts.shards.max(1);
    let bounds = (0..shards)
        .map(|s| shard_range(n, s, shards))
        .collect::<Result<Vec<_>>>()?;
    let done = AtomicUsize::new(0);
    let partials: Vec<Vec<u64>> = bounds
        .par_iter()
        .map(|&(start, end)| {
            let t = table.tally(n, start, end);
            let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(progress) = &opts.progress {
                progress(finished, shards);
            }
            t
        })
        .collect();
    let width = partials.first().map_or(1, Vec::len);
    let merged: Vec<BigUint> = (0..width)
        .map(|k| BigUint::from(partials.iter().map(|p| p[k]).sum::<u64>()))
        .collect();
    CrossingDistribution::from_counts(n, config.kind(), merged)
}
