//! The four nonadaptive query designs, each built as a [`QueryGraph`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::float;
use crate::math::{kl_bernoulli, Unit};
use crate::model::{QueryGraph, QueryKind};
use crate::{Error, Result};

/// Scheme-specific parameters, without the shared `n`/seed.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSpec {
    /// Disjoint groups, each a star of same-cluster queries.
    Group { p: f64, d_override: Option<usize> },
    /// (c, delta)-biregular XOR configuration model.
    XorEnsemble { c: usize, delta: usize },
    /// `m` uniformly random distinct pairs, AND answers.
    RandomAnd { m: usize },
    /// d-regular ring of k-ary AND queries over permuted vertices.
    RingRegular { d: usize },
}

impl SchemeSpec {
    pub fn kind(&self) -> QueryKind {
        match self {
            SchemeSpec::Group { .. } | SchemeSpec::XorEnsemble { .. } => QueryKind::Xor,
            SchemeSpec::RandomAnd { .. } => QueryKind::And,
            SchemeSpec::RingRegular { .. } => QueryKind::KaryAnd,
        }
    }
}

/// A full scheme description: element count, parameters, and the seed that
/// fixes every random choice.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub n: usize,
    pub seed: u64,
    pub spec: SchemeSpec,
}

impl SchemeConfig {
    pub fn build(&self) -> Result<QueryGraph> {
        match self.spec {
            SchemeSpec::Group { p, d_override } => build_group_scheme(self.n, p, d_override),
            SchemeSpec::XorEnsemble { c, delta } => {
                build_xor_ensemble(self.n, c, delta, self.seed)
            }
            SchemeSpec::RandomAnd { m } => build_random_and_scheme(self.n, m, self.seed),
            SchemeSpec::RingRegular { d } => build_ring_regular_scheme(self.n, d, self.seed),
        }
    }

    /// Query count the built graph will have, without building it.
    pub fn query_count(&self) -> Result<usize> {
        match self.spec {
            SchemeSpec::Group { p, d_override } => {
                let d = match d_override {
                    Some(d) => d,
                    None => group_scheme_default_d(self.n, p)?,
                };
                Ok(self.n - d)
            }
            SchemeSpec::XorEnsemble { c, delta } => Ok(self.n * c / delta),
            SchemeSpec::RandomAnd { m } => Ok(m),
            SchemeSpec::RingRegular { d } => Ok(self.n * d / 2),
        }
    }
}

/// Default group count `d = round(n D(1/2 || p) / (2 log2 n))` (divergence in
/// bits), clamped to `[1, n/2]`.
pub fn group_scheme_default_d(n: usize, p: f64) -> Result<usize> {
    check_group_p(p)?;
    if n < 2 {
        return Err(Error::SchemeParams(format!("n = {n} < 2")));
    }
    let div = kl_bernoulli(0.5, p, Unit::Bits)?;
    let raw = float::round(n as f64 * div / (2.0 * float::log2(n as f64)));
    let d = raw.max(1.0) as usize;
    Ok(d.clamp(1, n / 2))
}

fn check_group_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) || p == 0.5 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1 and p != 1/2",
        });
    }
    Ok(())
}

/// Partitions the `n` elements into `d` near-equal contiguous groups and
/// queries each group's first element against every other member.
///
/// Exactly `n - d` same-cluster (XOR) queries; group sizes differ by at
/// most one.
pub fn build_group_scheme(n: usize, p: f64, d_override: Option<usize>) -> Result<QueryGraph> {
    check_group_p(p)?;
    if n < 2 {
        return Err(Error::SchemeParams(format!("n = {n} < 2")));
    }
    let d = match d_override {
        Some(d) => d,
        None => group_scheme_default_d(n, p)?,
    };
    if d < 1 || d > n / 2 {
        return Err(Error::SchemeParams(format!(
            "group count d = {d} outside [1, n/2] for n = {n}"
        )));
    }
    let base = n / d;
    let extra = n % d; // first `extra` groups get one more element
    let mut queries: Vec<[u32; 2]> = Vec::with_capacity(n - d);
    let mut start = 0usize;
    for g in 0..d {
        let size = base + usize::from(g < extra);
        for member in start + 1..start + size {
            queries.push([start as u32, member as u32]);
        }
        start += size;
    }
    debug_assert_eq!(start, n);
    QueryGraph::new(n, QueryKind::Xor, 2, queries)
}

/// Biregular XOR ensemble from the configuration model: `n c` left stubs
/// matched to `m delta` right stubs by a uniform permutation, `m = n c / delta`.
///
/// A query may list the same element more than once; answers collapse the
/// repeats mod 2. Permutations whose query multisets collide are resampled.
pub fn build_xor_ensemble(n: usize, c: usize, delta: usize, seed: u64) -> Result<QueryGraph> {
    if c < 3 || c > delta {
        return Err(Error::SchemeParams(format!(
            "left degree c = {c} must satisfy 3 <= c <= delta = {delta}"
        )));
    }
    if n == 0 || (n * c) % delta != 0 {
        return Err(Error::SchemeParams(format!(
            "delta = {delta} must divide n*c = {}",
            n * c
        )));
    }
    let m = n * c / delta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<u32> = (0..n * c).map(|s| (s / c) as u32).collect();
    for _attempt in 0..1000 {
        stubs.shuffle(&mut rng);
        let queries = stubs.chunks_exact(delta);
        match QueryGraph::new(n, QueryKind::Xor, delta, queries) {
            Ok(g) => return Ok(g),
            Err(Error::DuplicateQuery { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let _ = m;
    Err(Error::SchemeParams(format!(
        "could not sample duplicate-free (c={c}, delta={delta}) ensemble on n={n}"
    )))
}

/// True when the pair budget is dense enough (over a tenth of all pairs)
/// that the Poisson degree approximation behind the AND analysis degrades.
pub fn and_scheme_is_dense(n: usize, m: usize) -> bool {
    let total = n as u128 * (n as u128 - 1) / 2;
    (m as u128) * 10 > total
}

/// `m` distinct unordered pairs drawn uniformly at random; AND answers.
///
/// Duplicate draws are rejected and resampled, so the result is a uniform
/// sample of `m` distinct pairs. Errors when `m > C(n, 2)`.
pub fn build_random_and_scheme(n: usize, m: usize, seed: u64) -> Result<QueryGraph> {
    if n < 2 {
        return Err(Error::SchemeParams(format!("n = {n} < 2")));
    }
    let total_pairs = n as u128 * (n as u128 - 1) / 2;
    if m as u128 > total_pairs {
        return Err(Error::SchemeParams(format!(
            "m = {m} exceeds the {total_pairs} distinct pairs on n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut queries: Vec<[u32; 2]> = Vec::with_capacity(m);
    while queries.len() < m {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if chosen.insert(key) {
            queries.push([a, b]);
        }
    }
    QueryGraph::new(n, QueryKind::And, 2, queries)
}

/// d-regular ring scheme: vertices are randomly permuted around a circle and
/// each is joined to its `floor(d/2)` nearest neighbors per side, plus the
/// diametrically opposite vertex when `d` is odd (requiring even `n`).
///
/// Exactly `n d / 2` pairwise k-ary AND queries.
pub fn build_ring_regular_scheme(n: usize, d: usize, seed: u64) -> Result<QueryGraph> {
    if d < 1 || d >= n {
        return Err(Error::SchemeParams(format!(
            "degree d = {d} must satisfy 1 <= d < n = {n}"
        )));
    }
    if d % 2 == 1 && n % 2 == 1 {
        return Err(Error::SchemeParams(format!(
            "odd degree d = {d} needs even n, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(&mut rng);
    let half = d / 2;
    let mut queries: Vec<[u32; 2]> = Vec::with_capacity(n * d / 2);
    for j in 1..=half {
        for pos in 0..n {
            queries.push([perm[pos], perm[(pos + j) % n]]);
        }
    }
    if d % 2 == 1 {
        for pos in 0..n / 2 {
            queries.push([perm[pos], perm[pos + n / 2]]);
        }
    }
    QueryGraph::new(n, QueryKind::KaryAnd, 2, queries)
}
