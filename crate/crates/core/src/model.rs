//! Core domain types shared by schemes, oracle, decoders, and simulation.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::validate_prior;
use crate::{Error, Result};

/// Label prior `(p_0, ..., p_{k-1})`; entries in `[0, 1]`, summing to 1
/// within 1e-9, with `k >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior {
    probs: Vec<f64>,
}

impl Prior {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_prior(&probs)?;
        Ok(Prior { probs })
    }

    /// Binary prior with `P(label = 1) = p`.
    pub fn binary(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                constraint: "0 <= p <= 1",
            });
        }
        Ok(Prior {
            probs: vec![1.0 - p, p],
        })
    }

    /// Relative-size prior `p_i = n_i / n` from cluster sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        if n == 0 {
            return Err(Error::InvalidPrior("sizes sum to zero".into()));
        }
        Prior::new(sizes.iter().map(|&s| s as f64 / n as f64).collect())
    }

    pub fn k(&self) -> u32 {
        self.probs.len() as u32
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, label: u32) -> f64 {
        self.probs[label as usize]
    }

    /// `P(label = 1)` for binary priors.
    pub fn p1(&self) -> f64 {
        self.probs[1]
    }

    /// Shannon entropy of the prior, in bits.
    pub fn entropy_bits(&self) -> f64 {
        crate::math::prior_entropy(&self.probs).expect("validated at construction")
    }
}

/// Ground-truth or decoded labels: `n` symbols in `{0, ..., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<u32>,
    k: u32,
}

impl LabelVector {
    pub fn new(labels: Vec<u32>, k: u32) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Domain {
                name: "n",
                value: 0.0,
                constraint: "n >= 1",
            });
        }
        if k < 2 {
            return Err(Error::Domain {
                name: "k",
                value: k as f64,
                constraint: "k >= 2",
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::AlphabetMismatch {
                expected: k,
                found: bad + 1,
            });
        }
        Ok(LabelVector { labels, k })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> u32 {
        self.labels[i]
    }

    /// Number of nonzero labels (Hamming weight for binary vectors).
    pub fn weight(&self) -> usize {
        self.labels.iter().filter(|&&l| l != 0).count()
    }
}

/// The query function applied to the labels listed by a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    /// Sum of the listed binary labels mod 2 ("same cluster" when pairwise).
    Xor,
    /// 1 iff both listed binary labels are 1; pairwise only.
    And,
    /// `i` iff both labels equal `i != 0`, else 0; pairwise only, any `k`.
    KaryAnd,
}

impl QueryKind {
    pub fn name(&self) -> &'static str {
        match self {
            QueryKind::Xor => "xor",
            QueryKind::And => "and",
            QueryKind::KaryAnd => "kary-and",
        }
    }

    /// Kinds whose answers are binary regardless of the label alphabet.
    pub fn binary_answers(&self) -> bool {
        matches!(self, QueryKind::Xor | QueryKind::And)
    }
}

/// Bipartite query structure: `m` queries, each listing 2..=delta_max
/// element indices (with multiplicity for XOR ensembles).
///
/// No query may repeat another query's index multiset; AND-family kinds are
/// restricted to pairwise queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGraph {
    n: usize,
    kind: QueryKind,
    delta_max: usize,
    offsets: Vec<u32>,
    members: Vec<u32>,
}

impl QueryGraph {
    pub fn new<I, Q>(n: usize, kind: QueryKind, delta_max: usize, queries: I) -> Result<Self>
    where
        I: IntoIterator<Item = Q>,
        Q: AsRef<[u32]>,
    {
        if n == 0 {
            return Err(Error::Domain {
                name: "n",
                value: 0.0,
                constraint: "n >= 1",
            });
        }
        if delta_max < 2 {
            return Err(Error::Domain {
                name: "delta_max",
                value: delta_max as f64,
                constraint: "delta_max >= 2",
            });
        }
        let mut offsets: Vec<u32> = vec![0];
        let mut members: Vec<u32> = Vec::new();
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        for (pos, q) in queries.into_iter().enumerate() {
            let q = q.as_ref();
            let pairwise_only = !matches!(kind, QueryKind::Xor);
            let max_len = if pairwise_only { 2 } else { delta_max };
            if q.len() < 2 || q.len() > max_len {
                return Err(Error::QueryArity {
                    position: pos,
                    len: q.len(),
                    max: max_len,
                });
            }
            for &idx in q {
                if idx as usize >= n {
                    return Err(Error::IndexOutOfRange {
                        index: idx as usize,
                        n,
                    });
                }
            }
            let mut canonical = q.to_vec();
            canonical.sort_unstable();
            if !seen.insert(canonical) {
                return Err(Error::DuplicateQuery { position: pos });
            }
            members.extend_from_slice(q);
            offsets.push(members.len() as u32);
        }
        Ok(QueryGraph {
            n,
            kind,
            delta_max,
            offsets,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_queries(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn kind(&self) -> QueryKind {
        self.kind
    }

    pub fn delta_max(&self) -> usize {
        self.delta_max
    }

    pub fn query(&self, i: usize) -> &[u32] {
        &self.members[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn queries(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.num_queries()).map(move |i| self.query(i))
    }

    /// Per-element participation counts, counting multiplicity.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &idx in &self.members {
            deg[idx as usize] += 1;
        }
        deg
    }
}

/// Independent answer-corruption channel: each answer is kept with
/// probability `1 - q` and otherwise replaced by a uniformly random
/// different symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    q: f64,
    k: u32,
}

impl NoiseModel {
    pub fn new(q: f64, k: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain {
                name: "q",
                value: q,
                constraint: "0 <= q <= 1",
            });
        }
        if k < 2 {
            return Err(Error::Domain {
                name: "k",
                value: k as f64,
                constraint: "k >= 2",
            });
        }
        Ok(NoiseModel { q, k })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Oracle outputs, one symbol in `{0, ..., k-1}` per query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerVector {
    symbols: Vec<u32>,
    k: u32,
}

impl AnswerVector {
    pub fn new(symbols: Vec<u32>, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain {
                name: "k",
                value: k as f64,
                constraint: "k >= 2",
            });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= k) {
            return Err(Error::AlphabetMismatch {
                expected: k,
                found: bad + 1,
            });
        }
        Ok(AnswerVector { symbols, k })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> u32 {
        self.symbols[i]
    }
}

/// Draws `n` i.i.d. labels from the prior; deterministic given the seed.
pub fn sample_labels(prior: &Prior, n: usize, seed: u64) -> Result<LabelVector> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = prior.probs();
    let k = prior.k();
    let labels = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let mut cum = 0.0;
            for (i, &p) in probs.iter().enumerate() {
                cum += p;
                if u < cum {
                    return i as u32;
                }
            }
            k - 1
        })
        .collect();
    LabelVector::new(labels, k)
}

/// Fraction of positions where the two vectors disagree.
pub fn hamming_distortion(x: &LabelVector, y: &LabelVector) -> Result<f64> {
    if x.n() != y.n() {
        return Err(Error::LengthMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    if x.k() != y.k() {
        return Err(Error::AlphabetMismatch {
            expected: x.k(),
            found: y.k(),
        });
    }
    let mismatches = x
        .labels()
        .iter()
        .zip(y.labels())
        .filter(|(a, b)| a != b)
        .count();
    Ok(mismatches as f64 / x.n() as f64)
}

/// Uniformly random permutation of the multiset with `sizes[i]` copies of
/// label `i`; deterministic given the seed.
pub fn labels_from_sizes(sizes: &[usize], seed: u64) -> Result<LabelVector> {
    if sizes.len() < 2 {
        return Err(Error::InvalidPrior(alloc::format!(
            "needs k >= 2 sizes, got {}",
            sizes.len()
        )));
    }
    let n: usize = sizes.iter().sum();
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            constraint: "sum of sizes >= 1",
        });
    }
    let mut labels = Vec::with_capacity(n);
    for (label, &count) in sizes.iter().enumerate() {
        labels.extend(core::iter::repeat_n(label as u32, count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);
    LabelVector::new(labels, sizes.len() as u32)
}
