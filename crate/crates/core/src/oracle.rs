//! Noiseless query evaluation and the independent answer-corruption channel.
//!
//! Noise is applied once per query and never refreshed: a query cannot be
//! repeated, so its (possibly wrong) answer is final.

use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{AnswerVector, LabelVector, NoiseModel, QueryGraph, QueryKind};
use crate::{Error, Result};

/// Evaluates every query on the true labels.
///
/// - `Xor`: sum of the listed labels mod 2 (repeats collapse);
/// - `And`: 1 iff both labels are 1;
/// - `KaryAnd`: `i` iff both labels equal `i != 0`, else 0.
pub fn answer_noiseless(graph: &QueryGraph, labels: &LabelVector) -> Result<AnswerVector> {
    if labels.n() != graph.n() {
        return Err(Error::LengthMismatch {
            left: graph.n(),
            right: labels.n(),
        });
    }
    let kind = graph.kind();
    if kind.binary_answers() && labels.k() != 2 {
        return Err(Error::AlphabetMismatch {
            expected: 2,
            found: labels.k(),
        });
    }
    let answer_k = if kind.binary_answers() { 2 } else { labels.k() };
    let symbols: Vec<u32> = graph
        .queries()
        .map(|q| match kind {
            QueryKind::Xor => q
                .iter()
                .fold(0u32, |acc, &idx| acc ^ (labels.get(idx as usize) & 1)),
            QueryKind::And => u32::from(q.iter().all(|&idx| labels.get(idx as usize) == 1)),
            QueryKind::KaryAnd => {
                let a = labels.get(q[0] as usize);
                let b = labels.get(q[1] as usize);
                if a == b {
                    a
                } else {
                    0
                }
            }
        })
        .collect();
    AnswerVector::new(symbols, answer_k)
}

/// Independently replaces each answer: kept with probability `1 - q`,
/// otherwise a uniformly random different symbol. Deterministic given seed.
pub fn apply_noise(answers: &AnswerVector, noise: &NoiseModel, seed: u64) -> Result<AnswerVector> {
    if noise.k() != answers.k() {
        return Err(Error::AlphabetMismatch {
            expected: answers.k(),
            found: noise.k(),
        });
    }
    let k = noise.k();
    let q = noise.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols: Vec<u32> = answers
        .symbols()
        .iter()
        .map(|&sym| {
            let u: f64 = rng.random();
            if u < q {
                let shift = rng.random_range(1..k);
                (sym + shift) % k
            } else {
                sym
            }
        })
        .collect();
    AnswerVector::new(symbols, k)
}

/// Noiseless evaluation composed with the noise channel; `noise = None`
/// takes the noiseless path.
pub fn answer(
    graph: &QueryGraph,
    labels: &LabelVector,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<AnswerVector> {
    let clean = answer_noiseless(graph, labels)?;
    match noise {
        Some(model) => apply_noise(&clean, model, seed),
        None => Ok(clean),
    }
}
