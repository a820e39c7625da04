//! The four label-recovery procedures; each is a pure function from
//! `(QueryGraph, AnswerVector, side information)` to a [`DecodeReport`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::float;
use crate::model::{AnswerVector, LabelVector, Prior, QueryGraph, QueryKind};
use crate::{Error, Result};

/// Default exhaustive-search cap for [`decode_xor_typical`].
pub const XOR_TYPICAL_DEFAULT_CAP: usize = 24;

/// Per-element decode annotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementFlag {
    None,
    /// Element appeared in no query; label defaulted to 0.
    UnqueriedDefault,
    /// Group split evenly; the tie rule decided the label.
    TieBroken,
}

impl ElementFlag {
    pub fn name(&self) -> &'static str {
        match self {
            ElementFlag::None => "",
            ElementFlag::UnqueriedDefault => "unqueried-default",
            ElementFlag::TieBroken => "tie-broken",
        }
    }
}

/// Decoded labels plus per-element flags; `ambiguity` counts equally likely
/// candidates and is reported by the typical-set decoder only.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeReport {
    pub labels: LabelVector,
    pub flags: Vec<ElementFlag>,
    pub ambiguity: Option<u64>,
}

/// Decodes a group same-cluster scheme: within each star, answers split the
/// members into the leader's cluster and its complement; the smaller cluster
/// gets label 1 when `p < 1/2` (0 when `p > 1/2`), ties go to the leader's
/// side as 0 and are flagged.
pub fn decode_group_same_cluster(
    graph: &QueryGraph,
    answers: &AnswerVector,
    p: f64,
) -> Result<DecodeReport> {
    if graph.kind() != QueryKind::Xor {
        return Err(Error::GraphShape("expected same-cluster (xor) kind".into()));
    }
    if !(p > 0.0 && p < 1.0) || p == 0.5 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1 and p != 1/2",
        });
    }
    check_answer_count(graph, answers)?;
    if answers.k() != 2 {
        return Err(Error::AlphabetMismatch {
            expected: 2,
            found: answers.k(),
        });
    }
    let n = graph.n();
    let m = graph.num_queries();
    let mut labels = vec![0u32; n];
    let mut flags = vec![ElementFlag::None; n];
    let mut seen = vec![false; n];
    let mut i = 0usize;
    while i < m {
        let first = graph.query(i);
        if first.len() != 2 {
            return Err(Error::GraphShape(format!(
                "query {i} is not pairwise; groups must be stars"
            )));
        }
        let leader = first[0] as usize;
        if seen[leader] {
            return Err(Error::GraphShape(format!(
                "element {leader} leads a group but was already assigned"
            )));
        }
        seen[leader] = true;
        let mut agree: Vec<usize> = Vec::new();
        let mut disagree: Vec<usize> = Vec::new();
        while i < m {
            let q = graph.query(i);
            if q.len() != 2 {
                return Err(Error::GraphShape(format!(
                    "query {i} is not pairwise; groups must be stars"
                )));
            }
            if q[0] as usize != leader {
                break;
            }
            let member = q[1] as usize;
            if member == leader || seen[member] {
                return Err(Error::GraphShape(format!(
                    "element {member} appears twice; groups must be disjoint stars"
                )));
            }
            seen[member] = true;
            if answers.get(i) == 0 {
                agree.push(member);
            } else {
                disagree.push(member);
            }
            i += 1;
        }
        let leader_side = 1 + agree.len();
        let other_side = disagree.len();
        let (leader_label, tie) = if leader_side == other_side {
            (0u32, true)
        } else {
            let leader_smaller = leader_side < other_side;
            // smaller cluster gets 1 when p < 1/2, gets 0 when p > 1/2
            let smaller_label = u32::from(p < 0.5);
            (
                if leader_smaller {
                    smaller_label
                } else {
                    1 - smaller_label
                },
                false,
            )
        };
        labels[leader] = leader_label;
        for &e in &agree {
            labels[e] = leader_label;
        }
        for &e in &disagree {
            labels[e] = 1 - leader_label;
        }
        if tie {
            flags[leader] = ElementFlag::TieBroken;
            for &e in agree.iter().chain(&disagree) {
                flags[e] = ElementFlag::TieBroken;
            }
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::GraphShape(format!(
            "element {missing} belongs to no group"
        )));
    }
    Ok(DecodeReport {
        labels: LabelVector::new(labels, 2)?,
        flags,
        ambiguity: None,
    })
}

/// Typical-set XOR decoder: exhaustively enumerates binary vectors whose
/// weight lies within `n^(2/3)` of `n p` and whose syndrome matches the
/// answers, returning the lexicographically smallest and the number found.
///
/// Exponential in `n`; inputs beyond `n_cap` (or 64) are rejected.
pub fn decode_xor_typical(
    graph: &QueryGraph,
    answers: &AnswerVector,
    p: f64,
    n_cap: usize,
) -> Result<DecodeReport> {
    if graph.kind() != QueryKind::Xor {
        return Err(Error::GraphShape("expected xor kind".into()));
    }
    check_answer_count(graph, answers)?;
    if answers.k() != 2 {
        return Err(Error::AlphabetMismatch {
            expected: 2,
            found: answers.k(),
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 <= p <= 1",
        });
    }
    let n = graph.n();
    if n > n_cap || n > 63 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            constraint: "n <= n_cap for exhaustive typical-set search",
        });
    }
    // Per-query parity masks: elements listed an odd number of times.
    let masks: Vec<u64> = graph
        .queries()
        .map(|q| {
            let mut mask = 0u64;
            for &idx in q {
                mask ^= 1u64 << idx;
            }
            mask
        })
        .collect();
    let target: Vec<u32> = answers.symbols().to_vec();
    let np = n as f64 * p;
    let window = float::powf(n as f64, 2.0 / 3.0);
    let mut count = 0u64;
    let mut best: Option<u64> = None; // key: bit-reversed so numeric order is lex order
    for candidate in 0u64..(1u64 << n) {
        let w = candidate.count_ones() as f64;
        if float::abs(w - np) > window {
            continue;
        }
        let consistent = masks
            .iter()
            .zip(&target)
            .all(|(&mask, &y)| (candidate & mask).count_ones() & 1 == y);
        if !consistent {
            continue;
        }
        count += 1;
        let key = candidate.reverse_bits() >> (64 - n);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    let Some(best_key) = best else {
        return Err(Error::DecodeFailure(
            "no typical vector is consistent with the answers",
        ));
    };
    let chosen = best_key.reverse_bits() >> (64 - n);
    let labels: Vec<u32> = (0..n).map(|i| ((chosen >> i) & 1) as u32).collect();
    Ok(DecodeReport {
        labels: LabelVector::new(labels, 2)?,
        flags: vec![ElementFlag::None; n],
        ambiguity: Some(count),
    })
}

/// One-hop AND decoder: an element's label is the OR of its incident
/// answers; unqueried elements default to 0 and are flagged.
pub fn decode_and_onehop(graph: &QueryGraph, answers: &AnswerVector) -> Result<DecodeReport> {
    if graph.kind() != QueryKind::And {
        return Err(Error::GraphShape("expected and kind".into()));
    }
    check_answer_count(graph, answers)?;
    let n = graph.n();
    let mut labels = vec![0u32; n];
    let mut queried = vec![false; n];
    for (i, q) in graph.queries().enumerate() {
        let a = answers.get(i);
        for &idx in q {
            queried[idx as usize] = true;
            if a == 1 {
                labels[idx as usize] = 1;
            }
        }
    }
    let flags = queried
        .iter()
        .map(|&was| {
            if was {
                ElementFlag::None
            } else {
                ElementFlag::UnqueriedDefault
            }
        })
        .collect();
    Ok(DecodeReport {
        labels: LabelVector::new(labels, 2)?,
        flags,
        ambiguity: None,
    })
}

/// Per-label firing thresholds `C_i = d q/(k-1) + (d p_i / 2)(1 - q k/(k-1))`
/// for labels `i = 1..k-1`, in ascending label order.
pub fn alg1_thresholds(prior: &Prior, q: f64, d: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain {
            name: "q",
            value: q,
            constraint: "0 <= q <= 1",
        });
    }
    let k = prior.k() as f64;
    let d = d as f64;
    Ok((1..prior.k())
        .map(|i| d * q / (k - 1.0) + d * prior.prob(i) / 2.0 * (1.0 - q * k / (k - 1.0)))
        .collect())
}

/// Firing counts `ceil(C_i)` for the threshold decoder.
pub fn alg1_fire_counts(prior: &Prior, q: f64, d: usize) -> Result<Vec<usize>> {
    Ok(alg1_thresholds(prior, q, d)?
        .into_iter()
        .map(|c| float::ceil(c) as usize)
        .collect())
}

/// Threshold decoder for d-regular pairwise AND schemes: for each element,
/// scan labels `1..k-1` in ascending order and assign the first label whose
/// incident-answer count reaches its firing threshold, else 0.
///
/// `threshold_override` replaces the `ceil(C_i)` firing counts, one entry
/// per label `1..k-1`.
pub fn decode_threshold_alg1(
    graph: &QueryGraph,
    answers: &AnswerVector,
    prior: &Prior,
    q: f64,
    threshold_override: Option<&[usize]>,
) -> Result<DecodeReport> {
    if !matches!(graph.kind(), QueryKind::And | QueryKind::KaryAnd) {
        return Err(Error::GraphShape("expected an AND-family kind".into()));
    }
    check_answer_count(graph, answers)?;
    let k = prior.k();
    if answers.k() != k {
        return Err(Error::AlphabetMismatch {
            expected: k,
            found: answers.k(),
        });
    }
    let n = graph.n();
    let degrees = graph.degrees();
    let d = degrees[0];
    if d == 0 || degrees.iter().any(|&deg| deg != d) {
        return Err(Error::GraphShape(
            "threshold decoding needs a d-regular graph".into(),
        ));
    }
    let fire_at: Vec<usize> = match threshold_override {
        Some(t) => {
            if t.len() != (k - 1) as usize {
                return Err(Error::LengthMismatch {
                    left: t.len(),
                    right: (k - 1) as usize,
                });
            }
            t.to_vec()
        }
        None => alg1_fire_counts(prior, q, d)?,
    };
    // incident-answer counts, n x k
    let mut counts = vec![0u32; n * k as usize];
    for (i, query) in graph.queries().enumerate() {
        let a = answers.get(i) as usize;
        for &idx in query {
            counts[idx as usize * k as usize + a] += 1;
        }
    }
    let labels: Vec<u32> = (0..n)
        .map(|u| {
            for i in 1..k {
                let count = counts[u * k as usize + i as usize] as usize;
                if count >= fire_at[(i - 1) as usize] {
                    return i;
                }
            }
            0
        })
        .collect();
    Ok(DecodeReport {
        labels: LabelVector::new(labels, k)?,
        flags: vec![ElementFlag::None; n],
        ambiguity: None,
    })
}

fn check_answer_count(graph: &QueryGraph, answers: &AnswerVector) -> Result<()> {
    if answers.len() != graph.num_queries() {
        return Err(Error::LengthMismatch {
            left: graph.num_queries(),
            right: answers.len(),
        });
    }
    Ok(())
}
