//! Exact per-element error of the threshold decoder on d-regular pairwise
//! k-ary AND schemes, and the query budget needed for a distortion target.
//!
//! The error probability is computed exactly by conditioning on the number
//! of same-label neighbors and carrying the joint law of the per-label
//! answer counts through a sequential binomial decomposition of the two
//! multinomial answer classes (same-label and different-label queries).
//! Nothing here is a bound: the result matches exhaustive enumeration over
//! noise and neighbor-label realizations.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::Feasibility;
use crate::decoders::alg1_fire_counts;
use crate::float;
use crate::model::Prior;
use crate::{Error, Result};

/// Exact threshold-decoder error: overall expected distortion and the
/// conditional error probability per true label.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactError {
    pub delta: f64,
    pub per_label: Vec<f64>,
}

/// Exact error with the standard `ceil(C_i)` firing thresholds.
pub fn alg1_exact_error(prior: &Prior, q: f64, d: usize) -> Result<ExactError> {
    let fire = alg1_fire_counts(prior, q, d)?;
    alg1_exact_error_with_thresholds(prior, q, d, &fire)
}

/// Exact error with explicit firing counts (label `i` is assigned when at
/// least `fire_at[i-1]` incident answers equal `i`), e.g. the survey
/// pipeline's "more than T" rule via `fire_at = T + 1`.
pub fn alg1_exact_error_with_thresholds(
    prior: &Prior,
    q: f64,
    d: usize,
    fire_at: &[usize],
) -> Result<ExactError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain {
            name: "q",
            value: q,
            constraint: "0 <= q <= 1",
        });
    }
    if d < 1 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
            constraint: "d >= 1",
        });
    }
    let k = prior.k() as usize;
    if fire_at.len() != k - 1 {
        return Err(Error::LengthMismatch {
            left: fire_at.len(),
            right: k - 1,
        });
    }
    let qp = q / (k as f64 - 1.0);
    let tables = PmfTables::new(d);
    let mut per_label = Vec::with_capacity(k);
    per_label.push(error_given_label_zero(k, qp, d, fire_at, &tables));
    for i in 1..k {
        per_label.push(error_given_label(
            prior.prob(i as u32),
            i,
            k,
            q,
            qp,
            d,
            fire_at,
            &tables,
        ));
    }
    let delta = per_label
        .iter()
        .enumerate()
        .map(|(i, &e)| prior.prob(i as u32) * e)
        .sum();
    Ok(ExactError { delta, per_label })
}

/// Log-factorial table backing stable binomial pmf rows.
struct PmfTables {
    ln_fact: Vec<f64>,
}

impl PmfTables {
    fn new(d: usize) -> Self {
        let mut ln_fact = Vec::with_capacity(d + 2);
        ln_fact.push(0.0);
        for i in 1..=d + 1 {
            ln_fact.push(ln_fact[i - 1] + float::ln(i as f64));
        }
        PmfTables { ln_fact }
    }

    /// `Binomial(n, r)` pmf as a dense row of length `n + 1`.
    fn binom_row(&self, n: usize, r: f64) -> Vec<f64> {
        let mut row = vec![0.0; n + 1];
        if r <= 0.0 {
            row[0] = 1.0;
            return row;
        }
        if r >= 1.0 {
            row[n] = 1.0;
            return row;
        }
        let ln_r = float::ln(r);
        let ln_1mr = float::ln(1.0 - r);
        for (j, slot) in row.iter_mut().enumerate() {
            let ln_c = self.ln_fact[n] - self.ln_fact[j] - self.ln_fact[n - j];
            *slot = float::exp(ln_c + j as f64 * ln_r + (n - j) as f64 * ln_1mr);
        }
        row
    }
}

/// True label 0: every answer is a fresh symbol-flip of 0, so each label
/// `j >= 1` collects `N_j` hits from a shared multinomial. The element stays
/// correct iff no label reaches its firing count.
fn error_given_label_zero(
    k: usize,
    qp: f64,
    d: usize,
    fire_at: &[usize],
    tables: &PmfTables,
) -> f64 {
    // sequential binomial decomposition of the multinomial counts
    let mut state = vec![0.0; d + 1];
    state[0] = 1.0;
    for j in 1..k {
        let remaining_mass = 1.0 - (j as f64 - 1.0) * qp;
        let r = if remaining_mass <= 0.0 {
            1.0
        } else {
            (qp / remaining_mass).clamp(0.0, 1.0)
        };
        let cap = fire_at[j - 1]; // require N_j < cap
        if cap == 0 {
            return 1.0; // label j always fires
        }
        let mut next = vec![0.0; d + 1];
        for (used, &w) in state.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let rem = d - used;
            let row = tables.binom_row(rem, r);
            for (a, &pa) in row.iter().enumerate().take(cap.min(rem + 1)) {
                next[used + a] += w * pa;
            }
        }
        state = next;
    }
    1.0 - state.iter().sum::<f64>()
}

/// True label `i >= 1`: condition on the number of same-label neighbors,
/// then walk labels `1..=i` jointly across the same-label and
/// different-label answer classes. The element decodes correctly iff every
/// earlier label stays below its firing count and label `i` reaches its own.
#[allow(clippy::too_many_arguments)]
fn error_given_label(
    p_i: f64,
    i: usize,
    _k: usize,
    q: f64,
    qp: f64,
    d: usize,
    fire_at: &[usize],
    tables: &PmfTables,
) -> f64 {
    let neighbor_counts = tables.binom_row(d, p_i);
    let mut err = 0.0;
    for (same, &w_same) in neighbor_counts.iter().enumerate() {
        if w_same == 0.0 {
            continue;
        }
        let correct = prob_correct_given_neighbors(same, d - same, i, q, qp, fire_at, tables);
        err += w_same * (1.0 - correct);
    }
    err.clamp(0.0, 1.0)
}

/// `Pr(forall j < i: N_j < fire_at[j-1]  and  N_i >= fire_at[i-1])` given
/// `n_same` same-label and `n_diff` different-label incident queries.
///
/// Class probabilities per answer: same-label queries read the true label
/// `i` with probability `1 - q` and each wrong symbol with `q/(k-1)`;
/// different-label queries read 0 with probability `1 - q` and each nonzero
/// symbol with `q/(k-1)`.
fn prob_correct_given_neighbors(
    n_same: usize,
    n_diff: usize,
    i: usize,
    q: f64,
    qp: f64,
    fire_at: &[usize],
    tables: &PmfTables,
) -> f64 {
    if i == 1 {
        // no earlier labels: Pr(A + B >= fire) with A ~ Bin(n_same, 1-q)
        // and B ~ Bin(n_diff, q/(k-1)); keeps the common binary case O(d)
        return tail_of_two_binomials(n_same, 1.0 - q, n_diff, qp, fire_at[0], tables);
    }
    // joint state over (answers consumed in same class, in diff class)
    let mut state = vec![vec![0.0f64; n_diff + 1]; n_same + 1];
    state[0][0] = 1.0;
    let conditional = |numerator: f64, removed: f64| -> f64 {
        let rem_mass = 1.0 - removed;
        if rem_mass <= 0.0 {
            1.0
        } else {
            (numerator / rem_mass).clamp(0.0, 1.0)
        }
    };
    for j in 1..i {
        let cap = fire_at[j - 1]; // require a + b < cap
        if cap == 0 {
            return 0.0; // label j always fires first
        }
        let removed = (j as f64 - 1.0) * qp;
        let r_same = conditional(qp, removed);
        let r_diff = conditional(qp, removed);
        let mut next = vec![vec![0.0f64; n_diff + 1]; n_same + 1];
        for (used_a, row_state) in state.iter().enumerate() {
            let rem_a = n_same - used_a;
            let mut pmf_a: Option<Vec<f64>> = None;
            for (used_b, &w) in row_state.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let rem_b = n_diff - used_b;
                let pa = pmf_a.get_or_insert_with(|| tables.binom_row(rem_a, r_same));
                let pb = tables.binom_row(rem_b, r_diff);
                for a in 0..cap.min(rem_a + 1) {
                    let limit_b = cap - 1 - a;
                    for (b, &pb_b) in pb.iter().enumerate().take(limit_b.min(rem_b) + 1) {
                        next[used_a + a][used_b + b] += w * pa[a] * pb_b;
                    }
                }
            }
        }
        state = next;
    }
    // final label i must fire: N_i = a + b >= fire_at[i-1]
    let need = fire_at[i - 1];
    let removed = (i as f64 - 1.0) * qp;
    let r_same = conditional(1.0 - q, removed);
    let r_diff = conditional(qp, removed);
    let mut correct = 0.0;
    for (used_a, row_state) in state.iter().enumerate() {
        let rem_a = n_same - used_a;
        let mut pmf_a: Option<Vec<f64>> = None;
        for (used_b, &w) in row_state.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let rem_b = n_diff - used_b;
            let pa = pmf_a.get_or_insert_with(|| tables.binom_row(rem_a, r_same));
            let pb = tables.binom_row(rem_b, r_diff);
            // prefix sums of pb for Pr(b <= t)
            let mut cdf = pb.clone();
            for t in 1..cdf.len() {
                cdf[t] += cdf[t - 1];
            }
            let mut below = 0.0;
            if need > 0 {
                for (a, &pa_a) in pa.iter().enumerate().take(need.min(rem_a + 1)) {
                    let limit_b = (need - 1 - a).min(rem_b);
                    below += pa_a * cdf[limit_b];
                }
            }
            correct += w * (1.0 - below);
        }
    }
    correct.clamp(0.0, 1.0)
}

/// `Pr(A + B >= need)` for independent `A ~ Bin(na, ra)`, `B ~ Bin(nb, rb)`.
fn tail_of_two_binomials(
    na: usize,
    ra: f64,
    nb: usize,
    rb: f64,
    need: usize,
    tables: &PmfTables,
) -> f64 {
    if need == 0 {
        return 1.0;
    }
    let pa = tables.binom_row(na, ra);
    let pb = tables.binom_row(nb, rb);
    let mut cdf = pb;
    for t in 1..cdf.len() {
        cdf[t] += cdf[t - 1];
    }
    let mut below = 0.0;
    for (a, &pa_a) in pa.iter().enumerate().take(need.min(na + 1)) {
        let limit_b = (need - 1 - a).min(nb);
        below += pa_a * cdf[limit_b];
    }
    (1.0 - below).clamp(0.0, 1.0)
}

/// Degree (and rate `m/n = d/2`) returned by the budget search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeForTarget {
    pub d: usize,
    pub m_per_n: f64,
    /// Target was vacuous (>= 1); the minimal supported degree is reported.
    pub vacuous: bool,
}

const DEGREE_SEARCH_CAP: usize = 2048;

/// Smallest even degree whose exact threshold-decoder error meets
/// `target_delta`, found by doubling then bisection. Requires a channel
/// below capacity, `q < (k-1)/k`.
pub fn queries_for_target_delta(
    prior: &Prior,
    q: f64,
    target_delta: f64,
) -> Result<Feasibility<DegreeForTarget>> {
    let k = prior.k() as f64;
    if !(0.0..(k - 1.0) / k).contains(&q) {
        return Err(Error::Domain {
            name: "q",
            value: q,
            constraint: "0 <= q < (k-1)/k",
        });
    }
    if target_delta <= 0.0 {
        return Err(Error::Domain {
            name: "target_delta",
            value: target_delta,
            constraint: "target_delta > 0",
        });
    }
    if target_delta >= 1.0 {
        return Ok(Feasibility::Feasible(DegreeForTarget {
            d: 2,
            m_per_n: 1.0,
            vacuous: true,
        }));
    }
    let error_at = |d: usize| -> Result<f64> { Ok(alg1_exact_error(prior, q, d)?.delta) };
    if error_at(2)? <= target_delta {
        return Ok(Feasibility::Feasible(DegreeForTarget {
            d: 2,
            m_per_n: 1.0,
            vacuous: false,
        }));
    }
    // doubling phase
    let mut lo = 2usize; // fails
    let mut hi = None;
    let mut d = 4usize;
    while d <= DEGREE_SEARCH_CAP {
        if error_at(d)? <= target_delta {
            hi = Some(d);
            break;
        }
        lo = d;
        d *= 2;
    }
    let Some(mut hi) = hi else {
        return Ok(Feasibility::Infeasible);
    };
    // bisection on even degrees: error(lo) > target, error(hi) <= target
    while hi - lo > 2 {
        let mid = ((lo + hi) / 2) & !1;
        let mid = if mid <= lo { lo + 2 } else { mid };
        if error_at(mid)? <= target_delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Feasibility::Feasible(DegreeForTarget {
        d: hi,
        m_per_n: hi as f64 / 2.0,
        vacuous: false,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::binomial_tail;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Exhaustive oracle: enumerate every neighbor-label pattern and every
    /// incident-answer pattern, weighted by prior and channel.
    fn brute_force_error(prior: &Prior, q: f64, d: usize, fire_at: &[usize]) -> ExactError {
        let k = prior.k();
        let qp = q / (k as f64 - 1.0);
        let channel = |truth: u32, observed: u32| -> f64 {
            if truth == observed {
                1.0 - q
            } else {
                qp
            }
        };
        let total = (k as u64).pow(d as u32);
        let mut per_label = vec![0.0; k as usize];
        for x_u in 0..k {
            let mut err = 0.0;
            for nbr_code in 0..total {
                let mut c = nbr_code;
                let mut nbr_weight = 1.0;
                let mut truths = vec![0u32; d];
                for t in truths.iter_mut() {
                    let label = (c % k as u64) as u32;
                    c /= k as u64;
                    nbr_weight *= prior.prob(label);
                    *t = if label == x_u { x_u } else { 0 };
                }
                if nbr_weight == 0.0 {
                    continue;
                }
                for ans_code in 0..total {
                    let mut c = ans_code;
                    let mut ans_weight = 1.0;
                    let mut counts = vec![0usize; k as usize];
                    for &t in &truths {
                        let a = (c % k as u64) as u32;
                        c /= k as u64;
                        ans_weight *= channel(t, a);
                        counts[a as usize] += 1;
                    }
                    let mut decoded = 0u32;
                    for i in 1..k {
                        if counts[i as usize] >= fire_at[(i - 1) as usize] {
                            decoded = i;
                            break;
                        }
                    }
                    if decoded != x_u {
                        err += nbr_weight * ans_weight;
                    }
                }
            }
            per_label[x_u as usize] = err;
        }
        let delta = per_label
            .iter()
            .enumerate()
            .map(|(i, &e)| prior.prob(i as u32) * e)
            .sum();
        ExactError { delta, per_label }
    }

    #[test]
    fn zero_noise_has_no_false_fires() {
        let prior = Prior::new(vec![0.6, 0.25, 0.15]).unwrap();
        for d in [1usize, 4, 9] {
            let e = alg1_exact_error(&prior, 0.0, d).unwrap();
            assert_eq!(e.per_label[0], 0.0, "d {d}");
            // with q = 0 the only failure mode is too few same-label
            // neighbors: err_i = Pr(Bin(d, p_i) < fire_i)
            let fire = crate::decoders::alg1_fire_counts(&prior, 0.0, d).unwrap();
            for i in 1..3usize {
                let expected = if fire[i - 1] == 0 {
                    0.0
                } else {
                    1.0 - binomial_tail(d as u64, prior.prob(i as u32), fire[i - 1] as u64, d as u64)
                        .unwrap()
                };
                assert!(
                    close(e.per_label[i], expected, 1e-12),
                    "d {d} label {i}: {} vs {expected}",
                    e.per_label[i]
                );
            }
        }
    }

    #[test]
    fn coin_flip_channel_loses_half() {
        // q = 1/2 on binary equal priors: answers carry no information and
        // the threshold sits exactly at the median
        let prior = Prior::binary(0.5).unwrap();
        let e = alg1_exact_error(&prior, 0.5, 100).unwrap();
        assert!(close(e.delta, 0.5, 1e-9), "delta {}", e.delta);
    }

    #[test]
    fn matches_brute_force_k2() {
        let prior = Prior::binary(0.3).unwrap();
        for d in 1..=4usize {
            for q in [0.0, 0.1, 0.17, 0.45, 1.0] {
                let fire = crate::decoders::alg1_fire_counts(&prior, q, d).unwrap();
                let fast = alg1_exact_error(&prior, q, d).unwrap();
                let brute = brute_force_error(&prior, q, d, &fire);
                assert!(
                    close(fast.delta, brute.delta, 1e-10),
                    "d {d} q {q}: {} vs {}",
                    fast.delta,
                    brute.delta
                );
                for i in 0..2 {
                    assert!(close(fast.per_label[i], brute.per_label[i], 1e-10));
                }
            }
        }
    }

    #[test]
    fn matches_brute_force_k3() {
        let prior = Prior::new(vec![0.5, 0.3, 0.2]).unwrap();
        for d in 1..=4usize {
            for q in [0.0, 0.1, 0.3] {
                let fire = crate::decoders::alg1_fire_counts(&prior, q, d).unwrap();
                let fast = alg1_exact_error(&prior, q, d).unwrap();
                let brute = brute_force_error(&prior, q, d, &fire);
                assert!(
                    close(fast.delta, brute.delta, 1e-10),
                    "d {d} q {q}: {} vs {}",
                    fast.delta,
                    brute.delta
                );
                for i in 0..3 {
                    assert!(
                        close(fast.per_label[i], brute.per_label[i], 1e-10),
                        "d {d} q {q} label {i}: {} vs {}",
                        fast.per_label[i],
                        brute.per_label[i]
                    );
                }
            }
        }
    }

    #[test]
    fn matches_brute_force_with_override() {
        let prior = Prior::new(vec![0.5, 0.3, 0.2]).unwrap();
        for fire in [[1usize, 1], [2, 2], [3, 2], [5, 5]] {
            let fast = alg1_exact_error_with_thresholds(&prior, 0.2, 4, &fire).unwrap();
            let brute = brute_force_error(&prior, 0.2, 4, &fire);
            assert!(
                close(fast.delta, brute.delta, 1e-10),
                "fire {fire:?}: {} vs {}",
                fast.delta,
                brute.delta
            );
        }
    }

    #[test]
    fn probabilities_stay_in_unit_interval() {
        let prior = Prior::new(vec![0.5, 0.3, 0.2]).unwrap();
        for d in [1usize, 3, 10, 25] {
            for q in [0.0, 0.2, 0.5, 0.9, 1.0] {
                let e = alg1_exact_error(&prior, q, d).unwrap();
                assert!((0.0..=1.0).contains(&e.delta));
                for &x in &e.per_label {
                    assert!((0.0..=1.0).contains(&x));
                }
            }
        }
    }

    #[test]
    fn budget_search_minimality() {
        let prior = Prior::binary(0.5).unwrap();
        let q = 0.1;
        for target in [0.05, 0.01, 0.001] {
            let found = queries_for_target_delta(&prior, q, target)
                .unwrap()
                .into_option()
                .expect("feasible");
            let at = alg1_exact_error(&prior, q, found.d).unwrap().delta;
            assert!(at <= target, "target {target}: error {at} at d {}", found.d);
            assert_eq!(found.m_per_n, found.d as f64 / 2.0);
            if found.d > 2 {
                let before = alg1_exact_error(&prior, q, found.d - 2).unwrap().delta;
                assert!(
                    before > target,
                    "target {target}: d - 2 already reaches it"
                );
            }
        }
    }

    #[test]
    fn budget_grows_logarithmically_in_inverse_target() {
        let prior = Prior::binary(0.5).unwrap();
        let q = 0.1;
        for target in [0.1, 0.01, 0.001] {
            let d1 = queries_for_target_delta(&prior, q, target)
                .unwrap()
                .into_option()
                .unwrap()
                .d;
            let d2 = queries_for_target_delta(&prior, q, target / 10.0)
                .unwrap()
                .into_option()
                .unwrap()
                .d;
            assert!(
                (d2 as f64) <= 4.0 * d1 as f64,
                "target {target}: {d1} -> {d2}"
            );
        }
    }

    #[test]
    fn budget_search_edges() {
        let prior = Prior::binary(0.5).unwrap();
        let vacuous = queries_for_target_delta(&prior, 0.1, 1.0)
            .unwrap()
            .into_option()
            .unwrap();
        assert_eq!(vacuous.d, 2);
        assert!(vacuous.vacuous);
        // channel at capacity is rejected outright
        assert!(queries_for_target_delta(&prior, 0.5, 0.01).is_err());
        // near-capacity channel cannot reach a tiny target within the cap
        let near = queries_for_target_delta(&prior, 0.49, 1e-6).unwrap();
        assert!(!near.is_feasible());
    }
}
