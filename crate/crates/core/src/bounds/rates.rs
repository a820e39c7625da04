//! Query-rate bounds for exact recovery: the group-scheme guarantee and its
//! converse, the XOR-ensemble achievable rate, and the lower bounds it is
//! measured against.

use crate::bounds::Feasibility;
use crate::float;
use crate::math::{binary_entropy, kl_bernoulli, Unit};
use crate::{Error, Result};

/// Group-scheme sufficiency: query budget and failure-probability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SameClusterSufficiency {
    /// `n - n D(1/2||p) / (2 log2 n)` same-cluster queries.
    pub queries: f64,
    /// Failure probability bound `D(1/2||p) / (2 n log2 n)`.
    pub failure_bound: f64,
}

fn check_group_args(n: usize, p: f64, n_min: usize) -> Result<f64> {
    if n < n_min {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            constraint: "n too small for the group-scheme bound",
        });
    }
    if !(p > 0.0 && p < 1.0) || p == 0.5 {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1 and p != 1/2",
        });
    }
    kl_bernoulli(0.5, p, Unit::Bits)
}

/// Sufficient same-cluster query count for whole-vector recovery, with the
/// matching failure bound. Divergence in bits, logs base 2.
pub fn same_cluster_sufficient(n: usize, p: f64) -> Result<SameClusterSufficiency> {
    let div = check_group_args(n, p, 4)?;
    let log2n = float::log2(n as f64);
    Ok(SameClusterSufficiency {
        queries: n as f64 - n as f64 * div / (2.0 * log2n),
        failure_bound: div / (2.0 * n as f64 * log2n),
    })
}

/// Converse threshold: below `n - (2 + eps) n D(1/2||p) / log2 n`
/// same-cluster queries, whole-vector recovery fails with positive
/// probability.
pub fn same_cluster_necessary(n: usize, p: f64, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            constraint: "eps > 0",
        });
    }
    let div = check_group_args(n, p, 2)?;
    Ok(n as f64 - (2.0 + eps) * n as f64 * div / float::log2(n as f64))
}

/// Feasible XOR-ensemble operating point: normalized query rate `c / delta`
/// and the left degree that attains it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XorRate {
    pub rate: f64,
    pub left_degree: usize,
}

fn check_rate_args(p: f64, delta: usize, delta_min: usize) -> Result<()> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1/2",
        });
    }
    if delta < delta_min {
        return Err(Error::Domain {
            name: "delta",
            value: delta as f64,
            constraint: "delta too small",
        });
    }
    Ok(())
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    f1.max(f2)
}

/// Dense grid scan plus golden-section refinement around the best point.
fn grid_max(f: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64, step: f64) -> f64 {
    if hi <= lo {
        return f(lo.min(hi).max(lo));
    }
    let steps = ((hi - lo) / step) as usize + 1;
    let mut best_x = lo;
    let mut best = f(lo);
    for i in 1..=steps {
        let x = (lo + i as f64 * step).min(hi);
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
        if x >= hi {
            break;
        }
    }
    let refine_lo = (best_x - step).max(lo);
    let refine_hi = (best_x + step).min(hi);
    best.max(golden_max(f, refine_lo, refine_hi))
}

/// Achievable XOR-ensemble rate at prior `p` and query arity `delta`:
/// the smallest integer left degree `c` in `[3, delta)` whose normalized
/// rate `c/delta` strictly exceeds the ensemble's error exponent threshold
///
/// `max_{beta <= x <= 2p} [p H(x/2p) + (1-p) H(x/2(1-p))] / [1 - log2(1 + (1-2x)^delta)]`
///
/// with `beta = (2/delta) (1 / (2 delta^2 p (1-p) e^{3c/2}))^{1/(c-2)}`.
/// Degrees whose `beta` exceeds `2p` leave an empty maximization range and
/// are skipped as undefined.
pub fn xor_achievable_rate(p: f64, delta: usize) -> Result<Feasibility<XorRate>> {
    check_rate_args(p, delta, 4)?;
    let delta_f = delta as f64;
    for c in 3..delta {
        let c_f = c as f64;
        let base = 1.0 / (2.0 * delta_f * delta_f * p * (1.0 - p) * float::exp(1.5 * c_f));
        let beta = (2.0 / delta_f) * float::powf(base, 1.0 / (c_f - 2.0));
        if beta > 2.0 * p {
            continue;
        }
        let objective = |x: f64| {
            let numerator = p * binary_entropy(x / (2.0 * p)).unwrap_or(f64::NAN)
                + (1.0 - p) * binary_entropy(x / (2.0 * (1.0 - p))).unwrap_or(f64::NAN);
            let denominator = 1.0 - float::log2(1.0 + float::powi(1.0 - 2.0 * x, delta as i32));
            numerator / denominator
        };
        let threshold = grid_max(objective, beta, 2.0 * p, 1e-4);
        if c_f / delta_f > threshold {
            return Ok(Feasibility::Feasible(XorRate {
                rate: c_f / delta_f,
                left_degree: c,
            }));
        }
    }
    Ok(Feasibility::Infeasible)
}

/// The earlier ensemble analysis restated for comparison: feasibility of
/// rate `c/delta` requires some `gamma` in `[beta, 1/2]` with
///
/// `max_{beta <= x <= gamma} [x log2 sqrt(2p(1-p)) + H(x)] / [1 - log2(1 + (1-2x)^delta)] < c/delta`
///
/// and `c/delta > H(p) / [1 - log2(1 + (1-2 gamma)^delta)]`, where
/// `beta = (2/delta) exp(-12 - 6 ln(delta)/c)`.
pub fn miller_rate(p: f64, delta: usize) -> Result<Feasibility<XorRate>> {
    check_rate_args(p, delta, 4)?;
    let delta_f = delta as f64;
    let h_p = binary_entropy(p)?;
    let half_log = 0.5 * float::log2(2.0 * p * (1.0 - p));
    for c in 3..delta {
        let c_f = c as f64;
        let rate = c_f / delta_f;
        let beta = (2.0 / delta_f) * float::exp(-12.0 - 6.0 * float::ln(delta_f) / c_f);
        if beta > 0.5 {
            continue;
        }
        let f1 = |x: f64| {
            let numerator = x * half_log + binary_entropy(x).unwrap_or(f64::NAN);
            let denominator = 1.0 - float::log2(1.0 + float::powi(1.0 - 2.0 * x, delta as i32));
            numerator / denominator
        };
        // march gamma across [beta, 1/2], carrying the running max of f1
        let step = 1e-4;
        let steps = ((0.5 - beta) / step) as usize + 1;
        let mut running_max = f64::NEG_INFINITY;
        let mut feasible = false;
        for i in 0..=steps {
            let gamma = (beta + i as f64 * step).min(0.5);
            running_max = running_max.max(f1(gamma));
            let rhs = h_p / (1.0 - float::log2(1.0 + float::powi(1.0 - 2.0 * gamma, delta as i32)));
            if running_max < rate && rate > rhs {
                feasible = true;
                break;
            }
            if gamma >= 0.5 {
                break;
            }
        }
        if feasible {
            return Ok(Feasibility::Feasible(XorRate {
                rate,
                left_degree: c,
            }));
        }
    }
    Ok(Feasibility::Infeasible)
}

/// Parity-query (XOR) converse rate `H(p) / H((1 + (1-2p)^delta) / 2)`,
/// in bits per element.
pub fn gallager_lower_rate(p: f64, delta: usize) -> Result<f64> {
    check_rate_args(p, delta, 2)?;
    let arg = (1.0 + float::powi(1.0 - 2.0 * p, delta as i32)) / 2.0;
    Ok(binary_entropy(p)? / binary_entropy(arg)?)
}

/// Counting converse for arbitrary query functions:
/// `H(p) max{1, max_rho (1-rho) / H((1-rho) r(p) delta / rho)}` with
/// `r(p) = 2p(1-p)`; the rho search is restricted to the monotone branch
/// where the entropy argument lies in `(0, 1/2]`.
pub fn counting_lower_rate(p: f64, delta: usize) -> Result<f64> {
    check_rate_args(p, delta, 2)?;
    let r = 2.0 * p * (1.0 - p);
    let h_p = binary_entropy(p)?;
    let mut best_ratio = 1.0_f64;
    let mut rho = 1e-3;
    while rho < 1.0 {
        let arg = (1.0 - rho) * r * delta as f64 / rho;
        if arg > 0.0 && arg <= 0.5 {
            let ratio = (1.0 - rho) / binary_entropy(arg)?;
            best_ratio = best_ratio.max(ratio);
        }
        rho += 1e-3;
    }
    Ok(h_p * best_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{kl_bernoulli, Unit};

    #[test]
    fn sufficiency_formula() {
        let n = 10_000;
        let p = 0.3;
        let s = same_cluster_sufficient(n, p).unwrap();
        let div = kl_bernoulli(0.5, p, Unit::Bits).unwrap();
        let expected = n as f64 - n as f64 * div / (2.0 * (n as f64).log2());
        assert!((s.queries - expected).abs() < 1e-9);
        assert!(s.failure_bound < 1e-6, "bound {}", s.failure_bound);
        assert!(same_cluster_sufficient(3, 0.3).is_err());
        assert!(same_cluster_sufficient(100, 0.5).is_err());
    }

    #[test]
    fn sufficiency_approaches_n_near_half() {
        let n = 1000;
        let mut last = 0.0;
        for p in [0.3, 0.4, 0.45, 0.49, 0.499] {
            let s = same_cluster_sufficient(n, p).unwrap();
            assert!(s.queries > last);
            last = s.queries;
        }
        assert!(n as f64 - last < 1.0);
    }

    #[test]
    fn necessary_monotone_in_eps_and_below_sufficient() {
        let n = 10_000;
        let p = 0.3;
        let a = same_cluster_necessary(n, p, 0.01).unwrap();
        let b = same_cluster_necessary(n, p, 1.0).unwrap();
        let c = same_cluster_necessary(n, p, 10.0).unwrap();
        assert!(a > b && b > c);
        // converse sits below achievability across a grid
        for n in [100usize, 1000, 10_000] {
            for p10 in 1..5 {
                let p = p10 as f64 / 10.0;
                let necessary = same_cluster_necessary(n, p, 0.01).unwrap();
                let sufficient = same_cluster_sufficient(n, p).unwrap().queries;
                assert!(necessary < sufficient, "n {n} p {p}");
            }
        }
        let div = kl_bernoulli(0.5, 0.3, Unit::Bits).unwrap();
        let direct = 10_000.0 - 2.01 * 10_000.0 * div / (10_000.0f64).log2();
        assert!((same_cluster_necessary(10_000, 0.3, 0.01).unwrap() - direct).abs() < 1e-9);
        assert!(same_cluster_necessary(100, 0.3, 0.0).is_err());
    }

    #[test]
    fn xor_rate_feasible_at_small_p() {
        let r = xor_achievable_rate(0.05, 10).unwrap();
        let point = r.feasible().expect("feasible at p = 0.05");
        assert!(point.rate < 1.0);
        assert!(point.left_degree >= 3 && point.left_degree < 10);
    }

    #[test]
    fn xor_rate_dominates_lower_bounds_on_grid() {
        let delta = 10;
        for i in 1..=9 {
            let p = 0.05 * i as f64;
            let achievable = xor_achievable_rate(p, delta).unwrap();
            if let Some(point) = achievable.feasible() {
                let gallager = gallager_lower_rate(p, delta).unwrap();
                let counting = counting_lower_rate(p, delta).unwrap();
                let trivial = 1.0 / delta as f64;
                assert!(point.rate >= gallager - 1e-12, "p {p}");
                assert!(point.rate >= counting - 1e-12, "p {p}");
                assert!(point.rate >= trivial - 1e-12, "p {p}");
            }
        }
    }

    #[test]
    fn miller_curves_computable() {
        // At delta = 7 and 10 the restated bound's beta (about e^{-12}) sits
        // where the objective already exceeds any rate c/delta < 1, so every
        // point comes back infeasible; the curve is still well defined.
        for delta in [7usize, 10] {
            for i in 1..=9 {
                let p = 0.05 * i as f64;
                let r = miller_rate(p, delta).unwrap();
                if let Feasibility::Feasible(point) = r {
                    assert!(point.rate > 0.0 && point.rate < 1.0);
                }
            }
        }
        // wider arity pushes beta into usable territory
        let mut any_feasible = false;
        for i in 1..=9 {
            let p = 0.05 * i as f64;
            if let Feasibility::Feasible(point) = miller_rate(p, 24).unwrap() {
                any_feasible = true;
                assert!(point.rate > 0.0 && point.rate < 1.0);
            }
        }
        assert!(any_feasible, "delta 24 should admit feasible points");
    }

    #[test]
    fn miller_beta_positive() {
        for delta in [5usize, 7, 10, 20] {
            for c in 3..delta {
                let beta = (2.0 / delta as f64)
                    * (-12.0 - 6.0 * (delta as f64).ln() / c as f64).exp();
                assert!(beta > 0.0);
            }
        }
    }

    #[test]
    fn gallager_known_behavior() {
        // direct arithmetic at p = 0.2, delta = 10
        let p: f64 = 0.2;
        let expected = {
            let h = |x: f64| -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
            h(p) / h((1.0 + (1.0 - 2.0 * p).powi(10)) / 2.0)
        };
        let got = gallager_lower_rate(p, 10).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!(got >= binary_entropy(p).unwrap());
        // delta -> infinity: rate -> H(p)
        let wide = gallager_lower_rate(p, 400).unwrap();
        assert!((wide - binary_entropy(p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn counting_floor_and_grid() {
        for i in 1..=9 {
            let p = 0.05 * i as f64;
            let rate = counting_lower_rate(p, 10).unwrap();
            let h = binary_entropy(p).unwrap();
            assert!(rate >= h - 1e-12, "floor violated at p {p}");
            assert!(rate >= 0.1 - 1e-12, "1/delta cross-check at p {p}");
        }
    }

    #[test]
    fn denominator_sanity_interior_point() {
        // at x = 1/2 the achievability denominator is exactly 1
        let denom = 1.0 - (1.0f64 + (1.0 - 2.0 * 0.5f64).powi(10)).log2();
        assert_eq!(denom, 1.0);
    }
}
