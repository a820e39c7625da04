//! Distortion bounds for approximate recovery with noiseless queries.

use crate::float;
use crate::math::{
    binary_entropy, binary_entropy_inverse, entropy_derivative, ln_binomial_coeff, poisson_pmf,
    surjection_count, Unit,
};
use crate::{Error, Result};

const LN_2: f64 = core::f64::consts::LN_2;

/// A distortion value that may have been clamped at zero when the rate
/// already exceeds the prior entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedDistortion {
    pub value: f64,
    pub clamped: bool,
}

/// Unconstrained distortion-rate benchmark `h^{-1}(H(p) - rate)`, rates in
/// bits per element. Rates above `H(p)` clamp to zero distortion, flagged.
pub fn distortion_rate_unconstrained(rate: f64, p: f64) -> Result<ClampedDistortion> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 <= p <= 1",
        });
    }
    if rate < 0.0 {
        return Err(Error::Domain {
            name: "rate",
            value: rate,
            constraint: "rate >= 0",
        });
    }
    let h_p = binary_entropy(p)?;
    if rate > h_p {
        return Ok(ClampedDistortion {
            value: 0.0,
            clamped: true,
        });
    }
    Ok(ClampedDistortion {
        value: binary_entropy_inverse(h_p - rate)?,
        clamped: false,
    })
}

/// Arity-constrained distortion lower bound:
///
/// `delta >= dt + (H(p) - H(dt)) / (h'(dt) (1 + e^{delta_arity h'(dt)}))`
///
/// with `dt = h^{-1}(H(p) - rate)`. Evaluated entirely in nats (the
/// exponential and `h'` must share base e); the `rate` argument is in bits.
pub fn distortion_lower_thm3(rate: f64, p: f64, delta: usize) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p <= 1/2",
        });
    }
    if delta < 2 {
        return Err(Error::Domain {
            name: "delta",
            value: delta as f64,
            constraint: "delta >= 2",
        });
    }
    let h_p_bits = binary_entropy(p)?;
    if !(rate > 0.0 && rate < h_p_bits) {
        return Err(Error::Domain {
            name: "rate",
            value: rate,
            constraint: "0 < rate < H(p)",
        });
    }
    let dt = binary_entropy_inverse(h_p_bits - rate)?;
    if dt <= 0.0 {
        return Ok(0.0);
    }
    if dt >= 0.5 - 1e-12 {
        // h' vanishes; the correction's limit is zero
        return Ok(dt);
    }
    let h_p_nats = h_p_bits * LN_2;
    let h_dt_nats = binary_entropy(dt)? * LN_2;
    let slope = entropy_derivative(dt, Unit::Nats)?;
    let growth = float::exp(delta as f64 * slope);
    let correction = if growth.is_infinite() {
        0.0
    } else {
        (h_p_nats - h_dt_nats) / (slope * (1.0 + growth))
    };
    Ok(dt + correction)
}

/// Linear-coding ("same cluster") distortion lower bound
/// `max(0, p (1 - rate / H(p)))`, rate in bits per element.
pub fn massey_bound(rate: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1",
        });
    }
    if rate < 0.0 {
        return Err(Error::Domain {
            name: "rate",
            value: rate,
            constraint: "rate >= 0",
        });
    }
    let h_p = binary_entropy(p)?;
    Ok((p * (1.0 - rate / h_p)).max(0.0))
}

/// Expected distortion of the random pairwise AND scheme with one-hop
/// decoding:
///
/// `delta = p e^{-2m/n} + sum_{d>=1} Pois(2m/n; d) sum_{k=1}^{d} C(n,k) f(k,d) / n^d (1-p)^k p`
///
/// with `f(k, d)` the surjection count. The Poisson series is truncated at
/// the first degree where the remaining tail mass drops below 1e-10
/// (never beyond `n`), unless an explicit `truncation` is given.
pub fn and_distortion_formula(
    n: usize,
    m: usize,
    p: f64,
    truncation: Option<usize>,
) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            constraint: "0 < p < 1",
        });
    }
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let lambda = 2.0 * m as f64 / n as f64;
    let cap = match truncation {
        Some(t) => t.min(n),
        None => default_truncation(lambda).min(n),
    };
    let ln_n = float::ln(n as f64);
    let ln_1mp = float::ln(1.0 - p);
    let mut total = poisson_pmf(lambda, 0);
    for d in 1..=cap as u64 {
        let pois = poisson_pmf(lambda, d);
        if pois == 0.0 {
            continue;
        }
        // occupancy average of (1-p)^K over K distinct endpoints of d draws
        let mut inner = 0.0;
        for k in 1..=d.min(n as u64) {
            let ln_term = ln_binomial_coeff(n as u64, k) + surjection_count(k, d).ln_value()
                - d as f64 * ln_n
                + k as f64 * ln_1mp;
            inner += float::exp(ln_term);
        }
        total += pois * inner;
    }
    Ok(p * total)
}

/// Smallest degree where the Poisson tail mass falls below 1e-10.
fn default_truncation(lambda: f64) -> usize {
    if lambda == 0.0 {
        return 0;
    }
    let mut cumulative = 0.0;
    let mut d = 0u64;
    loop {
        cumulative += poisson_pmf(lambda, d);
        if 1.0 - cumulative < 1e-10 {
            return d as usize;
        }
        d += 1;
        if d > 10_000_000 {
            return d as usize;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_known_points() {
        let p = 0.3;
        let h_p = binary_entropy(p).unwrap();
        let at_entropy = distortion_rate_unconstrained(h_p, p).unwrap();
        assert!(at_entropy.value.abs() < 1e-9);
        assert!(!at_entropy.clamped);
        // rate 0 gives back p (for p <= 1/2, h^{-1}(H(p)) = p)
        for p in [0.1, 0.25, 0.4, 0.5] {
            let v = distortion_rate_unconstrained(0.0, p).unwrap();
            assert!((v.value - p).abs() < 1e-10, "p {p}");
        }
        let mid = distortion_rate_unconstrained(0.5, 0.5).unwrap();
        assert!((mid.value - 0.110028).abs() < 1e-6);
        assert!(
            (binary_entropy(mid.value).unwrap() - 0.5).abs() < 1e-10,
            "bisection oracle"
        );
        let clamped = distortion_rate_unconstrained(1.5, 0.5).unwrap();
        assert_eq!(clamped.value, 0.0);
        assert!(clamped.clamped);
    }

    #[test]
    fn thm3_correction_nonnegative_and_dominates() {
        for p in [0.1, 0.25, 0.5] {
            let h_p = binary_entropy(p).unwrap();
            for i in 1..20 {
                let rate = h_p * i as f64 / 20.0;
                for delta in [2usize, 5, 10] {
                    let lower = distortion_lower_thm3(rate, p, delta).unwrap();
                    let unconstrained = distortion_rate_unconstrained(rate, p).unwrap().value;
                    assert!(
                        lower >= unconstrained - 1e-12,
                        "p {p} rate {rate} delta {delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm3_limit_large_delta() {
        let rate = 0.5;
        let p = 0.5;
        let unconstrained = distortion_rate_unconstrained(rate, p).unwrap().value;
        let wide = distortion_lower_thm3(rate, p, 100_000).unwrap();
        assert!((wide - unconstrained).abs() < 1e-9);
    }

    /// Structurally different re-evaluation of the arity-constrained bound,
    /// written against the displayed formula term by term.
    fn thm3_reference(rate_bits: f64, p: f64, delta: usize) -> f64 {
        let ln = |x: f64| x.ln();
        let h_nats = |x: f64| {
            if x == 0.0 || x == 1.0 {
                0.0
            } else {
                -x * ln(x) - (1.0 - x) * ln(1.0 - x)
            }
        };
        // invert H in nats by Newton from the bits-domain inverse seed
        let target = h_nats(p) - rate_bits * std::f64::consts::LN_2;
        let mut dt = 0.25;
        for _ in 0..200 {
            let fx = h_nats(dt) - target;
            let dfx = ln((1.0 - dt) / dt);
            let next = (dt - fx / dfx).clamp(1e-12, 0.5 - 1e-12);
            if (next - dt).abs() < 1e-15 {
                dt = next;
                break;
            }
            dt = next;
        }
        let hp = ln((1.0 - dt) / dt);
        dt + (h_nats(p) - h_nats(dt)) / (hp * (1.0 + (delta as f64 * hp).exp()))
    }

    #[test]
    fn thm3_matches_independent_reimplementation() {
        for i in 1..10 {
            let rate = i as f64 / 10.0;
            let ours = distortion_lower_thm3(rate, 0.5, 2).unwrap();
            let reference = thm3_reference(rate, 0.5, 2);
            assert!(
                (ours - reference).abs() < 1e-8,
                "rate {rate}: {ours} vs {reference}"
            );
        }
    }

    #[test]
    fn massey_known_points() {
        let h_half = 1.0;
        assert_eq!(massey_bound(h_half, 0.5).unwrap(), 0.0);
        assert_eq!(massey_bound(0.0, 0.5).unwrap(), 0.5);
        assert!((massey_bound(0.5, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(massey_bound(5.0, 0.3).unwrap(), 0.0);
        let p: f64 = 0.3;
        let rate = 0.4;
        let expected = p * (1.0 - rate / binary_entropy(p).unwrap());
        assert!((massey_bound(rate, p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn and_formula_no_queries_gives_p() {
        for p in [0.1, 0.3, 0.5] {
            let v = and_distortion_formula(1000, 0, p, None).unwrap();
            assert!((v - p).abs() < 1e-12, "p {p}");
        }
    }

    #[test]
    fn and_formula_monotone_in_m() {
        let mut last = f64::INFINITY;
        for m in [0usize, 100, 250, 500, 1000, 2000, 4000, 8000] {
            let v = and_distortion_formula(1000, m, 0.5, None).unwrap();
            assert!(v <= last + 1e-12, "m {m}: {v} > {last}");
            last = v;
        }
        // vanished by m >> n
        assert!(
            and_distortion_formula(1000, 20_000, 0.5, None).unwrap() < 1e-6
        );
    }

    #[test]
    fn and_formula_small_case_brute_force() {
        // n = 6, m = 2: assemble the double sum from first principles with
        // an independent inclusion-exclusion surjection counter; like the
        // printed series, the degree sum stops at n
        let n = 6usize;
        let p = 0.4;
        let lambda: f64 = 2.0 * 2.0 / 6.0;
        let factorial = |x: u64| (1..=x).product::<u64>() as f64;
        let choose = |a: u64, b: u64| factorial(a) / (factorial(b) * factorial(a - b));
        let surjections = |k: u64, d: u64| -> f64 {
            (0..=k)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    sign * choose(k, i) * ((k - i) as f64).powi(d as i32)
                })
                .sum()
        };
        let mut expected = (-lambda).exp();
        for d in 1..=n as u64 {
            let pois = (-lambda).exp() * lambda.powi(d as i32) / factorial(d);
            let mut inner = 0.0;
            for k in 1..=d {
                inner += choose(n as u64, k) * surjections(k, d) / (n as f64).powi(d as i32)
                    * (1.0f64 - p).powi(k as i32);
            }
            expected += pois * inner;
        }
        expected *= p;
        let got = and_distortion_formula(n, 2, p, None).unwrap();
        assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
    }
}
