//! Numerically stable information-theoretic and combinatorial primitives.
//!
//! Entropies are reported in bits unless an explicit [`Unit`] argument says
//! otherwise; every probability accumulation runs in log space so that tails
//! stay meaningful out to degrees around 10^4.

use crate::float;
use crate::{Error, Result};
use alloc::vec;

const LN_2: f64 = core::f64::consts::LN_2;

/// Logarithm base for entropy-like quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Bits,
    Nats,
}

/// A probability carried in the natural-log domain.
///
/// The wrapped value is never NaN and `exp(value)` always lies in `[0, 1]`;
/// probability zero is represented by negative infinity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    /// Probability 0.
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    /// Probability 1.
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_prob(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                constraint: "0 <= p <= 1",
            });
        }
        Ok(LogProb(float::ln(p)))
    }

    /// Wraps a natural-log value. Small positive values (rounding slop from
    /// log-space accumulation) are clamped to 0; anything above 1e-9 or NaN
    /// is rejected.
    pub fn from_ln(ln: f64) -> Result<Self> {
        if ln.is_nan() || ln > 1e-9 {
            return Err(Error::Domain {
                name: "ln",
                value: ln,
                constraint: "ln <= 0",
            });
        }
        Ok(LogProb(ln.min(0.0)))
    }

    pub fn ln_value(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        float::exp(self.0)
    }

    /// Product of probabilities.
    #[must_use]
    pub fn and(self, other: LogProb) -> LogProb {
        LogProb(self.0 + other.0)
    }

    /// Sum of probabilities of disjoint events, clamped at 1.
    #[must_use]
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: LogProb) -> LogProb {
        LogProb(log_add_exp(self.0, other.0).min(0.0))
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + float::ln_1p(float::exp(lo - hi))
}

pub(crate) fn ln_factorial(n: u64) -> f64 {
    float::ln_gamma(n as f64 + 1.0)
}

pub(crate) fn ln_binomial_coeff(n: u64, j: u64) -> f64 {
    if j > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(j) - ln_factorial(n - j)
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name,
            value: x,
            constraint: "0 <= value <= 1",
        });
    }
    Ok(())
}

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)` in bits, with
/// `H(0) = H(1) = 0` by continuity.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_unit_interval("x", x)?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * float::log2(x) - (1.0 - x) * float::log2(1.0 - x))
}

/// Shannon entropy of a probability vector, in bits. The vector must have at
/// least two entries, each in `[0, 1]`, summing to 1 within 1e-9.
pub fn prior_entropy(probs: &[f64]) -> Result<f64> {
    validate_prior(probs)?;
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * float::log2(p);
        }
    }
    Ok(h)
}

pub(crate) fn validate_prior(probs: &[f64]) -> Result<()> {
    if probs.len() < 2 {
        return Err(Error::InvalidPrior(alloc::format!(
            "needs k >= 2 entries, got {}",
            probs.len()
        )));
    }
    let mut sum = 0.0;
    for &p in probs {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidPrior(alloc::format!(
                "entry {p} outside [0, 1]"
            )));
        }
        sum += p;
    }
    if float::abs(sum - 1.0) > 1e-9 {
        return Err(Error::InvalidPrior(alloc::format!("sums to {sum}, not 1")));
    }
    Ok(())
}

/// Inverse of [`binary_entropy`] on `[0, 1/2]`, by bisection to absolute
/// tolerance 1e-12 (typically much better).
pub fn binary_entropy_inverse(y: f64) -> Result<f64> {
    check_unit_interval("y", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        // H is strictly increasing on [0, 1/2]
        if binary_entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Kullback-Leibler divergence between Bernoulli(a) and Bernoulli(b):
/// `D(a||b) = a log(a/b) + (1-a) log((1-a)/(1-b))` in the requested unit.
///
/// `b` on the boundary with `a != b` is signaled as an explicit
/// infinite-divergence error rather than returning infinity.
pub fn kl_bernoulli(a: f64, b: f64, unit: Unit) -> Result<f64> {
    check_unit_interval("a", a)?;
    check_unit_interval("b", b)?;
    if a == b {
        return Ok(0.0);
    }
    if b == 0.0 || b == 1.0 {
        return Err(Error::InfiniteDivergence { a, b });
    }
    let mut nats = 0.0;
    if a > 0.0 {
        nats += a * float::ln(a / b);
    }
    if a < 1.0 {
        nats += (1.0 - a) * float::ln((1.0 - a) / (1.0 - b));
    }
    // Gibbs: the divergence is nonneagative; clip rounding slop near a == b.
    let nats = nats.max(0.0);
    Ok(match unit {
        Unit::Nats => nats,
        Unit::Bits => nats / LN_2,
    })
}

/// Derivative of the binary entropy, `h'(x) = log((1-x)/x)`, in the
/// requested unit. Undefined at the endpoints.
pub fn entropy_derivative(x: f64, unit: Unit) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            constraint: "0 < x < 1",
        });
    }
    let nats = float::ln((1.0 - x) / x);
    Ok(match unit {
        Unit::Nats => nats,
        Unit::Bits => nats / LN_2,
    })
}

/// Number of surjections from a `d`-set onto a `k`-set.
///
/// Exact integer arithmetic (the inclusion-exclusion alternating sum) as
/// long as every intermediate fits in 128 bits; beyond that, a log-domain
/// value computed through the Stirling-number recurrence, flagged by the
/// variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Surjections {
    Exact(u128),
    /// Natural log of the count; used when the exact path would overflow.
    LogApprox(f64),
}

impl Surjections {
    pub fn is_exact(&self) -> bool {
        matches!(self, Surjections::Exact(_))
    }

    /// Natural log of the count (negative infinity for zero).
    pub fn ln_value(&self) -> f64 {
        match *self {
            Surjections::Exact(0) => f64::NEG_INFINITY,
            Surjections::Exact(v) => float::ln(v as f64),
            Surjections::LogApprox(ln) => ln,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Surjections::Exact(v) => v as f64,
            Surjections::LogApprox(ln) => float::exp(ln),
        }
    }
}

/// Counts surjections from a `d`-set onto a `k`-set,
/// `f(k, d) = sum_{i=0}^{k} (-1)^i C(k, i) (k-i)^d`.
///
/// Returns zero when `k > d` (or `k = 0 < d`).
pub fn surjection_count(k: u64, d: u64) -> Surjections {
    if k > d {
        return Surjections::Exact(0);
    }
    if k == 0 {
        // only the d = 0 empty map is a surjection onto the empty set
        return Surjections::Exact(u128::from(d == 0));
    }
    match surjection_count_exact(k, d) {
        Some(v) => Surjections::Exact(v),
        None => Surjections::LogApprox(ln_factorial(k) + ln_stirling2(d, k)),
    }
}

fn surjection_count_exact(k: u64, d: u64) -> Option<u128> {
    let exp = u32::try_from(d).ok()?;
    let mut acc: i128 = 0;
    let mut coeff: u128 = 1; // C(k, i), updated multiplicatively
    for i in 0..=k {
        if i > 0 {
            coeff = coeff
                .checked_mul((k - i + 1) as u128)?
                .checked_div(i as u128)?;
        }
        let base = (k - i) as u128;
        let pow = base.checked_pow(exp)?;
        let term = i128::try_from(coeff.checked_mul(pow)?).ok()?;
        acc = if i % 2 == 0 {
            acc.checked_add(term)?
        } else {
            acc.checked_sub(term)?
        };
    }
    debug_assert!(acc >= 0);
    Some(acc.max(0) as u128)
}

/// `ln S(d, k)` for Stirling numbers of the second kind, via the positive
/// recurrence `S(d, k) = k S(d-1, k) + S(d-1, k-1)` carried in log space.
fn ln_stirling2(d: u64, k: u64) -> f64 {
    if k > d {
        return f64::NEG_INFINITY;
    }
    let k = k as usize;
    let mut row = vec![f64::NEG_INFINITY; k + 1];
    row[0] = 0.0; // S(0, 0) = 1
    for _ in 1..=d {
        let mut next = vec![f64::NEG_INFINITY; k + 1];
        for j in 1..=k {
            next[j] = log_add_exp(float::ln(j as f64) + row[j], row[j - 1]);
        }
        row = next;
    }
    row[k]
}

/// Binomial tail `sum_{j=lo}^{hi} C(n, j) p^j (1-p)^(n-j)`, accumulated in
/// log space with compensated summation.
pub fn binomial_tail(n: u64, p: f64, lo: u64, hi: u64) -> Result<f64> {
    check_unit_interval("p", p)?;
    if lo > hi || hi > n {
        return Err(Error::InvalidRange { n, lo, hi });
    }
    if p == 0.0 {
        return Ok(if lo == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if hi == n { 1.0 } else { 0.0 });
    }
    let ln_p = float::ln(p);
    let ln_q = float::ln(1.0 - p);
    let ln_term = |j: u64| ln_binomial_coeff(n, j) + j as f64 * ln_p + (n - j) as f64 * ln_q;
    let mut max = f64::NEG_INFINITY;
    for j in lo..=hi {
        max = max.max(ln_term(j));
    }
    if max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    // Kahan-compensated sum of exp(term - max)
    let mut sum = 0.0;
    let mut comp = 0.0;
    for j in lo..=hi {
        let v = float::exp(ln_term(j) - max);
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok((float::exp(max) * sum).min(1.0))
}

/// Poisson pmf `e^(-lambda) lambda^d / d!`, evaluated in log space.
///
/// Requires `lambda >= 0`.
pub fn poisson_pmf(lambda: f64, d: u64) -> f64 {
    assert!(lambda >= 0.0, "lambda must be nonnegative");
    if lambda == 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    float::exp(-lambda + d as f64 * float::ln(lambda) - ln_factorial(d))
}
