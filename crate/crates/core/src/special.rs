//! Digamma on the positive axis and the alternating Lerch slice `Phi(-1, 1, a)`.

use crate::error::{invalid, Result};

/// Below this argument the upward recurrence is applied first.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// `B_{2k} / (2k)` for `k = 1..=7` (Bernoulli numbers through `B_14`).
const BERNOULLI_OVER_2K: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Guaranteed absolute accuracy of [`digamma`] on `x > 0` for moderate `x`.
pub const DIGAMMA_ABS_ERROR: f64 = 1e-13;

/// `psi(x) = Gamma'(x) / Gamma(x)` for `x > 0`.
///
/// Shifts `x` above 10 with `psi(x) = psi(x + 1) - 1/x`, then sums
/// `ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})`. The first omitted term is
/// below `5e-17` at `x = 10`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("digamma needs finite x > 0, got {x}")));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Horner in 1/x^2 over the Bernoulli terms.
    let series = BERNOULLI_OVER_2K
        .iter()
        .rev()
        .fold(0.0, |acc, &b| (acc + b) * inv2);
    Ok(x.ln() - 0.5 / x - series - shift)
}

/// A posteriori bound on the rounding and truncation error of [`digamma`] at `x`.
pub fn digamma_error_bound(x: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    let mut steps = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / x;
        x += 1.0;
        steps += 1.0;
    }
    // next asymptotic term, |B_16| / (16 x^16)
    let truncation = 3617.0 / 510.0 / 16.0 / x.powi(16);
    f64::EPSILON * ((steps + 2.0) * shift + 4.0 * (x.ln() + 1.0)) + truncation
}

/// `psi(x + 1/2) - psi(x)`, differenced term by term so that no cancellation
/// occurs for large `x`. Returns the value and an error bound.
fn digamma_half_step(x: f64) -> (f64, f64) {
    let mut x = x;
    let mut shift = 0.0;
    let mut steps = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        // 1/x - 1/(x + 1/2)
        shift += 0.5 / (x * (x + 0.5));
        x += 1.0;
        steps += 1.0;
    }
    let y = x + 0.5;
    let tail = |t: f64| {
        let inv2 = 1.0 / (t * t);
        BERNOULLI_OVER_2K
            .iter()
            .rev()
            .fold(0.0, |acc, &b| (acc + b) * inv2)
    };
    let value = (0.5 / x).ln_1p() + 0.25 / (x * y) - (tail(y) - tail(x)) + shift;
    let truncation = 2.0 * 3617.0 / 510.0 / 16.0 / x.powi(16);
    let bound = f64::EPSILON * ((steps + 6.0) * value.abs() + 1.0 / (x * x)) + truncation;
    (value, bound)
}

/// `Phi(-1, 1, a) = sum_{k>=0} (-1)^k / (k + a) = (psi((a+1)/2) - psi(a/2)) / 2`.
pub fn lerch_phi_alternating(a: f64) -> Result<f64> {
    Ok(lerch_phi_alternating_with_bound(a)?.0)
}

/// [`lerch_phi_alternating`] together with an absolute error bound.
pub fn lerch_phi_alternating_with_bound(a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid("a", format!("need finite a > 0, got {a}")));
    }
    let (d, bound) = digamma_half_step(0.5 * a);
    Ok((0.5 * d, 0.5 * bound))
}
