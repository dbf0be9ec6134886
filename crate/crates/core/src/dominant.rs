//! The half-plane map `h_beta`, its Briot-Bouquet dominant `q_beta`, and the
//! sharp constant `delta(alpha, beta) = q_beta(-1)`.
//!
//! ```text
//! h_beta(z) = (1 + (1 - 2 beta) z) / (1 - z)
//! q_beta(z) = 1 + 2 (1 - beta) sum_{k>=1} alpha / (alpha + k) z^k
//! delta     = 1 + 2 (1 - beta) sum_{k>=1} alpha / (alpha + k) (-1)^k
//! ```
//!
//! `delta` is evaluated four independent ways (see [`DeltaMethod`]); each
//! reports its own error bound so the routes can be cross-checked.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diskops::{bb_average, caratheodory_series, check_alpha, check_beta, CaratheodoryAtoms};
use crate::error::{invalid, Error, Result};
use crate::powerseries::TruncatedSeries;
use crate::quadrature::{
    integrate, integrate_with_breakpoints, QuadratureOptions, QuadratureResult,
};
use crate::special::lerch_phi_alternating_with_bound;

/// Iteration cap for the plain alternating sum.
pub const RAW_SERIES_MAX_TERMS: u64 = 100_000_000;
/// Cap on forward-difference levels in the Euler transform.
pub const EULER_MAX_LEVELS: usize = 64;
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaMethod {
    RawSeries,
    Euler,
    ClosedForm,
    Quadrature,
}

impl DeltaMethod {
    pub const ALL: [DeltaMethod; 4] = [
        DeltaMethod::RawSeries,
        DeltaMethod::Euler,
        DeltaMethod::ClosedForm,
        DeltaMethod::Quadrature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DeltaMethod::RawSeries => "raw-series",
            DeltaMethod::Euler => "euler",
            DeltaMethod::ClosedForm => "closed-form",
            DeltaMethod::Quadrature => "quadrature",
        }
    }
}

impl fmt::Display for DeltaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DeltaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw-series" | "series" | "raw" => Ok(DeltaMethod::RawSeries),
            "euler" => Ok(DeltaMethod::Euler),
            "closed-form" | "closed" => Ok(DeltaMethod::ClosedForm),
            "quadrature" | "quad" => Ok(DeltaMethod::Quadrature),
            other => Err(invalid("method", format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub alpha: f64,
    pub beta: f64,
    pub method: DeltaMethod,
    pub value: f64,
    pub error_bound: f64,
    pub terms_used: u64,
}

/// `(1 + (1 - 2 beta) z) / (1 - z)` for `|z| < 1`.
pub fn h_beta(beta: f64, z: Complex64) -> Result<Complex64> {
    check_beta(beta)?;
    if !(z.norm() < 1.0) {
        return Err(invalid(
            "z",
            format!("need |z| < 1, got |z| = {}", z.norm()),
        ));
    }
    Ok((1.0 + (1.0 - 2.0 * beta) * z) / (1.0 - z))
}

/// `1 + 2 (1 - beta) (z + z^2 + ...)`.
pub fn h_beta_coeffs(beta: f64, order: usize) -> Result<TruncatedSeries> {
    caratheodory_series(&CaratheodoryAtoms::extremal(), beta, order)
}

pub fn q_beta_coeffs(alpha: f64, beta: f64, order: usize) -> Result<TruncatedSeries> {
    check_alpha(alpha)?;
    check_beta(beta)?;
    let scale = 2.0 * (1.0 - beta);
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(scale * alpha / (alpha + k as f64), 0.0)
        }
    })
}

/// `q_beta(-r)` from the integral representation, substituting `t = -r s`:
/// `alpha int_0^1 s^(alpha-1) (1 - (1 - 2 beta) r s) / (1 + r s) ds`.
///
/// For `alpha < 1` the variable change `s = t^(1/alpha)` turns the integrand
/// into the bounded smooth `g(r t^(1/alpha))`.
pub fn q_beta_quadrature(alpha: f64, beta: f64, r: f64, tol: f64) -> Result<QuadratureResult> {
    if !(0.0..1.0).contains(&r) {
        return Err(invalid("r", format!("need 0 <= r < 1, got {r}")));
    }
    dominant_integral(alpha, beta, r, tol)
}

fn dominant_integral(alpha: f64, beta: f64, r: f64, tol: f64) -> Result<QuadratureResult> {
    check_alpha(alpha)?;
    check_beta(beta)?;
    check_tol(tol)?;
    let c = 1.0 - 2.0 * beta;
    let g = move |s: f64| (1.0 - c * r * s) / (1.0 + r * s);
    let opts = QuadratureOptions {
        abs_tol: tol,
        ..QuadratureOptions::default()
    };
    if alpha < 1.0 {
        // s = 2^-j sits at t = 2^(-j alpha); for small alpha these cluster at t = 1.
        let inv = 1.0 / alpha;
        let mut points: Vec<f64> = (0..=64)
            .map(|j| (-(j as f64) * alpha * std::f64::consts::LN_2).exp())
            .collect();
        points.push(0.0);
        points.reverse();
        points.dedup();
        integrate_with_breakpoints(|t| g(t.powf(inv)), &points, opts)
    } else {
        integrate(|s| alpha * s.powf(alpha - 1.0) * g(s), 0.0, 1.0, opts)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(invalid("tol", format!("must be finite and > 0, got {tol}")));
    }
    Ok(())
}

pub fn delta(alpha: f64, beta: f64, method: DeltaMethod, tol: f64) -> Result<DeltaResult> {
    check_alpha(alpha)?;
    check_beta(beta)?;
    check_tol(tol)?;
    let (value, error_bound, terms_used) = match method {
        DeltaMethod::RawSeries => delta_raw_series(alpha, beta, tol)?,
        DeltaMethod::Euler => delta_euler(alpha, beta, tol)?,
        DeltaMethod::ClosedForm => delta_closed_form(alpha, beta, tol)?,
        DeltaMethod::Quadrature => {
            let q = dominant_integral(alpha, beta, 1.0, tol)?;
            (
                q.value,
                q.error_estimate + 4.0 * f64::EPSILON,
                q.evaluations as u64,
            )
        }
    };
    Ok(DeltaResult {
        alpha,
        beta,
        method,
        value,
        error_bound,
        terms_used,
    })
}

/// All four methods at one `(alpha, beta)`.
pub fn delta_all(alpha: f64, beta: f64, tol: f64) -> Result<Vec<DeltaResult>> {
    DeltaMethod::ALL
        .iter()
        .map(|&m| delta(alpha, beta, m, tol))
        .collect()
}

/// The default evaluator.
pub fn delta_value(alpha: f64, beta: f64) -> Result<f64> {
    Ok(delta(alpha, beta, DeltaMethod::ClosedForm, 1e-12)?.value)
}

/// Partial sums `1 + 2 (1 - beta) sum_{k=1}^{K} alpha/(alpha+k) (-1)^k` for `K = 1..=count`.
pub fn raw_partial_sums(alpha: f64, beta: f64, count: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_beta(beta)?;
    let scale = 2.0 * (1.0 - beta);
    let mut s = 0.0;
    Ok((1..=count)
        .map(|k| {
            let term = alpha / (alpha + k as f64);
            s += if k % 2 == 0 { term } else { -term };
            1.0 + scale * s
        })
        .collect())
}

/// Alternating sum, reported as the midpoint of the last bracketing pair.
///
/// With `c_k = alpha / (alpha + k)` convex and decreasing, the midpoint of
/// `S_K` and `S_{K+1}` is within `(c_{K+1} - c_{K+2}) / 2` of the limit.
fn delta_raw_series(alpha: f64, beta: f64, tol: f64) -> Result<(f64, f64, u64)> {
    let scale = 2.0 * (1.0 - beta);
    let c = |k: u64| alpha / (alpha + k as f64);
    let midpoint_bound = |k: u64| 0.5 * scale * (c(k + 1) - c(k + 2));

    // Smallest even K meeting half the budget; rounding takes the other half.
    let target = (0.5 * scale * alpha / (0.5 * tol)).sqrt();
    let mut k = (target - alpha - 1.5).max(2.0).ceil() as u64;
    while midpoint_bound(k) > 0.5 * tol && k < RAW_SERIES_MAX_TERMS {
        k += 1;
    }
    k = (k + 1) & !1;
    let capped = k + 2 > RAW_SERIES_MAX_TERMS;
    if capped {
        k = (RAW_SERIES_MAX_TERMS - 2) & !1;
    }

    // S_K for even K, as pairs -(c_{2j-1} - c_{2j}) summed smallest first with
    // Neumaier compensation; every pair has the same sign.
    let mut head = 0.0f64;
    let mut comp = 0.0f64;
    for j in (1..=k / 2).rev() {
        let a = alpha + (2 * j) as f64;
        let x = -alpha / ((a - 1.0) * a);
        let t = head + x;
        comp += if head.abs() >= x.abs() {
            (head - t) + x
        } else {
            (x - t) + head
        };
        head = t;
    }
    let head = head + comp;
    let mid = head - 0.5 * c(k + 1);
    let value = 1.0 + scale * mid;
    let eps = f64::EPSILON;
    let rounding = scale * (6.0 * eps + k as f64 * eps * eps) * head.abs() + 4.0 * eps;
    let error_bound = midpoint_bound(k) + rounding;
    let terms_used = k + 1;
    if capped || error_bound > tol {
        return Err(Error::NotConverged {
            method: "raw-series",
            tol,
            estimate: value,
            error_bound,
            terms_used,
        });
    }
    Ok((value, error_bound, terms_used))
}

/// `(-Delta)^m a_0 / 2^(m+1)` for `a_j = alpha / (alpha + 1 + j)`, `m = 0, 1, ...`,
/// built from a running difference diagonal.
struct EulerTerms {
    alpha: f64,
    next: usize,
    diagonal: Vec<f64>,
}

impl EulerTerms {
    fn new(alpha: f64) -> Self {
        Self {
            alpha,
            next: 0,
            diagonal: Vec::with_capacity(EULER_MAX_LEVELS),
        }
    }
}

impl Iterator for EulerTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let m = self.next;
        let a_m = self.alpha / (self.alpha + 1.0 + m as f64);
        // diagonal[i] = (-Delta)^i a_{m-1-i}; shift in a_m.
        let mut carry = a_m;
        for d in self.diagonal.iter_mut() {
            let higher = *d - carry;
            *d = carry;
            carry = higher;
        }
        self.diagonal.push(carry);
        self.next += 1;
        Some(carry / 2f64.powi(m as i32 + 1))
    }
}

/// Euler transform of the alternating tail.
///
/// `c_k` is totally monotone, so transformed terms are positive and at least
/// halve at each level; the last one bounds the remainder.
fn delta_euler(alpha: f64, beta: f64, tol: f64) -> Result<(f64, f64, u64)> {
    let scale = 2.0 * (1.0 - beta);
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut levels = 0;
    for t in EulerTerms::new(alpha).take(EULER_MAX_LEVELS) {
        sum += t;
        last = t;
        levels += 1;
        if scale * t < 0.5 * tol {
            break;
        }
    }
    // sum_{k>=1} (-1)^k c_k = -sum
    let value = 1.0 - scale * sum;
    let error_bound = scale * last + 8.0 * levels as f64 * f64::EPSILON;
    if !(scale * last < 0.5 * tol) || error_bound > tol {
        return Err(Error::NotConverged {
            method: "euler",
            tol,
            estimate: value,
            error_bound,
            terms_used: levels as u64,
        });
    }
    Ok((value, error_bound, levels as u64))
}

/// `delta = 1 - 2 (1 - beta) alpha Phi(-1, 1, alpha + 1)` with the Lerch slice
/// written through digamma at half arguments.
fn delta_closed_form(alpha: f64, beta: f64, tol: f64) -> Result<(f64, f64, u64)> {
    let scale = 2.0 * (1.0 - beta);
    let a = alpha + 1.0;
    let (phi, phi_err) = lerch_phi_alternating_with_bound(a)?;
    let value = 1.0 - scale * alpha * phi;
    let error_bound = scale * alpha * phi_err + 4.0 * f64::EPSILON;
    if error_bound > tol {
        return Err(Error::NotConverged {
            method: "closed-form",
            tol,
            estimate: value,
            error_bound,
            terms_used: 2,
        });
    }
    Ok((value, error_bound, 2))
}

/// `(1 + 2 beta) / 3`, the earlier bound on `Re f(z)/z` under `Re f' > beta`.
pub fn owa_obradovic_bound(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((1.0 + 2.0 * beta) / 3.0)
}

/// `q_beta` coefficients routed through the averaging operator; used to
/// cross-check [`q_beta_coeffs`].
pub fn q_beta_by_averaging(alpha: f64, beta: f64, order: usize) -> Result<TruncatedSeries> {
    bb_average(&h_beta_coeffs(beta, order)?, alpha)
}
