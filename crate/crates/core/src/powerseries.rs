//! Truncated complex power series about the origin.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..c_N`. Every binary
//! operation requires both operands to share the same order; mixing orders is
//! an error rather than a silent truncation.
//!
//! `log` and `exp` use the differential recurrences (`u' = u L'`), which are
//! `O(N^2)` and stable when the constant term is exactly one. Fractional
//! powers are defined as `exp(a log u)` and are therefore only available on
//! series with unit constant term, where the principal branch is automatic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order used when a caller does not pick one.
pub const DEFAULT_ORDER: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

/// Wire form: `{"order": N, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<SeriesJson> for TruncatedSeries {
    type Error = Error;

    fn try_from(raw: SeriesJson) -> Result<Self> {
        if raw.coeffs.len() != raw.order + 1 {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                reason: format!(
                    "length {} does not match order {} (expected {})",
                    raw.coeffs.len(),
                    raw.order,
                    raw.order + 1
                ),
            });
        }
        Self::new(
            raw.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<TruncatedSeries> for SeriesJson {
    fn from(s: TruncatedSeries) -> Self {
        SeriesJson {
            order: s.order(),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TruncatedSeries {
    /// Builds a series from `c_0..c_N`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Coefficient `k` is `f(k)` for `k = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// `1 + z + ... + z^N`.
    pub fn geometric(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Keeps `c_0..c_order`. Fails if `order` exceeds the current order.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: order,
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    fn require_constant(&self, expected: f64) -> Result<()> {
        let c0 = self.coeffs[0];
        if c0 != Complex64::new(expected, 0.0) {
            return Err(Error::ConstantTerm {
                expected,
                found: c0,
            });
        }
        Ok(())
    }

    /// Applies `f(k, c_k)` to every coefficient.
    pub fn map(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Result<Self> {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| f(k, c))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        self.map(|_, c| c * factor)
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let a = &self.coeffs;
        let b = &other.coeffs;
        Self::from_fn(n, |k| (0..=k).map(|j| a[j] * b[k - j]).sum())
    }

    /// Principal logarithm of a series with constant term exactly 1.
    pub fn log(&self) -> Result<Self> {
        self.require_constant(1.0)?;
        let u = &self.coeffs;
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            let conv: Complex64 = (1..k).map(|j| out[j] * u[k - j] * j as f64).sum();
            out[k] = u[k] - conv / k as f64;
        }
        Self::new(out)
    }

    /// Exponential of a series with constant term exactly 0.
    pub fn exp(&self) -> Result<Self> {
        self.require_constant(0.0)?;
        let l = &self.coeffs;
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[0] = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            let conv: Complex64 = (1..=k).map(|j| l[j] * out[k - j] * j as f64).sum();
            out[k] = conv / k as f64;
        }
        Self::new(out)
    }

    /// `u^a = exp(a log u)` for real `a`; requires `u_0 = 1`.
    pub fn pow(&self, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(crate::error::invalid("exponent", "must be finite"));
        }
        let mut log = self.log()?;
        for c in &mut log.coeffs {
            *c *= a;
        }
        // a * 0 stays 0, so exp's precondition holds exactly.
        log.exp()
    }

    /// Horner evaluation of the truncated polynomial at `z` (intended for `|z| <= 1`).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max_{k>=1} |c_k|`, the default coefficient bound for tail estimates.
    pub fn coeff_sup(&self) -> f64 {
        self.coeffs[1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Bound on `|sum_{k>N} c_k z^k|` at `|z| = r` given `|c_k| <= coeff_bound`.
pub fn geometric_tail_bound(coeff_bound: f64, r: f64, order: usize) -> f64 {
    coeff_bound * r.powi(order as i32 + 1) / (1.0 - r)
}

/// Smallest order whose [`geometric_tail_bound`] at radius `r` is at most `tol`.
pub fn order_for_tail(coeff_bound: f64, r: f64, tol: f64) -> usize {
    if coeff_bound <= tol * (1.0 - r) {
        return 0;
    }
    let n = ((tol * (1.0 - r) / coeff_bound).ln() / r.ln()).ceil() as usize;
    (n.saturating_sub(1)..=n + 1)
        .find(|&k| geometric_tail_bound(coeff_bound, r, k) <= tol)
        .unwrap_or(n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_series_close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) {
        let d = a.max_abs_diff(b).unwrap();
        assert!(d <= tol, "series differ by {d:e} (tol {tol:e})");
    }

    #[test]
    fn order_for_tail_is_minimal() {
        for (c, r, tol) in [(2.0, 0.99, 1e-14), (1.0, 0.5, 1e-12), (0.3, 0.9, 1e-6)] {
            let n = order_for_tail(c, r, tol);
            assert!(geometric_tail_bound(c, r, n) <= tol);
            assert!(geometric_tail_bound(c, r, n - 1) > tol);
        }
        assert_eq!(order_for_tail(1e-20, 0.5, 1e-12), 0);
    }

    #[test]
    fn difference_of_squares() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let b = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(0.0), c(-1.0)]);
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let a = TruncatedSeries::new(vec![
            Complex64::new(0.3, -1.0),
            Complex64::new(2.0, 0.5),
            Complex64::new(-4.0, 1.0),
        ])
        .unwrap();
        assert_eq!(a.mul(&TruncatedSeries::one(2)).unwrap(), a);
    }

    #[test]
    fn square_of_quadratic_by_hand_convolution() {
        // c_0 = 1, c_1 = 1+1, c_2 = 1+1+1
        let a = TruncatedSeries::geometric(2);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(2.0), c(3.0)]);
    }

    #[test]
    fn mixed_orders_are_rejected() {
        let a = TruncatedSeries::one(3);
        let b = TruncatedSeries::one(4);
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch { left: 3, right: 4 }));
        assert!(a.add(&b).is_err());
        assert!(a.max_abs_diff(&b).is_err());
    }

    #[test]
    fn construction_rejects_non_finite_and_empty() {
        assert_eq!(TruncatedSeries::new(vec![]), Err(Error::Empty));
        assert_eq!(
            TruncatedSeries::from_real(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
        assert!(TruncatedSeries::from_real(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = TruncatedSeries::one(6).log().unwrap();
        assert_eq!(l, TruncatedSeries::zero(6));
    }

    #[test]
    fn log_one_plus_z_is_mercator() {
        let u = TruncatedSeries::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        let l = u.log().unwrap();
        let mercator: Vec<f64> = (0..=3)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    (-1f64).powi(k + 1) / k as f64
                }
            })
            .collect();
        assert_series_close(&l, &TruncatedSeries::from_real(&mercator).unwrap(), 1e-15);
    }

    #[test]
    fn log_rejects_non_unit_constant() {
        let u = TruncatedSeries::from_real(&[2.0, 1.0]).unwrap();
        assert!(matches!(u.log(), Err(Error::ConstantTerm { .. })));
        let nearly = TruncatedSeries::from_real(&[1.0 + 1e-15, 1.0]).unwrap();
        assert!(nearly.log().is_err());
    }

    #[test]
    fn exp_log_round_trip_perfect_square() {
        let u = TruncatedSeries::from_real(&[1.0, 2.0, 1.0, 0.0, 0.0]).unwrap();
        assert_series_close(&u.log().unwrap().exp().unwrap(), &u, 1e-14);
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(
            TruncatedSeries::zero(5).exp().unwrap(),
            TruncatedSeries::one(5)
        );
    }

    #[test]
    fn exp_z_matches_factorials() {
        let z = TruncatedSeries::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let e = z.exp().unwrap();
        let mut fact = 1.0;
        for k in 0..=4 {
            if k > 0 {
                fact *= k as f64;
            }
            assert_abs_diff_eq!(e.coeff(k).re, 1.0 / fact, epsilon = 1e-16);
            assert_eq!(e.coeff(k).im, 0.0);
        }
    }

    #[test]
    fn log_exp_round_trip_quadratic() {
        let l = TruncatedSeries::from_real(&[0.0, 1.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_series_close(&l.exp().unwrap().log().unwrap(), &l, 1e-14);
    }

    #[test]
    fn exp_rejects_nonzero_constant() {
        let l = TruncatedSeries::from_real(&[0.5, 1.0]).unwrap();
        assert!(matches!(l.exp(), Err(Error::ConstantTerm { .. })));
    }

    #[test]
    fn pow_matches_binomial() {
        let u = TruncatedSeries::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_series_close(
            &u.pow(2.0).unwrap(),
            &TruncatedSeries::from_real(&[1.0, 2.0, 1.0, 0.0]).unwrap(),
            1e-15,
        );
        assert_series_close(&u.pow(1.0).unwrap(), &u, 1e-15);
        // (1+z)^(1/2): 1, 1/2, -1/8, 1/16
        let half = TruncatedSeries::from_real(&[1.0, 0.5, -0.125, 0.0625]).unwrap();
        assert_series_close(&u.pow(0.5).unwrap(), &half, 1e-15);
    }

    #[test]
    fn pow_rejects_nonfinite_exponent() {
        assert!(TruncatedSeries::one(3).pow(f64::NAN).is_err());
    }

    #[test]
    fn eval_at_origin_and_geometric_sum() {
        let s = TruncatedSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(s.eval(Complex64::new(0.0, 0.0)), c(1.0));
        for n in [0usize, 1, 5, 30] {
            let g = TruncatedSeries::geometric(n);
            let expected = 2.0 * (1.0 - 0.5f64.powi(n as i32 + 1));
            assert_abs_diff_eq!(g.eval(c(0.5)).re, expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn eval_h0_at_negative_radius_within_tail_bound() {
        // h_0 = 1 + 2z + 2z^2 + ..., h_0(-r) = (1 - r) / (1 + r)
        let order = 128;
        let h0 = TruncatedSeries::from_fn(order, |k| c(if k == 0 { 1.0 } else { 2.0 })).unwrap();
        for r in [0.1, 0.5, 0.9, 0.99] {
            let exact = (1.0 - r) / (1.0 + r);
            let tail = geometric_tail_bound(2.0, r, order);
            let got = h0.eval(c(-r)).re;
            assert!((got - exact).abs() <= tail + 1e-14, "r={r}");
        }
    }

    #[test]
    fn json_wire_format() {
        let s = TruncatedSeries::new(vec![c(1.0), Complex64::new(0.5, -2.0)]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"order":1,"coeffs":[[1.0,0.0],[0.5,-2.0]]}"#);
        let back: TruncatedSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"order":2,"coeffs":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<TruncatedSeries>(bad).is_err());
    }

    #[test]
    fn truncation_is_explicit() {
        let g = TruncatedSeries::geometric(5);
        assert_eq!(g.truncated(2).unwrap(), TruncatedSeries::geometric(2));
        assert!(g.truncated(6).is_err());
    }

    /// Coefficients with `|c| <= 10`.
    fn bounded_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), order + 1).prop_map(|v| {
            TruncatedSeries::new(
                v.into_iter()
                    .map(|(re, im)| Complex64::from_polar(re.hypot(im).min(10.0), im.atan2(re)))
                    .collect(),
            )
            .unwrap()
        })
    }

    /// Unit constant term and `sum |c_k| <= 1/2`, so the series has no zeros in the closed disk.
    fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((0.0..1.0f64, 0.0..std::f64::consts::TAU), order).prop_map(
            move |v| {
                let rho: f64 = 0.9;
                let mut coeffs = vec![c(1.0)];
                coeffs.extend(v.into_iter().enumerate().map(|(j, (m, t))| {
                    Complex64::from_polar(0.5 * (1.0 - rho) * rho.powi(j as i32) * m, t)
                }));
                TruncatedSeries::new(coeffs).unwrap()
            },
        )
    }

    fn abs_series(s: &TruncatedSeries) -> TruncatedSeries {
        s.map(|_, c| c.norm().into()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn mul_ring_laws(
            (a, b, d) in (0usize..=128).prop_flat_map(|n| (bounded_series(n), bounded_series(n), bounded_series(n)))
        ) {
            let order = a.order();
            // Error scale per coefficient: the same products taken in absolute value.
            let scale2 = abs_series(&a).mul(&abs_series(&b)).unwrap();
            let scale3 = scale2.mul(&abs_series(&d)).unwrap();
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            for k in 0..=order {
                prop_assert!((ab.coeff(k) - ba.coeff(k)).norm() <= 1e-13 * scale2.coeff(k).re.max(1.0));
            }
            let left = ab.mul(&d).unwrap();
            let right = a.mul(&b.mul(&d).unwrap()).unwrap();
            for k in 0..=order {
                prop_assert!((left.coeff(k) - right.coeff(k)).norm() <= 1e-13 * scale3.coeff(k).re.max(1.0));
            }
            let dist_l = a.mul(&b.add(&d).unwrap()).unwrap();
            let dist_r = ab.add(&a.mul(&d).unwrap()).unwrap();
            let scale_d = abs_series(&a).mul(&abs_series(&b).add(&abs_series(&d)).unwrap()).unwrap();
            for k in 0..=order {
                prop_assert!((dist_l.coeff(k) - dist_r.coeff(k)).norm() <= 1e-13 * scale_d.coeff(k).re.max(1.0));
            }
        }

        #[test]
        fn exp_log_are_inverse(u in unit_series(128)) {
            let l = u.log().unwrap();
            prop_assert!(l.exp().unwrap().max_abs_diff(&u).unwrap() <= 1e-10);
            prop_assert!(l.exp().unwrap().log().unwrap().max_abs_diff(&l).unwrap() <= 1e-10);
        }

        #[test]
        fn pow_adds_exponents(u in unit_series(128), a in -3.0..3.0f64, b in -3.0..3.0f64) {
            let lhs = u.pow(a + b).unwrap();
            let rhs = u.pow(a).unwrap().mul(&u.pow(b).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
        }

        #[test]
        fn json_round_trip(s in bounded_series(16)) {
            let back: TruncatedSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
