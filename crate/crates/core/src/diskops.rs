//! Operators on normalized analytic functions of the unit disk.
//!
//! `f(z)^alpha` is carried in factored form `z^alpha * u(z)` with `u(0) = 1`,
//! so the non-integer power of `z` is never evaluated: the class functional
//! divides it out again and only the unit series matters.
//!
//! `D^n f(z)^alpha` is read as `D^n` applied to `f(z)^alpha` as a whole. On a
//! single term `z^(alpha+k)` the Salagean step `z d/dz` multiplies by
//! `alpha + k`, which is what makes
//! `p + z p' / alpha` move the functional from level `n` to level `n + 1`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::powerseries::TruncatedSeries;

/// Coefficient-wise tolerance for the self-check inside [`random_member`].
pub const MEMBER_ROUND_TRIP_TOL: f64 = 1e-10;

const ATOM_WEIGHT_SUM_TOL: f64 = 1e-12;

/// `g(z) = z^alpha * unit(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredSeries {
    alpha: f64,
    unit: TruncatedSeries,
}

impl FactoredSeries {
    pub fn new(alpha: f64, unit: TruncatedSeries) -> Result<Self> {
        check_alpha(alpha)?;
        if unit.coeff(0) != Complex64::new(1.0, 0.0) {
            return Err(Error::ConstantTerm {
                expected: 1.0,
                found: unit.coeff(0),
            });
        }
        Ok(Self { alpha, unit })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn unit(&self) -> &TruncatedSeries {
        &self.unit
    }
}

/// Result of applying `D^n` to a factored series. The unit part no longer has
/// constant term 1 (it becomes `alpha^n`), so it is kept separately.
#[derive(Clone, Debug, PartialEq)]
pub struct SalageanImage {
    pub alpha: f64,
    pub n: u32,
    /// Coefficient `k` multiplies `z^(alpha + k)`.
    pub coeffs: TruncatedSeries,
}

/// `D^n` on `z^alpha * u(z)`: coefficient `k` gains the factor `(alpha + k)^n`.
pub fn salagean(g: &FactoredSeries, n: u32) -> SalageanImage {
    let coeffs = scale_by_exponent(&g.unit, g.alpha, n);
    SalageanImage {
        alpha: g.alpha,
        n,
        coeffs,
    }
}

impl SalageanImage {
    /// One more application of `z d/dz`.
    pub fn step(&self) -> SalageanImage {
        SalageanImage {
            alpha: self.alpha,
            n: self.n + 1,
            coeffs: scale_by_exponent(&self.coeffs, self.alpha, 1),
        }
    }
}

fn scale_by_exponent(s: &TruncatedSeries, alpha: f64, n: u32) -> TruncatedSeries {
    s.map(|k, c| c * (alpha + k as f64).powi(n as i32))
        .expect("finite scaling of finite coefficients")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
}

impl ClassParams {
    pub fn new(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_beta(beta)?;
        Ok(Self { n, alpha, beta })
    }

    /// Same `(alpha, beta)` one Salagean level up.
    pub fn raised(&self) -> Self {
        Self {
            n: self.n + 1,
            ..*self
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid(
            "alpha",
            format!("must be finite and > 0, got {alpha}"),
        ));
    }
    Ok(())
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return Err(invalid("beta", format!("must lie in [0, 1), got {beta}")));
    }
    Ok(())
}

/// Splits a normalized `f = z + a_2 z^2 + ...` into `f / z`.
fn unit_of_normalized(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    if f.order() < 1 {
        return Err(Error::NotNormalized("order must be at least 1".into()));
    }
    if f.coeff(0) != Complex64::new(0.0, 0.0) || f.coeff(1) != Complex64::new(1.0, 0.0) {
        return Err(Error::NotNormalized(format!(
            "f(0) = {}, f'(0) = {}",
            f.coeff(0),
            f.coeff(1)
        )));
    }
    TruncatedSeries::new(f.coeffs()[1..].to_vec())
}

/// `z^alpha * (f(z)/z)^alpha` for normalized `f`.
pub fn factored_power(f: &TruncatedSeries, alpha: f64) -> Result<FactoredSeries> {
    check_alpha(alpha)?;
    let v = unit_of_normalized(f)?;
    FactoredSeries::new(alpha, v.pow(alpha)?)
}

/// `D^n f(z)^alpha / (alpha^n z^alpha)` as an ordinary series.
///
/// `f` has order `N` and the result has order `N - 1`, one less, because the
/// factor `z` is divided out before raising to `alpha`.
pub fn class_functional(f: &TruncatedSeries, params: &ClassParams) -> Result<TruncatedSeries> {
    let g = factored_power(f, params.alpha)?;
    let image = salagean(&g, params.n);
    let inv_norm = params.alpha.powi(params.n as i32).recip();
    // (alpha + 0)^n / alpha^n is 1 up to rounding; pin it.
    image.coeffs.map(|k, c| {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            c * inv_norm
        }
    })
}

/// Inverse of `p -> p + z p'/alpha`: coefficient `k` is scaled by `alpha / (alpha + k)`.
pub fn bb_average(p: &TruncatedSeries, alpha: f64) -> Result<TruncatedSeries> {
    check_alpha(alpha)?;
    if p.coeff(0) != Complex64::new(1.0, 0.0) {
        return Err(Error::ConstantTerm {
            expected: 1.0,
            found: p.coeff(0),
        });
    }
    p.map(|k, c| c * (alpha / (alpha + k as f64)))
}

/// `p -> p + z p'/alpha`, the level-raising map.
pub fn bb_raise(p: &TruncatedSeries, alpha: f64) -> Result<TruncatedSeries> {
    check_alpha(alpha)?;
    p.map(|k, c| c * ((alpha + k as f64) / alpha))
}

/// Finite Herglotz measure on the circle: point masses `weights[j]` at `angles[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryAtoms {
    weights: Vec<f64>,
    angles: Vec<f64>,
}

impl CaratheodoryAtoms {
    pub fn new(weights: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidAtoms("need at least one atom".into()));
        }
        if weights.len() != angles.len() {
            return Err(Error::InvalidAtoms(format!(
                "{} weights but {} angles",
                weights.len(),
                angles.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidAtoms(format!(
                "negative or non-finite weight {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > ATOM_WEIGHT_SUM_TOL {
            return Err(Error::InvalidAtoms(format!(
                "weights sum to {total}, not 1"
            )));
        }
        if let Some(t) = angles.iter().find(|t| !(0.0..TAU).contains(*t)) {
            return Err(Error::InvalidAtoms(format!("angle {t} outside [0, 2pi)")));
        }
        Ok(Self { weights, angles })
    }

    /// Unit mass at angle 0; its series is exactly `h_beta`.
    pub fn extremal() -> Self {
        Self {
            weights: vec![1.0],
            angles: vec![0.0],
        }
    }

    /// Between 1 and 6 atoms, flat-simplex weights, uniform angles.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let count = rng.random_range(1..=6usize);
        // Normalized unit exponentials are uniform on the simplex.
        let raw: Vec<f64> = (0..count)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        let angles = (0..count).map(|_| rng.random::<f64>() * TAU).collect();
        Self::new(weights, angles).expect("sampled atoms satisfy the invariants")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Series of `beta + (1 - beta) sum_j w_j (1 + z e^{-i t_j}) / (1 - z e^{-i t_j})`.
pub fn caratheodory_series(
    atoms: &CaratheodoryAtoms,
    beta: f64,
    order: usize,
) -> Result<TruncatedSeries> {
    check_beta(beta)?;
    let scale = 2.0 * (1.0 - beta);
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let kernel: Complex64 = atoms
            .weights
            .iter()
            .zip(&atoms.angles)
            .map(|(&w, &t)| Complex64::from_polar(w, -(k as f64) * t))
            .sum();
        kernel * scale
    })
}

/// Builds a normalized `f` of order `order + 1` whose level-`params.n`
/// functional equals `caratheodory_series(atoms, params.beta, order)`, so
/// `f` belongs to `T_{params.n}^alpha(beta)`.
///
/// The construction is checked by recomputing the functional; a deviation
/// above [`MEMBER_ROUND_TRIP_TOL`] is reported as [`Error::RoundTrip`].
pub fn random_member(
    params: &ClassParams,
    atoms: &CaratheodoryAtoms,
    order: usize,
) -> Result<TruncatedSeries> {
    ClassParams::new(params.n, params.alpha, params.beta)?;
    let p = caratheodory_series(atoms, params.beta, order)?;
    let alpha = params.alpha;
    let n = params.n as i32;
    let u = p.map(|k, c| c * (alpha / (alpha + k as f64)).powi(n))?;
    let v = u.pow(1.0 / alpha)?;
    let mut coeffs = Vec::with_capacity(order + 2);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend_from_slice(v.coeffs());
    let f = TruncatedSeries::new(coeffs)?;

    let back = class_functional(&f, params)?;
    let deviation = back.max_abs_diff(&p)?;
    if !(deviation <= MEMBER_ROUND_TRIP_TOL) {
        return Err(Error::RoundTrip {
            deviation,
            limit: MEMBER_ROUND_TRIP_TOL,
        });
    }
    Ok(f)
}

/// The member of `T_{params.n}^alpha(beta)` whose level-`n` functional is `h_beta`.
pub fn extremal_member(params: &ClassParams, order: usize) -> Result<TruncatedSeries> {
    random_member(params, &CaratheodoryAtoms::extremal(), order)
}

/// Level-`(n - 1)` functional of a member built at level `n`, in closed form:
/// coefficient `k` of the Caratheodory series times `alpha / (alpha + k)`.
pub fn lower_level_closed_form(
    atoms: &CaratheodoryAtoms,
    alpha: f64,
    beta: f64,
    order: usize,
) -> Result<TruncatedSeries> {
    bb_average(&caratheodory_series(atoms, beta, order)?, alpha)
}

/// Wire form of a generated class member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedFunction {
    #[serde(flatten)]
    pub series: TruncatedSeries,
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub atoms: CaratheodoryAtoms,
}
