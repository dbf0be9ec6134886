//! Seeded verification runs: inclusion over random class members, sharpness
//! of the extremal function, comparison with the earlier `(1 + 2 beta)/3` bound,
//! and boundary-curve data.
//!
//! Trial `0` always uses the extremal atom. Trial `i > 0` draws its atoms from
//! `ChaCha8` seeded with the run seed on stream `i`, so trials are independent
//! of each other and of evaluation order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diskops::{
    class_functional, random_member, CaratheodoryAtoms, ClassParams, NormalizedFunction,
};
use crate::dominant::{
    delta, h_beta, owa_obradovic_bound, q_beta_coeffs, q_beta_quadrature, DeltaMethod,
};
use crate::error::{invalid, Result};
use crate::powerseries::{geometric_tail_bound, TruncatedSeries};
use crate::subordination::{
    argmin_at_negative_axis, contained_in, scan_circle_bounded, ClosedCurve, Containment,
    DEFAULT_BOUNDARY_TOL,
};

pub const DEFAULT_SEED: u64 = 0x5A1A_6EA9_D0C7_0001;
pub const DEFAULT_REPORT_TOL: f64 = 1e-6;
pub const DEFAULT_SHARPNESS_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
const DELTA_TOL: f64 = 1e-12;

/// Atoms for trial `index` of a run seeded with `seed`.
pub fn trial_atoms(seed: u64, index: u64) -> CaratheodoryAtoms {
    if index == 0 {
        return CaratheodoryAtoms::extremal();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    CaratheodoryAtoms::sample(&mut rng)
}

/// Bound on the level-`n` functional's coefficients past order `N`:
/// `|p_k| <= 2 (1 - beta) alpha / (alpha + k)` for members built one level up.
fn functional_coeff_bound(params: &ClassParams, order: usize) -> f64 {
    2.0 * (1.0 - params.beta) * params.alpha / (params.alpha + order as f64 + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionConfig {
    /// The lower level; members are generated in `T_{n+1}^alpha(beta)`.
    pub params: ClassParams,
    pub order: usize,
    pub radii: Vec<f64>,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub report_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusMargin {
    pub radius: f64,
    pub min_re: f64,
    pub tail_bound: f64,
    /// `min_re + tail_bound - delta`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: u64,
    pub atoms: usize,
    pub radii: Vec<RadiusMargin>,
    pub worst_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub delta: f64,
    pub worst_margin: f64,
    pub worst_trial: u64,
    pub passed: bool,
    pub trials: Vec<TrialOutcome>,
}

/// A generated member together with its level-`n` functional.
#[derive(Clone, Debug)]
pub struct Trial {
    pub index: u64,
    pub atoms: CaratheodoryAtoms,
    pub member: TruncatedSeries,
    pub functional: TruncatedSeries,
}

/// Builds trial `index`: `f` in `T_{n+1}^alpha(beta)` and `p = D^n f^alpha / (alpha^n z^alpha)`.
pub fn build_trial(params: &ClassParams, order: usize, seed: u64, index: u64) -> Result<Trial> {
    let atoms = trial_atoms(seed, index);
    let member = random_member(&params.raised(), &atoms, order)?;
    let functional = class_functional(&member, params)?;
    Ok(Trial {
        index,
        atoms,
        member,
        functional,
    })
}

impl Trial {
    pub fn to_record(&self, params: &ClassParams, seed: u64) -> NormalizedFunction {
        NormalizedFunction {
            series: self.member.clone(),
            n: params.n + 1,
            alpha: params.alpha,
            beta: params.beta,
            seed,
            atoms: self.atoms.clone(),
        }
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.is_empty() {
        return Err(invalid("radii", "need at least one radius"));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(invalid(
            "radii",
            format!("every radius must lie in (0, 1), got {r}"),
        ));
    }
    Ok(())
}

pub fn verify_inclusion(cfg: &InclusionConfig) -> Result<InclusionReport> {
    if cfg.trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    check_radii(&cfg.radii)?;
    let params = ClassParams::new(cfg.params.n, cfg.params.alpha, cfg.params.beta)?;
    let delta = delta(
        params.alpha,
        params.beta,
        DeltaMethod::ClosedForm,
        DELTA_TOL,
    )?
    .value;
    let bound = functional_coeff_bound(&params, cfg.order);

    let trials: Vec<TrialOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|index| {
            let trial = build_trial(&params, cfg.order, cfg.seed, index)?;
            let radii = cfg
                .radii
                .iter()
                .map(|&r| {
                    let scan = scan_circle_bounded(&trial.functional, r, cfg.samples, bound)?;
                    Ok(RadiusMargin {
                        radius: r,
                        min_re: scan.min_re,
                        tail_bound: scan.tail_bound,
                        margin: scan.min_re + scan.tail_bound - delta,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let worst_margin = radii.iter().map(|m| m.margin).fold(f64::INFINITY, f64::min);
            Ok(TrialOutcome {
                index,
                atoms: trial.atoms.len(),
                radii,
                worst_margin,
            })
        })
        .collect::<Result<_>>()?;

    let (worst_trial, worst_margin) = trials
        .iter()
        .map(|t| (t.index, t.worst_margin))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(InclusionReport {
        delta,
        worst_margin,
        worst_trial,
        passed: worst_margin >= -cfg.report_tol,
        trials,
    })
}

/// Containment of every trial's functional image in `q_beta(|z| < rho)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub results: Vec<Containment>,
    pub min_margin: f64,
    pub all_contained: bool,
}

pub fn verify_containment(
    params: &ClassParams,
    order: usize,
    trials: usize,
    seed: u64,
    r: f64,
    rho: f64,
    samples: usize,
) -> Result<ContainmentReport> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if !(r < rho) {
        return Err(invalid(
            "r",
            format!("need r < rho, got r = {r}, rho = {rho}"),
        ));
    }
    let q = q_beta_coeffs(params.alpha, params.beta, order)?;
    let curve = ClosedCurve::from_series(&q, rho, samples)?;
    let results: Vec<Containment> = (0..trials as u64)
        .into_par_iter()
        .map(|index| {
            let trial = build_trial(params, order, seed, index)?;
            contained_in(&curve, &trial.functional, r, samples, DEFAULT_BOUNDARY_TOL)
        })
        .collect::<Result<_>>()?;
    let min_margin = results
        .iter()
        .map(|c| c.margin)
        .fold(f64::INFINITY, f64::min);
    let all_contained = results.iter().all(Containment::is_contained);
    Ok(ContainmentReport {
        results,
        min_margin,
        all_contained,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub radius: f64,
    /// Minimum of `Re p` over the scanned circle, from the truncated series.
    pub scan_min_re: f64,
    pub scan_tail_bound: f64,
    pub argmin_on_negative_axis: bool,
    /// `q_beta(-r)` by quadrature.
    pub q_at_minus_r: f64,
    /// `q_beta(-r) - delta`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub params: ClassParams,
    pub delta: f64,
    /// Max coefficient deviation of the extremal level-`n` functional from `q_beta`.
    pub coefficient_deviation: f64,
    pub rows: Vec<SharpnessRow>,
    pub gaps_positive: bool,
    pub gaps_decreasing: bool,
    /// The gap at the largest radius must stay below this.
    pub final_gap_threshold: f64,
    pub final_gap_ok: bool,
    pub passed: bool,
}

/// Tabulates the approach of the extremal function's minimum to `delta`.
///
/// For `alpha >= 1` the final gap must be below `10 (1 - r)`. For `alpha < 1`
/// the factor 10 becomes `10 L` with `L` the largest `gap / (1 - r)` measured
/// at the earlier radii.
pub fn sharpness(
    params: &ClassParams,
    order: usize,
    radii: &[f64],
    samples: usize,
) -> Result<SharpnessReport> {
    check_radii(radii)?;
    if radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("radii", "radii must be strictly increasing"));
    }
    let params = ClassParams::new(params.n, params.alpha, params.beta)?;
    let delta = delta(
        params.alpha,
        params.beta,
        DeltaMethod::ClosedForm,
        DELTA_TOL,
    )?
    .value;
    let trial = build_trial(&params, order, DEFAULT_SEED, 0)?;
    let q = q_beta_coeffs(params.alpha, params.beta, order)?;
    let coefficient_deviation = trial.functional.max_abs_diff(&q)?;
    let bound = functional_coeff_bound(&params, order);

    let rows = radii
        .iter()
        .map(|&r| {
            let scan = scan_circle_bounded(&trial.functional, r, samples, bound)?;
            let q_at_minus_r = q_beta_quadrature(params.alpha, params.beta, r, 1e-13)?.value;
            Ok(SharpnessRow {
                radius: r,
                scan_min_re: scan.min_re,
                scan_tail_bound: scan.tail_bound,
                argmin_on_negative_axis: argmin_at_negative_axis(&scan),
                q_at_minus_r,
                gap: q_at_minus_r - delta,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let gaps_positive = rows.iter().all(|r| r.gap > 0.0);
    let gaps_decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let last = rows.last().expect("radii is non-empty");
    let factor = if params.alpha >= 1.0 || rows.len() < 2 {
        10.0
    } else {
        10.0 * rows[..rows.len() - 1]
            .iter()
            .map(|r| r.gap / (1.0 - r.radius))
            .fold(0.0, f64::max)
    };
    let final_gap_threshold = factor * (1.0 - last.radius);
    let final_gap_ok = last.gap < final_gap_threshold;
    Ok(SharpnessReport {
        params,
        delta,
        coefficient_deviation,
        passed: gaps_positive && gaps_decreasing && final_gap_ok,
        rows,
        gaps_positive,
        gaps_decreasing,
        final_gap_threshold,
        final_gap_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub beta: f64,
    pub delta: f64,
    pub owa_obradovic: f64,
    pub gap: f64,
}

/// `delta(1, beta)` against `(1 + 2 beta) / 3` on each `beta`.
pub fn compare_owa_obradovic(betas: &[f64]) -> Result<Vec<ComparisonRow>> {
    betas
        .iter()
        .map(|&beta| {
            let d = delta(1.0, beta, DeltaMethod::ClosedForm, DELTA_TOL)?.value;
            let oo = owa_obradovic_bound(beta)?;
            Ok(ComparisonRow {
                beta,
                delta: d,
                owa_obradovic: oo,
                gap: d - oo,
            })
        })
        .collect()
}

/// `0, 0.01, ..., 0.99`.
pub fn default_beta_grid() -> Vec<f64> {
    (0..100).map(|i| i as f64 / 100.0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub q: Complex64,
    pub h: Complex64,
}

/// `q_beta` (truncated at `order`) and `h_beta` on `|z| = rho`.
pub fn boundary_curve(
    alpha: f64,
    beta: f64,
    rho: f64,
    samples: usize,
    order: usize,
) -> Result<Vec<BoundaryPoint>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(invalid("rho", format!("need 0 < rho < 1, got {rho}")));
    }
    if samples == 0 {
        return Err(invalid("samples", "need at least one sample"));
    }
    let q = q_beta_coeffs(alpha, beta, order)?;
    (0..samples)
        .map(|j| {
            let theta = TAU * j as f64 / samples as f64;
            let z = Complex64::from_polar(rho, theta);
            Ok(BoundaryPoint {
                theta,
                q: q.eval(z),
                h: h_beta(beta, z)?,
            })
        })
        .collect()
}

/// Tail bound for `h_beta` truncated at `order` on `|z| = r`.
pub fn h_beta_tail_bound(beta: f64, r: f64, order: usize) -> f64 {
    geometric_tail_bound(2.0 * (1.0 - beta), r, order)
}
