//! Numerical checks of `p ≺ q_beta ≺ h_beta`.
//!
//! Subordination to the half-plane map `h_beta` is exactly `Re p > beta`, so
//! it is checked through the minimum real part on circles. Subordination to
//! `q_beta` is checked as range containment: samples of `p(|z| = r)` must have
//! winding number one with respect to the closed curve `q(|z| = rho)`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rstar::primitives::Line;
use rstar::{PointDistance, RTree, AABB};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::powerseries::{geometric_tail_bound, TruncatedSeries};

pub const DEFAULT_SCAN_SAMPLES: usize = 1024;
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;
pub const DEFAULT_CONTAINMENT_RADIUS: f64 = 0.9;
pub const DEFAULT_BOUNDARY_RADIUS: f64 = 0.999;
/// Samples closer than this to the boundary curve make the containment verdict indeterminate.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

const MIN_SAMPLES: usize = 8;

/// Values of a series on `z = r e^{2 pi i j / samples}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleScan {
    pub radius: f64,
    pub samples: usize,
    pub order: usize,
    /// Bound on the omitted tail `|sum_{k>N} c_k z^k|` on this circle.
    pub tail_bound: f64,
    pub values: Vec<Complex64>,
    pub min_re: f64,
    pub argmin_angle: f64,
}

impl CircleScan {
    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.samples as f64
    }

    /// Angular grid spacing `2 pi / samples`.
    pub fn step(&self) -> f64 {
        TAU / self.samples as f64
    }

    /// `theta,re,im` rows under a `#`-prefixed header carrying radius, order and tail bound.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.samples + 128);
        let _ = writeln!(out, "# radius={}", self.radius);
        let _ = writeln!(out, "# order={}", self.order);
        let _ = writeln!(out, "# tail_bound={:e}", self.tail_bound);
        let _ = writeln!(out, "# min_re={}", csv_num(self.min_re));
        let _ = writeln!(out, "# argmin_angle={}", self.argmin_angle);
        out.push_str("theta,re,im\n");
        for (j, v) in self.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                csv_num(self.angle(j)),
                csv_num(v.re),
                csv_num(v.im)
            );
        }
        out
    }
}

/// Round-trip float text, in exponent form when very small or very large.
fn csv_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn check_radius(name: &'static str, r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(name, format!("need 0 < {name} < 1, got {r}")));
    }
    Ok(())
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(invalid(
            "samples",
            format!("need at least {MIN_SAMPLES}, got {samples}"),
        ));
    }
    Ok(())
}

/// Scans `s` on the circle of radius `r`, bounding the tail by `max_{k>=1} |c_k|`.
pub fn scan_circle(s: &TruncatedSeries, r: f64, samples: usize) -> Result<CircleScan> {
    scan_circle_bounded(s, r, samples, s.coeff_sup())
}

/// As [`scan_circle`], with a caller-supplied bound on the omitted coefficients.
pub fn scan_circle_bounded(
    s: &TruncatedSeries,
    r: f64,
    samples: usize,
    coeff_bound: f64,
) -> Result<CircleScan> {
    check_radius("r", r)?;
    check_samples(samples)?;
    let values: Vec<Complex64> = (0..samples)
        .map(|j| s.eval(Complex64::from_polar(r, TAU * j as f64 / samples as f64)))
        .collect();
    let (arg, min_re) =
        values
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.re))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
    Ok(CircleScan {
        radius: r,
        samples,
        order: s.order(),
        tail_bound: geometric_tail_bound(coeff_bound, r, s.order()),
        values,
        min_re,
        argmin_angle: TAU * arg as f64 / samples as f64,
    })
}

/// Distance on the circle between two angles.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `true` when the scan minimum sits at `theta = pi` within one grid step.
pub fn argmin_at_negative_axis(scan: &CircleScan) -> bool {
    angular_distance(scan.argmin_angle, PI) <= scan.step() + 1e-12
}

/// `min_r (min_re(r) - beta - tail(r))`; positive certifies `Re p > beta` on the sampled circles.
pub fn halfplane_subordination_margin(
    p: &TruncatedSeries,
    beta: f64,
    radii: &[f64],
    samples: usize,
) -> Result<f64> {
    if p.coeff(0) != Complex64::new(1.0, 0.0) {
        return Err(Error::ConstantTerm {
            expected: 1.0,
            found: p.coeff(0),
        });
    }
    if radii.is_empty() {
        return Err(invalid("radii", "need at least one radius"));
    }
    radii.iter().try_fold(f64::INFINITY, |acc, &r| {
        let scan = scan_circle(p, r, samples)?;
        Ok(acc.min(scan.min_re - beta - scan.tail_bound))
    })
}

/// Closed polygon with a segment index for crossing and distance queries.
pub struct ClosedCurve {
    tree: RTree<Line<[f64; 2]>>,
    vertices: Vec<Complex64>,
    x_max: f64,
}

impl ClosedCurve {
    /// Joins `vertices` in order and closes the loop back to the first vertex.
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(invalid(
                "vertices",
                "a closed curve needs at least 3 vertices",
            ));
        }
        let m = vertices.len();
        let segments: Vec<_> = (0..m)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                Line::new([a.re, a.im], [b.re, b.im])
            })
            .collect();
        let x_max = vertices
            .iter()
            .map(|v| v.re)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            tree: RTree::bulk_load(segments),
            vertices,
            x_max,
        })
    }

    /// Image of the circle `|z| = rho` under the series, sampled at `samples` angles.
    pub fn from_series(q: &TruncatedSeries, rho: f64, samples: usize) -> Result<Self> {
        check_radius("rho", rho)?;
        check_samples(samples)?;
        Self::new(
            (0..samples)
                .map(|j| q.eval(Complex64::from_polar(rho, TAU * j as f64 / samples as f64)))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Signed crossing count of the rightward ray from `w`.
    pub fn winding_number(&self, w: Complex64) -> i64 {
        let ray = AABB::from_corners([w.re, w.im], [self.x_max + 1.0, w.im]);
        self.tree
            .locate_in_envelope_intersecting(&ray)
            .map(|seg| {
                let (a, b) = (seg.from, seg.to);
                let left = (b[0] - a[0]) * (w.im - a[1]) - (w.re - a[0]) * (b[1] - a[1]);
                if a[1] <= w.im {
                    if b[1] > w.im && left > 0.0 {
                        return 1;
                    }
                } else if b[1] <= w.im && left < 0.0 {
                    return -1;
                }
                0
            })
            .sum()
    }

    /// Winding number as a sum of subtended angles over `2 pi`; an integer for
    /// points off the curve, up to rounding.
    pub fn winding_by_angle(&self, w: Complex64) -> f64 {
        let m = self.vertices.len();
        let total: f64 = (0..m)
            .map(|i| {
                let a = self.vertices[i] - w;
                let b = self.vertices[(i + 1) % m] - w;
                (a.conj() * b).arg()
            })
            .sum();
        total / TAU
    }

    /// Euclidean distance from `w` to the polygon.
    pub fn distance(&self, w: Complex64) -> f64 {
        let p = [w.re, w.im];
        self.tree
            .nearest_neighbor(&p)
            .map(|seg| seg.distance_2(&p).sqrt())
            .unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Contained,
    NotContained,
    /// Some sample lies within the distance tolerance of the boundary curve.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub verdict: Verdict,
    /// Smallest distance from a sample of `p` to the boundary polygon of `q`.
    pub margin: f64,
    /// Samples whose winding number is not 1.
    pub outside: usize,
    pub samples: usize,
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        self.verdict == Verdict::Contained
    }
}

/// Tests `p(|z| = r) ⊂ q(|z| < rho)` by winding numbers about `q(|z| = rho)`.
///
/// `q` is assumed univalent on the closed `rho`-disk; this is not verified.
pub fn region_subordination_check(
    p: &TruncatedSeries,
    q: &TruncatedSeries,
    r: f64,
    rho: f64,
    samples: usize,
) -> Result<Containment> {
    check_radius("r", r)?;
    check_radius("rho", rho)?;
    if !(r < rho) {
        return Err(invalid(
            "r",
            format!("need r < rho, got r = {r}, rho = {rho}"),
        ));
    }
    let curve = ClosedCurve::from_series(q, rho, samples)?;
    contained_in(&curve, p, r, samples, DEFAULT_BOUNDARY_TOL)
}

/// Containment of `p(|z| = r)` against a prebuilt boundary curve.
pub fn contained_in(
    curve: &ClosedCurve,
    p: &TruncatedSeries,
    r: f64,
    samples: usize,
    boundary_tol: f64,
) -> Result<Containment> {
    check_radius("r", r)?;
    check_samples(samples)?;
    let mut margin = f64::INFINITY;
    let mut outside = 0;
    for j in 0..samples {
        let w = p.eval(Complex64::from_polar(r, TAU * j as f64 / samples as f64));
        margin = margin.min(curve.distance(w));
        if curve.winding_number(w) != 1 {
            outside += 1;
        }
    }
    let verdict = if margin < boundary_tol {
        Verdict::Indeterminate
    } else if outside == 0 {
        Verdict::Contained
    } else {
        Verdict::NotContained
    };
    Ok(Containment {
        verdict,
        margin,
        outside,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskops::{caratheodory_series, CaratheodoryAtoms};
    use crate::dominant::{h_beta_coeffs, q_beta_coeffs, q_beta_quadrature};
    use crate::powerseries::order_for_tail;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_scan() {
        let scan = scan_circle(&TruncatedSeries::one(10), 0.5, 64).unwrap();
        assert_eq!(scan.min_re, 1.0);
        assert!(scan.values.iter().all(|v| v.re == 1.0));
        assert_eq!(scan.tail_bound, 0.0);
    }

    #[test]
    fn scan_argument_validation() {
        let s = TruncatedSeries::one(4);
        assert!(scan_circle(&s, 1.0, 64).is_err());
        assert!(scan_circle(&s, 0.0, 64).is_err());
        assert!(scan_circle(&s, 0.5, 4).is_err());
    }

    #[test]
    fn q_beta_minimum_on_negative_axis() {
        for (alpha, beta) in [(0.25, 0.0), (1.0, 0.5), (8.0, 0.9)] {
            for r in [0.5, 0.9, 0.99] {
                // keep truncation far below the variation of Re q between grid points
                let order = order_for_tail(2.0 * (1.0 - beta), r, 1e-14);
                let q = q_beta_coeffs(alpha, beta, order).unwrap();
                let scan = scan_circle(&q, r, 1024).unwrap();
                assert!(argmin_at_negative_axis(&scan), "alpha={alpha} r={r}");
                let at_minus_r = q.eval(Complex64::new(-r, 0.0)).re;
                assert_abs_diff_eq!(scan.min_re, at_minus_r, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn h0_minimum_closed_form() {
        let h = h_beta_coeffs(0.0, 512).unwrap();
        let scan = scan_circle(&h, 0.9, 1024).unwrap();
        assert_abs_diff_eq!(scan.min_re, 1.0 / 19.0, epsilon = scan.tail_bound + 1e-13);
    }

    #[test]
    fn radial_minimum_is_monotone() {
        let q = q_beta_coeffs(2.0, 0.25, 128).unwrap();
        let mins: Vec<f64> = [0.5, 0.7, 0.9, 0.99]
            .iter()
            .map(|&r| scan_circle(&q, r, 1024).unwrap().min_re)
            .collect();
        assert!(mins.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn csv_layout() {
        let scan = scan_circle(&TruncatedSeries::geometric(3), 0.5, 8).unwrap();
        let csv = scan.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "# radius=0.5");
        assert_eq!(lines[1], "# order=3");
        assert!(lines[2].starts_with("# tail_bound="));
        assert_eq!(lines[5], "theta,re,im");
        assert_eq!(lines.len(), 6 + 8);
        assert_eq!(lines[6], "0,1.875,0");
    }

    #[test]
    fn halfplane_margin_shrinks_to_zero_for_h_beta() {
        let beta = 0.3;
        let h = h_beta_coeffs(beta, 4096).unwrap();
        let m1 = halfplane_subordination_margin(&h, beta, &[0.9], 1024).unwrap();
        let m2 = halfplane_subordination_margin(&h, beta, &[0.99], 1024).unwrap();
        assert!(m1 > 0.0 && m2 > 0.0 && m2 < m1);
        // Re h_beta(-r) - beta = (1 - beta)(1 - r)/(1 + r)
        assert_abs_diff_eq!(m2, 0.7 * 0.01 / 1.99, epsilon = 1e-12);
    }

    #[test]
    fn halfplane_margin_for_shifted_caratheodory() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let atoms = CaratheodoryAtoms::sample(&mut rng);
            let shifted = 0.2 + 0.5 * rng.random::<f64>();
            let p = caratheodory_series(&atoms, shifted, 1024).unwrap();
            let radii = [0.5, 0.9, 0.97];
            let margin = halfplane_subordination_margin(&p, 0.1, &radii, 512).unwrap();
            let tail = geometric_tail_bound(2.0 * (1.0 - shifted), 0.97, 1024);
            assert!(margin >= shifted - 0.1 - tail - 1e-12);
        }
    }

    #[test]
    fn halfplane_margin_for_q_beta_approaches_delta_gap() {
        let (alpha, beta) = (1.0, 0.0);
        let q = q_beta_coeffs(alpha, beta, 8192).unwrap();
        let margin = halfplane_subordination_margin(&q, beta, &[0.99, 0.995], 256).unwrap();
        let expected = q_beta_quadrature(alpha, beta, 0.995, 1e-13).unwrap().value - beta;
        assert_abs_diff_eq!(margin, expected, epsilon = 1e-10);
        let delta = 2.0 * std::f64::consts::LN_2 - 1.0;
        assert!(margin > delta && margin - delta < 0.01);
    }

    #[test]
    fn winding_number_of_unit_square() {
        let sq = ClosedCurve::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(sq.winding_number(Complex64::new(0.5, 0.5)), 1);
        assert_eq!(sq.winding_number(Complex64::new(1.5, 0.5)), 0);
        assert_eq!(sq.winding_number(Complex64::new(-0.5, 0.5)), 0);
        assert_abs_diff_eq!(
            sq.distance(Complex64::new(0.5, 0.25)),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            sq.winding_by_angle(Complex64::new(0.5, 0.5)),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn crossing_and_angle_windings_agree() {
        // Curve winding twice around the origin: z^2 on the unit circle.
        let m = 257;
        let double = ClosedCurve::new(
            (0..m)
                .map(|j| Complex64::from_polar(1.0, 2.0 * TAU * j as f64 / m as f64))
                .collect(),
        )
        .unwrap();
        let q =
            ClosedCurve::from_series(&q_beta_coeffs(1.0, 0.0, 128).unwrap(), 0.99, 512).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            for curve in [&double, &q] {
                let w = Complex64::new(rng.random_range(-2.0..4.0), rng.random_range(-3.0..3.0));
                if curve.distance(w) < 1e-6 {
                    continue;
                }
                let by_angle = curve.winding_by_angle(w);
                assert!((by_angle - by_angle.round()).abs() < 1e-6);
                assert_eq!(curve.winding_number(w), by_angle.round() as i64);
            }
        }
    }

    #[test]
    fn series_contained_in_itself() {
        let q = q_beta_coeffs(1.5, 0.2, 128).unwrap();
        let c = region_subordination_check(&q, &q, 0.9, 0.999, 1024).unwrap();
        assert!(c.is_contained());
        assert!(c.margin > 0.0);
    }

    #[test]
    fn h_beta_not_contained_in_q_beta() {
        let h = h_beta_coeffs(0.0, 128).unwrap();
        let q = q_beta_coeffs(1.0, 0.0, 128).unwrap();
        let c = region_subordination_check(&h, &q, 0.9, 0.999, 1024).unwrap();
        assert_eq!(c.verdict, Verdict::NotContained);
        assert!(c.outside > 0);
    }

    #[test]
    fn boundary_samples_are_indeterminate() {
        let q = q_beta_coeffs(1.0, 0.0, 64).unwrap();
        let curve = ClosedCurve::from_series(&q, 0.9, 64).unwrap();
        let c = contained_in(&curve, &q, 0.9, 64, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn containment_argument_validation() {
        let q = q_beta_coeffs(1.0, 0.0, 16).unwrap();
        assert!(region_subordination_check(&q, &q, 0.95, 0.9, 64).is_err());
        assert!(region_subordination_check(&q, &q, 0.5, 1.0, 64).is_err());
    }
}
