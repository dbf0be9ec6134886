//! Sharp inclusion relations for the classes `T_n^alpha(beta)` of normalized
//! analytic functions defined through the Salagean derivative.
//!
//! A function `f(z) = z + a_2 z^2 + ...` belongs to `T_n^alpha(beta)` when
//! `Re D^n f(z)^alpha / (alpha^n z^alpha) > beta` on the unit disk. Members of
//! `T_{n+1}^alpha(beta)` satisfy the stronger bound
//! `Re D^n f(z)^alpha / (alpha^n z^alpha) >= delta(alpha, beta)`, and the
//! constant is attained by the extremal function.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`powerseries`] | truncated complex series: product, log, exp, real powers |
//! | [`diskops`] | Salagean operator, class functional, averaging map, class members |
//! | [`dominant`] | `h_beta`, `q_beta`, four evaluators of `delta(alpha, beta)` |
//! | [`subordination`] | circle scans, half-plane margins, winding-number containment |
//! | [`harness`] | seeded inclusion and sharpness runs |

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod diskops;
pub mod dominant;
pub mod error;
pub mod harness;
pub mod powerseries;
pub mod quadrature;
pub mod special;
pub mod subordination;

pub use diskops::{
    bb_average, caratheodory_series, class_functional, extremal_member, random_member, salagean,
    CaratheodoryAtoms, ClassParams, FactoredSeries, NormalizedFunction,
};
pub use dominant::{
    delta, delta_all, h_beta, owa_obradovic_bound, q_beta_coeffs, q_beta_quadrature, DeltaMethod,
    DeltaResult,
};
pub use error::{Error, Result};
pub use powerseries::{TruncatedSeries, DEFAULT_ORDER};
pub use special::digamma;
pub use subordination::{
    halfplane_subordination_margin, region_subordination_check, scan_circle, CircleScan,
    Containment,
};

pub use num_complex::Complex64;
