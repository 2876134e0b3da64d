//! Discrete moments of derivatives of Hardy's Z-function.
//!
//! The crate measures `Σ_{0<γ_k≤T} |Z^(j)(γ_k)|²`, where `γ_k` runs over the
//! real zeros of `Z^(k)`, and predicts the same quantity from the closed-form
//! main term built on the roots of the truncated exponential series
//! `Σ_{μ≤k} θ^μ/μ!`.
//!
//! Layout, bottom-up:
//!
//! * [`zeta`] and [`stieltjes`]: `ζ^(μ)(s)` in the strip `-1 < σ < 2` by
//!   Euler–Maclaurin, and the Stieltjes constants.
//! * [`chi`]: the functional-equation factor `χ(s)`, its logarithmic
//!   derivative `ω(s)` with derivatives, and the Riemann–Siegel theta.
//! * [`hardy`]: `f_k`, `Z_k`, the real derivatives `Z^(j)(t)` and the
//!   operator polynomial `(L/2 + d/ds)^k ζ(s)`.
//! * [`theta_roots`]: roots of the truncated exponential and their power sums.
//! * [`moments`]: zero isolation, measured discrete and continuous moments,
//!   and the Hall-polynomial prediction of the continuous moment.
//! * [`coeff`]: the five-term main coefficient and the exact combinatorial
//!   identities behind it.

pub mod bernoulli;
pub mod chi;
pub mod coeff;
mod error;
pub mod gamma;
pub mod hardy;
pub mod moments;
pub mod quad;
pub mod stieltjes;
pub mod summation;
pub mod theta_roots;
pub mod zeta;

pub use error::{Error, Result};
pub use zeta::{ComplexPoint, EvalConfig};

/// Largest `|t|` accepted by any evaluation entry point.
pub const T_MAX: f64 = 5.0e4;

/// Largest derivative order of `Z` supported by the moment machinery.
pub const J_MAX: usize = 8;
