//! Weighted empirical-likelihood inference for the slope of a predictive
//! regression
//!
//! ```text
//! Y_t = alpha + beta * X_{t-1} + U_t
//! X_t = theta + phi * X_{t-1} + e_t,   B(L) e_t = V_t
//! ```
//!
//! The tests and confidence sets in [`el`] are calibrated by the chi-square
//! distribution with one degree of freedom whether `X` is stationary, nearly
//! integrated, or has infinite variance. The scores are damped by a weight
//! `w(X_{t-1})` that grows like `|X_{t-1}|`, so each summand stays of the
//! same order as the residual.
//!
//! Alongside the inference core the crate ships a data-generating process for
//! Monte Carlo studies ([`dgp`]), a least-squares / residual-bootstrap
//! baseline ([`baseline`]) and a deterministic parallel experiment runner
//! ([`experiment`]).

pub mod baseline;
pub mod chi2;
pub mod dgp;
pub mod el;
pub mod experiment;

mod error;
mod sample;
mod weight;

pub use error::{Error, Result};
pub use sample::{InterceptMode, RegressionSample};
pub use weight::WeightSpec;
