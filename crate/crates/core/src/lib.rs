//! Performance analysis of a dual-hop power-line / radio relay link.
//!
//! The first hop is a power-line channel with log-normal fading and
//! Bernoulli–Gaussian impulsive noise, modelled by a two-component Gamma
//! mixture for its SNR. The second hop is a Rician radio channel. The crate
//! evaluates outage probability, average DBPSK bit error rate and ergodic
//! capacity for decode-and-forward and fixed-gain amplify-and-forward relays
//! in closed form, and provides independent quadrature and Monte Carlo
//! references for each quantity.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod error;
pub mod channel;
pub mod specfun;
pub mod analytic;
pub mod oracles;
pub mod montecarlo;
pub(crate) mod quad;
pub(crate) mod sum;

pub use error::{Error, Result};
