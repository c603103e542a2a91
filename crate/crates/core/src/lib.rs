//! Secrecy outage, non-zero secrecy rate and ergodic secrecy rate of
//! transmitter selection schemes when the transmitters hang off unreliable
//! wireless backhaul links and several eavesdroppers collude through
//! maximal-ratio combining.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. Everything here is a pure function of its inputs; IO, the CLI and
//! parallel drivers live in the `secsel` companion crate.
//!
//! Module map:
//!
//! - [`channel`]: link SNR distributions, scenario and scheme types.
//! - [`combinatorics`]: compositions, multinomials, partial fractions.
//! - [`special`]: exponential integrals and the integer-order incomplete gamma.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration.
//! - [`exact`]: ratio CDFs and the exact NZSR / SOP / ESR.
//! - [`asymptotics`]: high-SNR saturation, diversity and ESR lines.
//! - [`monte_carlo`]: seeded system simulation used as the independent oracle.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod channel;
pub mod combinatorics;
mod error;
pub mod exact;
pub(crate) mod math;
pub mod monte_carlo;
pub mod quadrature;
pub mod special;

pub use asymptotics::{DiversityFit, EsrAsymptote, SopAsymptote};
pub use channel::{HypoexpDist, Knowledge, MixtureDist, Scenario, Scheme, SchemeSpec};
pub use error::{Error, Result};
pub use exact::{EsrMethod, RatioCdfEvaluator, SecrecyReport};
pub use monte_carlo::{McConfig, McEstimate, Metric};

