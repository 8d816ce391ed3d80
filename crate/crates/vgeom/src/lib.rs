//! Convergence-rate analysis for Markov chains on weighted-supremum spaces.
//!
//! The crate provides five layers that can be used independently or as a
//! pipeline:
//!
//! * [`weights`] — Lyapunov weights `V`, weighted sup-norms and the
//!   geometric-distance Lipschitz seminorm `m_1`.
//! * [`catalog`] — constructors for the model zoo: birth-death chains,
//!   bounded- and unbounded-increment random walks, discrete Lindley walks,
//!   a contracting Gaussian autoregression on a quadrature grid, and the
//!   matching iterated-function-system descriptions.
//! * [`drift`] — weak-drift analysis: iterated weight ratios, the tail
//!   functional `ell_N` and its root `L`, increment generating functions and
//!   their minimizers, feasibility tests, and minorization certificates.
//! * [`spectral`] — dense truncations of the similarity-transformed kernel,
//!   full eigenvalue sweeps, annulus classification, and eigenvector growth
//!   checks.
//! * [`rates`], [`ifs`] — closed-form convergence rates and explicit
//!   constants for the catalog models.
//! * [`verify`] — independent numerical ground truth: stationary vectors,
//!   decay curves, total-variation distances, and bound audits.
//! * [`report`] — deterministic JSON serialization (17 significant digits),
//!   config hashing, and the rate-certificate schema.

pub mod catalog;
pub mod drift;
pub mod error;
pub mod ifs;
pub mod rates;
pub mod report;
pub mod spectral;
pub mod verify;
pub mod weights;

pub use error::{Result, VgeomError};
