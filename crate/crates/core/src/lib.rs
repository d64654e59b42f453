//! Quantum game workbench.
//!
//! * [`tensor`]: dense complex linear maps and state vectors on small multi-qudit spaces.
//! * [`diagram`]: a textual string-diagram language evaluated through a Frobenius-algebra
//!   (spider) semantics attached to an orthonormal basis.
//! * [`ewl`]: EWL-quantized strategic-form games, payoff tables, pure Nash equilibria and
//!   Pareto optimality.
//! * [`bayes`]: Bayesian games with classical or quantum advice, Bell expressions and
//!   their local bounds, GHZ phase statistics and the Mermin parity argument.
//! * [`formats`]: JSON file formats for games and diagrams.

pub mod bayes;
pub mod diagram;
pub mod error;
pub mod ewl;
pub mod formats;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{Distribution, LinearMap, StateVector, C64};

/// Tolerance for probabilities and payoffs.
pub const PROB_TOL: f64 = 1e-9;

/// Tolerance for algebraic identities on doubles.
pub const ALG_TOL: f64 = 1e-12;
