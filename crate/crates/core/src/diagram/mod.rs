//! String diagrams as terms, evaluated to linear maps through the spider
//! semantics of an orthonormal basis.
//!
//! Evaluation is unnormalized: `spider(0,3)` is `|000> + |111>`. Normalization
//! only happens where probabilities are taken.

mod ast;
mod eval;
mod observable;
mod parser;

pub use ast::{DiagramTerm, PhaseElement};
pub use eval::{evaluate, typecheck, BoxEnv, BoxSignatures, Evaluator};
pub use observable::{validate_born_vector, BornVector, ObservableStructure};
pub use parser::{parse, parse_angle, ParseError};
