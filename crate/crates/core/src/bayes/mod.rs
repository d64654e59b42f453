//! Bayesian games with classical, quantum, or arbitrary advice; Bell
//! expressions and their classical bounds; GHZ statistics.

mod advice;
mod bell;
mod equilibrium;
mod game;
mod ghz;
mod scenarios;

pub use advice::{
    classical_conditional, ghz_state, quantum_conditional, Advice, ClassicalAdvice,
    MeasurementBasis, QuantumAdvice,
};
pub use bell::{
    bell_value, certify_polytope_inequality, classical_bound, payoff_polytope_check,
    BellExpression, BoundCertificate, PolytopeCertificate, PolytopeInequality, PolytopeVerdict,
    DEFAULT_ENUMERATION_LIMIT,
};
pub use equilibrium::{is_advised_equilibrium, Deviation, EquilibriumVerdict};
pub use game::{
    average_payoff, equivalence_of_conditionals, BayesianGame, ConditionalDistribution, Domain,
};
pub use ghz::{
    ghz_phase_distribution, mermin_expression, mermin_game, mermin_inequivalence, parity,
    parity_expectation, parity_of_bits, parity_of_signs, MerminReport, MERMIN_SETTINGS, MERMIN_X,
    MERMIN_Y,
};
pub use scenarios::{
    chsh_best_classical_advice, chsh_game, chsh_quantum_advice, mermin_quantum_advice, phi_plus,
    prisoners_dilemma_bayesian,
};
