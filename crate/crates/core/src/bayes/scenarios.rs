//! Ready-made games and advice used throughout the tests and the CLI.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

use super::advice::{ghz_state, ClassicalAdvice, MeasurementBasis, QuantumAdvice};
use super::game::BayesianGame;
use super::ghz::{MERMIN_X, MERMIN_Y};
use crate::tensor::{StateVector, C64};

/// CHSH as a common-interest Bayesian game: binary types and strategies, uniform
/// prior, both players earn 1 iff `s_1 ⊕ s_2 = x_1 · x_2`.
pub fn chsh_game() -> BayesianGame {
    let mut payoff = vec![0.0; 16];
    for jt in 0..4 {
        let (x1, x2) = (jt >> 1, jt & 1);
        for js in 0..4 {
            let (s1, s2) = (js >> 1, js & 1);
            if s1 ^ s2 == x1 & x2 {
                payoff[jt * 4 + js] = 1.0;
            }
        }
    }
    BayesianGame::new(
        vec![vec!["0".into(), "1".into()]; 2],
        vec![vec!["0".into(), "1".into()]; 2],
        vec![0.25; 4],
        vec![payoff.clone(), payoff],
    )
    .expect("valid")
}

/// `(|00> + |11>)/√2`.
pub fn phi_plus() -> StateVector {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    StateVector::new(vec![2, 2], vec![r, z, z, r]).expect("valid")
}

/// Optimal CHSH measurements on `Φ+`: angles `0, π/4` for the first player and
/// `π/8, -π/8` for the second. Winning probability `cos²(π/8)`.
pub fn chsh_quantum_advice() -> QuantumAdvice {
    QuantumAdvice::new(
        phi_plus(),
        vec![
            vec![
                MeasurementBasis::real_angle(0.0),
                MeasurementBasis::real_angle(FRAC_PI_4),
            ],
            vec![
                MeasurementBasis::real_angle(FRAC_PI_8),
                MeasurementBasis::real_angle(-FRAC_PI_8),
            ],
        ],
    )
    .expect("valid")
}

/// Both players always answer 0: wins unless both types are 1.
pub fn chsh_best_classical_advice() -> ClassicalAdvice {
    let game = chsh_game();
    ClassicalAdvice::from_deterministic(
        game.domain().clone(),
        vec![1.0],
        &[vec![vec![0, 0], vec![0, 0]]],
    )
    .expect("valid")
}

/// GHZ³ measured in the phase basis `0` for type X and `π/2` for type Y.
pub fn mermin_quantum_advice() -> QuantumAdvice {
    QuantumAdvice::from_phases(ghz_state(3), &vec![vec![MERMIN_X, MERMIN_Y]; 3]).expect("valid")
}

/// Prisoner's dilemma with one trivial type per player.
pub fn prisoners_dilemma_bayesian() -> BayesianGame {
    BayesianGame::new(
        vec![vec!["-".into()]; 2],
        vec![vec!["C".into(), "D".into()]; 2],
        vec![1.0],
        vec![vec![3.0, 0.0, 5.0, 1.0], vec![3.0, 5.0, 0.0, 1.0]],
    )
    .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{
        average_payoff, classical_bound, is_advised_equilibrium, mermin_expression, BellExpression,
        DEFAULT_ENUMERATION_LIMIT,
    };
    use crate::PROB_TOL;

    #[test]
    fn chsh_values() {
        let g = chsh_game();
        let q = chsh_quantum_advice().conditional().unwrap();
        let f = average_payoff(&g, &q).unwrap();
        let target = FRAC_PI_8.cos().powi(2);
        assert!((f[0] - target).abs() < 1e-12);
        assert!((f[1] - target).abs() < 1e-12);
        let c = chsh_best_classical_advice().conditional();
        assert!((average_payoff(&g, &c).unwrap()[0] - 0.75).abs() < 1e-12);
        let bound = classical_bound(
            &BellExpression::from_payoff(&g, 0),
            DEFAULT_ENUMERATION_LIMIT,
        )
        .unwrap();
        assert!((bound.value - 0.75).abs() < 1e-12);
        assert_eq!(bound.enumerated, 16);
        assert!(q.is_no_signaling(1e-12));
    }

    #[test]
    fn chsh_quantum_advice_is_equilibrium() {
        let g = chsh_game();
        let q = chsh_quantum_advice().conditional().unwrap();
        let v = is_advised_equilibrium(&g, &q, PROB_TOL, 1000).unwrap();
        assert!(v.is_equilibrium, "{v:?}");
    }

    #[test]
    fn mermin_values() {
        let e = mermin_expression();
        let b = classical_bound(&e, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert!((b.value - 0.5).abs() < 1e-12);
        assert_eq!(b.enumerated, 64);
        let q = mermin_quantum_advice().conditional().unwrap();
        assert!((e.value(&q).unwrap() - 1.0).abs() < 1e-12);
    }
}
