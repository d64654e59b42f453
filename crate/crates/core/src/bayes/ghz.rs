//! GHZ phase statistics and the Mermin parity argument.

use std::f64::consts::FRAC_PI_2;

use super::bell::BellExpression;
use super::game::{BayesianGame, Domain};
use crate::error::{Error, Result};
use crate::tensor::Distribution;

/// Outcome statistics of measuring the normalized GHZ state on `n` qubits, wire
/// `i` in the phase basis `(|0> ± e^{iα_i}|1>)/√2`:
/// `P(s) = (1 + (-1)^{parity(s)} cos(Σ α_i)) / 2^n`.
pub fn ghz_phase_distribution(n: usize, phases: &[f64]) -> Result<Distribution> {
    if n < 2 {
        return Err(Error::Invalid(format!(
            "GHZ needs at least 2 parties, got {n}"
        )));
    }
    if phases.len() != n {
        return Err(Error::Shape(format!(
            "{} phases for {n} parties",
            phases.len()
        )));
    }
    if n >= usize::BITS as usize || phases.iter().any(|a| !a.is_finite()) {
        return Err(Error::Invalid("phases must be finite and n small".into()));
    }
    let c = phases.iter().sum::<f64>().cos();
    let scale = 0.5f64.powi(n as i32);
    let probs = (0..1usize << n)
        .map(|s| {
            let sign = if s.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            (1.0 + sign * c) * scale
        })
        .collect();
    Distribution::new(vec![2; n], probs)
}

/// Product of `(-1)^b` over bits.
pub fn parity_of_bits(bits: &[u8]) -> i8 {
    if bits.iter().filter(|&&b| b % 2 == 1).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of ±1 outcomes.
pub fn parity_of_signs(signs: &[i8]) -> i8 {
    signs
        .iter()
        .fold(1, |acc, &s| if s < 0 { -acc } else { acc })
}

/// Parity of a bit string such as `"011"`; `None` for characters other than 0/1.
pub fn parity(label: &str) -> Option<i8> {
    let bits: Option<Vec<u8>> = label
        .chars()
        .map(|c| match c {
            '0' => Some(0),
            '1' => Some(1),
            _ => None,
        })
        .collect();
    bits.map(|b| parity_of_bits(&b))
}

/// `E[(-1)^{parity(s)}]` under a distribution over bit strings.
pub fn parity_expectation(dist: &Distribution) -> f64 {
    dist.iter()
        .map(|(label, p)| f64::from(parity(&label).unwrap_or(1)) * p)
        .sum()
}

/// Phase encoding of the two Mermin settings.
pub const MERMIN_X: f64 = 0.0;
pub const MERMIN_Y: f64 = FRAC_PI_2;

/// The four Mermin settings with their quantum parity targets.
pub const MERMIN_SETTINGS: [(&str, i8); 4] = [("XXX", 1), ("XYY", -1), ("YXY", -1), ("YYX", -1)];

fn setting_phase(c: char) -> f64 {
    if c == 'Y' {
        MERMIN_Y
    } else {
        MERMIN_X
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MerminReport {
    pub settings: Vec<String>,
    /// Quantum parity expectation per setting, from the GHZ phase distribution.
    pub quantum_expectations: Vec<f64>,
    /// Product of the four quantum expectations.
    pub quantum_product: f64,
    /// Number of deterministic hidden states examined (±1 for X_i and Y_i).
    pub assignments_checked: usize,
    /// Hidden states whose parities reproduce all four quantum values.
    pub satisfying_assignments: usize,
    /// Whether the product of the four classical parities is +1 for every hidden state.
    pub classical_product_always_positive: bool,
    pub inequivalent: bool,
}

/// Compares the quantum parities of GHZ³ on the Mermin settings with every local
/// deterministic assignment of ±1 values to `X_i`, `Y_i`.
pub fn mermin_inequivalence() -> MerminReport {
    let mut quantum_expectations = Vec::with_capacity(4);
    for (setting, _) in MERMIN_SETTINGS {
        let phases: Vec<f64> = setting.chars().map(setting_phase).collect();
        let dist = ghz_phase_distribution(3, &phases).expect("three parties");
        quantum_expectations.push(parity_expectation(&dist));
    }
    let quantum_product = quantum_expectations.iter().product();
    let mut satisfying = 0;
    let mut always_positive = true;
    // bit 2i: value of X_i, bit 2i+1: value of Y_i (1 means -1)
    for assignment in 0..64u32 {
        let value = |party: usize, c: char| -> i8 {
            let bit = 2 * party + usize::from(c == 'Y');
            if assignment >> bit & 1 == 1 {
                -1
            } else {
                1
            }
        };
        let classical: Vec<i8> = MERMIN_SETTINGS
            .iter()
            .map(|(setting, _)| {
                let signs: Vec<i8> = setting
                    .chars()
                    .enumerate()
                    .map(|(p, c)| value(p, c))
                    .collect();
                parity_of_signs(&signs)
            })
            .collect();
        if parity_of_signs(&classical) != 1 {
            always_positive = false;
        }
        if classical
            .iter()
            .zip(&quantum_expectations)
            .all(|(&c, &q)| (f64::from(c) - q).abs() < 1e-9)
        {
            satisfying += 1;
        }
    }
    MerminReport {
        settings: MERMIN_SETTINGS.iter().map(|(s, _)| s.to_string()).collect(),
        inequivalent: satisfying == 0,
        quantum_expectations,
        quantum_product,
        assignments_checked: 64,
        satisfying_assignments: satisfying,
        classical_product_always_positive: always_positive,
    }
}

/// Three-player common-interest game on the Mermin settings: types `X`/`Y`,
/// strategies `0`/`1`, uniform prior over `XXX, XYY, YXY, YYX`, and payoff
/// `t(X) (-1)^{parity(s)}` with target `t = +1` on `XXX`, `-1` otherwise. The
/// average payoff is the Mermin correlator divided by 4.
pub fn mermin_game() -> BayesianGame {
    let domain = Domain::new(vec![2; 3], vec![2; 3]).expect("valid");
    let mut prior = vec![0.0; 8];
    let mut payoff = vec![0.0; 64];
    for (setting, target) in MERMIN_SETTINGS {
        let types: Vec<usize> = setting.chars().map(|c| usize::from(c == 'Y')).collect();
        let jt = domain.type_index(&types);
        prior[jt] = 0.25;
        for js in 0..8usize {
            let sign = if js.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            payoff[jt * 8 + js] = f64::from(target) * sign;
        }
    }
    BayesianGame::new(
        vec![vec!["X".into(), "Y".into()]; 3],
        vec![vec!["0".into(), "1".into()]; 3],
        prior,
        vec![payoff; 3],
    )
    .expect("valid")
}

/// Mermin expression as a Bell functional (`μ·P` of [`mermin_game`]).
pub fn mermin_expression() -> BellExpression {
    BellExpression::from_payoff(&mermin_game(), 0)
}
