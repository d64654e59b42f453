use std::f64::consts::FRAC_1_SQRT_2;

use super::game::{check_distribution, ConditionalDistribution, Domain};
use crate::diagram::ObservableStructure;
use crate::error::{Error, Result};
use crate::tensor::{LinearMap, StateVector, C64};
use crate::PROB_TOL;

/// Classical advice: a shared hidden variable `λ ~ ρ` and local response rules
/// `p(s_i | X_i, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalAdvice {
    domain: Domain,
    rho: Vec<f64>,
    /// `responses[i][λ][x_i][s_i]`.
    responses: Vec<Vec<Vec<Vec<f64>>>>,
}

impl ClassicalAdvice {
    pub fn new(
        domain: Domain,
        mut rho: Vec<f64>,
        mut responses: Vec<Vec<Vec<Vec<f64>>>>,
    ) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::Invalid("advice without hidden values".into()));
        }
        check_distribution(&mut rho, "rho")?;
        if responses.len() != domain.players() {
            return Err(Error::Shape(format!(
                "{} response tables for {} players",
                responses.len(),
                domain.players()
            )));
        }
        for (i, per_lambda) in responses.iter_mut().enumerate() {
            if per_lambda.len() != rho.len() {
                return Err(Error::Shape(format!(
                    "player {i} has responses for {} hidden values, expected {}",
                    per_lambda.len(),
                    rho.len()
                )));
            }
            for rows in per_lambda.iter_mut() {
                if rows.len() != domain.types()[i] {
                    return Err(Error::Shape(format!("player {i}: wrong number of types")));
                }
                for row in rows.iter_mut() {
                    if row.len() != domain.strategies()[i] {
                        return Err(Error::Shape(format!(
                            "player {i}: wrong number of strategies"
                        )));
                    }
                    check_distribution(row, &format!("response of player {i}"))?;
                }
            }
        }
        Ok(Self {
            domain,
            rho,
            responses,
        })
    }

    /// One hidden value per deterministic local strategy, `choices[λ][i][x_i]`.
    pub fn from_deterministic(
        domain: Domain,
        rho: Vec<f64>,
        choices: &[Vec<Vec<usize>>],
    ) -> Result<Self> {
        let responses = (0..domain.players())
            .map(|i| {
                choices
                    .iter()
                    .map(|c| {
                        c[i].iter()
                            .map(|&s| {
                                let mut row = vec![0.0; domain.strategies()[i]];
                                if let Some(slot) = row.get_mut(s) {
                                    *slot = 1.0;
                                }
                                row
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(domain, rho, responses)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn responses(&self) -> &[Vec<Vec<Vec<f64>>>] {
        &self.responses
    }

    /// `p(s|X) = Σ_λ ρ(λ) Π_i p(s_i | X_i, λ)`.
    pub fn conditional(&self) -> ConditionalDistribution {
        let d = &self.domain;
        let ns = d.joint_strategies();
        let mut table = vec![0.0; d.size()];
        for jt in 0..d.joint_types() {
            let types = d.type_tuple(jt);
            for (lambda, &weight) in self.rho.iter().enumerate() {
                if weight == 0.0 {
                    continue;
                }
                for js in 0..ns {
                    let strat = d.strategy_tuple(js);
                    let p: f64 = strat
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| self.responses[i][lambda][types[i]][s])
                        .product();
                    table[jt * ns + js] += weight * p;
                }
            }
        }
        ConditionalDistribution::new(d.clone(), table).expect("mixture of product distributions")
    }
}

/// Shorthand for [`ClassicalAdvice::conditional`].
pub fn classical_conditional(advice: &ClassicalAdvice) -> ConditionalDistribution {
    advice.conditional()
}

/// An orthonormal projective measurement on one wire.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<StateVector>,
}

impl MeasurementBasis {
    /// Validates orthonormality within 1e-12.
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        ObservableStructure::from_basis(vectors.clone())?;
        Ok(Self { vectors })
    }

    /// Phase measurement `(|0> ± e^{iα}|1>)/√2`: outcome 0 is `+`, outcome 1 is `-`.
    pub fn phase(alpha: f64) -> Self {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        let e = C64::from_polar(FRAC_1_SQRT_2, alpha);
        Self {
            vectors: vec![
                StateVector::new(vec![2], vec![r, e]).expect("valid"),
                StateVector::new(vec![2], vec![r, -e]).expect("valid"),
            ],
        }
    }

    /// Real-plane measurement `cos θ|0> + sin θ|1>`, `-sin θ|0> + cos θ|1>`.
    pub fn real_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let v = |a: f64, b: f64| {
            StateVector::new(vec![2], vec![C64::new(a, 0.0), C64::new(b, 0.0)]).expect("valid")
        };
        Self {
            vectors: vec![v(c, s), v(-s, c)],
        }
    }

    /// The classical points of an observable structure.
    pub fn from_observable(obs: &ObservableStructure) -> Self {
        Self {
            vectors: obs.classical_points().to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// Map whose row `k` is `<b_k|`.
    fn bra_map(&self) -> LinearMap {
        let d = self.dim();
        let data = self
            .vectors
            .iter()
            .flat_map(|v| v.amplitudes().iter().map(|a| a.conj()))
            .collect();
        LinearMap::new(vec![d], vec![d], data).expect("square")
    }
}

/// Quantum advice: a shared state measured by each player in a basis chosen by
/// their type, with outcomes relabelled to strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumAdvice {
    shared_state: StateVector,
    /// `settings[i][x_i]`.
    settings: Vec<Vec<MeasurementBasis>>,
    /// `relabel[i][outcome]` is the strategy index emitted for that outcome.
    relabel: Vec<Vec<usize>>,
    strategies: Vec<usize>,
}

impl QuantumAdvice {
    /// Identity relabelling: outcome `k` is strategy `k`.
    pub fn new(shared_state: StateVector, settings: Vec<Vec<MeasurementBasis>>) -> Result<Self> {
        let dims = shared_state.dims().to_vec();
        let relabel = dims.iter().map(|&d| (0..d).collect()).collect();
        Self::with_relabel(shared_state, settings, relabel, dims)
    }

    pub fn with_relabel(
        shared_state: StateVector,
        settings: Vec<Vec<MeasurementBasis>>,
        relabel: Vec<Vec<usize>>,
        strategies: Vec<usize>,
    ) -> Result<Self> {
        if !shared_state.is_normalized(PROB_TOL) {
            return Err(Error::Normalization {
                norm_sq: shared_state.norm_sq(),
            });
        }
        let dims = shared_state.dims();
        let n = dims.len();
        if settings.len() != n || relabel.len() != n || strategies.len() != n {
            return Err(Error::Shape(format!(
                "shared state on {n} wires but {} setting lists, {} relabellings, {} strategy counts",
                settings.len(),
                relabel.len(),
                strategies.len()
            )));
        }
        for i in 0..n {
            if settings[i].is_empty() {
                return Err(Error::Shape(format!(
                    "player {i} has no measurement settings"
                )));
            }
            if let Some(b) = settings[i].iter().find(|b| b.dim() != dims[i]) {
                return Err(Error::Shape(format!(
                    "player {i}: {}-outcome measurement on a {}-dimensional wire",
                    b.dim(),
                    dims[i]
                )));
            }
            if relabel[i].len() != dims[i] || relabel[i].iter().any(|&s| s >= strategies[i]) {
                return Err(Error::Shape(format!("player {i}: bad outcome relabelling")));
            }
        }
        Ok(Self {
            shared_state,
            settings,
            relabel,
            strategies,
        })
    }

    /// Phase measurements on qubits, `phases[i][x_i]`.
    pub fn from_phases(shared_state: StateVector, phases: &[Vec<f64>]) -> Result<Self> {
        let settings = phases
            .iter()
            .map(|ps| ps.iter().map(|&a| MeasurementBasis::phase(a)).collect())
            .collect();
        Self::new(shared_state, settings)
    }

    pub fn shared_state(&self) -> &StateVector {
        &self.shared_state
    }

    pub fn settings(&self) -> &[Vec<MeasurementBasis>] {
        &self.settings
    }

    pub fn relabel(&self) -> &[Vec<usize>] {
        &self.relabel
    }

    pub fn domain(&self) -> Domain {
        Domain::new(
            self.settings.iter().map(Vec::len).collect(),
            self.strategies.clone(),
        )
        .expect("validated")
    }

    /// `p(s|X) = Σ_{outcomes ↦ s} |<b^1_{X_1,o_1} ⊗ … ⊗ b^N_{X_N,o_N} | ψ>|²`.
    pub fn conditional(&self) -> Result<ConditionalDistribution> {
        let domain = self.domain();
        let dims = self.shared_state.dims();
        let ns = domain.joint_strategies();
        let mut table = vec![0.0; domain.size()];
        for jt in 0..domain.joint_types() {
            let types = domain.type_tuple(jt);
            let bras: Vec<LinearMap> = types
                .iter()
                .enumerate()
                .map(|(i, &x)| self.settings[i][x].bra_map())
                .collect();
            let amps = LinearMap::tensor_all(&bras)?.apply(&self.shared_state)?;
            for (o, a) in amps.amplitudes().iter().enumerate() {
                let outcome = super::game::unflatten(dims, o);
                let strat: Vec<usize> = outcome
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| self.relabel[i][k])
                    .collect();
                table[jt * ns + domain.strategy_index(&strat)] += a.norm_sqr();
            }
        }
        ConditionalDistribution::new(domain, table)
    }
}

/// Shorthand for [`QuantumAdvice::conditional`].
pub fn quantum_conditional(advice: &QuantumAdvice) -> Result<ConditionalDistribution> {
    advice.conditional()
}

/// Any source of conditional statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum Advice {
    Classical(ClassicalAdvice),
    Quantum(QuantumAdvice),
    /// A user-supplied table, e.g. a non-signaling box.
    Conditional(ConditionalDistribution),
}

impl Advice {
    pub fn conditional(&self) -> Result<ConditionalDistribution> {
        match self {
            Advice::Classical(a) => Ok(a.conditional()),
            Advice::Quantum(a) => a.conditional(),
            Advice::Conditional(c) => Ok(c.clone()),
        }
    }
}

/// `(|0…0> + |1…1>)/√2` on `n` qubits.
pub fn ghz_state(n: usize) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(vec![2; n], amps).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_from_single_lambda() {
        let d = Domain::new(vec![2, 2], vec![2, 2]).unwrap();
        let a = ClassicalAdvice::from_deterministic(d, vec![1.0], &[vec![vec![1, 0], vec![0, 1]]])
            .unwrap();
        let c = a.conditional();
        assert_eq!(c.prob(&[0, 0], &[1, 0]), 1.0);
        assert_eq!(c.prob(&[1, 1], &[0, 1]), 1.0);
        assert_eq!(c.prob(&[1, 0], &[0, 0]), 1.0);
    }

    #[test]
    fn opposite_rules_mix_evenly() {
        let d = Domain::new(vec![1, 1], vec![2, 2]).unwrap();
        let a = ClassicalAdvice::from_deterministic(
            d,
            vec![0.5, 0.5],
            &[vec![vec![0], vec![1]], vec![vec![1], vec![0]]],
        )
        .unwrap();
        let c = a.conditional();
        assert_eq!(c.table(), &[0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn shared_coin_correlates() {
        let d = Domain::new(vec![2, 2], vec![2, 2]).unwrap();
        let a = ClassicalAdvice::from_deterministic(
            d,
            vec![0.5, 0.5],
            &[vec![vec![0, 0], vec![0, 0]], vec![vec![1, 1], vec![1, 1]]],
        )
        .unwrap();
        let c = a.conditional();
        for jt in 0..4 {
            assert_eq!(c.get(jt, 0), 0.5);
            assert_eq!(c.get(jt, 3), 0.5);
            assert_eq!(c.get(jt, 1) + c.get(jt, 2), 0.0);
        }
        assert!(c.is_no_signaling(1e-12));
    }

    #[test]
    fn classical_advice_validation() {
        let d = Domain::new(vec![1], vec![2]).unwrap();
        assert!(ClassicalAdvice::new(
            d.clone(),
            vec![0.3, 0.3],
            vec![vec![vec![vec![1.0, 0.0]]; 2]]
        )
        .is_err());
        assert!(ClassicalAdvice::new(d, vec![1.0], vec![vec![vec![vec![0.6, 0.6]]]]).is_err());
    }

    #[test]
    fn ghz2_x_basis_correlated() {
        let a = QuantumAdvice::from_phases(ghz_state(2), &[vec![0.0], vec![0.0]]).unwrap();
        let c = a.conditional().unwrap();
        assert!((c.get(0, 0) - 0.5).abs() < 1e-12);
        assert!((c.get(0, 3) - 0.5).abs() < 1e-12);
        assert!(c.get(0, 1).abs() < 1e-12 && c.get(0, 2).abs() < 1e-12);
    }

    #[test]
    fn product_state_factorizes() {
        let s = StateVector::ket(2, "00").unwrap();
        let settings = vec![
            vec![
                MeasurementBasis::real_angle(0.0),
                MeasurementBasis::real_angle(0.3),
            ],
            vec![
                MeasurementBasis::real_angle(0.7),
                MeasurementBasis::phase(1.1),
            ],
        ];
        let c = QuantumAdvice::new(s, settings.clone())
            .unwrap()
            .conditional()
            .unwrap();
        let local = |b: &MeasurementBasis, k: usize| b.vectors()[k].amplitudes()[0].norm_sqr();
        for x in 0..2 {
            for y in 0..2 {
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        let expected = local(&settings[0][x], s1) * local(&settings[1][y], s2);
                        assert!((c.prob(&[x, y], &[s1, s2]) - expected).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn ghz3_odd_parity_phases() {
        use std::f64::consts::FRAC_PI_2;
        let a = QuantumAdvice::from_phases(
            ghz_state(3),
            &[vec![FRAC_PI_2], vec![FRAC_PI_2], vec![0.0]],
        )
        .unwrap();
        let c = a.conditional().unwrap();
        for js in 0..8 {
            let odd = (js as u32).count_ones() % 2 == 1;
            let expected = if odd { 0.25 } else { 0.0 };
            assert!((c.get(0, js) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn relabelling_merges_outcomes() {
        let a = QuantumAdvice::with_relabel(
            ghz_state(2),
            vec![vec![MeasurementBasis::phase(0.0)]; 2],
            vec![vec![0, 0], vec![0, 1]],
            vec![1, 2],
        )
        .unwrap();
        let c = a.conditional().unwrap();
        assert!((c.get(0, 0) - 0.5).abs() < 1e-12);
        assert!((c.get(0, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quantum_advice_validation() {
        let unnorm = StateVector::new(vec![2], vec![C64::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(
            QuantumAdvice::from_phases(unnorm, &[vec![0.0]]),
            Err(Error::Normalization { .. })
        ));
        let skew = vec![
            StateVector::ket(2, "0").unwrap(),
            StateVector::new(vec![2], vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap(),
        ];
        assert!(MeasurementBasis::new(skew).is_err());
    }
}
