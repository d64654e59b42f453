//! EWL quantization of strategic-form games.
//!
//! A profile of single-qudit unitaries `s_1 .. s_N` produces the final state
//! `U† (s_1 ⊗ … ⊗ s_N) U |initial>`, which is measured in the computational basis;
//! each player's payoff is the coefficient-weighted outcome distribution.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::tensor::{parse_label, Distribution, LinearMap, StateVector, C64};
use crate::PROB_TOL;

/// A finite strategic-form game with real payoffs.
///
/// Payoff tensors are flattened row-major over strategy indices, first player
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategicFormGame {
    labels: Vec<Vec<String>>,
    payoffs: Vec<Vec<f64>>,
}

impl StrategicFormGame {
    pub fn new(labels: Vec<Vec<String>>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invalid("game without players".into()));
        }
        if let Some(i) = labels.iter().position(Vec::is_empty) {
            return Err(Error::EmptyStrategySet(i));
        }
        if payoffs.len() != labels.len() {
            return Err(Error::Shape(format!(
                "{} payoff tensors for {} players",
                payoffs.len(),
                labels.len()
            )));
        }
        let size: usize = labels.iter().map(Vec::len).product();
        for (i, p) in payoffs.iter().enumerate() {
            if p.len() != size {
                return Err(Error::Shape(format!(
                    "payoff tensor of player {i} has {} entries, expected {size}",
                    p.len()
                )));
            }
        }
        Ok(Self { labels, payoffs })
    }

    /// The classical Prisoners' Dilemma with strategies `C`, `D`.
    pub fn prisoners_dilemma() -> Self {
        let labels = vec![vec!["C".to_string(), "D".to_string()]; 2];
        Self::new(
            labels,
            vec![vec![3.0, 0.0, 5.0, 1.0], vec![3.0, 5.0, 0.0, 1.0]],
        )
        .expect("well-formed")
    }

    pub fn players(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> f64 {
        let sizes: Vec<usize> = self.labels.iter().map(Vec::len).collect();
        self.payoffs[player][flat_index(&sizes, profile)]
    }

    pub fn table(&self) -> PayoffTable {
        let n = self.payoffs[0].len();
        let payoffs = (0..n)
            .map(|k| self.payoffs.iter().map(|p| p[k]).collect())
            .collect();
        PayoffTable {
            labels: self.labels.clone(),
            payoffs,
        }
    }
}

fn flat_index(sizes: &[usize], profile: &[usize]) -> usize {
    sizes
        .iter()
        .zip(profile)
        .fold(0, |acc, (&n, &k)| acc * n + k)
}

fn unflatten(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &n) in out.iter_mut().zip(sizes).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// A named single-qudit unitary move.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub label: String,
    pub op: LinearMap,
}

impl Strategy {
    pub fn new(label: impl Into<String>, op: LinearMap) -> Self {
        Self {
            label: label.into(),
            op,
        }
    }

    /// A builtin qubit operator (`I`, `X`, `Y`, `Z`, `H`, `S`) labelled by its name.
    pub fn named(name: &str) -> Result<Self> {
        LinearMap::named(name)
            .map(|op| Self::new(name, op))
            .ok_or_else(|| Error::Invalid(format!("unknown builtin operator `{name}`")))
    }

    /// Builtin strategies by name, e.g. `Strategy::set(&["I", "X", "H"])`.
    pub fn set(names: &[&str]) -> Result<Vec<Self>> {
        names.iter().map(|n| Self::named(n)).collect()
    }
}

/// The EWL entangler `(I^{⊗N} + i σ_x^{⊗N}) / √2`.
pub fn ewl_entangler(n_players: usize, dim: usize) -> Result<LinearMap> {
    if dim != 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if n_players < 2 {
        return Err(Error::Invalid(format!(
            "the entangler needs at least 2 players, got {n_players}"
        )));
    }
    let xs = vec![LinearMap::pauli_x(); n_players];
    let x_all = LinearMap::tensor_all(&xs)?;
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    LinearMap::identity(&vec![2; n_players])
        .scale(r)
        .add(&x_all.scale(C64::new(0.0, FRAC_1_SQRT_2)))
}

/// The two-parameter EWL move
/// `[[e^{iφ} cos(θ/2), sin(θ/2)], [-sin(θ/2), e^{-iφ} cos(θ/2)]]`.
pub fn ewl_two_parameter(theta: f64, phi: f64) -> LinearMap {
    let (s, c) = (theta / 2.0).sin_cos();
    LinearMap::from_rows(vec![
        vec![C64::from_polar(c, phi), C64::new(s, 0.0)],
        vec![C64::new(-s, 0.0), C64::from_polar(c, -phi)],
    ])
    .expect("2x2")
}

/// Samples the two-parameter family on a grid `θ ∈ [0, π]`, `φ ∈ [0, π/2]`
/// (endpoints included) as a named strategy set.
pub fn strategy_grid(n_theta: usize, n_phi: usize) -> Vec<Strategy> {
    let steps = |n: usize, max: f64| -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![0.0],
            _ => (0..n).map(|k| max * k as f64 / (n - 1) as f64).collect(),
        }
    };
    let mut out = Vec::new();
    for theta in steps(n_theta, PI) {
        for phi in steps(n_phi, FRAC_PI_2) {
            out.push(Strategy::new(
                format!("U({theta:.4},{phi:.4})"),
                ewl_two_parameter(theta, phi),
            ));
        }
    }
    out
}

/// A quantum game: entangler, initial state, per-player unitary strategy sets and
/// per-player payoff coefficients over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGameSpec {
    dims: Vec<usize>,
    initial_ket: String,
    entangler: LinearMap,
    prepared: Option<StateVector>,
    strategies: Vec<Vec<Strategy>>,
    payoff_coeffs: Vec<Vec<f64>>,
}

/// Outcome of one strategy profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileResult {
    pub profile: Vec<String>,
    pub final_state: StateVector,
    pub outcome_distribution: Distribution,
    pub payoffs: Vec<f64>,
}

impl QuantumGameSpec {
    /// Player wire dimensions are read from the entangler; the initial ket is all
    /// zeros. `payoff_coeffs[i][k]` is player `i`'s payoff for outcome index `k`.
    pub fn new(
        entangler: LinearMap,
        strategies: Vec<Vec<Strategy>>,
        payoff_coeffs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let dims = entangler.in_dims().to_vec();
        if entangler.out_dims() != dims.as_slice() {
            return Err(Error::Shape(format!(
                "entangler maps {:?} to {:?}",
                dims,
                entangler.out_dims()
            )));
        }
        if !entangler.is_unitary(PROB_TOL) {
            return Err(Error::NotUnitary("entangler".into()));
        }
        let n = dims.len();
        if strategies.len() != n || payoff_coeffs.len() != n {
            return Err(Error::Shape(format!(
                "{n} players but {} strategy sets and {} payoff tables",
                strategies.len(),
                payoff_coeffs.len()
            )));
        }
        for (i, set) in strategies.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::EmptyStrategySet(i));
            }
            let mut seen = BTreeSet::new();
            for s in set {
                if !seen.insert(s.label.as_str()) {
                    return Err(Error::Invalid(format!(
                        "duplicate strategy `{}` for player {i}",
                        s.label
                    )));
                }
                if s.op.in_dims() != [dims[i]] || s.op.out_dims() != [dims[i]] {
                    return Err(Error::Shape(format!(
                        "strategy `{}` of player {i} does not act on a single {}-dimensional wire",
                        s.label, dims[i]
                    )));
                }
                if !s.op.is_unitary(PROB_TOL) {
                    return Err(Error::NotUnitary(s.label.clone()));
                }
            }
        }
        let outcomes: usize = dims.iter().product();
        for (i, c) in payoff_coeffs.iter().enumerate() {
            if c.len() != outcomes {
                return Err(Error::Shape(format!(
                    "player {i} has {} payoff coefficients, expected {outcomes}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("payoff coefficients"));
            }
        }
        let initial_ket = crate::tensor::index_label(&dims, 0);
        Ok(Self {
            dims,
            initial_ket,
            entangler,
            prepared: None,
            strategies,
            payoff_coeffs,
        })
    }

    /// Payoff coefficients keyed by outcome strings such as `"01"`.
    pub fn with_keyed_payoffs(
        entangler: LinearMap,
        strategies: Vec<Vec<Strategy>>,
        payoffs: &[BTreeMap<String, f64>],
    ) -> Result<Self> {
        let dims = entangler.in_dims().to_vec();
        let outcomes: usize = dims.iter().product();
        let mut coeffs = Vec::with_capacity(payoffs.len());
        for (i, keyed) in payoffs.iter().enumerate() {
            let mut c = vec![0.0; outcomes];
            let mut seen = vec![false; outcomes];
            for (label, &v) in keyed {
                let k = parse_label(&dims, label).ok_or_else(|| {
                    Error::Invalid(format!("bad outcome `{label}` for player {i}"))
                })?;
                c[k] = v;
                seen[k] = true;
            }
            if let Some(k) = seen.iter().position(|s| !s) {
                return Err(Error::Invalid(format!(
                    "player {i} has no payoff for outcome `{}`",
                    crate::tensor::index_label(&dims, k)
                )));
            }
            coeffs.push(c);
        }
        Self::new(entangler, strategies, coeffs)
    }

    /// Replaces the all-zeros initial ket.
    pub fn with_initial_ket(mut self, label: &str) -> Result<Self> {
        parse_label(&self.dims, label)
            .ok_or_else(|| Error::Invalid(format!("bad initial ket `{label}`")))?;
        self.initial_ket = label.to_string();
        Ok(self)
    }

    /// Uses an explicit shared state in place of `U |initial>`. Only normalization
    /// is checked.
    pub fn with_initial_state(mut self, state: StateVector) -> Result<Self> {
        if state.dims() != self.dims.as_slice() {
            return Err(Error::Shape(format!(
                "initial state on {:?}, game on {:?}",
                state.dims(),
                self.dims
            )));
        }
        if !state.is_normalized(PROB_TOL) {
            return Err(Error::Normalization {
                norm_sq: state.norm_sq(),
            });
        }
        self.prepared = Some(state);
        Ok(self)
    }

    pub fn players(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn initial_ket(&self) -> &str {
        &self.initial_ket
    }

    pub fn entangler(&self) -> &LinearMap {
        &self.entangler
    }

    pub fn prepared_state(&self) -> Option<&StateVector> {
        self.prepared.as_ref()
    }

    pub fn strategies(&self) -> &[Vec<Strategy>] {
        &self.strategies
    }

    pub fn payoff_coeffs(&self) -> &[Vec<f64>] {
        &self.payoff_coeffs
    }

    /// `U |initial>`, or the explicit shared state.
    pub fn shared_state(&self) -> Result<StateVector> {
        match &self.prepared {
            Some(s) => Ok(s.clone()),
            None => self.entangler.apply(&StateVector::from_label(
                self.dims.clone(),
                &self.initial_ket,
            )?),
        }
    }

    fn resolve(&self, profile: &[&str]) -> Result<Vec<usize>> {
        if profile.len() != self.players() {
            return Err(Error::Shape(format!(
                "profile of {} strategies for {} players",
                profile.len(),
                self.players()
            )));
        }
        profile
            .iter()
            .enumerate()
            .map(|(i, label)| {
                self.strategies[i]
                    .iter()
                    .position(|s| s.label == *label)
                    .ok_or_else(|| Error::UnknownStrategy {
                        player: i,
                        label: label.to_string(),
                    })
            })
            .collect()
    }

    fn final_state_indices(&self, shared: &StateVector, idx: &[usize]) -> Result<StateVector> {
        let ops: Vec<&LinearMap> = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| &self.strategies[i][k].op)
            .collect();
        let moves = LinearMap::tensor_all(ops)?;
        self.entangler.dagger().apply(&moves.apply(shared)?)
    }

    /// `σ = U† (s_1 ⊗ … ⊗ s_N) ρ`.
    pub fn final_state(&self, profile: &[&str]) -> Result<StateVector> {
        let idx = self.resolve(profile)?;
        self.final_state_indices(&self.shared_state()?, &idx)
    }

    pub fn payoffs(&self, profile: &[&str]) -> Result<Vec<f64>> {
        Ok(self.evaluate_profile(profile)?.payoffs)
    }

    pub fn evaluate_profile(&self, profile: &[&str]) -> Result<ProfileResult> {
        let idx = self.resolve(profile)?;
        self.evaluate_indices(&self.shared_state()?, &idx)
    }

    fn evaluate_indices(&self, shared: &StateVector, idx: &[usize]) -> Result<ProfileResult> {
        let final_state = self.final_state_indices(shared, idx)?;
        let outcome_distribution = final_state.born_probabilities()?;
        let payoffs = self
            .payoff_coeffs
            .iter()
            .map(|c| {
                c.iter()
                    .zip(outcome_distribution.probs())
                    .map(|(a, p)| a * p)
                    .sum()
            })
            .collect();
        Ok(ProfileResult {
            profile: idx
                .iter()
                .enumerate()
                .map(|(i, &k)| self.strategies[i][k].label.clone())
                .collect(),
            final_state,
            outcome_distribution,
            payoffs,
        })
    }

    /// Payoffs of every profile in the Cartesian product of strategy sets.
    pub fn payoff_table(&self) -> Result<PayoffTable> {
        let shared = self.shared_state()?;
        let sizes: Vec<usize> = self.strategies.iter().map(Vec::len).collect();
        let total: usize = sizes.iter().product();
        let payoffs = (0..total)
            .map(|k| {
                self.evaluate_indices(&shared, &unflatten(&sizes, k))
                    .map(|r| r.payoffs)
            })
            .collect::<Result<_>>()?;
        Ok(PayoffTable {
            labels: self
                .strategies
                .iter()
                .map(|set| set.iter().map(|s| s.label.clone()).collect())
                .collect(),
            payoffs,
        })
    }
}

/// Payoff vectors for every pure profile of a finite game.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    labels: Vec<Vec<String>>,
    /// Indexed by flattened profile (strategy-set order, first player most
    /// significant), then by player.
    payoffs: Vec<Vec<f64>>,
}

impl PayoffTable {
    pub fn new(labels: Vec<Vec<String>>, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        let total: usize = labels.iter().map(Vec::len).product();
        if labels.is_empty() || payoffs.len() != total {
            return Err(Error::Shape(format!(
                "{} payoff vectors for {total} profiles",
                payoffs.len()
            )));
        }
        if let Some(i) = labels.iter().position(Vec::is_empty) {
            return Err(Error::EmptyStrategySet(i));
        }
        if payoffs.iter().any(|p| p.len() != labels.len()) {
            return Err(Error::Shape(
                "payoff vector length differs from player count".into(),
            ));
        }
        Ok(Self { labels, payoffs })
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    fn profile_labels(&self, idx: &[usize]) -> Vec<String> {
        idx.iter()
            .enumerate()
            .map(|(i, &k)| self.labels[i][k].clone())
            .collect()
    }

    pub fn get(&self, profile: &[&str]) -> Option<&[f64]> {
        if profile.len() != self.labels.len() {
            return None;
        }
        let idx: Option<Vec<usize>> = profile
            .iter()
            .enumerate()
            .map(|(i, l)| self.labels[i].iter().position(|x| x == l))
            .collect();
        Some(&self.payoffs[flat_index(&self.sizes(), &idx?)])
    }

    /// `(profile labels, payoffs)` sorted lexicographically by label list.
    pub fn entries(&self) -> Vec<(Vec<String>, Vec<f64>)> {
        let sizes = self.sizes();
        let mut out: Vec<_> = self
            .payoffs
            .iter()
            .enumerate()
            .map(|(k, p)| (self.profile_labels(&unflatten(&sizes, k)), p.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Profiles where no player gains more than `tol` by a unilateral deviation.
    pub fn pure_nash_with_tolerance(&self, tol: f64) -> Vec<Vec<String>> {
        let sizes = self.sizes();
        let mut out: Vec<Vec<String>> = (0..self.payoffs.len())
            .filter(|&k| {
                let idx = unflatten(&sizes, k);
                (0..sizes.len()).all(|player| {
                    let current = self.payoffs[k][player];
                    (0..sizes[player]).all(|alt| {
                        let mut dev = idx.clone();
                        dev[player] = alt;
                        self.payoffs[flat_index(&sizes, &dev)][player] <= current + tol
                    })
                })
            })
            .map(|k| self.profile_labels(&unflatten(&sizes, k)))
            .collect();
        out.sort();
        out
    }

    pub fn pure_nash(&self) -> Vec<Vec<String>> {
        self.pure_nash_with_tolerance(PROB_TOL)
    }

    /// Profiles whose payoff vector is not dominated (weakly better for all,
    /// strictly better by more than `tol` for one) by another profile's.
    pub fn pareto_optimal_with_tolerance(&self, tol: f64) -> Vec<Vec<String>> {
        let dominates = |q: &[f64], p: &[f64]| {
            q.iter().zip(p).all(|(a, b)| *a >= b - tol)
                && q.iter().zip(p).any(|(a, b)| *a > b + tol)
        };
        let sizes = self.sizes();
        let mut out: Vec<Vec<String>> = (0..self.payoffs.len())
            .filter(|&k| !self.payoffs.iter().any(|q| dominates(q, &self.payoffs[k])))
            .map(|k| self.profile_labels(&unflatten(&sizes, k)))
            .collect();
        out.sort();
        out
    }

    pub fn pareto_optimal(&self) -> Vec<Vec<String>> {
        self.pareto_optimal_with_tolerance(PROB_TOL)
    }
}

/// Pure Nash equilibria of a table at the default tolerance.
pub fn pure_nash(table: &PayoffTable) -> Vec<Vec<String>> {
    table.pure_nash()
}

/// Pareto-optimal profiles of a table at the default tolerance.
pub fn pareto_optimal(table: &PayoffTable) -> Vec<Vec<String>> {
    table.pareto_optimal()
}

/// Builds a quantum game from a classical one.
///
/// `embedding[i][k]` is the quantum move standing for player `i`'s `k`-th
/// classical strategy; it must permute basis states, and the embedded moves must
/// send the initial (all-zeros) digit to distinct basis states so each outcome
/// string names a unique classical profile. `extra` strategies are appended after
/// the embedded ones.
pub fn quantize(
    classical: &StrategicFormGame,
    embedding: Vec<Vec<Strategy>>,
    extra: Vec<Vec<Strategy>>,
    entangler: LinearMap,
) -> Result<QuantumGameSpec> {
    let n = classical.players();
    if embedding.len() != n || extra.len() != n {
        return Err(Error::Shape(format!(
            "{n} players but {} embeddings and {} extra sets",
            embedding.len(),
            extra.len()
        )));
    }
    let dims = entangler.in_dims().to_vec();
    if dims.len() != n {
        return Err(Error::Shape(format!(
            "entangler acts on {} wires for {n} players",
            dims.len()
        )));
    }
    // outcome digit -> classical strategy index, per player
    let mut digit_to_label = Vec::with_capacity(n);
    for (i, moves) in embedding.iter().enumerate() {
        if moves.len() != classical.labels()[i].len() || moves.len() != dims[i] {
            return Err(Error::Invalid(format!(
                "player {i}: {} embedded moves for {} classical strategies on a {}-dimensional wire",
                moves.len(),
                classical.labels()[i].len(),
                dims[i]
            )));
        }
        let mut table = vec![None; dims[i]];
        for (k, s) in moves.iter().enumerate() {
            let perm =
                s.op.basis_permutation()
                    .ok_or_else(|| Error::NotPermutation(s.label.clone()))?;
            let digit = perm[0];
            if table[digit].replace(k).is_some() {
                return Err(Error::NotPermutation(s.label.clone()));
            }
        }
        digit_to_label.push(
            table
                .into_iter()
                .map(|k| k.expect("bijective"))
                .collect::<Vec<_>>(),
        );
    }
    let outcomes: usize = dims.iter().product();
    let coeffs = (0..n)
        .map(|player| {
            (0..outcomes)
                .map(|o| {
                    let digits = unflatten(&dims, o);
                    let profile: Vec<usize> = digits
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| digit_to_label[i][d])
                        .collect();
                    classical.payoff(player, &profile)
                })
                .collect()
        })
        .collect();
    let strategies = embedding
        .into_iter()
        .zip(extra)
        .map(|(mut e, x)| {
            e.extend(x);
            e
        })
        .collect();
    QuantumGameSpec::new(entangler, strategies, coeffs)
}

/// The EWL Prisoners' Dilemma with `C -> I`, `D -> X` and the given extra moves
/// for both players.
pub fn ewl_prisoners_dilemma(extra: &[&str]) -> Result<QuantumGameSpec> {
    let embedding = vec![Strategy::set(&["I", "X"])?; 2];
    let extra = vec![Strategy::set(extra)?; 2];
    quantize(
        &StrategicFormGame::prisoners_dilemma(),
        embedding,
        extra,
        ewl_entangler(2, 2)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ALG_TOL;

    fn pd(extra: &[&str]) -> QuantumGameSpec {
        ewl_prisoners_dilemma(extra).unwrap()
    }

    fn labels(v: &[&[&str]]) -> Vec<Vec<String>> {
        v.iter()
            .map(|p| p.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn entangler_matrix() {
        let u = ewl_entangler(2, 2).unwrap();
        let r = FRAC_1_SQRT_2;
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j {
                    C64::new(r, 0.0)
                } else if i + j == 3 {
                    C64::new(0.0, r)
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!((u.get(i, j) - expected).norm() < 1e-15, "({i},{j})");
            }
        }
        assert!(u.is_unitary(ALG_TOL));
        let s = u.apply(&StateVector::ket(2, "00").unwrap()).unwrap();
        assert!((s.amplitude("00").unwrap() - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude("11").unwrap() - C64::new(0.0, r)).norm() < 1e-15);
    }

    #[test]
    fn entangler_errors() {
        assert_eq!(
            ewl_entangler(2, 3).unwrap_err(),
            Error::UnsupportedDimension(3)
        );
        assert!(matches!(ewl_entangler(1, 2), Err(Error::Invalid(_))));
    }

    #[test]
    fn entangler_is_two_term_combination() {
        for n in 2..=5 {
            let xs = LinearMap::tensor_all(&vec![LinearMap::pauli_x(); n]).unwrap();
            let combo = LinearMap::identity(&vec![2; n])
                .scale(C64::new(FRAC_1_SQRT_2, 0.0))
                .add(&xs.scale(C64::new(0.0, FRAC_1_SQRT_2)))
                .unwrap();
            assert!(ewl_entangler(n, 2).unwrap().approx_eq(&combo, 0.0));
        }
    }

    #[test]
    fn final_state_examples() {
        let g = pd(&["H", "Z"]);
        let r = FRAC_1_SQRT_2;
        let expected = StateVector::new(
            vec![2, 2],
            vec![
                C64::new(0.0, 0.0),
                C64::new(r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, -r),
            ],
        )
        .unwrap();
        assert!(g
            .final_state(&["I", "H"])
            .unwrap()
            .phase_equivalent(&expected, 1e-12));
        let zero = StateVector::ket(2, "00").unwrap();
        assert!(g
            .final_state(&["I", "I"])
            .unwrap()
            .phase_equivalent(&zero, 1e-12));
        assert!(g
            .final_state(&["Z", "Z"])
            .unwrap()
            .phase_equivalent(&zero, 1e-12));
    }

    #[test]
    fn payoff_examples() {
        let g = pd(&["H"]);
        let p = g.payoffs(&["I", "H"]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        let p = g.payoffs(&["I", "I"]).unwrap();
        assert!((p[0] - 3.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        let p = g.payoffs(&["H", "H"]).unwrap();
        assert!((p[0] - 2.25).abs() < 1e-12 && (p[1] - 2.25).abs() < 1e-12);
    }

    #[test]
    fn unknown_label() {
        let g = pd(&[]);
        assert_eq!(
            g.final_state(&["I", "H"]).unwrap_err(),
            Error::UnknownStrategy {
                player: 1,
                label: "H".into()
            }
        );
    }

    #[test]
    fn non_unitary_strategy_rejected() {
        let bad = Strategy::new(
            "M",
            LinearMap::from_rows(vec![vec![C64::new(1.0, 0.0); 2]; 2]).unwrap(),
        );
        let err = QuantumGameSpec::new(
            ewl_entangler(2, 2).unwrap(),
            vec![vec![bad], Strategy::set(&["I"]).unwrap()],
            vec![vec![0.0; 4]; 2],
        )
        .unwrap_err();
        assert_eq!(err, Error::NotUnitary("M".into()));
    }

    #[test]
    fn classical_restriction_table() {
        let t = pd(&[]).payoff_table().unwrap();
        let entries = t.entries();
        let expected = [
            (["I", "I"], [3.0, 3.0]),
            (["I", "X"], [0.0, 5.0]),
            (["X", "I"], [5.0, 0.0]),
            (["X", "X"], [1.0, 1.0]),
        ];
        assert_eq!(entries.len(), 4);
        for ((labels, pay), (el, ep)) in entries.iter().zip(expected) {
            assert_eq!(labels, &el.to_vec());
            assert!(pay.iter().zip(ep).all(|(a, b)| (a - b).abs() < 1e-12));
        }
        assert_eq!(t.pure_nash(), labels(&[&["X", "X"]]));
    }

    #[test]
    fn singleton_table() {
        let g = QuantumGameSpec::new(
            ewl_entangler(2, 2).unwrap(),
            vec![Strategy::set(&["H"]).unwrap(); 2],
            pd(&[]).payoff_coeffs().to_vec(),
        )
        .unwrap();
        let t = g.payoff_table().unwrap();
        assert_eq!(t.entries().len(), 1);
        assert_eq!(
            t.get(&["H", "H"]).unwrap(),
            g.payoffs(&["H", "H"]).unwrap().as_slice()
        );
        assert_eq!(t.pareto_optimal(), labels(&[&["H", "H"]]));
        assert_eq!(t.pure_nash(), labels(&[&["H", "H"]]));
    }

    #[test]
    fn nash_and_pareto_with_hadamard() {
        let t = pd(&["H"]).payoff_table().unwrap();
        assert_eq!(t.entries().len(), 9);
        assert_eq!(t.pure_nash(), labels(&[&["H", "H"]]));
        let pareto = t.pareto_optimal();
        assert!(!pareto.contains(&vec!["H".to_string(), "H".to_string()]));
        assert!(pareto.contains(&vec!["I".to_string(), "I".to_string()]));
    }

    #[test]
    fn nash_with_sigma_z() {
        let t = pd(&["H", "Z"]).payoff_table().unwrap();
        let nash = t.pure_nash();
        let zz = vec!["Z".to_string(), "Z".to_string()];
        assert!(nash.contains(&zz));
        let p = t.get(&["Z", "Z"]).unwrap();
        assert!((p[0] - 3.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        assert!(t.pareto_optimal().contains(&zz));
    }

    #[test]
    fn identity_entangler_reproduces_classical() {
        let g = quantize(
            &StrategicFormGame::prisoners_dilemma(),
            vec![Strategy::set(&["I", "X"]).unwrap(); 2],
            vec![vec![], vec![]],
            LinearMap::identity(&[2, 2]),
        )
        .unwrap();
        let classical = StrategicFormGame::prisoners_dilemma().table();
        for ((la, pa), (lb, pb)) in g
            .payoff_table()
            .unwrap()
            .entries()
            .iter()
            .zip(classical.entries())
        {
            assert_eq!(la.len(), lb.len());
            assert!(pa.iter().zip(&pb).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn quantize_rejects_non_permutation() {
        let err = quantize(
            &StrategicFormGame::prisoners_dilemma(),
            vec![
                Strategy::set(&["I", "H"]).unwrap(),
                Strategy::set(&["I", "X"]).unwrap(),
            ],
            vec![vec![], vec![]],
            ewl_entangler(2, 2).unwrap(),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotPermutation("H".into()));
        let err = quantize(
            &StrategicFormGame::prisoners_dilemma(),
            vec![
                Strategy::set(&["X", "X"]).unwrap(),
                Strategy::set(&["I", "X"]).unwrap(),
            ],
            vec![vec![], vec![]],
            ewl_entangler(2, 2).unwrap(),
        );
        assert!(err.is_err());
    }

    /// Symmetric 3-player dilemma: a cooperator earns 2 per other cooperator,
    /// a defector earns 1 plus 2 per cooperator among the others.
    fn three_player_dilemma() -> StrategicFormGame {
        let labels = vec![vec!["C".to_string(), "D".to_string()]; 3];
        let payoffs = (0..3)
            .map(|player| {
                (0..8)
                    .map(|k| {
                        let idx = unflatten(&[2, 2, 2], k);
                        let others_c =
                            (0..3).filter(|&j| j != player && idx[j] == 0).count() as f64;
                        if idx[player] == 0 {
                            2.0 * others_c
                        } else {
                            1.0 + 2.0 * others_c
                        }
                    })
                    .collect()
            })
            .collect();
        StrategicFormGame::new(labels, payoffs).unwrap()
    }

    #[test]
    fn three_player_quantization() {
        let classical = three_player_dilemma();
        let g = quantize(
            &classical,
            vec![Strategy::set(&["I", "X"]).unwrap(); 3],
            vec![Strategy::set(&["H"]).unwrap(); 3],
            ewl_entangler(3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(g.payoff_coeffs()[0].len(), 8);
        let t = g.payoff_table().unwrap();
        assert_eq!(t.entries().len(), 27);
        for (profile, _) in t.entries() {
            let refs: Vec<&str> = profile.iter().map(String::as_str).collect();
            let r = g.evaluate_profile(&refs).unwrap();
            assert!(r.final_state.is_normalized(1e-9));
            assert!((r.outcome_distribution.total() - 1.0).abs() < 1e-9);
        }
        // embedded strategies reproduce the classical game
        for k in 0..8 {
            let idx = unflatten(&[2, 2, 2], k);
            let names: Vec<&str> = idx.iter().map(|&i| ["I", "X"][i]).collect();
            let p = g.payoffs(&names).unwrap();
            for (player, v) in p.iter().enumerate() {
                assert!((v - classical.payoff(player, &idx)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn n_player_identity_profile_returns_zero_ket() {
        for n in 2..=6 {
            let g = QuantumGameSpec::new(
                ewl_entangler(n, 2).unwrap(),
                vec![Strategy::set(&["I"]).unwrap(); n],
                vec![vec![0.0; 1 << n]; n],
            )
            .unwrap();
            let s = g.final_state(&vec!["I"; n]).unwrap();
            let zero = StateVector::basis(vec![2; n], 0).unwrap();
            assert!(s.approx_eq(&zero, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn explicit_initial_state() {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        let o = C64::new(0.0, 0.0);
        let ghz = StateVector::new(vec![2, 2], vec![r, o, o, r]).unwrap();
        let g = pd(&["H"]).with_initial_state(ghz.clone()).unwrap();
        assert_eq!(g.shared_state().unwrap(), ghz);
        let unnorm = ghz.scale(C64::new(2.0, 0.0));
        assert!(matches!(
            pd(&[]).with_initial_state(unnorm),
            Err(Error::Normalization { .. })
        ));
        let g = pd(&[]).with_initial_ket("11").unwrap();
        assert_eq!(g.initial_ket(), "11");
        assert!(pd(&[]).with_initial_ket("2").is_err());
    }

    #[test]
    fn grid_strategies_are_unitary() {
        let grid = strategy_grid(3, 2);
        assert_eq!(grid.len(), 6);
        for s in &grid {
            assert!(s.op.is_unitary(1e-12), "{}", s.label);
        }
        // θ = 0, φ = 0 is the identity; θ = π, φ = 0 is i σ_y
        assert!(grid[0].op.approx_eq(&LinearMap::identity(&[2]), 1e-15));
        let g = QuantumGameSpec::new(
            ewl_entangler(2, 2).unwrap(),
            vec![grid.clone(), grid],
            pd(&[]).payoff_coeffs().to_vec(),
        )
        .unwrap();
        assert_eq!(g.payoff_table().unwrap().entries().len(), 36);
    }
}
