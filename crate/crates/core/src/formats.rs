//! JSON input files for games, read by the CLI and the Python bindings.
//!
//! Complex numbers are `[re, im]` pairs; matrices are lists of rows. Angles may be
//! numbers (radians) or strings in the diagram angle syntax, e.g. `"pi/2"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bayes::{
    Advice, BayesianGame, BellExpression, ClassicalAdvice, ConditionalDistribution,
    MeasurementBasis, QuantumAdvice,
};
use crate::diagram::parse_angle;
use crate::error::{Error, Result};
use crate::ewl::{ewl_entangler, QuantumGameSpec, Strategy};
use crate::tensor::{LinearMap, StateVector, C64};

pub type ComplexPair = [f64; 2];
pub type MatrixRows = Vec<Vec<ComplexPair>>;

fn c64(p: &ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

fn matrix(rows: &MatrixRows) -> Result<LinearMap> {
    LinearMap::from_rows(rows.iter().map(|r| r.iter().map(c64).collect()).collect())
}

fn state(dims: Vec<usize>, amps: &[ComplexPair]) -> Result<StateVector> {
    StateVector::new(dims, amps.iter().map(c64).collect())
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// An angle in radians or as text like `"3*pi/4"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Radians(a) => Ok(*a),
            Angle::Text(t) => Ok(parse_angle(t)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntanglerSpec {
    /// Only `"ewl"`.
    Named(String),
    Matrix {
        matrix: MatrixRows,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StrategySpec {
    /// Builtin qubit operator: `I`, `X`, `Y`, `Z`, `H`, `S`.
    Named(String),
    Matrix {
        label: String,
        matrix: MatrixRows,
    },
}

impl StrategySpec {
    pub fn label(&self) -> &str {
        match self {
            StrategySpec::Named(n) => n,
            StrategySpec::Matrix { label, .. } => label,
        }
    }

    fn build(&self) -> Result<Strategy> {
        match self {
            StrategySpec::Named(n) => Strategy::named(n),
            StrategySpec::Matrix { label, matrix: m } => {
                Ok(Strategy::new(label.clone(), matrix(m)?))
            }
        }
    }
}

fn two() -> usize {
    2
}

/// An EWL-style quantum game.
///
/// ```json
/// {"players": 2, "dim": 2, "entangler": "ewl",
///  "strategies": [["I","X","H"], ["I","X","H"]],
///  "payoffs": [{"00": 3, "01": 0, "10": 5, "11": 1}, {"00": 3, "01": 5, "10": 0, "11": 1}]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EwlGameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub players: usize,
    #[serde(default = "two")]
    pub dim: usize,
    /// Initial basis ket, all zeros by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    pub entangler: EntanglerSpec,
    pub strategies: Vec<Vec<StrategySpec>>,
    /// Per player, outcome string to payoff.
    pub payoffs: Vec<BTreeMap<String, f64>>,
    /// Explicit shared state replacing `U |initial>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<ComplexPair>>,
}

impl EwlGameFile {
    pub fn to_spec(&self) -> Result<QuantumGameSpec> {
        if self.players == 0 {
            return Err(Error::Invalid("a game needs at least one player".into()));
        }
        let entangler = match &self.entangler {
            EntanglerSpec::Named(n) if n == "ewl" => ewl_entangler(self.players, self.dim)?,
            EntanglerSpec::Named(n) => {
                return Err(Error::Invalid(format!("unknown entangler `{n}`")))
            }
            EntanglerSpec::Matrix { matrix: m } => {
                let dims = vec![self.dim; self.players];
                let rows = m.iter().map(|r| r.iter().map(c64).collect()).collect();
                LinearMap::from_rows_with_dims(dims.clone(), dims, rows)?
            }
        };
        if entangler.in_dims().len() != self.players {
            return Err(Error::Shape("entangler does not match player count".into()));
        }
        let strategies = self
            .strategies
            .iter()
            .map(|set| set.iter().map(StrategySpec::build).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let mut spec = QuantumGameSpec::with_keyed_payoffs(entangler, strategies, &self.payoffs)?;
        if let Some(k) = &self.initial {
            spec = spec.with_initial_ket(k)?;
        }
        if let Some(amps) = &self.state {
            spec = spec.with_initial_state(state(vec![self.dim; self.players], amps)?)?;
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AdviceSpec {
    /// Hidden states `lambda` drawn with `rho`; `responses[λ][i][x]` is the
    /// strategy label player `i` plays on type `x`.
    Classical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<Vec<String>>,
        rho: Vec<f64>,
        responses: Vec<Vec<Vec<String>>>,
    },
    /// Shared state on one wire per player, measured in `bases[i][x]` (list of
    /// basis vectors) or the qubit phase basis for `phases[i][x]`. Outcome `k`
    /// is strategy `k`.
    Quantum {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<Vec<usize>>,
        state: Vec<ComplexPair>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bases: Option<Vec<Vec<Vec<Vec<ComplexPair>>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phases: Option<Vec<Vec<Angle>>>,
    },
    /// `table[jt][js]`.
    Conditional { table: Vec<Vec<f64>> },
}

/// Bell functional over the game's domain: explicit `coefficients[jt][js]`, or
/// `μ · P_player` when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

/// A Bayesian game. Joint types and strategies are indexed row-major with the
/// last player varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BayesGameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub players: usize,
    pub types: Vec<Vec<String>>,
    pub strategies: Vec<Vec<String>>,
    /// Prior over joint types.
    pub prior: Vec<f64>,
    /// `payoffs[i][jt][js]`.
    pub payoffs: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advice: Option<AdviceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bell: Option<BellSpec>,
}

impl BayesGameFile {
    pub fn to_game(&self) -> Result<BayesianGame> {
        if self.types.len() != self.players || self.strategies.len() != self.players {
            return Err(Error::Shape(format!(
                "{} players but {} type lists and {} strategy lists",
                self.players,
                self.types.len(),
                self.strategies.len()
            )));
        }
        let payoffs = self
            .payoffs
            .iter()
            .map(|rows| rows.iter().flatten().copied().collect())
            .collect();
        let game = BayesianGame::new(
            self.types.clone(),
            self.strategies.clone(),
            self.prior.clone(),
            payoffs,
        )?;
        let ns = game.domain().joint_strategies();
        if self.payoffs.iter().flatten().any(|row| row.len() != ns) {
            return Err(Error::Shape(format!("payoff rows must have {ns} entries")));
        }
        Ok(game)
    }

    pub fn to_advice(&self, game: &BayesianGame) -> Result<Option<Advice>> {
        let Some(spec) = &self.advice else {
            return Ok(None);
        };
        let domain = game.domain().clone();
        let advice = match spec {
            AdviceSpec::Classical {
                lambda,
                rho,
                responses,
            } => {
                if lambda.as_ref().is_some_and(|l| l.len() != rho.len()) {
                    return Err(Error::Shape("lambda and rho lengths differ".into()));
                }
                let choices = responses
                    .iter()
                    .map(|per_player| {
                        if per_player.len() != game.players() {
                            return Err(Error::Shape("responses need one list per player".into()));
                        }
                        per_player
                            .iter()
                            .enumerate()
                            .map(|(i, labels)| {
                                labels
                                    .iter()
                                    .map(|l| strategy_index(game, i, l))
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Advice::Classical(ClassicalAdvice::from_deterministic(
                    domain,
                    rho.clone(),
                    &choices,
                )?)
            }
            AdviceSpec::Quantum {
                dims,
                state: amps,
                bases,
                phases,
            } => {
                let dims = dims.clone().unwrap_or_else(|| vec![2; game.players()]);
                let shared = state(dims.clone(), amps)?;
                let advice = match (bases, phases) {
                    (Some(b), None) => {
                        let settings = b
                            .iter()
                            .zip(&dims)
                            .map(|(per_type, &d)| {
                                per_type
                                    .iter()
                                    .map(|vecs| {
                                        MeasurementBasis::new(
                                            vecs.iter()
                                                .map(|v| state(vec![d], v))
                                                .collect::<Result<Vec<_>>>()?,
                                        )
                                    })
                                    .collect::<Result<Vec<_>>>()
                            })
                            .collect::<Result<Vec<_>>>()?;
                        QuantumAdvice::new(shared, settings)?
                    }
                    (None, Some(p)) => {
                        let radians = p
                            .iter()
                            .map(|ps| ps.iter().map(Angle::radians).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        QuantumAdvice::from_phases(shared, &radians)?
                    }
                    _ => {
                        return Err(Error::Invalid(
                            "quantum advice needs exactly one of `bases` or `phases`".into(),
                        ))
                    }
                };
                if advice.domain() != domain {
                    return Err(Error::Shape(
                        "quantum advice does not match the game's types and strategies".into(),
                    ));
                }
                Advice::Quantum(advice)
            }
            AdviceSpec::Conditional { table } => Advice::Conditional(ConditionalDistribution::new(
                domain,
                table.iter().flatten().copied().collect(),
            )?),
        };
        Ok(Some(advice))
    }

    pub fn to_bell(&self, game: &BayesianGame) -> Result<BellExpression> {
        let spec = self.bell.clone().unwrap_or(BellSpec {
            coefficients: None,
            player: None,
            bound: None,
        });
        let expr = match (&spec.coefficients, spec.player) {
            (Some(c), None) => {
                BellExpression::new(game.domain().clone(), c.iter().flatten().copied().collect())?
            }
            (None, p) => {
                let p = p.unwrap_or(0);
                if p >= game.players() {
                    return Err(Error::Invalid(format!("no player {p}")));
                }
                BellExpression::from_payoff(game, p)
            }
            (Some(_), Some(_)) => {
                return Err(Error::Invalid(
                    "bell: give either `coefficients` or `player`".into(),
                ))
            }
        };
        Ok(match spec.bound {
            Some(b) => expr.with_bound(b),
            None => expr,
        })
    }
}

fn strategy_index(game: &BayesianGame, player: usize, label: &str) -> Result<usize> {
    game.strategy_labels()[player]
        .iter()
        .position(|s| s == label)
        .ok_or_else(|| Error::UnknownStrategy {
            player,
            label: label.to_string(),
        })
}
