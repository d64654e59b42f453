use super::advice::Advice;
use super::game::{average_payoff, BayesianGame, ConditionalDistribution, Domain};
use crate::error::{Error, Result};
use crate::PROB_TOL;

/// Default cap on the number of deterministic strategy profiles enumerated.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// A linear functional `Σ α(s, X) p(s | X)` on conditional statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    domain: Domain,
    /// Same layout as a conditional table: `coeffs[jt * joint_strategies + js]`.
    coeffs: Vec<f64>,
    bound: Option<f64>,
}

impl BellExpression {
    pub fn new(domain: Domain, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != domain.size() {
            return Err(Error::Shape(format!(
                "{} coefficients, expected {}",
                coeffs.len(),
                domain.size()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("bell coefficients"));
        }
        Ok(Self {
            domain,
            coeffs,
            bound: None,
        })
    }

    pub fn zero(domain: Domain) -> Self {
        let coeffs = vec![0.0; domain.size()];
        Self {
            domain,
            coeffs,
            bound: None,
        }
    }

    /// `α(s, X) = μ(X) P_i(X, s)`, so that the value is player `i`'s average payoff.
    pub fn from_payoff(game: &BayesianGame, player: usize) -> Self {
        Self::from_weighted_payoffs(game, &unit(game.players(), player))
    }

    /// `α(s, X) = μ(X) Σ_i β_i P_i(X, s)`.
    pub fn from_weighted_payoffs(game: &BayesianGame, betas: &[f64]) -> Self {
        let ns = game.domain().joint_strategies();
        let coeffs = (0..game.domain().size())
            .map(|k| {
                let mu = game.prior()[k / ns];
                mu * betas
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b * game.payoff_table(i)[k])
                    .sum::<f64>()
            })
            .collect();
        Self {
            domain: game.domain().clone(),
            coeffs,
            bound: None,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    pub fn value(&self, cond: &ConditionalDistribution) -> Result<f64> {
        self.domain
            .ensure_same(cond.domain(), "bell expression and conditional")?;
        Ok(self
            .coeffs
            .iter()
            .zip(cond.table())
            .map(|(a, p)| a * p)
            .sum())
    }

    /// Whether the value at `cond` stays within the attached bound.
    pub fn satisfied_by(&self, cond: &ConditionalDistribution) -> Result<Option<bool>> {
        let v = self.value(cond)?;
        Ok(self.bound.map(|l| v <= l + PROB_TOL))
    }
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

pub fn bell_value(expr: &BellExpression, cond: &ConditionalDistribution) -> Result<f64> {
    expr.value(cond)
}

/// Maximum of a Bell expression over local deterministic strategies, with the
/// maximizing strategy `strategies[i][x_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub value: f64,
    pub strategies: Vec<Vec<usize>>,
    pub enumerated: u128,
}

fn deterministic_count(domain: &Domain) -> Option<u128> {
    domain
        .types()
        .iter()
        .zip(domain.strategies())
        .try_fold(1u128, |acc, (&x, &s)| {
            (s as u128)
                .checked_pow(u32::try_from(x).ok()?)
                .and_then(|c| acc.checked_mul(c))
        })
}

/// Enumerates every assignment of one strategy per type per player; by convexity
/// the maximum over these is the maximum over all classical advice. Ties keep the
/// first maximizer in odometer order (last player's last type varies fastest).
pub fn classical_bound(expr: &BellExpression, limit: u128) -> Result<BoundCertificate> {
    let d = expr.domain();
    let total = deterministic_count(d).unwrap_or(u128::MAX);
    if total > limit {
        return Err(Error::EnumerationLimit {
            requested: total,
            limit,
        });
    }
    let n = d.players();
    let nt = d.joint_types();
    let ns = d.joint_strategies();
    let type_tuples: Vec<Vec<usize>> = (0..nt).map(|jt| d.type_tuple(jt)).collect();
    // place value of each player's strategy digit in the joint strategy index
    let mut place = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        place[i] = place[i + 1] * d.strategies()[i + 1];
    }
    // odometer over (player, type) digits
    let digits: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..d.types()[i]).map(move |x| (i, x)))
        .collect();
    let mut choice: Vec<Vec<usize>> = d.types().iter().map(|&x| vec![0; x]).collect();
    let mut best: Option<(f64, Vec<Vec<usize>>)> = None;
    loop {
        let value: f64 = type_tuples
            .iter()
            .enumerate()
            .map(|(jt, types)| {
                let js: usize = types
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| choice[i][x] * place[i])
                    .sum();
                expr.coeffs[jt * ns + js]
            })
            .sum();
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, choice.clone()));
        }
        // advance
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                let (value, strategies) = best.expect("at least one assignment");
                return Ok(BoundCertificate {
                    value,
                    strategies,
                    enumerated: total,
                });
            }
            pos -= 1;
            let (i, x) = digits[pos];
            choice[i][x] += 1;
            if choice[i][x] < d.strategies()[i] {
                break;
            }
            choice[i][x] = 0;
        }
    }
}

/// `Σ_i β_i F_i ≤ β_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeInequality {
    pub beta0: f64,
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeVerdict {
    pub payoffs: Vec<f64>,
    pub lhs: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeCertificate {
    /// Maximum of `Σ β_i F_i` over classical advice.
    pub classical_max: f64,
    pub beta0: f64,
    pub holds_classically: bool,
    pub maximizer: Vec<Vec<usize>>,
}

/// Evaluates the inequality at the average payoffs of each advice.
pub fn payoff_polytope_check(
    game: &BayesianGame,
    ineq: &PolytopeInequality,
    advice: &[Advice],
) -> Result<Vec<PolytopeVerdict>> {
    if ineq.betas.len() != game.players() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} players",
            ineq.betas.len(),
            game.players()
        )));
    }
    advice
        .iter()
        .map(|a| {
            let payoffs = average_payoff(game, &a.conditional()?)?;
            let lhs: f64 = payoffs.iter().zip(&ineq.betas).map(|(f, b)| f * b).sum();
            Ok(PolytopeVerdict {
                satisfied: lhs <= ineq.beta0 + PROB_TOL,
                payoffs,
                lhs,
            })
        })
        .collect()
}

/// Certifies (or refutes) that every classical advice satisfies the inequality
/// by maximizing `Σ β_i F_i` over deterministic local strategies.
pub fn certify_polytope_inequality(
    game: &BayesianGame,
    ineq: &PolytopeInequality,
    limit: u128,
) -> Result<PolytopeCertificate> {
    if ineq.betas.len() != game.players() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} players",
            ineq.betas.len(),
            game.players()
        )));
    }
    let expr = BellExpression::from_weighted_payoffs(game, &ineq.betas);
    let cert = classical_bound(&expr, limit)?;
    Ok(PolytopeCertificate {
        classical_max: cert.value,
        beta0: ineq.beta0,
        holds_classically: cert.value <= ineq.beta0 + PROB_TOL,
        maximizer: cert.strategies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_expression() {
        let d = Domain::new(vec![2, 2], vec![2, 2]).unwrap();
        let c =
            ConditionalDistribution::deterministic(d.clone(), &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(bell_value(&BellExpression::zero(d), &c).unwrap(), 0.0);
    }

    #[test]
    fn strategy_independent_expression_bound_is_one() {
        let d = Domain::new(vec![2, 3], vec![2, 2]).unwrap();
        let mu = [0.1, 0.2, 0.1, 0.3, 0.2, 0.1];
        let coeffs = (0..d.size()).map(|k| mu[k / 4]).collect();
        let e = BellExpression::new(d, coeffs).unwrap();
        let b = classical_bound(&e, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
        assert_eq!(b.enumerated, 4 * 8);
        assert_eq!(b.strategies, vec![vec![0, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn enumeration_limit() {
        let d = Domain::new(vec![10, 10], vec![3, 3]).unwrap();
        let e = BellExpression::zero(d);
        assert!(matches!(
            classical_bound(&e, 1000),
            Err(Error::EnumerationLimit { limit: 1000, .. })
        ));
    }

    #[test]
    fn bound_matches_naive_enumeration() {
        // oracle: build every deterministic conditional and evaluate it
        let d = Domain::new(vec![2, 3], vec![3, 2]).unwrap();
        let coeffs: Vec<f64> = (0..d.size())
            .map(|k| ((k * 7919) % 13) as f64 - 6.0)
            .collect();
        let e = BellExpression::new(d.clone(), coeffs).unwrap();
        let mut best = f64::NEG_INFINITY;
        for a in 0..9 {
            for b in 0..8 {
                let choice = vec![vec![a / 3, a % 3], vec![b / 4, (b / 2) % 2, b % 2]];
                let c = ConditionalDistribution::deterministic(d.clone(), &choice).unwrap();
                best = best.max(e.value(&c).unwrap());
            }
        }
        let cert = classical_bound(&e, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(cert.value, best);
        let c = ConditionalDistribution::deterministic(d, &cert.strategies).unwrap();
        assert_eq!(e.value(&c).unwrap(), best);
    }

    #[test]
    fn trivial_inequality_always_holds() {
        let g = BayesianGame::new(
            vec![vec!["x".into()]; 2],
            vec![vec!["a".into(), "b".into()]; 2],
            vec![1.0],
            vec![vec![1.0, -2.0, 3.0, 0.5]; 2],
        )
        .unwrap();
        let ineq = PolytopeInequality {
            beta0: 0.0,
            betas: vec![0.0, 0.0],
        };
        let c = ConditionalDistribution::deterministic(g.domain().clone(), &[vec![1], vec![0]])
            .unwrap();
        let v = payoff_polytope_check(&g, &ineq, &[Advice::Conditional(c)]).unwrap();
        assert!(v[0].satisfied);
        assert!(
            certify_polytope_inequality(&g, &ineq, 100)
                .unwrap()
                .holds_classically
        );
    }
}
