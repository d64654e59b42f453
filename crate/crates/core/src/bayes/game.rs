use crate::error::{Error, Result};
use crate::{ALG_TOL, PROB_TOL};

/// Per-player type and strategy counts. Joint types and joint strategies are
/// flattened row-major with the first player most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    types: Vec<usize>,
    strategies: Vec<usize>,
}

impl Domain {
    pub fn new(types: Vec<usize>, strategies: Vec<usize>) -> Result<Self> {
        if types.is_empty() || types.len() != strategies.len() {
            return Err(Error::Shape(format!(
                "{} type sets and {} strategy sets",
                types.len(),
                strategies.len()
            )));
        }
        if types.contains(&0) || strategies.contains(&0) {
            return Err(Error::Shape("empty type or strategy set".into()));
        }
        Ok(Self { types, strategies })
    }

    pub fn players(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn strategies(&self) -> &[usize] {
        &self.strategies
    }

    pub fn joint_types(&self) -> usize {
        self.types.iter().product()
    }

    pub fn joint_strategies(&self) -> usize {
        self.strategies.iter().product()
    }

    pub fn size(&self) -> usize {
        self.joint_types() * self.joint_strategies()
    }

    pub fn type_index(&self, types: &[usize]) -> usize {
        flatten(&self.types, types)
    }

    pub fn type_tuple(&self, index: usize) -> Vec<usize> {
        unflatten(&self.types, index)
    }

    pub fn strategy_index(&self, strategies: &[usize]) -> usize {
        flatten(&self.strategies, strategies)
    }

    pub fn strategy_tuple(&self, index: usize) -> Vec<usize> {
        unflatten(&self.strategies, index)
    }

    fn mismatch(&self, other: &Self, what: &str) -> Error {
        Error::Domain(format!(
            "{what}: types {:?} / strategies {:?} against types {:?} / strategies {:?}",
            self.types, self.strategies, other.types, other.strategies
        ))
    }

    pub(crate) fn ensure_same(&self, other: &Self, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(self.mismatch(other, what))
        }
    }
}

pub(crate) fn flatten(sizes: &[usize], digits: &[usize]) -> usize {
    sizes
        .iter()
        .zip(digits)
        .fold(0, |acc, (&n, &k)| acc * n + k)
}

pub(crate) fn unflatten(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &n) in out.iter_mut().zip(sizes).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Validates a probability vector in place: entries down to -1e-12 are clamped
/// to zero and the total must be one within 1e-9.
pub(crate) fn check_distribution(p: &mut [f64], what: &str) -> Result<()> {
    for (index, w) in p.iter_mut().enumerate() {
        if !w.is_finite() {
            return Err(Error::NonFinite("probability"));
        }
        if *w < -ALG_TOL {
            return Err(Error::NegativeWeight { index, weight: *w });
        }
        *w = w.max(0.0);
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::Invalid(format!(
            "{what} sums to {total}, expected 1"
        )));
    }
    Ok(())
}

/// A Bayesian game in normal form with the prior over joint types.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesianGame {
    domain: Domain,
    type_labels: Vec<Vec<String>>,
    strategy_labels: Vec<Vec<String>>,
    prior: Vec<f64>,
    /// `payoffs[i][jt * joint_strategies + js]`.
    payoffs: Vec<Vec<f64>>,
}

impl BayesianGame {
    pub fn new(
        type_labels: Vec<Vec<String>>,
        strategy_labels: Vec<Vec<String>>,
        mut prior: Vec<f64>,
        payoffs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let domain = Domain::new(
            type_labels.iter().map(Vec::len).collect(),
            strategy_labels.iter().map(Vec::len).collect(),
        )?;
        if prior.len() != domain.joint_types() {
            return Err(Error::Shape(format!(
                "prior has {} entries for {} joint types",
                prior.len(),
                domain.joint_types()
            )));
        }
        check_distribution(&mut prior, "prior")?;
        if payoffs.len() != domain.players() {
            return Err(Error::Shape(format!(
                "{} payoff tables for {} players",
                payoffs.len(),
                domain.players()
            )));
        }
        for (i, p) in payoffs.iter().enumerate() {
            if p.len() != domain.size() {
                return Err(Error::Shape(format!(
                    "payoff table of player {i} has {} entries, expected {}",
                    p.len(),
                    domain.size()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("payoff"));
            }
        }
        Ok(Self {
            domain,
            type_labels,
            strategy_labels,
            prior,
            payoffs,
        })
    }

    /// Builds a game from a prior over states of nature and type maps
    /// `type_maps[i][ω]`. Payoffs are given per state of nature,
    /// `nature_payoffs[i][ω * joint_strategies + js]`, and are pushed forward to
    /// joint types as prior-weighted averages over each fibre (zero on fibres of
    /// probability zero), which leaves every average payoff unchanged.
    pub fn from_nature(
        type_labels: Vec<Vec<String>>,
        strategy_labels: Vec<Vec<String>>,
        mut nature_prior: Vec<f64>,
        type_maps: Vec<Vec<usize>>,
        nature_payoffs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let domain = Domain::new(
            type_labels.iter().map(Vec::len).collect(),
            strategy_labels.iter().map(Vec::len).collect(),
        )?;
        check_distribution(&mut nature_prior, "prior over states of nature")?;
        let omega = nature_prior.len();
        if type_maps.len() != domain.players()
            || type_maps
                .iter()
                .zip(domain.types())
                .any(|(m, &n)| m.len() != omega || m.iter().any(|&x| x >= n))
        {
            return Err(Error::Shape(
                "type maps do not match states of nature and type sets".into(),
            ));
        }
        let ns = domain.joint_strategies();
        if nature_payoffs.len() != domain.players()
            || nature_payoffs.iter().any(|p| p.len() != omega * ns)
        {
            return Err(Error::Shape(
                "payoffs per state of nature have the wrong size".into(),
            ));
        }
        let mut prior = vec![0.0; domain.joint_types()];
        let mut payoffs = vec![vec![0.0; domain.size()]; domain.players()];
        for w in 0..omega {
            let types: Vec<usize> = type_maps.iter().map(|m| m[w]).collect();
            let jt = domain.type_index(&types);
            prior[jt] += nature_prior[w];
            for (i, table) in payoffs.iter_mut().enumerate() {
                for js in 0..ns {
                    table[jt * ns + js] += nature_prior[w] * nature_payoffs[i][w * ns + js];
                }
            }
        }
        for table in &mut payoffs {
            for (jt, &mass) in prior.iter().enumerate() {
                for v in &mut table[jt * ns..(jt + 1) * ns] {
                    *v = if mass > 0.0 { *v / mass } else { 0.0 };
                }
            }
        }
        Self::new(type_labels, strategy_labels, prior, payoffs)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn players(&self) -> usize {
        self.domain.players()
    }

    pub fn type_labels(&self) -> &[Vec<String>] {
        &self.type_labels
    }

    pub fn strategy_labels(&self) -> &[Vec<String>] {
        &self.strategy_labels
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn payoff_table(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    pub fn payoff(&self, player: usize, types: &[usize], strategies: &[usize]) -> f64 {
        let ns = self.domain.joint_strategies();
        self.payoffs[player]
            [self.domain.type_index(types) * ns + self.domain.strategy_index(strategies)]
    }
}

/// Conditional outcome statistics `p(s_1..s_N | X_1..X_N)`, one distribution
/// per joint type.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    domain: Domain,
    table: Vec<f64>,
}

impl ConditionalDistribution {
    /// `table[jt * joint_strategies + js]`; each row must be a distribution.
    pub fn new(domain: Domain, mut table: Vec<f64>) -> Result<Self> {
        if table.len() != domain.size() {
            return Err(Error::Shape(format!(
                "conditional table has {} entries, expected {}",
                table.len(),
                domain.size()
            )));
        }
        let ns = domain.joint_strategies();
        for (jt, row) in table.chunks_mut(ns).enumerate() {
            check_distribution(row, &format!("conditional for joint type {jt}"))?;
        }
        Ok(Self { domain, table })
    }

    /// Every player answers deterministically, `choice[i][x_i]`.
    pub fn deterministic(domain: Domain, choice: &[Vec<usize>]) -> Result<Self> {
        if choice.len() != domain.players()
            || choice.iter().enumerate().any(|(i, c)| {
                c.len() != domain.types()[i] || c.iter().any(|&s| s >= domain.strategies()[i])
            })
        {
            return Err(Error::Shape(
                "deterministic response does not match the domain".into(),
            ));
        }
        let ns = domain.joint_strategies();
        let mut table = vec![0.0; domain.size()];
        for jt in 0..domain.joint_types() {
            let types = domain.type_tuple(jt);
            let strat: Vec<usize> = types
                .iter()
                .enumerate()
                .map(|(i, &x)| choice[i][x])
                .collect();
            table[jt * ns + domain.strategy_index(&strat)] = 1.0;
        }
        Ok(Self { domain, table })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn get(&self, joint_type: usize, joint_strategy: usize) -> f64 {
        self.table[joint_type * self.domain.joint_strategies() + joint_strategy]
    }

    pub fn prob(&self, types: &[usize], strategies: &[usize]) -> f64 {
        self.get(
            self.domain.type_index(types),
            self.domain.strategy_index(strategies),
        )
    }

    /// Largest change, over every proper nonempty subset `A` of players, in the
    /// marginal `p(s_A | X)` when only the other players' types vary.
    pub fn signaling_violation(&self) -> f64 {
        let d = &self.domain;
        let n = d.players();
        let ns = d.joint_strategies();
        let mut worst: f64 = 0.0;
        for mask in 1..(1u32 << n) - 1 {
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub_types: Vec<usize> = members.iter().map(|&i| d.types()[i]).collect();
            let sub_strats: Vec<usize> = members.iter().map(|&i| d.strategies()[i]).collect();
            let n_sub: usize = sub_strats.iter().product();
            let mut reference: Vec<Option<Vec<f64>>> = vec![None; sub_types.iter().product()];
            for jt in 0..d.joint_types() {
                let types = d.type_tuple(jt);
                let key = flatten(
                    &sub_types,
                    &members.iter().map(|&i| types[i]).collect::<Vec<_>>(),
                );
                let mut marginal = vec![0.0; n_sub];
                for js in 0..ns {
                    let s = d.strategy_tuple(js);
                    let sub = flatten(
                        &sub_strats,
                        &members.iter().map(|&i| s[i]).collect::<Vec<_>>(),
                    );
                    marginal[sub] += self.table[jt * ns + js];
                }
                match &reference[key] {
                    None => reference[key] = Some(marginal),
                    Some(r) => {
                        for (a, b) in r.iter().zip(&marginal) {
                            worst = worst.max((a - b).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn is_no_signaling(&self, tol: f64) -> bool {
        self.signaling_violation() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.domain
            .ensure_same(&other.domain, "comparing conditionals")?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// `F_i = Σ μ(X) p(s|X) P_i(X, s)` for every player.
pub fn average_payoff(game: &BayesianGame, cond: &ConditionalDistribution) -> Result<Vec<f64>> {
    game.domain()
        .ensure_same(cond.domain(), "game and conditional")?;
    let ns = game.domain().joint_strategies();
    Ok((0..game.players())
        .map(|i| {
            let p = game.payoff_table(i);
            game.prior()
                .iter()
                .enumerate()
                .filter(|(_, &mu)| mu != 0.0)
                .map(|(jt, &mu)| {
                    let row = &cond.table()[jt * ns..(jt + 1) * ns];
                    mu * row
                        .iter()
                        .zip(&p[jt * ns..(jt + 1) * ns])
                        .map(|(q, v)| q * v)
                        .sum::<f64>()
                })
                .sum()
        })
        .collect())
}

/// Two conditionals are equivalent when they induce the same statistics, entry
/// by entry within `tol`.
pub fn equivalence_of_conditionals(
    a: &ConditionalDistribution,
    b: &ConditionalDistribution,
    tol: f64,
) -> Result<bool> {
    Ok(a.max_abs_diff(b)? <= tol)
}
