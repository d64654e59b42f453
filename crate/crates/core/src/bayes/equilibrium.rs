use super::game::{average_payoff, BayesianGame, ConditionalDistribution};
use crate::error::{Error, Result};

/// A unilateral post-processing `(own type, recommended strategy) -> strategy`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub player: usize,
    /// `mapping[x][r]`.
    pub mapping: Vec<Vec<usize>>,
    pub payoff: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumVerdict {
    pub is_equilibrium: bool,
    pub payoffs: Vec<f64>,
    /// Best gain found per player (zero when only the identity is optimal).
    pub max_gains: Vec<f64>,
    /// The most profitable deviation, present only when it gains more than `tol`.
    pub best_deviation: Option<Deviation>,
    pub deviations_checked: u128,
}

/// Checks whether following the advice is an equilibrium: no player can raise
/// their average payoff by more than `tol` by post-processing their type and
/// recommendation. Ties keep the lowest player and the first mapping in
/// odometer order.
pub fn is_advised_equilibrium(
    game: &BayesianGame,
    cond: &ConditionalDistribution,
    tol: f64,
    limit: u128,
) -> Result<EquilibriumVerdict> {
    let payoffs = average_payoff(game, cond)?;
    let d = game.domain();
    let mut total: u128 = 0;
    for i in 0..d.players() {
        let digits = u32::try_from(d.types()[i] * d.strategies()[i]).unwrap_or(u32::MAX);
        let count = (d.strategies()[i] as u128)
            .checked_pow(digits)
            .unwrap_or(u128::MAX);
        total = total.saturating_add(count);
    }
    if total > limit {
        return Err(Error::EnumerationLimit {
            requested: total,
            limit,
        });
    }

    let nt = d.joint_types();
    let ns = d.joint_strategies();
    let mut best: Option<Deviation> = None;
    let mut max_gains = vec![0.0; d.players()];
    for player in 0..d.players() {
        let (nx, nsi) = (d.types()[player], d.strategies()[player]);
        let payoff = game.payoff_table(player);
        // (weight, own type, own recommendation, joint type, joint strategy)
        let mut mass = Vec::new();
        for jt in 0..nt {
            let mu = game.prior()[jt];
            if mu == 0.0 {
                continue;
            }
            let x = d.type_tuple(jt)[player];
            for js in 0..ns {
                let w = mu * cond.get(jt, js);
                if w != 0.0 {
                    let strat = d.strategy_tuple(js);
                    mass.push((w, x, strat[player], jt, strat));
                }
            }
        }
        let mut mapping: Vec<Vec<usize>> = vec![vec![0; nsi]; nx];
        let mut best_here = f64::NEG_INFINITY;
        loop {
            let value: f64 = mass
                .iter()
                .map(|(w, x, r, jt, strat)| {
                    let mut s = strat.clone();
                    s[player] = mapping[*x][*r];
                    w * payoff[jt * ns + d.strategy_index(&s)]
                })
                .sum();
            let gain = value - payoffs[player];
            if gain > best_here {
                best_here = gain;
            }
            if gain > tol && best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(Deviation {
                    player,
                    mapping: mapping.clone(),
                    payoff: value,
                    gain,
                });
            }
            if !advance(&mut mapping, nsi) {
                break;
            }
        }
        max_gains[player] = best_here.max(0.0);
    }
    Ok(EquilibriumVerdict {
        is_equilibrium: best.is_none(),
        payoffs,
        max_gains,
        best_deviation: best,
        deviations_checked: total,
    })
}

fn advance(mapping: &mut [Vec<usize>], base: usize) -> bool {
    for row in mapping.iter_mut().rev() {
        for digit in row.iter_mut().rev() {
            *digit += 1;
            if *digit < base {
                return true;
            }
            *digit = 0;
        }
    }
    false
}
