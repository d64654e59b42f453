mod common;

use common::{random_domain, random_measurement, random_probs, random_state};
use proptest::prelude::*;
use qgame_core::bayes::{
    average_payoff, bell_value, classical_bound, ghz_phase_distribution, BayesianGame,
    BellExpression, ClassicalAdvice, ConditionalDistribution, Domain, QuantumAdvice,
    DEFAULT_ENUMERATION_LIMIT,
};
use qgame_core::diagram::{evaluate, parse, BoxEnv, ObservableStructure};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_classical(rng: &mut StdRng, domain: &Domain) -> ClassicalAdvice {
    let lambdas = rng.gen_range(1..=4);
    let responses = (0..domain.players())
        .map(|i| {
            (0..lambdas)
                .map(|_| {
                    (0..domain.types()[i])
                        .map(|_| random_probs(rng, domain.strategies()[i]))
                        .collect()
                })
                .collect()
        })
        .collect();
    ClassicalAdvice::new(domain.clone(), random_probs(rng, lambdas), responses).unwrap()
}

fn random_quantum(rng: &mut StdRng, players: usize) -> QuantumAdvice {
    let dims: Vec<usize> = (0..players).map(|_| rng.gen_range(2..=3)).collect();
    let state = random_state(rng, dims.clone());
    let settings = dims
        .iter()
        .map(|&d| {
            (0..rng.gen_range(1..=3))
                .map(|_| random_measurement(rng, d))
                .collect()
        })
        .collect();
    QuantumAdvice::new(state, settings).unwrap()
}

fn random_game(rng: &mut StdRng, domain: &Domain) -> BayesianGame {
    let labels = |sizes: &[usize]| -> Vec<Vec<String>> {
        sizes
            .iter()
            .map(|&k| (0..k).map(|j| j.to_string()).collect())
            .collect()
    };
    let payoffs = (0..domain.players())
        .map(|_| {
            (0..domain.size())
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect()
        })
        .collect();
    BayesianGame::new(
        labels(domain.types()),
        labels(domain.strategies()),
        random_probs(rng, domain.joint_types()),
        payoffs,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn classical_advice_is_no_signaling(seed: u64, players in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let domain = random_domain(&mut rng, players);
        let c = random_classical(&mut rng, &domain).conditional();
        prop_assert!(c.signaling_violation() < 1e-12);
    }

    #[test]
    fn quantum_advice_is_no_signaling(seed: u64, players in 2usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = random_quantum(&mut rng, players).conditional().unwrap();
        prop_assert!(c.signaling_violation() < 1e-12);
    }

    #[test]
    fn classical_bound_is_sound(seed: u64, players in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let domain = random_domain(&mut rng, players);
        let coeffs = (0..domain.size()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let expr = BellExpression::new(domain.clone(), coeffs).unwrap();
        let bound = classical_bound(&expr, DEFAULT_ENUMERATION_LIMIT).unwrap();
        let c = random_classical(&mut rng, &domain).conditional();
        prop_assert!(bell_value(&expr, &c).unwrap() <= bound.value + 1e-12);
        let witness = ConditionalDistribution::deterministic(domain, &bound.strategies).unwrap();
        prop_assert!((bell_value(&expr, &witness).unwrap() - bound.value).abs() < 1e-12);
    }

    #[test]
    fn bell_value_of_payoff_is_average_payoff(seed: u64, players in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let domain = random_domain(&mut rng, players);
        let game = random_game(&mut rng, &domain);
        let c = random_classical(&mut rng, &domain).conditional();
        let f = average_payoff(&game, &c).unwrap();
        for (i, fi) in f.iter().enumerate() {
            let v = bell_value(&BellExpression::from_payoff(&game, i), &c).unwrap();
            prop_assert!((v - fi).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_marginals_are_uniform(n in 2usize..=5, phases in prop::collection::vec(-7.0f64..7.0, 5)) {
        let d = ghz_phase_distribution(n, &phases[..n]).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
        for party in 0..n {
            let zero: f64 = d.iter().filter(|(l, _)| l.as_bytes()[party] == b'0').map(|(_, p)| p).sum();
            prop_assert!((zero - 0.5).abs() < 1e-12);
        }
    }
}

/// Born rule through the diagram evaluator: GHZ spider, inverse phase on each
/// wire, Hadamard, then a Z measurement.
fn ghz_via_diagram(phases: &[f64]) -> Vec<f64> {
    let n = phases.len();
    let rotations: Vec<String> = phases
        .iter()
        .map(|a| format!("spider(1,1,{:.17})", -a))
        .collect();
    let hadamards = vec!["box(H)"; n].join(" * ");
    let text = format!(
        "spider(0,{n}) ; ({}) ; ({hadamards})",
        rotations.join(" * ")
    );
    let z = ObservableStructure::z();
    let state = evaluate(&parse(&text).unwrap(), &z, &BoxEnv::qubit_gates())
        .unwrap()
        .as_state()
        .unwrap()
        .normalized()
        .unwrap();
    z.measure(&state).unwrap().probs().to_vec()
}

#[test]
fn ghz_closed_form_matches_diagram_born_rule() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 2..=4 {
        for _ in 0..100 {
            let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(-7.0..7.0)).collect();
            let closed = ghz_phase_distribution(n, &phases).unwrap();
            let oracle = ghz_via_diagram(&phases);
            for (a, b) in closed.probs().iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "n={n} phases={phases:?}");
            }
        }
    }
}

#[test]
fn ghz_phase_advice_matches_closed_form() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 2..=4 {
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let advice = QuantumAdvice::from_phases(
            qgame_core::bayes::ghz_state(n),
            &phases.iter().map(|&a| vec![a]).collect::<Vec<_>>(),
        )
        .unwrap();
        let c = advice.conditional().unwrap();
        let closed = ghz_phase_distribution(n, &phases).unwrap();
        for (js, p) in closed.probs().iter().enumerate() {
            assert!((c.get(0, js) - p).abs() < 1e-12);
        }
    }
}
