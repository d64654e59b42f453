use proptest::prelude::*;
use qgame_core::ewl::{ewl_prisoners_dilemma, PayoffTable};

fn table(labels: usize, entries: Vec<f64>) -> PayoffTable {
    let names: Vec<String> = (0..labels).map(|k| format!("s{k}")).collect();
    let cells = labels * labels;
    PayoffTable::new(
        vec![names.clone(), names],
        (0..cells)
            .map(|k| vec![entries[k], entries[cells + k]])
            .collect(),
    )
    .unwrap()
}

fn relabelled(t: &PayoffTable, perm: &[usize]) -> PayoffTable {
    let n = perm.len();
    let names: Vec<String> = (0..n).map(|k| format!("s{}", perm[k])).collect();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cells.push(t.get(&[&names[i], &names[j]]).unwrap().to_vec());
        }
    }
    PayoffTable::new(vec![names.clone(), names], cells).unwrap()
}

fn sorted(mut v: Vec<Vec<String>>) -> Vec<Vec<String>> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn nash_invariant_under_relabelling(
        entries in prop::collection::vec((-3i32..=3).prop_map(f64::from), 18),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let t = table(3, entries);
        let r = relabelled(&t, &perm);
        prop_assert_eq!(sorted(t.pure_nash()), sorted(r.pure_nash()));
        prop_assert_eq!(sorted(t.pareto_optimal()), sorted(r.pareto_optimal()));
    }

    #[test]
    fn nash_invariant_under_payoff_shift(
        entries in prop::collection::vec((-3i32..=3).prop_map(f64::from), 18),
        shift in -10.0f64..10.0,
        scale in 0.5f64..4.0,
    ) {
        let t = table(3, entries.clone());
        let moved: Vec<f64> = entries.iter().map(|x| scale * x + shift).collect();
        prop_assert_eq!(t.pure_nash(), table(3, moved).pure_nash());
    }
}

#[test]
fn nash_matches_brute_force_on_ewl() {
    let spec = ewl_prisoners_dilemma(&["H", "Z"]).unwrap();
    let t = spec.payoff_table().unwrap();
    let labels = t.labels()[0].clone();
    let mut expected = Vec::new();
    for a in &labels {
        for b in &labels {
            let p = spec.payoffs(&[a, b]).unwrap();
            let stable_a = labels
                .iter()
                .all(|x| spec.payoffs(&[x, b]).unwrap()[0] <= p[0] + 1e-9);
            let stable_b = labels
                .iter()
                .all(|y| spec.payoffs(&[a, y]).unwrap()[1] <= p[1] + 1e-9);
            if stable_a && stable_b {
                expected.push(vec![a.clone(), b.clone()]);
            }
        }
    }
    assert_eq!(sorted(t.pure_nash()), sorted(expected));
}
