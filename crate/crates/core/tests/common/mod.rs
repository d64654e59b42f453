#![allow(dead_code)]

use qgame_core::bayes::{Domain, MeasurementBasis};
use qgame_core::tensor::{LinearMap, StateVector, C64};
use rand::rngs::StdRng;
use rand::Rng;

pub fn c(rng: &mut StdRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_map(rng: &mut StdRng, out: Vec<usize>, inp: Vec<usize>) -> LinearMap {
    let n = out.iter().product::<usize>() * inp.iter().product::<usize>();
    LinearMap::new(out, inp, (0..n).map(|_| c(rng)).collect()).unwrap()
}

pub fn random_state(rng: &mut StdRng, dims: Vec<usize>) -> StateVector {
    let n = dims.iter().product();
    StateVector::new(dims, (0..n).map(|_| c(rng)).collect())
        .unwrap()
        .normalized()
        .unwrap()
}

/// Gram-Schmidt on random complex vectors.
pub fn random_basis(rng: &mut StdRng, d: usize) -> Vec<StateVector> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    while out.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| c(rng)).collect();
        for u in &out {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out.into_iter()
        .map(|v| StateVector::new(vec![d], v).unwrap())
        .collect()
}

pub fn random_domain(rng: &mut StdRng, players: usize) -> Domain {
    Domain::new(
        (0..players).map(|_| rng.gen_range(1..=3)).collect(),
        (0..players).map(|_| rng.gen_range(1..=3)).collect(),
    )
    .unwrap()
}

pub fn random_probs(rng: &mut StdRng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0) + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn random_measurement(rng: &mut StdRng, d: usize) -> MeasurementBasis {
    MeasurementBasis::new(random_basis(rng, d)).unwrap()
}
