use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{Error, Result};
use crate::tensor::{Distribution, LinearMap, StateVector, C64};
use crate::{ALG_TOL, PROB_TOL};

/// An orthonormal basis of a `dim`-dimensional wire. In finite-dimensional
/// Hilbert spaces this is the same data as a dagger-special commutative
/// Frobenius algebra; the basis vectors are its classical points.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableStructure {
    dim: usize,
    basis: Vec<StateVector>,
}

impl ObservableStructure {
    /// Validates orthonormality within 1e-12.
    pub fn from_basis(basis: Vec<StateVector>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::NotOrthonormal("empty basis".into()));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.dims() != [dim] {
                return Err(Error::NotOrthonormal(format!(
                    "vector {i} has dimensions {:?}, expected [{dim}]",
                    b.dims()
                )));
            }
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let ip = a.inner(b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - C64::new(target, 0.0)).norm() > ALG_TOL {
                    return Err(Error::NotOrthonormal(format!("<b{i}|b{j}> = {ip}")));
                }
            }
        }
        Ok(Self { dim, basis })
    }

    /// Computational basis of a `dim`-dimensional wire.
    pub fn computational(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|k| StateVector::basis(vec![dim], k).expect("index in range"))
            .collect();
        Self { dim, basis }
    }

    /// Qubit Z observable.
    pub fn z() -> Self {
        Self::computational(2)
    }

    /// Qubit X observable: `|+>`, `|->`.
    pub fn x() -> Self {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        let basis = vec![
            StateVector::new(vec![2], vec![r, r]).expect("valid"),
            StateVector::new(vec![2], vec![r, -r]).expect("valid"),
        ];
        Self { dim: 2, basis }
    }

    /// Fourier basis `|f_j> = d^{-1/2} Σ_k ω^{jk} |k>`.
    pub fn fourier(dim: usize) -> Self {
        let scale = 1.0 / (dim as f64).sqrt();
        let basis = (0..dim)
            .map(|j| {
                let amps = (0..dim)
                    .map(|k| C64::from_polar(scale, TAU * (j * k) as f64 / dim as f64))
                    .collect();
                StateVector::new(vec![dim], amps).expect("valid")
            })
            .collect();
        Self { dim, basis }
    }

    /// Named builtins: `z`, `x`, `computational:<d>`, `fourier:<d>`.
    pub fn named(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "z" => Some(Self::z()),
            "x" => Some(Self::x()),
            _ => {
                let (kind, d) = lower.split_once(':')?;
                let d: usize = d.parse().ok().filter(|&d| d > 0)?;
                match kind {
                    "computational" | "z" => Some(Self::computational(d)),
                    "fourier" | "x" => Some(Self::fourier(d)),
                    _ => None,
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The classical points (the basis vectors).
    pub fn classical_points(&self) -> &[StateVector] {
        &self.basis
    }

    /// Unitary sending `|k>` to the `k`-th classical point.
    pub fn change_of_basis(&self) -> LinearMap {
        let d = self.dim;
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for (k, b) in self.basis.iter().enumerate() {
            for (r, a) in b.amplitudes().iter().enumerate() {
                data[r * d + k] = *a;
            }
        }
        LinearMap::new(vec![d], vec![d], data).expect("square")
    }

    /// `Σ_k e^{i α_k} |b_k>^{⊗outputs} <b_k|^{⊗inputs}`.
    pub fn spider(&self, inputs: usize, outputs: usize, angles: &[f64]) -> Result<LinearMap> {
        let d = self.dim;
        let rows = checked_pow(d, outputs)?;
        let cols = checked_pow(d, inputs)?;
        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        for (k, b) in self.basis.iter().enumerate() {
            let out = tensor_power(b, outputs);
            let inp: Vec<C64> = tensor_power(b, inputs).iter().map(|z| z.conj()).collect();
            let w = C64::from_polar(1.0, angles.get(k).copied().unwrap_or(0.0));
            for (r, o) in out.iter().enumerate() {
                if o.norm_sqr() == 0.0 {
                    continue;
                }
                let wo = w * o;
                for (c, i) in inp.iter().enumerate() {
                    data[r * cols + c] += wo * i;
                }
            }
        }
        LinearMap::new(vec![d; outputs], vec![d; inputs], data)
    }

    /// Multiplication `X ⊗ X -> X`.
    pub fn mu(&self) -> LinearMap {
        self.spider(2, 1, &[]).expect("small")
    }

    /// Unit `I -> X`.
    pub fn eta(&self) -> LinearMap {
        self.spider(0, 1, &[]).expect("small")
    }

    /// Comultiplication (copy) `X -> X ⊗ X`.
    pub fn delta(&self) -> LinearMap {
        self.spider(1, 2, &[]).expect("small")
    }

    /// Counit `X -> I`, the dagger of the unit.
    pub fn epsilon(&self) -> LinearMap {
        self.spider(1, 0, &[]).expect("small")
    }

    /// Born-rule distribution of an n-wire state against the classical points,
    /// labelled by point indices.
    pub fn measure(&self, state: &StateVector) -> Result<Distribution> {
        if let Some(&d) = state.dims().iter().find(|&&d| d != self.dim) {
            return Err(Error::Shape(format!(
                "state wire of dimension {d} measured against a {}-dimensional observable",
                self.dim
            )));
        }
        if !state.is_normalized(PROB_TOL) {
            return Err(Error::Normalization {
                norm_sq: state.norm_sq(),
            });
        }
        let adj = self.change_of_basis().dagger();
        let n = state.dims().len();
        let rotate = LinearMap::tensor_all(std::iter::repeat_n(&adj, n))?;
        rotate.apply(state)?.born_probabilities()
    }
}

fn checked_pow(d: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .filter(|&v| v <= crate::tensor::DEFAULT_DIM_LIMIT)
        .ok_or(Error::DimensionLimit {
            requested: d.saturating_pow(n.min(64) as u32),
            limit: crate::tensor::DEFAULT_DIM_LIMIT,
        })
}

fn tensor_power(v: &StateVector, n: usize) -> Vec<C64> {
    let mut acc = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        acc = acc
            .iter()
            .flat_map(|a| v.amplitudes().iter().map(move |b| a * b))
            .collect();
    }
    acc
}

/// A probability vector over classical-point strings of `arity` wires.
#[derive(Debug, Clone, PartialEq)]
pub struct BornVector {
    arity: usize,
    dim: usize,
    weights: Vec<f64>,
}

impl BornVector {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn to_distribution(&self) -> Result<Distribution> {
        Distribution::new(vec![self.dim; self.arity], self.weights.clone())
    }
}

/// Accepts weights over `dim^n` classical-point strings that are nonnegative
/// (entries down to -1e-12 are clamped to zero) and sum to one within 1e-9.
pub fn validate_born_vector(weights: &[f64], dim: usize) -> Result<BornVector> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut arity = 0;
    let mut size = 1usize;
    while size < weights.len() {
        size = size.saturating_mul(dim);
        arity += 1;
    }
    if size != weights.len() || weights.is_empty() {
        return Err(Error::Shape(format!(
            "{} weights is not a power of {dim}",
            weights.len()
        )));
    }
    let mut clean = Vec::with_capacity(weights.len());
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Error::NonFinite("born vector"));
        }
        if w < -ALG_TOL {
            return Err(Error::NegativeWeight { index, weight: w });
        }
        clean.push(w.max(0.0));
    }
    let total: f64 = clean.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::TotalMass(total));
    }
    Ok(BornVector {
        arity,
        dim,
        weights: clean,
    })
}
