//! Dense complex linear algebra on small multi-qudit spaces.
//!
//! Wire ordering is big-endian: the first wire is the most significant digit of a
//! basis index, so `|01>` on two qubits is index 1 and `|10>` is index 2.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::{ALG_TOL, PROB_TOL};

/// Default cap on the Hilbert-space dimension of either side of a map.
pub const DEFAULT_DIM_LIMIT: usize = 4096;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn product(dims: &[usize]) -> Option<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.contains(&0) {
        return Err(Error::Shape(format!("zero wire dimension in {dims:?}")));
    }
    product(dims).ok_or(Error::DimensionLimit {
        requested: usize::MAX,
        limit: DEFAULT_DIM_LIMIT,
    })
}

fn check_finite(data: &[C64], what: &'static str) -> Result<()> {
    if data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A linear map between tensor products of finite-dimensional wires, stored as a
/// dense row-major matrix with `rows = prod(out_dims)` and `cols = prod(in_dims)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    out_dims: Vec<usize>,
    in_dims: Vec<usize>,
    data: Vec<C64>,
}

impl LinearMap {
    pub fn new(out_dims: Vec<usize>, in_dims: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let rows = check_dims(&out_dims)?;
        let cols = check_dims(&in_dims)?;
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} map",
                data.len()
            )));
        }
        check_finite(&data, "linear map")?;
        Ok(Self {
            out_dims,
            in_dims,
            data,
        })
    }

    /// Builds a single-wire map from explicit rows.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 || rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged or empty matrix rows".into()));
        }
        Self::new(
            vec![n_rows],
            vec![n_cols],
            rows.into_iter().flatten().collect(),
        )
    }

    /// Same as [`from_rows`](Self::from_rows) but with explicit wire dimensions.
    pub fn from_rows_with_dims(
        out_dims: Vec<usize>,
        in_dims: Vec<usize>,
        rows: Vec<Vec<C64>>,
    ) -> Result<Self> {
        Self::new(out_dims, in_dims, rows.into_iter().flatten().collect())
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = product(dims).expect("identity dimension overflow");
        let mut data = vec![ZERO; n * n];
        for k in 0..n {
            data[k * n + k] = ONE;
        }
        Self {
            out_dims: dims.to_vec(),
            in_dims: dims.to_vec(),
            data,
        }
    }

    /// The 1x1 map on the monoidal unit (no wires).
    pub fn scalar(c: C64) -> Self {
        Self {
            out_dims: vec![],
            in_dims: vec![],
            data: vec![c],
        }
    }

    pub fn pauli_x() -> Self {
        Self::qubit([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        let i = C64::i();
        Self::qubit([[ZERO, -i], [i, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::qubit([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn hadamard() -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::qubit([[h, h], [h, -h]])
    }

    /// Phase gate `diag(1, e^{i theta})`.
    pub fn phase_gate(theta: f64) -> Self {
        Self::qubit([[ONE, ZERO], [ZERO, C64::from_polar(1.0, theta)]])
    }

    fn qubit(m: [[C64; 2]; 2]) -> Self {
        Self {
            out_dims: vec![2],
            in_dims: vec![2],
            data: m.into_iter().flatten().collect(),
        }
    }

    /// Built-in single-qubit operators by name: `I`, `X`, `Y`, `Z`, `H`, `S`.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "I" => Some(Self::identity(&[2])),
            "X" => Some(Self::pauli_x()),
            "Y" => Some(Self::pauli_y()),
            "Z" => Some(Self::pauli_z()),
            "H" => Some(Self::hadamard()),
            "S" => Some(Self::phase_gate(std::f64::consts::FRAC_PI_2)),
            _ => None,
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len() / self.cols()
    }

    pub fn cols(&self) -> usize {
        product(&self.in_dims).unwrap_or(1)
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols() + col]
    }

    /// Row-major rows, convenient for serialization.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols()).map(<[C64]>::to_vec).collect()
    }

    /// Kronecker product with the default dimension limit.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_limit(other, DEFAULT_DIM_LIMIT)
    }

    pub fn tensor_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let (ar, ac) = (self.rows(), self.cols());
        let (br, bc) = (other.rows(), other.cols());
        for n in [ar.checked_mul(br), ac.checked_mul(bc)] {
            match n {
                Some(n) if n <= limit => {}
                Some(n) => {
                    return Err(Error::DimensionLimit {
                        requested: n,
                        limit,
                    })
                }
                None => {
                    return Err(Error::DimensionLimit {
                        requested: usize::MAX,
                        limit,
                    })
                }
            }
        }
        let (rows, cols) = (ar * br, ac * bc);
        let mut data = vec![ZERO; rows * cols];
        for i in 0..ar {
            for j in 0..ac {
                let a = self.data[i * ac + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..br {
                    let dst = (i * br + k) * cols + j * bc;
                    let src = &other.data[k * bc..(k + 1) * bc];
                    for (d, b) in data[dst..dst + bc].iter_mut().zip(src) {
                        *d = a * b;
                    }
                }
            }
        }
        Ok(Self {
            out_dims: [self.out_dims.as_slice(), &other.out_dims].concat(),
            in_dims: [self.in_dims.as_slice(), &other.in_dims].concat(),
            data,
        })
    }

    /// Tensor product of a sequence of maps; the empty product is the unit scalar.
    pub fn tensor_all<'a, I>(maps: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a LinearMap>,
    {
        maps.into_iter()
            .try_fold(Self::scalar(ONE), |acc, m| acc.tensor(m))
    }

    /// `self ∘ g`: apply `g` first, then `self`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.in_dims != g.out_dims {
            return Err(Error::Composition {
                left_in: self.in_dims.clone(),
                right_out: g.out_dims.clone(),
            });
        }
        let (n, m, p) = (self.rows(), self.cols(), g.cols());
        let mut data = vec![ZERO; n * p];
        for i in 0..n {
            let out = &mut data[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(&g.data[k * p..(k + 1) * p]) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            out_dims: self.out_dims.clone(),
            in_dims: g.in_dims.clone(),
            data,
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let (r, c) = (self.rows(), self.cols());
        let mut data = vec![ZERO; r * c];
        for i in 0..r {
            for j in 0..c {
                data[j * r + i] = self.data[i * c + j].conj();
            }
        }
        Self {
            out_dims: self.in_dims.clone(),
            in_dims: self.out_dims.clone(),
            data,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            out_dims: self.out_dims.clone(),
            in_dims: self.in_dims.clone(),
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.out_dims != other.out_dims || self.in_dims != other.in_dims {
            return Err(Error::Shape(format!(
                "cannot add {:?}<-{:?} and {:?}<-{:?}",
                self.out_dims, self.in_dims, other.out_dims, other.in_dims
            )));
        }
        Ok(Self {
            out_dims: self.out_dims.clone(),
            in_dims: self.in_dims.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.in_dims != state.dims {
            return Err(Error::Composition {
                left_in: self.in_dims.clone(),
                right_out: state.dims.clone(),
            });
        }
        let c = self.cols();
        let amps = self
            .data
            .chunks(c)
            .map(|row| row.iter().zip(&state.amps).map(|(a, b)| a * b).sum())
            .collect();
        Ok(StateVector {
            dims: self.out_dims.clone(),
            amps,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.out_dims != other.out_dims || self.in_dims != other.in_dims {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `u† u = I` within `tol`, and square.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows() == self.cols()
            && self
                .dagger()
                .compose(self)
                .map(|p| p.approx_eq(&Self::identity(&self.in_dims), tol))
                .unwrap_or(false)
    }

    /// If every column holds exactly one entry equal to 1 (and the map is a
    /// bijection on basis states), returns the image index of each column.
    pub fn basis_permutation(&self) -> Option<Vec<usize>> {
        if self.rows() != self.cols() {
            return None;
        }
        let (r, c) = (self.rows(), self.cols());
        let mut image = Vec::with_capacity(c);
        let mut hit = vec![false; r];
        for j in 0..c {
            let mut target = None;
            for i in 0..r {
                let z = self.get(i, j);
                if (z - ONE).norm() <= ALG_TOL {
                    if target.is_some() {
                        return None;
                    }
                    target = Some(i);
                } else if z.norm() > ALG_TOL {
                    return None;
                }
            }
            let t = target?;
            if std::mem::replace(&mut hit[t], true) {
                return None;
            }
            image.push(t);
        }
        Some(image)
    }

    /// Reads a map with no inputs as a state.
    pub fn as_state(&self) -> Option<StateVector> {
        (self.cols() == 1).then(|| StateVector {
            dims: self.out_dims.clone(),
            amps: self.data.clone(),
        })
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} <- {:?}", self.out_dims, self.in_dims)?;
        for row in self.data.chunks(self.cols()) {
            let cells: Vec<String> = row.iter().map(|z| format_complex(*z)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn format_complex(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.6}")
    } else if re == 0.0 {
        format!("{im:.6}i")
    } else {
        format!("{re:.6}{:+.6}i", im)
    }
}

/// A vector in a tensor product of wires.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let n = check_dims(&dims)?;
        if n != amps.len() {
            return Err(Error::Shape(format!(
                "{} amplitudes for dimensions {dims:?}",
                amps.len()
            )));
        }
        check_finite(&amps, "state vector")?;
        Ok(Self { dims, amps })
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n = check_dims(&dims)?;
        if index >= n {
            return Err(Error::Shape(format!(
                "basis index {index} out of range {n}"
            )));
        }
        let mut amps = vec![ZERO; n];
        amps[index] = ONE;
        Ok(Self { dims, amps })
    }

    /// Basis ket from a digit string such as `"01"`.
    pub fn from_label(dims: Vec<usize>, label: &str) -> Result<Self> {
        let index = parse_label(&dims, label)
            .ok_or_else(|| Error::Invalid(format!("bad basis label `{label}` for {dims:?}")))?;
        Self::basis(dims, index)
    }

    /// Basis ket on `label.len()` wires of dimension `dim`.
    pub fn ket(dim: usize, label: &str) -> Result<Self> {
        Self::from_label(vec![dim; label.chars().count()], label)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, label: &str) -> Option<C64> {
        parse_label(&self.dims, label).map(|i| self.amps[i])
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(C64::norm_sqr).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sq() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n <= f64::MIN_POSITIVE {
            return Err(Error::Normalization { norm_sq: n });
        }
        Ok(self.scale(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::Shape(format!(
                "inner product of {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self {
            dims: [self.dims.as_slice(), &other.dims].concat(),
            amps,
        }
    }

    pub fn as_map(&self) -> LinearMap {
        LinearMap {
            out_dims: self.dims.clone(),
            in_dims: vec![],
            data: self.amps.clone(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims == other.dims
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality up to a global unit phase, fixed by aligning the first amplitude
    /// whose magnitude exceeds `tol`.
    pub fn phase_equivalent(&self, other: &Self, tol: f64) -> bool {
        if self.dims != other.dims {
            return false;
        }
        let Some(k) = self.amps.iter().position(|a| a.norm() > tol) else {
            return other.amps.iter().all(|b| b.norm() <= tol);
        };
        let ratio = other.amps[k] / self.amps[k];
        if ratio.norm() <= f64::MIN_POSITIVE {
            return false;
        }
        let phase = ratio / ratio.norm();
        self.scale(phase).approx_eq(other, tol)
    }

    /// Born-rule distribution over computational basis strings.
    pub fn born_probabilities(&self) -> Result<Distribution> {
        let n = self.norm_sq();
        if (n - 1.0).abs() > PROB_TOL {
            return Err(Error::Normalization { norm_sq: n });
        }
        Distribution::new(
            self.dims.clone(),
            self.amps.iter().map(C64::norm_sqr).collect(),
        )
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({})|{}>",
                format_complex(*a),
                index_label(&self.dims, i)
            )?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Renders a basis index as one digit per wire (base 36 digits).
pub fn index_label(dims: &[usize], mut index: usize) -> String {
    let mut digits = vec!['0'; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = std::char::from_digit((index % d) as u32, 36).unwrap_or('?');
        index /= d;
    }
    digits.into_iter().collect()
}

/// Inverse of [`index_label`].
pub fn parse_label(dims: &[usize], label: &str) -> Option<usize> {
    let chars: Vec<char> = label.chars().collect();
    if chars.len() != dims.len() {
        return None;
    }
    chars.iter().zip(dims).try_fold(0usize, |acc, (c, &d)| {
        let k = c.to_digit(36)? as usize;
        (k < d).then_some(acc * d + k)
    })
}

/// A probability distribution over basis strings of a fixed wire layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let n = check_dims(&dims)?;
        if let Some(&d) = dims.iter().find(|&&d| d > 36) {
            return Err(Error::UnsupportedDimension(d));
        }
        if n != probs.len() {
            return Err(Error::Shape(format!(
                "{} probabilities for dimensions {dims:?}",
                probs.len()
            )));
        }
        Ok(Self { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn label(&self, index: usize) -> String {
        index_label(&self.dims, index)
    }

    /// Probability of a basis string; `None` when the label is malformed.
    pub fn prob(&self, label: &str) -> Option<f64> {
        parse_label(&self.dims, label).map(|i| self.probs[i])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.label(i), p))
    }

    /// Labels carrying probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<String> {
        self.iter()
            .filter(|&(_, p)| p > tol)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.iter().collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
