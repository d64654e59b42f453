use std::f64::consts::TAU;
use std::fmt;

/// Diagonal phase of a spider: one angle per classical point, with the first
/// angle pinned to zero.
///
/// Angles live in `[0, 2π)`. Trailing zero angles are dropped, so the zero phase
/// is `[0]` and the qubit phase `α` is `[0, α]`; on a `d`-dimensional wire the
/// vector is padded with zeros up to `d` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseElement {
    phases: Vec<f64>,
}

fn canonical_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if TAU - r < 1e-12 || r < 1e-15 {
        0.0
    } else {
        r
    }
}

impl PhaseElement {
    pub fn zero() -> Self {
        Self { phases: vec![0.0] }
    }

    /// The qubit phase `(0, alpha)`.
    pub fn qubit(alpha: f64) -> Self {
        Self::from_angles(vec![0.0, alpha])
    }

    /// Builds a phase from per-point angles. A nonzero first angle is removed by
    /// subtracting it from every entry (it only contributes a global phase).
    pub fn from_angles(angles: Vec<f64>) -> Self {
        let offset = angles.first().copied().unwrap_or(0.0);
        let mut phases: Vec<f64> = angles.iter().map(|a| canonical_angle(a - offset)).collect();
        if phases.is_empty() {
            phases.push(0.0);
        }
        while phases.len() > 1 && phases.last() == Some(&0.0) {
            phases.pop();
        }
        Self { phases }
    }

    pub fn is_zero(&self) -> bool {
        self.phases.iter().all(|&p| p == 0.0)
    }

    /// Angles padded with zeros to `dim` entries; `None` if there are more than `dim`.
    pub fn angles(&self, dim: usize) -> Option<Vec<f64>> {
        if self.phases.len() > dim {
            return None;
        }
        let mut out = self.phases.clone();
        out.resize(dim, 0.0);
        Some(out)
    }

    pub fn raw(&self) -> &[f64] {
        &self.phases
    }

    /// Group law: entrywise addition mod 2π.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.phases.len().max(other.phases.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Self::from_angles(
            (0..n)
                .map(|i| get(&self.phases, i) + get(&other.phases, i))
                .collect(),
        )
    }

    pub fn negate(&self) -> Self {
        Self::from_angles(self.phases.iter().map(|p| -p).collect())
    }

    /// The scalar angle when this is a qubit phase `(0, α)`.
    pub fn as_qubit_angle(&self) -> Option<f64> {
        match self.phases.as_slice() {
            [_] => Some(0.0),
            [_, a] => Some(*a),
            _ => None,
        }
    }
}

impl Default for PhaseElement {
    fn default() -> Self {
        Self::zero()
    }
}

/// Abstract syntax of a string diagram.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagramTerm {
    Id(usize),
    Spider {
        inputs: usize,
        outputs: usize,
        phase: PhaseElement,
    },
    Cup,
    Cap,
    Swap,
    Box(String),
    Ket(String),
    /// Sequential composition, first stage applied first.
    Seq(Vec<DiagramTerm>),
    /// Tensor product, left to right.
    Par(Vec<DiagramTerm>),
}

impl DiagramTerm {
    pub fn spider(inputs: usize, outputs: usize) -> Self {
        Self::Spider {
            inputs,
            outputs,
            phase: PhaseElement::zero(),
        }
    }

    pub fn phased_spider(inputs: usize, outputs: usize, phase: PhaseElement) -> Self {
        Self::Spider {
            inputs,
            outputs,
            phase,
        }
    }

    pub fn boxed(name: impl Into<String>) -> Self {
        Self::Box(name.into())
    }

    pub fn seq(terms: impl IntoIterator<Item = DiagramTerm>) -> Self {
        Self::Seq(terms.into_iter().collect())
    }

    pub fn par(terms: impl IntoIterator<Item = DiagramTerm>) -> Self {
        Self::Par(terms.into_iter().collect())
    }
}

fn write_phase(f: &mut fmt::Formatter<'_>, phase: &PhaseElement) -> fmt::Result {
    // only the qubit form has concrete syntax
    match phase.as_qubit_angle() {
        Some(a) if a != 0.0 => write!(f, ",{a:?}"),
        _ => Ok(()),
    }
}

impl fmt::Display for DiagramTerm {
    /// Pretty-prints in the concrete syntax accepted by [`parse`](super::parse).
    /// Spider phases with more than one nontrivial angle have no concrete syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Id(n) => write!(f, "id({n})"),
            Self::Spider {
                inputs,
                outputs,
                phase,
            } => {
                write!(f, "spider({inputs},{outputs}")?;
                write_phase(f, phase)?;
                write!(f, ")")
            }
            Self::Cup => write!(f, "cup"),
            Self::Cap => write!(f, "cap"),
            Self::Swap => write!(f, "swap"),
            Self::Box(name) => write!(f, "box({name})"),
            Self::Ket(bits) => write!(f, "ket({bits})"),
            Self::Seq(terms) => write_joined(f, terms, " ; "),
            Self::Par(terms) => write_joined(f, terms, " * "),
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, terms: &[DiagramTerm], sep: &str) -> fmt::Result {
    write!(f, "(")?;
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write!(f, "{t}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_canonical_form() {
        assert_eq!(PhaseElement::qubit(0.0), PhaseElement::zero());
        assert_eq!(PhaseElement::qubit(-PI), PhaseElement::qubit(PI));
        assert_eq!(PhaseElement::qubit(2.0 * PI), PhaseElement::zero());
        assert_eq!(
            PhaseElement::from_angles(vec![1.0, 1.0]),
            PhaseElement::zero()
        );
        assert_eq!(PhaseElement::qubit(PI).angles(3), Some(vec![0.0, PI, 0.0]));
        assert_eq!(
            PhaseElement::from_angles(vec![0.0, 1.0, 2.0]).angles(2),
            None
        );
    }

    #[test]
    fn phase_group_law() {
        let a = PhaseElement::qubit(1.5 * PI);
        let b = PhaseElement::qubit(PI);
        let sum = a.add(&b);
        assert!((sum.as_qubit_angle().unwrap() - 0.5 * PI).abs() < 1e-12);
        assert!(a.add(&a.negate()).is_zero());
        assert_eq!(a.add(&PhaseElement::zero()), a);
        assert_eq!(a.add(&b), b.add(&a));
    }
}
