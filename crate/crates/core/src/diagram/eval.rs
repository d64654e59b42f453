use std::collections::BTreeMap;

use super::ast::DiagramTerm;
use super::observable::ObservableStructure;
use crate::error::{Error, Result};
use crate::tensor::{LinearMap, C64, DEFAULT_DIM_LIMIT};

/// Supplies `(input wires, output wires)` for box names.
pub trait BoxSignatures {
    fn signature(&self, name: &str) -> Option<(usize, usize)>;
}

impl BoxSignatures for BTreeMap<String, (usize, usize)> {
    fn signature(&self, name: &str) -> Option<(usize, usize)> {
        self.get(name).copied()
    }
}

/// Concrete linear maps bound to box names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoxEnv {
    boxes: BTreeMap<String, LinearMap>,
}

impl BoxEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// The single-qubit library `I`, `X`, `Y`, `Z`, `H`, `S`.
    pub fn qubit_gates() -> Self {
        let mut env = Self::new();
        for name in ["I", "X", "Y", "Z", "H", "S"] {
            env.insert(name, LinearMap::named(name).expect("builtin"));
        }
        env
    }

    pub fn insert(&mut self, name: impl Into<String>, map: LinearMap) -> &mut Self {
        self.boxes.insert(name.into(), map);
        self
    }

    pub fn get(&self, name: &str) -> Option<&LinearMap> {
        self.boxes.get(name)
    }

    pub fn signatures(&self) -> BTreeMap<String, (usize, usize)> {
        self.boxes
            .iter()
            .map(|(k, m)| (k.clone(), (m.in_dims().len(), m.out_dims().len())))
            .collect()
    }
}

impl BoxSignatures for BoxEnv {
    fn signature(&self, name: &str) -> Option<(usize, usize)> {
        self.get(name)
            .map(|m| (m.in_dims().len(), m.out_dims().len()))
    }
}

/// Wire counts `(inputs, outputs)` of a term.
pub fn typecheck(term: &DiagramTerm, env: &impl BoxSignatures) -> Result<(usize, usize)> {
    Ok(match term {
        DiagramTerm::Id(n) => (*n, *n),
        DiagramTerm::Spider {
            inputs, outputs, ..
        } => (*inputs, *outputs),
        DiagramTerm::Cup => (0, 2),
        DiagramTerm::Cap => (2, 0),
        DiagramTerm::Swap => (2, 2),
        DiagramTerm::Box(name) => env
            .signature(name)
            .ok_or_else(|| Error::UnboundBox(name.clone()))?,
        DiagramTerm::Ket(bits) => (0, bits.chars().count()),
        DiagramTerm::Seq(stages) => {
            let mut shape: Option<(usize, usize)> = None;
            for (i, stage) in stages.iter().enumerate() {
                let (inp, out) = typecheck(stage, env)?;
                shape = Some(match shape {
                    None => (inp, out),
                    Some((first_in, prev_out)) => {
                        if prev_out != inp {
                            return Err(Error::WireMismatch {
                                stage: i,
                                produced: prev_out,
                                expected: inp,
                            });
                        }
                        (first_in, out)
                    }
                });
            }
            shape.unwrap_or((0, 0))
        }
        DiagramTerm::Par(factors) => {
            let mut total = (0, 0);
            for f in factors {
                let (i, o) = typecheck(f, env)?;
                total = (total.0 + i, total.1 + o);
            }
            total
        }
    })
}

/// Evaluates terms to linear maps against one observable structure.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    obs: &'a ObservableStructure,
    env: &'a BoxEnv,
    dim_limit: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(obs: &'a ObservableStructure, env: &'a BoxEnv) -> Self {
        Self {
            obs,
            env,
            dim_limit: DEFAULT_DIM_LIMIT,
        }
    }

    pub fn with_dim_limit(mut self, limit: usize) -> Self {
        self.dim_limit = limit;
        self
    }

    pub fn evaluate(&self, term: &DiagramTerm) -> Result<LinearMap> {
        typecheck(term, self.env)?;
        self.eval(term)
    }

    fn check_size(&self, wires: usize) -> Result<()> {
        let d = self.obs.dim();
        let n = u32::try_from(wires).ok().and_then(|w| d.checked_pow(w));
        match n {
            Some(n) if n <= self.dim_limit => Ok(()),
            _ => Err(Error::DimensionLimit {
                requested: n.unwrap_or(usize::MAX),
                limit: self.dim_limit,
            }),
        }
    }

    fn eval(&self, term: &DiagramTerm) -> Result<LinearMap> {
        let d = self.obs.dim();
        match term {
            DiagramTerm::Id(n) => {
                self.check_size(*n)?;
                Ok(LinearMap::identity(&vec![d; *n]))
            }
            DiagramTerm::Spider {
                inputs,
                outputs,
                phase,
            } => {
                self.check_size(*inputs)?;
                self.check_size(*outputs)?;
                let angles = phase.angles(d).ok_or_else(|| {
                    Error::Invalid(format!(
                        "phase with {} angles on a {d}-dimensional wire",
                        phase.raw().len()
                    ))
                })?;
                self.obs.spider(*inputs, *outputs, &angles)
            }
            DiagramTerm::Cup => Ok(cup(d)),
            DiagramTerm::Cap => Ok(cup(d).dagger()),
            DiagramTerm::Swap => Ok(swap(d)),
            DiagramTerm::Box(name) => {
                let m = self
                    .env
                    .get(name)
                    .ok_or_else(|| Error::UnboundBox(name.clone()))?;
                if let Some(&found) = m.in_dims().iter().chain(m.out_dims()).find(|&&w| w != d) {
                    return Err(Error::BoxDimension {
                        name: name.clone(),
                        expected: d,
                        found,
                    });
                }
                Ok(m.clone())
            }
            DiagramTerm::Ket(bits) => {
                self.check_size(bits.chars().count())?;
                let points = self.obs.classical_points();
                let mut state = LinearMap::scalar(C64::new(1.0, 0.0));
                for c in bits.chars() {
                    let k = c
                        .to_digit(36)
                        .map(|k| k as usize)
                        .filter(|&k| k < d)
                        .ok_or_else(|| {
                            Error::Invalid(format!("ket digit `{c}` on a {d}-dimensional wire"))
                        })?;
                    state = state.tensor_with_limit(&points[k].as_map(), self.dim_limit)?;
                }
                Ok(state)
            }
            DiagramTerm::Seq(stages) => {
                let mut acc: Option<LinearMap> = None;
                for stage in stages {
                    let m = self.eval(stage)?;
                    acc = Some(match acc {
                        None => m,
                        Some(prev) => m.compose(&prev)?,
                    });
                }
                Ok(acc.unwrap_or_else(|| LinearMap::scalar(C64::new(1.0, 0.0))))
            }
            DiagramTerm::Par(factors) => {
                let mut acc = LinearMap::scalar(C64::new(1.0, 0.0));
                for f in factors {
                    acc = acc.tensor_with_limit(&self.eval(f)?, self.dim_limit)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Evaluates a term with the default dimension limit.
pub fn evaluate(term: &DiagramTerm, obs: &ObservableStructure, env: &BoxEnv) -> Result<LinearMap> {
    Evaluator::new(obs, env).evaluate(term)
}

/// `Σ_k |kk>` in the computational basis.
fn cup(d: usize) -> LinearMap {
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for k in 0..d {
        data[k * d + k] = C64::new(1.0, 0.0);
    }
    LinearMap::new(vec![d, d], vec![], data).expect("shape")
}

fn swap(d: usize) -> LinearMap {
    let n = d * d;
    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..d {
        for j in 0..d {
            data[(j * d + i) * n + (i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    LinearMap::new(vec![d, d], vec![d, d], data).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse, PhaseElement};
    use crate::tensor::StateVector;
    use std::f64::consts::PI;

    fn eval_z(src: &str) -> LinearMap {
        evaluate(
            &parse(src).unwrap(),
            &ObservableStructure::z(),
            &BoxEnv::qubit_gates(),
        )
        .unwrap()
    }

    #[test]
    fn typecheck_examples() {
        let env = BoxEnv::new();
        assert_eq!(typecheck(&DiagramTerm::Id(2), &env).unwrap(), (2, 2));
        assert_eq!(typecheck(&DiagramTerm::spider(0, 3), &env).unwrap(), (0, 3));
        let bad = DiagramTerm::seq([DiagramTerm::spider(0, 2), DiagramTerm::Id(3)]);
        assert_eq!(
            typecheck(&bad, &env).unwrap_err(),
            Error::WireMismatch {
                stage: 1,
                produced: 2,
                expected: 3
            }
        );
        assert_eq!(
            typecheck(&DiagramTerm::boxed("U"), &env).unwrap_err(),
            Error::UnboundBox("U".into())
        );
        let sigs: BTreeMap<String, (usize, usize)> = [("U".to_string(), (2, 2))].into();
        let t = parse("cup ; box(U) ; cap").unwrap();
        assert_eq!(typecheck(&t, &sigs).unwrap(), (0, 0));
    }

    #[test]
    fn bell_spider() {
        let expected = StateVector::new(
            vec![2, 2],
            [1.0, 0.0, 0.0, 1.0].map(|x| C64::new(x, 0.0)).to_vec(),
        )
        .unwrap();
        assert_eq!(eval_z("spider(0,2)").as_state().unwrap(), expected);
    }

    #[test]
    fn ghz3_spider() {
        let s = eval_z("spider(0,3)").as_state().unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let expected = if i == 0 || i == 7 { 1.0 } else { 0.0 };
            assert_eq!(*a, C64::new(expected, 0.0));
        }
    }

    #[test]
    fn phase_spider_on_plus() {
        let plus = StateVector::new(vec![2], vec![C64::new(1.0, 0.0); 2]).unwrap();
        let out = eval_z("spider(1,1,pi)").apply(&plus).unwrap();
        let expected =
            StateVector::new(vec![2], vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
        assert!(out.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn seq_applies_first_stage_first() {
        // X then H on |0> gives |->, H then X gives |+> up to sign on |1>
        let xh = eval_z("ket(0) ; box(X) ; box(H)").as_state().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(xh.approx_eq(
            &StateVector::new(vec![2], vec![C64::new(r, 0.0), C64::new(-r, 0.0)]).unwrap(),
            1e-15
        ));
    }

    #[test]
    fn snake_equation() {
        let snake = eval_z("(cup * id(1)) ; (id(1) * cap)");
        assert!(snake.approx_eq(&LinearMap::identity(&[2]), 1e-15));
    }

    #[test]
    fn swap_exchanges_wires() {
        let s = eval_z("ket(01) ; swap").as_state().unwrap();
        assert_eq!(s, StateVector::ket(2, "10").unwrap());
    }

    #[test]
    fn ket_uses_classical_points() {
        let x = ObservableStructure::x();
        let s = evaluate(&parse("ket(1)").unwrap(), &x, &BoxEnv::new())
            .unwrap()
            .as_state()
            .unwrap();
        assert_eq!(s, x.classical_points()[1]);
        assert!(evaluate(&parse("ket(2)").unwrap(), &x, &BoxEnv::new()).is_err());
    }

    #[test]
    fn qutrit_spider_with_phase_vector() {
        let obs = ObservableStructure::computational(3);
        let t =
            DiagramTerm::phased_spider(1, 1, PhaseElement::from_angles(vec![0.0, PI, PI / 2.0]));
        let m = evaluate(&t, &obs, &BoxEnv::new()).unwrap();
        assert!((m.get(1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((m.get(2, 2) - C64::i()).norm() < 1e-15);
        let too_many =
            DiagramTerm::phased_spider(1, 1, PhaseElement::from_angles(vec![0.0, 1.0, 1.0]));
        assert!(evaluate(&too_many, &ObservableStructure::z(), &BoxEnv::new()).is_err());
    }

    #[test]
    fn box_dimension_checked() {
        let obs = ObservableStructure::computational(3);
        assert!(matches!(
            evaluate(&parse("box(H)").unwrap(), &obs, &BoxEnv::qubit_gates()),
            Err(Error::BoxDimension { .. })
        ));
    }

    #[test]
    fn dimension_limit_delegated() {
        let obs = ObservableStructure::z();
        let env = BoxEnv::new();
        let t = parse("spider(0,13)").unwrap();
        assert!(matches!(
            evaluate(&t, &obs, &env),
            Err(Error::DimensionLimit {
                requested: 8192,
                ..
            })
        ));
        let t = parse("id(3) * id(3)").unwrap();
        assert!(matches!(
            Evaluator::new(&obs, &env).with_dim_limit(32).evaluate(&t),
            Err(Error::DimensionLimit { .. })
        ));
    }
}
