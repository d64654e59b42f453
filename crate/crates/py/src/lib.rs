//! Python bindings: `import qgame`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qgame_core::bayes::{self, Advice, BayesianGame as CoreBayesianGame, BellExpression};
use qgame_core::diagram::{self, BoxEnv, ObservableStructure};
use qgame_core::ewl::{self, QuantumGameSpec};
use qgame_core::formats::{from_json, BayesGameFile, EwlGameFile};
use qgame_core::tensor::{self, C64};

create_exception!(
    qgame,
    LimitError,
    PyException,
    "Enumeration or dimension limit exceeded."
);

fn err(e: qgame_core::Error) -> PyErr {
    if e.is_limit() {
        LimitError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn observable(name: &str) -> PyResult<ObservableStructure> {
    ObservableStructure::named(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown observable `{name}`")))
}

/// A dense linear map between tensor products of wires.
#[pyclass(name = "LinearMap", module = "qgame", frozen)]
struct PyLinearMap {
    inner: tensor::LinearMap,
}

#[pymethods]
impl PyLinearMap {
    /// `rows` is a list of lists of complex numbers; a single wire on each side.
    #[new]
    fn new(rows: Vec<Vec<C64>>) -> PyResult<Self> {
        Ok(Self {
            inner: tensor::LinearMap::from_rows(rows).map_err(err)?,
        })
    }

    /// Builtin qubit gate: `I`, `X`, `Y`, `Z`, `H` or `S`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        tensor::LinearMap::named(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown gate `{name}`")))
    }

    #[staticmethod]
    fn identity(dims: Vec<usize>) -> Self {
        Self {
            inner: tensor::LinearMap::identity(&dims),
        }
    }

    #[getter]
    fn in_dims(&self) -> Vec<usize> {
        self.inner.in_dims().to_vec()
    }

    #[getter]
    fn out_dims(&self) -> Vec<usize> {
        self.inner.out_dims().to_vec()
    }

    fn rows(&self) -> Vec<Vec<C64>> {
        self.inner.to_rows()
    }

    fn tensor(&self, other: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.tensor(&other.inner).map_err(err)?,
        })
    }

    /// `self ∘ other`: apply `other` first.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.compose(&other.inner).map_err(err)?,
        })
    }

    fn dagger(&self) -> Self {
        Self {
            inner: self.inner.dagger(),
        }
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn is_unitary(&self, tol: f64) -> bool {
        self.inner.is_unitary(tol)
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn __repr__(&self) -> String {
        format!(
            "LinearMap({:?} -> {:?})",
            self.inner.in_dims(),
            self.inner.out_dims()
        )
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// An EWL-style quantum game.
#[pyclass(name = "QuantumGame", module = "qgame", frozen)]
struct PyQuantumGame {
    inner: QuantumGameSpec,
}

#[pymethods]
impl PyQuantumGame {
    /// Loads the JSON game format used by the command-line tool.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: EwlGameFile = from_json(text).map_err(err)?;
        Ok(Self {
            inner: file.to_spec().map_err(err)?,
        })
    }

    /// EWL prisoners' dilemma with strategies `I`, `X` plus `extra`.
    #[staticmethod]
    #[pyo3(signature = (extra = Vec::new()))]
    fn prisoners_dilemma(extra: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = extra.iter().map(String::as_str).collect();
        Ok(Self {
            inner: ewl::ewl_prisoners_dilemma(&refs).map_err(err)?,
        })
    }

    #[getter]
    fn players(&self) -> usize {
        self.inner.players()
    }

    #[getter]
    fn strategies(&self) -> Vec<Vec<String>> {
        self.inner
            .strategies()
            .iter()
            .map(|set| set.iter().map(|s| s.label.clone()).collect())
            .collect()
    }

    fn payoffs(&self, profile: Vec<String>) -> PyResult<Vec<f64>> {
        let refs: Vec<&str> = profile.iter().map(String::as_str).collect();
        self.inner.payoffs(&refs).map_err(err)
    }

    /// Final amplitudes keyed by outcome label.
    fn final_state(&self, profile: Vec<String>) -> PyResult<BTreeMap<String, C64>> {
        let refs: Vec<&str> = profile.iter().map(String::as_str).collect();
        let s = self.inner.final_state(&refs).map_err(err)?;
        Ok(s.amplitudes()
            .iter()
            .enumerate()
            .map(|(k, a)| (tensor::index_label(s.dims(), k), *a))
            .collect())
    }

    fn outcome_distribution(&self, profile: Vec<String>) -> PyResult<BTreeMap<String, f64>> {
        let refs: Vec<&str> = profile.iter().map(String::as_str).collect();
        Ok(self
            .inner
            .evaluate_profile(&refs)
            .map_err(err)?
            .outcome_distribution
            .to_map())
    }

    /// List of `(profile, payoffs)` pairs.
    fn payoff_table(&self) -> PyResult<Vec<(Vec<String>, Vec<f64>)>> {
        Ok(self.inner.payoff_table().map_err(err)?.entries())
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn pure_nash(&self, tol: f64) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .inner
            .payoff_table()
            .map_err(err)?
            .pure_nash_with_tolerance(tol))
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn pareto_optimal(&self, tol: f64) -> PyResult<Vec<Vec<String>>> {
        Ok(self
            .inner
            .payoff_table()
            .map_err(err)?
            .pareto_optimal_with_tolerance(tol))
    }
}

/// A Bayesian game with optional advice and Bell expression.
#[pyclass(name = "BayesianGame", module = "qgame", frozen)]
struct PyBayesianGame {
    game: CoreBayesianGame,
    advice: Option<Advice>,
    bell: BellExpression,
}

impl PyBayesianGame {
    fn advice(&self) -> PyResult<&Advice> {
        self.advice
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("game has no advice"))
    }
}

#[pymethods]
impl PyBayesianGame {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: BayesGameFile = from_json(text).map_err(err)?;
        let game = file.to_game().map_err(err)?;
        let advice = file.to_advice(&game).map_err(err)?;
        let bell = file.to_bell(&game).map_err(err)?;
        Ok(Self { game, advice, bell })
    }

    /// Common-interest CHSH game with optimal quantum advice on `Φ+`.
    #[staticmethod]
    fn chsh() -> Self {
        let game = bayes::chsh_game();
        let bell = BellExpression::from_payoff(&game, 0);
        Self {
            game,
            advice: Some(Advice::Quantum(bayes::chsh_quantum_advice())),
            bell,
        }
    }

    #[getter]
    fn players(&self) -> usize {
        self.game.players()
    }

    #[getter]
    fn has_advice(&self) -> bool {
        self.advice.is_some()
    }

    /// Average payoff of each player under the advice.
    fn average_payoff(&self) -> PyResult<Vec<f64>> {
        let cond = self.advice()?.conditional().map_err(err)?;
        bayes::average_payoff(&self.game, &cond).map_err(err)
    }

    /// Conditional table `p(s | X)` as rows over joint types.
    fn conditional(&self) -> PyResult<Vec<Vec<f64>>> {
        let cond = self.advice()?.conditional().map_err(err)?;
        let ns = self.game.domain().joint_strategies();
        Ok(cond.table().chunks(ns).map(<[f64]>::to_vec).collect())
    }

    fn signaling_violation(&self) -> PyResult<f64> {
        Ok(self
            .advice()?
            .conditional()
            .map_err(err)?
            .signaling_violation())
    }

    fn bell_value(&self) -> PyResult<f64> {
        let cond = self.advice()?.conditional().map_err(err)?;
        self.bell.value(&cond).map_err(err)
    }

    /// `(bound, maximizing strategy indices per player and type)`.
    #[pyo3(signature = (limit = bayes::DEFAULT_ENUMERATION_LIMIT))]
    fn classical_bound(&self, limit: u128) -> PyResult<(f64, Vec<Vec<usize>>)> {
        let c = bayes::classical_bound(&self.bell, limit).map_err(err)?;
        Ok((c.value, c.strategies))
    }

    #[pyo3(signature = (tol = 1e-9, limit = bayes::DEFAULT_ENUMERATION_LIMIT))]
    fn is_advised_equilibrium<'py>(
        &self,
        py: Python<'py>,
        tol: f64,
        limit: u128,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cond = self.advice()?.conditional().map_err(err)?;
        let v = bayes::is_advised_equilibrium(&self.game, &cond, tol, limit).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("is_equilibrium", v.is_equilibrium)?;
        d.set_item("payoffs", v.payoffs)?;
        d.set_item("max_gains", v.max_gains)?;
        if let Some(dev) = v.best_deviation {
            let b = PyDict::new(py);
            b.set_item("player", dev.player)?;
            b.set_item("gain", dev.gain)?;
            b.set_item("payoff", dev.payoff)?;
            b.set_item("mapping", dev.mapping)?;
            d.set_item("best_deviation", b)?;
        } else {
            d.set_item("best_deviation", py.None())?;
        }
        Ok(d)
    }
}

/// Closed-form outcome distribution of GHZ measured in phase bases.
#[pyfunction]
fn ghz_phase_distribution(n: usize, phases: Vec<f64>) -> PyResult<BTreeMap<String, f64>> {
    Ok(bayes::ghz_phase_distribution(n, &phases)
        .map_err(err)?
        .to_map())
}

#[pyfunction]
fn mermin_inequivalence<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let r = bayes::mermin_inequivalence();
    let d = PyDict::new(py);
    d.set_item("settings", r.settings)?;
    d.set_item("quantum_expectations", r.quantum_expectations)?;
    d.set_item("quantum_product", r.quantum_product)?;
    d.set_item("assignments_checked", r.assignments_checked)?;
    d.set_item("satisfying_assignments", r.satisfying_assignments)?;
    d.set_item(
        "classical_product_always_positive",
        r.classical_product_always_positive,
    )?;
    d.set_item("inequivalent", r.inequivalent)?;
    Ok(d)
}

/// Evaluates diagram text against an observable (`z`, `x`, `computational:d`, `fourier:d`).
#[pyfunction]
#[pyo3(signature = (text, observable = "z"))]
fn evaluate_diagram(text: &str, observable: &str) -> PyResult<PyLinearMap> {
    let term = diagram::parse(text).map_err(|e| err(e.into()))?;
    let obs = self::observable(observable)?;
    Ok(PyLinearMap {
        inner: diagram::evaluate(&term, &obs, &BoxEnv::qubit_gates()).map_err(err)?,
    })
}

/// `(inputs, outputs)` of a well-typed diagram.
#[pyfunction]
fn typecheck_diagram(text: &str) -> PyResult<(usize, usize)> {
    let term = diagram::parse(text).map_err(|e| err(e.into()))?;
    diagram::typecheck(&term, &BoxEnv::qubit_gates()).map_err(err)
}

#[pyfunction]
fn parse_angle(text: &str) -> PyResult<f64> {
    diagram::parse_angle(text).map_err(|e| err(e.into()))
}

#[pymodule]
fn qgame(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LimitError", m.py().get_type::<LimitError>())?;
    m.add_class::<PyLinearMap>()?;
    m.add_class::<PyQuantumGame>()?;
    m.add_class::<PyBayesianGame>()?;
    m.add_function(wrap_pyfunction!(ghz_phase_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(mermin_inequivalence, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(typecheck_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(parse_angle, m)?)?;
    Ok(())
}
