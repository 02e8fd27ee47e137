//! Python bindings for the `qdc` compiler.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qdc::bench::{self, CompileOptions, ExperimentConfig, GenSpec, Pipeline, WeightSpec};
use qdc::circuit::{parse, serialize};
use qdc::{Circuit, CliffordTableau, PauliRotation, PauliString, QdcError};

fn err(e: QdcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A signed Pauli string such as `"-XIZ"`.
#[pyclass(name = "PauliString", module = "qdc_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPauliString(PauliString);

#[pymethods]
impl PyPauliString {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn commutes(&self, other: &Self) -> PyResult<bool> {
        self.0.commutes(&other.0).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.multiply(&other.0).map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliString('{}')", self.0)
    }
}

/// `exp(-i·angle/2·P)`.
#[pyclass(name = "PauliRotation", module = "qdc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPauliRotation(PauliRotation);

#[pymethods]
impl PyPauliRotation {
    #[new]
    fn new(pauli: &str, angle: f64) -> PyResult<Self> {
        let p: PauliString = pauli.parse().map_err(err)?;
        PauliRotation::new(p, angle).map(Self).map_err(err)
    }

    #[getter]
    fn pauli(&self) -> PyPauliString {
        PyPauliString(self.0.pauli().clone())
    }

    #[getter]
    fn angle(&self) -> f64 {
        self.0.angle()
    }

    fn is_clifford(&self) -> bool {
        self.0.is_clifford()
    }

    fn __repr__(&self) -> String {
        format!("PauliRotation('{}', {})", self.0.pauli(), self.0.angle())
    }
}

/// Clifford tableau of a Clifford circuit given in the text format.
#[pyclass(name = "CliffordTableau", module = "qdc_py", frozen)]
struct PyTableau(CliffordTableau);

#[pymethods]
impl PyTableau {
    #[new]
    fn new(n: usize, circuit_text: Option<&str>) -> PyResult<Self> {
        let t = match circuit_text {
            None => CliffordTableau::identity(n),
            Some(src) => {
                let c = parse(src).map_err(err)?;
                CliffordTableau::from_gates(n, &c.clifford_gates().map_err(err)?).map_err(err)?
            }
        };
        Ok(Self(t))
    }

    /// `C P C†`.
    fn conjugate(&self, p: &PyPauliString) -> PyResult<PyPauliString> {
        self.0.conjugate(&p.0).map(PyPauliString).map_err(err)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }
}

/// A circuit in the line-oriented text format.
#[pyclass(name = "Circuit", module = "qdc_py", skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit(Circuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse(text).map(Self).map_err(err)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn cx_count(&self) -> usize {
        self.0.cx_count()
    }

    fn metrics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = self.0.metrics();
        let d = PyDict::new(py);
        d.set_item("depth", m.depth)?;
        d.set_item("cx_count", m.cx_count)?;
        d.set_item("qubit_count", m.qubit_count)?;
        d.set_item("measure_count", m.measure_count)?;
        Ok(d)
    }

    fn to_text(&self) -> String {
        serialize(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.instructions().len()
    }
}

/// Random phasor circuit; `weight` is an int or `"random"`.
#[pyfunction]
#[pyo3(signature = (n, phasors, clifford_pct=0.0, weight="random".to_string(), seed=0))]
fn generate(n: usize, phasors: usize, clifford_pct: f64, weight: String, seed: u64) -> PyResult<PyCircuit> {
    let weight: WeightSpec = weight.parse().map_err(err)?;
    let spec = GenSpec { n_qubits: n, n_phasors: phasors, clifford_pct, weight, seed };
    let rs = bench::random_phasor_circuit(&spec).map_err(err)?;
    bench::phasor_circuit(n, &rs).map(PyCircuit).map_err(err)
}

/// Compiles `source` for a `rows × cols` grid; returns the circuit and its input qubits.
#[pyfunction]
#[pyo3(signature = (source, pipeline="qdc_full", rows=None, cols=5, d=None, expectation=None))]
fn compile(
    source: &PyCircuit,
    pipeline: &str,
    rows: Option<usize>,
    cols: usize,
    d: Option<usize>,
    expectation: Option<&str>,
) -> PyResult<(PyCircuit, Vec<usize>, Option<PyPauliString>)> {
    let pipeline: Pipeline = pipeline.parse().map_err(err)?;
    let expectation = expectation.map(str::parse::<PauliString>).transpose().map_err(err)?;
    let opts = CompileOptions {
        grid_rows: rows.unwrap_or(source.0.num_qubits()),
        grid_cols: cols,
        d,
        expectation,
    };
    let c = bench::compile(&source.0, pipeline, &opts).map_err(err)?;
    Ok((PyCircuit(c.circuit), c.inputs, c.observable.map(PyPauliString)))
}

/// Branch-wise equivalence check on |0…0⟩; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (compiled, reference, inputs=None, tol=1e-9))]
fn verify<'py>(
    py: Python<'py>,
    compiled: &PyCircuit,
    reference: &PyCircuit,
    inputs: Option<Vec<usize>>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let inputs = match inputs {
        Some(v) => v,
        None => bench::tagged_inputs(&compiled.0)
            .map_err(err)?
            .unwrap_or_else(|| (0..reference.0.num_qubits()).collect()),
    };
    let r = bench::verify_placed(&compiled.0, &inputs, &reference.0, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("equivalent", r.equivalent)?;
    d.set_item("worst_fidelity", r.worst_fidelity)?;
    d.set_item("worst_purity", r.worst_purity)?;
    d.set_item("failing_branch", r.failing_branch)?;
    d.set_item("branches_checked", r.branches_checked)?;
    d.set_item("exhaustive", r.exhaustive)?;
    Ok(d)
}

/// Runs a benchmark from its JSON config and returns the CSV text.
#[pyfunction]
#[pyo3(signature = (config_json, verify=false))]
fn run_bench(config_json: &str, verify: bool) -> PyResult<String> {
    let cfg = ExperimentConfig::from_json(config_json).map_err(err)?;
    let rows = bench::run_experiment(&cfg, verify || cfg.verify_by_default()).map_err(err)?;
    bench::to_csv(&cfg, &rows).map_err(err)
}

#[pymodule]
pub fn qdc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauliString>()?;
    m.add_class::<PyPauliRotation>()?;
    m.add_class::<PyTableau>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add("D_PHASOR", qdc::reduce::D_PHASOR)?;
    Ok(())
}
