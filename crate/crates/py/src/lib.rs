//! Python bindings: base transforms, fractional operators, circuits and the
//! statevector simulator. Matrices cross the boundary as lists of rows of
//! Python `complex`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qfrac::circuits::{circuit_unitary, export_qasm, import_qasm};
use qfrac::fractional::{
    build_qfrin_circuit_with, build_qfru_circuit, extract_data_block, fractional_operator, qfrin_closed_form,
    shih_coefficients as shih, FractionalSpec, Realization,
};
use qfrac::linalg::{Complex, ComplexMatrix, StateVector};
use qfrac::simulator::{run, Trace};
use qfrac::transforms::{verify_order as order_of, BaseTransform, TransformId};

type Rows = Vec<Vec<Complex>>;

fn py_err(e: qfrac::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn base(transform: &str, size: usize) -> PyResult<BaseTransform> {
    let id: TransformId = transform.parse().map_err(py_err)?;
    id.build(size).map_err(py_err)
}

fn realization(gate_level: bool) -> Realization {
    if gate_level {
        Realization::GateLevel
    } else {
        Realization::Dense
    }
}

/// Names accepted wherever a transform is expected.
#[pyfunction]
fn transform_ids() -> Vec<&'static str> {
    TransformId::ALL.iter().map(|t| t.as_str()).collect()
}

#[pyfunction]
fn base_matrix(transform: &str, size: usize) -> PyResult<Rows> {
    Ok(rows(&base(transform, size)?.dense))
}

/// `(exponent, power_deviation, eigen_residue)`.
#[pyfunction]
#[pyo3(signature = (transform, size, max_exponent = 6))]
fn verify_order(transform: &str, size: usize, max_exponent: usize) -> PyResult<(usize, f64, f64)> {
    let r = order_of(&base(transform, size)?, max_exponent).map_err(py_err)?;
    Ok((r.exponent, r.power_deviation, r.eigen_residue))
}

#[pyfunction]
fn shih_coefficients(order: usize, alpha: f64) -> PyResult<Vec<Complex>> {
    Ok(shih(order, alpha).map_err(py_err)?.weights)
}

/// Dense fractional power `FrU(alpha)` of a base transform.
#[pyfunction]
fn fractional_matrix(transform: &str, size: usize, alpha: f64) -> PyResult<Rows> {
    let b = base(transform, size)?;
    Ok(rows(&fractional_operator(&b.dense, b.order_exponent, alpha).map_err(py_err)?))
}

/// Closed form of the single-ancilla fractional involution.
#[pyfunction]
fn qfrin_matrix(transform: &str, size: usize, alpha: f64) -> PyResult<Rows> {
    Ok(rows(&qfrin_closed_form(&base(transform, size)?.dense, alpha).map_err(py_err)?))
}

#[pyclass(name = "Circuit", module = "qfrac_py")]
struct PyCircuit {
    inner: qfrac::circuits::Circuit,
    /// Wires above the data register.
    #[pyo3(get)]
    control_qubits: usize,
}

#[pymethods]
impl PyCircuit {
    /// The generalized fractional circuit for `transform` at `alpha`.
    #[staticmethod]
    #[pyo3(signature = (transform, size, alpha, gate_level = false))]
    fn qfru(transform: &str, size: usize, alpha: f64, gate_level: bool) -> PyResult<Self> {
        let spec = FractionalSpec::new(base(transform, size)?, alpha)
            .and_then(|s| s.with_realization(realization(gate_level)))
            .map_err(py_err)?;
        let inner = build_qfru_circuit(&spec).map_err(py_err)?;
        Ok(Self { inner, control_qubits: spec.control_qubits() })
    }

    /// The single-ancilla circuit for an involutive `transform`.
    #[staticmethod]
    #[pyo3(signature = (transform, size, alpha, gate_level = false))]
    fn qfrin(transform: &str, size: usize, alpha: f64, gate_level: bool) -> PyResult<Self> {
        let b = base(transform, size)?;
        let inner = build_qfrin_circuit_with(&b, alpha, realization(gate_level)).map_err(py_err)?;
        let control_qubits = inner.num_qubits() - b.data_qubits;
        Ok(Self { inner, control_qubits })
    }

    /// Parses OpenQASM 3 text; `control_qubits` is taken as given.
    #[staticmethod]
    #[pyo3(signature = (text, control_qubits = 0))]
    fn from_qasm(text: &str, control_qubits: usize) -> PyResult<Self> {
        let inner = import_qasm(text).map_err(py_err)?;
        if control_qubits > inner.num_qubits() {
            return Err(PyValueError::new_err("more control qubits than wires"));
        }
        Ok(Self { inner, control_qubits })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Circuit(num_qubits={}, ops={})", self.inner.num_qubits(), self.inner.len())
    }

    fn to_qasm(&self) -> PyResult<String> {
        export_qasm(&self.inner).map_err(py_err)
    }

    fn unitary(&self) -> PyResult<Rows> {
        Ok(rows(&circuit_unitary(&self.inner).map_err(py_err)?))
    }

    /// `(block, leakage)`: the operator on the data register with all
    /// control wires starting and ending in |0>.
    fn data_block(&self) -> PyResult<(Rows, f64)> {
        let full = circuit_unitary(&self.inner).map_err(py_err)?;
        let q = self.inner.num_qubits() - self.control_qubits;
        let db = extract_data_block(&full, self.control_qubits, q).map_err(py_err)?;
        Ok((rows(&db.block), db.leakage))
    }

    /// Simulates the circuit on a full-register state.
    fn run(&self, amplitudes: Vec<Complex>) -> PyResult<Vec<Complex>> {
        let input = StateVector::new(amplitudes).map_err(py_err)?;
        let (out, _) = run(&self.inner, &input, &Trace::Off).map_err(py_err)?;
        Ok(out.into_amplitudes())
    }
}

#[pymodule]
fn qfrac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(transform_ids, m)?)?;
    m.add_function(wrap_pyfunction!(base_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(verify_order, m)?)?;
    m.add_function(wrap_pyfunction!(shih_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(qfrin_matrix, m)?)?;
    m.add_class::<PyCircuit>()?;
    Ok(())
}
