//! Shih-type fractional powers of dyadic-order unitaries.
//!
//! For `U^N = I` (`N = 2^n`) the fractional operator is
//!
//! ```text
//! FrU(α) = Σ_{k<N} c_k(α) U^k,    c_k(α) = (1/N) Σ_{m<N} w^{m(α-k)},   w = e^{-2πi/N}
//! ```
//!
//! and the ancilla circuit producing it on `|0...0>_n ⊗ |u>` is
//!
//! ```text
//! (H^{⊗n} ⊗ I) · D(U⁻¹) · (F_n D(w^α) F_n⁻¹ ⊗ I) · D(U) · (H^{⊗n} ⊗ I)
//! ```
//!
//! with `D(V) = diag(I, V, ..., V^{N-1})` multiplexed on the ancillas. The
//! ancilla register ends in `|0...0>` exactly, so the data block of the
//! circuit unitary is `FrU(α)` with zero leakage.

use std::f64::consts::PI;

use crate::circuits::{
    multiplexed_circuit_powers, multiplexed_powers, phase_block, qft_circuit, Circuit, GateOp, NamedGate, ORDER_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{adjoint, check_budget, cis, matmul, matrix_power, max_norm_diff, Complex, ComplexMatrix};
use crate::transforms::{BaseCircuit, BaseTransform};

/// The interpolation weights `c_k(α) = <v_α, v̄_k>`, `k = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShihCoefficients {
    pub order: usize,
    pub alpha: f64,
    pub weights: Vec<Complex>,
}

impl ShihCoefficients {
    /// `α mod N`, for display only.
    pub fn reduced_alpha(&self) -> f64 {
        self.alpha.rem_euclid(self.order as f64)
    }

    /// `Σ_k |c_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.weights.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn sum(&self) -> Complex {
        self.weights.iter().sum()
    }
}

/// `c_k(α) = (1/N) Σ_m e^{-2πi m(α-k)/N}`. `N` must be a power of two `>= 2`.
pub fn shih_coefficients(order: usize, alpha: f64) -> Result<ShihCoefficients> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::Domain(format!("order {order} is not a power of two >= 2")));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain("alpha must be finite".into()));
    }
    let big_n = order as f64;
    let weights = (0..order)
        .map(|k| {
            let s: Complex = (0..order).map(|m| cis(-2.0 * PI * m as f64 * (alpha - k as f64) / big_n)).sum();
            s / big_n
        })
        .collect();
    Ok(ShihCoefficients { order, alpha, weights })
}

/// `Σ_k c_k(α) U^k` for a `U` with `U^{2^order_exponent} = I` (checked).
pub fn fractional_operator(u: &ComplexMatrix, order_exponent: usize, alpha: f64) -> Result<ComplexMatrix> {
    if order_exponent == 0 {
        return Err(Error::Domain("order exponent must be at least 1".into()));
    }
    let order = 1usize << order_exponent;
    let id = ComplexMatrix::identity(u.rows());
    let deviation = max_norm_diff(&matrix_power(u, order as i64)?, &id)?;
    if deviation > ORDER_TOL {
        return Err(Error::NotDyadicOrder { order, deviation });
    }
    let coeffs = shih_coefficients(order, alpha)?;
    let mut acc = ComplexMatrix::zeros(u.rows(), u.cols());
    let mut power = id;
    for (k, &c) in coeffs.weights.iter().enumerate() {
        if k > 0 {
            power = matmul(&power, u)?;
        }
        acc = acc.add_scaled(&power, c)?;
    }
    Ok(acc)
}

/// How the controlled powers of the base operator enter the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Realization {
    /// Controlled matrix gates carrying `U^{2^j}`.
    #[default]
    Dense,
    /// Repetitions of the base transform's own gate-level circuit.
    GateLevel,
}

/// One fractional-transform instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSpec {
    pub base: BaseTransform,
    /// `n`, with `2^n` the order of the base.
    pub ancillas: usize,
    pub data_qubits: usize,
    pub alpha: f64,
    /// `-2π / 2^n`.
    pub theta0: f64,
    pub realization: Realization,
}

impl FractionalSpec {
    pub fn new(base: BaseTransform, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        let ancillas = base.order_exponent;
        if ancillas == 0 {
            return Err(Error::Domain("base operator must have order at least 2".into()));
        }
        check_budget(ancillas + base.data_qubits)?;
        Ok(Self {
            ancillas,
            data_qubits: base.data_qubits,
            alpha,
            theta0: -2.0 * PI / (1u64 << ancillas) as f64,
            realization: Realization::Dense,
            base,
        })
    }

    pub fn with_realization(mut self, realization: Realization) -> Result<Self> {
        if realization == Realization::GateLevel {
            let bc = self
                .base
                .circuit
                .as_ref()
                .ok_or_else(|| Error::Domain(format!("{} has no gate-level circuit", self.base.id)))?;
            check_budget(self.ancillas + bc.work_qubits + self.data_qubits)?;
        }
        self.realization = realization;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        1 << self.ancillas
    }

    /// Scratch wires of the base circuit (gate-level realization only).
    pub fn work_qubits(&self) -> usize {
        match (self.realization, &self.base.circuit) {
            (Realization::GateLevel, Some(bc)) => bc.work_qubits,
            _ => 0,
        }
    }

    /// Wires above the data register that must end in `|0...0>`.
    pub fn control_qubits(&self) -> usize {
        self.ancillas + self.work_qubits()
    }

    pub fn total_qubits(&self) -> usize {
        self.control_qubits() + self.data_qubits
    }

    pub fn coefficients(&self) -> Result<ShihCoefficients> {
        shih_coefficients(self.order(), self.alpha)
    }
}

/// Dense `FrU(α)` on the data register.
pub fn fractional_oracle(spec: &FractionalSpec) -> Result<ComplexMatrix> {
    fractional_operator(&spec.base.dense, spec.ancillas, spec.alpha)
}

/// `D(U)` (or `D(U⁻¹)` when `inverse`) on the ancillas `0..n` and the
/// work/data wires below them.
fn multiplexed_stage(spec: &FractionalSpec, inverse: bool) -> Result<Circuit> {
    let n = spec.ancillas;
    match spec.realization {
        Realization::Dense => {
            let u = if inverse { adjoint(&spec.base.dense) } else { spec.base.dense.clone() };
            multiplexed_powers(&u, n)
        }
        Realization::GateLevel => {
            let BaseCircuit { circuit, .. } = spec
                .base
                .circuit
                .as_ref()
                .ok_or_else(|| Error::Domain(format!("{} has no gate-level circuit", spec.base.id)))?;
            let body = if inverse { circuit.inverse() } else { circuit.clone() };
            multiplexed_circuit_powers(&body, n)
        }
    }
}

/// The generalized fractional circuit on `n` ancillas (top wires), any
/// scratch wires of the base circuit, then the data wires. Stage boundaries
/// are marked `psi0` ... `psi7`.
pub fn build_qfru_circuit(spec: &FractionalSpec) -> Result<Circuit> {
    let n = spec.ancillas;
    let width = spec.total_qubits();
    check_budget(width)?;
    let mut c = Circuit::new(width);
    c.mark("psi0");
    for a in 0..n {
        c.h(a)?;
    }
    c.mark("psi1");
    c.append(&multiplexed_stage(spec, false)?)?;
    c.mark("psi2");
    c.append(&qft_circuit(n, true)?)?;
    c.mark("psi3");
    c.append(&phase_block(n, spec.alpha, spec.theta0)?)?;
    c.mark("psi4");
    c.append(&qft_circuit(n, false)?)?;
    c.mark("psi5");
    c.append(&multiplexed_stage(spec, true)?)?;
    c.mark("psi6");
    for a in 0..n {
        c.h(a)?;
    }
    c.mark("psi7");
    Ok(c)
}

/// Single-ancilla circuit for an involution: on `|0>|u>` it produces
/// `|0> [((1+e^{-iπα})/2) I + ((1-e^{-iπα})/2) U] |u>`.
pub fn build_qfrin_circuit(base: &BaseTransform, alpha: f64) -> Result<Circuit> {
    build_qfrin_circuit_with(base, alpha, Realization::Dense)
}

pub fn build_qfrin_circuit_with(base: &BaseTransform, alpha: f64, realization: Realization) -> Result<Circuit> {
    if base.order_exponent != 1 {
        return Err(Error::Domain(format!("{} has order {}, not an involution", base.id, base.order())));
    }
    if !alpha.is_finite() {
        return Err(Error::Domain("alpha must be finite".into()));
    }
    let (forward, backward, work) = match realization {
        Realization::Dense => {
            let q = base.data_qubits;
            let data: Vec<usize> = (1..=q).collect();
            let mut f = Circuit::new(q + 1);
            f.push(GateOp::matrix(base.dense.clone(), data.clone()).with_controls([0]))?;
            let mut b = Circuit::new(q + 1);
            b.push(GateOp::matrix(adjoint(&base.dense), data).with_controls([0]))?;
            (f, b, 0)
        }
        Realization::GateLevel => {
            let bc =
                base.circuit.as_ref().ok_or_else(|| Error::Domain(format!("{} has no gate-level circuit", base.id)))?;
            let width = 1 + bc.circuit.num_qubits();
            let map: Vec<usize> = (1..width).collect();
            (
                bc.circuit.controlled_on(width, &[0], &map)?,
                bc.circuit.inverse().controlled_on(width, &[0], &map)?,
                bc.work_qubits,
            )
        }
    };
    let width = 1 + work + base.data_qubits;
    check_budget(width)?;
    let mut c = Circuit::new(width);
    c.mark("psi0");
    c.h(0)?;
    c.append(&forward)?;
    // single-qubit QFT and its inverse are both H
    c.h(0)?;
    c.push(GateOp::phase(-PI * alpha, 0))?;
    c.h(0)?;
    c.append(&backward)?;
    c.push(GateOp::named(NamedGate::H, vec![0]))?;
    c.mark("psi1");
    Ok(c)
}

/// `((1+e^{-iπα})/2) I + ((1-e^{-iπα})/2) U`.
pub fn qfrin_closed_form(u: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    let e = cis(-PI * alpha);
    let id = ComplexMatrix::identity(u.rows());
    id.scale((1.0 + e) / 2.0).add_scaled(u, (1.0 - e) / 2.0)
}

/// The ancilla-`|0...0>` block of a full circuit unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct DataBlock {
    pub block: ComplexMatrix,
    /// Largest norm, over the block's input columns, of the output amplitude
    /// that lands outside the ancilla-`|0...0>` subspace.
    pub leakage: f64,
}

/// Splits `full` (on `n + q` qubits, ancillas on top) into its
/// ancilla-`|0...0>` to ancilla-`|0...0>` block and the leakage out of it.
pub fn extract_data_block(full: &ComplexMatrix, n: usize, q: usize) -> Result<DataBlock> {
    let total = n + q;
    if total >= usize::BITS as usize || full.rows() != 1 << total || full.cols() != 1 << total {
        return Err(Error::Dimension(format!("{}x{} matrix is not on {n} + {q} qubits", full.rows(), full.cols())));
    }
    let dim = 1usize << q;
    let block = full.submatrix(0, 0, dim, dim)?;
    let leakage = (0..dim)
        .map(|col| (dim..full.rows()).map(|row| full[(row, col)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    Ok(DataBlock { block, leakage })
}
