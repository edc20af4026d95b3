//! Circuit builders: multiplexed powers, ancilla phase modulation, QFT and
//! the cyclic increment.

use std::f64::consts::PI;

use super::ir::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::linalg::{check_budget, matmul, matrix_power, max_norm_diff, ComplexMatrix, DEFAULT_TOL};

/// Tolerance for the `u^{2^n} = I` check.
pub const ORDER_TOL: f64 = 1e-8;

/// Wire holding ancilla bit `j` (bit `0` least significant) in an `n`-wire
/// ancilla register placed at the top of the circuit.
#[inline]
pub fn ancilla_wire(n: usize, j: usize) -> usize {
    n - 1 - j
}

fn data_qubits_of(u: &ComplexMatrix) -> Result<usize> {
    if !u.is_square() || !u.rows().is_power_of_two() || u.rows() < 2 {
        return Err(Error::Dimension(format!("{}x{} operator is not a multi-qubit gate", u.rows(), u.cols())));
    }
    Ok(u.rows().trailing_zeros() as usize)
}

/// Circuit on `n + q` wires realizing `D_{2^n}(u) = diag(I, u, u^2, ...)`.
///
/// Ancilla bit `j` controls `u^{2^j}` on the data wires `n..n+q`. Requires
/// `u^{2^n} = I` to within [`ORDER_TOL`] whenever `n >= 1`.
pub fn multiplexed_powers(u: &ComplexMatrix, n: usize) -> Result<Circuit> {
    let q = data_qubits_of(u)?;
    check_budget(n + q)?;
    let dev = u.unitarity_deviation();
    if dev > DEFAULT_TOL {
        return Err(Error::Validation(format!("operator is not unitary (deviation {dev:.3e})")));
    }
    let mut c = Circuit::new(n + q);
    if n == 0 {
        return Ok(c);
    }
    let order = 1usize << n;
    let deviation = max_norm_diff(&matrix_power(u, order as i64)?, &ComplexMatrix::identity(u.rows()))?;
    if deviation > ORDER_TOL {
        return Err(Error::NotDyadicOrder { order, deviation });
    }
    let data: Vec<usize> = (n..n + q).collect();
    let mut power = u.clone();
    for j in 0..n {
        if j > 0 {
            power = matmul(&power, &power)?;
        }
        c.push(GateOp::matrix(power.clone(), data.clone()).with_controls([ancilla_wire(n, j)]))?;
    }
    Ok(c)
}

/// Like [`multiplexed_powers`], but each `u^{2^j}` is `2^j` repetitions of
/// the gate-level `body`, every gate picking up the ancilla control. The
/// body's wires land on `n..n + body.num_qubits()`. No order check.
pub fn multiplexed_circuit_powers(body: &Circuit, n: usize) -> Result<Circuit> {
    let width = n + body.num_qubits();
    check_budget(width)?;
    let map: Vec<usize> = (n..width).collect();
    let mut c = Circuit::new(width);
    for j in 0..n {
        let controlled = body.controlled_on(width, &[ancilla_wire(n, j)], &map)?;
        for _ in 0..(1usize << j) {
            c.append_at(&controlled, 0)?;
        }
    }
    Ok(c)
}

/// The diagonal ancilla modulation `diag(1, w^α, w^{2α}, ...)` with
/// `w = e^{iθ₀}`: ancilla bit `j` gets `P(2^j α θ₀)`.
pub fn phase_block(n: usize, alpha: f64, theta0: f64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Domain("phase block needs at least one ancilla".into()));
    }
    check_budget(n)?;
    let mut c = Circuit::new(n);
    for j in (0..n).rev() {
        c.p((1u64 << j) as f64 * alpha * theta0, ancilla_wire(n, j))?;
    }
    Ok(c)
}

/// `2^n`-point QFT with kernel `e^{-2πi jk / 2^n} / sqrt(2^n)`; `inverse`
/// flips the kernel sign. Hadamards and controlled phases, then the
/// bit-reversal swaps.
pub fn qft_circuit(n: usize, inverse: bool) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Domain("QFT needs at least one qubit".into()));
    }
    check_budget(n)?;
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut c = Circuit::new(n);
    for i in 0..n {
        c.h(i)?;
        for j in 1..n - i {
            c.cp(sign * 2.0 * PI / (1u64 << (j + 1)) as f64, i + j, i)?;
        }
    }
    for i in 0..n / 2 {
        c.swap(i, n - 1 - i)?;
    }
    Ok(c)
}

/// `|x> -> |x + 1 mod 2^n>` as a cascade of multi-controlled X gates, most
/// significant bit first.
pub fn increment_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::Domain("increment needs at least one qubit".into()));
    }
    check_budget(n)?;
    let mut c = Circuit::new(n);
    for bit in (0..n).rev() {
        let controls: Vec<usize> = (0..bit).map(|b| n - 1 - b).collect();
        c.mcx(&controls, n - 1 - bit)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::circuit_unitary;
    use crate::linalg::{cis, Complex};

    /// Direct kernel evaluation of the DFT, independent of the circuit.
    fn dft_oracle(n: usize, sign: f64) -> ComplexMatrix {
        let dim = 1usize << n;
        let norm = 1.0 / (dim as f64).sqrt();
        ComplexMatrix::from_fn(dim, dim, |j, k| cis(sign * 2.0 * PI * ((j * k) % dim) as f64 / dim as f64) * norm)
    }

    #[test]
    fn qft_matches_kernel() {
        for n in 1..=5 {
            let f = circuit_unitary(&qft_circuit(n, false).unwrap()).unwrap();
            assert!(max_norm_diff(&f, &dft_oracle(n, -1.0)).unwrap() < 1e-10, "n={n}");
            let fi = circuit_unitary(&qft_circuit(n, true).unwrap()).unwrap();
            assert!(max_norm_diff(&fi, &dft_oracle(n, 1.0)).unwrap() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn qft_two_qubits_explicit() {
        let f = circuit_unitary(&qft_circuit(2, false).unwrap()).unwrap();
        let i = Complex::i();
        let o = Complex::new(1.0, 0.0);
        let expected = ComplexMatrix::from_rows([[o, o, o, o], [o, -i, -o, i], [o, -o, o, -o], [o, i, -o, -i]])
            .scale(Complex::new(0.5, 0.0));
        assert!(max_norm_diff(&f, &expected).unwrap() < 1e-12);
        let h = circuit_unitary(&qft_circuit(1, false).unwrap()).unwrap();
        assert!(max_norm_diff(&h, &crate::circuits::NamedGate::H.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn increment_is_cyclic_shift() {
        for n in 1..=4 {
            let u = circuit_unitary(&increment_circuit(n).unwrap()).unwrap();
            let dim = 1 << n;
            let expected = ComplexMatrix::from_fn(dim, dim, |r, c| {
                if r == (c + 1) % dim {
                    Complex::new(1.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            });
            assert_eq!(u, expected, "n={n}");
        }
    }

    #[test]
    fn phase_block_diagonal() {
        let (alpha, theta0) = (0.37, -PI / 2.0);
        let u = circuit_unitary(&phase_block(2, alpha, theta0).unwrap()).unwrap();
        for k in 0..4 {
            assert!((u[(k, k)] - cis(k as f64 * alpha * theta0)).norm() < 1e-12);
        }
        let z = circuit_unitary(&phase_block(1, 1.0, -PI).unwrap()).unwrap();
        assert!(max_norm_diff(&z, &crate::circuits::NamedGate::Z.matrix()).unwrap() < 1e-15);
        let id = circuit_unitary(&phase_block(3, 0.0, 1.3).unwrap()).unwrap();
        assert_eq!(id, ComplexMatrix::identity(8));
    }

    #[test]
    fn multiplexed_order_check() {
        let f = dft_oracle(2, -1.0);
        assert!(matches!(multiplexed_powers(&f, 1), Err(Error::NotDyadicOrder { order: 2, .. })));
        assert!(multiplexed_powers(&f, 2).is_ok());
        assert!(multiplexed_powers(&f, 0).unwrap().is_empty());
    }
}
