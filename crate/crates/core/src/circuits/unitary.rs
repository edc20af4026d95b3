use rayon::prelude::*;

use super::ir::{Circuit, GateOp};
use crate::error::Result;
use crate::linalg::{check_budget, Complex, ComplexMatrix, ONE};

/// Row `r` of the full-register matrix of `op`, as `(column, value)` pairs.
fn embedded_row(op: &GateOp, gate: &ComplexMatrix, num_qubits: usize, r: usize) -> Vec<(usize, Complex)> {
    let bit = |w: usize| 1usize << (num_qubits - 1 - w);
    if !op.controls.iter().all(|&w| r & bit(w) != 0) {
        return vec![(r, ONE)];
    }
    let k = op.targets.len();
    let target_mask: usize = op.targets.iter().map(|&w| bit(w)).sum();
    let row_sub = op.targets.iter().fold(0usize, |acc, &w| (acc << 1) | usize::from(r & bit(w) != 0));
    (0..1usize << k)
        .filter_map(|col_sub| {
            let v = gate[(row_sub, col_sub)];
            if v == Complex::new(0.0, 0.0) {
                return None;
            }
            let mut c = r & !target_mask;
            for (pos, &w) in op.targets.iter().enumerate() {
                if col_sub & (1 << (k - 1 - pos)) != 0 {
                    c |= bit(w);
                }
            }
            Some((c, v))
        })
        .collect()
}

/// The full `2^n x 2^n` unitary of `c`: the product of every op embedded at
/// its wires, later ops on the left.
///
/// This is the slow reference path; it shares no code with the simulator.
pub fn circuit_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    let n = c.num_qubits();
    check_budget(n)?;
    let dim = 1usize << n;
    let mut acc = ComplexMatrix::identity(dim);
    for op in c.ops() {
        let gate = op.target_matrix();
        let rows: Vec<Vec<Complex>> = (0..dim)
            .into_par_iter()
            .map(|r| {
                let mut out = vec![Complex::new(0.0, 0.0); dim];
                for (col, v) in embedded_row(op, &gate, n, r) {
                    for (o, &a) in out.iter_mut().zip(acc.row(col)) {
                        *o += v * a;
                    }
                }
                out
            })
            .collect();
        acc = ComplexMatrix::new(dim, dim, rows.into_iter().flatten().collect())?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::gates::{controlled, NamedGate};
    use crate::linalg::{kron, max_norm_diff};

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(circuit_unitary(&Circuit::new(3)).unwrap(), ComplexMatrix::identity(8));
    }

    #[test]
    fn wire_embedding_is_msb_first() {
        let mut c = Circuit::new(2);
        c.h(1).unwrap();
        let expected = kron(&ComplexMatrix::identity(2), &NamedGate::H.matrix()).unwrap();
        assert!(max_norm_diff(&circuit_unitary(&c).unwrap(), &expected).unwrap() < 1e-15);
    }

    #[test]
    fn cnot_with_msb_control_is_block_matrix() {
        let mut c = Circuit::new(2);
        c.cx(0, 1).unwrap();
        assert_eq!(circuit_unitary(&c).unwrap(), controlled(&NamedGate::X.matrix(), 1).unwrap());
        let mut ch = Circuit::new(2);
        ch.push(GateOp::named(NamedGate::H, vec![1]).with_controls([0])).unwrap();
        assert_eq!(circuit_unitary(&ch).unwrap(), controlled(&NamedGate::H.matrix(), 1).unwrap());
    }

    #[test]
    fn matrix_targets_follow_listed_order() {
        // A 2-qubit payload on reversed wires is conjugated by SWAP.
        let cnot = controlled(&NamedGate::X.matrix(), 1).unwrap();
        let mut c = Circuit::new(2);
        c.push(GateOp::matrix(cnot, vec![1, 0])).unwrap();
        let mut expected = Circuit::new(2);
        expected.cx(1, 0).unwrap();
        assert_eq!(circuit_unitary(&c).unwrap(), circuit_unitary(&expected).unwrap());
    }

    #[test]
    fn budget_enforced() {
        assert!(circuit_unitary(&Circuit::new(40)).is_err());
    }
}
