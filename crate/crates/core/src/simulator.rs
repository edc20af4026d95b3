//! Statevector execution.
//!
//! Gates are applied in place: for every assignment of the untouched wires
//! (with all controls set) the `2^k` amplitudes addressed by the `k` target
//! wires are gathered, multiplied by the gate matrix, and written back.

use std::collections::HashSet;

use crate::circuits::{Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::linalg::{cis, Complex, StateVector};

/// A snapshot taken at a circuit mark.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub label: String,
    pub state: StateVector,
    /// Number of ops applied when the snapshot was taken.
    pub step_index: usize,
}

/// Which marks [`run`] records.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Trace {
    #[default]
    Off,
    All,
    Labels(HashSet<String>),
}

impl Trace {
    pub fn labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Trace::Labels(labels.into_iter().map(Into::into).collect())
    }

    fn wants(&self, label: &str) -> bool {
        match self {
            Trace::Off => false,
            Trace::All => true,
            Trace::Labels(set) => set.contains(label),
        }
    }
}

fn check_op(op: &GateOp, num_qubits: usize) -> Result<()> {
    if op.targets.is_empty() {
        return Err(Error::Validation("gate without targets".into()));
    }
    let mut seen = 0usize;
    for w in op.wires() {
        if w >= num_qubits {
            return Err(Error::Validation(format!("wire {w} out of range for a {num_qubits}-qubit state")));
        }
        if seen & (1 << w) != 0 {
            return Err(Error::Validation(format!("wire {w} used twice in one gate")));
        }
        seen |= 1 << w;
    }
    Ok(())
}

/// Applies `op` to `state` in place.
pub fn apply_gate_mut(state: &mut StateVector, op: &GateOp) -> Result<()> {
    let n = state.num_qubits();
    check_op(op, n)?;
    let bit = |w: usize| 1usize << (n - 1 - w);
    let control_mask: usize = op.controls.iter().map(|&w| bit(w)).sum();
    let amps = state.amplitudes_mut();

    // Diagonal phase fast path: only the |1> target amplitudes change.
    if let GateKind::Phase(phi) = op.kind {
        let mask = control_mask | bit(op.targets[0]);
        let z = cis(phi);
        for (i, a) in amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= z;
            }
        }
        return Ok(());
    }

    let gate = op.target_matrix();
    let k = op.targets.len();
    let dim_k = 1usize << k;
    if gate.rows() != dim_k {
        return Err(Error::Validation(format!("{}x{} gate on {k} targets", gate.rows(), gate.cols())));
    }
    // offsets[t] sets the target bits for sub-index t (first target = high bit)
    let offsets: Vec<usize> = (0..dim_k)
        .map(|t| {
            op.targets.iter().enumerate().filter(|(pos, _)| t & (1 << (k - 1 - pos)) != 0).map(|(_, &w)| bit(w)).sum()
        })
        .collect();
    let fixed_mask = control_mask | offsets[dim_k - 1];
    let free_bits: Vec<usize> = (0..n).map(|b| 1usize << b).filter(|m| fixed_mask & m == 0).collect();

    let mut buf = vec![Complex::new(0.0, 0.0); dim_k];
    for r in 0..1usize << free_bits.len() {
        let mut base = control_mask;
        for (i, &m) in free_bits.iter().enumerate() {
            if r & (1 << i) != 0 {
                base |= m;
            }
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            amps[base | off] = gate.row(row).iter().zip(&buf).map(|(g, a)| g * a).sum();
        }
    }
    Ok(())
}

/// Applies `op` to a copy of `state`.
pub fn apply_gate(state: &StateVector, op: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    apply_gate_mut(&mut out, op)?;
    Ok(out)
}

/// Runs `c` on `input`, recording the state at every mark selected by `trace`.
pub fn run(c: &Circuit, input: &StateVector, trace: &Trace) -> Result<(StateVector, Vec<TraceRecord>)> {
    if input.num_qubits() != c.num_qubits() {
        return Err(Error::Validation(format!(
            "{}-qubit input for a {}-qubit circuit",
            input.num_qubits(),
            c.num_qubits()
        )));
    }
    let mut state = input.clone();
    let mut records = Vec::new();
    let mut marks = c.marks().iter().peekable();
    for step in 0..=c.len() {
        while let Some((at, label)) = marks.next_if(|(at, _)| *at == step) {
            if trace.wants(label) {
                records.push(TraceRecord { label: label.clone(), state: state.clone(), step_index: *at });
            }
        }
        if let Some(op) = c.ops().get(step) {
            apply_gate_mut(&mut state, op)?;
        }
    }
    Ok((state, records))
}

/// Probability that the top `n` wires read `0...0`.
pub fn ancilla_restoration_probability(state: &StateVector, n: usize) -> Result<f64> {
    if n > state.num_qubits() {
        return Err(Error::Validation(format!("{n} ancillas in a {}-qubit state", state.num_qubits())));
    }
    let block = 1usize << (state.num_qubits() - n);
    Ok(state.amplitudes()[..block].iter().map(|z| z.norm_sqr()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::NamedGate;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn hadamard_on_zero() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &GateOp::named(NamedGate::H, vec![0])).unwrap();
        let expected = StateVector::new(vec![Complex::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        assert!(s.max_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn cnot_with_msb_control() {
        let op = GateOp::named(NamedGate::X, vec![1]).with_controls([0]);
        let s = apply_gate(&StateVector::basis(2, 0b10).unwrap(), &op).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11).unwrap());
        let s = apply_gate(&StateVector::basis(2, 0b01).unwrap(), &op).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b01).unwrap());
    }

    #[test]
    fn phase_on_one() {
        let s = apply_gate(&StateVector::basis(1, 1).unwrap(), &GateOp::phase(0.4, 0)).unwrap();
        assert!((s.amplitudes()[1] - cis(0.4)).norm() < 1e-15);
    }

    #[test]
    fn out_of_range_wire() {
        let err = apply_gate(&StateVector::zero(2).unwrap(), &GateOp::named(NamedGate::H, vec![2]));
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn empty_circuit_leaves_input() {
        let input = StateVector::basis(3, 6).unwrap();
        let (out, trace) = run(&Circuit::new(3), &input, &Trace::All).unwrap();
        assert_eq!(out, input);
        assert!(trace.is_empty());
        assert!(run(&Circuit::new(2), &input, &Trace::Off).is_err());
    }

    #[test]
    fn restoration_probability_cases() {
        let s = StateVector::basis(3, 0b110).unwrap();
        assert_eq!(ancilla_restoration_probability(&s, 2).unwrap(), 0.0);
        let uniform = StateVector::new(vec![Complex::new(0.5, 0.0); 4]).unwrap();
        assert!((ancilla_restoration_probability(&uniform, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_labels_filter() {
        let mut c = Circuit::new(1);
        c.mark("a");
        c.h(0).unwrap();
        c.mark("b");
        let (_, recs) = run(&c, &StateVector::zero(1).unwrap(), &Trace::labels(["b"])).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].label, "b");
        assert_eq!(recs[0].step_index, 1);
    }
}
