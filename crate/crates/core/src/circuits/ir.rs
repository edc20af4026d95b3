//! Circuit intermediate representation.
//!
//! Wires are numbered from the top of the diagram: wire `0` is the most
//! significant qubit of the register. A gate's `targets` are listed from its
//! most significant input to its least significant one, so a matrix payload
//! acting on `targets = [a, b]` sees wire `a` as its high bit.

use super::gates::NamedGate;
use crate::error::{Error, Result};
use crate::linalg::{adjoint, ComplexMatrix, DEFAULT_TOL};

use super::gates::phase_matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Named(NamedGate),
    /// `P(φ) = diag(1, e^{iφ})`.
    Phase(f64),
    /// Arbitrary unitary on `targets.len()` qubits.
    Matrix(ComplexMatrix),
}

/// One gate application: `kind` acts on `targets` when every wire in
/// `controls` is `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn named(gate: NamedGate, targets: Vec<usize>) -> Self {
        Self { kind: GateKind::Named(gate), targets, controls: Vec::new() }
    }

    pub fn phase(phi: f64, target: usize) -> Self {
        Self { kind: GateKind::Phase(phi), targets: vec![target], controls: Vec::new() }
    }

    pub fn matrix(m: ComplexMatrix, targets: Vec<usize>) -> Self {
        Self { kind: GateKind::Matrix(m), targets, controls: Vec::new() }
    }

    pub fn with_controls(mut self, controls: impl IntoIterator<Item = usize>) -> Self {
        self.controls.extend(controls);
        self
    }

    /// The target-only matrix (controls excluded).
    pub fn target_matrix(&self) -> ComplexMatrix {
        match &self.kind {
            GateKind::Named(g) => g.matrix(),
            GateKind::Phase(phi) => phase_matrix(*phi),
            GateKind::Matrix(m) => m.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            GateKind::Named(g) => GateKind::Named(g.inverse()),
            GateKind::Phase(phi) => GateKind::Phase(-phi),
            GateKind::Matrix(m) => GateKind::Matrix(adjoint(m)),
        };
        Self { kind, targets: self.targets.clone(), controls: self.controls.clone() }
    }

    /// Total number of wires touched.
    pub fn width(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(&self.targets).copied()
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::Validation("gate without targets".into()));
        }
        let mut seen = vec![false; num_qubits];
        for w in self.wires() {
            if w >= num_qubits {
                return Err(Error::Validation(format!("wire {w} out of range for a {num_qubits}-qubit register")));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::Validation(format!("wire {w} used twice in one gate")));
            }
        }
        match &self.kind {
            GateKind::Named(g) if g.arity() != self.targets.len() => Err(Error::Validation(format!(
                "{g} acts on {} qubit(s), got {} targets",
                g.arity(),
                self.targets.len()
            ))),
            GateKind::Phase(phi) if !phi.is_finite() => Err(Error::Validation("non-finite phase".into())),
            GateKind::Phase(_) if self.targets.len() != 1 => {
                Err(Error::Validation("phase gate takes exactly one target".into()))
            }
            GateKind::Matrix(m) => {
                let dim = 1usize << self.targets.len();
                if m.rows() != dim || m.cols() != dim {
                    return Err(Error::Validation(format!(
                        "{}x{} payload on {} targets",
                        m.rows(),
                        m.cols(),
                        self.targets.len()
                    )));
                }
                let dev = m.unitarity_deviation();
                if dev > DEFAULT_TOL {
                    return Err(Error::Validation(format!("matrix payload not unitary (deviation {dev:.3e})")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// An ordered list of gate applications on a register of `num_qubits` wires.
///
/// `marks` label positions in the op list (`(op_index, label)`); the
/// simulator can snapshot the state at each of them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    marks: Vec<(usize, String)>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, ops: Vec::new(), marks: Vec::new() }
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn marks(&self) -> &[(usize, String)] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Labels the current end of the op list.
    pub fn mark(&mut self, label: impl Into<String>) -> &mut Self {
        self.marks.push((self.ops.len(), label.into()));
        self
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::named(NamedGate::H, vec![q]))
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(GateOp::named(NamedGate::X, vec![q]))
    }

    pub fn p(&mut self, phi: f64, q: usize) -> Result<&mut Self> {
        self.push(GateOp::phase(phi, q))
    }

    pub fn cp(&mut self, phi: f64, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateOp::phase(phi, target).with_controls([control]))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(GateOp::named(NamedGate::X, vec![target]).with_controls([control]))
    }

    pub fn mcx(&mut self, controls: &[usize], target: usize) -> Result<&mut Self> {
        self.push(GateOp::named(NamedGate::X, vec![target]).with_controls(controls.iter().copied()))
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(GateOp::named(NamedGate::Swap, vec![a, b]))
    }

    /// Appends every op of `other`, mapping its wire `i` to `wire_map[i]`.
    /// Marks of `other` are not carried over.
    pub fn append_mapped(&mut self, other: &Circuit, wire_map: &[usize]) -> Result<&mut Self> {
        if wire_map.len() != other.num_qubits {
            return Err(Error::Validation(format!(
                "wire map of length {} for a {}-qubit circuit",
                wire_map.len(),
                other.num_qubits
            )));
        }
        for op in &other.ops {
            let mapped = GateOp {
                kind: op.kind.clone(),
                targets: op.targets.iter().map(|&w| wire_map[w]).collect(),
                controls: op.controls.iter().map(|&w| wire_map[w]).collect(),
            };
            self.push(mapped)?;
        }
        Ok(self)
    }

    /// Appends `other` with its wires shifted down by `offset`.
    pub fn append_at(&mut self, other: &Circuit, offset: usize) -> Result<&mut Self> {
        let map: Vec<usize> = (offset..offset + other.num_qubits).collect();
        self.append_mapped(other, &map)
    }

    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        self.append_at(other, 0)
    }

    /// The adjoint circuit: ops reversed and individually inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            marks: Vec::new(),
        }
    }

    /// Every op gains the extra control wires in `controls`; the result lives
    /// on `num_qubits` wires with this circuit's wire `i` mapped to `wire_map[i]`.
    pub fn controlled_on(&self, num_qubits: usize, controls: &[usize], wire_map: &[usize]) -> Result<Circuit> {
        let mut out = Circuit::new(num_qubits);
        for op in &self.ops {
            let mapped = GateOp {
                kind: op.kind.clone(),
                targets: op.targets.iter().map(|&w| wire_map[w]).collect(),
                controls: controls.iter().copied().chain(op.controls.iter().map(|&w| wire_map[w])).collect(),
            };
            out.push(mapped)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_wires() {
        let mut c = Circuit::new(2);
        assert!(c.h(2).is_err());
        assert!(c.cx(1, 1).is_err());
        assert!(c.push(GateOp::named(NamedGate::Swap, vec![0])).is_err());
        let not_unitary = ComplexMatrix::from_real_rows([[1.0, 1.0], [0.0, 1.0]]);
        assert!(c.push(GateOp::matrix(not_unitary, vec![0])).is_err());
        assert!(c.push(GateOp::matrix(ComplexMatrix::identity(4), vec![0])).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn inverse_reverses_and_inverts() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap().p(0.3, 1).unwrap().push(GateOp::named(NamedGate::S, vec![0])).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.ops()[0].kind, GateKind::Named(NamedGate::Sdg));
        assert_eq!(inv.ops()[1].kind, GateKind::Phase(-0.3));
        assert_eq!(inv.ops()[2].kind, GateKind::Named(NamedGate::H));
    }

    #[test]
    fn controlled_on_adds_controls() {
        let mut c = Circuit::new(1);
        c.x(0).unwrap();
        let cc = c.controlled_on(3, &[0], &[2]).unwrap();
        assert_eq!(cc.ops()[0].controls, vec![0]);
        assert_eq!(cc.ops()[0].targets, vec![2]);
    }
}
