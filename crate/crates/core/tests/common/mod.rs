#![allow(dead_code)]

use qfrac::circuits::{u3_matrix, Circuit, GateOp, NamedGate};
use qfrac::linalg::{kron, matmul};
use rand::Rng;

const ONE_QUBIT: [NamedGate; 9] = [
    NamedGate::X,
    NamedGate::Y,
    NamedGate::Z,
    NamedGate::H,
    NamedGate::S,
    NamedGate::Sdg,
    NamedGate::R,
    NamedGate::B,
    NamedGate::Bdg,
];

fn distinct_wires<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut wires: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        wires.swap(i, j);
    }
    wires.truncate(k);
    wires
}

fn random_u3<R: Rng>(rng: &mut R) -> qfrac::linalg::ComplexMatrix {
    let tau = std::f64::consts::TAU;
    u3_matrix(rng.gen_range(0.0..tau), rng.gen_range(0.0..tau), rng.gen_range(0.0..tau))
}

/// A random gate drawn from every kind the IR supports.
pub fn random_op<R: Rng>(rng: &mut R, n: usize) -> GateOp {
    let max_kind = if n >= 3 {
        8
    } else if n == 2 {
        7
    } else {
        3
    };
    match rng.gen_range(0..max_kind) {
        0 => GateOp::named(ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())], distinct_wires(rng, n, 1)),
        1 => GateOp::phase(rng.gen_range(-4.0..4.0), rng.gen_range(0..n)),
        2 => GateOp::matrix(random_u3(rng), distinct_wires(rng, n, 1)),
        3 => {
            let w = distinct_wires(rng, n, 2);
            GateOp::named(NamedGate::X, vec![w[1]]).with_controls([w[0]])
        }
        4 => {
            let w = distinct_wires(rng, n, 2);
            GateOp::phase(rng.gen_range(-4.0..4.0), w[1]).with_controls([w[0]])
        }
        5 => GateOp::named(NamedGate::Swap, distinct_wires(rng, n, 2)),
        6 => {
            let cnot = qfrac::circuits::controlled(&NamedGate::X.matrix(), 1).unwrap();
            let local = kron(&random_u3(rng), &random_u3(rng)).unwrap();
            GateOp::matrix(matmul(&cnot, &local).unwrap(), distinct_wires(rng, n, 2))
        }
        _ => {
            let k = rng.gen_range(3..=n.min(4));
            let w = distinct_wires(rng, n, k);
            let gate = ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())];
            GateOp::named(gate, vec![w[0]]).with_controls(w[1..].iter().copied())
        }
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        c.push(random_op(rng, n)).unwrap();
    }
    c
}
