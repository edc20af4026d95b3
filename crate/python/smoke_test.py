"""Smoke test for the qfrac_py extension module."""

import cmath

import numpy as np

import qfrac_py as qf


def close(a, b, tol=1e-10):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol


def main():
    assert qf.transform_ids() == ["fourier", "hartley", "cst1", "cst4"]

    f = np.asarray(qf.base_matrix("fourier", 2))
    w = cmath.exp(-2j * cmath.pi / 4)
    assert close(f, [[w ** (j * k) / 2 for k in range(4)] for j in range(4)])

    assert qf.verify_order("fourier", 3)[0] == 2
    assert qf.verify_order("hartley", 3)[0] == 1

    c = qf.shih_coefficients(4, 0.5)
    assert abs(sum(c) - 1) < 1e-12

    half = np.asarray(qf.fractional_matrix("fourier", 2, 0.5))
    assert close(half @ half, f)

    circ = qf.Circuit.qfru("fourier", 2, 0.7, gate_level=True)
    block, leakage = circ.data_block()
    assert close(block, qf.fractional_matrix("fourier", 2, 0.7)) and leakage < 1e-10

    qfrin = qf.Circuit.qfrin("hartley", 2, 0.3, gate_level=True)
    back = qf.Circuit.from_qasm(qfrin.to_qasm(), qfrin.control_qubits)
    block, leakage = back.data_block()
    assert close(block, qf.qfrin_matrix("hartley", 2, 0.3)) and leakage < 1e-10

    state = [0j] * (1 << circ.num_qubits)
    state[1] = 1
    out = circ.run(state)
    assert abs(np.linalg.norm(out) - 1) < 1e-12

    try:
        qf.Circuit.qfrin("fourier", 2, 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("fourier is not an involution")

    print("qfrac_py smoke test passed:", repr(circ))


if __name__ == "__main__":
    main()
