//! Gate constants: Pauli/Clifford gates, phase gates, the Hartley `R` gate,
//! the cosine-sine basis change `B`, and the type-IV phase gates.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{cis, Complex, ComplexMatrix, DEFAULT_TOL, ONE, ZERO};

/// Fixed single- and two-qubit gates the circuit IR knows by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    /// `R = H S H`.
    R,
    Rdg,
    /// `B = H S`.
    B,
    /// `B† = P(-π/2) H`.
    Bdg,
    Swap,
}

impl NamedGate {
    pub fn arity(self) -> usize {
        match self {
            NamedGate::Swap => 2,
            _ => 1,
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let i = Complex::i();
        let h = FRAC_1_SQRT_2;
        match self {
            NamedGate::X => ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]),
            NamedGate::Y => ComplexMatrix::from_rows([[ZERO, -i], [i, ZERO]]),
            NamedGate::Z => ComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, -1.0]]),
            NamedGate::H => ComplexMatrix::from_real_rows([[h, h], [h, -h]]),
            NamedGate::S => ComplexMatrix::diagonal(&[ONE, i]),
            NamedGate::Sdg => ComplexMatrix::diagonal(&[ONE, -i]),
            NamedGate::R => {
                let (p, m) = (Complex::new(0.5, 0.5), Complex::new(0.5, -0.5));
                ComplexMatrix::from_rows([[p, m], [m, p]])
            }
            NamedGate::Rdg => {
                let (p, m) = (Complex::new(0.5, 0.5), Complex::new(0.5, -0.5));
                ComplexMatrix::from_rows([[m, p], [p, m]])
            }
            NamedGate::B => {
                let s = Complex::new(h, 0.0);
                ComplexMatrix::from_rows([[s, s * i], [s, -s * i]])
            }
            NamedGate::Bdg => {
                let s = Complex::new(h, 0.0);
                ComplexMatrix::from_rows([[s, s], [-s * i, s * i]])
            }
            NamedGate::Swap => ComplexMatrix::from_real_rows([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]),
        }
    }

    pub fn inverse(self) -> NamedGate {
        match self {
            NamedGate::S => NamedGate::Sdg,
            NamedGate::Sdg => NamedGate::S,
            NamedGate::R => NamedGate::Rdg,
            NamedGate::Rdg => NamedGate::R,
            NamedGate::B => NamedGate::Bdg,
            NamedGate::Bdg => NamedGate::B,
            g => g,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            NamedGate::X => "x",
            NamedGate::Y => "y",
            NamedGate::Z => "z",
            NamedGate::H => "h",
            NamedGate::S => "s",
            NamedGate::Sdg => "sdg",
            NamedGate::R => "r",
            NamedGate::Rdg => "rdg",
            NamedGate::B => "b",
            NamedGate::Bdg => "bdg",
            NamedGate::Swap => "swap",
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// The phase gate `P(φ) = diag(1, e^{iφ})`.
pub fn phase_matrix(phi: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, cis(phi)])
}

/// A named gate together with its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GateConstant {
    pub name: String,
    pub matrix: ComplexMatrix,
}

/// Looks up one of `X, Y, Z, H, S, P, R, B, Bdag` (case-insensitive). `P`
/// requires an angle; the others ignore `param`.
pub fn standard_gate(name: &str, param: Option<f64>) -> Result<GateConstant> {
    let key = name.trim().to_ascii_uppercase();
    let matrix = match key.as_str() {
        "X" => NamedGate::X.matrix(),
        "Y" => NamedGate::Y.matrix(),
        "Z" => NamedGate::Z.matrix(),
        "H" => NamedGate::H.matrix(),
        "S" => NamedGate::S.matrix(),
        "R" => NamedGate::R.matrix(),
        "B" => NamedGate::B.matrix(),
        "BDAG" | "BDG" | "B†" => NamedGate::Bdg.matrix(),
        "P" => {
            let phi = param.ok_or_else(|| Error::Domain("phase gate P needs an angle".into()))?;
            if !phi.is_finite() {
                return Err(Error::Domain("phase angle must be finite".into()));
            }
            phase_matrix(phi)
        }
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Ok(GateConstant { name: key, matrix })
}

/// The gates of the type-IV cosine-sine circuit for `N = 2^n`:
///
/// * `L_j = P(π 2^{j-1} / N)` for `1 <= j <= n`
/// * `K_j = X L_j X`
/// * `C = P(π / 2N)`
/// * `M = e^{-iπ/4N} I`
pub fn qct4_gate(name: &str, j: Option<usize>, n: usize) -> Result<GateConstant> {
    if n == 0 || n >= 62 {
        return Err(Error::Domain(format!("size exponent n = {n} out of range")));
    }
    let big_n = (1u64 << n) as f64;
    let level = |j: Option<usize>| -> Result<usize> {
        match j {
            Some(j) if (1..=n).contains(&j) => Ok(j),
            Some(j) => Err(Error::Domain(format!("level j = {j} outside 1..={n}"))),
            None => Err(Error::Domain("gate needs a level index j".into())),
        }
    };
    let key = name.trim().to_ascii_uppercase();
    let matrix = match key.as_str() {
        "L" => {
            let j = level(j)?;
            phase_matrix(PI * (1u64 << (j - 1)) as f64 / big_n)
        }
        "K" => {
            let j = level(j)?;
            ComplexMatrix::diagonal(&[cis(PI * (1u64 << (j - 1)) as f64 / big_n), ONE])
        }
        "C" => phase_matrix(PI / (2.0 * big_n)),
        "M" => ComplexMatrix::identity(2).scale(cis(-PI / (4.0 * big_n))),
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    let name = match j {
        Some(j) if matches!(key.as_str(), "L" | "K") => format!("{key}{j}"),
        _ => key,
    };
    Ok(GateConstant { name, matrix })
}

/// Block-diagonal `diag(I, ..., I, gate)`: `gate` acts when all
/// `num_controls` control qubits (the most significant ones) are `|1>`.
pub fn controlled(gate: &ComplexMatrix, num_controls: usize) -> Result<ComplexMatrix> {
    if !gate.is_square() || !gate.is_unitary(DEFAULT_TOL) {
        return Err(Error::Validation("controlled gate payload must be unitary".into()));
    }
    let d = gate.rows();
    let blocks = 1usize
        .checked_shl(num_controls as u32)
        .filter(|b| b.checked_mul(d).is_some())
        .ok_or_else(|| Error::Size { qubits: num_controls, budget: crate::linalg::qubit_budget() })?;
    crate::linalg::check_budget(crate::linalg::qubits_for_dim(blocks * d))?;
    let mut m = ComplexMatrix::identity(blocks * d);
    let off = (blocks - 1) * d;
    for i in 0..d {
        for j in 0..d {
            m[(off + i, off + j)] = gate[(i, j)];
        }
    }
    Ok(m)
}
