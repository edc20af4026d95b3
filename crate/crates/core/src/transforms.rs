//! The dyadic-order base operators: the DFT (order 4), the discrete Hartley
//! transform and the type-I / type-IV cosine-sine blocks (all involutions).
//!
//! All kernels are the orthonormal ones, which makes the three real
//! transforms symmetric and involutory:
//!
//! | id       | qubits  | kernel `(j, k)`                                              |
//! |----------|---------|--------------------------------------------------------------|
//! | fourier  | `q`     | `e^{-2πi jk/N} / √N`, `N = 2^q`                              |
//! | hartley  | `q`     | `cas(2π jk/N) / √N`, `cas = cos + sin`                       |
//! | cst1     | `n + 1` | `DCT-I_{N+1} ⊕ DST-I_{N-1}`, `N = 2^n`                       |
//! | cst4     | `n + 1` | `DCT-IV_N ⊕ DST-IV_N`; the top qubit selects cosine or sine  |
//!
//! `cst1` is what the literature calls QCT-I; it is really a cosine-sine
//! direct sum with no selector qubit, hence the name.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::circuits::{increment_circuit, qft_circuit, Circuit, GateOp, NamedGate, ORDER_TOL};
use crate::error::{Error, Result};
use crate::linalg::{check_budget, cis, matmul, matrix_power, max_norm_diff, Complex, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformId {
    Fourier,
    Hartley,
    Cst1,
    Cst4,
}

impl TransformId {
    pub const ALL: [TransformId; 4] =
        [TransformId::Fourier, TransformId::Hartley, TransformId::Cst1, TransformId::Cst4];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformId::Fourier => "fourier",
            TransformId::Hartley => "hartley",
            TransformId::Cst1 => "cst1",
            TransformId::Cst4 => "cst4",
        }
    }

    /// Builds the transform. `size` is the data-qubit count `q` for
    /// `fourier`/`hartley` and the size exponent `n` (`N = 2^n`, `n + 1`
    /// qubits) for `cst1`/`cst4`.
    pub fn build(self, size: usize) -> Result<BaseTransform> {
        match self {
            TransformId::Fourier => fourier_transform(size),
            TransformId::Hartley => hartley_transform(size),
            TransformId::Cst1 => cst1_transform(size),
            TransformId::Cst4 => cst4_transform(size),
        }
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fourier" => Ok(TransformId::Fourier),
            "hartley" => Ok(TransformId::Hartley),
            "cst1" | "qct1" | "cct1" => Ok(TransformId::Cst1),
            "cst4" | "qct4" | "cct4" => Ok(TransformId::Cst4),
            other => Err(Error::Domain(format!(
                "unknown transform `{other}` (expected one of: fourier, hartley, cst1, cst4)"
            ))),
        }
    }
}

/// A gate-level realization of a base transform. The circuit acts on
/// `work_qubits` scratch wires (at the top) followed by the data wires; with
/// the scratch wires in `|0...0>` the data block equals the dense matrix and
/// the scratch wires come back to `|0...0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCircuit {
    pub circuit: Circuit,
    pub work_qubits: usize,
}

/// A dyadic-order unitary: `dense^{2^order_exponent} = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseTransform {
    pub id: TransformId,
    pub data_qubits: usize,
    pub order_exponent: usize,
    pub dense: ComplexMatrix,
    pub circuit: Option<BaseCircuit>,
}

impl BaseTransform {
    pub fn order(&self) -> usize {
        1 << self.order_exponent
    }

    pub fn dim(&self) -> usize {
        self.dense.rows()
    }
}

fn check_size(q: usize, what: &str) -> Result<()> {
    if q == 0 {
        return Err(Error::Domain(format!("{what} needs a size of at least 1")));
    }
    check_budget(q)
}

/// Dense DFT with kernel `e^{sign·2πi jk/N} / √N` by direct evaluation.
pub fn dft_matrix(q: usize, sign: f64) -> ComplexMatrix {
    let dim = 1usize << q;
    let norm = 1.0 / (dim as f64).sqrt();
    ComplexMatrix::from_fn(dim, dim, |j, k| cis(sign * 2.0 * PI * ((j * k) % dim) as f64 / dim as f64) * norm)
}

/// The `2^q`-point Fourier transform (order 4) with its QFT circuit.
pub fn fourier_transform(q: usize) -> Result<BaseTransform> {
    check_size(q, "fourier")?;
    Ok(BaseTransform {
        id: TransformId::Fourier,
        data_qubits: q,
        order_exponent: 2,
        dense: dft_matrix(q, -1.0),
        circuit: Some(BaseCircuit { circuit: qft_circuit(q, false)?, work_qubits: 0 }),
    })
}

/// Dense `cas(2π jk / N) / √N`.
pub fn hartley_matrix(q: usize) -> ComplexMatrix {
    let dim = 1usize << q;
    let norm = 1.0 / (dim as f64).sqrt();
    ComplexMatrix::from_fn(dim, dim, |j, k| {
        let t = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
        Complex::new((t.cos() + t.sin()) * norm, 0.0)
    })
}

/// Hartley transform circuit with one scratch qubit.
///
/// `DHT = F (a I + b F²)` with `a = (1+i)/2`, `b = (1-i)/2`. `F²` is the
/// involution `|x> -> |-x mod N>`, so the bracket is a single-ancilla
/// fractional power of it: `H, C-F², R, C-F², H` on the scratch wire. `C-F²`
/// is a controlled bitwise NOT followed by a controlled increment.
fn hartley_circuit(q: usize) -> Result<BaseCircuit> {
    let work = 0;
    let data: Vec<usize> = (1..=q).collect();
    let mut negate = Circuit::new(q + 1);
    for &d in &data {
        negate.cx(work, d)?;
    }
    negate.append(&increment_circuit(q)?.controlled_on(q + 1, &[work], &data)?)?;

    let mut c = Circuit::new(q + 1);
    c.append_at(&qft_circuit(q, false)?, 1)?;
    c.h(work)?;
    c.append(&negate)?;
    c.push(GateOp::named(NamedGate::R, vec![work]))?;
    c.append(&negate)?;
    c.h(work)?;
    Ok(BaseCircuit { circuit: c, work_qubits: 1 })
}

/// The `2^q`-point discrete Hartley transform (an involution).
pub fn hartley_transform(q: usize) -> Result<BaseTransform> {
    check_size(q, "hartley")?;
    check_budget(q + 1)?;
    Ok(BaseTransform {
        id: TransformId::Hartley,
        data_qubits: q,
        order_exponent: 1,
        dense: hartley_matrix(q),
        circuit: Some(hartley_circuit(q)?),
    })
}

/// Orthonormal `(N+1)`-point DCT-I.
pub fn dct1_matrix(big_n: usize) -> ComplexMatrix {
    let beta = |j: usize| if j == 0 || j == big_n { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
    let s = (2.0 / big_n as f64).sqrt();
    ComplexMatrix::from_fn(big_n + 1, big_n + 1, |j, k| {
        let v = s * beta(j) * beta(k) * (PI * (j * k) as f64 / big_n as f64).cos();
        Complex::new(v, 0.0)
    })
}

/// Orthonormal `(N-1)`-point DST-I, indices `(j+1)(k+1)`.
pub fn dst1_matrix(big_n: usize) -> ComplexMatrix {
    let s = (2.0 / big_n as f64).sqrt();
    ComplexMatrix::from_fn(big_n - 1, big_n - 1, |j, k| {
        Complex::new(s * (PI * ((j + 1) * (k + 1)) as f64 / big_n as f64).sin(), 0.0)
    })
}

/// Orthonormal `N`-point DCT-IV.
pub fn dct4_matrix(big_n: usize) -> ComplexMatrix {
    let s = (2.0 / big_n as f64).sqrt();
    ComplexMatrix::from_fn(big_n, big_n, |j, k| {
        Complex::new(s * (PI * (j as f64 + 0.5) * (k as f64 + 0.5) / big_n as f64).cos(), 0.0)
    })
}

/// Orthonormal `N`-point DST-IV.
pub fn dst4_matrix(big_n: usize) -> ComplexMatrix {
    let s = (2.0 / big_n as f64).sqrt();
    ComplexMatrix::from_fn(big_n, big_n, |j, k| {
        Complex::new(s * (PI * (j as f64 + 0.5) * (k as f64 + 0.5) / big_n as f64).sin(), 0.0)
    })
}

/// `DCT-I_{N+1} ⊕ DST-I_{N-1}` on `n + 1` qubits, `N = 2^n`.
pub fn cst1_transform(n: usize) -> Result<BaseTransform> {
    check_size(n, "cst1")?;
    check_budget(n + 1)?;
    let big_n = 1usize << n;
    Ok(BaseTransform {
        id: TransformId::Cst1,
        data_qubits: n + 1,
        order_exponent: 1,
        dense: ComplexMatrix::direct_sum(&[&dct1_matrix(big_n), &dst1_matrix(big_n)]),
        circuit: None,
    })
}

/// `DCT-IV_N ⊕ DST-IV_N` on `n + 1` qubits, `N = 2^n`.
pub fn cst4_transform(n: usize) -> Result<BaseTransform> {
    check_size(n, "cst4")?;
    check_budget(n + 1)?;
    let big_n = 1usize << n;
    Ok(BaseTransform {
        id: TransformId::Cst4,
        data_qubits: n + 1,
        order_exponent: 1,
        dense: ComplexMatrix::direct_sum(&[&dct4_matrix(big_n), &dst4_matrix(big_n)]),
        circuit: None,
    })
}

/// Which half of the type-IV block the selector qubit picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Cos,
    Sin,
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cos" => Ok(Selector::Cos),
            "sin" => Ok(Selector::Sin),
            other => Err(Error::Domain(format!("unknown selector `{other}` (expected cos or sin)"))),
        }
    }
}

/// The selector-qubit sector of a `cst4` operator: `C_n^IV` or `S_n^IV`.
pub fn cst4_sector(op: &ComplexMatrix, selector: Selector) -> Result<ComplexMatrix> {
    let half = op.rows() / 2;
    let off = match selector {
        Selector::Cos => 0,
        Selector::Sin => half,
    };
    op.submatrix(off, off, half, half)
}

/// Result of an order check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderReport {
    /// Smallest `n` with `U^{2^n} = I`.
    pub exponent: usize,
    /// `max |U^{2^n} - I|`.
    pub power_deviation: f64,
    /// `max_k |U P_k - λ_k P_k|` over the spectral projectors
    /// `P_k = (1/N) Σ_m λ_k^{-m} U^m` of the `N = 2^n`-th roots `λ_k`.
    pub eigen_residue: f64,
}

/// Eigen-root residue used by [`operator_order`]: how far `U` is from acting
/// as `λ_k` on the range of each root-of-unity projector.
fn root_residue(m: &ComplexMatrix, order: usize) -> Result<f64> {
    let dim = m.rows();
    let mut powers = Vec::with_capacity(order);
    powers.push(ComplexMatrix::identity(dim));
    for p in 1..order {
        powers.push(matmul(&powers[p - 1], m)?);
    }
    let mut worst = 0.0f64;
    for k in 0..order {
        let lambda = cis(2.0 * PI * k as f64 / order as f64);
        let mut proj = ComplexMatrix::zeros(dim, dim);
        for (p, up) in powers.iter().enumerate() {
            proj = proj.add_scaled(up, lambda.powi(-(p as i32)) / order as f64)?;
        }
        let lhs = matmul(m, &proj)?;
        worst = worst.max(max_norm_diff(&lhs, &proj.scale(lambda))?);
    }
    Ok(worst)
}

/// Smallest `n <= max_exponent` with `m^{2^n} = I` (within `1e-8`), plus the
/// root-of-unity eigen residue at that order.
pub fn operator_order(m: &ComplexMatrix, max_exponent: usize) -> Result<OrderReport> {
    if max_exponent > 6 {
        return Err(Error::Domain(format!("max exponent {max_exponent} above 6")));
    }
    if !m.is_square() {
        return Err(Error::Dimension("order of a non-square matrix".into()));
    }
    let id = ComplexMatrix::identity(m.rows());
    let mut power = m.clone();
    let mut last_dev = f64::INFINITY;
    for exponent in 0..=max_exponent {
        if exponent > 0 {
            power = matmul(&power, &power)?;
        }
        let dev = max_norm_diff(&power, &id)?;
        last_dev = dev;
        if dev <= ORDER_TOL {
            let eigen_residue = root_residue(m, 1 << exponent)?;
            return Ok(OrderReport { exponent, power_deviation: dev, eigen_residue });
        }
    }
    Err(Error::NotDyadicOrder { order: 1 << max_exponent, deviation: last_dev })
}

/// [`operator_order`] on a base transform's dense matrix.
pub fn verify_order(t: &BaseTransform, max_exponent: usize) -> Result<OrderReport> {
    operator_order(&t.dense, max_exponent)
}

/// `U^k` for a base transform, `k` reduced into `0..order`.
pub fn transform_power(t: &BaseTransform, k: i64) -> Result<ComplexMatrix> {
    matrix_power(&t.dense, k.rem_euclid(t.order() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::circuit_unitary;
    use crate::linalg::{adjoint, DEFAULT_TOL};

    fn is_involution(m: &ComplexMatrix, tol: f64) -> bool {
        max_norm_diff(&matmul(m, m).unwrap(), &ComplexMatrix::identity(m.rows())).unwrap() <= tol
    }

    #[test]
    fn fourier_small_cases() {
        let f1 = fourier_transform(1).unwrap();
        assert!(max_norm_diff(&f1.dense, &NamedGate::H.matrix()).unwrap() < 1e-15);
        let f3 = fourier_transform(3).unwrap();
        let f4 = matrix_power(&f3.dense, 4).unwrap();
        assert!(max_norm_diff(&f4, &ComplexMatrix::identity(8)).unwrap() < 1e-10);
    }

    #[test]
    fn hartley_kernel_values() {
        let h1 = hartley_transform(1).unwrap().dense;
        assert!(max_norm_diff(&h1, &NamedGate::H.matrix()).unwrap() < 1e-15);
        let h2 = hartley_transform(2).unwrap().dense;
        let expected = ComplexMatrix::from_real_rows([
            [1.0, 1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0],
        ])
        .scale(Complex::new(0.5, 0.0));
        assert!(max_norm_diff(&h2, &expected).unwrap() < 1e-15);
        for q in 1..=5 {
            assert!(is_involution(&hartley_transform(q).unwrap().dense, 1e-12));
        }
    }

    #[test]
    fn hartley_is_re_minus_im_of_fourier() {
        for q in 1..=5 {
            let f = dft_matrix(q, -1.0);
            let h = hartley_matrix(q);
            for (hz, fz) in h.as_slice().iter().zip(f.as_slice()) {
                assert!((hz.re - (fz.re - fz.im)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hartley_circuit_block_matches_dense() {
        for q in 1..=4 {
            let t = hartley_transform(q).unwrap();
            let bc = t.circuit.as_ref().unwrap();
            let full = circuit_unitary(&bc.circuit).unwrap();
            let dim = 1 << q;
            let block = full.submatrix(0, 0, dim, dim).unwrap();
            assert!(max_norm_diff(&block, &t.dense).unwrap() < 1e-10, "q={q}");
            // scratch qubit returns to |0>
            let leak = full.submatrix(dim, 0, dim, dim).unwrap();
            assert!(leak.as_slice().iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn cst1_smallest_case() {
        let t = cst1_transform(1).unwrap();
        assert_eq!(t.dim(), 4);
        // DST-I block is 1x1 with value sqrt(2/2) sin(π/2) = 1.
        assert!((t.dense[(3, 3)] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let dct = ComplexMatrix::from_real_rows([[0.5, c, 0.5], [c, 0.0, -c], [0.5, -c, 0.5]]);
        assert!(max_norm_diff(&t.dense.submatrix(0, 0, 3, 3).unwrap(), &dct).unwrap() < 1e-15);
    }

    #[test]
    fn cst_blocks_are_involutions_with_zero_coupling() {
        for n in 1..=4 {
            for t in [cst1_transform(n).unwrap(), cst4_transform(n).unwrap()] {
                assert!(is_involution(&t.dense, 1e-10), "{} n={n}", t.id);
                assert!(max_norm_diff(&t.dense, &t.dense.transpose()).unwrap() < 1e-12);
                let split = match t.id {
                    TransformId::Cst1 => (1 << n) + 1,
                    _ => 1 << n,
                };
                for i in 0..t.dim() {
                    for j in 0..t.dim() {
                        if (i < split) != (j < split) {
                            assert_eq!(t.dense[(i, j)], Complex::new(0.0, 0.0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cst4_n1_dct_block() {
        let t = cst4_transform(1).unwrap();
        let (a, b) = ((PI / 8.0).cos(), (3.0 * PI / 8.0).cos());
        let expected = ComplexMatrix::from_real_rows([[a, b], [b, -a]]);
        let block = cst4_sector(&t.dense, Selector::Cos).unwrap();
        assert!(max_norm_diff(&block, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn orders() {
        assert_eq!(verify_order(&hartley_transform(3).unwrap(), 6).unwrap().exponent, 1);
        assert_eq!(verify_order(&fourier_transform(3).unwrap(), 6).unwrap().exponent, 2);
        assert_eq!(operator_order(&ComplexMatrix::identity(4), 6).unwrap().exponent, 0);
        let t = ComplexMatrix::diagonal(&[Complex::new(1.0, 0.0), cis(PI / 4.0)]);
        assert_eq!(operator_order(&t, 6).unwrap().exponent, 3);
        let irrational = ComplexMatrix::diagonal(&[Complex::new(1.0, 0.0), cis(1.0)]);
        assert!(matches!(operator_order(&irrational, 6), Err(Error::NotDyadicOrder { .. })));
        assert!(operator_order(&irrational, 7).is_err());
    }

    #[test]
    fn dense_matrices_are_unitary() {
        for id in TransformId::ALL {
            for size in 1..=3 {
                let t = id.build(size).unwrap();
                assert!(t.dense.is_unitary(DEFAULT_TOL));
                let inv = transform_power(&t, -1).unwrap();
                assert!(max_norm_diff(&inv, &adjoint(&t.dense)).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!("Hartley".parse::<TransformId>().unwrap(), TransformId::Hartley);
        assert_eq!("qct1".parse::<TransformId>().unwrap(), TransformId::Cst1);
        let err = "dct2".parse::<TransformId>().unwrap_err().to_string();
        assert!(err.contains("fourier, hartley, cst1, cst4"));
    }
}
