//! Dense complex matrices and state vectors.
//!
//! Everything is stored row-major in `Vec<Complex>`. Basis indices follow the
//! MSB-first convention: in an `n`-qubit register, wire `0` is the most
//! significant bit of the basis index and wire `n - 1` the least significant.

use std::fmt::Write as _;
use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Default tolerance for every "equal within" comparison.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default global qubit budget.
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "QFRAC_MAX_QUBITS";

/// The active qubit budget: `QFRAC_MAX_QUBITS` if set to a valid count, else 14.
pub fn qubit_budget() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0 && v < usize::BITS as usize / 2)
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

/// Fails with [`Error::Size`] when `qubits` exceeds the active budget.
pub fn check_budget(qubits: usize) -> Result<()> {
    let budget = qubit_budget();
    if qubits > budget {
        return Err(Error::Size { qubits, budget });
    }
    Ok(())
}

/// Number of qubits needed to index `dim` basis states (`ceil(log2 dim)`).
pub fn qubits_for_dim(dim: usize) -> usize {
    dim.max(1).next_power_of_two().trailing_zeros() as usize
}

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> Complex {
    Complex::from_polar(1.0, phi)
}

fn ensure_finite<'a>(values: impl IntoIterator<Item = &'a Complex>) -> Result<()> {
    if values.into_iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation("non-finite complex entry".into()))
    }
}

/// A dense, row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        ensure_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for constants.
    pub fn from_rows<const R: usize, const C: usize>(rows: [[Complex; C]; R]) -> Self {
        Self { rows: R, cols: C, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_real_rows<const R: usize, const C: usize>(rows: [[f64; C]; R]) -> Self {
        Self { rows: R, cols: C, data: rows.into_iter().flatten().map(|x| Complex::new(x, 0.0)).collect() }
    }

    /// Block-diagonal assembly `a ⊕ b ⊕ ...`.
    pub fn direct_sum(blocks: &[&ComplexMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// Entrywise `self + s * other`.
    pub fn add_scaled(&self, other: &ComplexMatrix, s: Complex) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + s * b).collect(),
        })
    }

    /// `max |(M^† M - I)_{ij}|`, or infinity for non-square matrices.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = matmul(&adjoint(self), self).expect("square shapes agree");
        max_norm_diff(&gram, &Self::identity(self.rows)).expect("same shape")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// `M · v`.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum()).collect())
    }

    /// Sub-matrix of the rows `r0..r0+rows` and columns `c0..c0+cols`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::Dimension(format!(
                "block {rows}x{cols} at ({r0},{c0}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)]))
    }

    /// Matrix text format: `rows cols` header, then one line per row of
    /// space-separated `re,im` pairs printed with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 50 + 16);
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|z| format_complex(*z)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse { line: 1, message: "expected `rows cols`".into() });
        };
        let mut data = Vec::with_capacity(rows * cols);
        for (idx, line) in lines {
            for tok in line.split_whitespace() {
                data.push(
                    parse_complex(tok)
                        .ok_or_else(|| Error::Parse { line: idx + 1, message: format!("bad entry `{tok}`") })?,
                );
            }
        }
        Self::new(rows, cols, data)
    }
}

pub(crate) fn format_complex(z: Complex) -> String {
    format!("{:.16e},{:.16e}", z.re, z.im)
}

pub(crate) fn parse_complex(tok: &str) -> Option<Complex> {
    let (re, im) = tok.split_once(',')?;
    Some(Complex::new(re.parse().ok()?, im.parse().ok()?))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

fn same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension(format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    Ok(())
}

/// Kronecker product: block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.data.is_empty() || b.data.is_empty() {
        return Err(Error::Dimension("kron of an empty matrix".into()));
    }
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let (Some(rows), Some(cols)) = (rows, cols) else {
        return Err(Error::Size { qubits: usize::MAX, budget: qubit_budget() });
    };
    check_budget(qubits_for_dim(rows.max(cols)))?;

    let mut out = ComplexMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let s = a[(ai, aj)];
            for bi in 0..b.rows {
                let dst = (ai * b.rows + bi) * cols + aj * b.cols;
                for (o, &bv) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(bi)) {
                    *o = s * bv;
                }
            }
        }
    }
    Ok(out)
}

/// Matrix product. Zero entries of `a` are skipped, so products with
/// embedded gates cost `nnz(a) * b.cols`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        let dst = &mut out.data[i * b.cols..(i + 1) * b.cols];
        for (k, &aik) in a.row(i).iter().enumerate() {
            if aik == ZERO {
                continue;
            }
            for (o, &bkj) in dst.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.cols, m.rows, |i, j| m[(j, i)].conj())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_norm_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    same_shape(a, b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// `m^k` by repeated squaring. Negative exponents go through the adjoint and
/// are only accepted for unitary `m`.
pub fn matrix_power(m: &ComplexMatrix, k: i64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("power of non-square {}x{} matrix", m.rows, m.cols)));
    }
    let base = if k < 0 {
        if !m.is_unitary(DEFAULT_TOL) {
            return Err(Error::Domain("negative power of a non-unitary matrix".into()));
        }
        adjoint(m)
    } else {
        m.clone()
    };
    let mut exp = k.unsigned_abs();
    let mut acc = ComplexMatrix::identity(m.rows);
    let mut sq = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = matmul(&acc, &sq)?;
        }
        exp >>= 1;
        if exp > 0 {
            sq = matmul(&sq, &sq)?;
        }
    }
    Ok(acc)
}

/// A pure state of `num_qubits` qubits, amplitudes in MSB-first basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("state length {len} is not a power of two")));
        }
        ensure_finite(&amplitudes)?;
        Ok(Self { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    /// The computational basis state `|index>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_budget(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Validation(format!("basis index {index} out of range for {num_qubits} qubits")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Haar-ish random state: normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_budget(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amplitudes: Vec<Complex> = (0..dim)
            .map(|_| {
                // Box-Muller keeps us off rand_distr.
                let (u1, u2): (f64, f64) = (rng.gen::<f64>().max(1e-300), rng.gen());
                let r = (-2.0 * u1.ln()).sqrt();
                Complex::from_polar(r, 2.0 * std::f64::consts::PI * u2)
            })
            .collect();
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { num_qubits, amplitudes })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|self> ⊗ |other>`, with `self` on the more significant wires.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        check_budget(self.num_qubits + other.num_qubits)?;
        let amplitudes = self.amplitudes.iter().flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b)).collect();
        Ok(Self { num_qubits: self.num_qubits + other.num_qubits, amplitudes })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &StateVector) -> Result<f64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Dimension(format!("{}-qubit vs {}-qubit state", self.num_qubits, other.num_qubits)));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// State dump format: one `bits re,im` line per basis index, the index
    /// written as an MSB-first bit string. Entries with modulus at or below
    /// `1e-14` are skipped unless `full` is set.
    pub fn to_text(&self, full: bool) -> String {
        let mut out = String::new();
        for (idx, z) in self.amplitudes.iter().enumerate() {
            if !full && z.norm() <= 1e-14 {
                continue;
            }
            let _ = writeln!(out, "{:0width$b} {}", idx, format_complex(*z), width = self.num_qubits.max(1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn hadamard() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_hadamard_pair() {
        let h2 = kron(&hadamard(), &hadamard()).unwrap();
        let expected = ComplexMatrix::from_real_rows([
            [1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0],
        ])
        .scale(c(0.5, 0.0));
        assert!(max_norm_diff(&h2, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn kron_x_identity_swaps_blocks() {
        let m = kron(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let expected = ComplexMatrix::from_real_rows([
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn kron_rejects_empty_and_oversize() {
        let empty = ComplexMatrix::zeros(0, 0);
        assert!(matches!(kron(&empty, &hadamard()), Err(Error::Dimension(_))));
        let big = ComplexMatrix::identity(1 << 8);
        assert!(matches!(kron(&big, &big), Err(Error::Size { qubits: 16, .. })));
    }

    #[test]
    fn matmul_shapes_and_involution() {
        let hh = matmul(&hadamard(), &hadamard()).unwrap();
        assert!(max_norm_diff(&hh, &ComplexMatrix::identity(2)).unwrap() <= 1e-15);
        let err = matmul(&ComplexMatrix::zeros(2, 3), &ComplexMatrix::zeros(2, 3));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn adjoint_of_phase_conjugates() {
        let phi = 0.7;
        let p = ComplexMatrix::diagonal(&[ONE, cis(phi)]);
        let pm = ComplexMatrix::diagonal(&[ONE, cis(-phi)]);
        assert_eq!(adjoint(&p), pm);
        assert_eq!(adjoint(&ComplexMatrix::identity(3)), ComplexMatrix::identity(3));
    }

    #[test]
    fn max_norm_diff_shape_mismatch() {
        let err = max_norm_diff(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn power_rules() {
        let h = hadamard();
        assert_eq!(matrix_power(&h, 0).unwrap(), ComplexMatrix::identity(2));
        let s = ComplexMatrix::diagonal(&[ONE, c(0.0, 1.0)]);
        let inv = matrix_power(&s, -1).unwrap();
        assert!(max_norm_diff(&matmul(&s, &inv).unwrap(), &ComplexMatrix::identity(2)).unwrap() < 1e-15);
        let not_unitary = ComplexMatrix::from_real_rows([[2.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(matrix_power(&not_unitary, -2), Err(Error::Domain(_))));
        assert_eq!(matrix_power(&not_unitary, 3).unwrap()[(0, 0)], c(8.0, 0.0));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::Validation(_))));
        assert!(StateVector::new(vec![c(f64::INFINITY, 0.0), ZERO]).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = ComplexMatrix::from_rows([[c(0.1, -1.0 / 3.0), c(1e-300, 2.5)]]);
        let text = m.to_text();
        assert!(text.starts_with("1 2\n"));
        assert!(text.contains("1.0000000000000001e-1,-3.3333333333333331e-1"));
        assert_eq!(ComplexMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn state_dump_skips_small_entries() {
        let s = StateVector::basis(3, 5).unwrap();
        assert_eq!(s.to_text(false), "101 1.0000000000000000e0,0.0000000000000000e0\n");
        assert_eq!(s.to_text(true).lines().count(), 8);
    }

    #[test]
    fn budget_checks() {
        assert!(check_budget(DEFAULT_MAX_QUBITS).is_ok());
        assert!(StateVector::zero(40).is_err());
        assert_eq!(qubits_for_dim(5), 3);
        assert_eq!(qubits_for_dim(4), 2);
    }
}
