//! Dense complex matrices for registers of at most three qubits.
//!
//! Everything here is small: operators on the three-qubit register are 8×8,
//! and the only larger object in the crate is the 16×16 projector used when a
//! region-II mode is appended before it is traced out. Storage is row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::error::{Error, Result};

/// Largest dimension a [`CMatrix`] may have (four qubits).
pub const MAX_DIM: usize = 16;

/// Dimension of the three-qubit register.
pub const REGISTER_DIM: usize = 8;

/// Elementwise Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as "nonnegative".
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Hermiticity required before an eigen-decomposition is attempted.
pub const EIGEN_INPUT_TOL: f64 = 1e-10;
/// Relative off-diagonal Frobenius mass at which Jacobi sweeps stop.
pub const EIGEN_CONVERGENCE_TOL: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionOverflow { got: dim, max: MAX_DIM });
        }
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a square ≤ `MAX_DIM²`.
    pub fn from_row_major(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim)?;
        m.data = entries;
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Complex64]) -> Result<Self> {
        Self::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    /// Pauli matrix σ_i for i ∈ {0, 1, 2, 3}, with σ_0 the identity.
    pub fn pauli(i: usize) -> Self {
        let (z, o, im) = (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        let entries = match i {
            0 => [o, z, z, o],
            1 => [z, o, o, z],
            2 => [z, -im, im, z],
            3 => [o, z, z, -o],
            _ => panic!("Pauli index {i} out of range"),
        };
        Self {
            dim: 2,
            data: entries.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Hilbert–Schmidt (Frobenius) norm, `sqrt(tr(A†A))`.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise modulus of `A - A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Conjugation `U A U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.dagger()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product on mismatched dimensions");
        let n = self.dim;
        let mut out = CMatrix {
            dim: n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum on mismatched dimensions");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference on mismatched dimensions");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, " ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`. Products larger than the three-qubit register
/// are rejected.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let (da, db) = (a.dim, b.dim);
    let dim = da * db;
    if dim > REGISTER_DIM {
        return Err(Error::DimensionOverflow {
            got: dim,
            max: REGISTER_DIM,
        });
    }
    CMatrix::from_fn(dim, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.dagger()
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    a.hs_norm()
}

fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Traces out one qubit. Subsystem 0 is the most significant bit of the
/// row index (the leftmost ket label).
pub fn partial_trace(rho: &CMatrix, which: usize) -> Result<CMatrix> {
    let qubits = qubit_count(rho.dim)
        .filter(|&q| q >= 1)
        .ok_or_else(|| Error::DimensionMismatch(format!("dimension {} is not 2^k", rho.dim)))?;
    if which >= qubits {
        return Err(Error::InvalidSubsystem {
            index: which,
            qubits,
        });
    }
    if qubits == 1 {
        return CMatrix::from_fn(1, |_, _| rho.trace());
    }
    let shift = qubits - 1 - which;
    let low_mask = (1usize << shift) - 1;
    // Inserts bit `b` at position `shift` of a reduced index.
    let expand = |r: usize, b: usize| ((r & !low_mask) << 1) | (b << shift) | (r & low_mask);
    CMatrix::from_fn(rho.dim / 2, |i, j| {
        (0..2).map(|b| rho[(expand(i, b), expand(j, b))]).sum()
    })
}

/// Real eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    let defect = a.hermiticity_defect();
    if !(defect <= EIGEN_INPUT_TOL) {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim;
    // Work on the exactly-Hermitian part.
    let mut m = CMatrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()))?;
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }

    let scale = m.hs_norm();
    let off_mass = |m: &CMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_mass(&m);
        if off <= EIGEN_CONVERGENCE_TOL * scale || off == 0.0 {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, p, q);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// Annihilates the (p, q) entry: a diagonal phase makes it real, then a real
/// Givens rotation diagonalizes the 2×2 block.
fn jacobi_rotate(m: &mut CMatrix, p: usize, q: usize) {
    let n = m.dim;
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;

    // D = diag(1, .., e^{-iφ} at q, ..); m ← D† m D
    for k in 0..n {
        m[(k, q)] *= phase.conj();
    }
    for k in 0..n {
        m[(q, k)] *= phase;
    }
    m[(p, q)] = Complex64::new(r, 0.0);
    m[(q, p)] = Complex64::new(r, 0.0);

    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * s;
        m[(k, q)] = mkp * s + mkq * c;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * s;
        m[(q, k)] = mpk * s + mqk * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

/// The first density-matrix invariant a candidate violates.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DensityViolation {
    #[error("expected an 8x8 matrix, got {0}x{0}")]
    WrongDimension(usize),
    #[error("non-finite entry")]
    NonFinite,
    #[error("not Hermitian: max |rho - rho^dagger| = {magnitude:e}")]
    NotHermitian { magnitude: f64 },
    #[error("trace deviates from 1 by {magnitude:e}")]
    Trace { magnitude: f64 },
    #[error("negative eigenvalue of magnitude {magnitude:e}")]
    NotPositive { magnitude: f64 },
}

/// A validated three-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0).expect("validated density matrices are Hermitian")
    }
}

impl std::ops::Deref for DensityMatrix {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn validate_density(m: CMatrix) -> std::result::Result<DensityMatrix, DensityViolation> {
    if m.dim != REGISTER_DIM {
        return Err(DensityViolation::WrongDimension(m.dim));
    }
    if !m.is_finite() {
        return Err(DensityViolation::NonFinite);
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(DensityViolation::NotHermitian { magnitude: defect });
    }
    let trace_dev = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > TRACE_TOL {
        return Err(DensityViolation::Trace {
            magnitude: trace_dev,
        });
    }
    let eig = hermitian_eigenvalues(&m).map_err(|_| DensityViolation::NotHermitian {
        magnitude: defect,
    })?;
    if eig[0] < -POSITIVITY_TOL {
        return Err(DensityViolation::NotPositive { magnitude: -eig[0] });
    }
    Ok(DensityMatrix(m))
}

/// Maps between the internal ascending basis `i = 4a + 2b + c` and the
/// descending labels `k ∈ 1..=8` (`|1⟩ = |111⟩ … |8⟩ = |000⟩`) used when the
/// evolved matrices are written down elementwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct BasisConvention;

impl BasisConvention {
    pub fn label_to_index(k: usize) -> usize {
        assert!((1..=8).contains(&k), "basis label {k} outside 1..=8");
        8 - k
    }

    pub fn index_to_label(i: usize) -> usize {
        assert!(i < 8, "basis index {i} outside 0..8");
        8 - i
    }

    /// `(a, b, c)` bits of internal index `i`.
    pub fn ket(i: usize) -> [u8; 3] {
        assert!(i < 8, "basis index {i} outside 0..8");
        [(i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1]
    }

    pub fn index_of(a: u8, b: u8, c: u8) -> usize {
        4 * a as usize + 2 * b as usize + c as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis_projector(dim: usize, k: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim).unwrap();
        m[(k, k)] = c(1.0);
        m
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap(), CMatrix::identity(4).unwrap());
    }

    #[test]
    fn kron_bit_flip_on_both_qubits() {
        let xx = kron(&CMatrix::pauli(1), &CMatrix::pauli(1)).unwrap();
        let out = basis_projector(4, 0).conjugate_by(&xx);
        assert_eq!(out, basis_projector(4, 3));
    }

    #[test]
    fn kron_phase_flip_on_bell_state() {
        // (|00⟩+|11⟩)(⟨00|+⟨11|)/2 has entries 1/2 at (0,0), (0,3), (3,0), (3,3).
        let mut bell = CMatrix::zeros(4).unwrap();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = c(0.5);
        }
        let zi = kron(&CMatrix::pauli(3), &CMatrix::identity(2).unwrap()).unwrap();
        let out = bell.conjugate_by(&zi);
        let mut expected = bell.clone();
        expected[(0, 3)] = c(-0.5);
        expected[(3, 0)] = c(-0.5);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_rejects_oversized_products() {
        let a = CMatrix::identity(4).unwrap();
        let b = CMatrix::identity(4).unwrap();
        assert_eq!(
            kron(&a, &b),
            Err(Error::DimensionOverflow { got: 16, max: 8 })
        );
    }

    #[test]
    fn dagger_of_hermitian_paulis() {
        for i in 0..4 {
            assert_eq!(dagger(&CMatrix::pauli(i)), CMatrix::pauli(i));
        }
        assert_eq!(dagger(&CMatrix::identity(8).unwrap()), CMatrix::identity(8).unwrap());
    }

    #[test]
    fn hs_norm_basics() {
        assert_eq!(hs_norm(&CMatrix::zeros(8).unwrap()), 0.0);
        assert!((hs_norm(&CMatrix::identity(8).unwrap()) - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let rho = basis_projector(4, 0);
        assert_eq!(partial_trace(&rho, 1).unwrap(), basis_projector(2, 0));

        let mut bell = CMatrix::zeros(4).unwrap();
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = c(0.5);
        }
        let half_id = CMatrix::identity(2).unwrap().scale(0.5);
        for which in 0..2 {
            assert!(partial_trace(&bell, which).unwrap().max_abs_diff(&half_id) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_picks_the_right_qubit() {
        // |01⟩⟨01|: tracing qubit 0 leaves |1⟩⟨1|, tracing qubit 1 leaves |0⟩⟨0|.
        let rho = basis_projector(4, 1);
        assert_eq!(partial_trace(&rho, 0).unwrap(), basis_projector(2, 1));
        assert_eq!(partial_trace(&rho, 1).unwrap(), basis_projector(2, 0));
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = CMatrix::identity(8).unwrap();
        assert_eq!(
            partial_trace(&rho, 3),
            Err(Error::InvalidSubsystem { index: 3, qubits: 3 })
        );
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        let d = CMatrix::from_real_diagonal(&[3.0, 1.0, 2.0, 0.0]).unwrap();
        let e = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(e, vec![0.0, 1.0, 2.0, 3.0]);

        let e = hermitian_eigenvalues(&CMatrix::pauli(1)).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
        let e = hermitian_eigenvalues(&CMatrix::pauli(2)).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let mut m = CMatrix::zeros(2).unwrap();
        m[(0, 1)] = c(1.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn validate_accepts_maximally_mixed() {
        assert!(validate_density(CMatrix::identity(8).unwrap().scale(0.125)).is_ok());
    }

    #[test]
    fn validate_reports_each_violation() {
        let mut diag = [0.0; 8];
        diag[0] = 2.0;
        let m = CMatrix::from_real_diagonal(&diag).unwrap();
        assert_eq!(
            validate_density(m),
            Err(DensityViolation::Trace { magnitude: 1.0 })
        );

        let mut m = CMatrix::identity(8).unwrap().scale(0.125);
        m[(0, 1)] = c(0.1);
        assert!(matches!(
            validate_density(m),
            Err(DensityViolation::NotHermitian { .. })
        ));

        let mut diag = [0.0; 8];
        diag[0] = 1.5;
        diag[1] = -0.5;
        let m = CMatrix::from_real_diagonal(&diag).unwrap();
        assert_eq!(
            validate_density(m),
            Err(DensityViolation::NotPositive { magnitude: 0.5 })
        );

        assert_eq!(
            validate_density(CMatrix::identity(4).unwrap()),
            Err(DensityViolation::WrongDimension(4))
        );
    }

    #[test]
    fn basis_convention_round_trip() {
        assert_eq!(BasisConvention::label_to_index(1), 7);
        assert_eq!(BasisConvention::label_to_index(8), 0);
        assert_eq!(BasisConvention::ket(BasisConvention::label_to_index(7)), [0, 0, 1]);
        assert_eq!(BasisConvention::ket(BasisConvention::label_to_index(2)), [1, 1, 0]);
        for k in 1..=8 {
            assert_eq!(BasisConvention::index_to_label(BasisConvention::label_to_index(k)), k);
        }
        for i in 0..8 {
            let [a, b, c] = BasisConvention::ket(i);
            assert_eq!(BasisConvention::index_of(a, b, c), i);
        }
    }
}
