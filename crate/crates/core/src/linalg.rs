//! Dense complex linear algebra on ℂ² and ℂ²⊗ℂ².
//!
//! Only dimensions 2 and 4 are supported. Matrices are stored row-major and
//! are immutable once built; every operation returns a fresh value.

use std::fmt;

use thiserror::Error;

pub use num_complex::Complex64 as Complex;

/// Entrywise tolerance for structural predicates (Hermitian, unitary, phase equality).
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Largest imaginary residue tolerated in an expectation value.
pub const EXPECTATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("unsupported dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} entries, found {found}")]
    WrongEntryCount { expected: usize, found: usize },
    #[error("non-finite component")]
    NonFinite,
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(LinalgError::UnsupportedDimension(d)),
    }
}

fn check_finite(values: &[Complex]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite)
    }
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// Builds a finite complex scalar, rejecting NaN and infinities.
pub fn complex(re: f64, im: f64) -> Result<Complex> {
    let z = Complex::new(re, im);
    check_finite(&[z])?;
    Ok(z)
}

/// A square complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(LinalgError::WrongEntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_rows2(rows: [[Complex; 2]; 2]) -> Result<Self> {
        Self::new(2, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![Complex::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        check_finite(diag)?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * m.dim + i] = d;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n)
            .map(|idx| self.get(idx % n, idx / n).conj())
            .collect();
        Self { dim: n, entries }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_same(self.dim, other.dim)?;
        let n = self.dim;
        let mut entries = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn matvec(&self, v: &StateVector) -> Result<StateVector> {
        check_same(self.dim, v.dim())?;
        let n = self.dim;
        let amplitudes = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * v.amplitudes[j]).sum())
            .collect();
        Ok(StateVector { amplitudes })
    }

    /// Kronecker product of two 2×2 matrices; entry `(i,j)⊗(k,l)` lands at `(2i+k, 2j+l)`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_same(2, self.dim)?;
        check_same(2, other.dim)?;
        let mut entries = vec![Complex::new(0.0, 0.0); 16];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        entries[(2 * i + k) * 4 + (2 * j + l)] = self.get(i, j) * other.get(k, l);
                    }
                }
            }
        }
        Ok(Self { dim: 4, entries })
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_same(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint()).unwrap_or(f64::INFINITY)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= STRUCTURE_TOL
    }

    /// Max entrywise deviation of `M M†` from the identity.
    pub fn unitarity_residue(&self) -> f64 {
        let prod = self
            .matmul(&self.adjoint())
            .expect("adjoint has the same dimension");
        let id = Self::identity(self.dim).expect("dimension already validated");
        prod.max_abs_diff(&id).expect("same dimension")
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residue() <= STRUCTURE_TOL
    }

    /// Conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A vector in ℂ² or ℂ⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        check_finite(&amplitudes)?;
        Ok(Self { amplitudes })
    }

    /// Basis vector `e_index` of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut amplitudes = vec![Complex::new(0.0, 0.0); dim];
        amplitudes[index] = Complex::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= STRUCTURE_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(LinalgError::NotNormalized(self.norm_sqr()));
        }
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        })
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        check_same(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// True when `|⟨self|other⟩| = 1` within [`STRUCTURE_TOL`]; both must be normalized.
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        match self.inner(other) {
            Ok(z) => (z.norm() - 1.0).abs() <= STRUCTURE_TOL,
            Err(_) => false,
        }
    }

    /// Tensor product `|self⟩ ⊗ |other⟩` of two qubit states.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_same(2, self.dim())?;
        check_same(2, other.dim())?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { amplitudes })
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self.dim(), other.dim())?;
        Ok(Self {
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// `⟨ψ|M|ψ⟩` for a normalized state and a Hermitian operator.
pub fn expectation(state: &StateVector, op: &ComplexMatrix) -> Result<f64> {
    check_same(op.dim(), state.dim())?;
    let dev = op.hermitian_deviation();
    if dev > STRUCTURE_TOL {
        return Err(LinalgError::NotHermitian(dev));
    }
    if !state.is_normalized() {
        return Err(LinalgError::NotNormalized(state.norm_sqr()));
    }
    let raw = state.inner(&op.matvec(state)?)?;
    if raw.im.abs() >= EXPECTATION_TOL {
        return Err(LinalgError::ImaginaryResidue(raw.im.abs()));
    }
    Ok(raw.re)
}

/// Estimates the operator norm `‖M‖` by power iteration on `M†M`.
///
/// The Rayleigh quotient never exceeds the true largest eigenvalue of `M†M`,
/// so the estimate approaches the norm from below.
pub fn operator_norm_estimate(m: &ComplexMatrix, iterations: usize) -> f64 {
    let gram = m.adjoint().matmul(m).expect("same dimension");
    // Generic start vector with no special alignment to any basis.
    let mut v = StateVector {
        amplitudes: (0..m.dim())
            .map(|i| {
                let x = i as f64 + 1.0;
                Complex::new(x.sqrt().fract() + 0.3, (x * 0.7548776662).fract() - 0.4)
            })
            .collect(),
    }
    .normalized()
    .expect("non-zero start vector");
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = gram.matvec(&v).expect("same dimension");
        lambda = v.inner(&w).expect("same dimension").re;
        match w.normalized() {
            Ok(next) => v = next,
            Err(_) => return 0.0,
        }
    }
    lambda.max(0.0).sqrt()
}

/// The Pauli X matrix `(0,1;1,0)`.
pub fn pauli_x() -> ComplexMatrix {
    let (o, l) = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
    ComplexMatrix::from_rows2([[o, l], [l, o]]).expect("finite")
}

/// The Pauli Y matrix `(0,−i;i,0)`.
pub fn pauli_y() -> ComplexMatrix {
    let o = Complex::new(0.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    ComplexMatrix::from_rows2([[o, -i], [i, o]]).expect("finite")
}

/// The Pauli Z matrix `diag(1,−1)`.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]).expect("finite")
}
