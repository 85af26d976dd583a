//! Dense complex matrices and the three spectral facts everything else rests on:
//! the adjoint, the Hermitian eigendecomposition, and the operator norm.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative asymmetry silently removed by [`hermitian_spectrum`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A dense complex matrix with finite entries and positive dimensions.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Convenience constructor for real matrices given as nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| Complex64::new(v, 0.0)))
            .collect();
        Self::from_row_major(r, c, entries)
    }

    /// Wraps an nalgebra matrix. Panics on empty or non-finite input.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        assert!(m.nrows() > 0 && m.ncols() > 0, "empty matrix");
        assert!(
            m.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "non-finite entry"
        );
        Self(m)
    }

    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&v| Complex64::new(v, 0.0)));
        Self::wrap(DMatrix::from_diagonal(&d))
    }

    /// Column matrix built from a vector.
    pub fn column(v: &DVector<Complex64>) -> Self {
        Self::wrap(DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::wrap(self.0.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::wrap(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self* · other` without forming the adjoint explicitly.
    pub fn ad_mul(&self, other: &Self) -> Self {
        Self::wrap(self.0.ad_mul(&other.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::wrap((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Skew part divided by `i`, i.e. `(A - A*)/(2i)`, which is Hermitian.
    pub fn imaginary_part(&self) -> Self {
        Self::wrap((&self.0 - self.0.adjoint()) * Complex64::new(0.0, -0.5))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.0 * v
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|z| z.norm() <= tol)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.shape())?;
        for i in 0..self.rows() {
            write!(f, "\n  [")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, " ]")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a ComplexMatrix> for &'a ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix::wrap(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::wrap(-&self.0)
    }
}

/// On-disk and wire representation: `{"rows": m, "cols": n, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord {
            rows: self.rows(),
            cols: self.cols(),
            entries: self.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = MatrixRecord::deserialize(deserializer)?;
        let entries = rec
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_row_major(rec.rows, rec.cols, entries).map_err(serde::de::Error::custom)
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn vector(&self, i: usize) -> DVector<Complex64> {
        self.eigenvectors.column(i).into_owned()
    }

    /// `U diag(λ) U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        );
        let u = &self.eigenvectors;
        ComplexMatrix::wrap(u * DMatrix::from_diagonal(&d) * u.adjoint())
    }
}

/// Eigendecomposition of the Hermitian part of `m`, no tolerance check.
pub(crate) fn eigh(m: &DMatrix<Complex64>) -> HermitianSpectrum {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianSpectrum {
        eigenvalues,
        eigenvectors: vecs,
    }
}

/// Largest eigenvalue of the Hermitian part of `m`.
pub(crate) fn lambda_max(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].re;
    }
    eigh(m).max()
}

/// Conjugate transpose of `a`.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Full spectral decomposition of a Hermitian matrix.
///
/// Input drift up to [`HERMITIAN_TOL`] relative (Frobenius) is symmetrized away;
/// anything larger is rejected.
pub fn hermitian_spectrum(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch {
            left: h.shape(),
            right: (h.cols(), h.rows()),
        });
    }
    let asym = (h.as_dmatrix() - h.as_dmatrix().adjoint())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let allowed = HERMITIAN_TOL * (1.0 + h.frobenius_norm());
    if asym > allowed {
        return Err(Error::NonHermitianInput {
            asymmetry: asym,
            allowed,
        });
    }
    Ok(eigh(h.as_dmatrix()))
}

/// Largest singular value, computed as `sqrt(λ_max(A*A))` on the smaller Gram matrix.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    operator_norm_raw(a.as_dmatrix())
}

pub(crate) fn operator_norm_raw(a: &DMatrix<Complex64>) -> f64 {
    let gram = if a.ncols() <= a.nrows() {
        a.ad_mul(a)
    } else {
        a * a.adjoint()
    };
    lambda_max(&gram).max(0.0).sqrt()
}
