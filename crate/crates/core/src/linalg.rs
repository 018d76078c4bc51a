//! Dense complex linear algebra on finite truncations.
//!
//! Matrices are square and indexed from zero. The exponential and the
//! principal logarithm go through spectral decompositions so that the
//! exponential of an anti-Hermitian matrix is unitary up to roundoff no
//! matter how large its norm is.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        if let Some(pos) = m.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            let n = m.nrows();
            return Err(Error::InvalidInput(format!(
                "non-finite entry at ({}, {})",
                pos % n,
                pos / n
            )));
        }
        Ok(Self(m))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(CMat::from_fn(n, n, f))
    }

    /// Row-major entries as `(re, im)` pairs.
    pub fn from_row_major(n: usize, entries: &[(f64, f64)]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape {
                left: entries.len(),
                right: n * n,
            });
        }
        Self::from_fn(n, |i, j| {
            let (re, im) = entries[i * n + j];
            C64::new(re, im)
        })
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMat::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |m + m*|`, zero exactly for anti-Hermitian matrices.
    pub fn anti_hermitian_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                r = r.max((self.0[(i, j)] + self.0[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// `max |m - m*|`, zero exactly for Hermitian matrices.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                r = r.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Row-major `(re, im)` pairs.
    pub fn to_row_major(&self) -> Vec<[f64; 2]> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.0[(i, j)];
                out.push([z.re, z.im]);
            }
        }
        out
    }
}

/// Anti-Hermitian matrix, `m* = -m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiHermitianOp(ComplexMatrix);

impl AntiHermitianOp {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, Tolerances::default().anti_hermitian)
    }

    pub fn with_tol(m: ComplexMatrix, atol: f64) -> Result<Self> {
        let r = m.anti_hermitian_residual();
        if r > atol {
            return Err(Error::InvalidInput(format!(
                "anti-Hermitian residual {r:e} exceeds {atol:e}"
            )));
        }
        Ok(Self(m))
    }

    /// Takes the anti-Hermitian part `(m - m*) / 2` of an arbitrary matrix.
    pub fn project(m: &CMat) -> Result<Self> {
        let p = (m - m.adjoint()).map(|z| z * 0.5);
        Ok(Self(ComplexMatrix::new(p)?))
    }

    /// `i * h` for a Hermitian `h`.
    pub fn from_hermitian(h: &CMat) -> Result<Self> {
        Self::project(&h.map(|z| z * I))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMat {
        self.0.matrix()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    /// The Hermitian matrix `-i * m`.
    pub fn to_hermitian(&self) -> CMat {
        self.matrix().map(|z| z * -I)
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    pub fn scale(&self, t: f64) -> Self {
        Self(ComplexMatrix(self.matrix() * C64::from(t)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(ComplexMatrix(self.matrix() + other.matrix())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(ComplexMatrix(self.matrix() - other.matrix())))
    }

    /// Adds `i * diag(d)` for real `d`.
    pub fn add_imaginary_diagonal(&self, d: &[f64]) -> Result<Self> {
        check_dims(self.dim(), d.len())?;
        let mut m = self.matrix().clone();
        for (k, &v) in d.iter().enumerate() {
            m[(k, k)] += I * v;
        }
        Ok(Self(ComplexMatrix::new(m)?))
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|k| self.get(k, k)).collect()
    }

    /// Copy with the diagonal set to zero.
    pub fn off_diagonal(&self) -> Self {
        let mut m = self.matrix().clone();
        for k in 0..self.dim() {
            m[(k, k)] = C64::new(0.0, 0.0);
        }
        Self(ComplexMatrix(m))
    }
}

/// Unitary matrix, `u* u = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, Tolerances::default().unitary)
    }

    pub fn with_tol(m: ComplexMatrix, utol: f64) -> Result<Self> {
        let r = unitarity_residual(m.matrix());
        if r > utol {
            return Err(Error::Numerical(format!("unitarity residual {r:e} exceeds {utol:e}")));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMat {
        self.0.matrix()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Product of two unitaries, re-validated.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Self::new(ComplexMatrix::new(self.matrix() * other.matrix())?)
    }

    /// `u m u*`.
    pub fn conjugate(&self, m: &CMat) -> CMat {
        self.matrix() * m * self.matrix().adjoint()
    }
}

/// Spectral norm `|u* u - I|`, short-circuited by the Frobenius bound.
pub fn unitarity_residual(m: &CMat) -> f64 {
    let n = m.nrows();
    let e = m.adjoint() * m - CMat::identity(n, n);
    let frob = e.norm();
    if frob <= 1e-13 {
        frob
    } else {
        largest_singular_value(&e)
    }
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape { left: a, right: b });
    }
    Ok(())
}

fn largest_singular_value(m: &CMat) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    largest_singular_value(m.matrix())
}

/// Power iteration on `m* m`; a fast path when only a few digits are needed.
pub fn spectral_norm_power(m: &ComplexMatrix, rtol: f64) -> f64 {
    let n = m.dim();
    let a = m.matrix();
    let mut v = CVec::from_fn(n, |k, _| C64::new(1.0 + 0.01 * k as f64, 0.0));
    v /= C64::from(v.norm());
    let mut est = 0.0;
    for _ in 0..(10 * n).max(10) {
        let w = a.adjoint() * (a * &v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw.sqrt();
        v = w / C64::from(nw);
        if (next - est).abs() <= rtol * next {
            return next;
        }
        est = next;
    }
    est
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &CVec) -> f64 {
    v.norm()
}

/// `<x, y> = sum x_k conj(y_k)`.
pub fn inner(x: &CVec, y: &CVec) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Column `j` (zero-based).
pub fn column(m: &ComplexMatrix, j: usize) -> Result<CVec> {
    if j >= m.dim() {
        return Err(Error::Index { index: j, dim: m.dim() });
    }
    Ok(m.matrix().column(j).into_owned())
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a.dim(), b.dim())?;
    ComplexMatrix::new(a.matrix() * b.matrix() - b.matrix() * a.matrix())
}

/// Eigendecomposition `h = Q diag(w) Q*` of a Hermitian matrix.
pub fn eigh(h: &CMat) -> Result<(DVector<f64>, CMat)> {
    let n = h.nrows();
    if n == 1 {
        return Ok((DVector::from_element(1, h[(0, 0)].re), CMat::identity(1, 1)));
    }
    let eig = h
        .clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "Hermitian eigensolver did not converge (n = {n}, |h|_F = {:e})",
                h.norm()
            ))
        })?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// `Q diag(f(w)) Q*`.
pub(crate) fn spectral_apply(w: &DVector<f64>, q: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let n = q.nrows();
    let mut scaled = q.clone();
    for k in 0..n {
        let fk = f(w[k]);
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    scaled * q.adjoint()
}

/// `exp(t a)` for anti-Hermitian `a`, via the eigendecomposition of `-i a`.
pub fn exp_antihermitian(a: &AntiHermitianOp, t: f64) -> Result<UnitaryMatrix> {
    let (w, q) = eigh(&a.to_hermitian())?;
    let u = spectral_apply(&w, &q, |x| C64::from_polar(1.0, t * x));
    UnitaryMatrix::new(ComplexMatrix::new(u)?)
}

/// Principal logarithm of a unitary, eigenangles in `(-pi, pi)`.
pub fn log_unitary(u: &UnitaryMatrix) -> Result<AntiHermitianOp> {
    log_unitary_with(u, Tolerances::default().branch_cut_angle)
}

pub fn log_unitary_with(u: &UnitaryMatrix, branch_tol: f64) -> Result<AntiHermitianOp> {
    let n = u.dim();
    let schur = if n == 1 {
        Some((CMat::identity(1, 1), u.matrix().clone()))
    } else {
        u.matrix()
            .clone()
            .try_schur(EIGEN_EPS, EIGEN_MAX_ITER)
            .map(|s| s.unpack())
    };
    let Some((q, t)) = schur else {
        return log_unitary_cayley(u, branch_tol);
    };
    let mut angles = DVector::zeros(n);
    for k in 0..n {
        angles[k] = checked_angle(t[(k, k)].arg(), branch_tol)?;
    }
    let l = spectral_apply(&angles, &q, |x| I * x);
    AntiHermitianOp::project(&l)
}

fn checked_angle(theta: f64, branch_tol: f64) -> Result<f64> {
    if std::f64::consts::PI - theta.abs() < branch_tol {
        return Err(Error::BranchCut {
            angle: theta,
            tol: branch_tol,
        });
    }
    Ok(theta)
}

/// Logarithm through the Hermitian Cayley transform
/// `a = i (I - u)(I + u)^-1`, whose eigenvalues are `tan(theta / 2)`.
/// Used when the Schur iteration stalls on tightly clustered eigenvalues.
fn log_unitary_cayley(u: &UnitaryMatrix, branch_tol: f64) -> Result<AntiHermitianOp> {
    let n = u.dim();
    let id = CMat::identity(n, n);
    let plus = &id + u.matrix();
    let minus = &id - u.matrix();
    let inv = plus.try_inverse().ok_or(Error::BranchCut {
        angle: std::f64::consts::PI,
        tol: branch_tol,
    })?;
    let a = (minus * inv) * I;
    let a = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let (w, q) = eigh(&a)?;
    let mut angles = DVector::zeros(n);
    for k in 0..n {
        angles[k] = checked_angle(2.0 * w[k].atan(), branch_tol)?;
    }
    AntiHermitianOp::project(&spectral_apply(&angles, &q, |x| I * x))
}
