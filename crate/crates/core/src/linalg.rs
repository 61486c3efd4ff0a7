//! Dense complex matrices with tensor-product bookkeeping.
//!
//! Subsystem index 0 is the leftmost (slowest-varying) tensor factor. All
//! operations are pure; values are immutable once built.

use std::ops::{Add, Mul, Sub};

use faer::{Mat, MatRef, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = -1e-9;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A square complex matrix acting on a tensor product of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dims: Vec<usize>,
    data: Mat<C64>,
}

impl OperatorMatrix {
    pub fn new(dims: Vec<usize>, data: Mat<C64>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if data.nrows() != side || data.ncols() != side {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but dims {:?} need side {}",
                data.nrows(),
                data.ncols(),
                dims,
                side
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self { dims: dims.to_vec(), data: Mat::zeros(n, n) }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self { dims: dims.to_vec(), data: Mat::identity(n, n) }
    }

    pub fn from_fn(dims: &[usize], f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = dims.iter().product();
        Self { dims: dims.to_vec(), data: Mat::from_fn(n, n, f) }
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(dims: &[usize], a: &[C64], b: &[C64]) -> Result<Self> {
        let n: usize = dims.iter().product();
        if a.len() != n || b.len() != n {
            return Err(Error::Dimension(format!("kets of length {}/{} for side {n}", a.len(), b.len())));
        }
        Ok(Self::from_fn(dims, |i, j| a[i] * b[j].conj()))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> MatRef<'_, C64> {
        self.data.as_ref()
    }

    pub fn into_data(self) -> Mat<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self { dims: self.dims.clone(), data: self.data.adjoint().to_owned() }
    }

    pub fn transpose(&self) -> Self {
        Self { dims: self.dims.clone(), data: self.data.transpose().to_owned() }
    }

    pub fn conjugate(&self) -> Self {
        Self { dims: self.dims.clone(), data: self.data.conjugate().to_owned() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dims: self.dims.clone(), data: &self.data * faer::Scale(s) }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    /// max |A - A†|
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                err = err.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self::from_fn(&self.dims, |i, j| {
            if i == j {
                C64::new(self.data[(i, i)].re, 0.0)
            } else {
                (self.data[(i, j)] + self.data[(j, i)].conj()) * 0.5
            }
        })
        .with_dim_check(n)
    }

    fn with_dim_check(self, n: usize) -> Self {
        debug_assert_eq!(self.dim(), n);
        self
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operator sides differ");
        let mut m: f64 = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                m = m.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.norm_max()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        let h = self.hermitian_part();
        let vals = h.data.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        Ok(vals)
    }

    /// Eigendecomposition of the Hermitian part: ascending eigenvalues and
    /// eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, Mat<C64>)> {
        let h = self.hermitian_part();
        let evd = h.data.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let vals = (0..h.dim()).map(|i| s[i].re).collect();
        Ok((vals, evd.U().to_owned()))
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> Vec<C64> {
        let n = self.dim();
        let mut v = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                v.push(self.data[(i, j)]);
            }
        }
        v
    }

    pub fn unvectorize(dims: &[usize], v: &[C64]) -> Result<Self> {
        let n: usize = dims.iter().product();
        if v.len() != n * n {
            return Err(Error::Dimension(format!("vector of length {} for side {n}", v.len())));
        }
        Ok(Self::from_fn(dims, |i, j| v[i + j * n]))
    }

    /// Apply to a ket.
    pub fn apply(&self, ket: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(ket.len(), n);
        (0..n).map(|i| (0..n).map(|j| self.data[(i, j)] * ket[j]).sum()).collect()
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator sides differ");
        OperatorMatrix { dims: self.dims.clone(), data: &self.data + &rhs.data }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator sides differ");
        OperatorMatrix { dims: self.dims.clone(), data: &self.data - &rhs.data }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator sides differ");
        OperatorMatrix { dims: self.dims.clone(), data: &self.data * &rhs.data }
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: OperatorMatrix,
}

impl DensityMatrix {
    pub fn new(op: OperatorMatrix) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("max |ρ - ρ†| = {herm:.3e}")));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace = {tr}")));
        }
        let min = op.eigenvalues_hermitian()?.first().copied().unwrap_or(0.0);
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("min eigenvalue = {min:.3e}")));
        }
        Ok(Self { op })
    }

    /// |ψ⟩⟨ψ| for a ket, normalized.
    pub fn pure(dims: &[usize], ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let k: Vec<C64> = ket.iter().map(|c| c / norm).collect();
        Self::new(OperatorMatrix::outer(dims, &k, &k)?)
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self { op: OperatorMatrix::identity(dims).scale(C64::new(1.0 / n as f64, 0.0)) }
    }

    /// Mixture Σ p_k ρ_k; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut acc = OperatorMatrix::zeros(first.1.dims());
        for (p, rho) in parts {
            if *p < 0.0 {
                return Err(Error::InvalidState(format!("negative weight {p}")));
            }
            acc = &acc + &rho.op.scale(C64::new(*p, 0.0));
        }
        Self::new(acc)
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.op.get(i, j)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.op.eigenvalues_hermitian()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.op.max_abs_diff(&other.op)
    }
}

/// Standard Kronecker product; dims concatenate.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let data = Mat::from_fn(na * nb, na * nb, |i, j| a.data[(i / nb, j / nb)] * b.data[(i % nb, j % nb)]);
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    OperatorMatrix { dims, data }
}

pub fn kron_all(ops: &[&OperatorMatrix]) -> OperatorMatrix {
    let mut iter = ops.iter();
    let first = (*iter.next().expect("kron_all of empty list")).clone();
    iter.fold(first, |acc, op| kron(&acc, op))
}

/// Kronecker product of kets.
pub fn kron_kets(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Splits full basis indices into kept / traced multi-indices.
struct Split {
    kept_dim: usize,
    traced_dim: usize,
    full_of: Vec<usize>,
}

impl Split {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let n = dims.len();
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if keep.is_empty() || sorted.len() != keep.len() || sorted.iter().any(|&k| k >= n) {
            return Err(Error::InvalidIndex { indices: keep.to_vec(), n });
        }
        let traced: Vec<usize> = (0..n).filter(|k| !sorted.contains(k)).collect();
        let kept_dim: usize = sorted.iter().map(|&k| dims[k]).product();
        let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();
        let total: usize = dims.iter().product();
        let mut full_of = vec![0; total];
        let mut digits = vec![0usize; n];
        for full in 0..total {
            let mut rem = full;
            for k in (0..n).rev() {
                digits[k] = rem % dims[k];
                rem /= dims[k];
            }
            let kept = sorted.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            let tr = traced.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
            full_of[kept * traced_dim + tr] = full;
        }
        Ok(Self { kept_dim, traced_dim, full_of })
    }

    fn full(&self, kept: usize, traced: usize) -> usize {
        self.full_of[kept * self.traced_dim + traced]
    }
}

/// Partial trace of an arbitrary operator, keeping the listed subsystems
/// (in ascending order).
pub fn partial_trace_operator(op: &OperatorMatrix, keep: &[usize]) -> Result<OperatorMatrix> {
    let split = Split::new(op.dims(), keep)?;
    let mut kept_sorted = keep.to_vec();
    kept_sorted.sort_unstable();
    let dims: Vec<usize> = kept_sorted.iter().map(|&k| op.dims[k]).collect();
    let data = Mat::from_fn(split.kept_dim, split.kept_dim, |i, j| {
        (0..split.traced_dim).map(|t| op.data[(split.full(i, t), split.full(j, t))]).sum()
    });
    Ok(OperatorMatrix { dims, data })
}

/// Reduced state on the kept subsystems.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_operator(rho.as_operator(), keep)?)
}

/// Transpose one factor of a bipartite operator.
pub fn partial_transpose_operator(op: &OperatorMatrix, subsystem: usize) -> Result<OperatorMatrix> {
    if op.dims.len() != 2 {
        return Err(Error::NotBipartite(op.dims.len()));
    }
    if subsystem > 1 {
        return Err(Error::InvalidIndex { indices: vec![subsystem], n: 2 });
    }
    let db = op.dims[1];
    let data = Mat::from_fn(op.dim(), op.dim(), |r, c| {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        // PT[(i,j),(k,l)] reads ρ with the chosen factor's indices swapped
        if subsystem == 1 {
            op.data[(i * db + l, k * db + j)]
        } else {
            op.data[(k * db + j, i * db + l)]
        }
    });
    Ok(OperatorMatrix { dims: op.dims.clone(), data })
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<OperatorMatrix> {
    partial_transpose_operator(rho.as_operator(), subsystem)
}

/// U = exp(-i h t) through the eigendecomposition of a Hermitian h.
pub fn expm_hermitian(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let herm = h.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let (vals, vecs) = h.eigh()?;
    let n = h.dim();
    let phases: Vec<C64> = vals.iter().map(|&e| C64::from_polar(1.0, -e * t)).collect();
    let scaled = Mat::from_fn(n, n, |i, k| vecs[(i, k)] * phases[k]);
    Ok(OperatorMatrix { dims: h.dims.clone(), data: &scaled * vecs.adjoint() })
}

/// Orthonormal basis of the numerical null space of `m`: right singular
/// vectors whose singular value is at most `tol` times the largest one.
pub fn kernel_basis(m: MatRef<'_, C64>, tol: f64) -> Result<Vec<Vec<C64>>> {
    assert!(tol > 0.0, "kernel tolerance must be positive");
    let n = m.ncols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let svd = m.svd().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let rank = s.nrows();
    let smax = if rank > 0 { s[0].re } else { 0.0 };
    let v = svd.V();
    let mut basis = Vec::new();
    for k in 0..n {
        let sk = if k < rank { s[k].re } else { 0.0 };
        if sk <= tol * smax {
            basis.push((0..n).map(|i| v[(i, k)]).collect());
        }
    }
    Ok(basis)
}
