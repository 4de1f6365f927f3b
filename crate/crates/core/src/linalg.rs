//! Dense complex linear algebra for small multipartite systems.
//!
//! Matrices are square and stored row-major. Composite systems follow the
//! usual left-to-right tensor convention: subsystem 0 is the leftmost factor,
//! so for three qubits the basis index of `|abc⟩` is `4a + 2b + c`.
//!
//! The Hermitian eigensolver is a cyclic complex Jacobi iteration. It is slow
//! for large matrices but exact to rounding for the 2 to 8 dimensional operators
//! this crate works with, and its output is fully deterministic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Numerical tolerances shared by every validation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max `|M[i][j] - conj(M[j][i])|` accepted as Hermitian.
    pub hermiticity: f64,
    /// Most negative eigenvalue accepted for a density matrix.
    pub psd: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub trace: f64,
    /// General comparison tolerance for derived quantities.
    pub comparison: f64,
    /// Off-diagonal Frobenius norm at which Jacobi stops, relative to `max(1, ‖M‖_F)`.
    pub jacobi_threshold: f64,
    pub jacobi_max_sweeps: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-10,
        psd: 1e-10,
        trace: 1e-10,
        comparison: 1e-9,
        jacobi_threshold: 1e-13,
        jacobi_max_sweeps: 100,
    };
}

pub const TOL: Tolerances = Tolerances::DEFAULT;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: i,
                    cols: row.len(),
                });
            }
            for (j, z) in row.into_iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        let mut rows = Vec::with_capacity(re.len());
        for (i, (r, m)) in re.iter().zip(im).enumerate() {
            if r.len() != m.len() {
                return Err(Error::NotSquare {
                    rows: re.len(),
                    row: i,
                    cols: m.len(),
                });
            }
            rows.push(r.iter().zip(m).map(|(&a, &b)| C64::new(a, b)).collect());
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|z| z.im).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on different dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// `self * other * self†`.
    pub fn sandwich(&self, other: &Self) -> Self {
        &(self * other) * &self.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix addition dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix subtraction dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
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

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Left-to-right Kronecker product of a list of factors.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Wraps values that must already be ascending (up to 1e-12).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, w) in values.windows(2).enumerate() {
            if w[0] > w[1] + 1e-12 {
                return Err(Error::NotAscending { index: i });
            }
        }
        Ok(Self(values))
    }

    /// Sorts ascending. Equal values keep their input order.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.0.last().copied()
    }

    /// Number of entries strictly above `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.0.iter().filter(|&&v| v > threshold).count()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Eigendecomposition `M = V diag(λ) V†` with eigenvalues ascending and
/// eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum,
    pub vectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.dim {
        for j in 0..a.dim {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Only the Hermitian part `(M + M†)/2` is used. Pivots are swept in fixed
/// row-major order, so identical input gives bit-identical output.
pub fn jacobi_eig(m: &ComplexMatrix) -> Result<Eigen> {
    let n = m.dim;
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let threshold = TOL.jacobi_threshold * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == TOL.jacobi_max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let values = order.iter().map(|&(val, _)| val).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j].1)]);
    Ok(Eigen {
        spectrum: Spectrum(values),
        vectors,
    })
}

/// One two-sided Jacobi rotation annihilating `a[p][q]`.
///
/// The unitary is `G = diag(1, e^{-iφ}) · R(θ)` on the `(p, q)` plane, where
/// `φ = arg a[p][q]` makes the pivot real and `R` is the real Jacobi rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let ph = phase.conj();
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -ph * s;
    let g_qq = ph * c;

    let n = a.dim;
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Eigendecomposition of a validated Hermitian operator.
pub fn hermitian_eig(m: &HermitianOperator) -> Result<Eigen> {
    jacobi_eig(m.matrix())
}

fn check_dims(dims: &[usize], dim: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != dim {
        return Err(Error::BadLocalDims {
            dims: dims.to_vec(),
            dim,
        });
    }
    Ok(())
}

/// Hermitian matrix tagged with the local dimensions of its subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, matrix.dim())?;
        let deviation = matrix.hermiticity_error();
        if deviation > TOL.hermiticity {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix, dims })
    }

    /// Single-system operator (one subsystem of full dimension).
    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        Self::new(matrix, vec![dim])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eig(&self) -> Result<Eigen> {
        jacobi_eig(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(self.eig()?.spectrum)
    }
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::from_operator(HermitianOperator::new(matrix, dims)?)
    }

    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        let trace = op.matrix().trace();
        if (trace.re - 1.0).abs() > TOL.trace || trace.im.abs() > TOL.trace {
            return Err(Error::NotNormalized { trace: trace.re });
        }
        let min = op.spectrum()?.min().unwrap_or(0.0);
        if min < -TOL.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { op })
    }

    /// Pure state `|ψ⟩⟨ψ|`; the vector is normalized here.
    pub fn pure(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { trace: norm * norm });
        }
        let psi: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        let m = ComplexMatrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj());
        Self::new(m, dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        let m = ComplexMatrix::identity(n).scale(1.0 / n as f64);
        Self::new(m, dims)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        self.op.spectrum()
    }

    pub fn purity(&self) -> f64 {
        (self.matrix() * self.matrix()).trace().re
    }
}

/// Mixed-radix digits of `index` for the given local dimensions (subsystem 0 first).
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Inverse of [`digits`].
pub fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn validate_keep(keep: &[usize], n_sites: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("keep set is empty".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidSubsystems(format!(
                "subsystem {} listed twice",
                w[0]
            )));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&k| k >= n_sites) {
        return Err(Error::InvalidSubsystems(format!(
            "subsystem {bad} out of range for {n_sites} subsystems"
        )));
    }
    Ok(sorted)
}

/// Partial trace of an arbitrary square matrix over every subsystem not in
/// `keep`. Returns the reduced matrix and the kept local dimensions.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_dims(dims, m.dim())?;
    let keep = validate_keep(keep, dims.len())?;
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let n_keep: usize = kept_dims.iter().product();
    let n_trace: usize = traced_dims.iter().product();

    let full_index = |kept: &[usize], tr: &[usize]| {
        let mut full = vec![0; dims.len()];
        for (&site, &x) in keep.iter().zip(kept) {
            full[site] = x;
        }
        for (&site, &x) in traced.iter().zip(tr) {
            full[site] = x;
        }
        from_digits(&full, dims)
    };

    let mut out = ComplexMatrix::zeros(n_keep);
    for i in 0..n_keep {
        let di = digits(i, &kept_dims);
        for j in 0..n_keep {
            let dj = digits(j, &kept_dims);
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..n_trace {
                let dt = digits(t, &traced_dims);
                acc += m[(full_index(&di, &dt), full_index(&dj, &dt))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok((out, kept_dims))
}

/// Reduced state on the subsystems in `keep` (indices into `rho.dims()`).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (m, kept_dims) = partial_trace_matrix(rho.matrix(), rho.dims(), keep)?;
    DensityMatrix::new(m, kept_dims)
}

/// Pauli matrices σ₀ = I, σ₁, σ₂, σ₃.
pub fn pauli(index: usize) -> ComplexMatrix {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let rows = match index {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        3 => [[o, z], [z, -o]],
        _ => panic!("Pauli index {index} out of range"),
    };
    ComplexMatrix::from_fn(2, |r, c| rows[r][c])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_identity_and_diagonal_paulis() {
        let i4 = kron(&pauli(0), &pauli(0));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let zz = kron(&pauli(3), &pauli(3));
        assert_eq!(
            zz,
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn kron_x_z_matches_elementwise_definition() {
        let (x, z) = (pauli(1), pauli(3));
        let xz = kron(&x, &z);
        for r in 0..4 {
            for col in 0..4 {
                let expected = x[(r >> 1, col >> 1)] * z[(r & 1, col & 1)];
                assert_eq!(xz[(r, col)], expected, "entry ({r},{col})");
            }
        }
        // (0,2) = x[0][1]*z[0][0] = 1, (1,3) = x[0][1]*z[1][1] = -1
        assert_eq!(xz[(0, 2)], c(1.0));
        assert_eq!(xz[(1, 3)], c(-1.0));
        assert_eq!(xz[(0, 0)], c(0.0));
    }

    #[test]
    fn eig_of_diagonal_and_pauli() {
        let d = ComplexMatrix::from_real_diagonal(&[0.8, 0.2, -0.2, -0.8]);
        let e = jacobi_eig(&d).unwrap();
        assert_eq!(e.spectrum.values(), &[-0.8, -0.2, 0.2, 0.8]);

        let e = jacobi_eig(&pauli(1)).unwrap();
        let v = e.spectrum.values();
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);

        let e = jacobi_eig(&pauli(2)).unwrap();
        let v = e.spectrum.values();
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_complex_matrix() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0), C64::new(1.0, -1.0), C64::new(0.0, 0.5)],
            vec![C64::new(1.0, 1.0), c(-1.0), c(0.3)],
            vec![C64::new(0.0, -0.5), c(0.3), c(0.5)],
        ])
        .unwrap();
        let e = jacobi_eig(&m).unwrap();
        let lam = ComplexMatrix::from_real_diagonal(e.spectrum.values());
        let rec = &(&e.vectors * &lam) * &e.vectors.adjoint();
        assert!(rec.max_abs_diff(&m) < 1e-12);
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn eig_is_deterministic_and_ties_keep_index_order() {
        let m = ComplexMatrix::from_real_diagonal(&[0.5, 0.1, 0.5, 0.1]);
        let e = jacobi_eig(&m).unwrap();
        assert_eq!(e.spectrum.values(), &[0.1, 0.1, 0.5, 0.5]);
        // columns follow original index order within ties: 1, 3, 0, 2
        assert_eq!(e.vectors[(1, 0)], c(1.0));
        assert_eq!(e.vectors[(3, 1)], c(1.0));
        assert_eq!(e.vectors[(0, 2)], c(1.0));
        assert_eq!(e.vectors[(2, 3)], c(1.0));
        let again = jacobi_eig(&m).unwrap();
        assert_eq!(again.spectrum, e.spectrum);
    }

    #[test]
    fn eig_handles_large_norm() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1e6), C64::new(3e5, 2e5)],
            vec![C64::new(3e5, -2e5), c(-2e6)],
        ])
        .unwrap();
        let e = jacobi_eig(&m).unwrap();
        let tr: f64 = e.spectrum.values().iter().sum();
        assert!((tr + 1e6).abs() < 1e-6);
    }

    #[test]
    fn from_rows_rejects_ragged_and_nan() {
        assert!(matches!(
            ComplexMatrix::from_rows(vec![vec![c(1.0), c(0.0)], vec![c(1.0)]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_rows(vec![vec![c(f64::NAN)]]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn hermitian_operator_validation() {
        let bad =
            ComplexMatrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]).unwrap();
        assert!(matches!(
            HermitianOperator::single(bad),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            HermitianOperator::new(pauli(1), vec![3]),
            Err(Error::BadLocalDims { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(neg, vec![2]),
            Err(Error::NotPositive { .. })
        ));
        let unnormalized = ComplexMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(
            DensityMatrix::new(unnormalized, vec![2]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let ra = ComplexMatrix::from_rows(vec![
            vec![c(0.7), C64::new(0.1, 0.2)],
            vec![C64::new(0.1, -0.2), c(0.3)],
        ])
        .unwrap();
        let rb = ComplexMatrix::from_real_diagonal(&[0.25, 0.25, 0.5]);
        let rho = DensityMatrix::new(kron(&ra, &rb), vec![2, 3]).unwrap();
        let reduced = partial_trace(&rho, &[0]).unwrap();
        assert!(reduced.matrix().max_abs_diff(&ra) < 1e-15);
        assert_eq!(reduced.dims(), &[2]);
        let reduced_b = partial_trace(&rho, &[1]).unwrap();
        assert!(reduced_b.matrix().max_abs_diff(&rb) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!(matches!(
            partial_trace(&rho, &[]),
            Err(Error::InvalidSubsystems(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[3]),
            Err(Error::InvalidSubsystems(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[1, 1]),
            Err(Error::InvalidSubsystems(_))
        ));
    }

    #[test]
    fn partial_trace_keeps_original_order() {
        // |0⟩_A |1⟩_B |0⟩_C, keep {C, A} -> state on (A, C) = |00⟩
        let mut amps = vec![c(0.0); 8];
        amps[0b010] = c(1.0);
        let rho = DensityMatrix::pure(&amps, vec![2, 2, 2]).unwrap();
        let ac = partial_trace(&rho, &[2, 0]).unwrap();
        assert_eq!(ac.dims(), &[2, 2]);
        assert_eq!(ac.matrix()[(0, 0)], c(1.0));
    }

    #[test]
    fn digits_round_trip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(from_digits(&digits(i, &dims), &dims), i);
        }
        assert_eq!(digits(5, &[2, 2, 2]), vec![1, 0, 1]);
    }

    #[test]
    fn spectrum_ordering() {
        assert!(Spectrum::new(vec![0.0, 1.0, 0.5]).is_err());
        let s = Spectrum::from_unsorted(vec![0.3, -1.0, 0.2]);
        assert_eq!(s.values(), &[-1.0, 0.2, 0.3]);
        assert_eq!(s.count_above(0.0), 2);
    }
}
