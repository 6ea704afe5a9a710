//! Dense complex linear algebra: Hermitian eigendecomposition, Kronecker
//! products, and unitary evolution of density matrices.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! after construction and safe to share across threads.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;

/// Relative tolerance on the Hermiticity defect `max |A - A†|`.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster when
/// fixing the eigenvector order.
const DEGENERACY_GAP: f64 = 1e-10;

/// Dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadEntryCount {
                len: entries.len(),
                rows,
                cols,
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        // (i, k, j) order keeps both operands streaming row-major.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        let out = (0..self.rows)
            .map(|i| v.iter().enumerate().map(|(j, x)| self.get(i, j) * x).sum())
            .collect();
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `max |A - A†|` over all entries; zero for non-square matrices is
    /// never reported, callers check squareness first.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                defect = defect.max(d);
            }
        }
        defect
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: other.rows,
            });
        }
        Ok(())
    }
}

/// Square matrix validated to be Hermitian within [`HERMITICITY_TOL`].
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let defect = matrix.hermiticity_defect();
        let tolerance = HERMITICITY_TOL * matrix.max_abs();
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(Self {
            matrix,
            hermiticity_defect: defect,
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        Self {
            matrix: m,
            hermiticity_defect: 0.0,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Matrix whose columns are the eigenvectors, ordered like `eigenvalues`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Rebuild `V Λ V†`; used by tests to bound the reconstruction residual.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| v.get(i, k) * self.eigenvalues[k] * v.get(j, k).conj())
                .sum()
        })
    }
}

/// Hermitian eigendecomposition with deterministic ordering.
///
/// The bulk factorization is followed by a cyclic Jacobi polish in the
/// eigenvector frame, which pins the reconstruction residual near machine
/// precision on every input (the tridiagonalization route alone can leave
/// ~1e-9 residuals on a small fraction of matrices).
///
/// Eigenvalues are sorted ascending. Within a degenerate cluster (gap below
/// 1e-10) eigenvectors are ordered by the index of their largest-magnitude
/// component, and every eigenvector is rescaled so that its largest component
/// is real and positive. This keeps golden outputs reproducible.
pub fn eigh(a: &HermitianOperator) -> SpectralDecomposition {
    let d = a.dim();
    let m = a.matrix();
    // Symmetrize before handing off; the constructor already bounded the
    // defect so this shifts entries by at most HERMITICITY_TOL * max_abs.
    let sym = ComplexMatrix::from_fn(d, d, |i, j| {
        (m.get(i, j) + m.get(j, i).conj()) * Complex64::new(0.5, 0.0)
    });
    let na = DMatrix::<Complex64>::from_fn(d, d, |i, j| sym.get(i, j));
    let eig = na.symmetric_eigen();

    let mut vectors = ComplexMatrix::from_fn(d, d, |i, k| eig.eigenvectors[(i, k)]);
    let eigenvalues = jacobi_polish(&sym, &mut vectors);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        eigenvalues[i]
            .partial_cmp(&eigenvalues[j])
            .expect("eigenvalues are finite")
    });

    let mut eigenvalues: Vec<f64> = order.iter().map(|&k| eigenvalues[k]).collect();
    let mut columns: Vec<Vec<Complex64>> = order.iter().map(|&k| vectors.column(k)).collect();

    // Deterministic tie-break inside degenerate clusters.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && eigenvalues[end] - eigenvalues[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            let mut cluster: Vec<(usize, Vec<Complex64>, f64)> = columns[start..end]
                .iter()
                .map(|v| (dominant_index(v), v.clone(), 0.0))
                .collect();
            let vals: Vec<f64> = eigenvalues[start..end].to_vec();
            for (slot, (_, _, lam)) in cluster.iter_mut().enumerate() {
                *lam = vals[slot];
            }
            cluster.sort_by_key(|(idx, _, _)| *idx);
            for (slot, (_, v, lam)) in cluster.into_iter().enumerate() {
                eigenvalues[start + slot] = lam;
                columns[start + slot] = v;
            }
        }
        start = end;
    }

    for v in &mut columns {
        fix_phase(v);
    }

    let mut eigenvectors = ComplexMatrix::zeros(d, d);
    for (k, v) in columns.iter().enumerate() {
        for (i, &z) in v.iter().enumerate() {
            eigenvectors.set(i, k, z);
        }
    }

    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Drive `V† A V` to diagonal form by cyclic Jacobi rotations, accumulating
/// the rotations into `vectors`. Returns the diagonal as eigenvalues.
///
/// With `vectors` already close to an eigenbasis this converges in one or
/// two sweeps; it remains a complete (if slower) eigensolver for an
/// arbitrary orthonormal starting frame.
fn jacobi_polish(a: &ComplexMatrix, vectors: &mut ComplexMatrix) -> Vec<f64> {
    let d = a.rows();
    let av = a.mul(vectors).expect("square times square");
    let mut b = vectors.adjoint().mul(&av).expect("square times square");

    let scale = b.max_abs();
    let tol = 1e-15 * scale;
    for _sweep in 0..30 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(b.get(p, q).norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let bpq = b.get(p, q);
                let r = bpq.norm();
                if r <= tol {
                    continue;
                }
                // Absorb the phase of b_pq, then apply the real rotation
                // that zeroes the symmetrized off-diagonal pair.
                let u = bpq / r;
                let app = b.get(p, p).re;
                let aqq = b.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let g_qp = -u.conj() * s;
                let g_qq = u.conj() * c;

                // B <- G† B G: first the column pass (B G)...
                for k in 0..d {
                    let bkp = b.get(k, p);
                    let bkq = b.get(k, q);
                    b.set(k, p, bkp * c + bkq * g_qp);
                    b.set(k, q, bkp * s + bkq * g_qq);
                }
                // ...then the row pass (G† (B G)).
                for k in 0..d {
                    let bpk = b.get(p, k);
                    let bqk = b.get(q, k);
                    b.set(p, k, bpk * c + bqk * g_qp.conj());
                    b.set(q, k, bpk * s + bqk * g_qq.conj());
                }
                b.set(p, q, Complex64::new(0.0, 0.0));
                b.set(q, p, Complex64::new(0.0, 0.0));
                b.set(p, p, Complex64::new(b.get(p, p).re, 0.0));
                b.set(q, q, Complex64::new(b.get(q, q).re, 0.0));

                for k in 0..d {
                    let vkp = vectors.get(k, p);
                    let vkq = vectors.get(k, q);
                    vectors.set(k, p, vkp * c + vkq * g_qp);
                    vectors.set(k, q, vkp * s + vkq * g_qq);
                }
            }
        }
    }
    (0..d).map(|k| b.get(k, k).re).collect()
}

/// Index of the largest-magnitude component, smallest index on ties.
fn dominant_index(v: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mag = v[0].norm();
    for (i, z) in v.iter().enumerate().skip(1) {
        let mag = z.norm();
        if mag > best_mag + 1e-15 {
            best = i;
            best_mag = mag;
        }
    }
    best
}

/// Rotate the global phase so the dominant component is real positive.
fn fix_phase(v: &mut [Complex64]) {
    let idx = dominant_index(v);
    let pivot = v[idx];
    let mag = pivot.norm();
    if mag > 0.0 {
        let phase = pivot.conj() / mag;
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Kronecker product: entry `(i*rB + k, j*cB + l) = A[i,j] * B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Conjugate a density matrix by `exp(-i H phi)`, computed spectrally.
///
/// The spectral route is exact for diagonal generators and correct for any
/// Hermitian `H`; it preserves the trace and the eigenvalue multiset.
pub fn evolve_unitary(rho: &DensityMatrix, h: &HermitianOperator, phi: f64) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        });
    }
    let spec = eigh(h);
    let evolved = conjugate_by_exponential(rho.matrix(), &spec, phi);
    DensityMatrix::new(evolved)
}

/// `U m U†` with `U = V exp(-i Λ phi) V†` taken from `spec`.
pub(crate) fn conjugate_by_exponential(
    m: &ComplexMatrix,
    spec: &SpectralDecomposition,
    phi: f64,
) -> ComplexMatrix {
    let d = spec.dim();
    let v = spec.eigenvectors();
    let phases: Vec<Complex64> = spec
        .eigenvalues()
        .iter()
        .map(|&lam| Complex64::from_polar(1.0, -lam * phi))
        .collect();
    let u = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| v.get(i, k) * phases[k] * v.get(j, k).conj())
            .sum()
    });
    let um = u.mul(m).expect("dimensions checked");
    um.mul(&u.adjoint()).expect("dimensions checked")
}

/// Pauli X.
pub fn sigma_x() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    ComplexMatrix::new(2, 2, vec![o, l, l, o]).expect("static entries")
}

/// Pauli Y.
pub fn sigma_y() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(
        2,
        2,
        vec![o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o],
    )
    .expect("static entries")
}

/// Pauli Z.
pub fn sigma_z() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(
        2,
        2,
        vec![Complex64::new(1.0, 0.0), o, o, Complex64::new(-1.0, 0.0)],
    )
    .expect("static entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{pure_to_density, PureState, RngSeed};
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw = ComplexMatrix::from_fn(dim, dim, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let herm = raw
            .add(&raw.adjoint())
            .unwrap()
            .scale(c(0.5, 0.0));
        HermitianOperator::new(herm).unwrap()
    }

    #[test]
    fn eigh_identity_is_flat_spectrum() {
        let id = HermitianOperator::new(ComplexMatrix::identity(3)).unwrap();
        let spec = eigh(&id);
        for &lam in spec.eigenvalues() {
            assert!((lam - 1.0).abs() < 1e-12);
        }
        let v = spec.eigenvectors();
        let gram = v.adjoint().mul(v).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn eigh_sigma_x_analytic() {
        let sx = HermitianOperator::new(sigma_x()).unwrap();
        let spec = eigh(&sx);
        assert!((spec.eigenvalues()[0] + 1.0).abs() < 1e-12);
        assert!((spec.eigenvalues()[1] - 1.0).abs() < 1e-12);
        // Eigenvectors are (|0> -/+ ... )/sqrt(2) up to phase; compare the
        // rank-1 projectors instead of the raw vectors.
        let minus = spec.eigenvector(0);
        let plus = spec.eigenvector(1);
        let s = 1.0 / 2.0_f64.sqrt();
        let overlap_minus = (minus[0] * s - minus[1] * s).norm();
        let overlap_plus = (plus[0] * s + plus[1] * s).norm();
        assert!((overlap_minus - 1.0).abs() < 1e-10);
        assert!((overlap_plus - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        let h = random_hermitian(8, 17);
        let spec = eigh(&h);
        let resid = spec.reconstruct().max_abs_diff(h.matrix());
        assert!(
            resid <= 1e-9 * h.matrix().max_abs(),
            "residual {resid:.3e} too large"
        );
        let v = spec.eigenvectors();
        let gram = v.adjoint().mul(v).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(8)) <= 1e-10);
        for w in spec.eigenvalues().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigh_is_deterministic_for_degenerate_spectra() {
        // diag(1, 0, 0, -1) has a two-fold degenerate eigenvalue.
        let h = HermitianOperator::from_diagonal(&[1.0, 0.0, 0.0, -1.0]);
        let a = eigh(&h);
        let b = eigh(&h);
        assert_eq!(a.eigenvectors().entries(), b.eigenvectors().entries());
        // Cluster members come out ordered by dominant component index.
        let v1 = a.eigenvector(1);
        let v2 = a.eigenvector(2);
        assert!(dominant_index(&v1) < dominant_index(&v2));
    }

    #[test]
    fn hermitian_rejects_non_square_and_defect() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            HermitianOperator::new(rect),
            Err(Error::NotSquare { .. })
        ));
        let skew = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(
            HermitianOperator::new(skew),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn matrix_rejects_bad_entries() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::BadEntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn kron_identity_blocks() {
        let id2 = ComplexMatrix::identity(2);
        let id4 = kron(&id2, &id2);
        assert!(id4.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn kron_builds_two_qubit_generator() {
        // (sigma_z (x) I + I (x) sigma_z) / 2 = diag(1, 0, 0, -1)
        let id2 = ComplexMatrix::identity(2);
        let sz = sigma_z();
        let h2 = kron(&sz, &id2)
            .add(&kron(&id2, &sz))
            .unwrap()
            .scale(c(0.5, 0.0));
        let expected = {
            let mut m = ComplexMatrix::zeros(4, 4);
            m.set(0, 0, c(1.0, 0.0));
            m.set(3, 3, c(-1.0, 0.0));
            m
        };
        assert!(h2.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_of_diagonals() {
        let a = ComplexMatrix::new(2, 2, vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)])
            .unwrap();
        let b = ComplexMatrix::new(2, 2, vec![c(5.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(7.0, 0.0)])
            .unwrap();
        let k = kron(&a, &b);
        let diag: Vec<f64> = (0..4).map(|i| k.get(i, i).re).collect();
        assert_eq!(diag, vec![10.0, 14.0, 15.0, 21.0]);
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let psi = PureState::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let rho = pure_to_density(&psi);
        let h = HermitianOperator::from_diagonal(&[0.3, -0.7]);
        let out = evolve_unitary(&rho, &h, 0.0).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn evolve_plus_state_to_minus_state() {
        // |+><+| under sigma_z/2 at phi = pi flips the off-diagonal sign:
        // (|0> + e^{-i pi}|1>)/sqrt(2) = |->, checked by hand.
        let s = 1.0 / 2.0_f64.sqrt();
        let plus = PureState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let rho = pure_to_density(&plus);
        let h = HermitianOperator::new(sigma_z().scale(c(0.5, 0.0))).unwrap();
        let out = evolve_unitary(&rho, &h, std::f64::consts::PI).unwrap();
        let minus = PureState::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap();
        let expected = pure_to_density(&minus);
        assert!(out.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    /// Taylor-series exponential on a scaled matrix; test-only oracle kept
    /// independent of the spectral route used by `evolve_unitary`.
    fn expm_series(m: &ComplexMatrix) -> ComplexMatrix {
        let d = m.rows();
        let scale = 1 << 10;
        let scaled = m.scale(c(1.0 / scale as f64, 0.0));
        let mut term = ComplexMatrix::identity(d);
        let mut sum = ComplexMatrix::identity(d);
        for k in 1..24 {
            term = term.mul(&scaled).unwrap().scale(c(1.0 / k as f64, 0.0));
            sum = sum.add(&term).unwrap();
        }
        let mut out = sum;
        for _ in 0..10 {
            out = out.mul(&out.clone()).unwrap();
        }
        out
    }

    #[test]
    fn evolve_matches_series_exponential() {
        let seed = RngSeed::new(5);
        let psi = crate::states::random_haar_pure(2, seed).unwrap();
        let rho = pure_to_density(&psi);
        let h = random_hermitian(2, 99);
        let phi = 0.7312;
        let spectral = evolve_unitary(&rho, &h, phi).unwrap();

        let generator = h.matrix().scale(c(0.0, -phi));
        let u = expm_series(&generator);
        let series = u.mul(rho.matrix()).unwrap().mul(&u.adjoint()).unwrap();
        assert!(spectral.matrix().max_abs_diff(&series) < 1e-10);
    }

    #[test]
    fn evolve_preserves_spectrum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..10 {
            let dim = 2 + (trial % 3);
            let rho = crate::states::random_mixed(dim, dim, RngSeed::new(100 + trial as u64)).unwrap();
            let h = random_hermitian(dim, 200 + trial as u64);
            let phi = 4.0 * rng.gen::<f64>() - 2.0;
            let out = evolve_unitary(&rho, &h, phi).unwrap();
            assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(out.matrix().trace().im.abs() < 1e-12);
            let before = eigh(rho.hermitian()).eigenvalues().to_vec();
            let after = eigh(out.hermitian()).eigenvalues().to_vec();
            for (a, b) in before.iter().zip(&after) {
                assert!((a - b).abs() < 1e-10, "eigenvalue drift {a} vs {b}");
            }
        }
    }

    #[test]
    fn evolve_rejects_dimension_mismatch() {
        let psi = PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let rho = pure_to_density(&psi);
        let h = HermitianOperator::from_diagonal(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            evolve_unitary(&rho, &h, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
