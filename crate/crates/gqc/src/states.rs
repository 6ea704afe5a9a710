//! Probe-state types and seeded random-state generators.
//!
//! Sampling is deterministic per seed: every generator owns a ChaCha stream
//! derived from the caller's [`RngSeed`], so concurrent generation with
//! distinct seeds is reproducible and race-free.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, HermitianOperator, SpectralDecomposition};

/// Absolute tolerance on the state-vector norm.
pub const NORM_TOL: f64 = 1e-10;
/// Absolute tolerance on the density-matrix trace.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below this are rejected; values in `[-PSD_TOL, 0)` are
/// clamped to zero with the defect recorded.
pub const PSD_TOL: f64 = 1e-10;

/// Seed for all randomized operations. Derived sub-seeds give independent,
/// scheduling-invariant streams per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(u64);

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    /// Deterministically derive an independent stream for `index`.
    pub fn derive(&self, index: u64) -> Self {
        Self(splitmix64(self.0 ^ splitmix64(index.wrapping_add(0x9e37_79b9))))
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validate `sum |a_i|^2 = 1` within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionTooSmall { dim: 0 });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let defect = (norm_sq.sqrt() - 1.0).abs();
        if defect > NORM_TOL {
            return Err(Error::NotNormalized { defect });
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    /// `(|k> + |l>)/sqrt(2)`.
    pub fn equal_superposition(dim: usize, k: usize, l: usize) -> Result<Self> {
        if k >= dim || l >= dim || k == l {
            return Err(Error::InvalidArgument(format!(
                "superposition indices ({k}, {l}) invalid for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        amplitudes[k] = s;
        amplitudes[l] = s;
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Self {
        let norm: f64 = amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self { amplitudes }
    }
}

/// Trace-one positive-semidefinite Hermitian matrix with its spectral
/// decomposition cached at validation time.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    hermitian: HermitianOperator,
    spectrum: SpectralDecomposition,
    probabilities: Vec<f64>,
    trace_defect: f64,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    /// Validate Hermiticity, unit trace, and positivity. Eigenvalues in
    /// `[-PSD_TOL, 0)` are clamped to zero (the raw minimum stays recorded
    /// in `min_eigenvalue`); anything more negative is rejected.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let hermitian = HermitianOperator::new(matrix)?;
        let trace = hermitian.matrix().trace();
        let trace_defect = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_defect > TRACE_TOL {
            return Err(Error::TraceDefect {
                defect: trace_defect,
            });
        }
        let spectrum = eigh(&hermitian);
        let min_eigenvalue = spectrum.eigenvalues()[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive {
                value: min_eigenvalue,
            });
        }
        let probabilities = spectrum
            .eigenvalues()
            .iter()
            .map(|&p| p.max(0.0))
            .collect();
        Ok(Self {
            hermitian,
            spectrum,
            probabilities,
            trace_defect,
            min_eigenvalue,
        })
    }

    pub fn dim(&self) -> usize {
        self.hermitian.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.hermitian.matrix()
    }

    pub fn hermitian(&self) -> &HermitianOperator {
        &self.hermitian
    }

    /// Eigendecomposition computed during validation (raw eigenvalues).
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Eigenvalues clamped to `[0, 1]`-side positivity, ascending.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn trace_defect(&self) -> f64 {
        self.trace_defect
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.probabilities.iter().map(|p| p * p).sum()
    }
}

/// `|psi><psi|` as a validated density matrix.
pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    let d = psi.dim();
    let a = psi.amplitudes();
    let m = ComplexMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj());
    DensityMatrix::new(m).expect("projector of a normalized state is a valid density matrix")
}

/// Haar-random pure state: a standard complex Gaussian vector, normalized.
pub fn random_haar_pure(dim: usize, seed: RngSeed) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim });
    }
    let mut rng = seed.rng();
    let amplitudes: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    Ok(PureState::from_unnormalized(amplitudes))
}

/// Random mixed state from the Ginibre construction:
/// `rho = G G† / Tr(G G†)` with `G` a `dim x rank` complex Gaussian matrix.
pub fn random_mixed(dim: usize, rank: usize, seed: RngSeed) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim });
    }
    if rank < 1 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = seed.rng();
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let gg = g.mul(&g.adjoint()).expect("shape by construction");
    let trace = gg.trace().re;
    let rho = gg.scale(Complex64::new(1.0 / trace, 0.0));
    DensityMatrix::new(rho)
}

/// Trace distance `0.5 * sum |eig(a - b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let diff = a.matrix().sub(b.matrix())?;
    let herm = HermitianOperator::new(diff)?;
    let spec = eigh(&herm);
    Ok(0.5 * spec.eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
}
