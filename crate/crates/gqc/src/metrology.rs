//! Quantum Fisher information and generalized coherence.
//!
//! Three routes to the same quantity are kept deliberately independent so
//! they can cross-check each other:
//!
//! * [`qfi_pure`] / [`qfi_mixed`] — closed forms in the probe's eigenbasis,
//! * [`sld_qfi`] — the symmetric logarithmic derivative route,
//! * [`gqc_pure`] / [`gqc_mixed`] — the pairwise coherence decomposition,
//!   whose square must reproduce the Fisher information.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, HermitianOperator, SpectralDecomposition};
use crate::states::{random_haar_pure, random_mixed, DensityMatrix, PureState, RngSeed};

/// Probe eigenvalues below `SUPPORT_CUTOFF * Tr(rho)` are treated as zero;
/// eigenvalue pairs whose sum falls below the cutoff are skipped wherever a
/// `1/(p_i + p_j)` weight appears. Keeps all three routes consistent on
/// rank-deficient states.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Floor for relative deviations when the reference value is near zero.
pub const REL_DEV_FLOOR: f64 = 1e-12;

const DIAGONAL_TOL: f64 = 1e-12;

/// Parametrization generator with its spectral decomposition cached.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    operator: HermitianOperator,
    spectrum: SpectralDecomposition,
    is_diagonal: bool,
}

impl Hamiltonian {
    pub fn new(operator: HermitianOperator) -> Self {
        let spectrum = eigh(&operator);
        let m = operator.matrix();
        let d = operator.dim();
        let mut is_diagonal = true;
        'outer: for i in 0..d {
            for j in 0..d {
                if i != j && m.get(i, j).norm() > DIAGONAL_TOL {
                    is_diagonal = false;
                    break 'outer;
                }
            }
        }
        Self {
            operator,
            spectrum,
            is_diagonal,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::new(HermitianOperator::from_diagonal(diag))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Generator eigenvalues, ascending.
    pub fn levels(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_diagonal
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// `s * H`, re-decomposed so the level ordering stays canonical.
    pub fn scaled(&self, s: f64) -> Self {
        let m = self.operator.matrix().scale(Complex64::new(s, 0.0));
        Self::new(HermitianOperator::new(m).expect("scaling preserves Hermiticity"))
    }
}

/// Basis in which a coherence value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoherenceBasis {
    HamiltonianEigenbasis,
    Storage,
}

/// One `(i, j)` contribution to the squared generalized coherence.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    /// `p_i + p_j` for mixed probes, `1` for pure probes.
    pub weight: f64,
    /// Squared pairwise coherence `M_{i,j}^2`.
    pub m2: f64,
}

/// Generalized coherence of a probe with its full pairwise audit trail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GqcReport {
    pub gqc: f64,
    pub gqc_squared: f64,
    pub coherence_l1: f64,
    pub basis: CoherenceBasis,
    #[serde(rename = "pairs")]
    pub pair_terms: Vec<PairTerm>,
}

/// Symmetric logarithmic derivative with its Lyapunov-equation defect.
#[derive(Debug, Clone)]
pub struct SldOperator {
    pub matrix: HermitianOperator,
    /// `max |(L rho + rho L)/2 - d_rho|` relative to `max |d_rho|`.
    pub residual: f64,
}

/// Sign convention applied to the pairwise summand of the mixed-state
/// decomposition. `Flipped` is a deliberately corrupted variant, kept as a
/// mutation fixture so the `verify` gate can demonstrate that it detects a
/// broken implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SummandSign {
    #[default]
    Standard,
    Flipped,
}

impl SummandSign {
    fn factor(self) -> f64 {
        match self {
            SummandSign::Standard => 1.0,
            SummandSign::Flipped => -1.0,
        }
    }
}

/// `sum_{i != j} |rho_ij|` in the storage basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    l1_of_matrix(rho.matrix())
}

/// `sum_{i != j} |rho_ij|` after rotating into the generator's eigenbasis.
pub fn l1_coherence_in_eigenbasis(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dims(rho.dim(), h.dim())?;
    if h.is_diagonal() {
        return Ok(l1_coherence(rho));
    }
    let w = h.spectrum().eigenvectors();
    let rotated = w.adjoint().mul(rho.matrix())?.mul(w)?;
    Ok(l1_of_matrix(&rotated))
}

fn l1_of_matrix(m: &ComplexMatrix) -> f64 {
    let d = m.rows();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m.get(i, j).norm();
            }
        }
    }
    sum
}

/// Fisher information of a pure probe: `4 (<H^2> - <H>^2)`.
///
/// Evaluated as `4 |(H - <H>)|psi>|^2`, the two-pass form of the variance;
/// subtracting `<H>^2` directly loses all significance when the probe is
/// close to a generator eigenstate.
pub fn qfi_pure(psi: &PureState, h: &Hamiltonian) -> Result<f64> {
    check_dims(psi.dim(), h.dim())?;
    let hpsi = h.operator().matrix().apply(psi.amplitudes())?;
    let mean: f64 = psi
        .amplitudes()
        .iter()
        .zip(&hpsi)
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    let variance: f64 = psi
        .amplitudes()
        .iter()
        .zip(&hpsi)
        .map(|(a, b)| (b - a * mean).norm_sqr())
        .sum();
    Ok(4.0 * variance)
}

/// Fisher information of a mixed probe from its eigendecomposition:
/// `4 sum_{i<j} (p_i - p_j)^2 / (p_i + p_j) |<psi_i|H|psi_j>|^2`,
/// skipping pairs below the support cutoff.
pub fn qfi_mixed(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dims(rho.dim(), h.dim())?;
    let d = rho.dim();
    let p = effective_probabilities(rho);
    let v = rho.spectrum().eigenvectors();
    let h_in_rho_basis = v.adjoint().mul(h.operator().matrix())?.mul(v)?;
    let mut total = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let weight = p[i] + p[j];
            if weight < SUPPORT_CUTOFF {
                continue;
            }
            let diff = p[i] - p[j];
            total += 4.0 * diff * diff / weight * h_in_rho_basis.get(i, j).norm_sqr();
        }
    }
    Ok(total)
}

/// Fisher information through the symmetric logarithmic derivative.
///
/// With a unitary parametrization the state derivative at the origin is
/// `d_rho = -i [H, rho]`. `L` solves `d_rho = (L rho + rho L)/2` entrywise in
/// the probe's eigenbasis and the information is `Tr(rho L^2)`.
pub fn sld_qfi(rho: &DensityMatrix, h: &Hamiltonian) -> Result<(f64, SldOperator)> {
    check_dims(rho.dim(), h.dim())?;
    let d = rho.dim();
    let hm = h.operator().matrix();
    let commutator = hm.mul(rho.matrix())?.sub(&rho.matrix().mul(hm)?)?;
    let d_rho = commutator.scale(Complex64::new(0.0, -1.0));

    let p = effective_probabilities(rho);
    let v = rho.spectrum().eigenvectors();
    let d_rho_eig = v.adjoint().mul(&d_rho)?.mul(v)?;

    let mut l_eig = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        for l in 0..d {
            let weight = p[k] + p[l];
            if weight < SUPPORT_CUTOFF {
                continue;
            }
            l_eig.set(k, l, d_rho_eig.get(k, l) * (2.0 / weight));
        }
    }

    let mut fisher = 0.0;
    for (k, &pk) in p.iter().enumerate() {
        for l in 0..d {
            fisher += pk * l_eig.get(k, l).norm_sqr();
        }
    }

    let l_storage = v.mul(&l_eig)?.mul(&v.adjoint())?;
    let lhs = l_storage
        .mul(rho.matrix())?
        .add(&rho.matrix().mul(&l_storage)?)?
        .scale(Complex64::new(0.5, 0.0));
    let defect = lhs.max_abs_diff(&d_rho);
    let scale = d_rho.max_abs();
    let residual = if scale > 0.0 { defect / scale } else { defect };

    let sld = SldOperator {
        matrix: HermitianOperator::new(l_storage)?,
        residual,
    };
    Ok((fisher, sld))
}

/// Generalized coherence of a pure probe:
/// `M^2 = sum_{i<j} 4 |a_i a_j|^2 (lambda_i - lambda_j)^2` with amplitudes
/// taken in the generator's eigenbasis.
pub fn gqc_pure(psi: &PureState, h: &Hamiltonian) -> Result<GqcReport> {
    gqc_pure_with_sign(psi, h, SummandSign::Standard)
}

/// [`gqc_pure`] with an explicit summand sign (mutation fixture hook).
pub fn gqc_pure_with_sign(psi: &PureState, h: &Hamiltonian, sign: SummandSign) -> Result<GqcReport> {
    check_dims(psi.dim(), h.dim())?;
    let a = amplitudes_in_h_basis(psi, h)?;
    let levels = h.levels();
    let d = a.len();

    let mut pair_terms = Vec::with_capacity(d * (d - 1) / 2);
    let mut total = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let gap = levels[i] - levels[j];
            let m2 = sign.factor() * 4.0 * a[i].norm_sqr() * a[j].norm_sqr() * gap * gap;
            pair_terms.push(PairTerm {
                i,
                j,
                weight: 1.0,
                m2,
            });
            total += m2;
        }
    }

    let abs_sum: f64 = a.iter().map(|z| z.norm()).sum();
    let coherence_l1 = abs_sum * abs_sum - 1.0;

    Ok(GqcReport {
        gqc: total.max(0.0).sqrt(),
        gqc_squared: total,
        coherence_l1: coherence_l1.max(0.0),
        basis: basis_label(h),
        pair_terms,
    })
}

/// The rejected l1-style alternative:
/// `sum_{i<j} 2 |a_i a_j| |lambda_i - lambda_j|`. Always at least as large
/// as [`gqc_pure`]'s value, with equality when at most one pair contributes.
pub fn gqc_pure_alt(psi: &PureState, h: &Hamiltonian) -> Result<f64> {
    check_dims(psi.dim(), h.dim())?;
    let a = amplitudes_in_h_basis(psi, h)?;
    let levels = h.levels();
    let d = a.len();
    let mut total = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            total += 2.0 * a[i].norm() * a[j].norm() * (levels[i] - levels[j]).abs();
        }
    }
    Ok(total)
}

/// Generalized coherence of a mixed probe via the pairwise eigenstate
/// decomposition.
///
/// For probe eigenpairs `(p_i, psi_i)` with coefficients
/// `a_k^(i) = <k|psi_i>` in the generator's eigenbasis,
///
/// ```text
/// M_{i,j}^2 = ((p_i - p_j)/(p_i + p_j))^2
///             * sum_{k<l} -4 Re(s_k conj(s_l)) (lambda_k - lambda_l)^2,
/// s_k = conj(a_k^(i)) a_k^(j),
/// M^2  = sum_{i<j} (p_i + p_j) M_{i,j}^2.
/// ```
///
/// Individual `(k, l)` summands may be negative; each completed `M_{i,j}^2`
/// is nonnegative up to rounding.
pub fn gqc_mixed(rho: &DensityMatrix, h: &Hamiltonian) -> Result<GqcReport> {
    gqc_mixed_with_sign(rho, h, SummandSign::Standard)
}

/// [`gqc_mixed`] with an explicit summand sign (mutation fixture hook).
pub fn gqc_mixed_with_sign(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    sign: SummandSign,
) -> Result<GqcReport> {
    check_dims(rho.dim(), h.dim())?;
    let d = rho.dim();
    let p = effective_probabilities(rho);
    let levels = h.levels();
    // Column i holds psi_i in the generator's eigenbasis.
    let coeffs = h
        .spectrum()
        .eigenvectors()
        .adjoint()
        .mul(rho.spectrum().eigenvectors())?;

    let mut pair_terms = Vec::new();
    let mut total = 0.0;
    let mut overlap = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        for j in (i + 1)..d {
            let weight = p[i] + p[j];
            if weight < SUPPORT_CUTOFF {
                continue;
            }
            let ratio = (p[i] - p[j]) / weight;
            let m2 = if ratio == 0.0 {
                0.0
            } else {
                for (k, slot) in overlap.iter_mut().enumerate() {
                    *slot = coeffs.get(k, i).conj() * coeffs.get(k, j);
                }
                let mut pair_sum = 0.0;
                for k in 0..d {
                    for l in (k + 1)..d {
                        let gap = levels[k] - levels[l];
                        if gap == 0.0 {
                            continue;
                        }
                        let bracket = (overlap[k] * overlap[l].conj()).re;
                        pair_sum += sign.factor() * (-4.0) * bracket * gap * gap;
                    }
                }
                ratio * ratio * pair_sum
            };
            pair_terms.push(PairTerm {
                i,
                j,
                weight,
                m2,
            });
            total += weight * m2;
        }
    }

    Ok(GqcReport {
        gqc: total.max(0.0).sqrt(),
        gqc_squared: total,
        coherence_l1: l1_coherence_in_eigenbasis(rho, h)?,
        basis: basis_label(h),
        pair_terms,
    })
}

/// Whether the probe is sampled pure or mixed during identity verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Pure,
    Mixed,
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyMode::Pure => write!(f, "pure"),
            VerifyMode::Mixed => write!(f, "mixed"),
        }
    }
}

/// One verification trial: Fisher information against squared coherence.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub dim: usize,
    pub rank: usize,
    pub f_q: f64,
    pub m_squared: f64,
    pub rel_dev: f64,
}

/// Outcome of an identity-verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct IdentitySummary {
    pub mode: VerifyMode,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub max_rel_dev: f64,
    pub mean_rel_dev: f64,
    pub records: Vec<TrialRecord>,
}

/// Sample random probes and generators, then compare the Fisher information
/// with the squared generalized coherence trial by trial.
///
/// Generators are diagonal with i.i.d. uniform `[-1, 1]` levels; mixed-mode
/// trials cycle the probe rank through `1..=dim`. Each trial draws its RNG
/// stream from `(seed, trial)`, so results are independent of evaluation
/// order.
pub fn verify_identity(
    dim: usize,
    trials: u64,
    seed: RngSeed,
    mode: VerifyMode,
) -> Result<IdentitySummary> {
    verify_identity_with_sign(dim, trials, seed, mode, SummandSign::Standard)
}

/// [`verify_identity`] with an explicit summand sign (mutation fixture hook).
pub fn verify_identity_with_sign(
    dim: usize,
    trials: u64,
    seed: RngSeed,
    mode: VerifyMode,
    sign: SummandSign,
) -> Result<IdentitySummary> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "trials must be at least 1".to_string(),
        ));
    }

    let mut records = Vec::with_capacity(trials as usize);
    let mut max_rel_dev = 0.0f64;
    let mut sum_rel_dev = 0.0f64;

    for trial in 0..trials {
        let trial_seed = seed.derive(trial);
        let h = random_diagonal_hamiltonian(dim, trial_seed.derive(0));
        let state_seed = trial_seed.derive(1);

        let (rank, f_q, m_squared) = match mode {
            VerifyMode::Pure => {
                let psi = random_haar_pure(dim, state_seed)?;
                let f_q = qfi_pure(&psi, &h)?;
                let report = gqc_pure_with_sign(&psi, &h, sign)?;
                (1, f_q, report.gqc_squared)
            }
            VerifyMode::Mixed => {
                let rank = (trial as usize % dim) + 1;
                let rho = random_mixed(dim, rank, state_seed)?;
                let f_q = qfi_mixed(&rho, &h)?;
                let report = gqc_mixed_with_sign(&rho, &h, sign)?;
                (rank, f_q, report.gqc_squared)
            }
        };

        let rel_dev = (f_q - m_squared).abs() / f_q.max(REL_DEV_FLOOR);
        max_rel_dev = max_rel_dev.max(rel_dev);
        sum_rel_dev += rel_dev;
        records.push(TrialRecord {
            trial,
            dim,
            rank,
            f_q,
            m_squared,
            rel_dev,
        });
    }

    Ok(IdentitySummary {
        mode,
        dim,
        trials,
        seed: seed.value(),
        max_rel_dev,
        mean_rel_dev: sum_rel_dev / trials as f64,
        records,
    })
}

/// Diagonal generator with i.i.d. uniform `[-1, 1]` levels.
pub fn random_diagonal_hamiltonian(dim: usize, seed: RngSeed) -> Hamiltonian {
    let mut rng = seed.rng();
    let diag: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Hamiltonian::from_diagonal(&diag)
}

fn basis_label(h: &Hamiltonian) -> CoherenceBasis {
    if h.is_diagonal() {
        CoherenceBasis::Storage
    } else {
        CoherenceBasis::HamiltonianEigenbasis
    }
}

fn amplitudes_in_h_basis(psi: &PureState, h: &Hamiltonian) -> Result<Vec<Complex64>> {
    h.spectrum()
        .eigenvectors()
        .adjoint()
        .apply(psi.amplitudes())
}

/// Probe eigenvalues with sub-cutoff values zeroed.
fn effective_probabilities(rho: &DensityMatrix) -> Vec<f64> {
    let trace = rho.matrix().trace().re;
    let cutoff = SUPPORT_CUTOFF * trace;
    rho.probabilities()
        .iter()
        .map(|&p| if p < cutoff { 0.0 } else { p })
        .collect()
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}
