//! Monte-Carlo simulation of the prepare / evolve / measure estimation
//! pipeline: outcome statistics, classical Fisher information, maximum-
//! likelihood phase estimation against the Cramér-Rao bound, Pauli-basis
//! tomography, and the two-photon benchmark replication.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, evolve_unitary, ComplexMatrix, HermitianOperator};
use crate::metrology::{qfi_mixed, Hamiltonian};
use crate::states::{pure_to_density, DensityMatrix, PureState, RngSeed};

/// Completeness tolerance for a measurement: `|sum Pi - I|` max entry.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Outcome probabilities below this are dropped from Fisher sums.
pub const PROBABILITY_FLOOR: f64 = 1e-12;
/// Central-difference step for the classical Fisher information, in radians.
pub const FD_STEP: f64 = 1e-6;
/// Classical Fisher information below this makes the phase unidentifiable.
pub const IDENTIFIABILITY_FLOOR: f64 = 1e-9;

const GRID_POINTS: usize = 2001;
/// Log-likelihood gap under which two refined optima count as tied; exact
/// mirror peaks of a sinusoidal likelihood differ only by rounding, while
/// genuinely distinct optima differ by O(1) at realistic shot counts.
const LIKELIHOOD_TIE_TOL: f64 = 1e-6;

/// Positive-operator measurement whose effects resolve the identity.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    projectors: Vec<ComplexMatrix>,
}

impl MeasurementBasis {
    /// Validate that the effects are PSD and sum to the identity.
    pub fn from_projectors(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidArgument(
                "measurement needs at least one projector".to_string(),
            ));
        }
        let dim = projectors[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (index, p) in projectors.iter().enumerate() {
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.rows(),
                });
            }
            let herm = HermitianOperator::new(p.clone())?;
            let min = eigh(&herm).eigenvalues()[0];
            if min < -COMPLETENESS_TOL {
                return Err(Error::ProjectorNotPositive { index, value: min });
            }
            sum = sum.add(p)?;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > COMPLETENESS_TOL {
            return Err(Error::IncompleteBasis { defect });
        }
        Ok(Self { projectors })
    }

    /// Rank-1 measurement from orthonormal states.
    pub fn from_orthonormal_states(states: &[PureState]) -> Result<Self> {
        let projectors = states
            .iter()
            .map(|s| {
                let a = s.amplitudes();
                ComplexMatrix::from_fn(s.dim(), s.dim(), |i, j| a[i] * a[j].conj())
            })
            .collect();
        Self::from_projectors(projectors)
    }

    /// Product measurement in the eigenbases of single-qubit Paulis, one
    /// axis character (`x`, `y`, `z`) per qubit. Outcome `b` selects the
    /// `+1` eigenvector on qubit `q` when bit `q` of `b` (MSB first) is 0.
    pub fn pauli_product(axes: &str) -> Result<Self> {
        let parsed = parse_axes(axes)?;
        let k = parsed.len();
        let dim = 1usize << k;
        let states: Vec<PureState> = (0..dim)
            .map(|b| pauli_product_state(&parsed, b))
            .collect();
        Self::from_orthonormal_states(&states)
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PauliAxis {
    X,
    Y,
    Z,
}

fn parse_axes(axes: &str) -> Result<Vec<PauliAxis>> {
    if axes.is_empty() {
        return Err(Error::InvalidArgument("empty Pauli axis string".to_string()));
    }
    axes.chars()
        .map(|ch| match ch.to_ascii_lowercase() {
            'x' => Ok(PauliAxis::X),
            'y' => Ok(PauliAxis::Y),
            'z' => Ok(PauliAxis::Z),
            other => Err(Error::InvalidArgument(format!(
                "unknown Pauli axis '{other}', expected x, y, or z"
            ))),
        })
        .collect()
}

/// Eigenvectors of one Pauli axis; index 0 is the `+1` eigenvector.
fn axis_eigenvectors(axis: PauliAxis) -> [[Complex64; 2]; 2] {
    let s = 1.0 / 2.0_f64.sqrt();
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match axis {
        PauliAxis::X => [
            [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        ],
        PauliAxis::Y => [
            [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
        ],
        PauliAxis::Z => [[one, z], [z, one]],
    }
}

/// Tensor-product eigenvector for outcome `b` (MSB-first bit per qubit).
fn pauli_product_state(axes: &[PauliAxis], b: usize) -> PureState {
    let k = axes.len();
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    for (q, &axis) in axes.iter().enumerate() {
        let bit = (b >> (k - 1 - q)) & 1;
        let factor = axis_eigenvectors(axis)[bit];
        let mut next = Vec::with_capacity(amplitudes.len() * 2);
        for &a in &amplitudes {
            next.push(a * factor[0]);
            next.push(a * factor[1]);
        }
        amplitudes = next;
    }
    PureState::new(amplitudes).expect("tensor product of unit vectors is normalized")
}

/// Born-rule outcome distribution `p_x = Tr(Pi_x rho)`, clamped to `[0, 1]`
/// and renormalized.
pub fn outcome_distribution(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<Vec<f64>> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: basis.dim(),
        });
    }
    let d = rho.dim();
    let mut probs = Vec::with_capacity(basis.outcomes());
    for p in basis.projectors() {
        let mut tr = 0.0;
        for i in 0..d {
            for j in 0..d {
                tr += (p.get(i, j) * rho.matrix().get(j, i)).re;
            }
        }
        probs.push(tr.clamp(0.0, 1.0));
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Ok(probs)
}

/// Outcome probabilities of the evolved probe as a function of the phase.
///
/// With `U = W exp(-i L phi) W†` the Born probabilities reduce to
/// `p_x(phi) = sum_{k,l} Pi_x[k,l] rho[l,k] e^{-i(L_l - L_k) phi}` in the
/// generator's eigenbasis, so a single precomputation gives O(d^2) pointwise
/// evaluation. Matches `outcome_distribution` after `evolve_unitary`.
struct PhaseModel {
    levels: Vec<f64>,
    coeffs: Vec<ComplexMatrix>,
}

impl PhaseModel {
    fn new(rho: &DensityMatrix, h: &Hamiltonian, basis: &MeasurementBasis) -> Result<Self> {
        if rho.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: h.dim(),
            });
        }
        if rho.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: basis.dim(),
            });
        }
        let w = h.spectrum().eigenvectors();
        let rho_h = w.adjoint().mul(rho.matrix())?.mul(w)?;
        let coeffs = basis
            .projectors()
            .iter()
            .map(|p| {
                let p_h = w.adjoint().mul(p)?.mul(w)?;
                let d = p_h.rows();
                Ok(ComplexMatrix::from_fn(d, d, |k, l| {
                    p_h.get(k, l) * rho_h.get(l, k)
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            levels: h.levels().to_vec(),
            coeffs,
        })
    }

    fn probabilities(&self, phi: f64) -> Vec<f64> {
        let d = self.levels.len();
        let phases: Vec<Complex64> = self
            .levels
            .iter()
            .map(|&lam| Complex64::from_polar(1.0, -lam * phi))
            .collect();
        let mut probs: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| {
                let mut acc = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        acc += (c.get(k, l) * phases[l] * phases[k].conj()).re;
                    }
                }
                acc.clamp(0.0, 1.0)
            })
            .collect();
        let total: f64 = probs.iter().sum();
        if total > 0.0 {
            for p in &mut probs {
                *p /= total;
            }
        }
        probs
    }

    /// Smallest nonzero level gap; `None` when the generator is scalar.
    fn min_level_gap(&self) -> Option<f64> {
        let mut min: Option<f64> = None;
        for (i, &a) in self.levels.iter().enumerate() {
            for &b in &self.levels[i + 1..] {
                let gap = (a - b).abs();
                if gap > 1e-12 {
                    min = Some(min.map_or(gap, |m: f64| m.min(gap)));
                }
            }
        }
        min
    }
}

/// Classical Fisher information `sum_x (d p_x / d phi)^2 / p_x` of the
/// measurement at phase `phi`, with the derivative taken by central finite
/// difference of step [`FD_STEP`].
pub fn classical_fisher(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    basis: &MeasurementBasis,
    phi: f64,
) -> Result<f64> {
    let model = PhaseModel::new(rho, h, basis)?;
    Ok(classical_fisher_from_model(&model, phi))
}

fn classical_fisher_from_model(model: &PhaseModel, phi: f64) -> f64 {
    let plus = model.probabilities(phi + FD_STEP);
    let minus = model.probabilities(phi - FD_STEP);
    let center = model.probabilities(phi);
    let mut fisher = 0.0;
    for x in 0..center.len() {
        if center[x] < PROBABILITY_FLOOR {
            continue;
        }
        let derivative = (plus[x] - minus[x]) / (2.0 * FD_STEP);
        fisher += derivative * derivative / center[x];
    }
    fisher
}

/// Monte-Carlo record of repeated maximum-likelihood phase estimation.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationRun {
    pub true_phi: f64,
    pub shots_per_trial: u64,
    pub trials: u64,
    pub estimates: Vec<f64>,
    /// Sample standard deviation of the estimates.
    pub empirical_std: f64,
    /// `1 / sqrt(shots * F_Q)`.
    pub crlb: f64,
    pub classical_fisher: f64,
}

/// Simulate `trials` repetitions of: draw `shots` outcomes at `true_phi`,
/// then maximize the likelihood over one period of the phase.
///
/// The likelihood is scanned on a 2001-point grid spanning one period
/// centered at `true_phi`, every grid-local optimum is refined by
/// golden-section search, and statistically tied optima (e.g. the exact
/// mirror peak of a sinusoidal likelihood) are resolved toward `true_phi`,
/// matching a local estimation scenario.
pub fn run_estimation(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    basis: &MeasurementBasis,
    true_phi: f64,
    shots: u64,
    trials: u64,
    seed: RngSeed,
) -> Result<EstimationRun> {
    if shots == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "shots and trials must be positive".to_string(),
        ));
    }
    let model = PhaseModel::new(rho, h, basis)?;
    let fisher = classical_fisher_from_model(&model, true_phi);
    if fisher < IDENTIFIABILITY_FLOOR {
        return Err(Error::NonIdentifiable { fisher });
    }
    let gap = model
        .min_level_gap()
        .ok_or(Error::NonIdentifiable { fisher: 0.0 })?;
    let period = 2.0 * std::f64::consts::PI / gap;
    let window = (true_phi - 0.5 * period, true_phi + 0.5 * period);

    let truth = model.probabilities(true_phi);
    let f_q = qfi_mixed(rho, h)?;
    let crlb = 1.0 / ((shots as f64) * f_q).sqrt();

    let mut estimates = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = seed.derive(trial).rng();
        let counts = sample_counts(&truth, shots, &mut rng);
        let log_likelihood = |phi: f64| -> f64 {
            let probs = model.probabilities(phi);
            let mut ll = 0.0;
            for (x, &n) in counts.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                if probs[x] <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                ll += n as f64 * probs[x].ln();
            }
            ll
        };
        estimates.push(maximize_over_window(
            &log_likelihood,
            window,
            true_phi,
        ));
    }

    let empirical_std = sample_std(&estimates);
    Ok(EstimationRun {
        true_phi,
        shots_per_trial: shots,
        trials,
        estimates,
        empirical_std,
        crlb,
        classical_fisher: fisher,
    })
}

fn sample_counts(probs: &[f64], shots: u64, rng: &mut impl Rng) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = probs.len() - 1;
        for (x, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                chosen = x;
                break;
            }
        }
        counts[chosen] += 1;
    }
    counts
}

fn maximize_over_window(f: &impl Fn(f64) -> f64, window: (f64, f64), anchor: f64) -> f64 {
    let (lo, hi) = window;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();

    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..GRID_POINTS {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i == GRID_POINTS - 1 || values[i] >= values[i + 1];
        if left_ok && right_ok && values[i].is_finite() {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(i + 1).min(GRID_POINTS - 1)];
            candidates.push(golden_section_max(f, a, b));
        }
    }
    if candidates.is_empty() {
        return anchor;
    }
    let best = candidates
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .into_iter()
        .filter(|&(_, v)| v >= best - LIKELIHOOD_TIE_TOL)
        .min_by(|a, b| {
            let da = (a.0 - anchor).abs();
            let db = (b.0 - anchor).abs();
            da.partial_cmp(&db).expect("finite distances")
        })
        .map(|(x, _)| x)
        .expect("candidate list is nonempty")
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..90 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    var.sqrt()
}

/// Linear-inversion tomography output.
#[derive(Debug, Clone)]
pub struct TomographyResult {
    pub reconstructed: DensityMatrix,
    /// Shots per Pauli setting; 0 marks the exact (infinite-shot) mode.
    pub shots_per_setting: u64,
    pub settings_count: usize,
}

/// Reconstruct a qubit-register state from counts in all `3^k` Pauli-product
/// eigenbases by linear inversion, then project onto the trace-one PSD cone
/// by eigenvalue clipping and renormalization.
///
/// `shots_per_setting = 0` uses exact Born probabilities instead of sampled
/// frequencies, which makes the inversion reproduce the input state.
pub fn tomography(
    rho_true: &DensityMatrix,
    shots_per_setting: u64,
    seed: RngSeed,
) -> Result<TomographyResult> {
    let dim = rho_true.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::UnsupportedDimension { dim });
    }
    let k = dim.trailing_zeros() as usize;
    let settings = all_settings(k);

    // Frequencies of each outcome per setting.
    let mut frequencies: Vec<Vec<f64>> = Vec::with_capacity(settings.len());
    for (s_index, setting) in settings.iter().enumerate() {
        let probs = setting_probabilities(rho_true, setting);
        if shots_per_setting == 0 {
            frequencies.push(probs);
        } else {
            let mut rng = seed.derive(s_index as u64).rng();
            let counts = sample_counts(&probs, shots_per_setting, &mut rng);
            frequencies.push(
                counts
                    .iter()
                    .map(|&n| n as f64 / shots_per_setting as f64)
                    .collect(),
            );
        }
    }

    // Pauli expectations, averaged over every compatible setting.
    let mut accumulator = ComplexMatrix::zeros(dim, dim);
    for label in all_labels(k) {
        let support: Vec<usize> = (0..k).filter(|&q| label[q].is_some()).collect();
        if support.is_empty() {
            continue;
        }
        let mut estimate = 0.0;
        let mut compatible = 0usize;
        for (s_index, setting) in settings.iter().enumerate() {
            if support.iter().any(|&q| Some(setting[q]) != label[q]) {
                continue;
            }
            compatible += 1;
            let freqs = &frequencies[s_index];
            for (b, &fr) in freqs.iter().enumerate() {
                estimate += fr * outcome_sign(b, k, &support);
            }
        }
        estimate /= compatible as f64;
        let pauli = label_matrix(&label);
        accumulator = accumulator.add(&pauli.scale(Complex64::new(estimate, 0.0)))?;
    }
    let raw = ComplexMatrix::identity(dim)
        .add(&accumulator)?
        .scale(Complex64::new(1.0 / dim as f64, 0.0));

    let reconstructed = project_to_density(&raw)?;
    Ok(TomographyResult {
        reconstructed,
        shots_per_setting,
        settings_count: settings.len(),
    })
}

fn all_settings(k: usize) -> Vec<Vec<PauliAxis>> {
    let axes = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
    let mut settings: Vec<Vec<PauliAxis>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(settings.len() * 3);
        for s in &settings {
            for &a in &axes {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        settings = next;
    }
    settings
}

/// Pauli labels as per-qubit `Option<PauliAxis>`, `None` meaning identity.
fn all_labels(k: usize) -> Vec<Vec<Option<PauliAxis>>> {
    let choices = [
        None,
        Some(PauliAxis::X),
        Some(PauliAxis::Y),
        Some(PauliAxis::Z),
    ];
    let mut labels: Vec<Vec<Option<PauliAxis>>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(labels.len() * 4);
        for l in &labels {
            for &c in &choices {
                let mut t = l.clone();
                t.push(c);
                next.push(t);
            }
        }
        labels = next;
    }
    labels
}

fn setting_probabilities(rho: &DensityMatrix, setting: &[PauliAxis]) -> Vec<f64> {
    let k = setting.len();
    let dim = 1usize << k;
    let mut probs = Vec::with_capacity(dim);
    for b in 0..dim {
        let v = pauli_product_state(setting, b);
        let rv = rho
            .matrix()
            .apply(v.amplitudes())
            .expect("dimension fixed by construction");
        let p: f64 = v
            .amplitudes()
            .iter()
            .zip(&rv)
            .map(|(a, w)| (a.conj() * w).re)
            .sum();
        probs.push(p.clamp(0.0, 1.0));
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    probs
}

fn outcome_sign(b: usize, k: usize, support: &[usize]) -> f64 {
    let mut sign = 1.0;
    for &q in support {
        if (b >> (k - 1 - q)) & 1 == 1 {
            sign = -sign;
        }
    }
    sign
}

fn label_matrix(label: &[Option<PauliAxis>]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(1);
    for slot in label {
        let factor = match slot {
            None => ComplexMatrix::identity(2),
            Some(PauliAxis::X) => crate::linalg::sigma_x(),
            Some(PauliAxis::Y) => crate::linalg::sigma_y(),
            Some(PauliAxis::Z) => crate::linalg::sigma_z(),
        };
        m = crate::linalg::kron(&m, &factor);
    }
    m
}

/// Clip negative eigenvalues to zero and renormalize the trace.
fn project_to_density(raw: &ComplexMatrix) -> Result<DensityMatrix> {
    let herm = HermitianOperator::new(raw.clone())?;
    let spec = eigh(&herm);
    let clipped: Vec<f64> = spec.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let d = spec.dim();
    let v = spec.eigenvectors();
    let projected = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|m| v.get(i, m) * (clipped[m] / total) * v.get(j, m).conj())
            .sum()
    });
    DensityMatrix::new(projected)
}

/// One grid point of the benchmark replication.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExperimentPoint {
    pub theta: f64,
    pub qfi_single: f64,
    pub qfi_bell: f64,
}

/// Replicated two-photon benchmark: per-theta Fisher information of the
/// tomographically reconstructed probes and the grid averages.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub points: Vec<ExperimentPoint>,
    pub f_q1_avg: f64,
    pub f_q2_avg: f64,
    pub ratio: f64,
    pub shots_per_setting: u64,
    pub seed: u64,
}

/// Drive the two benchmark probes through phase `theta`, tomograph the
/// output, and evaluate the Fisher information of the reconstruction.
///
/// Probe one is `(|0> + |1>)/sqrt(2)` under `sigma_z / 2`; probe two is
/// `(|00> + |11>)/sqrt(2)` under `(sigma_z (x) I + I (x) sigma_z)/2`. The
/// ideal values are 1 and 4 for every theta; `shots_per_setting = 0`
/// reproduces them exactly.
pub fn replicate_experiment(
    shots_per_setting: u64,
    theta_grid: &[f64],
    seed: RngSeed,
) -> Result<ExperimentReport> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidArgument(
            "theta grid must not be empty".to_string(),
        ));
    }

    let single = pure_to_density(&PureState::equal_superposition(2, 0, 1)?);
    let h1 = Hamiltonian::from_diagonal(&[0.5, -0.5]);

    let bell = pure_to_density(&PureState::equal_superposition(4, 0, 3)?);
    let id2 = ComplexMatrix::identity(2);
    let sz = crate::linalg::sigma_z();
    let h2_matrix = crate::linalg::kron(&sz, &id2)
        .add(&crate::linalg::kron(&id2, &sz))?
        .scale(Complex64::new(0.5, 0.0));
    let h2 = Hamiltonian::new(HermitianOperator::new(h2_matrix)?);

    let mut points = Vec::with_capacity(theta_grid.len());
    for (index, &theta) in theta_grid.iter().enumerate() {
        let rho1 = evolve_unitary(&single, h1.operator(), theta)?;
        let tomo1 = tomography(&rho1, shots_per_setting, seed.derive(2 * index as u64))?;
        let qfi_single = qfi_mixed(&tomo1.reconstructed, &h1)?;

        let rho2 = evolve_unitary(&bell, h2.operator(), theta)?;
        let tomo2 = tomography(&rho2, shots_per_setting, seed.derive(2 * index as u64 + 1))?;
        let qfi_bell = qfi_mixed(&tomo2.reconstructed, &h2)?;

        points.push(ExperimentPoint {
            theta,
            qfi_single,
            qfi_bell,
        });
    }

    let n = points.len() as f64;
    let f_q1_avg = points.iter().map(|p| p.qfi_single).sum::<f64>() / n;
    let f_q2_avg = points.iter().map(|p| p.qfi_bell).sum::<f64>() / n;
    Ok(ExperimentReport {
        points,
        f_q1_avg,
        f_q2_avg,
        ratio: f_q2_avg / f_q1_avg,
        shots_per_setting,
        seed: seed.value(),
    })
}

/// Evenly spaced grid `start..=stop` with `count` points.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("grid needs at least one point".to_string()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}
