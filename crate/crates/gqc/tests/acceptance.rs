//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails. Runs under `cargo test` as a non-harness test target:
//!
//! ```text
//! cargo test -p gqc --test acceptance
//! ```

use std::process::Command;
use std::time::Instant;

use gqc::estimation::{linear_grid, replicate_experiment, run_estimation, MeasurementBasis};
use gqc::metrology::{
    gqc_mixed, gqc_pure, gqc_pure_alt, l1_coherence, qfi_mixed, qfi_pure,
    random_diagonal_hamiltonian, sld_qfi, verify_identity, Hamiltonian, VerifyMode, REL_DEV_FLOOR,
};
use gqc::states::{pure_to_density, random_haar_pure, random_mixed, PureState, RngSeed};

const PURE_IDENTITY_TOL: f64 = 1e-10;
const MIXED_IDENTITY_TOL: f64 = 1e-8;

/// Fixed suite seeds; every randomized criterion is reproducible bit for bit.
const SEED_PURE: u64 = 20_240_001;
const SEED_MIXED: u64 = 20_240_002;
const SEED_EXPERIMENT: u64 = 20_240_003;
const SEED_CRLB: u64 = 11;
const SEED_PROPERTIES: u64 = 20_240_005;

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("criterion 1 (pure-state identity)", criterion_1),
        ("criterion 2 (mixed-state identity, three routes)", criterion_2),
        ("criterion 3 (level-span scaling 1..10)", criterion_3),
        ("criterion 4 (ideal experiment: 1, 4, ratio 4)", criterion_4),
        ("criterion 5 (shot-noise experiment bands)", criterion_5),
        ("criterion 6 (Cramer-Rao bound and shot scaling)", criterion_6),
        ("criterion 7 (structural property sweep)", criterion_7),
        ("criterion 8 (verify exit-code gate)", criterion_8),
    ];

    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_DEV_FLOOR)
}

/// 1000 Haar probes per dimension 2..=8 with uniform [-1, 1] diagonal
/// generators: max relative |F_Q - M^2| <= 1e-10, under 10 s.
fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut total = 0u64;
    for dim in 2..=8usize {
        let summary = verify_identity(
            dim,
            1000,
            RngSeed::new(SEED_PURE + dim as u64),
            VerifyMode::Pure,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(summary.max_rel_dev);
        total += summary.trials;
    }
    let elapsed = start.elapsed().as_secs_f64();
    if worst > PURE_IDENTITY_TOL {
        return Err(format!(
            "max relative deviation {worst:.3e} exceeds {PURE_IDENTITY_TOL:.1e}"
        ));
    }
    if elapsed >= 10.0 {
        return Err(format!("runtime {elapsed:.1} s exceeds 10 s"));
    }
    Ok(format!(
        "max relative deviation {worst:.3e} over {total} trials in {elapsed:.2} s"
    ))
}

/// 500 Ginibre probes per dimension 2..=6 spanning every rank: the closed
/// form, the SLD route, and the squared coherence agree within 1e-8,
/// under 30 s.
fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut total = 0u64;
    for dim in 2..=6usize {
        for trial in 0..500u64 {
            let seed = RngSeed::new(SEED_MIXED + dim as u64).derive(trial);
            let rank = (trial as usize % dim) + 1;
            let rho = random_mixed(dim, rank, seed.derive(1)).map_err(|e| e.to_string())?;
            let h = random_diagonal_hamiltonian(dim, seed.derive(0));
            let f_closed = qfi_mixed(&rho, &h).map_err(|e| e.to_string())?;
            let (f_sld, _) = sld_qfi(&rho, &h).map_err(|e| e.to_string())?;
            let m2 = gqc_mixed(&rho, &h).map_err(|e| e.to_string())?.gqc_squared;
            let dev = rel(f_closed, f_sld)
                .max(rel(f_closed, m2))
                .max(rel(f_sld, m2));
            worst = worst.max(dev);
            total += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if worst > MIXED_IDENTITY_TOL {
        return Err(format!(
            "max pairwise relative deviation {worst:.3e} exceeds {MIXED_IDENTITY_TOL:.1e}"
        ));
    }
    if elapsed >= 30.0 {
        return Err(format!("runtime {elapsed:.1} s exceeds 30 s"));
    }
    Ok(format!(
        "max pairwise relative deviation {worst:.3e} over {total} trials in {elapsed:.2} s"
    ))
}

/// `(|0> + |N>)/sqrt(2)` under `diag(0..N)` carries exactly `N^2`.
fn criterion_3() -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in 1..=10usize {
        let dim = n + 1;
        let psi = PureState::equal_superposition(dim, 0, n).map_err(|e| e.to_string())?;
        let levels: Vec<f64> = (0..dim).map(|k| k as f64).collect();
        let h = Hamiltonian::from_diagonal(&levels);
        let f = qfi_pure(&psi, &h).map_err(|e| e.to_string())?;
        let expected = (n * n) as f64;
        let dev = (f - expected).abs() / expected;
        if dev > 1e-10 {
            return Err(format!("N = {n}: QFI {f} deviates {dev:.3e} from {expected}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!(
        "QFI equals N^2 for N = 1..10, worst deviation {worst:.3e}"
    ))
}

/// Infinite-shot replication returns 1 and 4 at every grid point.
fn criterion_4() -> Result<String, String> {
    let grid = linear_grid(0.0, 2.0 * std::f64::consts::PI, 20).map_err(|e| e.to_string())?;
    let report =
        replicate_experiment(0, &grid, RngSeed::new(SEED_EXPERIMENT)).map_err(|e| e.to_string())?;
    for p in &report.points {
        if (p.qfi_single - 1.0).abs() > 1e-9 {
            return Err(format!("theta {}: F_Q1 = {}", p.theta, p.qfi_single));
        }
        if (p.qfi_bell - 4.0).abs() > 1e-9 {
            return Err(format!("theta {}: F_Q2 = {}", p.theta, p.qfi_bell));
        }
    }
    if (report.ratio - 4.0).abs() > 1e-9 {
        return Err(format!("ratio {} deviates from 4", report.ratio));
    }
    Ok(format!(
        "F_Q1 = {:.12}, F_Q2 = {:.12}, ratio = {:.12}",
        report.f_q1_avg, report.f_q2_avg, report.ratio
    ))
}

/// 1e4 shots per tomography setting over a 20-point grid lands in the
/// published bands; the reference measurements 0.9973 and 3.9346 sit inside
/// those bands. Under 2 minutes.
fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let grid = linear_grid(0.0, 2.0 * std::f64::consts::PI, 20).map_err(|e| e.to_string())?;
    let report = replicate_experiment(10_000, &grid, RngSeed::new(SEED_EXPERIMENT))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();

    let band1 = (0.95, 1.00);
    let band2 = (3.8, 4.0);
    if report.f_q1_avg < band1.0 || report.f_q1_avg > band1.1 {
        return Err(format!(
            "F_Q1 average {} outside [0.95, 1.00]",
            report.f_q1_avg
        ));
    }
    if report.f_q2_avg < band2.0 || report.f_q2_avg > band2.1 {
        return Err(format!("F_Q2 average {} outside [3.8, 4.0]", report.f_q2_avg));
    }
    let reference = (0.9973, 3.9346);
    if reference.0 < band1.0 || reference.0 > band1.1 {
        return Err("reference value 0.9973 escapes the F_Q1 band".to_string());
    }
    if reference.1 < band2.0 || reference.1 > band2.1 {
        return Err("reference value 3.9346 escapes the F_Q2 band".to_string());
    }
    if elapsed >= 120.0 {
        return Err(format!("runtime {elapsed:.1} s exceeds 120 s"));
    }
    Ok(format!(
        "F_Q1 = {:.4}, F_Q2 = {:.4}, ratio = {:.4} in {elapsed:.1} s; reference values inside bands",
        report.f_q1_avg, report.f_q2_avg, report.ratio
    ))
}

/// 200-trial maximum-likelihood estimation at 1e4 shots: the empirical
/// deviation sits in [1.0, 1.3] x CRLB, and doubling the shots shrinks it
/// by 1/sqrt(2) within 15%.
fn criterion_6() -> Result<String, String> {
    let plus = pure_to_density(&PureState::equal_superposition(2, 0, 1).unwrap());
    let h = Hamiltonian::from_diagonal(&[0.5, -0.5]);
    let basis = MeasurementBasis::pauli_product("y").map_err(|e| e.to_string())?;
    let phi = std::f64::consts::FRAC_PI_4;

    let base = run_estimation(&plus, &h, &basis, phi, 10_000, 200, RngSeed::new(SEED_CRLB))
        .map_err(|e| e.to_string())?;
    let ratio = base.empirical_std / base.crlb;
    if !(1.0..=1.3).contains(&ratio) {
        return Err(format!(
            "empirical std {:.6e} is {ratio:.4} x CRLB {:.6e}, outside [1.0, 1.3]",
            base.empirical_std, base.crlb
        ));
    }

    let doubled = run_estimation(
        &plus,
        &h,
        &basis,
        phi,
        20_000,
        200,
        RngSeed::new(SEED_CRLB + 1),
    )
    .map_err(|e| e.to_string())?;
    let shrink = base.empirical_std / doubled.empirical_std;
    let target = 2.0_f64.sqrt();
    if (shrink - target).abs() > 0.15 * target {
        return Err(format!(
            "doubling shots shrank the deviation by {shrink:.4}, expected {target:.4} within 15%"
        ));
    }
    Ok(format!(
        "std/CRLB = {ratio:.4}; doubling shots shrank the deviation by {shrink:.4} (target {target:.4})"
    ))
}

/// Zero violations across the structural property sweep: nonnegative pair
/// terms, l1-style dominance, degenerate-subspace invariance, quadratic
/// scale covariance, and coherence bounds.
fn criterion_7() -> Result<String, String> {
    let seed = RngSeed::new(SEED_PROPERTIES);
    let mut checks = 0u64;

    // Pairwise nonnegativity of the mixed decomposition.
    for dim in 2..=6usize {
        for trial in 0..50u64 {
            let s = seed.derive(dim as u64 * 1000 + trial);
            let rank = (trial as usize % dim) + 1;
            let rho = random_mixed(dim, rank, s.derive(0)).map_err(|e| e.to_string())?;
            let h = random_diagonal_hamiltonian(dim, s.derive(1));
            let report = gqc_mixed(&rho, &h).map_err(|e| e.to_string())?;
            for t in &report.pair_terms {
                if t.m2 < -1e-10 {
                    return Err(format!(
                        "dim {dim} trial {trial}: pair ({}, {}) has m2 = {:.3e}",
                        t.i, t.j, t.m2
                    ));
                }
                checks += 1;
            }
        }
    }

    // The l1-style definition dominates the quadratic one.
    for dim in 2..=8usize {
        for trial in 0..50u64 {
            let s = seed.derive(7_000 + dim as u64 * 100 + trial);
            let psi = random_haar_pure(dim, s.derive(0)).map_err(|e| e.to_string())?;
            let h = random_diagonal_hamiltonian(dim, s.derive(1));
            let alt = gqc_pure_alt(&psi, &h).map_err(|e| e.to_string())?;
            let m = gqc_pure(&psi, &h).map_err(|e| e.to_string())?.gqc;
            if alt < m - 1e-12 {
                return Err(format!("dim {dim} trial {trial}: alt {alt} < gqc {m}"));
            }
            checks += 1;
        }
    }

    // Rotating a degenerate eigensubspace leaves both informations fixed.
    for trial in 0..20u64 {
        let dim = 3 + (trial as usize % 4);
        let s = seed.derive(50_000 + trial);
        let (plain, rotated) = degenerate_pair(dim, s, 0.3 + 0.05 * trial as f64);
        let h = random_diagonal_hamiltonian(dim, s.derive(9));
        let f_a = qfi_mixed(&plain, &h).map_err(|e| e.to_string())?;
        let f_b = qfi_mixed(&rotated, &h).map_err(|e| e.to_string())?;
        if rel(f_a, f_b) > 1e-8 {
            return Err(format!(
                "trial {trial}: rotated QFI {f_b} deviates from {f_a}"
            ));
        }
        let m_a = gqc_mixed(&plain, &h).map_err(|e| e.to_string())?.gqc_squared;
        let m_b = gqc_mixed(&rotated, &h).map_err(|e| e.to_string())?.gqc_squared;
        if rel(m_a, m_b) > 1e-8 {
            return Err(format!(
                "trial {trial}: rotated M^2 {m_b} deviates from {m_a}"
            ));
        }
        checks += 2;
    }

    // Quadratic covariance under generator rescaling.
    for trial in 0..50u64 {
        let dim = 2 + (trial as usize % 5);
        let s = seed.derive(90_000 + trial);
        let psi = random_haar_pure(dim, s.derive(0)).map_err(|e| e.to_string())?;
        let h = random_diagonal_hamiltonian(dim, s.derive(1));
        let factor = [-2.5, -1.0, 0.5, 3.0][trial as usize % 4];
        let f = qfi_pure(&psi, &h).map_err(|e| e.to_string())?;
        let f_scaled = qfi_pure(&psi, &h.scaled(factor)).map_err(|e| e.to_string())?;
        if rel(f_scaled, factor * factor * f) > 1e-10 {
            return Err(format!(
                "trial {trial}: scaling by {factor} gave {f_scaled} vs {}",
                factor * factor * f
            ));
        }
        checks += 1;
    }

    // Coherence bounds 0 <= C <= d - 1.
    for trial in 0..100u64 {
        let dim = 2 + (trial as usize % 5);
        let s = seed.derive(130_000 + trial);
        let rank = (trial as usize % dim) + 1;
        let rho = random_mixed(dim, rank, s).map_err(|e| e.to_string())?;
        let c = l1_coherence(&rho);
        if !(0.0..=dim as f64 - 1.0 + 1e-9).contains(&c) {
            return Err(format!(
                "trial {trial}: coherence {c} escapes [0, {}]",
                dim - 1
            ));
        }
        checks += 1;
    }

    Ok(format!("zero violations across {checks} checks"))
}

/// The shipped `verify` subcommand passes at the criteria thresholds and
/// exits 5 when routed through the sign-flipped mutation fixture.
fn criterion_8() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_gqctool");
    let healthy = Command::new(bin)
        .args([
            "verify", "--mode", "mixed", "--dim", "4", "--trials", "100", "--seed", "7",
        ])
        .env_remove("GQC_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if healthy.status.code() != Some(0) {
        return Err(format!(
            "healthy verify exited {:?}: {}",
            healthy.status.code(),
            String::from_utf8_lossy(&healthy.stderr)
        ));
    }
    let pure = Command::new(bin)
        .args([
            "verify", "--mode", "pure", "--dim", "4", "--trials", "100", "--seed", "7",
        ])
        .env_remove("GQC_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if pure.status.code() != Some(0) {
        return Err(format!("pure verify exited {:?}", pure.status.code()));
    }
    let corrupted = Command::new(bin)
        .args([
            "verify",
            "--mode",
            "mixed",
            "--dim",
            "4",
            "--trials",
            "100",
            "--seed",
            "7",
            "--corrupt-pair-sign",
        ])
        .env_remove("GQC_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if corrupted.status.code() != Some(5) {
        return Err(format!(
            "corrupted verify exited {:?}, expected 5",
            corrupted.status.code()
        ));
    }
    Ok("exit 0 on healthy runs, exit 5 on the sign-flipped fixture".to_string())
}

/// Mixed state with an exactly degenerate eigenvalue pair and a copy whose
/// eigenbasis is rotated inside the degenerate subspace.
fn degenerate_pair(
    dim: usize,
    seed: RngSeed,
    angle: f64,
) -> (gqc::states::DensityMatrix, gqc::states::DensityMatrix) {
    use gqc::linalg::{eigh, ComplexMatrix, HermitianOperator};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.value());
    let raw = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let herm = HermitianOperator::new(
        raw.add(&raw.adjoint())
            .unwrap()
            .scale(Complex64::new(0.5, 0.0)),
    )
    .unwrap();
    let basis = eigh(&herm);

    let mut probs: Vec<f64> = (0..dim).map(|i| 1.0 + i as f64).collect();
    probs[2] = probs[1];
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }

    let build = |columns: &[Vec<Complex64>]| {
        let m = ComplexMatrix::from_fn(dim, dim, |r, c| {
            (0..dim)
                .map(|k| columns[k][r] * probs[k] * columns[k][c].conj())
                .sum()
        });
        gqc::states::DensityMatrix::new(m).unwrap()
    };

    let columns: Vec<Vec<Complex64>> = (0..dim).map(|k| basis.eigenvector(k)).collect();
    let plain = build(&columns);

    let mut rotated = columns;
    let (c, s) = (angle.cos(), angle.sin());
    let phase = Complex64::from_polar(1.0, 0.7 * angle);
    let v1 = rotated[1].clone();
    let v2 = rotated[2].clone();
    for r in 0..dim {
        rotated[1][r] = v1[r] * c + v2[r] * s * phase;
        rotated[2][r] = -v1[r] * s * phase.conj() + v2[r] * c;
    }
    (plain, build(&rotated))
}
