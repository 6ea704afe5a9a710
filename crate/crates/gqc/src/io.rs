//! File formats and text rendering.
//!
//! Matrices travel as JSON objects `{"rows": n, "cols": m, "data": [[re, im],
//! ...]}` in row-major order; pure states as `{"amplitudes": [[re, im], ...]}`;
//! Hamiltonians as either `{"diag": [...]}` (the canonical form for coherence
//! reports) or a full Hermitian matrix. CSV output always uses `.` as the
//! decimal separator and prints floats with 12 significant digits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{EstimationRun, ExperimentReport};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::metrology::{Hamiltonian, IdentitySummary};
use crate::states::{DensityMatrix, PureState};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PureStateFile {
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum HamiltonianFile {
    Diagonal { diag: Vec<f64> },
    Matrix(MatrixFile),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StateFile {
    Pure(PureStateFile),
    Density(MatrixFile),
}

/// A parsed probe state: either a state vector or a density matrix.
#[derive(Debug, Clone)]
pub enum ProbeState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl ProbeState {
    pub fn dim(&self) -> usize {
        match self {
            ProbeState::Pure(psi) => psi.dim(),
            ProbeState::Density(rho) => rho.dim(),
        }
    }

    /// View as a density matrix, projecting pure states.
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            ProbeState::Pure(psi) => crate::states::pure_to_density(psi),
            ProbeState::Density(rho) => rho.clone(),
        }
    }
}

/// Parse a JSON matrix literal.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = parse_json(text)?;
    matrix_from_file(file)
}

fn matrix_from_file(file: MatrixFile) -> Result<ComplexMatrix> {
    let entries = file
        .data
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(file.rows, file.cols, entries)
}

/// Render a matrix as its JSON literal.
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let file = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&file).expect("matrix serialization cannot fail")
}

/// Parse a probe state: `{"amplitudes": ...}` or a matrix literal.
pub fn state_from_json(text: &str) -> Result<ProbeState> {
    match parse_json::<StateFile>(text)? {
        StateFile::Pure(p) => {
            let amplitudes = p
                .amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            Ok(ProbeState::Pure(PureState::new(amplitudes)?))
        }
        StateFile::Density(m) => Ok(ProbeState::Density(DensityMatrix::new(matrix_from_file(
            m,
        )?)?)),
    }
}

/// Render a pure state as its JSON literal.
pub fn pure_state_to_json(psi: &PureState) -> String {
    let file = PureStateFile {
        amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&file).expect("state serialization cannot fail")
}

/// Parse a Hamiltonian: `{"diag": ...}` or a full Hermitian matrix literal.
pub fn hamiltonian_from_json(text: &str) -> Result<Hamiltonian> {
    match parse_json::<HamiltonianFile>(text)? {
        HamiltonianFile::Diagonal { diag } => {
            if diag.iter().any(|d| !d.is_finite()) {
                return Err(Error::NonFinite);
            }
            Ok(Hamiltonian::from_diagonal(&diag))
        }
        HamiltonianFile::Matrix(m) => Ok(Hamiltonian::new(HermitianOperator::new(
            matrix_from_file(m)?,
        )?)),
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        // Untagged-enum mismatches report position 1:1; a raw-value parse
        // recovers the true syntax position for malformed input.
        let (line, column, message) = match serde_json::from_str::<serde_json::Value>(text) {
            Err(raw) => (raw.line(), raw.column(), raw.to_string()),
            Ok(_) => (e.line(), e.column(), e.to_string()),
        };
        Error::Parse {
            offset: byte_offset(text, line, column),
            line,
            column,
            message,
        }
    })
}

/// Byte offset of a 1-based (line, column) position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    text.len()
}

/// Format with 12 significant digits, locale-independent.
pub fn fmt12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    if (-4..=11).contains(&exp) {
        format!("{x:.*}", (11 - exp).max(0) as usize)
    } else {
        sci
    }
}

/// CSV table of an identity-verification sweep.
pub fn verify_csv(summary: &IdentitySummary) -> String {
    let mut out = String::from("trial,dim,rank,f_q,m_squared,rel_dev\n");
    for r in &summary.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            r.dim,
            r.rank,
            fmt12(r.f_q),
            fmt12(r.m_squared),
            fmt12(r.rel_dev)
        ));
    }
    out
}

/// CSV table of the benchmark replication curves.
pub fn experiment_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("theta,qfi1_reconstructed,qfi2_reconstructed\n");
    for p in &report.points {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt12(p.theta),
            fmt12(p.qfi_single),
            fmt12(p.qfi_bell)
        ));
    }
    out
}

/// JSON summary of the benchmark replication.
pub fn experiment_summary_json(report: &ExperimentReport) -> String {
    format!(
        "{{\"f_q1_avg\": {}, \"f_q2_avg\": {}, \"ratio\": {}, \"shots\": {}, \"seed\": {}}}",
        fmt12(report.f_q1_avg),
        fmt12(report.f_q2_avg),
        fmt12(report.ratio),
        report.shots_per_setting,
        report.seed
    )
}

/// CSV table of per-trial phase estimates.
pub fn estimates_csv(run: &EstimationRun) -> String {
    let mut out = String::from("trial,estimate\n");
    for (i, e) in run.estimates.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, fmt12(*e)));
    }
    out
}
