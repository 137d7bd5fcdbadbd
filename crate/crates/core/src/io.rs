//! State files and CSV export.
//!
//! A state file is JSON:
//!
//! ```json
//! { "qubits": 1, "type": "pure", "data": [[0.7071067811865476, 0], [0.7071067811865476, 0]] }
//! ```
//!
//! `data` lists complex numbers as `[re, im]` pairs: 2 or 4 amplitudes for a
//! pure state, 4 or 16 row-major entries for a density matrix.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entangle::SweepRow;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::state::{validate_state, QuantumState};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub qubits: usize,
    #[serde(rename = "type")]
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        let (kind, entries): (StateKind, Vec<C64>) = match state {
            QuantumState::Pure(v) => (StateKind::Pure, v.clone()),
            QuantumState::Density(m) => (StateKind::Density, m.entries().to_vec()),
        };
        Self {
            qubits: state.qubits(),
            kind,
            data: entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Parses JSON text. Errors name the offending field and position.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path.is_empty() {
                input_error(inner.to_string())
            } else {
                input_error(format!("field `{path}`: {inner}"))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    /// Converts to a [`QuantumState`], checking shapes only.
    pub fn to_state(&self) -> Result<QuantumState> {
        let dim = match self.qubits {
            1 => 2,
            2 => 4,
            q => return Err(input_error(format!("field `qubits`: expected 1 or 2, got {q}"))),
        };
        let expected = match self.kind {
            StateKind::Pure => dim,
            StateKind::Density => dim * dim,
        };
        if self.data.len() != expected {
            return Err(input_error(format!(
                "field `data`: expected {expected} entries for a {}-qubit {} state, got {}",
                self.qubits,
                match self.kind {
                    StateKind::Pure => "pure",
                    StateKind::Density => "density",
                },
                self.data.len()
            )));
        }
        let entries: Vec<C64> = self.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(match self.kind {
            StateKind::Pure => QuantumState::Pure(entries),
            StateKind::Density => QuantumState::Density(ComplexMatrix::new(dim, entries)?),
        })
    }
}

/// Parses and validates a state file's contents.
pub fn decode_state(text: &str, tol: &Tolerances) -> Result<QuantumState> {
    let state = StateFile::parse(text)?.to_state()?;
    let report = validate_state(&state, tol);
    if let Some(bad) = report.failures().next() {
        return Err(input_error(format!(
            "state fails the `{}` check (residual {:e}, threshold {:e})",
            bad.name, bad.residual, bad.threshold
        )));
    }
    Ok(state)
}

pub fn load_state(path: &Path, tol: &Tolerances) -> Result<QuantumState> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    decode_state(&text, tol).map_err(|e| match e {
        Error::Input(msg) => input_error(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn load_tolerances(path: &Path) -> Result<Tolerances> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let tol: Tolerances =
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    tol.check()?;
    Ok(tol)
}

/// Decimal text with 17 significant digits, independent of locale.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows<W: Write, const N: usize>(out: W, header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> Result<()> {
    let io_err = |e: csv::Error| input_error(format!("writing CSV: {e}"));
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row.map(format_number)).map_err(io_err)?;
    }
    w.flush().map_err(|e| input_error(format!("writing CSV: {e}")))
}

/// Columns `phi,p`.
pub fn write_phase_csv<W: Write>(out: W, rows: &[(f64, f64)]) -> Result<()> {
    write_rows(out, ["phi", "p"], rows.iter().map(|&(phi, p)| [phi, p]))
}

/// Columns `phi_plus,phi_minus,p`.
pub fn write_joint_csv<W: Write>(out: W, rows: &[[f64; 3]]) -> Result<()> {
    write_rows(out, ["phi_plus", "phi_minus", "p"], rows.iter().copied())
}

/// Columns `epsilon,predicted,computed,concurrence`.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    write_rows(
        out,
        ["epsilon", "predicted", "computed", "concurrence"],
        rows.iter().map(|r| [r.epsilon, r.predicted, r.computed, r.concurrence]),
    )
}

/// Reads back a numeric CSV with a header row.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| input_error(format!("reading CSV: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| input_error(format!("reading CSV: {e}")))?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| input_error(format!("CSV row {}: '{f}': {e}", i + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
