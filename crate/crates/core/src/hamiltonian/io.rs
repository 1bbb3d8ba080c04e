//! Line-oriented Hamiltonian files.
//!
//! ```text
//! # molecule=H2 basis=sto3g mapping=parity qubits=4 includes_nuclear_repulsion=true source=<free text>
//!
//! bond 0.3
//! IIII 1.3007238601106887
//! ZIII 0.2586915430145133
//!
//! bond 0.5
//! ...
//! ```
//!
//! Further `#` lines are comments. Repeated words within a block are summed.

use std::fmt::Write as _;
use std::path::Path;

use super::{HamiltonianMetadata, MolecularHamiltonianSet};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, PauliTerm};

pub fn load_hamiltonians(path: impl AsRef<Path>) -> Result<MolecularHamiltonianSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_hamiltonians(&text, &path.display().to_string())
}

/// Parses file contents; `origin` labels diagnostics.
pub fn parse_hamiltonians(text: &str, origin: &str) -> Result<MolecularHamiltonianSet> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let meta = parse_header(header).map_err(|m| err(1, m))?;

    let mut blocks: Vec<(f64, usize, Vec<PauliTerm>)> = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let first = fields.next().unwrap_or_default();
        if first == "bond" {
            let value = fields
                .next()
                .ok_or_else(|| err(lineno, "missing bond length".into()))?;
            let bond: f64 = value
                .parse()
                .map_err(|_| err(lineno, format!("bad bond length {value:?}")))?;
            if !(bond.is_finite() && bond > 0.0) {
                return Err(err(
                    lineno,
                    format!("bond length must be positive, got {bond}"),
                ));
            }
            if fields.next().is_some() {
                return Err(err(lineno, "trailing fields after bond length".into()));
            }
            if blocks.iter().any(|(b, _, _)| *b == bond) {
                return Err(err(lineno, format!("duplicate bond length {bond}")));
            }
            blocks.push((bond, lineno, Vec::new()));
            continue;
        }

        let Some((_, _, terms)) = blocks.last_mut() else {
            return Err(err(lineno, "term before any `bond` line".into()));
        };
        let string: PauliString = first
            .parse()
            .map_err(|e: Error| err(lineno, format!("field 1: {e}")))?;
        if string.num_qubits() != meta.num_qubits {
            return Err(err(
                lineno,
                format!(
                    "field 1: word {first} has {} qubits, header says {}",
                    string.num_qubits(),
                    meta.num_qubits
                ),
            ));
        }
        let value = fields
            .next()
            .ok_or_else(|| err(lineno, "field 2: missing coefficient".into()))?;
        let coefficient: f64 = value
            .parse()
            .map_err(|_| err(lineno, format!("field 2: bad coefficient {value:?}")))?;
        if !coefficient.is_finite() {
            return Err(err(lineno, "field 2: coefficient must be finite".into()));
        }
        if fields.next().is_some() {
            return Err(err(lineno, "trailing fields after coefficient".into()));
        }
        terms.push(PauliTerm {
            coefficient,
            string,
        });
    }

    if blocks.is_empty() {
        return Err(err(1, "no `bond` blocks".into()));
    }
    let mut entries = Vec::with_capacity(blocks.len());
    for (bond, lineno, terms) in blocks {
        if terms.is_empty() {
            return Err(err(lineno, format!("bond {bond} has no terms")));
        }
        entries.push((bond, PauliSum::new(meta.num_qubits, terms)?));
    }
    MolecularHamiltonianSet::new(meta, entries)
}

fn parse_header(line: &str) -> std::result::Result<HamiltonianMetadata, String> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| "header must start with `#`".to_string())?
        .trim();
    let (fields, source) = match body.find("source=") {
        Some(at) => (&body[..at], body[at + "source=".len()..].trim().to_string()),
        None => (body, String::new()),
    };

    let mut molecule = None;
    let mut basis = None;
    let mut mapping = None;
    let mut qubits = None;
    let mut nuclear = None;
    for kv in fields.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("header field {kv:?} is not key=value"))?;
        match k {
            "molecule" => molecule = Some(v.to_string()),
            "basis" => basis = Some(v.to_string()),
            "mapping" => mapping = Some(v.to_string()),
            "qubits" => {
                qubits = Some(
                    v.parse::<usize>()
                        .map_err(|_| format!("bad qubit count {v:?}"))?,
                )
            }
            "includes_nuclear_repulsion" => {
                nuclear = Some(
                    v.parse::<bool>()
                        .map_err(|_| format!("bad boolean {v:?}"))?,
                )
            }
            other => return Err(format!("unknown header key {other:?}")),
        }
    }
    let num_qubits = qubits.ok_or("header is missing qubits=")?;
    if num_qubits == 0 {
        return Err("qubits must be positive".into());
    }
    Ok(HamiltonianMetadata {
        molecule: molecule.ok_or("header is missing molecule=")?,
        basis: basis.unwrap_or_default(),
        mapping: mapping.unwrap_or_default(),
        num_qubits,
        includes_nuclear_repulsion: nuclear.unwrap_or(false),
        source,
    })
}

/// Serializes a set in the file format. Coefficients are written with 17
/// significant digits so they read back bit-exactly.
pub fn format_hamiltonians(set: &MolecularHamiltonianSet) -> String {
    let m = set.metadata();
    let mut out = format!(
        "# molecule={} basis={} mapping={} qubits={} includes_nuclear_repulsion={} source={}\n",
        m.molecule, m.basis, m.mapping, m.num_qubits, m.includes_nuclear_repulsion, m.source
    );
    for (bond, h) in set.entries() {
        let _ = write!(out, "\nbond {bond}\n");
        for t in h.terms() {
            let _ = writeln!(out, "{} {:.16e}", t.string, t.coefficient);
        }
    }
    out
}
