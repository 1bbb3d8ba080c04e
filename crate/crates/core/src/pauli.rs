//! Pauli words and weighted Pauli sums.
//!
//! A word is written with character `i` acting on qubit `i`, so `"ZI"` is Z on
//! qubit 0. Amplitude indices use qubit 0 as the least significant bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauli(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Row-major 2×2 matrix.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of single-qubit Paulis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::Invalid("empty Pauli string".into()));
        }
        if ops.len() > 63 {
            return Err(Error::TooManyQubits(ops.len()));
        }
        Ok(Self { ops })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            ops: vec![Pauli::I; num_qubits.max(1)],
        }
    }

    /// A single non-identity Pauli on `qubit` of an `num_qubits` register.
    pub fn single(num_qubits: usize, qubit: usize, op: Pauli) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits,
            });
        }
        let mut ops = vec![Pauli::I; num_qubits];
        ops[qubit] = op;
        Self::new(ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Bit masks `(x, z, y_count)` such that `P = i^{y_count} X^x Z^z`.
    pub fn masks(&self) -> (usize, usize, u32) {
        let mut x = 0usize;
        let mut z = 0usize;
        let mut ny = 0;
        for (q, p) in self.ops.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>>>()?;
        Self::new(ops)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

/// `Σ cᵢ Pᵢ` with real coefficients and distinct strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    /// Builds a sum, merging repeated strings by adding their coefficients.
    /// Terms keep the order in which each string first appeared.
    pub fn new(num_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Invalid("Pauli sum needs at least one qubit".into()));
        }
        let mut merged: Vec<PauliTerm> = Vec::new();
        let mut index: BTreeMap<PauliString, usize> = BTreeMap::new();
        for term in terms {
            if !term.coefficient.is_finite() {
                return Err(Error::Invalid(format!(
                    "non-finite coefficient for {}",
                    term.string
                )));
            }
            if term.string.num_qubits() != num_qubits {
                return Err(Error::QubitCountMismatch {
                    operator: term.string.num_qubits(),
                    state: num_qubits,
                });
            }
            match index.get(&term.string) {
                Some(&i) => merged[i].coefficient += term.coefficient,
                None => {
                    index.insert(term.string.clone(), merged.len());
                    merged.push(term);
                }
            }
        }
        Ok(Self {
            num_qubits,
            terms: merged,
        })
    }

    /// Convenience constructor from `(word, coefficient)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let terms = pairs
            .into_iter()
            .map(|(w, c)| {
                Ok(PauliTerm {
                    coefficient: c,
                    string: w.parse()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = terms
            .first()
            .map(|t| t.string.num_qubits())
            .ok_or_else(|| Error::Invalid("empty Pauli sum".into()))?;
        Self::new(n, terms)
    }

    /// `c · I^{⊗n}`
    pub fn constant(num_qubits: usize, c: f64) -> Self {
        Self {
            num_qubits,
            terms: vec![PauliTerm {
                coefficient: c,
                string: PauliString::identity(num_qubits),
            }],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Coefficient of the all-identity string (zero when absent).
    pub fn identity_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.string.is_identity())
            .map(|t| t.coefficient)
            .sum()
    }

    /// The same sum with the all-identity term removed.
    pub fn without_identity(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .filter(|t| !t.string.is_identity())
                .cloned()
                .collect(),
        }
    }
}
