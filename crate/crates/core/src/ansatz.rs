//! The four hardware-efficient ansatz templates on 4 qubits.
//!
//! Gate layouts (layout version 1). `rot(A,B)` applies A then B to each qubit
//! in turn, `chain` is CNOT 0→1, 1→2, 2→3 and `ring` adds 3→0.
//!
//! | template | initial block      | repeated block                              | N_gt     |
//! |----------|--------------------|---------------------------------------------|----------|
//! | 1        | rot(RX,RY,RZ)      | ring, rot(RX,RY,RZ)                         | 12n + 12 |
//! | 2        | rot(RY,RZ)         | chain, rot(RY,RZ)                           | 8n + 8   |
//! | 3        | rot(RY,RZ)         | chain, rot(RY,RZ), chain, rot(RY,RZ)        | 16n + 8  |
//! | 4        | none               | rot(RY,RZ), chain                           | 8n       |
//!
//! Parameter slots are numbered in gate-application order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Gate, GateKind};

pub const TEMPLATE_QUBITS: usize = 4;
pub const LAYOUT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum AnsatzTemplate {
    One,
    Two,
    Three,
    Four,
}

impl AnsatzTemplate {
    pub const ALL: [AnsatzTemplate; 4] = [Self::One, Self::Two, Self::Three, Self::Four];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            other => Err(Error::UnknownTemplate(other)),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }

    pub fn num_qubits(self) -> usize {
        TEMPLATE_QUBITS
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::One => "RX,RY,RZ on every qubit; repeated: CNOT ring then RX,RY,RZ on every qubit",
            Self::Two => "RY,RZ on every qubit; repeated: CNOT chain then RY,RZ on every qubit",
            Self::Three => {
                "RY,RZ on every qubit; repeated: CNOT chain, RY,RZ on every qubit, CNOT chain, RY,RZ on every qubit"
            }
            Self::Four => "repeated: RY,RZ on every qubit then CNOT chain",
        }
    }

    /// Trainable gate count at depth `n`.
    pub fn trainable_gates(self, depth: usize) -> Result<usize> {
        if depth < 1 {
            return Err(Error::Invalid("depth must be at least 1".into()));
        }
        Ok(match self {
            Self::One => 12 * depth + 12,
            Self::Two => 8 * depth + 8,
            Self::Three => 16 * depth + 8,
            Self::Four => 8 * depth,
        })
    }
}

impl From<AnsatzTemplate> for u8 {
    fn from(t: AnsatzTemplate) -> u8 {
        t.id()
    }
}

impl TryFrom<u8> for AnsatzTemplate {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        Self::from_id(id)
    }
}

impl fmt::Display for AnsatzTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

pub fn count_trainable(template_id: u8, depth: usize) -> Result<usize> {
    AnsatzTemplate::from_id(template_id)?.trainable_gates(depth)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnsatzCircuit {
    template: Option<AnsatzTemplate>,
    depth: usize,
    num_qubits: usize,
    gates: Vec<Gate>,
    num_params: usize,
}

impl AnsatzCircuit {
    /// Wraps an arbitrary gate list; slots must cover `0..num_params` exactly once.
    pub fn custom(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::from_gates(None, 1, num_qubits, gates)
    }

    fn from_gates(
        template: Option<AnsatzTemplate>,
        depth: usize,
        num_qubits: usize,
        gates: Vec<Gate>,
    ) -> Result<Self> {
        let mut slots: Vec<usize> = gates.iter().filter_map(Gate::param_slot).collect();
        let num_params = slots.len();
        slots.sort_unstable();
        if slots.iter().enumerate().any(|(i, &s)| i != s) {
            return Err(Error::Invalid(
                "parameter slots must be exactly 0..num_params, each used once".into(),
            ));
        }
        for g in &gates {
            g.validate(num_qubits, num_params)?;
        }
        Ok(Self {
            template,
            depth,
            num_qubits,
            gates,
            num_params,
        })
    }

    /// `None` for circuits built with [`AnsatzCircuit::custom`].
    pub fn template(&self) -> Option<AnsatzTemplate> {
        self.template
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    /// Text listing, one gate per line: `KIND q[,q] [slot]`.
    pub fn dump(&self) -> String {
        let template = self
            .template
            .map_or("custom".to_string(), |t| t.to_string());
        let mut out = format!(
            "# template={} depth={} qubits={} params={} layout=v{}\n",
            template,
            self.depth,
            self.num_qubits(),
            self.num_params,
            LAYOUT_VERSION
        );
        for g in &self.gates {
            let qubits: Vec<String> = g.qubits().iter().map(usize::to_string).collect();
            out.push_str(g.kind().name());
            out.push(' ');
            out.push_str(&qubits.join(","));
            if let Some(s) = g.param_slot() {
                out.push_str(&format!(" {s}"));
            }
            out.push('\n');
        }
        out
    }
}

struct Builder {
    gates: Vec<Gate>,
    next_slot: usize,
}

impl Builder {
    fn rotation(&mut self, kind: GateKind, q: usize) {
        let g = Gate::new(kind, vec![q], Some(self.next_slot)).expect("rotation gate");
        self.next_slot += 1;
        self.gates.push(g);
    }

    fn rotations(&mut self, kinds: &[GateKind]) {
        for q in 0..TEMPLATE_QUBITS {
            for &k in kinds {
                self.rotation(k, q);
            }
        }
    }

    fn chain(&mut self) {
        for q in 0..TEMPLATE_QUBITS - 1 {
            self.gates
                .push(Gate::cnot(q, q + 1).expect("distinct qubits"));
        }
    }

    fn ring(&mut self) {
        self.chain();
        self.gates
            .push(Gate::cnot(TEMPLATE_QUBITS - 1, 0).expect("distinct qubits"));
    }
}

pub fn build_circuit(template_id: u8, depth: usize) -> Result<AnsatzCircuit> {
    build(AnsatzTemplate::from_id(template_id)?, depth)
}

pub fn build(template: AnsatzTemplate, depth: usize) -> Result<AnsatzCircuit> {
    use GateKind::{RX, RY, RZ};

    template.trainable_gates(depth)?;
    let mut b = Builder {
        gates: Vec::new(),
        next_slot: 0,
    };
    match template {
        AnsatzTemplate::One => {
            b.rotations(&[RX, RY, RZ]);
            for _ in 0..depth {
                b.ring();
                b.rotations(&[RX, RY, RZ]);
            }
        }
        AnsatzTemplate::Two => {
            b.rotations(&[RY, RZ]);
            for _ in 0..depth {
                b.chain();
                b.rotations(&[RY, RZ]);
            }
        }
        AnsatzTemplate::Three => {
            b.rotations(&[RY, RZ]);
            for _ in 0..depth {
                b.chain();
                b.rotations(&[RY, RZ]);
                b.chain();
                b.rotations(&[RY, RZ]);
            }
        }
        AnsatzTemplate::Four => {
            for _ in 0..depth {
                b.rotations(&[RY, RZ]);
                b.chain();
            }
        }
    }
    AnsatzCircuit::from_gates(Some(template), depth, TEMPLATE_QUBITS, b.gates)
}
