//! Circuit intermediate representation: register layouts, elementary and macro
//! gates, composition and the controlled/inverse closure.

mod cost;
mod export;
mod lower;

pub use cost::{count_gates, GateCostReport};
pub use export::{from_json, from_qasm, to_json, to_qasm};
pub use lower::{
    linprep_gates, lower, lower_add, lower_const_add, lower_increment, lower_mcx, lower_reflection,
    lower_shuffle, LoweringConfig, McxStrategy, ReflectionStyle,
};

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{QwtError, Result};

/// A named block of qubits. Registers are listed from least to most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub size: usize,
}

/// Ordered registers; qubit `q` is bit `q` of the global basis index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

pub const SYS: &str = "sys";
pub const AUX: &str = "aux";
pub const ANC: &str = "anc";
pub const PAR: &str = "par";
pub const WORK: &str = "work";

impl RegisterLayout {
    /// Layout `par | anc | aux | sys` (most to least significant).
    pub fn qwt(anc: usize, sys: usize, aux: bool) -> Self {
        let mut registers = vec![Register {
            name: SYS.into(),
            size: sys,
        }];
        if aux {
            registers.push(Register {
                name: AUX.into(),
                size: 1,
            });
        }
        registers.push(Register {
            name: ANC.into(),
            size: anc,
        });
        registers.push(Register {
            name: PAR.into(),
            size: 1,
        });
        Self { registers }
    }

    /// A single register `q` of `width` qubits.
    pub fn flat(width: usize) -> Self {
        Self {
            registers: vec![Register {
                name: "q".into(),
                size: width,
            }],
        }
    }

    pub fn from_registers(registers: Vec<Register>) -> Self {
        Self { registers }
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn width(&self) -> usize {
        self.registers.iter().map(|r| r.size).sum()
    }

    /// Qubit range of a register, if present.
    pub fn range(&self, name: &str) -> Option<Range<usize>> {
        let mut start = 0;
        for r in &self.registers {
            if r.name == name {
                return Some(start..start + r.size);
            }
            start += r.size;
        }
        None
    }

    pub fn qubits(&self, name: &str) -> Vec<usize> {
        self.range(name).map(|r| r.collect()).unwrap_or_default()
    }

    /// Qubits that start and end in `|0>` by contract (`par`, `anc`, `aux`).
    pub fn ancilla_count(&self) -> usize {
        self.registers
            .iter()
            .filter(|r| matches!(r.name.as_str(), PAR | ANC | AUX))
            .map(|r| r.size)
            .sum()
    }

    /// Adds (or grows) the top-most clean workspace register.
    pub fn with_workspace(&self, size: usize) -> Self {
        let mut out = self.clone();
        if size == 0 {
            return out;
        }
        match out.registers.iter_mut().find(|r| r.name == WORK) {
            Some(r) => r.size = r.size.max(size),
            None => out.registers.push(Register {
                name: WORK.into(),
                size,
            }),
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    /// Fires on `|1>` when true, on `|0>` when false.
    pub polarity: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: true,
        }
    }
    pub fn zero(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: false,
        }
    }
}

/// Which state a [`GateKind::Prep`] macro loads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepRole {
    /// Square-root magnitudes.
    Prep,
    /// Signed square roots; the circuit applies the adjoint of this preparation.
    Unprep,
    /// Linear coefficients.
    Linprep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum GateKind {
    /// NOT; with one or two controls this is CNOT or TOFFOLI, with more an MCX.
    X,
    H,
    /// Z; with one control this is CZ.
    Z,
    /// `exp(-i angle Y / 2)`
    Ry(f64),
    Swap,
    /// Multiplies the state by `-1`. A no-op alone, a Z on the control once controlled.
    GlobalPhase,
    /// Targets: the addend qubits (first `addend`), then the target register.
    /// `|a>|b> -> |a>|b + a mod 2^n>`.
    Add {
        addend: usize,
    },
    Sub {
        addend: usize,
    },
    /// `|q_{n-1} .. q_1 q_0> -> |q_0 q_{n-1} .. q_1>`
    Shuffle,
    Unshuffle,
    Inc,
    Dec,
    ConstAdd(u64),
    ConstSub(u64),
    /// Dense real reflection sending `|0>` to `amplitudes`. It is symmetric, so the
    /// macro equals its own adjoint; `dagger` only affects lowering.
    Prep {
        role: PrepRole,
        amplitudes: Vec<f64>,
        dagger: bool,
    },
    /// Uniformly controlled RY. Targets: select qubits then the rotated qubit;
    /// `angles[l]` is applied when the select register holds `l`.
    Ucry(Vec<f64>),
    /// `I - 2|0..0><0..0|` on the targets.
    Reflect,
}

impl GateKind {
    pub fn inverse(&self) -> Self {
        match self {
            GateKind::Ry(a) => GateKind::Ry(-a),
            GateKind::Add { addend } => GateKind::Sub { addend: *addend },
            GateKind::Sub { addend } => GateKind::Add { addend: *addend },
            GateKind::Shuffle => GateKind::Unshuffle,
            GateKind::Unshuffle => GateKind::Shuffle,
            GateKind::Inc => GateKind::Dec,
            GateKind::Dec => GateKind::Inc,
            GateKind::ConstAdd(c) => GateKind::ConstSub(*c),
            GateKind::ConstSub(c) => GateKind::ConstAdd(*c),
            GateKind::Prep {
                role,
                amplitudes,
                dagger,
            } => GateKind::Prep {
                role: *role,
                amplitudes: amplitudes.clone(),
                dagger: !dagger,
            },
            GateKind::Ucry(angles) => GateKind::Ucry(angles.iter().map(|a| -a).collect()),
            other => other.clone(),
        }
    }

    /// True for basis-state permutations (the simulator moves amplitudes).
    pub fn is_permutation(&self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::Swap
                | GateKind::Add { .. }
                | GateKind::Sub { .. }
                | GateKind::Shuffle
                | GateKind::Unshuffle
                | GateKind::Inc
                | GateKind::Dec
                | GateKind::ConstAdd(_)
                | GateKind::ConstSub(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(flatten)]
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Self {
        Self {
            kind,
            targets,
            controls: Vec::new(),
        }
    }

    pub fn x(t: usize) -> Self {
        Self::new(GateKind::X, vec![t])
    }

    pub fn cnot(c: usize, t: usize) -> Self {
        Self::x(t).with_controls(&[Control::one(c)])
    }

    pub fn toffoli(c0: usize, c1: usize, t: usize) -> Self {
        Self::x(t).with_controls(&[Control::one(c0), Control::one(c1)])
    }

    pub fn mcx(controls: &[usize], t: usize) -> Self {
        let cs: Vec<Control> = controls.iter().map(|&q| Control::one(q)).collect();
        Self::x(t).with_controls(&cs)
    }

    pub fn h(t: usize) -> Self {
        Self::new(GateKind::H, vec![t])
    }

    pub fn z(t: usize) -> Self {
        Self::new(GateKind::Z, vec![t])
    }

    pub fn ry(angle: f64, t: usize) -> Self {
        Self::new(GateKind::Ry(angle), vec![t])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap, vec![a, b])
    }

    pub fn with_controls(mut self, controls: &[Control]) -> Self {
        self.controls.extend_from_slice(controls);
        self
    }

    pub fn inverse(&self) -> Self {
        Self {
            kind: self.kind.inverse(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Every qubit the gate touches, targets first.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.targets.clone();
        s.extend(self.controls.iter().map(|c| c.qubit));
        s
    }

    /// Conventional name: `not`, `cnot`, `toffoli`, `mcx`, `cz`, ... .
    pub fn name(&self) -> String {
        let k = self.controls.len();
        match &self.kind {
            GateKind::X => match k {
                0 => "not".into(),
                1 => "cnot".into(),
                2 => "toffoli".into(),
                _ => format!("mcx({k})"),
            },
            GateKind::Z if k == 1 => "cz".into(),
            other => {
                let base = match other {
                    GateKind::X => unreachable!(),
                    GateKind::H => "h",
                    GateKind::Z => "z",
                    GateKind::Ry(_) => "ry",
                    GateKind::Swap => "swap",
                    GateKind::GlobalPhase => "global_phase",
                    GateKind::Add { .. } => "add",
                    GateKind::Sub { .. } => "sub",
                    GateKind::Shuffle => "shuffle",
                    GateKind::Unshuffle => "unshuffle",
                    GateKind::Inc => "inc",
                    GateKind::Dec => "dec",
                    GateKind::ConstAdd(_) => "const_add",
                    GateKind::ConstSub(_) => "const_sub",
                    GateKind::Prep { role, .. } => match role {
                        PrepRole::Prep => "prep",
                        PrepRole::Unprep => "unprep",
                        PrepRole::Linprep => "linprep",
                    },
                    GateKind::Ucry(_) => "ucry",
                    GateKind::Reflect => "reflect",
                };
                if k == 0 {
                    base.into()
                } else {
                    format!("c{k}-{base}")
                }
            }
        }
    }

    /// Checks arity, distinctness and bounds against a circuit width.
    pub fn validate(&self, width: usize) -> Result<()> {
        let support = self.support();
        let uniq: BTreeSet<usize> = support.iter().copied().collect();
        if uniq.len() != support.len() {
            return Err(QwtError::Layout(format!(
                "gate {} repeats a qubit: {:?}",
                self.name(),
                support
            )));
        }
        if let Some(&q) = support.iter().find(|&&q| q >= width) {
            return Err(QwtError::Layout(format!(
                "gate {} uses qubit {q} outside a {width}-qubit layout",
                self.name()
            )));
        }
        let t = self.targets.len();
        let ok = match &self.kind {
            GateKind::X | GateKind::H | GateKind::Z | GateKind::Ry(_) => t == 1,
            GateKind::Swap => t == 2,
            GateKind::GlobalPhase => t == 0,
            GateKind::Add { addend } | GateKind::Sub { addend } => {
                *addend >= 1 && t >= 2 * addend && t - addend <= 63
            }
            GateKind::Shuffle | GateKind::Unshuffle | GateKind::Inc | GateKind::Dec => {
                (1..=63).contains(&t)
            }
            GateKind::ConstAdd(c) | GateKind::ConstSub(c) => {
                if (1..=63).contains(&t) && *c >= 1u64 << t {
                    return Err(QwtError::ConstantOutOfRange {
                        value: *c,
                        width: t,
                    });
                }
                (1..=63).contains(&t)
            }
            GateKind::Prep { amplitudes, .. } => t >= 1 && amplitudes.len() == 1 << t,
            GateKind::Ucry(angles) => t >= 1 && angles.len() == 1 << (t - 1),
            GateKind::Reflect => t >= 1,
        };
        if !ok {
            return Err(QwtError::Layout(format!(
                "gate {} has an invalid operand list {:?}",
                self.name(),
                self.targets
            )));
        }
        Ok(())
    }
}

/// A run of lowered gates that borrowed qubits and must leave them untouched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorrowRecord {
    pub first_gate: usize,
    pub gate_count: usize,
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub borrowed: Vec<BorrowRecord>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Self {
            layout,
            gates: Vec::new(),
            borrowed: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.layout != self.layout {
            return Err(QwtError::Layout(
                "cannot append circuits over different layouts".into(),
            ));
        }
        let offset = self.gates.len();
        self.gates.extend(other.gates.iter().cloned());
        self.borrowed
            .extend(other.borrowed.iter().map(|b| BorrowRecord {
                first_gate: b.first_gate + offset,
                ..b.clone()
            }));
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let w = self.width();
        self.gates.iter().try_for_each(|g| g.validate(w))
    }

    /// True when every gate is NOT/CNOT/TOFFOLI, H, Z/CZ, RY or SWAP.
    pub fn is_elementary(&self) -> bool {
        self.gates.iter().all(is_elementary)
    }
}

pub(crate) fn is_elementary(g: &Gate) -> bool {
    let k = g.controls.len();
    let positive = g.controls.iter().all(|c| c.polarity);
    match g.kind {
        GateKind::X => k <= 2 && positive,
        GateKind::Z => k <= 1 && positive,
        GateKind::H | GateKind::Ry(_) | GateKind::Swap => k == 0,
        _ => false,
    }
}

/// `a` followed by `b`.
pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit> {
    let mut out = a.clone();
    out.append(b)?;
    Ok(out)
}

/// Reversed gate order with every gate inverted.
pub fn inverse(c: &Circuit) -> Circuit {
    let len = c.gates.len();
    Circuit {
        layout: c.layout.clone(),
        gates: c.gates.iter().rev().map(Gate::inverse).collect(),
        borrowed: c
            .borrowed
            .iter()
            .map(|b| BorrowRecord {
                first_gate: len - b.first_gate - b.gate_count,
                ..b.clone()
            })
            .collect(),
    }
}

/// Adds `control` to every gate. The control qubit must not be acted on.
pub fn controlled(c: &Circuit, qubit: usize, polarity: bool) -> Result<Circuit> {
    if qubit >= c.width() {
        return Err(QwtError::Layout(format!(
            "control qubit {qubit} outside the layout"
        )));
    }
    if let Some(g) = c.gates.iter().find(|g| g.support().contains(&qubit)) {
        return Err(QwtError::Layout(format!(
            "control qubit {qubit} is already used by gate {}",
            g.name()
        )));
    }
    if !c.borrowed.is_empty() {
        return Err(QwtError::Layout(
            "controlled() applies to macro circuits, not lowered ones".into(),
        ));
    }
    let ctl = Control { qubit, polarity };
    Ok(Circuit {
        layout: c.layout.clone(),
        gates: c
            .gates
            .iter()
            .map(|g| g.clone().with_controls(&[ctl]))
            .collect(),
        borrowed: Vec::new(),
    })
}

/// Value of the bits of `idx` at `qubits` (first qubit is the LSB).
pub fn gather(idx: usize, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, &q)| acc | ((((idx >> q) & 1) as u64) << k))
}

/// `idx` with the bits at `qubits` replaced by `value`.
pub fn scatter(idx: usize, qubits: &[usize], value: u64) -> usize {
    qubits.iter().enumerate().fold(idx, |acc, (k, &q)| {
        let bit = ((value >> k) & 1) as usize;
        (acc & !(1 << q)) | (bit << q)
    })
}

/// True when every control of `g` is satisfied by basis state `idx`.
pub fn controls_fire(controls: &[Control], idx: usize) -> bool {
    controls
        .iter()
        .all(|c| ((idx >> c.qubit) & 1 == 1) == c.polarity)
}

/// Image of basis state `idx` under a permutation gate, ignoring controls.
pub fn permute_basis(kind: &GateKind, targets: &[usize], idx: usize) -> usize {
    let mask = |w: usize| if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
    match kind {
        GateKind::X => idx ^ (1 << targets[0]),
        GateKind::Swap => {
            let (a, b) = (targets[0], targets[1]);
            let (ba, bb) = ((idx >> a) & 1, (idx >> b) & 1);
            if ba == bb {
                idx
            } else {
                idx ^ (1 << a) ^ (1 << b)
            }
        }
        GateKind::Add { addend } | GateKind::Sub { addend } => {
            let (a_q, b_q) = targets.split_at(*addend);
            let a = gather(idx, a_q);
            let b = gather(idx, b_q);
            let m = mask(b_q.len());
            let v = if matches!(kind, GateKind::Add { .. }) {
                b.wrapping_add(a) & m
            } else {
                b.wrapping_sub(a) & m
            };
            scatter(idx, b_q, v)
        }
        GateKind::Shuffle | GateKind::Unshuffle => {
            let n = targets.len();
            let v = gather(idx, targets);
            let v = if matches!(kind, GateKind::Shuffle) {
                (v >> 1) | ((v & 1) << (n - 1))
            } else {
                ((v << 1) & mask(n)) | (v >> (n - 1))
            };
            scatter(idx, targets, v)
        }
        GateKind::Inc | GateKind::Dec | GateKind::ConstAdd(_) | GateKind::ConstSub(_) => {
            let v = gather(idx, targets);
            let m = mask(targets.len());
            let v = match kind {
                GateKind::Inc => v.wrapping_add(1),
                GateKind::Dec => v.wrapping_sub(1),
                GateKind::ConstAdd(c) => v.wrapping_add(*c),
                GateKind::ConstSub(c) => v.wrapping_sub(*c),
                _ => unreachable!(),
            } & m;
            scatter(idx, targets, v)
        }
        _ => panic!("{kind:?} is not a permutation gate"),
    }
}
