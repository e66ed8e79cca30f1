//! Lowering of macro gates to NOT/CNOT/TOFFOLI, H, Z/CZ, RY and SWAP.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use super::{is_elementary, BorrowRecord, Circuit, Control, Gate, GateKind, RegisterLayout, WORK};
use crate::error::{QwtError, Result};
use crate::filters::RotationCascade;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum McxStrategy {
    /// Linear ladder with `k - 2` borrowed qubits; falls back to one borrowed qubit.
    #[default]
    Auto,
    /// `k - 2` borrowed qubits, `4(k - 2)` TOFFOLIs.
    Borrowed,
    /// One borrowed qubit: the controls are split in two halves.
    SingleBorrowed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReflectionStyle {
    /// Phase kickback onto one clean workspace qubit.
    #[default]
    Kickback,
    /// Multi-controlled Z on the reflected register itself.
    InPlace,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoweringConfig {
    pub mcx: McxStrategy,
    pub reflection: ReflectionStyle,
}

/// Clean workspace qubits needed to expand `g`.
fn workspace_need(g: &Gate, cfg: &LoweringConfig) -> usize {
    let reflect = match cfg.reflection {
        ReflectionStyle::Kickback => 1,
        ReflectionStyle::InPlace => 0,
    };
    match &g.kind {
        GateKind::Add { addend } | GateKind::Sub { addend } => g.targets.len() - 2 * addend + 1,
        GateKind::ConstAdd(0) | GateKind::ConstSub(0) => 0,
        GateKind::ConstAdd(_) | GateKind::ConstSub(_) => g.targets.len() + 1,
        GateKind::Reflect => reflect,
        GateKind::Prep { .. } => 1 + reflect,
        _ => 0,
    }
}

struct Lowerer {
    cfg: LoweringConfig,
    width: usize,
    out: Vec<Gate>,
    borrowed: Vec<BorrowRecord>,
}

impl Lowerer {
    fn emit(&mut self, g: Gate) {
        debug_assert!(is_elementary(&g), "{g:?}");
        self.out.push(g);
    }

    /// Lowest-index qubits outside `support`.
    fn free_qubits(&self, support: &[usize], count: usize) -> Option<Vec<usize>> {
        let used: BTreeSet<usize> = support.iter().copied().collect();
        let free: Vec<usize> = (0..self.width)
            .filter(|q| !used.contains(q))
            .take(count)
            .collect();
        (free.len() == count).then_some(free)
    }

    fn available(&self, support: &[usize]) -> usize {
        self.width - support.len()
    }

    fn gates(&mut self, gates: Vec<Gate>, work: usize) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.gate(g, work))
    }

    /// Lowers one gate; `work` is the first clean workspace qubit free for it.
    fn gate(&mut self, g: Gate, work: usize) -> Result<()> {
        let negative: Vec<usize> = g
            .controls
            .iter()
            .filter(|c| !c.polarity)
            .map(|c| c.qubit)
            .collect();
        if !negative.is_empty() {
            negative.iter().for_each(|&q| self.emit(Gate::x(q)));
            let flipped = Gate {
                controls: g.controls.iter().map(|c| Control::one(c.qubit)).collect(),
                ..g
            };
            self.gate(flipped, work)?;
            negative.iter().for_each(|&q| self.emit(Gate::x(q)));
            return Ok(());
        }
        if is_elementary(&g) {
            self.emit(g);
            return Ok(());
        }
        let cs = g.controls.clone();
        let cq: Vec<usize> = cs.iter().map(|c| c.qubit).collect();
        let t = g.targets.clone();
        match g.kind.clone() {
            GateKind::X => self.mcx(&cq, t[0]),
            GateKind::Z => {
                self.emit(Gate::h(t[0]));
                self.mcx(&cq, t[0])?;
                self.emit(Gate::h(t[0]));
                Ok(())
            }
            GateKind::H => {
                self.gate(Gate::z(t[0]).with_controls(&cs), work)?;
                self.gate(Gate::ry(PI / 2.0, t[0]).with_controls(&cs), work)
            }
            GateKind::Ry(a) => {
                self.emit(Gate::ry(a / 2.0, t[0]));
                self.gate(Gate::x(t[0]).with_controls(&cs), work)?;
                self.emit(Gate::ry(-a / 2.0, t[0]));
                self.gate(Gate::x(t[0]).with_controls(&cs), work)
            }
            GateKind::Swap => {
                let (a, b) = (t[0], t[1]);
                for (c, x) in [(a, b), (b, a), (a, b)] {
                    self.gate(Gate::cnot(c, x).with_controls(&cs), work)?;
                }
                Ok(())
            }
            GateKind::GlobalPhase => match cs.split_first() {
                None => Ok(()),
                Some((first, rest)) => self.gate(Gate::z(first.qubit).with_controls(rest), work),
            },
            GateKind::Reflect => self.reflect(&t, &cs, work),
            GateKind::Add { addend } => {
                let seq = cuccaro_add(&t[..addend], &t[addend..], work);
                self.gates(with_controls(seq, &cs), work)
            }
            GateKind::Sub { addend } => {
                let mut seq = cuccaro_add(&t[..addend], &t[addend..], work);
                seq.reverse();
                self.gates(with_controls(seq, &cs), work)
            }
            GateKind::Shuffle | GateKind::Unshuffle => {
                let mut seq: Vec<Gate> = t.windows(2).map(|w| Gate::swap(w[0], w[1])).collect();
                if matches!(g.kind, GateKind::Unshuffle) {
                    seq.reverse();
                }
                self.gates(with_controls(seq, &cs), work)
            }
            GateKind::Inc => self.increment(&t, &cs, work, false),
            GateKind::Dec => self.increment(&t, &cs, work, true),
            GateKind::ConstAdd(c) | GateKind::ConstSub(c) => {
                if c == 0 {
                    return Ok(());
                }
                let bits = (64 - c.leading_zeros()) as usize;
                let load: Vec<usize> = (work..work + bits).collect();
                let set: Vec<usize> = (0..bits)
                    .filter(|i| (c >> i) & 1 == 1)
                    .map(|i| load[i])
                    .collect();
                set.iter().for_each(|&q| self.emit(Gate::x(q)));
                let mut targets = load.clone();
                targets.extend_from_slice(&t);
                let kind = if matches!(g.kind, GateKind::ConstAdd(_)) {
                    GateKind::Add { addend: bits }
                } else {
                    GateKind::Sub { addend: bits }
                };
                self.gate(Gate::new(kind, targets).with_controls(&cs), work + bits)?;
                set.iter().for_each(|&q| self.emit(Gate::x(q)));
                Ok(())
            }
            GateKind::Prep {
                amplitudes, dagger, ..
            } => {
                let mut seq = prep_expansion(&amplitudes, &t, work)?;
                if dagger {
                    seq = seq.iter().rev().map(Gate::inverse).collect();
                }
                self.gates(with_controls(seq, &cs), work + 1)
            }
            GateKind::Ucry(angles) => {
                let (sel, tgt) = t.split_at(t.len() - 1);
                self.gates(ucry_expansion(&angles, sel, tgt[0], &cs), work)
            }
        }
    }

    fn record<F>(&mut self, qubits: Vec<usize>, body: F) -> Result<()>
    where
        F: FnOnce(&mut Self) -> Result<()>,
    {
        let first = self.out.len();
        body(self)?;
        self.borrowed.push(BorrowRecord {
            first_gate: first,
            gate_count: self.out.len() - first,
            qubits,
        });
        Ok(())
    }

    fn mcx(&mut self, controls: &[usize], target: usize) -> Result<()> {
        let k = controls.len();
        if k <= 2 {
            self.emit(Gate::mcx(controls, target));
            return Ok(());
        }
        let mut support = controls.to_vec();
        support.push(target);
        let avail = self.available(&support);
        match self.cfg.mcx {
            McxStrategy::Borrowed => self.mcx_ladder(controls, target),
            McxStrategy::SingleBorrowed => self.mcx_split(controls, target),
            McxStrategy::Auto if avail >= k - 2 => self.mcx_ladder(controls, target),
            McxStrategy::Auto => self.mcx_split(controls, target),
        }
    }

    /// `k - 2` borrowed qubits, two passes of a TOFFOLI ladder.
    fn mcx_ladder(&mut self, c: &[usize], t: usize) -> Result<()> {
        let k = c.len();
        if k <= 2 {
            self.emit(Gate::mcx(c, t));
            return Ok(());
        }
        let mut support = c.to_vec();
        support.push(t);
        let b = self
            .free_qubits(&support, k - 2)
            .ok_or(QwtError::InsufficientBorrowable {
                needed: k - 2,
                available: self.available(&support),
            })?;
        // 1-based names: c_i = c[i-1], b_i = b[i-1]
        let ladder = |s: &mut Self| {
            for i in (3..k).rev() {
                s.emit(Gate::toffoli(c[i - 1], b[i - 3], b[i - 2]));
            }
            s.emit(Gate::toffoli(c[0], c[1], b[0]));
            for i in 3..k {
                s.emit(Gate::toffoli(c[i - 1], b[i - 3], b[i - 2]));
            }
        };
        self.record(b.clone(), |s| {
            let top = Gate::toffoli(c[k - 1], b[k - 3], t);
            for _ in 0..2 {
                s.emit(top.clone());
                ladder(s);
            }
            Ok(())
        })
    }

    /// One borrowed qubit `b`: `MCX(C1 -> b), MCX(C2 + b -> t)`, twice.
    fn mcx_split(&mut self, c: &[usize], t: usize) -> Result<()> {
        let mut support = c.to_vec();
        support.push(t);
        let b = self
            .free_qubits(&support, 1)
            .ok_or(QwtError::InsufficientBorrowable {
                needed: 1,
                available: 0,
            })?[0];
        let (c1, c2) = c.split_at(c.len().div_ceil(2));
        let mut c2b = c2.to_vec();
        c2b.push(b);
        self.record(vec![b], |s| {
            for _ in 0..2 {
                s.mcx_ladder(c1, b)?;
                s.mcx_ladder(&c2b, t)?;
            }
            Ok(())
        })
    }

    fn reflect(&mut self, t: &[usize], cs: &[Control], work: usize) -> Result<()> {
        let cq: Vec<usize> = cs.iter().map(|c| c.qubit).collect();
        t.iter().for_each(|&q| self.emit(Gate::x(q)));
        match self.cfg.reflection {
            ReflectionStyle::Kickback => {
                let a = work;
                self.emit(Gate::x(a));
                self.emit(Gate::h(a));
                let mut ctl = t.to_vec();
                ctl.extend_from_slice(&cq);
                self.mcx(&ctl, a)?;
                self.emit(Gate::h(a));
                self.emit(Gate::x(a));
            }
            ReflectionStyle::InPlace => {
                let (last, rest) = t.split_last().expect("non-empty reflection");
                let mut ctl = rest.to_vec();
                ctl.extend_from_slice(&cq);
                if ctl.is_empty() {
                    self.emit(Gate::z(*last));
                } else {
                    self.emit(Gate::h(*last));
                    self.mcx(&ctl, *last)?;
                    self.emit(Gate::h(*last));
                }
            }
        }
        t.iter().for_each(|&q| self.emit(Gate::x(q)));
        Ok(())
    }

    fn increment(&mut self, v: &[usize], cs: &[Control], work: usize, dec: bool) -> Result<()> {
        let k = v.len();
        let mut support = v.to_vec();
        support.extend(cs.iter().map(|c| c.qubit));
        let borrow = if k >= 4 {
            self.free_qubits(&support, k)
        } else {
            None
        };
        let Some(g) = borrow else {
            // X(v_i; v_0 .. v_{i-1}), most significant first
            let mut seq: Vec<Gate> = (0..k)
                .rev()
                .map(|i| Gate::mcx(&v[..i], v[i]).with_controls(cs))
                .collect();
            if dec {
                seq.reverse();
            }
            return self.gates(seq, work);
        };
        // v - g - (~g) = v + 1
        let mut sub: Vec<Gate> = takahashi_add(&g, v);
        sub.reverse();
        let sub = with_controls(sub, cs);
        let nots: Vec<Gate> = g.iter().map(|&q| Gate::x(q)).collect();
        let mut seq = Vec::new();
        seq.extend(sub.iter().cloned());
        seq.extend(nots.iter().cloned());
        seq.extend(sub);
        seq.extend(nots);
        if dec {
            seq = seq.iter().rev().map(Gate::inverse).collect();
        }
        self.record(g, |s| s.gates(seq, work))
    }
}

fn with_controls(gates: Vec<Gate>, cs: &[Control]) -> Vec<Gate> {
    gates.into_iter().map(|g| g.with_controls(cs)).collect()
}

/// Ripple-carry `b += a (mod 2^n)` with one clean carry qubit at `work` and
/// `n - len(a)` clean zero-extension qubits after it.
fn cuccaro_add(a: &[usize], b: &[usize], work: usize) -> Vec<Gate> {
    let n = b.len();
    let carry = work;
    let mut a_full = a.to_vec();
    a_full.extend(work + 1..work + 1 + n - a.len());
    let maj =
        |x: usize, y: usize, z: usize| [Gate::cnot(z, y), Gate::cnot(z, x), Gate::toffoli(x, y, z)];
    let uma =
        |x: usize, y: usize, z: usize| [Gate::toffoli(x, y, z), Gate::cnot(z, x), Gate::cnot(x, y)];
    let mut seq = Vec::with_capacity(6 * n);
    seq.extend(maj(carry, b[0], a_full[0]));
    for i in 1..n {
        seq.extend(maj(a_full[i - 1], b[i], a_full[i]));
    }
    for i in (1..n).rev() {
        seq.extend(uma(a_full[i - 1], b[i], a_full[i]));
    }
    seq.extend(uma(carry, b[0], a_full[0]));
    seq
}

/// Ancilla-free `b += a (mod 2^n)` for equal-width registers.
pub(crate) fn takahashi_add(a: &[usize], b: &[usize]) -> Vec<Gate> {
    let n = b.len();
    assert_eq!(a.len(), n);
    if n == 1 {
        return vec![Gate::cnot(a[0], b[0])];
    }
    let mut s = Vec::new();
    for i in 1..n {
        s.push(Gate::cnot(a[i], b[i]));
    }
    for i in (1..n - 1).rev() {
        s.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 0..n - 1 {
        s.push(Gate::toffoli(b[i], a[i], a[i + 1]));
    }
    for i in (1..n).rev() {
        s.push(Gate::cnot(a[i], b[i]));
        s.push(Gate::toffoli(b[i - 1], a[i - 1], a[i]));
    }
    for i in 1..n - 1 {
        s.push(Gate::cnot(a[i], a[i + 1]));
    }
    for i in 0..n {
        s.push(Gate::cnot(a[i], b[i]));
    }
    s
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Gray-code decomposition: `2^k` RY and `2^k` CNOT on the target.
fn ucry_expansion(angles: &[f64], sel: &[usize], t: usize, cs: &[Control]) -> Vec<Gate> {
    let k = sel.len();
    if k == 0 {
        return vec![Gate::ry(angles[0], t).with_controls(cs)];
    }
    let size = 1usize << k;
    let scale = 1.0 / size as f64;
    let mut seq = Vec::with_capacity(2 * size);
    for i in 0..size {
        let gi = gray(i);
        let theta: f64 = angles
            .iter()
            .enumerate()
            .map(|(l, &phi)| {
                if (l & gi).count_ones().is_multiple_of(2) {
                    phi
                } else {
                    -phi
                }
            })
            .sum::<f64>()
            * scale;
        // only the rotations need the outer controls
        seq.push(Gate::ry(theta, t).with_controls(cs));
        let bit = if i + 1 < size {
            (gi ^ gray(i + 1)).trailing_zeros() as usize
        } else {
            k - 1
        };
        seq.push(Gate::cnot(sel[bit], t));
    }
    seq
}

/// Amplitude-amplified preparation of `amplitudes` on `t` using the clean flag
/// qubit `work`. Exact on the all-zero input only.
fn prep_expansion(amplitudes: &[f64], t: &[usize], work: usize) -> Result<Vec<Gate>> {
    let m = t.len();
    let norm = amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(QwtError::Unlowerable("preparation of a zero vector".into()));
    }
    let vmax = amplitudes.iter().fold(0.0f64, |acc, x| acc.max(x.abs())) / norm;
    let dim = (1u64 << m) as f64;
    let sin0 = (1.0 / (dim.sqrt() * vmax)).min(1.0);
    let alpha0 = sin0.asin();
    let rounds = ((PI / (2.0 * alpha0) - 1.0) / 2.0 - 1e-12).ceil().max(0.0) as usize;
    let lambda = dim.sqrt() * (PI / (2.0 * (2 * rounds + 1) as f64)).sin();
    let flag = work;
    let angles: Vec<f64> = amplitudes
        .iter()
        .map(|x| 2.0 * (lambda * x / norm).clamp(-1.0, 1.0).acos())
        .collect();
    let mut a: Vec<Gate> = t.iter().map(|&q| Gate::h(q)).collect();
    let mut ucry_t = t.to_vec();
    ucry_t.push(flag);
    a.push(Gate::new(GateKind::Ucry(angles), ucry_t.clone()));
    let a_inv: Vec<Gate> = a.iter().rev().map(Gate::inverse).collect();
    let mut seq = a.clone();
    for _ in 0..rounds {
        seq.extend([Gate::x(flag), Gate::z(flag), Gate::x(flag)]);
        seq.extend(a_inv.iter().cloned());
        seq.push(Gate::new(GateKind::Reflect, ucry_t.clone()));
        seq.extend(a.iter().cloned());
        seq.push(Gate::new(GateKind::GlobalPhase, vec![]));
    }
    Ok(seq)
}

/// Rotation cascade loading the linear coefficients onto `anc` (LSB first):
/// seed `|2^{m-1}>`, one RY layer per angle, then a shift down by the padding.
pub fn linprep_gates(cascade: &RotationCascade, anc: &[usize]) -> Vec<Gate> {
    let m = anc.len();
    let mut seq = vec![Gate::x(anc[m - 1])];
    for (layer, &theta) in cascade.angles.iter().enumerate() {
        let odd = cascade.layer_start(layer) % 2 == 1;
        if odd {
            seq.push(Gate::new(GateKind::Dec, anc.to_vec()));
        }
        seq.push(Gate::ry(-2.0 * theta, anc[0]));
        if odd {
            seq.push(Gate::new(GateKind::Inc, anc.to_vec()));
        }
    }
    for _ in 0..cascade.pad {
        seq.push(Gate::new(GateKind::Dec, anc.to_vec()));
    }
    seq
}

/// Lowers every gate of `c`, appending a clean `work` register when needed.
pub fn lower(c: &Circuit, cfg: &LoweringConfig) -> Result<Circuit> {
    c.validate()?;
    let need = c
        .gates
        .iter()
        .map(|g| workspace_need(g, cfg))
        .max()
        .unwrap_or(0);
    let base = c.layout.range(WORK).map_or(c.width(), |r| r.start);
    let layout = c.layout.with_workspace(need);
    let mut low = Lowerer {
        cfg: *cfg,
        width: layout.width(),
        out: Vec::new(),
        borrowed: Vec::new(),
    };
    for g in &c.gates {
        low.gate(g.clone(), base)?;
    }
    Ok(Circuit {
        layout,
        gates: low.out,
        borrowed: low.borrowed,
    })
}

fn single(width: usize, gate: Gate, cfg: &LoweringConfig) -> Result<Circuit> {
    let mut c = Circuit::new(RegisterLayout::flat(width));
    c.push(gate);
    lower(&c, cfg)
}

/// MCX with `k` controls (qubits `0..k`), target `k`, and room to borrow.
pub fn lower_mcx(k: usize, strategy: McxStrategy) -> Result<Circuit> {
    let spare = match strategy {
        McxStrategy::SingleBorrowed => 1,
        _ => k.saturating_sub(2),
    };
    let controls: Vec<usize> = (0..k).collect();
    let cfg = LoweringConfig {
        mcx: strategy,
        ..Default::default()
    };
    single(k + 1 + spare, Gate::mcx(&controls, k), &cfg)
}

/// `I - 2|0><0|` on `m` qubits.
pub fn lower_reflection(m: usize, style: ReflectionStyle) -> Result<Circuit> {
    let cfg = LoweringConfig {
        reflection: style,
        ..Default::default()
    };
    let spare = match style {
        ReflectionStyle::Kickback => m.saturating_sub(2),
        ReflectionStyle::InPlace => m.saturating_sub(3),
    };
    single(
        m + spare,
        Gate::new(GateKind::Reflect, (0..m).collect()),
        &cfg,
    )
}

/// `|a>|b> -> |a>|b + a>` with an `m`-qubit addend into an `n`-qubit target.
pub fn lower_add(n: usize, m: usize) -> Result<Circuit> {
    let g = Gate::new(GateKind::Add { addend: m }, (0..m + n).collect());
    single(m + n, g, &LoweringConfig::default())
}

pub fn lower_const_add(c: u64, n: usize) -> Result<Circuit> {
    single(
        n,
        Gate::new(GateKind::ConstAdd(c), (0..n).collect()),
        &LoweringConfig::default(),
    )
}

pub fn lower_shuffle(n: usize) -> Result<Circuit> {
    single(
        n,
        Gate::new(GateKind::Shuffle, (0..n).collect()),
        &LoweringConfig::default(),
    )
}

/// Increment on `m` qubits with `m` further qubits available to borrow.
pub fn lower_increment(m: usize) -> Result<Circuit> {
    single(
        2 * m,
        Gate::new(GateKind::Inc, (0..m).collect()),
        &LoweringConfig::default(),
    )
}
