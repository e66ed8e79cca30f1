//! Dense statevector simulation of macro and elementary circuits.

use num_complex::Complex64;

use crate::circuit::{controls_fire, gather, permute_basis, Circuit, Gate, GateKind};
use crate::error::{QwtError, Result};
use crate::matrix::{fmt_real, ComplexMatrix};

pub const MAX_UNITARY_QUBITS: usize = 12;
pub const DEGENERATE_PROBABILITY: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0..0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(QwtError::Dimension(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        Ok(Self {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `values` on the low qubits, every higher qubit in `|0>`.
    pub fn embed(values: &[Complex64], num_qubits: usize) -> Result<Self> {
        if values.len() > 1 << num_qubits || !values.len().is_power_of_two() {
            return Err(QwtError::Width(format!(
                "cannot embed {} amplitudes into {num_qubits} qubits",
                values.len()
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[..values.len()].copy_from_slice(values);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// The first `2^k` amplitudes (the low `k` qubits with the rest at zero).
    pub fn low_block(&self, k: usize) -> &[Complex64] {
        &self.amps[..1 << k]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability that every qubit in `qubits` reads 0.
    pub fn zero_probability(&self, qubits: &[usize]) -> f64 {
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// One `"re im"` pair per line.
    pub fn to_text(&self) -> String {
        self.amps
            .iter()
            .map(|a| format!("{} {}\n", fmt_real(a.re), fmt_real(a.im)))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut amps = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| QwtError::Parse(format!("line {}: bad number {s:?}", no + 1)))
            };
            match parts.as_slice() {
                [re] => amps.push(Complex64::new(parse(re)?, 0.0)),
                [re, im] => amps.push(Complex64::new(parse(re)?, parse(im)?)),
                _ => {
                    return Err(QwtError::Parse(format!(
                        "line {}: expected 're im'",
                        no + 1
                    )))
                }
            }
        }
        Self::from_amplitudes(amps)
    }

    fn apply_gate(&mut self, g: &Gate) {
        let cs = &g.controls;
        let t = &g.targets;
        let amps = &mut self.amps;
        let len = amps.len();
        if g.kind.is_permutation() {
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            for (i, &a) in amps.iter().enumerate() {
                let j = if controls_fire(cs, i) {
                    permute_basis(&g.kind, t, i)
                } else {
                    i
                };
                out[j] = a;
            }
            *amps = out;
            return;
        }
        match &g.kind {
            GateKind::H | GateKind::Ry(_) => {
                let (m00, m01, m10, m11) = match g.kind {
                    GateKind::H => {
                        let r = std::f64::consts::FRAC_1_SQRT_2;
                        (r, r, r, -r)
                    }
                    GateKind::Ry(a) => {
                        let (s, c) = (a / 2.0).sin_cos();
                        (c, -s, s, c)
                    }
                    _ => unreachable!(),
                };
                let bit = 1 << t[0];
                for i in 0..len {
                    if i & bit != 0 || !controls_fire(cs, i) {
                        continue;
                    }
                    let (x, y) = (amps[i], amps[i | bit]);
                    amps[i] = x * m00 + y * m01;
                    amps[i | bit] = x * m10 + y * m11;
                }
            }
            GateKind::Z => {
                let bit = 1 << t[0];
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & bit != 0 && controls_fire(cs, i) {
                        *a = -*a;
                    }
                }
            }
            GateKind::GlobalPhase => {
                for (i, a) in amps.iter_mut().enumerate() {
                    if controls_fire(cs, i) {
                        *a = -*a;
                    }
                }
            }
            GateKind::Reflect => {
                let mask = t.iter().fold(0usize, |m, &q| m | (1 << q));
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == 0 && controls_fire(cs, i) {
                        *a = -*a;
                    }
                }
            }
            GateKind::Ucry(angles) => {
                let (sel, tgt) = t.split_at(t.len() - 1);
                let bit = 1 << tgt[0];
                for i in 0..len {
                    if i & bit != 0 || !controls_fire(cs, i) {
                        continue;
                    }
                    let (s, c) = (angles[gather(i, sel) as usize] / 2.0).sin_cos();
                    let (x, y) = (amps[i], amps[i | bit]);
                    amps[i] = x * c - y * s;
                    amps[i | bit] = x * s + y * c;
                }
            }
            GateKind::Prep { amplitudes, .. } => {
                // Householder reflection I - 2uu^T/(u^T u), u = e_0 - v
                let norm = amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
                let mut u: Vec<f64> = amplitudes.iter().map(|x| -x / norm).collect();
                u[0] += 1.0;
                let uu: f64 = u.iter().map(|x| x * x).sum();
                if uu < 1e-30 {
                    return;
                }
                let mask = t.iter().fold(0usize, |m, &q| m | (1 << q));
                let offsets: Vec<usize> = (0..u.len())
                    .map(|l| crate::circuit::scatter(0, t, l as u64))
                    .collect();
                for base in 0..len {
                    if base & mask != 0 || !controls_fire(cs, base) {
                        continue;
                    }
                    let dot: Complex64 = offsets
                        .iter()
                        .zip(&u)
                        .map(|(&o, &ul)| amps[base | o] * ul)
                        .sum();
                    let k = dot * (2.0 / uu);
                    for (&o, &ul) in offsets.iter().zip(&u) {
                        amps[base | o] -= k * ul;
                    }
                }
            }
            _ => unreachable!("permutation gates handled above"),
        }
    }
}

/// Runs `c` on `s`.
pub fn apply(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    if c.width() != s.num_qubits {
        return Err(QwtError::Width(format!(
            "circuit has {} qubits, state has {}",
            c.width(),
            s.num_qubits
        )));
    }
    c.validate()?;
    let mut out = s.clone();
    for g in &c.gates {
        out.apply_gate(g);
    }
    Ok(out)
}

/// Conditions on `qubits` reading 0. Returns the probability and the renormalized state.
pub fn project_zero(s: &StateVector, qubits: &[usize]) -> Result<(f64, StateVector)> {
    if let Some(&q) = qubits.iter().find(|&&q| q >= s.num_qubits) {
        return Err(QwtError::IndexOutOfRange(format!(
            "qubit {q} in a {}-qubit state",
            s.num_qubits
        )));
    }
    let p = s.zero_probability(qubits);
    if p < DEGENERATE_PROBABILITY {
        return Err(QwtError::DegenerateProjection(p));
    }
    let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
    let scale = 1.0 / p.sqrt();
    let amps = s
        .amps
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if i & mask == 0 {
                a * scale
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok((
        p,
        StateVector {
            num_qubits: s.num_qubits,
            amps,
        },
    ))
}

/// `|<a|b>|`, clamped to `[0, 1]`.
pub fn fidelity_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    ip.norm().min(1.0)
}

/// Dense matrix of `c`, column `j` being `apply(c, e_j)`.
pub fn unitary_of(c: &Circuit) -> Result<ComplexMatrix> {
    let k = c.width();
    if k > MAX_UNITARY_QUBITS {
        return Err(QwtError::Width(format!(
            "unitary extraction is capped at {MAX_UNITARY_QUBITS} qubits, circuit has {k}"
        )));
    }
    let cols = (0..1usize << k)
        .map(|j| apply(c, &StateVector::basis(k, j)).map(StateVector::into_amplitudes))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexMatrix::from_columns(&cols))
}
