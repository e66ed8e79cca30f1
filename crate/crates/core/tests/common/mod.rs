#![allow(dead_code)]

use num_complex::Complex64;
use qwt_core::circuit::Circuit;
use qwt_core::matrix::RealMatrix;
use qwt_core::simulator::{apply, fidelity_up_to_phase, project_zero, StateVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

pub fn real_apply(m: &RealMatrix, psi: &[Complex64]) -> Vec<Complex64> {
    (0..m.dim())
        .map(|i| m.row(i).iter().zip(psi).map(|(&a, b)| b * a).sum())
        .collect()
}

/// Runs `c` on `|0..0>|psi>` (psi on the low `n` qubits). Returns the
/// probability that every other qubit reads 0 and the full output state.
pub fn run(c: &Circuit, psi: &[Complex64]) -> (f64, StateVector) {
    let s = StateVector::embed(psi, c.width()).unwrap();
    let out = apply(c, &s).unwrap();
    let n = psi.len().trailing_zeros() as usize;
    let others: Vec<usize> = (n..c.width()).collect();
    (out.zero_probability(&others), out)
}

/// Renormalized system state after projecting every non-system qubit on 0.
pub fn system_state(out: &StateVector, n: usize) -> Vec<Complex64> {
    let others: Vec<usize> = (n..out.num_qubits()).collect();
    let (_, s) = project_zero(out, &others).unwrap();
    s.low_block(n).to_vec()
}

pub fn infidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    1.0 - fidelity_up_to_phase(a, b)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
