//! Exact classical matrices for the wavelet kernels, their LCU decomposition and
//! the multi-level / packet recursions. Everything here is dense and serves as the
//! oracle for circuit verification.

use crate::error::{QwtError, Result};
use crate::filters::WaveletFilter;
use crate::matrix::{RealMatrix, Scalar};

/// Largest qubit count the dense reference path will materialize.
pub const MAX_REFERENCE_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `|j> -> |j+1 mod 2^n>`
    Down,
    /// `|j> -> |j-1 mod 2^n>`
    Up,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_REFERENCE_QUBITS {
        return Err(QwtError::Dimension(format!(
            "reference matrices support 1..={MAX_REFERENCE_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

/// Circular shift `(S_down)^power` or `(S_up)^power` on `n` qubits.
pub fn shift_matrix(n: usize, direction: ShiftDirection, power: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let mut m = RealMatrix::zeros(dim);
    let p = power % dim;
    for j in 0..dim {
        let row = match direction {
            ShiftDirection::Down => (j + p) % dim,
            ShiftDirection::Up => (j + dim - p) % dim,
        };
        m.set(row, j, 1.0);
    }
    Ok(m)
}

fn check_kernel(f: &WaveletFilter, n: usize) -> Result<()> {
    check_qubits(n)?;
    if (1usize << n) < f.order() {
        return Err(QwtError::Dimension(format!(
            "2^{n} = {} is smaller than the filter order {}",
            1usize << n,
            f.order()
        )));
    }
    Ok(())
}

/// Kernel `W = [H; G]` with `H_ij = h_{(j-2i) mod 2^n}` and `G_ij = g_{(j-2i) mod 2^n}`.
pub fn build_kernel(f: &WaveletFilter, n: usize) -> Result<RealMatrix> {
    check_kernel(f, n)?;
    let dim = 1usize << n;
    let half = dim / 2;
    Ok(RealMatrix::from_fn(dim, |i, j| {
        let (r, high) = if i < half {
            (i, false)
        } else {
            (i - half, true)
        };
        let k = (j + dim - (2 * r) % dim) % dim;
        if high {
            f.g(k)
        } else {
            f.h(k)
        }
    }))
}

/// Modified kernel `U = [H; G']` where `G' = (S_down)^{K-1} G` on the lower half.
pub fn build_modified_kernel(f: &WaveletFilter, n: usize) -> Result<RealMatrix> {
    let w = build_kernel(f, n)?;
    let dim = w.dim();
    let half = dim / 2;
    let shift = (f.index() - 1) % half.max(1);
    Ok(RealMatrix::from_fn(dim, |i, j| {
        if i < half {
            w.get(i, j)
        } else {
            let src = (i - half + half - shift) % half;
            w.get(half + src, j)
        }
    }))
}

/// `Lambda_1(USHIFT_{n-1})`: on the lower half, `|j> -> |j - (K-1) mod 2^{n-1}>`.
pub fn controlled_ushift(f: &WaveletFilter, n: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    let dim = 1usize << n;
    let half = dim / 2;
    let shift = (f.index() - 1) % half.max(1);
    let mut m = RealMatrix::zeros(dim);
    for j in 0..dim {
        let row = if j < half {
            j
        } else {
            half + (j - half + half - shift) % half
        };
        m.set(row, j, 1.0);
    }
    Ok(m)
}

/// Basis-state action of the LCU permutation `P_l` on `n` qubits.
pub fn p_action(ell: usize, n: usize, j: usize) -> usize {
    let dim = 1usize << n;
    let half = dim / 2;
    if (j ^ ell) & 1 == 0 {
        ((j + dim - ell % dim) % dim) / 2
    } else {
        half + ((j + ell + dim - 1) % dim) / 2
    }
}

/// Permutation matrix `P_l`: rows `j` take column `2j+l`, rows `N/2+j` take `2j+1-l`.
pub fn build_p(ell: usize, n: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    let dim = 1usize << n;
    if ell >= dim {
        return Err(QwtError::IndexOutOfRange(format!(
            "coefficient index {ell} does not fit {n} qubits"
        )));
    }
    let mut m = RealMatrix::zeros(dim);
    for j in 0..dim {
        m.set(p_action(ell, n, j), j, 1.0);
    }
    Ok(m)
}

/// LCU term `U_l`: `P_l` for odd `l`, `(Z (x) I) P_l` for even `l`.
pub fn lcu_term(ell: usize, n: usize) -> Result<RealMatrix> {
    let p = build_p(ell, n)?;
    if ell % 2 == 1 {
        return Ok(p);
    }
    let half = p.dim() / 2;
    Ok(RealMatrix::from_fn(p.dim(), |i, j| {
        if i >= half {
            -p.get(i, j)
        } else {
            p.get(i, j)
        }
    }))
}

/// `sum_l c_l U_l` for an arbitrary coefficient list.
pub fn lcu_reconstruct_coeffs(coeffs: &[f64], n: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    let mut acc = RealMatrix::zeros(1 << n);
    for (ell, &c) in coeffs.iter().enumerate() {
        acc = acc.add(&lcu_term(ell, n)?.scale(c));
    }
    Ok(acc)
}

/// `sum_l h_l U_l`, which equals the modified kernel.
pub fn lcu_reconstruct(f: &WaveletFilter, n: usize) -> Result<RealMatrix> {
    check_kernel(f, n)?;
    lcu_reconstruct_coeffs(f.coeffs(), n)
}

/// Checks that every level `s < d` satisfies `2^{n-s} >= M`.
pub fn check_depth(f: &WaveletFilter, n: usize, d: usize) -> Result<()> {
    if d == 0 || d > n {
        return Err(QwtError::Depth(format!("level {d} must lie in 1..={n}")));
    }
    let smallest = n + 1 - d;
    if (1usize << smallest) < f.order() {
        return Err(QwtError::Depth(format!(
            "level {d} on {n} qubits leaves a {smallest}-qubit block, too small for order {}",
            f.order()
        )));
    }
    Ok(())
}

/// `|0^s>`-controlled `w` on the top `s` qubits: `w (+) I`.
pub fn zero_controlled(w: &RealMatrix, n: usize) -> RealMatrix {
    w.pad_identity(1 << n)
}

/// `W^(d)_n` as the product of zero-controlled kernels on shrinking blocks.
pub fn multilevel_matrix(f: &WaveletFilter, n: usize, d: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    check_depth(f, n, d)?;
    let mut acc = build_kernel(f, n)?;
    for s in 1..d {
        let level = zero_controlled(&build_kernel(f, n - s)?, n);
        acc = level.matmul(&acc);
    }
    Ok(acc)
}

/// `P^(d)_n` as the product of `I_s (x) W_{n-s}` stages.
pub fn packet_matrix(f: &WaveletFilter, n: usize, d: usize) -> Result<RealMatrix> {
    check_qubits(n)?;
    check_depth(f, n, d)?;
    let mut acc = build_kernel(f, n)?;
    for s in 1..d {
        let level = build_kernel(f, n - s)?.repeat_diagonal(1 << s);
        acc = level.matmul(&acc);
    }
    Ok(acc)
}

/// One analysis step on a length-`2^k` block: periodic convolution with `h` and `g`
/// followed by downsampling. Returns `(averages, details)`.
fn analysis_step<T: Scalar>(f: &WaveletFilter, x: &[T]) -> (Vec<T>, Vec<T>) {
    let len = x.len();
    let half = len / 2;
    let mut a = vec![T::zero(); half];
    let mut d = vec![T::zero(); half];
    for i in 0..half {
        for k in 0..f.order() {
            let v = x[(2 * i + k) % len];
            a[i] = a[i] + T::from_real(f.h(k)) * v;
            d[i] = d[i] + T::from_real(f.g(k)) * v;
        }
    }
    (a, d)
}

/// Pyramid algorithm: `d` levels applied to the running average block. The output
/// layout is `(a_d, d_d, d_{d-1}, ..., d_1)`.
pub fn classical_dwt<T: Scalar>(f: &WaveletFilter, signal: &[T], d: usize) -> Result<Vec<T>> {
    let len = signal.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(QwtError::Dimension(format!(
            "signal length {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_depth(f, n, d)?;
    let mut out = signal.to_vec();
    let mut block = len;
    for _ in 0..d {
        let (a, det) = analysis_step(f, &out[..block]);
        let half = block / 2;
        out[..half].copy_from_slice(&a);
        out[half..block].copy_from_slice(&det);
        block = half;
    }
    Ok(out)
}

/// Packet counterpart of [`classical_dwt`]: every block is split at every level.
pub fn classical_packet<T: Scalar>(f: &WaveletFilter, signal: &[T], d: usize) -> Result<Vec<T>> {
    let len = signal.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(QwtError::Dimension(format!(
            "signal length {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_depth(f, n, d)?;
    let mut out = signal.to_vec();
    let mut block = len;
    for _ in 0..d {
        for chunk in out.chunks_mut(block) {
            let (a, det) = analysis_step(f, chunk);
            let half = block / 2;
            chunk[..half].copy_from_slice(&a);
            chunk[half..].copy_from_slice(&det);
        }
        block /= 2;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{builtin_filter, registry_filters};
    use std::f64::consts::SQRT_2;

    fn haar() -> WaveletFilter {
        builtin_filter("haar").unwrap()
    }
    fn db2() -> WaveletFilter {
        builtin_filter("db2").unwrap()
    }

    #[test]
    fn shift_examples() {
        let s = shift_matrix(1, ShiftDirection::Down, 1).unwrap();
        assert_eq!(s, RealMatrix::from_fn(2, |i, j| (i != j) as u8 as f64));
        let s = shift_matrix(2, ShiftDirection::Down, 1).unwrap();
        assert_eq!(s.apply(&[0.0, 0.0, 0.0, 1.0]), vec![1.0, 0.0, 0.0, 0.0]);
        let up = shift_matrix(3, ShiftDirection::Up, 2).unwrap();
        let down = shift_matrix(3, ShiftDirection::Down, 2).unwrap();
        assert_eq!(up.matmul(&down), RealMatrix::identity(8));
    }

    #[test]
    fn haar_kernel_on_two_qubits() {
        let r = 1.0 / SQRT_2;
        let expect = [
            [r, r, 0.0, 0.0],
            [0.0, 0.0, r, r],
            [r, -r, 0.0, 0.0],
            [0.0, 0.0, r, -r],
        ];
        let w = build_kernel(&haar(), 2).unwrap();
        assert!(w.max_abs_diff(&RealMatrix::from_fn(4, |i, j| expect[i][j])) < 1e-15);
        assert_eq!(build_modified_kernel(&haar(), 2).unwrap(), w);
    }

    #[test]
    fn db2_kernel_wraparound_rows() {
        let f = db2();
        let w = build_kernel(&f, 3).unwrap();
        let h = |k| f.h(k);
        // last H row: h2 h3 0 0 0 0 h0 h1
        assert_eq!(w.row(3), &[h(2), h(3), 0.0, 0.0, 0.0, 0.0, h(0), h(1)]);
        // first G row: h3 -h2 h1 -h0 0 0 0 0
        assert_eq!(w.row(4), &[h(3), -h(2), h(1), -h(0), 0.0, 0.0, 0.0, 0.0]);
        // last G row wraps: h1 -h0 0 0 0 0 h3 -h2
        assert_eq!(w.row(7), &[h(1), -h(0), 0.0, 0.0, 0.0, 0.0, h(3), -h(2)]);
        assert!(matches!(build_kernel(&f, 1), Err(QwtError::Dimension(_))));
    }

    #[test]
    fn db2_modified_kernel_first_shifted_row() {
        let f = db2();
        let u = build_modified_kernel(&f, 3).unwrap();
        let h = |k| f.h(k);
        assert_eq!(u.row(4), &[h(1), -h(0), 0.0, 0.0, 0.0, 0.0, h(3), -h(2)]);
        assert_eq!(u.row(5), &[h(3), -h(2), h(1), -h(0), 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn modified_kernel_closed_form() {
        // The printed closed form G'_{i,j} = (-1)^{2i+2-j} h_{2i+2-j} is off by one in
        // the subscript; the shifted-row definition gives (-1)^j h_{(2i+1-j) mod 2^n}.
        for f in registry_filters().into_iter().take(5) {
            for n in f.index_qubits().max(1)..=6 {
                if (1 << n) < f.order() {
                    continue;
                }
                let u = build_modified_kernel(&f, n).unwrap();
                let dim = 1usize << n;
                for i in 0..dim / 2 {
                    for j in 0..dim {
                        let k = (2 * i + 1 + dim - j) % dim;
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        assert_eq!(u.get(dim / 2 + i, j), sign * f.h(k));
                    }
                }
            }
        }
    }

    #[test]
    fn p_examples() {
        let p = build_p(0, 3).unwrap();
        assert_eq!(p.get(2, 4), 1.0);
        assert_eq!(p.get(6, 5), 1.0);
        let p = build_p(1, 2).unwrap();
        assert_eq!(p.apply(&[0.0, 1.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(build_p(8, 3).is_err());
        for ell in 0..8 {
            assert!(build_p(ell, 3).unwrap().is_permutation());
        }
    }

    #[test]
    fn lcu_and_kernel_equivalence_hold_exactly() {
        for f in registry_filters().into_iter().take(5) {
            for n in f.index_qubits().max(2)..=7 {
                let w = build_kernel(&f, n).unwrap();
                let u = build_modified_kernel(&f, n).unwrap();
                assert!(w.unitarity_residual() <= 1e-12);
                assert!(u.unitarity_residual() <= 1e-12);
                assert!(lcu_reconstruct(&f, n).unwrap().max_abs_diff(&u) <= 1e-12);
                let back = controlled_ushift(&f, n).unwrap().matmul(&u);
                assert_eq!(back.max_abs_diff(&w), 0.0, "{} n={n}", f.name());
            }
        }
    }

    #[test]
    fn invalid_coefficients_break_unitarity() {
        let m = lcu_reconstruct_coeffs(&[1.0, 0.0, 0.0, 0.0], 3).unwrap();
        // U_0 alone is a signed permutation; the control is that it is not the db2 U.
        assert!(m.max_abs_diff(&build_modified_kernel(&db2(), 3).unwrap()) > 0.1);
        let m = lcu_reconstruct_coeffs(&[0.5, 0.5, 0.5, 0.5], 3).unwrap();
        assert!(m.unitarity_residual() > 0.1);
    }

    #[test]
    fn multilevel_examples() {
        assert_eq!(
            multilevel_matrix(&haar(), 2, 1).unwrap(),
            build_kernel(&haar(), 2).unwrap()
        );
        let w = multilevel_matrix(&haar(), 3, 3).unwrap();
        let c = vec![1.0 / 8f64.sqrt(); 8];
        let out = w.apply(&c);
        assert!((out[0] - 1.0).abs() < 1e-15);
        assert!(out[1..].iter().all(|x| x.abs() < 1e-15));
        // recursion (W^(1)_3 (+) I_3) W_4
        let f = db2();
        let rec = build_kernel(&f, 3)
            .unwrap()
            .pad_identity(16)
            .matmul(&build_kernel(&f, 4).unwrap());
        assert!(multilevel_matrix(&f, 4, 2).unwrap().max_abs_diff(&rec) <= 1e-15);
        assert!(matches!(
            multilevel_matrix(&f, 4, 4),
            Err(QwtError::Depth(_))
        ));
    }

    #[test]
    fn mallat_consistency() {
        for f in [haar(), db2()] {
            for n in 3..=6 {
                for d in 2..=n {
                    if check_depth(&f, n, d).is_err() {
                        continue;
                    }
                    let lhs = multilevel_matrix(&f, n, d).unwrap();
                    let rhs = multilevel_matrix(&f, n - 1, d - 1)
                        .unwrap()
                        .pad_identity(1 << n)
                        .matmul(&build_kernel(&f, n).unwrap());
                    assert!(lhs.max_abs_diff(&rhs) <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn packet_examples() {
        let p = packet_matrix(&haar(), 2, 2).unwrap();
        assert!(p.column(0).iter().all(|x| (x - 0.5).abs() < 1e-15));
        let p3 = packet_matrix(&haar(), 3, 3).unwrap();
        assert!(p3.unitarity_residual() < 1e-15);
        // every entry of the full Haar packet matrix is +-1/sqrt 8
        assert!((0..8)
            .all(|i| (0..8).all(|j| (p3.get(i, j).abs() - 8f64.sqrt().recip()).abs() < 1e-15)));
        assert_eq!(
            packet_matrix(&db2(), 4, 1).unwrap(),
            build_kernel(&db2(), 4).unwrap()
        );
    }

    #[test]
    fn pyramid_examples() {
        let out = classical_dwt(&haar(), &[0.5; 4], 1).unwrap();
        let r = 1.0 / SQRT_2;
        for (a, b) in out.iter().zip([r, r, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let out = classical_dwt(&haar(), &[1.0 / 8f64.sqrt(); 8], 3).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pyramid_agrees_with_matrices() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for f in registry_filters().into_iter().take(3) {
            for n in f.index_qubits().max(1)..=6 {
                for d in 1..=n {
                    if check_depth(&f, n, d).is_err() {
                        continue;
                    }
                    let x: Vec<f64> = (0..1 << n).map(|_| next()).collect();
                    let norm = x.iter().map(|v| v * v).sum::<f64>();
                    let a = classical_dwt(&f, &x, d).unwrap();
                    let b = multilevel_matrix(&f, n, d).unwrap().apply(&x);
                    assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-10));
                    assert!((a.iter().map(|v| v * v).sum::<f64>() - norm).abs() < 1e-12);
                    let a = classical_packet(&f, &x, d).unwrap();
                    let b = packet_matrix(&f, n, d).unwrap().apply(&x);
                    assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-10));
                }
            }
        }
    }
}
