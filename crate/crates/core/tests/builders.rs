mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use common::*;
use num_complex::Complex64;
use qwt_core::builders::*;
use qwt_core::filters::{builtin_filter, one_norm};
use qwt_core::reference::{build_kernel, lcu_term, multilevel_matrix, packet_matrix};
use qwt_core::simulator::{apply, project_zero, unitary_of, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn single(name: &str, n: usize, style: PrepStyle) -> QwtPlan {
    plan(&builtin_filter(name).unwrap(), n, 1, Variant::Single, style).unwrap()
}

#[test]
fn plan_examples() {
    let p = single("haar", 3, PrepStyle::Sqrt);
    assert!((p.alpha - PI / 4.0).abs() < 1e-12);
    assert_eq!(p.t, 1);
    assert!((p.theta - PI / 4.0).abs() < 1e-12);
    let p = single("db2", 4, PrepStyle::Sqrt);
    assert!((p.sin_alpha() - 0.5977).abs() < 1e-3);
    assert_eq!(p.t, 1);
    let p = single("db2", 4, PrepStyle::Linear);
    assert_eq!(p.t, 1);
    assert!(p.theta.abs() < 1e-7);
    for name in ["haar", "db2", "db3", "db4", "db6", "db8", "db10"] {
        let p = single(name, 6, PrepStyle::Sqrt);
        let s = p.sin_alpha();
        let want = if s > (PI / 6.0).sin() {
            1
        } else if s > (PI / 10.0).sin() {
            2
        } else {
            3
        };
        assert_eq!(p.t, want, "{name}");
        assert!((p.diluted_amplitude() - (PI / (2.0 * (2 * p.t + 1) as f64)).sin()).abs() < 1e-12);
    }
    let f = builtin_filter("db2").unwrap();
    assert!(plan(&f, 2, 2, Variant::Multilevel, PrepStyle::Sqrt).is_err());
    assert!(plan(&f, 3, 2, Variant::Single, PrepStyle::Sqrt).is_err());
}

#[test]
fn select_examples() {
    let f = builtin_filter("haar").unwrap();
    let c = build_select(&f, 3).unwrap();
    // par at bit 4, anc at bit 3
    let out = apply(&c, &StateVector::basis(5, 5 | (1 << 3))).unwrap();
    assert_eq!(out, StateVector::basis(5, 2 | (1 << 3)));
    let out = apply(&c, &StateVector::basis(5, 5)).unwrap();
    assert!((out.amplitudes()[6] + Complex64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn select_blocks_match_lcu_terms() {
    for name in ["haar", "db2"] {
        let f = builtin_filter(name).unwrap();
        for n in 3..=5 {
            let c = build_select(&f, n).unwrap();
            let m = f.index_qubits();
            let u = unitary_of(&c).unwrap();
            for l in 0..1usize << m {
                let ul = lcu_term(l, n).unwrap();
                for j in 0..1usize << n {
                    for i in 0..1usize << (n + m + 1) {
                        let want = if i >> n == l {
                            ul.get(i & ((1 << n) - 1), j)
                        } else {
                            0.0
                        };
                        let got = u.get(i, j | (l << n));
                        assert!(
                            (got - Complex64::new(want, 0.0)).norm() < 1e-12,
                            "{name} n={n} l={l} j={j}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn linprep_amplitudes() {
    for name in ["haar", "db2", "db3", "db5"] {
        let f = builtin_filter(name).unwrap();
        let c = build_linprep(&f).unwrap();
        let out = apply(&c, &StateVector::zero(c.width())).unwrap();
        for (l, a) in out.amplitudes().iter().enumerate() {
            let want = if l < f.order() { f.h(l) } else { 0.0 };
            assert!(
                (a - Complex64::new(want, 0.0)).norm() < 1e-10,
                "{name} l={l}"
            );
        }
    }
}

#[test]
fn prep_and_unprep_states() {
    let f = builtin_filter("haar").unwrap();
    let out = apply(&build_prep(&f).unwrap(), &StateVector::zero(1)).unwrap();
    assert!((out.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((out.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    let f = builtin_filter("db2").unwrap();
    let u = build_unprep(&f).unwrap();
    let inv = qwt_core::circuit::inverse(&u);
    let out = apply(&inv, &StateVector::zero(2)).unwrap();
    let h = one_norm(&f);
    for l in 0..4 {
        let want = f.h(l).signum() * (f.h(l).abs() / h).sqrt();
        assert!((out.amplitudes()[l].re - want).abs() < 1e-14);
    }
    assert!(out.amplitudes()[3].re < 0.0);
}

#[test]
fn pqwt_projection_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, n, style, want) in [
        ("haar", 3, PrepStyle::Sqrt, FRAC_1_SQRT_2),
        (
            "db2",
            4,
            PrepStyle::Sqrt,
            1.0 / one_norm(&builtin_filter("db2").unwrap()),
        ),
        ("db2", 4, PrepStyle::Linear, 0.5),
    ] {
        let p = single(name, n, style);
        let c = build_pqwt(&p).unwrap();
        let w = build_kernel(&p.filter, n).unwrap();
        for _ in 0..10 {
            let psi = random_state(&mut rng, n);
            let (prob, out) = run(&c, &psi);
            assert!((prob.sqrt() - want).abs() < 1e-12, "{name} {style:?}");
            let sys = system_state(&out, n);
            assert!(max_diff(&sys, &real_apply(&w, &psi)) < 1e-12);
        }
    }
}

#[test]
fn single_qwt_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, n, style) in [
        ("haar", 3, PrepStyle::Sqrt),
        ("db2", 4, PrepStyle::Sqrt),
        ("db2", 4, PrepStyle::Linear),
        ("db3", 4, PrepStyle::Sqrt),
        ("db3", 4, PrepStyle::Linear),
    ] {
        let p = single(name, n, style);
        let c = build_single_qwt(&p).unwrap();
        let w = build_kernel(&p.filter, n).unwrap();
        for _ in 0..10 {
            let psi = random_state(&mut rng, n);
            let (prob, out) = run(&c, &psi);
            assert!(prob > 1.0 - 1e-10, "{name} {style:?} p={prob}");
            assert!(infidelity(&system_state(&out, n), &real_apply(&w, &psi)) < 1e-10);
        }
    }
}

#[test]
fn haar_n2_on_e0() {
    let p = single("haar", 2, PrepStyle::Sqrt);
    let c = build_single_qwt(&p).unwrap();
    let (_, out) = run(&c, &StateVector::basis(2, 0).into_amplitudes());
    let sys = system_state(&out, 2);
    let r = FRAC_1_SQRT_2;
    let want = [r, 0.0, r, 0.0].map(|x| Complex64::new(x, 0.0));
    assert!(infidelity(&sys, &want) < 1e-12);
}

#[test]
fn controlled_single_qwt() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = single("haar", 3, PrepStyle::Sqrt);
    let c = build_controlled_single_qwt(&p).unwrap();
    let w = build_kernel(&p.filter, 3).unwrap();
    let aux = 3;
    for _ in 0..5 {
        let psi = random_state(&mut rng, 3);
        // control |0>: identity on everything
        let s = StateVector::embed(&psi, c.width()).unwrap();
        let out = apply(&c, &s).unwrap();
        assert!(max_diff(out.amplitudes(), s.amplitudes()) < 1e-12);
        // control in superposition
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << c.width()];
        let wpsi = real_apply(&w, &psi);
        let mut want = amps.clone();
        for j in 0..8 {
            amps[j] = psi[j] * FRAC_1_SQRT_2;
            amps[j | 1 << aux] = psi[j] * FRAC_1_SQRT_2;
            want[j] = psi[j] * FRAC_1_SQRT_2;
            want[j | 1 << aux] = wpsi[j] * FRAC_1_SQRT_2;
        }
        let out = apply(&c, &StateVector::from_amplitudes(amps).unwrap()).unwrap();
        assert!(max_diff(out.amplitudes(), &want) < 1e-10);
    }
}

#[test]
fn multilevel_examples() {
    let f = builtin_filter("haar").unwrap();
    let p = plan(&f, 3, 3, Variant::Multilevel, PrepStyle::Sqrt).unwrap();
    let c = build_multilevel_qwt(&p).unwrap();
    let psi = vec![Complex64::new(8f64.sqrt().recip(), 0.0); 8];
    let (prob, out) = run(&c, &psi);
    assert!(prob > 1.0 - 1e-10);
    let e0 = StateVector::basis(3, 0).into_amplitudes();
    assert!(infidelity(&system_state(&out, 3), &e0) < 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = builtin_filter("db2").unwrap();
    let p = plan(&f, 5, 2, Variant::Multilevel, PrepStyle::Sqrt).unwrap();
    let c = build_multilevel_qwt(&p).unwrap();
    let w = multilevel_matrix(&f, 5, 2).unwrap();
    for _ in 0..5 {
        let psi = random_state(&mut rng, 5);
        let (prob, out) = run(&c, &psi);
        assert!(prob > 1.0 - 1e-10);
        assert!(
            max_diff(&system_state(&out, 5), &real_apply(&w, &psi)) < 1e-9
                || infidelity(&system_state(&out, 5), &real_apply(&w, &psi)) < 1e-10
        );
    }
}

#[test]
fn packet_examples() {
    let f = builtin_filter("haar").unwrap();
    let p = plan(&f, 2, 2, Variant::Packet, PrepStyle::Sqrt).unwrap();
    let c = build_packet_qwt(&p).unwrap();
    let (_, out) = run(&c, &StateVector::basis(2, 0).into_amplitudes());
    let want = vec![Complex64::new(0.5, 0.0); 4];
    assert!(infidelity(&system_state(&out, 2), &want) < 1e-10);

    let p = plan(&f, 3, 3, Variant::Packet, PrepStyle::Sqrt).unwrap();
    let c = build_packet_qwt(&p).unwrap();
    let pm = packet_matrix(&f, 3, 3).unwrap();
    for j in 0..8 {
        let psi = StateVector::basis(3, j).into_amplitudes();
        let (prob, out) = run(&c, &psi);
        assert!(prob > 1.0 - 1e-10);
        assert!(infidelity(&system_state(&out, 3), &real_apply(&pm, &psi)) < 1e-10);
    }
}

#[test]
fn projection_of_pqwt_output() {
    let p = single("haar", 3, PrepStyle::Sqrt);
    let c = build_pqwt(&p).unwrap();
    let s = StateVector::embed(&StateVector::basis(3, 1).into_amplitudes(), c.width()).unwrap();
    let out = apply(&c, &s).unwrap();
    let (prob, _) = project_zero(&out, &p.ancilla_qubits()).unwrap();
    assert!((prob - 0.5).abs() < 1e-12);
}
