use std::fmt::Write as _;

use num_complex::Complex64;
use qwt_core::builders::{build_qwt, build_select, plan, PrepStyle, QwtPlan, Variant};
use qwt_core::filters::{parse_real_lines, validate_filter, WaveletFilter};
use qwt_core::reference::{
    build_kernel, build_modified_kernel, check_depth, lcu_reconstruct, lcu_term, multilevel_matrix,
    packet_matrix, MAX_REFERENCE_QUBITS,
};
use qwt_core::simulator::{apply, fidelity_up_to_phase, project_zero, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::options::{StyleArg, Suite, VerifyArgs};
use crate::Failure;

const MATRIX_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;

struct Check {
    name: String,
    metric: &'static str,
    value: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

fn select_error(f: &WaveletFilter, n: usize) -> anyhow::Result<f64> {
    let m = f.index_qubits();
    if n + m + 1 > MAX_REFERENCE_QUBITS {
        anyhow::bail!("select suite supports n + m + 1 <= {MAX_REFERENCE_QUBITS}");
    }
    let c = build_select(f, n)?;
    let mut worst: f64 = 0.0;
    for l in 0..1usize << m {
        let ul = lcu_term(l, n)?;
        for j in 0..1usize << n {
            let out = apply(&c, &StateVector::basis(c.width(), j | (l << n)))?;
            for (i, a) in out.amplitudes().iter().enumerate() {
                // anything with par = 1 is a parity leak
                let want = if i >> n == l {
                    ul.get(i & ((1 << n) - 1), j)
                } else {
                    0.0
                };
                worst = worst.max((a - Complex64::new(want, 0.0)).norm());
            }
        }
    }
    Ok(worst)
}

/// Worst of `1 - fidelity` and `1 - success probability` over random inputs.
fn transform_error(p: &QwtPlan, samples: usize, seed: u64) -> anyhow::Result<f64> {
    let n = p.n;
    let reference = match p.variant {
        Variant::Single => build_kernel(&p.filter, n)?,
        Variant::Multilevel => multilevel_matrix(&p.filter, n, p.d)?,
        Variant::Packet => packet_matrix(&p.filter, n, p.d)?,
    };
    let c = build_qwt(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others: Vec<usize> = (n..c.width()).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let psi = random_state(&mut rng, n);
        let out = apply(&c, &StateVector::embed(&psi, c.width())?)?;
        let (prob, projected) = project_zero(&out, &others)?;
        let want: Vec<Complex64> = (0..1usize << n)
            .map(|i| reference.row(i).iter().zip(&psi).map(|(&a, b)| b * a).sum())
            .collect();
        let fid = fidelity_up_to_phase(projected.low_block(n), &want);
        worst = worst.max(1.0 - fid).max(1.0 - prob);
    }
    Ok(worst)
}

fn largest_depth(f: &WaveletFilter, n: usize, d: usize) -> Option<usize> {
    (1..=d).rev().find(|&k| check_depth(f, n, k).is_ok())
}

pub fn run(a: &VerifyArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let f = match &a.filter.filter_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
            let coeffs = parse_real_lines(&text)?;
            let report = validate_filter(&coeffs);
            let tag = if report.passed() { "PASS" } else { "FAIL" };
            writeln!(out, "check filter-validity {tag} {report}").unwrap();
            if !report.passed() {
                writeln!(out, "first failing check: filter-validity").unwrap();
                return Err(Failure::Verification(out));
            }
            WaveletFilter::from_file(path)?
        }
        None => crate::options::resolve_filter(&a.filter.filter)?,
    };
    check_depth(&f, a.n, 1)?;
    if a.n > MAX_REFERENCE_QUBITS {
        return Err(anyhow::anyhow!("verification supports n <= {MAX_REFERENCE_QUBITS}").into());
    }
    let mtol = a.matrix_tol.unwrap_or(MATRIX_TOL);
    let stol = a.state_tol.unwrap_or(STATE_TOL);
    let style = match a.prep_style {
        StyleArg::Sqrt => PrepStyle::Sqrt,
        StyleArg::Linear => PrepStyle::Linear,
    };
    let wants = |s: Suite| a.suite == s || a.suite == Suite::All;
    let mut checks = Vec::new();
    if wants(Suite::Unitarity) {
        checks.push(Check {
            name: "unitarity".into(),
            metric: "max|W^T W - I|",
            value: build_kernel(&f, a.n)?.unitarity_residual(),
            tol: mtol,
        });
    }
    if wants(Suite::Lcu) {
        let u = build_modified_kernel(&f, a.n)?;
        checks.push(Check {
            name: "lcu".into(),
            metric: "max|U - sum h_l U_l|",
            value: u.max_abs_diff(&lcu_reconstruct(&f, a.n)?),
            tol: mtol,
        });
    }
    if wants(Suite::Select) {
        checks.push(Check {
            name: "select".into(),
            metric: "max block error",
            value: select_error(&f, a.n)?,
            tol: mtol,
        });
    }
    if wants(Suite::Single) {
        let p = plan(&f, a.n, 1, Variant::Single, style)?;
        checks.push(Check {
            name: format!("single(t={})", p.t),
            metric: "max infidelity",
            value: transform_error(&p, a.samples, a.seed)?,
            tol: stol,
        });
    }
    for (suite, variant, label) in [
        (Suite::Multilevel, Variant::Multilevel, "multilevel"),
        (Suite::Packet, Variant::Packet, "packet"),
    ] {
        if !wants(suite) {
            continue;
        }
        let d = if a.suite == Suite::All {
            match largest_depth(&f, a.n, a.d) {
                Some(d) => d,
                None => continue,
            }
        } else {
            a.d
        };
        let p = plan(&f, a.n, d, variant, style)?;
        checks.push(Check {
            name: format!("{label}(d={d})"),
            metric: "max infidelity",
            value: transform_error(&p, a.samples, a.seed)?,
            tol: stol,
        });
    }
    for c in &checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "check {:<16} {tag} {}={:.3e} tol={:.1e}",
            c.name, c.metric, c.value, c.tol
        )
        .unwrap();
    }
    match checks.iter().find(|c| !c.passed()) {
        Some(c) => {
            writeln!(out, "first failing check: {}", c.name).unwrap();
            Err(Failure::Verification(out))
        }
        None => {
            writeln!(
                out,
                "all {} checks passed for {} n={}",
                checks.len(),
                f.name(),
                a.n
            )
            .unwrap();
            Ok(out)
        }
    }
}
