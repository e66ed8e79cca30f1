use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use num_complex::Complex64;
use qwt_core::builders::{build_qwt, QwtPlan, Variant};
use qwt_core::circuit::{
    count_gates, from_json, from_qasm, lower, to_json, to_qasm, GateCostReport,
};
use qwt_core::filters::{one_norm, parse_real_lines};
use qwt_core::matrix::fmt_real;
use qwt_core::reference::{classical_dwt, classical_packet};
use qwt_core::simulator::{apply, fidelity_up_to_phase, project_zero, StateVector};

use crate::options::{
    all_filters, parse_sweep, resolve_filter, CountArgs, ExportArgs, ImportArgs, PlotArgs,
    PlotKind, SimulateArgs, SweepAxis,
};
use crate::Failure;

const NORM_TOL: f64 = 1e-9;

fn emit(text: String, output: Option<&Path>) -> Result<String, Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Single => "single",
        Variant::Multilevel => "multilevel",
        Variant::Packet => "packet",
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<String, Failure> {
    let p = a.circuit.plan()?;
    let n = p.n;
    let text = std::fs::read_to_string(&a.signal)
        .with_context(|| format!("reading {}", a.signal.display()))?;
    let mut signal = parse_real_lines(&text)?;
    if signal.len() != 1 << n {
        return Err(anyhow!(
            "signal has {} values, expected 2^{n} = {}",
            signal.len(),
            1usize << n
        )
        .into());
    }
    let norm = signal.iter().map(|x| x * x).sum::<f64>().sqrt();
    if a.normalize {
        if norm == 0.0 {
            return Err(anyhow!("cannot normalize an all-zero signal").into());
        }
        signal.iter_mut().for_each(|x| *x /= norm);
    } else if (norm - 1.0).abs() > NORM_TOL {
        return Err(
            anyhow!("signal norm is {norm:.12}, not 1; pass --normalize to rescale").into(),
        );
    }
    let c = build_qwt(&p)?;
    let psi: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let out = apply(&c, &StateVector::embed(&psi, c.width())?)?;
    let others: Vec<usize> = (n..c.width()).collect();
    let (prob, projected) = project_zero(&out, &others)?;
    let sys = StateVector::from_amplitudes(projected.low_block(n).to_vec())?;
    let mut dump = sys.to_text();
    if a.compare {
        let oracle = match p.variant {
            Variant::Single => classical_dwt(&p.filter, &signal, 1)?,
            Variant::Multilevel => classical_dwt(&p.filter, &signal, p.d)?,
            Variant::Packet => classical_packet(&p.filter, &signal, p.d)?,
        };
        let oracle_c: Vec<Complex64> = oracle.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let fid = fidelity_up_to_phase(sys.amplitudes(), &oracle_c);
        let mut report = String::new();
        writeln!(report, "# success_probability {}", fmt_real(prob)).unwrap();
        writeln!(report, "# oracle").unwrap();
        for x in &oracle {
            writeln!(report, "# {}", fmt_real(*x)).unwrap();
        }
        writeln!(report, "# fidelity {}", fmt_real(fid)).unwrap();
        if a.output.is_some() {
            emit(dump, a.output.as_deref())?;
            return Ok(report);
        }
        dump.push_str(&report);
    }
    emit(dump, a.output.as_deref())
}

const CSV_HEAD: &str = "filter,variant,n,d,t";

fn csv_header() -> String {
    let fields: Vec<&str> = GateCostReport::default()
        .fields()
        .iter()
        .map(|f| f.0)
        .collect();
    format!("{CSV_HEAD},{}\n", fields.join(","))
}

fn csv_row(p: &QwtPlan, r: &GateCostReport) -> String {
    let vals: Vec<String> = r.fields().iter().map(|f| f.1.to_string()).collect();
    format!(
        "{},{},{},{},{},{}\n",
        p.filter.name(),
        variant_name(p.variant),
        p.n,
        p.d,
        p.t,
        vals.join(",")
    )
}

pub fn count(a: &CountArgs) -> Result<String, Failure> {
    let cfg = a.lowering.config();
    let plans: Vec<QwtPlan> = match &a.sweep {
        None => vec![a.circuit.plan()?],
        Some(spec) => {
            let (axis, lo, hi) = parse_sweep(spec)?;
            (lo..=hi)
                .map(|v| match axis {
                    SweepAxis::N => a.circuit.plan_at(v, a.circuit.d),
                    SweepAxis::D => a.circuit.plan_at(a.circuit.n, v),
                })
                .collect::<anyhow::Result<_>>()?
        }
    };
    let mut out = String::new();
    if a.sweep.is_some() || a.csv {
        out.push_str(&csv_header());
        for p in &plans {
            out.push_str(&csv_row(p, &count_gates(&build_qwt(p)?, &cfg)?));
        }
        return Ok(out);
    }
    let p = &plans[0];
    let r = count_gates(&build_qwt(p)?, &cfg)?;
    writeln!(
        out,
        "{} {} n={} d={} t={}",
        p.filter.name(),
        variant_name(p.variant),
        p.n,
        p.d,
        p.t
    )
    .unwrap();
    write!(out, "{r}").unwrap();
    Ok(out)
}

pub fn plot_data(a: &PlotArgs) -> Result<String, Failure> {
    let mut out = String::new();
    match a.kind {
        PlotKind::SuccessAmplitude => {
            out.push_str("filter,M,inv_h,inv_sqrt_M\n");
            for f in all_filters()? {
                writeln!(
                    out,
                    "{},{},{},{}",
                    f.name(),
                    f.order(),
                    fmt_real(1.0 / one_norm(&f)),
                    fmt_real(1.0 / (f.order() as f64).sqrt())
                )
                .unwrap();
            }
        }
        PlotKind::CoeffDecay => {
            let filters = match &a.filter {
                Some(name) => vec![resolve_filter(name)?],
                None => all_filters()?,
            };
            out.push_str("filter,l,abs_h\n");
            for f in filters {
                for (l, h) in f.coeffs().iter().enumerate() {
                    writeln!(out, "{},{l},{}", f.name(), fmt_real(h.abs())).unwrap();
                }
            }
        }
    }
    Ok(out)
}

pub fn export(a: &ExportArgs) -> Result<String, Failure> {
    if a.qasm && !a.lowered {
        return Err(anyhow!("QASM export needs a lowered circuit; add --lowered").into());
    }
    let mut c = build_qwt(&a.circuit.plan()?)?;
    if a.lowered {
        c = lower(&c, &a.lowering.config())?;
    }
    let text = if a.qasm {
        to_qasm(&c)?
    } else {
        to_json(&c)? + "\n"
    };
    emit(text, a.output.as_deref())
}

pub fn import(a: &ImportArgs) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let is_qasm = a.input.extension().is_some_and(|e| e == "qasm");
    let c = if is_qasm {
        from_qasm(&text)?
    } else {
        from_json(&text)?
    };
    let mut out = String::new();
    writeln!(out, "width {}", c.width()).unwrap();
    for r in c.layout.registers() {
        writeln!(out, "register {} {}", r.name, r.size).unwrap();
    }
    writeln!(out, "gates {}", c.gates.len()).unwrap();
    writeln!(out, "elementary {}", c.is_elementary()).unwrap();
    if c.is_elementary() {
        write!(out, "{}", GateCostReport::tally(&c)).unwrap();
    }
    Ok(out)
}
