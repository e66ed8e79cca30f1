//! QWT circuit assembly: SELECT, the state preparations, PQWT, the diluted and
//! amplified single-level transform, and the multi-level and packet recursions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{
    linprep_gates, Circuit, Control, Gate, GateKind, PrepRole, Register, RegisterLayout, ANC, AUX,
    PAR, SYS,
};
use crate::error::{QwtError, Result};
use crate::filters::{extract_rotation_angles, one_norm, WaveletFilter};
use crate::reference::check_depth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Single,
    Multilevel,
    Packet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrepStyle {
    /// Square-root coefficients on both sides; success amplitude `1/h`.
    Sqrt,
    /// Linear coefficients and a Hadamard layer; success amplitude `2^{-m/2}`.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QwtPlan {
    pub filter: WaveletFilter,
    pub n: usize,
    pub d: usize,
    pub variant: Variant,
    pub prep_style: PrepStyle,
    /// Success angle of one PQWT: `sin alpha` is the projection norm.
    pub alpha: f64,
    /// Amplification rounds.
    pub t: usize,
    /// Dilution angle, `cos theta = sin(pi / (2(2t+1))) / sin alpha`.
    pub theta: f64,
}

/// Rounds `t` and dilution angle `theta` for success angle `alpha`.
pub fn oaa_schedule(alpha: f64) -> (usize, f64) {
    // the tolerance keeps exact boundary cases (alpha = pi/6, ...) on the lower count
    let t = ((PI / (2.0 * alpha) - 1.0) / 2.0 - 1e-9).ceil().max(0.0) as usize;
    let cos_theta = ((PI / (2.0 * (2 * t + 1) as f64)).sin() / alpha.sin()).clamp(0.0, 1.0);
    (t, cos_theta.acos())
}

pub fn plan(
    f: &WaveletFilter,
    n: usize,
    d: usize,
    variant: Variant,
    prep_style: PrepStyle,
) -> Result<QwtPlan> {
    check_depth(f, n, d)?;
    if variant == Variant::Single && d != 1 {
        return Err(QwtError::Depth(format!(
            "a single-level plan needs d = 1, got {d}"
        )));
    }
    let sin_alpha = match prep_style {
        PrepStyle::Sqrt => 1.0 / one_norm(f),
        PrepStyle::Linear => (-(f.index_qubits() as f64) / 2.0).exp2(),
    };
    let alpha = sin_alpha.asin();
    let (t, theta) = oaa_schedule(alpha);
    Ok(QwtPlan {
        filter: f.clone(),
        n,
        d,
        variant,
        prep_style,
        alpha,
        t,
        theta,
    })
}

impl QwtPlan {
    pub fn m(&self) -> usize {
        self.filter.index_qubits()
    }

    pub fn sin_alpha(&self) -> f64 {
        self.alpha.sin()
    }

    /// Projection amplitude after dilution, `sin(pi / (2(2t+1)))`.
    pub fn diluted_amplitude(&self) -> f64 {
        self.alpha.sin() * self.theta.cos()
    }

    /// Multi-level plans with `d >= 3` carry one `aux` qubit for the MCX pairs.
    pub fn layout(&self) -> RegisterLayout {
        let aux = self.variant == Variant::Multilevel && self.d >= 3;
        RegisterLayout::qwt(self.m(), self.n, aux)
    }

    /// Qubits that must start and end in `|0>`.
    pub fn ancilla_qubits(&self) -> Vec<usize> {
        let l = self.layout();
        let mut q = l.qubits(PAR);
        q.extend(l.qubits(ANC));
        q.extend(l.qubits(AUX));
        q
    }
}

/// Wire assignment for one single-level block.
#[derive(Clone, Debug)]
struct Wires {
    sys: Vec<usize>,
    anc: Vec<usize>,
    par: usize,
}

impl Wires {
    fn of(layout: &RegisterLayout) -> Self {
        Self {
            sys: layout.qubits(SYS),
            anc: layout.qubits(ANC),
            par: layout.qubits(PAR)[0],
        }
    }

    fn low(&self, k: usize) -> Self {
        Self {
            sys: self.sys[..k].to_vec(),
            ..self.clone()
        }
    }

    fn par_anc(&self) -> Vec<usize> {
        let mut q = self.anc.clone();
        q.push(self.par);
        q
    }
}

fn with_control(gates: Vec<Gate>, c: Control) -> Vec<Gate> {
    gates.into_iter().map(|g| g.with_controls(&[c])).collect()
}

fn inverse_gates(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

fn select_gates(w: &Wires) -> Vec<Gate> {
    let n = w.sys.len();
    let msb = w.sys[n - 1];
    let mut addend_target = w.anc.clone();
    addend_target.extend(&w.sys);
    let addend = w.anc.len();
    vec![
        Gate::cnot(w.anc[0], w.par),
        Gate::cnot(w.sys[0], w.par),
        Gate::new(GateKind::Sub { addend }, addend_target.clone())
            .with_controls(&[Control::zero(w.par)]),
        Gate::new(GateKind::Add { addend }, addend_target).with_controls(&[Control::one(w.par)]),
        Gate::new(GateKind::Shuffle, w.sys.clone()),
        Gate::cnot(msb, w.par),
        // Z on the output MSB for even l
        Gate::z(msb).with_controls(&[Control::zero(w.anc[0])]),
    ]
}

fn prep_amplitudes(f: &WaveletFilter, signed: bool) -> Vec<f64> {
    let h = one_norm(f);
    let mut v = vec![0.0; 1 << f.index_qubits()];
    for (l, &c) in f.coeffs().iter().enumerate() {
        let mag = (c.abs() / h).sqrt();
        v[l] = if signed && c < 0.0 { -mag } else { mag };
    }
    v
}

fn prep_gate(f: &WaveletFilter, anc: &[usize]) -> Gate {
    Gate::new(
        GateKind::Prep {
            role: PrepRole::Prep,
            amplitudes: prep_amplitudes(f, false),
            dagger: false,
        },
        anc.to_vec(),
    )
}

/// UNPREP, the adjoint of the signed preparation.
fn unprep_gate(f: &WaveletFilter, anc: &[usize]) -> Gate {
    Gate::new(
        GateKind::Prep {
            role: PrepRole::Unprep,
            amplitudes: prep_amplitudes(f, true),
            dagger: true,
        },
        anc.to_vec(),
    )
}

fn ushift_gates(f: &WaveletFilter, w: &Wires) -> Vec<Gate> {
    let shift = (f.order() / 2 - 1) as u64;
    let n = w.sys.len();
    if shift == 0 {
        return Vec::new();
    }
    vec![
        Gate::new(GateKind::ConstSub(shift), w.sys[..n - 1].to_vec())
            .with_controls(&[Control::one(w.sys[n - 1])]),
    ]
}

fn pqwt_gates(plan: &QwtPlan, w: &Wires) -> Result<Vec<Gate>> {
    let f = &plan.filter;
    let mut g = Vec::new();
    match plan.prep_style {
        PrepStyle::Sqrt => {
            g.push(prep_gate(f, &w.anc));
            g.extend(select_gates(w));
            g.push(unprep_gate(f, &w.anc));
        }
        PrepStyle::Linear => {
            g.extend(linprep_gates(&extract_rotation_angles(f)?, &w.anc));
            g.extend(select_gates(w));
            g.extend(w.anc.iter().map(|&q| Gate::h(q)));
        }
    }
    g.extend(ushift_gates(f, w));
    Ok(g)
}

fn single_gates(plan: &QwtPlan, w: &Wires, rounds: usize) -> Result<Vec<Gate>> {
    let mut v = pqwt_gates(plan, w)?;
    v.push(Gate::ry(2.0 * plan.theta, w.par));
    let v_inv = inverse_gates(&v);
    let reflect = Gate::new(GateKind::Reflect, w.par_anc());
    let mut g = v.clone();
    for _ in 0..rounds {
        g.push(reflect.clone());
        g.extend(v_inv.iter().cloned());
        g.push(reflect.clone());
        g.extend(v.iter().cloned());
        g.push(Gate::new(GateKind::GlobalPhase, vec![]));
    }
    Ok(g)
}

fn circuit(layout: RegisterLayout, gates: Vec<Gate>) -> Result<Circuit> {
    let mut c = Circuit::new(layout);
    c.extend(gates);
    c.validate()?;
    Ok(c)
}

fn select_layout(f: &WaveletFilter, n: usize) -> Result<RegisterLayout> {
    check_depth(f, n, 1)?;
    Ok(RegisterLayout::qwt(f.index_qubits(), n, false))
}

/// SELECT on `par | anc | sys`.
pub fn build_select(f: &WaveletFilter, n: usize) -> Result<Circuit> {
    let layout = select_layout(f, n)?;
    let w = Wires::of(&layout);
    circuit(layout, select_gates(&w))
}

fn anc_layout(f: &WaveletFilter) -> RegisterLayout {
    RegisterLayout::from_registers(vec![Register {
        name: ANC.into(),
        size: f.index_qubits(),
    }])
}

/// Loads `sum_l h_l |l>` onto an `m`-qubit register.
pub fn build_linprep(f: &WaveletFilter) -> Result<Circuit> {
    let layout = anc_layout(f);
    let anc = layout.qubits(ANC);
    circuit(layout, linprep_gates(&extract_rotation_angles(f)?, &anc))
}

/// `PREP|0> = h^{-1/2} sum_l sqrt|h_l| |l>`
pub fn build_prep(f: &WaveletFilter) -> Result<Circuit> {
    let layout = anc_layout(f);
    let anc = layout.qubits(ANC);
    circuit(layout, vec![prep_gate(f, &anc)])
}

/// UNPREP, with `UNPREP^dagger |0> = h^{-1/2} sum_l sign(h_l) sqrt|h_l| |l>`.
pub fn build_unprep(f: &WaveletFilter) -> Result<Circuit> {
    let layout = anc_layout(f);
    let anc = layout.qubits(ANC);
    circuit(layout, vec![unprep_gate(f, &anc)])
}

fn single_plan(plan: &QwtPlan) -> Result<()> {
    if plan.variant != Variant::Single {
        return Err(QwtError::Layout(format!(
            "expected a single-level plan, got {:?}",
            plan.variant
        )));
    }
    Ok(())
}

/// Probabilistic single-level QWT: its `|0>`-ancilla block is `sin(alpha) W`.
pub fn build_pqwt(plan: &QwtPlan) -> Result<Circuit> {
    single_plan(plan)?;
    let layout = plan.layout();
    let w = Wires::of(&layout);
    circuit(layout, pqwt_gates(plan, &w)?)
}

/// Exact single-level QWT: PQWT, dilution on `par`, then `t` amplification rounds.
pub fn build_single_qwt(plan: &QwtPlan) -> Result<Circuit> {
    build_single_qwt_with_rounds(plan, plan.t)
}

/// As [`build_single_qwt`] with an explicit round count.
pub fn build_single_qwt_with_rounds(plan: &QwtPlan, rounds: usize) -> Result<Circuit> {
    single_plan(plan)?;
    let layout = plan.layout();
    let w = Wires::of(&layout);
    circuit(layout, single_gates(plan, &w, rounds)?)
}

/// Single-level QWT controlled by the `aux` qubit on `par | anc | aux | sys`.
pub fn build_controlled_single_qwt(plan: &QwtPlan) -> Result<Circuit> {
    single_plan(plan)?;
    let layout = RegisterLayout::qwt(plan.m(), plan.n, true);
    let w = Wires::of(&layout);
    let ctl = Control::one(layout.qubits(AUX)[0]);
    circuit(layout, with_control(single_gates(plan, &w, plan.t)?, ctl))
}

fn level_plan(plan: &QwtPlan, n: usize) -> QwtPlan {
    QwtPlan {
        n,
        d: 1,
        variant: Variant::Single,
        ..plan.clone()
    }
}

/// `prod_s (W_{n-s} (+) I)`: each level acts on the approximation block selected
/// by the top `s` system qubits being zero.
pub fn build_multilevel_qwt(plan: &QwtPlan) -> Result<Circuit> {
    if plan.variant != Variant::Multilevel {
        return Err(QwtError::Layout("expected a multi-level plan".into()));
    }
    check_depth(&plan.filter, plan.n, plan.d)?;
    let layout = plan.layout();
    let w = Wires::of(&layout);
    let n = plan.n;
    let mut g = single_gates(plan, &w, plan.t)?;
    for s in 1..plan.d {
        let top = w.sys[n - s];
        g.push(Gate::x(top));
        let level = single_gates(&level_plan(plan, n - s), &w.low(n - s), plan.t)?;
        if s == 1 {
            g.extend(with_control(level, Control::one(top)));
        } else {
            let aux = layout.qubits(AUX)[0];
            let controls: Vec<usize> = w.sys[n - s..].to_vec();
            g.push(Gate::mcx(&controls, aux));
            g.extend(with_control(level, Control::one(aux)));
            g.push(Gate::mcx(&controls, aux));
        }
    }
    for s in 1..plan.d {
        g.push(Gate::x(w.sys[n - s]));
    }
    circuit(layout, g)
}

/// `prod_s (I_{2^s} (x) W_{n-s})`.
pub fn build_packet_qwt(plan: &QwtPlan) -> Result<Circuit> {
    if plan.variant != Variant::Packet {
        return Err(QwtError::Layout("expected a packet plan".into()));
    }
    check_depth(&plan.filter, plan.n, plan.d)?;
    let layout = plan.layout();
    let w = Wires::of(&layout);
    let mut g = Vec::new();
    for s in 0..plan.d {
        g.extend(single_gates(
            &level_plan(plan, plan.n - s),
            &w.low(plan.n - s),
            plan.t,
        )?);
    }
    circuit(layout, g)
}

/// Dispatches on the plan's variant.
pub fn build_qwt(plan: &QwtPlan) -> Result<Circuit> {
    match plan.variant {
        Variant::Single => build_single_qwt(plan),
        Variant::Multilevel => build_multilevel_qwt(plan),
        Variant::Packet => build_packet_qwt(plan),
    }
}
