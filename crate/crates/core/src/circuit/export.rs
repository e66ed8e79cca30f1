use std::fmt::Write as _;

use super::{is_elementary, Circuit, Control, Gate, GateKind, Register, RegisterLayout};
use crate::error::{QwtError, Result};

pub fn to_json(c: &Circuit) -> Result<String> {
    Ok(serde_json::to_string_pretty(c)?)
}

pub fn from_json(text: &str) -> Result<Circuit> {
    let c: Circuit = serde_json::from_str(text)?;
    c.validate()?;
    Ok(c)
}

/// OpenQASM 3 text for a lowered circuit. Register boundaries go into comments.
pub fn to_qasm(c: &Circuit) -> Result<String> {
    if let Some(g) = c.gates.iter().find(|g| !is_elementary(g)) {
        return Err(QwtError::Unlowerable(format!(
            "QASM export needs a lowered circuit; found {}",
            g.name()
        )));
    }
    let mut s = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    for r in c.layout.registers() {
        let _ = writeln!(s, "// register {} {}", r.name, r.size);
    }
    let _ = writeln!(s, "qubit[{}] q;", c.width());
    for g in &c.gates {
        let mut ops: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
        ops.extend(&g.targets);
        let args = ops
            .iter()
            .map(|q| format!("q[{q}]"))
            .collect::<Vec<_>>()
            .join(", ");
        let head = match (&g.kind, g.controls.len()) {
            (GateKind::X, 0) => "x".to_string(),
            (GateKind::X, 1) => "cx".to_string(),
            (GateKind::X, _) => "ccx".to_string(),
            (GateKind::H, _) => "h".to_string(),
            (GateKind::Z, 0) => "z".to_string(),
            (GateKind::Z, _) => "cz".to_string(),
            (GateKind::Ry(a), _) => format!("ry({a:.16e})"),
            (GateKind::Swap, _) => "swap".to_string(),
            _ => unreachable!(),
        };
        let _ = writeln!(s, "{head} {args};");
    }
    Ok(s)
}

fn parse_qubit(tok: &str) -> Result<usize> {
    tok.trim()
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| QwtError::Parse(format!("bad qubit operand {tok:?}")))
}

/// Reads the subset written by [`to_qasm`].
pub fn from_qasm(text: &str) -> Result<Circuit> {
    let mut registers = Vec::new();
    let mut width = None;
    let mut gates = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: &str| QwtError::Parse(format!("line {}: {msg}: {line:?}", no + 1));
        if let Some(rest) = line.strip_prefix("// register ") {
            let mut it = rest.split_whitespace();
            let (Some(name), Some(size)) = (it.next(), it.next()) else {
                return Err(err("bad register comment"));
            };
            let size = size.parse().map_err(|_| err("bad register size"))?;
            registers.push(Register {
                name: name.into(),
                size,
            });
            continue;
        }
        if line.is_empty()
            || line.starts_with("//")
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
        {
            continue;
        }
        let body = line.strip_suffix(';').ok_or_else(|| err("missing ';'"))?;
        if let Some(decl) = body.strip_prefix("qubit[") {
            let w = decl
                .strip_suffix("] q")
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| err("bad qubit declaration"))?;
            width = Some(w);
            continue;
        }
        let (head, args) = body
            .split_once(' ')
            .ok_or_else(|| err("missing operands"))?;
        let ops = args
            .split(',')
            .map(parse_qubit)
            .collect::<Result<Vec<_>>>()?;
        let (kind, n_ctl) =
            if let Some(a) = head.strip_prefix("ry(").and_then(|h| h.strip_suffix(')')) {
                (GateKind::Ry(a.parse().map_err(|_| err("bad angle"))?), 0)
            } else {
                match head {
                    "x" => (GateKind::X, 0),
                    "cx" => (GateKind::X, 1),
                    "ccx" => (GateKind::X, 2),
                    "h" => (GateKind::H, 0),
                    "z" => (GateKind::Z, 0),
                    "cz" => (GateKind::Z, 1),
                    "swap" => (GateKind::Swap, 0),
                    _ => return Err(err("unsupported gate")),
                }
            };
        if ops.len() < n_ctl + 1 {
            return Err(err("too few operands"));
        }
        let controls = ops[..n_ctl].iter().map(|&q| Control::one(q)).collect();
        gates.push(Gate {
            kind,
            targets: ops[n_ctl..].to_vec(),
            controls,
        });
    }
    let width = width.ok_or_else(|| QwtError::Parse("no qubit declaration".into()))?;
    let layout = if registers.is_empty() {
        RegisterLayout::flat(width)
    } else {
        RegisterLayout::from_registers(registers)
    };
    if layout.width() != width {
        return Err(QwtError::Parse(
            "register comments disagree with the qubit count".into(),
        ));
    }
    let c = Circuit {
        layout,
        gates,
        borrowed: Vec::new(),
    };
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{lower, LoweringConfig, PrepRole};

    fn sample() -> Circuit {
        let mut c = Circuit::new(RegisterLayout::qwt(1, 3, false));
        c.push(Gate::new(
            GateKind::Prep {
                role: PrepRole::Prep,
                amplitudes: vec![0.6, 0.8],
                dagger: false,
            },
            vec![3],
        ))
        .push(
            Gate::new(GateKind::Add { addend: 1 }, vec![3, 0, 1, 2])
                .with_controls(&[Control::zero(4)]),
        )
        .push(Gate::ry(0.25, 4))
        .push(Gate::new(GateKind::ConstSub(2), vec![0, 1]).with_controls(&[Control::one(2)]));
        c
    }

    #[test]
    fn json_round_trip_keeps_kinds() {
        let c = sample();
        let text = to_json(&c).unwrap();
        assert!(text.contains("\"kind\": \"prep\""));
        assert!(text.contains("\"kind\": \"const_sub\""));
        assert_eq!(from_json(&text).unwrap(), c);
    }

    #[test]
    fn qasm_needs_lowering() {
        assert!(matches!(to_qasm(&sample()), Err(QwtError::Unlowerable(_))));
    }

    #[test]
    fn qasm_round_trip() {
        let low = lower(&sample(), &LoweringConfig::default()).unwrap();
        let text = to_qasm(&low).unwrap();
        let back = from_qasm(&text).unwrap();
        assert_eq!(back.layout, low.layout);
        assert_eq!(back.gates, low.gates);
        assert!(from_qasm("qubit[2] q;\nfoo q[0];\n").is_err());
    }
}
