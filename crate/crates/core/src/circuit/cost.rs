use std::fmt;

use serde::{Deserialize, Serialize};

use super::{is_elementary, lower, Circuit, GateKind, LoweringConfig, WORK};
use crate::error::Result;

/// Elementary-gate tally of a lowered circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCostReport {
    pub not: usize,
    pub cnot: usize,
    pub toffoli: usize,
    pub h: usize,
    pub z: usize,
    pub cz: usize,
    pub ry: usize,
    pub swap: usize,
    pub total_elementary: usize,
    /// `par + anc + aux`
    pub ancilla_count: usize,
    /// Most qubits borrowed by any single lowered macro.
    pub borrowed_count: usize,
    /// Clean scratch qubits added by lowering.
    pub workspace_count: usize,
}

impl GateCostReport {
    pub fn fields(&self) -> [(&'static str, usize); 12] {
        [
            ("not", self.not),
            ("cnot", self.cnot),
            ("toffoli", self.toffoli),
            ("h", self.h),
            ("z", self.z),
            ("cz", self.cz),
            ("ry", self.ry),
            ("swap", self.swap),
            ("total_elementary", self.total_elementary),
            ("ancilla_count", self.ancilla_count),
            ("borrowed_count", self.borrowed_count),
            ("workspace_count", self.workspace_count),
        ]
    }

    /// Tallies an already lowered circuit.
    pub fn tally(c: &Circuit) -> Self {
        let mut r = Self::default();
        for g in &c.gates {
            debug_assert!(is_elementary(g));
            let slot = match (&g.kind, g.controls.len()) {
                (GateKind::X, 0) => &mut r.not,
                (GateKind::X, 1) => &mut r.cnot,
                (GateKind::X, _) => &mut r.toffoli,
                (GateKind::H, _) => &mut r.h,
                (GateKind::Z, 0) => &mut r.z,
                (GateKind::Z, _) => &mut r.cz,
                (GateKind::Ry(_), _) => &mut r.ry,
                (GateKind::Swap, _) => &mut r.swap,
                _ => continue,
            };
            *slot += 1;
            r.total_elementary += 1;
        }
        r.ancilla_count = c.layout.ancilla_count();
        r.borrowed_count = c.borrowed.iter().map(|b| b.qubits.len()).max().unwrap_or(0);
        r.workspace_count = c.layout.range(WORK).map_or(0, |w| w.len());
        r
    }
}

impl fmt::Display for GateCostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in self.fields() {
            writeln!(f, "{name:<17} {v}")?;
        }
        Ok(())
    }
}

/// Lowers `c` (if needed) and counts elementary gates.
pub fn count_gates(c: &Circuit, cfg: &LoweringConfig) -> Result<GateCostReport> {
    if c.is_elementary() {
        return Ok(GateCostReport::tally(c));
    }
    Ok(GateCostReport::tally(&lower(c, cfg)?))
}
