//! Orthogonal wavelet filters: validation, the built-in Daubechies registry,
//! one-norm arithmetic and the rotation-cascade factorization used by the
//! linear-coefficient state preparation.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{QwtError, Result};

/// Residual bound for the three filter conditions.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Back-substitution residual above which a vector is declared not factorizable.
pub const FACTORIZATION_TOL: f64 = 1e-8;

/// A validated orthogonal wavelet filter `h_0..h_{M-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveletFilter {
    name: String,
    coeffs: Vec<f64>,
}

impl WaveletFilter {
    /// Builds a filter, rejecting coefficient sequences that fail [`validate_filter`].
    pub fn new(name: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        let report = validate_filter(&coeffs);
        if !report.passed() {
            return Err(QwtError::InvalidFilter(report.to_string()));
        }
        Ok(Self {
            name: name.into(),
            coeffs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Wavelet order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Wavelet index `K = M / 2`.
    pub fn index(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// Number of qubits needed to address a coefficient, `ceil(log2 M)`.
    pub fn index_qubits(&self) -> usize {
        ceil_log2(self.coeffs.len())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `h_k`, zero outside `0..M`.
    pub fn h(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// High-pass coefficient `g_k = (-1)^k h_{M-1-k}`, zero outside `0..M`.
    pub fn g(&self, k: usize) -> f64 {
        let m = self.coeffs.len();
        if k >= m {
            return 0.0;
        }
        let v = self.coeffs[m - 1 - k];
        if k.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    /// Loads a filter from a text file holding one coefficient per line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let coeffs = parse_real_lines(&text)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".to_string());
        Self::new(name, coeffs)
    }
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    let mut m = 0;
    while (1usize << m) < x {
        m += 1;
    }
    m
}

/// Parses one real number per nonblank line; `#` starts a comment.
pub fn parse_real_lines(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| QwtError::Parse(format!("line {}: not a number: {line:?}", i + 1)))?;
        out.push(v);
    }
    Ok(out)
}

/// Per-condition residuals of a candidate filter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub order: usize,
    pub odd_length: bool,
    /// `|sum h - sqrt 2|`
    pub sum_residual: f64,
    /// `|sum h^2 - 1|`
    pub energy_residual: f64,
    /// `max_{k != 0} |sum h_l h_{l+2k}|`
    pub shift_residual: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.odd_length
            && self.order >= 2
            && self.sum_residual <= VALIDATION_TOL
            && self.energy_residual <= VALIDATION_TOL
            && self.shift_residual <= VALIDATION_TOL
    }

    /// Human-readable reasons for failure, empty when the filter passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.order < 2 {
            out.push(format!("order {} is too small", self.order));
        }
        if self.odd_length {
            out.push(format!("odd length {}: the order must be even", self.order));
        }
        if self.sum_residual > VALIDATION_TOL {
            out.push(format!(
                "sum of coefficients off sqrt(2) by {:.3e}",
                self.sum_residual
            ));
        }
        if self.energy_residual > VALIDATION_TOL {
            out.push(format!(
                "sum of squares off 1 by {:.3e}",
                self.energy_residual
            ));
        }
        if self.shift_residual > VALIDATION_TOL {
            out.push(format!(
                "double-shift orthogonality residual {:.3e}",
                self.shift_residual
            ));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order={} sum_residual={:.3e} energy_residual={:.3e} shift_residual={:.3e}",
            self.order, self.sum_residual, self.energy_residual, self.shift_residual
        )?;
        let failures = self.failures();
        if !failures.is_empty() {
            write!(f, " FAIL: {}", failures.join("; "))?;
        }
        Ok(())
    }
}

/// Checks the sum, energy and double-shift orthogonality conditions. Never errors.
pub fn validate_filter(coeffs: &[f64]) -> ValidationReport {
    let sum: f64 = coeffs.iter().sum();
    let energy: f64 = coeffs.iter().map(|h| h * h).sum();
    let mut shift = 0.0f64;
    let mut k = 2;
    while k < coeffs.len() {
        let dot: f64 = coeffs.iter().zip(&coeffs[k..]).map(|(a, b)| a * b).sum();
        shift = shift.max(dot.abs());
        k += 2;
    }
    ValidationReport {
        order: coeffs.len(),
        odd_length: coeffs.len() % 2 == 1,
        sum_residual: (sum - SQRT_2).abs(),
        energy_residual: (energy - 1.0).abs(),
        shift_residual: shift,
    }
}

/// The one-norm `h = sum |h_l|`; its inverse is the success amplitude of the
/// square-root LCU preparation.
pub fn one_norm(f: &WaveletFilter) -> f64 {
    f.coeffs.iter().map(|h| h.abs()).sum()
}

#[rustfmt::skip]
#[allow(clippy::excessive_precision, clippy::approx_constant)]
mod table {
    pub(super) const DB1: [f64; 2] = [
        0.7071067811865475244,
        0.7071067811865475244,
    ];
    
    pub(super) const DB2: [f64; 4] = [
        0.4829629131445341434,
        0.8365163037378079056,
        0.224143868042013381,
        -0.1294095225512603812,
    ];
    
    pub(super) const DB3: [f64; 6] = [
        0.332670552950082616,
        0.8068915093110925765,
        0.4598775021184915701,
        -0.1350110200102545887,
        -0.08544127388202666169,
        0.0352262918857095366,
    ];
    
    pub(super) const DB4: [f64; 8] = [
        0.2303778133088965009,
        0.7148465705529156471,
        0.6308807679298589079,
        -0.02798376941685985421,
        -0.1870348117190930841,
        0.03084138183556076363,
        0.03288301166688519974,
        -0.0105974017850690321,
    ];
    
    pub(super) const DB5: [f64; 10] = [
        0.1601023979741929145,
        0.6038292697971896705,
        0.7243085284377729277,
        0.1384281459013207315,
        -0.2422948870663820319,
        -0.03224486958463837465,
        0.07757149384004571352,
        -0.006241490212798274274,
        -0.01258075199908199947,
        0.003335725285473771278,
    ];
    
    pub(super) const DB6: [f64; 12] = [
        0.1115407433501094636,
        0.4946238903984530857,
        0.7511339080210953507,
        0.3152503517091976291,
        -0.2262646939654398201,
        -0.1297668675672619356,
        0.0975016055873230491,
        0.02752286553030572863,
        -0.03158203931748602957,
        0.0005538422011614961393,
        0.00477725751094551064,
        -0.001077301085308479565,
    ];
    
    pub(super) const DB7: [f64; 14] = [
        0.07785205408500917902,
        0.3965393194819173065,
        0.7291320908462351199,
        0.4697822874051931225,
        -0.1439060039285649754,
        -0.2240361849938749826,
        0.07130921926683026475,
        0.08061260915108307191,
        -0.03802993693501441358,
        -0.01657454163066688065,
        0.01255099855609984061,
        0.0004295779729213665211,
        -0.001801640704047490915,
        0.0003537137999745202484,
    ];
    
    pub(super) const DB8: [f64; 16] = [
        0.05441584224310400996,
        0.3128715909142999707,
        0.6756307362972898068,
        0.5853546836542067128,
        -0.01582910525634930567,
        -0.2840155429615469265,
        0.0004724845739132827704,
        0.1287474266204784589,
        -0.01736930100180754617,
        -0.04408825393079475151,
        0.01398102791739828165,
        0.008746094047405776716,
        -0.00487035299345157431,
        -0.0003917403733769470463,
        0.0006754494064505693664,
        -0.0001174767841247695337,
    ];
    
    pub(super) const DB9: [f64; 18] = [
        0.03807794736387834659,
        0.2438346746125903537,
        0.6048231236901111119,
        0.6572880780513005381,
        0.1331973858250075762,
        -0.2932737832791749088,
        -0.09684078322297646051,
        0.1485407493381063801,
        0.03072568147933337921,
        -0.06763282906132997368,
        0.0002509471148314519576,
        0.02236166212367909721,
        -0.004723204757751397278,
        -0.004281503682463429834,
        0.001847646883056226477,
        0.0002303857635231959672,
        -0.000251963188942710137,
        0.00003934732031627159948,
    ];
    
    pub(super) const DB10: [f64; 20] = [
        0.02667005790055555359,
        0.188176800077691489,
        0.5272011889317255865,
        0.6884590394536035657,
        0.2811723436605774607,
        -0.2498464243273153794,
        -0.1959462743773770435,
        0.1273693403357932601,
        0.09305736460357235116,
        -0.07139414716639708715,
        -0.02945753682187581286,
        0.03321267405934100174,
        0.003606553566956169655,
        -0.01073317548333057504,
        0.001395351747052901166,
        0.001992405295185056117,
        -0.0006858566949597116266,
        -0.000116466855129285451,
        0.00009358867032006959133,
        -0.00001326420289452124481,
    ];
}

const REGISTRY: &[(&str, &[f64])] = &[
    ("haar", &table::DB1),
    ("db1", &table::DB1),
    ("db2", &table::DB2),
    ("db3", &table::DB3),
    ("db4", &table::DB4),
    ("db5", &table::DB5),
    ("db6", &table::DB6),
    ("db7", &table::DB7),
    ("db8", &table::DB8),
    ("db9", &table::DB9),
    ("db10", &table::DB10),
];

/// Identifiers accepted by [`builtin_filter`].
pub fn registry_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// One representative per distinct registry filter, ordered by order `M = 2..20`.
pub fn registry_filters() -> Vec<WaveletFilter> {
    REGISTRY
        .iter()
        .filter(|(n, _)| *n != "db1")
        .map(|(n, c)| WaveletFilter {
            name: (*n).to_string(),
            coeffs: c.to_vec(),
        })
        .collect()
}

/// Looks up a Daubechies filter by name (`haar`/`db1` .. `db10`).
pub fn builtin_filter(name: &str) -> Result<WaveletFilter> {
    let key = name.to_ascii_lowercase();
    REGISTRY
        .iter()
        .find(|(n, _)| *n == key)
        .map(|(n, c)| WaveletFilter {
            name: (*n).to_string(),
            coeffs: c.to_vec(),
        })
        .ok_or_else(|| QwtError::UnknownFilter {
            name: name.to_string(),
            available: registry_names().join(", "),
        })
}

/// Rotation angles whose brick-pattern cascade builds a filter from a basis vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationCascade {
    /// `theta_0 .. theta_{K-1}`, each in `(-pi, pi]`.
    pub angles: Vec<f64>,
    /// `m = ceil(log2 M)`
    pub padded_width: usize,
    /// `(2^m - M) / 2` zeros on each side of the filter.
    pub pad: usize,
}

impl RotationCascade {
    pub fn order(&self) -> usize {
        2 * self.angles.len()
    }

    /// Length of the padded vector, `2^m`.
    pub fn len(&self) -> usize {
        1 << self.padded_width
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Index of the basis vector the cascade starts from, `pad + K = 2^{m-1}`.
    pub fn seed_index(&self) -> usize {
        self.pad + self.angles.len()
    }

    /// First index of the pairs rotated by layer `layer`.
    pub fn layer_start(&self, layer: usize) -> usize {
        self.pad + self.angles.len() - 1 - layer
    }
}

/// The filter centered in a length-`2^m` vector: `(0^pad, h, 0^pad)`.
pub fn padded_filter(f: &WaveletFilter) -> Vec<f64> {
    let m = f.index_qubits();
    let pad = ((1 << m) - f.order()) / 2;
    let mut v = vec![0.0; 1 << m];
    v[pad..pad + f.order()].copy_from_slice(f.coeffs());
    v
}

fn rotate_pair(v: &mut [f64], i: usize, theta: f64, inverse: bool) {
    let (s, c) = theta.sin_cos();
    let s = if inverse { -s } else { s };
    let (x, y) = (v[i], v[i + 1]);
    v[i] = c * x + s * y;
    v[i + 1] = -s * x + c * y;
}

fn apply_layer(v: &mut [f64], start: usize, layer: usize, theta: f64, inverse: bool) {
    for p in 0..=layer {
        rotate_pair(v, start + 2 * p, theta, inverse);
    }
}

/// Runs the cascade `U_{K-1} ... U_0` on the seed basis vector. The result is
/// the centered padded vector `(0^pad, h, 0^pad)`.
pub fn reconstruct_from_angles(c: &RotationCascade) -> Vec<f64> {
    let mut v = vec![0.0; c.len()];
    if c.angles.is_empty() {
        return v;
    }
    v[c.seed_index()] = 1.0;
    for (layer, &theta) in c.angles.iter().enumerate() {
        apply_layer(&mut v, c.layer_start(layer), layer, theta, false);
    }
    v
}

fn half_turn_normalize(theta: f64) -> f64 {
    // keep cos >= 0
    if theta > PI / 2.0 {
        theta - PI
    } else if theta <= -PI / 2.0 {
        theta + PI
    } else {
        theta
    }
}

/// Factorizes a centered padded vector of an order-`order` filter into cascade angles
/// by peeling rotation layers from the outside in.
pub fn extract_angles_from_padded(v: &[f64], order: usize) -> Result<RotationCascade> {
    if order < 2 || order % 2 == 1 {
        return Err(QwtError::Factorization(format!(
            "order {order} must be even and >= 2"
        )));
    }
    let m = ceil_log2(order);
    if v.len() != 1 << m {
        return Err(QwtError::Factorization(format!(
            "padded vector has length {}, expected {}",
            v.len(),
            1usize << m
        )));
    }
    let k = order / 2;
    let mut cascade = RotationCascade {
        angles: vec![0.0; k],
        padded_width: m,
        pad: ((1 << m) - order) / 2,
    };
    let mut work = v.to_vec();
    for layer in (0..k).rev() {
        let start = cascade.layer_start(layer);
        let last = start + 2 * layer;
        let theta = if layer == 0 {
            work[start].atan2(work[start + 1])
        } else {
            let (x0, y0) = (work[start], work[start + 1]);
            let (xl, yl) = (work[last], work[last + 1]);
            let raw = if x0.hypot(y0) >= xl.hypot(yl) {
                x0.atan2(y0)
            } else {
                (-yl).atan2(xl)
            };
            half_turn_normalize(raw)
        };
        cascade.angles[layer] = theta;
        apply_layer(&mut work, start, layer, theta, true);
    }
    let seed = cascade.seed_index();
    let residual = work
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == seed { (x - 1.0).abs() } else { x.abs() })
        .fold(0.0, f64::max);
    if residual > FACTORIZATION_TOL {
        return Err(QwtError::Factorization(format!(
            "back-substitution residual {residual:.3e} exceeds {FACTORIZATION_TOL:e}"
        )));
    }
    Ok(cascade)
}

/// Rotation angles for a filter's linear-coefficient preparation.
pub fn extract_rotation_angles(f: &WaveletFilter) -> Result<RotationCascade> {
    extract_angles_from_padded(&padded_filter(f), f.order())
}
