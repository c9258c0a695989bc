//! Pauli noise on Alice's and Bob's qubits.
//!
//! Two independent routes are provided: [`apply_channel`] evaluates the Kraus
//! sum literally, while [`closed_form`] writes the evolved matrix down element
//! by element in the descending basis labels. [`drho_dp`] is the elementwise
//! derivative of the closed form.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::{kron, validate_density, BasisConvention, CMatrix, DensityMatrix};
use crate::spacetime::{physical_state, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Depolarizing.
    #[serde(rename = "DPC")]
    Dpc,
    /// Bit flip (σ_x).
    #[serde(rename = "BFC")]
    Bfc,
    /// Bit-phase flip (σ_y).
    #[serde(rename = "BPFC")]
    Bpfc,
    /// Phase flip (σ_z).
    #[serde(rename = "PFC")]
    Pfc,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 4] = [
        ChannelKind::Dpc,
        ChannelKind::Bfc,
        ChannelKind::Bpfc,
        ChannelKind::Pfc,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::Dpc => "DPC",
            ChannelKind::Bfc => "BFC",
            ChannelKind::Bpfc => "BPFC",
            ChannelKind::Pfc => "PFC",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "DPC" => Ok(ChannelKind::Dpc),
            "BFC" => Ok(ChannelKind::Bfc),
            "BPFC" => Ok(ChannelKind::Bpfc),
            "PFC" => Ok(ChannelKind::Pfc),
            _ => Err(format!("unknown channel '{s}' (expected DPC, BFC, BPFC or PFC)")),
        }
    }
}

pub(crate) fn check_p(field: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            field,
            value: p,
            domain: "[0, 1]",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    p: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        check_p("p", p)?;
        Ok(Self { kind, p })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Single-qubit Pauli weights `[p₀, p₁, p₂, p₃]`; `p₀ = p` is the identity weight.
pub fn pauli_probs(kind: ChannelKind, p: f64) -> Result<[f64; 4]> {
    check_p("p", p)?;
    let q = 1.0 - p;
    Ok(match kind {
        ChannelKind::Bfc => [p, q, 0.0, 0.0],
        ChannelKind::Bpfc => [p, 0.0, q, 0.0],
        ChannelKind::Pfc => [p, 0.0, 0.0, q],
        ChannelKind::Dpc => [p, q / 3.0, q / 3.0, q / 3.0],
    })
}

/// `σ_i ⊗ σ_j ⊗ σ_0` for all sixteen `(i, j)`.
fn two_qubit_paulis() -> Vec<((usize, usize), CMatrix)> {
    let id = CMatrix::pauli(0);
    let mut ops = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let ab = kron(&CMatrix::pauli(i), &CMatrix::pauli(j)).expect("4x4");
            ops.push(((i, j), kron(&ab, &id).expect("8x8")));
        }
    }
    ops
}

/// `Σ_{i,j} p_i p_j (σ_i⊗σ_j⊗σ_0) ρ (σ_i⊗σ_j⊗σ_0)`, all sixteen terms.
pub fn apply_channel(rho: &DensityMatrix, spec: ChannelSpec) -> Result<DensityMatrix> {
    let probs = pauli_probs(spec.kind, spec.p)?;
    let mut out = CMatrix::zeros(8)?;
    for ((i, j), op) in two_qubit_paulis() {
        let weight = probs[i] * probs[j];
        out = &out + &rho.matrix().conjugate_by(&op).scale(weight);
    }
    Ok(validate_density(out)?)
}

/// Writes matrices using the descending labels `1 = |111⟩ … 8 = |000⟩`.
struct LabelledMatrix(CMatrix);

impl LabelledMatrix {
    fn new() -> Self {
        Self(CMatrix::zeros(8).expect("8x8"))
    }

    fn set(&mut self, k: usize, l: usize, value: f64) {
        let (i, j) = (
            BasisConvention::label_to_index(k),
            BasisConvention::label_to_index(l),
        );
        self.0[(i, j)] = Complex64::new(value, 0.0);
    }

    /// Sets a real symmetric pair.
    fn set_pair(&mut self, k: usize, l: usize, value: f64) {
        self.set(k, l, value);
        self.set(l, k, value);
    }
}

/// Scenario quantities the elementwise formulas are written in.
struct Terms {
    a2: f64,
    b2: f64,
    ab: f64,
    /// `1/(1+e^{ω/T})`
    n2: f64,
    /// `1/(1+e^{-ω/T})`, equal to `e^{ω/T}/(1+e^{ω/T})`
    m2: f64,
    /// `1/√(1+e^{-ω/T})`
    m: f64,
}

impl Terms {
    fn new(s: &Scenario) -> Self {
        let k = s.kruskal();
        let (a, b) = (s.alpha(), s.beta());
        Self {
            a2: a * a,
            b2: b * b,
            ab: a * b,
            n2: k.n_sq(),
            m2: k.m_sq(),
            m: k.m,
        }
    }
}

/// The evolved state from the elementwise formulas for each channel.
pub fn closed_form(kind: ChannelKind, scenario: &Scenario, p: f64) -> Result<DensityMatrix> {
    check_p("p", p)?;
    let t = Terms::new(scenario);
    let mut r = LabelledMatrix::new();
    match kind {
        ChannelKind::Dpc => {
            let q = 1.0 - p;
            let s = 1.0 + 2.0 * p;
            r.set(1, 1, (4.0 * q * q * t.a2 * t.n2 + s * s * t.b2) / 9.0);
            r.set(2, 2, 4.0 * q * q * t.a2 * t.m2 / 9.0);
            let mixed = 2.0 * q * s / 9.0;
            r.set(3, 3, mixed * (t.a2 * t.n2 + t.b2));
            r.set(5, 5, mixed * (t.a2 * t.n2 + t.b2));
            r.set(4, 4, mixed * t.a2 * t.m2);
            r.set(6, 6, mixed * t.a2 * t.m2);
            r.set(7, 7, (s * s * t.a2 * t.n2 + 4.0 * q * q * t.b2) / 9.0);
            r.set(8, 8, s * s * t.a2 * t.m2 / 9.0);
            let c = 1.0 - 4.0 * p;
            r.set_pair(1, 8, c * c * t.ab * t.m / 9.0);
        }
        ChannelKind::Pfc => {
            r.set(8, 8, t.a2 * t.m2);
            r.set(7, 7, t.a2 * t.n2);
            r.set(1, 1, t.b2);
            let c = 1.0 - 2.0 * p;
            r.set_pair(1, 8, t.ab * t.m * c * c);
        }
        ChannelKind::Bfc | ChannelKind::Bpfc => {
            let q = 1.0 - p;
            r.set(1, 1, q * q * t.a2 * t.n2 + p * p * t.b2);
            r.set(2, 2, q * q * t.a2 * t.m2);
            r.set(3, 3, q * p * (t.a2 * t.n2 + t.b2));
            r.set(5, 5, q * p * (t.a2 * t.n2 + t.b2));
            r.set(4, 4, q * p * t.a2 * t.m2);
            r.set(6, 6, q * p * t.a2 * t.m2);
            r.set(7, 7, p * p * t.a2 * t.n2 + q * q * t.b2);
            r.set(8, 8, p * p * t.a2 * t.m2);
            r.set_pair(1, 8, p * p * t.ab * t.m);
            r.set_pair(2, 7, q * q * t.ab * t.m);
            let cross = q * p * t.ab * t.m;
            let cross = if kind == ChannelKind::Bpfc { -cross } else { cross };
            r.set_pair(6, 3, cross);
            r.set_pair(5, 4, cross);
        }
    }
    Ok(validate_density(r.0)?)
}

/// `dρ/dp` of [`closed_form`], elementwise and exact (every entry is a
/// quadratic in `p`).
pub fn drho_dp(kind: ChannelKind, scenario: &Scenario, p: f64) -> Result<CMatrix> {
    check_p("p", p)?;
    let t = Terms::new(scenario);
    let mut r = LabelledMatrix::new();
    match kind {
        ChannelKind::Dpc => {
            // d(1-p)² = -2(1-p), d(1+2p)² = 4(1+2p), d[(1-p)(1+2p)] = 1-4p
            let dq2 = -2.0 * (1.0 - p);
            let ds2 = 4.0 * (1.0 + 2.0 * p);
            let dmixed = 2.0 * (1.0 - 4.0 * p) / 9.0;
            r.set(1, 1, (4.0 * dq2 * t.a2 * t.n2 + ds2 * t.b2) / 9.0);
            r.set(2, 2, 4.0 * dq2 * t.a2 * t.m2 / 9.0);
            r.set(3, 3, dmixed * (t.a2 * t.n2 + t.b2));
            r.set(5, 5, dmixed * (t.a2 * t.n2 + t.b2));
            r.set(4, 4, dmixed * t.a2 * t.m2);
            r.set(6, 6, dmixed * t.a2 * t.m2);
            r.set(7, 7, (ds2 * t.a2 * t.n2 + 4.0 * dq2 * t.b2) / 9.0);
            r.set(8, 8, ds2 * t.a2 * t.m2 / 9.0);
            r.set_pair(1, 8, -8.0 * (1.0 - 4.0 * p) * t.ab * t.m / 9.0);
        }
        ChannelKind::Pfc => {
            r.set_pair(1, 8, -4.0 * (1.0 - 2.0 * p) * t.ab * t.m);
        }
        ChannelKind::Bfc | ChannelKind::Bpfc => {
            let dq2 = -2.0 * (1.0 - p);
            let dp2 = 2.0 * p;
            let dqp = 1.0 - 2.0 * p;
            r.set(1, 1, dq2 * t.a2 * t.n2 + dp2 * t.b2);
            r.set(2, 2, dq2 * t.a2 * t.m2);
            r.set(3, 3, dqp * (t.a2 * t.n2 + t.b2));
            r.set(5, 5, dqp * (t.a2 * t.n2 + t.b2));
            r.set(4, 4, dqp * t.a2 * t.m2);
            r.set(6, 6, dqp * t.a2 * t.m2);
            r.set(7, 7, dp2 * t.a2 * t.n2 + dq2 * t.b2);
            r.set(8, 8, dp2 * t.a2 * t.m2);
            r.set_pair(1, 8, dp2 * t.ab * t.m);
            r.set_pair(2, 7, dq2 * t.ab * t.m);
            let cross = dqp * t.ab * t.m;
            let cross = if kind == ChannelKind::Bpfc { -cross } else { cross };
            r.set_pair(6, 3, cross);
            r.set_pair(5, 4, cross);
        }
    }
    Ok(r.0)
}

/// Kraus route from the scenario: `apply_channel(physical_state(s), spec)`.
pub fn evolve(scenario: &Scenario, spec: ChannelSpec) -> Result<DensityMatrix> {
    apply_channel(&physical_state(scenario)?, spec)
}
