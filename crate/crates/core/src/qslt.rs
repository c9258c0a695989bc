//! Euclidean quantum speed limit ratio `τ_QSL/τ`.
//!
//! Evolution is parametrized by the decoherence parameter, running from
//! `p = 1` (no noise) down to `p = p_τ`. The ratio is the Hilbert–Schmidt
//! distance between the endpoints divided by the Hilbert–Schmidt length of the
//! path; both are geometric, so the ratio does not depend on how `p` maps to
//! physical time.

use serde::{Deserialize, Serialize};

use crate::channels::{check_p, closed_form, drho_dp, ChannelKind};
use crate::error::{Error, Result};
use crate::qmatrix::hs_norm;
use crate::quadrature::{integrate_piecewise, Integral, DEFAULT_TOLERANCE};
use crate::spacetime::{physical_state, Scenario};

/// Path lengths at or below this are treated as frozen dynamics.
pub const FROZEN_PATH_LENGTH: f64 = 1e-14;

/// `|1 − 2p|`-type factors put a derivative kink here.
pub const KINK: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QsltResult {
    /// `‖ρ(1) − ρ(p_τ)‖_hs`
    pub distance: f64,
    /// `∫_{p_τ}^1 ‖dρ/dp‖_hs dp`
    pub path_length: f64,
    pub ratio: f64,
    /// The state never moves; `ratio` is reported as 1.
    pub frozen: bool,
    pub quadrature_error_estimate: f64,
}

impl QsltResult {
    fn assemble(distance: f64, integral: Integral) -> Self {
        let path_length = integral.value;
        let frozen = path_length <= FROZEN_PATH_LENGTH;
        Self {
            distance,
            path_length,
            ratio: if frozen { 1.0 } else { distance / path_length },
            frozen,
            quadrature_error_estimate: integral.error_estimate,
        }
    }
}

/// `‖dρ/dp‖_hs` at `p`.
pub fn hs_speed(kind: ChannelKind, scenario: &Scenario, p: f64) -> Result<f64> {
    Ok(hs_norm(&drho_dp(kind, scenario, p)?))
}

/// `∫_{p_τ}^1 ‖dρ/dp‖_hs dp` with a forced node at `p = 1/2`.
pub fn integrate_speed(kind: ChannelKind, scenario: &Scenario, p_tau: f64) -> Result<Integral> {
    check_p("p_tau", p_tau)?;
    // drho_dp only fails on p outside [0, 1], which the quadrature never visits.
    let speed = |p: f64| hs_speed(kind, scenario, p.clamp(0.0, 1.0)).unwrap_or(f64::NAN);
    integrate_piecewise(speed, p_tau, 1.0, &[KINK], DEFAULT_TOLERANCE)
}

pub fn qslt_ratio(kind: ChannelKind, scenario: &Scenario, p_tau: f64) -> Result<QsltResult> {
    check_p("p_tau", p_tau)?;
    let initial = physical_state(scenario)?;
    let target = closed_form(kind, scenario, p_tau)?;
    let distance = hs_norm(&(initial.matrix() - target.matrix()));
    let integral = integrate_speed(kind, scenario, p_tau)?;
    Ok(QsltResult::assemble(distance, integral))
}

/// `∫√(a x² + b x + c) dx` for `a > 0` and a quadratic with no real roots.
fn sqrt_quadratic_antiderivative(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let shift = b / (2.0 * a);
    let k = c / a - shift * shift;
    debug_assert!(k > 0.0);
    let u = x + shift;
    0.5 * a.sqrt() * (u * (u * u + k).sqrt() + k * (u / k.sqrt()).asinh())
}

fn definite_sqrt_quadratic(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> f64 {
    sqrt_quadratic_antiderivative(a, b, c, hi) - sqrt_quadratic_antiderivative(a, b, c, lo)
}

/// Analytic ratio where one is known: phase flip for any `α`, and the
/// depolarizing, bit-flip and bit-phase-flip channels for the product input
/// `α = 1`. Returns `None` otherwise.
pub fn closed_form_ratio(kind: ChannelKind, scenario: &Scenario, p_tau: f64) -> Result<Option<f64>> {
    check_p("p_tau", p_tau)?;
    let alpha = scenario.alpha();
    let p = p_tau;
    match kind {
        ChannelKind::Pfc => {
            if alpha * scenario.beta() == 0.0 {
                return Ok(Some(1.0));
            }
            if p >= 0.5 {
                Ok(Some(1.0))
            } else {
                let x = 2.0 * p * (1.0 - p);
                Ok(Some(x / (1.0 - x)))
            }
        }
        _ if alpha != 1.0 => Ok(None),
        _ if p == 1.0 => Ok(Some(1.0)),
        ChannelKind::Dpc => {
            let numerator = (1.0 - p) * (11.0 + 8.0 * p * (1.0 + p)).sqrt();
            // 11 + 16p(−1 + 2p) = 32p² − 16p + 11
            let denominator = definite_sqrt_quadratic(32.0, -16.0, 11.0, p, 1.0);
            Ok(Some(numerator / denominator))
        }
        ChannelKind::Bfc | ChannelKind::Bpfc => {
            let numerator = (1.0 - p) * (1.0 + 2.0 * p * p).sqrt();
            // 3 + 8p(−1 + p) = 8p² − 8p + 3
            let denominator = definite_sqrt_quadratic(8.0, -8.0, 3.0, p, 1.0);
            Ok(Some(numerator / denominator))
        }
    }
}

/// A smooth, strictly increasing reparametrization `s = φ(p)` of `[0, 1]`.
pub trait MonotoneMap {
    fn apply(&self, p: f64) -> f64;
    fn derivative(&self, p: f64) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMap;

impl MonotoneMap for IdentityMap {
    fn apply(&self, p: f64) -> f64 {
        p
    }
    fn derivative(&self, _p: f64) -> f64 {
        1.0
    }
}

/// `φ(p) = p²`
#[derive(Debug, Clone, Copy, Default)]
pub struct SquareMap;

impl MonotoneMap for SquareMap {
    fn apply(&self, p: f64) -> f64 {
        p * p
    }
    fn derivative(&self, p: f64) -> f64 {
        2.0 * p
    }
}

/// `φ(p) = (e^p − 1)/(e − 1)`
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialMap;

impl MonotoneMap for ExponentialMap {
    fn apply(&self, p: f64) -> f64 {
        p.exp_m1() / 1f64.exp_m1()
    }
    fn derivative(&self, p: f64) -> f64 {
        p.exp() / 1f64.exp_m1()
    }
}

/// Any pair of closures `(φ, φ')`.
pub struct FnMap<F, G>(pub F, pub G);

impl<F: Fn(f64) -> f64, G: Fn(f64) -> f64> MonotoneMap for FnMap<F, G> {
    fn apply(&self, p: f64) -> f64 {
        (self.0)(p)
    }
    fn derivative(&self, p: f64) -> f64 {
        (self.1)(p)
    }
}

const MONOTONE_SAMPLES: usize = 1000;

fn invert(map: &dyn MonotoneMap, s: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if map.apply(mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Recomputes the ratio with the path length integrated in `s = φ(p)`, using
/// the chain-rule speed `‖dρ/ds‖ = ‖dρ/dp‖ / φ'(p)`.
pub fn reparametrization_check(
    kind: ChannelKind,
    scenario: &Scenario,
    p_tau: f64,
    map: &dyn MonotoneMap,
) -> Result<f64> {
    check_p("p_tau", p_tau)?;
    let mut prev = map.apply(p_tau);
    for i in 0..=MONOTONE_SAMPLES {
        let p = p_tau + (1.0 - p_tau) * i as f64 / MONOTONE_SAMPLES as f64;
        let s = map.apply(p);
        if !(map.derivative(p) > 0.0) || (i > 0 && !(s > prev)) {
            return Err(Error::NonMonotoneMap(p));
        }
        prev = s;
    }

    let initial = physical_state(scenario)?;
    let target = closed_form(kind, scenario, p_tau)?;
    let distance = hs_norm(&(initial.matrix() - target.matrix()));

    let (s_lo, s_hi) = (map.apply(p_tau), map.apply(1.0));
    let speed = |s: f64| {
        let p = invert(map, s, p_tau, 1.0);
        hs_speed(kind, scenario, p).unwrap_or(f64::NAN) / map.derivative(p)
    };
    let integral = integrate_piecewise(speed, s_lo, s_hi, &[map.apply(KINK)], DEFAULT_TOLERANCE)?;
    Ok(QsltResult::assemble(distance, integral).ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

/// Classifies a sequence by the signs of its successive differences.
pub fn classify_trend(values: &[f64]) -> Trend {
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d > 0.0) {
        Trend::Increasing
    } else if diffs.iter().all(|&d| d < 0.0) {
        Trend::Decreasing
    } else if diffs.iter().all(|&d| d == 0.0) {
        Trend::Constant
    } else {
        Trend::Mixed
    }
}

/// Ratio against temperature at fixed `(α, ω, p_τ)`, with its trend.
pub fn temperature_trend(
    kind: ChannelKind,
    alpha: f64,
    omega: f64,
    p_tau: f64,
    temperatures: &[f64],
) -> Result<(Trend, Vec<f64>)> {
    let ratios = temperatures
        .iter()
        .map(|&t| Ok(qslt_ratio(kind, &Scenario::new(alpha, omega, t)?, p_tau)?.ratio))
        .collect::<Result<Vec<f64>>>()?;
    Ok((classify_trend(&ratios), ratios))
}

/// Temperature trend for each `p_τ`; locates the values where monotonicity in
/// `T` reverses.
pub fn scan_temperature_trends(
    kind: ChannelKind,
    alpha: f64,
    omega: f64,
    p_taus: &[f64],
    temperatures: &[f64],
) -> Result<Vec<(f64, Trend)>> {
    p_taus
        .iter()
        .map(|&p| Ok((p, temperature_trend(kind, alpha, omega, p, temperatures)?.0)))
        .collect()
}
