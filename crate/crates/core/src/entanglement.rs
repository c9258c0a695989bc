//! GM concurrence of the initial state and the concurrence that minimizes
//! the speed-limit ratio.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{check_p, ChannelKind};
use crate::error::{Error, Result};
use crate::minimize::golden_section;
use crate::qslt::{qslt_ratio, QsltResult};
use crate::spacetime::{kruskal_coeffs, Scenario};

/// Number of uniform grid points in the coarse concurrence scan.
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Final bracket width of the golden-section refinement.
pub const DEFAULT_REFINEMENT_WIDTH: f64 = 1e-6;

/// Which root of `C(α) = c` to take. `C(α)` is symmetric under `α ↔ √(1−α²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `α ∈ [0, 1/√2]`
    #[default]
    Lower,
    /// `α ∈ [1/√2, 1]`
    Upper,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        })
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lower" => Ok(Branch::Lower),
            "upper" => Ok(Branch::Upper),
            _ => Err(format!("unknown branch '{s}' (expected lower or upper)")),
        }
    }
}

/// Concurrence as a function of `α` at fixed `(ω, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceMap {
    pub omega: f64,
    pub temperature: f64,
    pub branch: Branch,
    c_max: f64,
}

impl ConcurrenceMap {
    pub fn new(omega: f64, temperature: f64, branch: Branch) -> Result<Self> {
        let c_max = kruskal_coeffs(omega, temperature)?.m;
        Ok(Self {
            omega,
            temperature,
            branch,
            c_max,
        })
    }

    /// Largest attainable concurrence, `(1 + e^{−ω/T})^{−1/2}`, reached at `α = 1/√2`.
    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn concurrence(&self, alpha: f64) -> f64 {
        2.0 * alpha * (1.0 - alpha * alpha).max(0.0).sqrt() * self.c_max
    }

    pub fn alpha(&self, c: f64) -> Result<f64> {
        alpha_from_concurrence(c, self.omega, self.temperature, self.branch)
    }

    pub fn scenario(&self, c: f64) -> Result<Scenario> {
        Scenario::new(self.alpha(c)?, self.omega, self.temperature)
    }
}

/// `C = 2α√(1−α²)·(1 + e^{−ω/T})^{−1/2}`.
pub fn gm_concurrence(scenario: &Scenario) -> f64 {
    2.0 * scenario.alpha() * scenario.beta() * scenario.kruskal().m
}

/// Solves `C(α) = c` on the requested branch.
pub fn alpha_from_concurrence(c: f64, omega: f64, temperature: f64, branch: Branch) -> Result<f64> {
    let c_max = kruskal_coeffs(omega, temperature)?.m;
    if !(c >= 0.0) {
        return Err(Error::OutOfDomain {
            field: "concurrence",
            value: c,
            domain: "[0, c_max]",
        });
    }
    if c > c_max * (1.0 + 1e-12) {
        return Err(Error::ConcurrenceTooLarge { requested: c, c_max });
    }
    let x = (c / c_max).min(1.0);
    let root = (1.0 - x * x).sqrt();
    let alpha_sq = match branch {
        // (1 − √(1−x²))/2 without the cancellation
        Branch::Lower => x * x / (2.0 * (1.0 + root)),
        Branch::Upper => 0.5 * (1.0 + root),
    };
    Ok(alpha_sq.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrencePoint {
    pub concurrence: f64,
    pub alpha: f64,
    pub result: QsltResult,
}

/// Ratio at each concurrence in `c_grid`. Points are evaluated in parallel;
/// output order follows `c_grid`.
pub fn ratio_vs_concurrence(
    kind: ChannelKind,
    omega: f64,
    temperature: f64,
    p_tau: f64,
    c_grid: &[f64],
    branch: Branch,
) -> Result<Vec<ConcurrencePoint>> {
    check_p("p_tau", p_tau)?;
    let map = ConcurrenceMap::new(omega, temperature, branch)?;
    c_grid
        .par_iter()
        .map(|&c| {
            let scenario = map.scenario(c)?;
            Ok(ConcurrencePoint {
                concurrence: c,
                alpha: scenario.alpha(),
                result: qslt_ratio(kind, &scenario, p_tau)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Interior,
    AtZero,
    AtCmax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalCResult {
    pub c_op: f64,
    pub ratio_min: f64,
    pub boundary: Boundary,
    pub c_max: f64,
    pub grid_resolution: usize,
    pub refinement_tolerance: f64,
    /// The ratio does not depend on `C` (phase flip); `c_op` is then
    /// reported as `c_max` and carries no information.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub branch: Branch,
    pub grid_points: usize,
    pub refinement_width: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            branch: Branch::Lower,
            grid_points: DEFAULT_GRID_POINTS,
            refinement_width: DEFAULT_REFINEMENT_WIDTH,
        }
    }
}

/// Optimal initial concurrence with the default scan (lower branch, 2001
/// points, refinement to 1e-6).
pub fn optimal_concurrence(
    kind: ChannelKind,
    omega: f64,
    temperature: f64,
    p_tau: f64,
) -> Result<OptimalCResult> {
    optimal_concurrence_with(kind, omega, temperature, p_tau, OptimizeOptions::default())
}

pub fn optimal_concurrence_with(
    kind: ChannelKind,
    omega: f64,
    temperature: f64,
    p_tau: f64,
    options: OptimizeOptions,
) -> Result<OptimalCResult> {
    check_p("p_tau", p_tau)?;
    let map = ConcurrenceMap::new(omega, temperature, options.branch)?;
    let c_max = map.c_max();
    let ratio_at = |c: f64| -> Result<f64> { Ok(qslt_ratio(kind, &map.scenario(c)?, p_tau)?.ratio) };

    if kind == ChannelKind::Pfc {
        return Ok(OptimalCResult {
            c_op: c_max,
            ratio_min: ratio_at(c_max)?,
            boundary: Boundary::AtCmax,
            c_max,
            grid_resolution: 0,
            refinement_tolerance: options.refinement_width,
            degenerate: true,
        });
    }

    let n = options.grid_points.max(3);
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                c_max
            } else {
                c_max * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let ratios = grid
        .par_iter()
        .map(|&c| ratio_at(c))
        .collect::<Result<Vec<f64>>>()?;

    // First minimum wins, so ties go to the smaller concurrence.
    let best = ratios
        .iter()
        .enumerate()
        .fold(0, |best, (i, &r)| if r < ratios[best] { i } else { best });

    let (c_op, ratio_min, boundary) = if best == 0 {
        (0.0, ratios[0], Boundary::AtZero)
    } else if best == n - 1 {
        (c_max, ratios[n - 1], Boundary::AtCmax)
    } else {
        let (lo, hi) = (grid[best - 1], grid[best + 1]);
        let mut failure = None;
        let refined = golden_section(
            |c| match ratio_at(c) {
                Ok(r) => r,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            options.refinement_width,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        if refined.value <= ratios[best] {
            (refined.x, refined.value, Boundary::Interior)
        } else {
            (grid[best], ratios[best], Boundary::Interior)
        }
    };

    Ok(OptimalCResult {
        c_op,
        ratio_min,
        boundary,
        c_max,
        grid_resolution: n,
        refinement_tolerance: options.refinement_width,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn concurrence_values() {
        for &a in &[0.0, 1.0] {
            assert_eq!(gm_concurrence(&Scenario::new(a, 1.0, 3.0).unwrap()), 0.0);
        }
        let c = gm_concurrence(&Scenario::new(FRAC_1_SQRT_2, 1.0, 3.0).unwrap());
        let c_max = (1.0 + (-1.0f64 / 3.0).exp()).powf(-0.5);
        assert!((c - c_max).abs() < 1e-15);
        assert!((c - 0.76).abs() < 0.005);

        let c = gm_concurrence(&Scenario::new(0.25, 1.0, 3.0).unwrap());
        assert!((c - 2.0 * 0.25 * 15f64.sqrt() / 4.0 * c_max).abs() < 1e-15);
        assert!((c - 0.3694).abs() < 5e-4);
    }

    #[test]
    fn inversion_edge_cases() {
        assert_eq!(alpha_from_concurrence(0.0, 1.0, 3.0, Branch::Lower).unwrap(), 0.0);
        assert_eq!(alpha_from_concurrence(0.0, 1.0, 3.0, Branch::Upper).unwrap(), 1.0);
        let c_max = ConcurrenceMap::new(1.0, 3.0, Branch::Lower).unwrap().c_max();
        for branch in [Branch::Lower, Branch::Upper] {
            let a = alpha_from_concurrence(c_max, 1.0, 3.0, branch).unwrap();
            assert!((a - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(matches!(
            alpha_from_concurrence(0.9, 1.0, 3.0, Branch::Lower),
            Err(Error::ConcurrenceTooLarge { .. })
        ));
    }

    #[test]
    fn inversion_recovers_reference_alpha() {
        let c = gm_concurrence(&Scenario::new(0.25, 1.0, 3.0).unwrap());
        let a = alpha_from_concurrence(c, 1.0, 3.0, Branch::Lower).unwrap();
        assert!((a - 0.25).abs() < 1e-14);
        let a = alpha_from_concurrence(0.3694, 1.0, 3.0, Branch::Lower).unwrap();
        assert!((a - 0.25).abs() < 5e-4);
    }

    #[test]
    fn c_max_falls_with_temperature() {
        let values: Vec<f64> = [0.1, 0.5, 1.0, 3.0, 10.0]
            .iter()
            .map(|&t| ConcurrenceMap::new(1.0, t, Branch::Lower).unwrap().c_max())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
        assert!(values.iter().all(|&c| c > FRAC_1_SQRT_2 && c <= 1.0));
    }

    #[test]
    fn pfc_optimum_is_degenerate() {
        let r = optimal_concurrence(ChannelKind::Pfc, 1.0, 3.0, 0.3).unwrap();
        assert!(r.degenerate);
        let x = 2.0 * 0.3 * 0.7;
        assert!((r.ratio_min - x / (1.0 - x)).abs() < 1e-10);
    }

    #[test]
    fn coarse_scan_finds_interior_bfc_optimum() {
        let options = OptimizeOptions {
            grid_points: 101,
            ..OptimizeOptions::default()
        };
        let r = optimal_concurrence_with(ChannelKind::Bfc, 1.0, 3.0, 0.65, options).unwrap();
        assert_eq!(r.boundary, Boundary::Interior);
        assert!(r.c_op > 0.0 && r.c_op < r.c_max);
    }
}
