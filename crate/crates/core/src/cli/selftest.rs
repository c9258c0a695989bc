//! Oracle-equivalence checks runnable from the command line.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channels::{closed_form, drho_dp, evolve, ChannelKind, ChannelSpec};
use crate::error::Result;
use crate::qslt::{closed_form_ratio, qslt_ratio};
use crate::spacetime::{kruskal_embed_and_trace, physical_state, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

const ALPHAS: [f64; 4] = [0.0, 0.25, FRAC_1_SQRT_2, 1.0];

fn embedding_check() -> Result<CheckOutcome> {
    let mut worst = 0.0_f64;
    for &alpha in &ALPHAS {
        for &t in &[0.1, 1.0, 3.0, 10.0] {
            for &omega in &[0.5, 1.0, 2.0] {
                let s = Scenario::new(alpha, omega, t)?;
                worst = worst.max(physical_state(&s)?.max_abs_diff(kruskal_embed_and_trace(&s)?.matrix()));
            }
        }
    }
    Ok(CheckOutcome {
        name: "kruskal embedding vs direct initial state",
        worst,
        tolerance: 1e-13,
    })
}

fn kraus_check() -> Result<CheckOutcome> {
    let mut worst = 0.0_f64;
    for kind in ChannelKind::ALL {
        for &alpha in &ALPHAS {
            for &t in &[0.5, 1.0, 3.0, 10.0] {
                let s = Scenario::new(alpha, 1.0, t)?;
                for i in 0..=10 {
                    let p = i as f64 / 10.0;
                    let kraus = evolve(&s, ChannelSpec::new(kind, p)?)?;
                    worst = worst.max(kraus.max_abs_diff(closed_form(kind, &s, p)?.matrix()));
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "Kraus sum vs closed-form evolved state",
        worst,
        tolerance: 1e-12,
    })
}

fn derivative_check() -> Result<CheckOutcome> {
    let h = 1e-6;
    let mut worst = 0.0_f64;
    for kind in ChannelKind::ALL {
        for &(alpha, t, p) in &[(0.25, 3.0, 0.37), (0.6, 0.7, 0.81), (0.9, 5.0, 0.12)] {
            let s = Scenario::new(alpha, 1.0, t)?;
            let plus = closed_form(kind, &s, p + h)?;
            let minus = closed_form(kind, &s, p - h)?;
            let fd = (plus.matrix() - minus.matrix()).scale(0.5 / h);
            worst = worst.max(fd.max_abs_diff(&drho_dp(kind, &s, p)?));
        }
    }
    Ok(CheckOutcome {
        name: "analytic dρ/dp vs central differences",
        worst,
        tolerance: 1e-6,
    })
}

fn ratio_check() -> Result<CheckOutcome> {
    let mut worst = 0.0_f64;
    let mut compare = |kind, s: &Scenario, p| -> Result<()> {
        if let Some(exact) = closed_form_ratio(kind, s, p)? {
            worst = worst.max((qslt_ratio(kind, s, p)?.ratio - exact).abs());
        }
        Ok(())
    };
    for i in 1..=19 {
        let p = i as f64 * 0.05;
        for &alpha in &[0.25, FRAC_1_SQRT_2] {
            for &t in &[0.5, 3.0] {
                compare(ChannelKind::Pfc, &Scenario::new(alpha, 1.0, t)?, p)?;
            }
        }
        for kind in [ChannelKind::Dpc, ChannelKind::Bfc, ChannelKind::Bpfc] {
            compare(kind, &Scenario::new(1.0, 1.0, 3.0)?, p)?;
        }
    }
    Ok(CheckOutcome {
        name: "numerical ratio vs analytic ratios",
        worst,
        tolerance: 1e-8,
    })
}

pub fn run_selftest() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        embedding_check()?,
        kraus_check()?,
        derivative_check()?,
        ratio_check()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for outcome in run_selftest().unwrap() {
            assert!(outcome.passed(), "{outcome:?}");
        }
    }
}
