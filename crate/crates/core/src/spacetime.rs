//! Hawking-dressed three-qubit state.
//!
//! Alice and Bob stay in the asymptotically flat region; Charlie's qubit is
//! read in Kruskal modes near the horizon. Charlie's `|0⟩` splits into
//! `m|0⟩_I|0⟩_II + n|1⟩_I|1⟩_II`, and `|1⟩` becomes `|1⟩_I|0⟩_II`. The region-II
//! mode is causally disconnected and is traced out.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmatrix::{partial_trace, validate_density, CMatrix, DensityMatrix};

/// Hawking temperature `T = 1/(8πM)` of a Schwarzschild black hole of mass `M`.
pub fn hawking_temperature(mass: f64) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::OutOfDomain {
            field: "mass",
            value: mass,
            domain: "(0, inf)",
        });
    }
    Ok(1.0 / (8.0 * PI * mass))
}

/// Amplitudes of the Kruskal vacuum on the `|00⟩` and `|11⟩` region I/II pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalCoeffs {
    pub m: f64,
    pub n: f64,
}

impl KruskalCoeffs {
    /// `m²`, written so it stays accurate when `ω/T` is large.
    pub fn m_sq(&self) -> f64 {
        self.m * self.m
    }

    pub fn n_sq(&self) -> f64 {
        self.n * self.n
    }
}

/// `m = (e^{-ω/T} + 1)^{-1/2}`, `n = (e^{ω/T} + 1)^{-1/2}`. `T = 0` is the
/// finite zero-temperature limit `(1, 0)`.
pub fn kruskal_coeffs(omega: f64, temperature: f64) -> Result<KruskalCoeffs> {
    check_omega(omega)?;
    check_temperature(temperature)?;
    if temperature == 0.0 {
        return Ok(KruskalCoeffs { m: 1.0, n: 0.0 });
    }
    let x = omega / temperature;
    Ok(KruskalCoeffs {
        m: ((-x).exp() + 1.0).powf(-0.5),
        n: (x.exp() + 1.0).powf(-0.5),
    })
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            field: "omega",
            value: omega,
            domain: "(0, inf)",
        })
    }
}

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature >= 0.0 && temperature.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            field: "temperature",
            value: temperature,
            domain: "[0, inf)",
        })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            field: "alpha",
            value: alpha,
            domain: "[0, 1]",
        })
    }
}

/// Physical parameters: GHZ amplitude `α` of `α|000⟩ + √(1−α²)|111⟩`, mode
/// frequency `ω` and Hawking temperature `T` in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    alpha: f64,
    omega: f64,
    temperature: f64,
    mass: Option<f64>,
}

impl Scenario {
    pub fn new(alpha: f64, omega: f64, temperature: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_omega(omega)?;
        check_temperature(temperature)?;
        Ok(Self {
            alpha,
            omega,
            temperature,
            mass: None,
        })
    }

    /// Same as [`Scenario::new`] with the temperature derived from a black-hole mass.
    pub fn from_mass(alpha: f64, omega: f64, mass: f64) -> Result<Self> {
        let temperature = hawking_temperature(mass)?;
        let mut s = Self::new(alpha, omega, temperature)?;
        s.mass = Some(mass);
        Ok(s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `β = √(1 − α²)`.
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).max(0.0).sqrt()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mass(&self) -> Option<f64> {
        self.mass
    }

    /// `ω/T`, the only combination of `ω` and `T` the state depends on.
    pub fn omega_over_t(&self) -> f64 {
        if self.temperature == 0.0 {
            f64::INFINITY
        } else {
            self.omega / self.temperature
        }
    }

    pub fn kruskal(&self) -> KruskalCoeffs {
        kruskal_coeffs(self.omega, self.temperature).expect("scenario fields are validated")
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, ..*self })
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self {
            temperature,
            mass: None,
            ..*self
        })
    }
}

/// The physically accessible state `ρ_{ABC_I}`, written down directly.
pub fn physical_state(scenario: &Scenario) -> Result<DensityMatrix> {
    let (a, b) = (scenario.alpha(), scenario.beta());
    let k = scenario.kruskal();
    let mut rho = CMatrix::zeros(8)?;
    rho[(0, 0)] = Complex64::new(a * a * k.m_sq(), 0.0);
    rho[(1, 1)] = Complex64::new(a * a * k.n_sq(), 0.0);
    rho[(7, 7)] = Complex64::new(b * b, 0.0);
    let coherence = Complex64::new(a * k.m * b, 0.0);
    rho[(0, 7)] = coherence;
    rho[(7, 0)] = coherence;
    Ok(validate_density(rho)?)
}

/// Builds the four-mode pure state with Charlie's qubit expanded in region
/// I/II modes, then traces out region II (appended as the last qubit).
pub fn kruskal_embed_and_trace(scenario: &Scenario) -> Result<DensityMatrix> {
    let (a, b) = (scenario.alpha(), scenario.beta());
    let k = scenario.kruskal();
    // Index of |A B C_I C_II⟩.
    let idx = |ab: usize, c1: usize, c2: usize| (ab << 2) | (c1 << 1) | c2;
    let mut psi = vec![Complex64::new(0.0, 0.0); 16];
    // α|00⟩|0⟩_K  →  α|00⟩(m|0⟩|0⟩ + n|1⟩|1⟩)
    psi[idx(0b00, 0, 0)] += a * k.m;
    psi[idx(0b00, 1, 1)] += a * k.n;
    // β|11⟩|1⟩_K  →  β|11⟩|1⟩|0⟩
    psi[idx(0b11, 1, 0)] += b;
    let projector = CMatrix::outer(&psi)?;
    let reduced = partial_trace(&projector, 3)?;
    Ok(validate_density(reduced)?)
}
