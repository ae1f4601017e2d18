//! Steady-state reflection of a single-sided quantum-dot microcavity and the
//! photon scattering coefficients derived from it.
//!
//! A charged dot in the cavity reflects an incident photon with a
//! spin-dependent amplitude: `r0` when the dot is decoupled from the cavity
//! mode (cold cavity) and `rh` when it is coupled (hot cavity). The emitter
//! coefficients `c` and `f` combine the two reflections with the
//! interaction-completeness parameter `p` and govern every photon-dot
//! scattering event in the gate circuit.

use num_complex::Complex64;
use thiserror::Error;

/// Minimum magnitude the reflection denominator may take before the
/// parameters are rejected as a degenerate pole.
const POLE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CavityError {
    #[error("invalid cavity parameter {name}: {reason} (got {value})")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("degenerate pole: reflection denominator vanishes for these parameters")]
    DegeneratePole,
}

/// Physical parameters of the photon / dot-cavity interface.
///
/// All rates and frequencies share one unit; only the detunings
/// `omega_exciton - omega_photon` and `omega_cavity - omega_photon` enter the
/// reflection formula, so any consistent choice works. The command-line layer
/// normalizes everything to units of `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Frequency of the incident photon.
    pub omega_photon: f64,
    /// Frequency of the cavity mode.
    pub omega_cavity: f64,
    /// Frequency of the trion transition.
    pub omega_exciton: f64,
    /// Dot-cavity coupling strength.
    pub g: f64,
    /// Cavity decay rate through the input/output mirror.
    pub kappa: f64,
    /// Side-leakage rate of the cavity mode.
    pub kappa_s: f64,
    /// Trion decay rate.
    pub gamma: f64,
    /// Interaction-completeness coefficient, in (0, 1].
    pub p: f64,
}

impl CavityParams {
    /// Validates and constructs the parameter set.
    ///
    /// Requires `kappa > 0`, `kappa_s >= 0`, `gamma >= 0`, `g >= 0` and
    /// `p` in `(0, 1]`; every field must be finite.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_photon: f64,
        omega_cavity: f64,
        omega_exciton: f64,
        g: f64,
        kappa: f64,
        kappa_s: f64,
        gamma: f64,
        p: f64,
    ) -> Result<Self, CavityError> {
        let finite = |name: &'static str, value: f64| {
            if value.is_finite() {
                Ok(())
            } else {
                Err(CavityError::InvalidParam {
                    name,
                    value,
                    reason: "must be finite",
                })
            }
        };
        finite("omega_photon", omega_photon)?;
        finite("omega_cavity", omega_cavity)?;
        finite("omega_exciton", omega_exciton)?;
        finite("g", g)?;
        finite("kappa", kappa)?;
        finite("kappa_s", kappa_s)?;
        finite("gamma", gamma)?;
        finite("p", p)?;
        if kappa <= 0.0 {
            return Err(CavityError::InvalidParam {
                name: "kappa",
                value: kappa,
                reason: "must be > 0",
            });
        }
        if kappa_s < 0.0 {
            return Err(CavityError::InvalidParam {
                name: "kappa_s",
                value: kappa_s,
                reason: "must be >= 0",
            });
        }
        if gamma < 0.0 {
            return Err(CavityError::InvalidParam {
                name: "gamma",
                value: gamma,
                reason: "must be >= 0",
            });
        }
        if g < 0.0 {
            return Err(CavityError::InvalidParam {
                name: "g",
                value: g,
                reason: "must be >= 0",
            });
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(CavityError::InvalidParam {
                name: "p",
                value: p,
                reason: "must lie in (0, 1]",
            });
        }
        Ok(Self {
            omega_photon,
            omega_cavity,
            omega_exciton,
            g,
            kappa,
            kappa_s,
            gamma,
            p,
        })
    }

    /// Resonant parameter set `omega = omega_cavity = omega_exciton = 0` with
    /// rates given in units of `kappa` (so `kappa = 1`).
    pub fn resonant(g_over_kappa: f64, kappa_s_over_kappa: f64, gamma_over_kappa: f64, p: f64) -> Result<Self, CavityError> {
        Self::new(0.0, 0.0, 0.0, g_over_kappa, 1.0, kappa_s_over_kappa, gamma_over_kappa, p)
    }

    /// Same parameters rescaled so that `kappa == 1`.
    ///
    /// The reflection coefficient is invariant under a common rescaling of
    /// all rates and detunings, so this is a pure normalization.
    pub fn in_kappa_units(&self) -> Self {
        let k = self.kappa;
        Self {
            omega_photon: self.omega_photon / k,
            omega_cavity: self.omega_cavity / k,
            omega_exciton: self.omega_exciton / k,
            g: self.g / k,
            kappa: 1.0,
            kappa_s: self.kappa_s / k,
            gamma: self.gamma / k,
            p: self.p,
        }
    }
}

/// Scattering coefficients of one photon-dot interaction event.
///
/// `c` multiplies the polarization-flipping (spin-flipping) component and `f`
/// the unflipped component; both follow from the cold and hot reflections and
/// the completeness parameter `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterCoeffs {
    /// Cold-cavity reflection (dot decoupled, `g = 0`).
    pub r0: Complex64,
    /// Hot-cavity reflection (dot coupled).
    pub rh: Complex64,
    /// Success coefficient, `(p/2) * (r0 - rh)`.
    pub c: Complex64,
    /// Error coefficient, `(p/2) * (r0 + rh) + sqrt(1 - p^2)`.
    pub f: Complex64,
}

impl EmitterCoeffs {
    /// Builds the coefficient tuple from reflections and completeness `p`.
    pub fn from_reflections(r0: Complex64, rh: Complex64, p: f64) -> Self {
        let half_p = 0.5 * p;
        let c = half_p * (r0 - rh);
        let f = half_p * (r0 + rh) + (1.0 - p * p).max(0.0).sqrt();
        Self { r0, rh, c, f }
    }
}

/// Steady-state reflection amplitude of the cavity for a monochromatic
/// photon, written in terms of the raw frequencies and rates.
///
/// Exposed separately from [`CavityParams`] so limiting cases (for example
/// `kappa = 0`) can be probed without satisfying the parameter invariants.
pub fn reflection(
    omega_photon: f64,
    omega_cavity: f64,
    omega_exciton: f64,
    g: f64,
    kappa: f64,
    kappa_s: f64,
    gamma: f64,
) -> Result<Complex64, CavityError> {
    let exciton_term = Complex64::new(0.5 * gamma, omega_exciton - omega_photon);
    let cavity_term = Complex64::new(0.5 * (kappa + kappa_s), omega_cavity - omega_photon);
    let denominator = exciton_term * cavity_term + Complex64::new(g * g, 0.0);
    if denominator.norm() < POLE_FLOOR {
        return Err(CavityError::DegeneratePole);
    }
    Ok(Complex64::new(1.0, 0.0) - kappa * exciton_term / denominator)
}

/// Reflection amplitude for the housed parameter set.
///
/// `coupled = false` evaluates the cold cavity (`g = 0`); `coupled = true`
/// uses `params.g`.
pub fn reflection_coefficient(params: &CavityParams, coupled: bool) -> Result<Complex64, CavityError> {
    let g = if coupled { params.g } else { 0.0 };
    reflection(
        params.omega_photon,
        params.omega_cavity,
        params.omega_exciton,
        g,
        params.kappa,
        params.kappa_s,
        params.gamma,
    )
}

/// Computes the full scattering-coefficient tuple for the parameter set.
pub fn emitter_coefficients(params: &CavityParams) -> Result<EmitterCoeffs, CavityError> {
    let r0 = reflection_coefficient(params, false)?;
    let rh = reflection_coefficient(params, true)?;
    Ok(EmitterCoeffs::from_reflections(r0, rh, params.p))
}
