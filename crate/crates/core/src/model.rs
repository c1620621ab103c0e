//! Physical quantities and two-photon spectral amplitude (TPSA) models.
//!
//! Unit convention: every linewidth σ and detuning Ω is an *angular* frequency
//! in rad/ps and every delay is in ps, so products such as σ·τ are
//! dimensionless without 2π factors. A linewidth quoted as "5 THz" is entered
//! as `5.0`.
//!
//! The pump carrier ω_p never appears on its own. Only the interferometer phase
//! φ = ω_p τ₀ enters the formulas.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::scalar::Real;

/// Angular frequency detuning from ω_p/2, rad/ps.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Detuning<T>(T);

impl<T: Real> Detuning<T> {
    pub fn new(value: T) -> Result<Self> {
        ensure_finite(value, "detuning")?;
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// Time delay, ps.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Delay<T>(T);

impl<T: Real> Delay<T> {
    pub fn new(value: T) -> Result<Self> {
        ensure_finite(value, "delay")?;
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

impl<T: fmt::Display> fmt::Display for Delay<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ps", self.0)
    }
}

/// An exchange-symmetric, real, non-negative two-photon spectral amplitude
/// expressed in sum/difference detunings.
///
/// Implementations must satisfy `amplitude(p, m) == amplitude(p, -m)`.
pub trait Tpsa<T: Real>: fmt::Debug + Send + Sync {
    fn amplitude(&self, omega_plus: T, omega_minus: T) -> T;

    /// Joint spectral intensity |f|².
    #[inline]
    fn intensity(&self, omega_plus: T, omega_minus: T) -> T {
        let a = self.amplitude(omega_plus, omega_minus);
        a * a
    }

    /// Characteristic width of the intensity along Ω₊, used to size grids.
    fn sum_width(&self) -> T;

    /// Characteristic width of the intensity along Ω₋, used to size grids.
    fn difference_width(&self) -> T;
}

/// Product of two Gaussians in the sum and difference detunings:
/// `f = exp(-Ω₊²/4σ₊²) · exp(-Ω₋²/4σ₋²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTpsa<T> {
    sigma_plus: T,
    sigma_minus: T,
}

impl<T: Real> GaussianTpsa<T> {
    pub fn new(sigma_plus: T, sigma_minus: T) -> Result<Self> {
        ensure_finite(sigma_plus, "sigma_plus")?;
        ensure_finite(sigma_minus, "sigma_minus")?;
        if sigma_plus <= T::zero() || sigma_minus <= T::zero() {
            return Err(Error::InvalidInput(
                "linewidths sigma_plus and sigma_minus must be positive".into(),
            ));
        }
        Ok(Self {
            sigma_plus,
            sigma_minus,
        })
    }

    #[inline]
    pub fn sigma_plus(&self) -> T {
        self.sigma_plus
    }

    #[inline]
    pub fn sigma_minus(&self) -> T {
        self.sigma_minus
    }

    /// Marginal intensity along Ω₊, exp(-Ω₊²/2σ₊²).
    #[inline]
    pub fn sum_intensity(&self, omega_plus: T) -> T {
        let x = omega_plus / self.sigma_plus;
        (-T::lit(0.5) * x * x).exp()
    }

    /// Marginal intensity along Ω₋, exp(-Ω₋²/2σ₋²).
    #[inline]
    pub fn difference_intensity(&self, omega_minus: T) -> T {
        let x = omega_minus / self.sigma_minus;
        (-T::lit(0.5) * x * x).exp()
    }

    /// ∫∫ |f|² dΩ₊ dΩ₋ = 2π σ₊ σ₋.
    pub fn intensity_integral(&self) -> T {
        T::TAU() * self.sigma_plus * self.sigma_minus
    }
}

impl<T: Real> Tpsa<T> for GaussianTpsa<T> {
    #[inline]
    fn amplitude(&self, omega_plus: T, omega_minus: T) -> T {
        let quarter = T::lit(0.25);
        let p = omega_plus / self.sigma_plus;
        let m = omega_minus / self.sigma_minus;
        (-quarter * (p * p + m * m)).exp()
    }

    #[inline]
    fn intensity(&self, omega_plus: T, omega_minus: T) -> T {
        let half = T::lit(0.5);
        let p = omega_plus / self.sigma_plus;
        let m = omega_minus / self.sigma_minus;
        (-half * (p * p + m * m)).exp()
    }

    fn sum_width(&self) -> T {
        self.sigma_plus
    }

    fn difference_width(&self) -> T {
        self.sigma_minus
    }
}

/// Pump regime of the down-conversion source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pump {
    /// Monochromatic pump: Ω₊ ≡ 0 and Ω₋ = 2Ω.
    Cw,
    Pulsed,
}

/// Frequency correlation of the photon pair implied by σ₊ versus σ₋.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correlation {
    /// σ₊ < σ₋
    AntiCorrelated,
    /// σ₊ > σ₋
    Correlated,
    /// σ₊ = σ₋
    Uncorrelated,
}

/// Photon-pair source: a TPSA together with its pump regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel<T> {
    pub tpsa: GaussianTpsa<T>,
    pub pump: Pump,
}

impl<T: Real> SourceModel<T> {
    pub fn pulsed(sigma_plus: T, sigma_minus: T) -> Result<Self> {
        Ok(Self {
            tpsa: GaussianTpsa::new(sigma_plus, sigma_minus)?,
            pump: Pump::Pulsed,
        })
    }

    /// CW source. The sum-frequency linewidth plays no role and is set equal to
    /// `sigma_minus`.
    pub fn cw(sigma_minus: T) -> Result<Self> {
        Ok(Self {
            tpsa: GaussianTpsa::new(sigma_minus, sigma_minus)?,
            pump: Pump::Cw,
        })
    }

    pub fn sigma_plus(&self) -> T {
        self.tpsa.sigma_plus()
    }

    pub fn sigma_minus(&self) -> T {
        self.tpsa.sigma_minus()
    }

    pub fn is_cw(&self) -> bool {
        self.pump == Pump::Cw
    }

    pub fn correlation(&self) -> Correlation {
        if self.is_cw() {
            return Correlation::AntiCorrelated;
        }
        let (p, m) = (self.sigma_plus(), self.sigma_minus());
        if p < m {
            Correlation::AntiCorrelated
        } else if p > m {
            Correlation::Correlated
        } else {
            Correlation::Uncorrelated
        }
    }

    /// Single-detuning amplitude f(Ω) of the CW source, i.e. f(Ω₊ = 0, Ω₋ = 2Ω).
    #[inline]
    pub fn cw_amplitude(&self, omega: T) -> T {
        self.tpsa.amplitude(T::zero(), T::lit(2.0) * omega)
    }
}

/// Evaluates the Gaussian TPSA at (Ω₊, Ω₋); the result lies in (0, 1].
pub fn tpsa_eval<T: Real>(
    model: &GaussianTpsa<T>,
    omega_plus: Detuning<T>,
    omega_minus: Detuning<T>,
) -> T {
    model.amplitude(omega_plus.value(), omega_minus.value())
}

/// Biphoton coherence time 1/σ₋.
pub fn coherence_time<T: Real>(model: &SourceModel<T>) -> Delay<T> {
    Delay(model.sigma_minus().recip())
}

/// Delays and phase defining the modified HOM interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig<T> {
    /// Mach-Zehnder imbalance ΔL/c.
    pub tau0: Delay<T>,
    /// Interferometer phase φ = ω_p τ₀ as supplied.
    pub phi: T,
    /// Scan position 2x/c of the final beamsplitter.
    pub tau: Delay<T>,
}

impl<T: Real> InterferometerConfig<T> {
    pub fn new(tau0: T, phi: T, tau: T) -> Result<Self> {
        ensure_finite(phi, "phi")?;
        let tau0 = Delay::new(tau0)?;
        if tau0.value() < T::zero() {
            return Err(Error::InvalidInput("tau0 must be non-negative".into()));
        }
        Ok(Self {
            tau0,
            phi,
            tau: Delay::new(tau)?,
        })
    }

    pub fn with_tau(mut self, tau: T) -> Result<Self> {
        self.tau = Delay::new(tau)?;
        Ok(self)
    }

    /// φ reduced to [0, 2π).
    pub fn phi_reduced(&self) -> T {
        let r = self.phi % T::TAU();
        if r < T::zero() {
            r + T::TAU()
        } else {
            r
        }
    }
}

/// Logs a warning when τ₀ does not exceed the coherence time, where single
/// photons start to interfere with themselves.
pub(crate) fn warn_if_short_imbalance<T: Real>(model: &SourceModel<T>, tau0: T) {
    let tcoh = coherence_time(model).value();
    if tau0 <= tcoh {
        log::warn!(
            "tau0 = {tau0} ps does not exceed the biphoton coherence time {tcoh} ps; \
             the interferogram approaches the standard HOM limit"
        );
    }
}
