//! Coincidence-probability-density (CPD) kernels.
//!
//! Every kernel is a squared modulus and hence non-negative. All of them take
//! detunings from ω_p/2 in rad/ps; the carrier is folded into the phases
//! φ = ω_p τ₀ (modified HOM) and φ_N = ω_p τ (N00N).

use num_complex::Complex;

use crate::error::{ensure_finite, Error, Result};
use crate::grid::{to_signal_idler, to_sum_difference};
use crate::model::{InterferometerConfig, SourceModel, Tpsa};
use crate::scalar::Real;

fn ensure_finite_pair<T: Real>(a: T, b: T) -> Result<()> {
    ensure_finite(a, "detuning")?;
    ensure_finite(b, "detuning")
}

/// Modified-HOM CPD evaluated as the modulus of the two interfering
/// amplitudes, in signal/idler detunings.
///
/// The common factor e^{-iω_p(τ₀+τ)/2} is dropped; what remains depends on
/// the carrier only through φ.
pub fn cpd_modified_raw<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    omega_s: T,
    omega_i: T,
) -> Result<T> {
    ensure_finite_pair(omega_s, omega_i)?;
    let (op, om) = to_sum_difference(omega_s, omega_i);
    let f = model.tpsa.amplitude(op, om);
    let tau0 = config.tau0.value();
    let delay = tau0 + config.tau.value();
    let two = T::lit(2.0);
    let one = Complex::new(T::one(), T::zero());
    let arm = |w: T| one + Complex::from_polar(T::one(), -(config.phi + two * w * tau0));
    let prop = |w: T| Complex::from_polar(T::one(), -(w * delay));
    let amp = (arm(omega_i) * prop(omega_s) - arm(omega_s) * prop(omega_i)).scale(f);
    Ok(amp.norm_sqr())
}

#[inline]
pub(crate) fn modified_unchecked<T: Real>(
    tpsa: &impl Tpsa<T>,
    tau0: T,
    phi: T,
    tau: T,
    op: T,
    om: T,
) -> T {
    if tau == T::zero() {
        return zero_delay_unchecked(tpsa, tau0, phi, op, om);
    }
    let half = T::lit(0.5);
    let c_sum = (phi + op * tau0).cos();
    let bracket = T::one() + c_sum * (om * tau0).cos()
        - c_sum * (om * tau).cos()
        - half * (om * (tau + tau0)).cos()
        - half * (om * (tau - tau0)).cos();
    // The bracket is a sum of squares; clamp round-off below zero.
    (T::lit(4.0) * tpsa.intensity(op, om) * bracket).max(T::zero())
}

/// Modified-HOM CPD in sum/difference detunings (expanded trigonometric form):
///
/// r = 4|f|²[1 + cos(φ+Ω₊τ₀)cos(Ω₋τ₀) − cos(φ+Ω₊τ₀)cos(Ω₋τ) − ½cos(Ω₋(τ+τ₀)) − ½cos(Ω₋(τ−τ₀))]
///
/// At τ = 0 the factorized form of [`cpd_modified_zero_delay`] is used.
pub fn cpd_modified<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    omega_plus: T,
    omega_minus: T,
) -> Result<T> {
    ensure_finite_pair(omega_plus, omega_minus)?;
    Ok(modified_unchecked(
        &model.tpsa,
        config.tau0.value(),
        config.phi,
        config.tau.value(),
        omega_plus,
        omega_minus,
    ))
}

#[inline]
pub(crate) fn zero_delay_unchecked<T: Real>(
    tpsa: &impl Tpsa<T>,
    tau0: T,
    phi: T,
    op: T,
    om: T,
) -> T {
    let one = T::one();
    T::lit(4.0)
        * tpsa.intensity(op, om)
        * (one - (phi + op * tau0).cos())
        * (one - (om * tau0).cos())
}

/// Factorized modified-HOM CPD at τ = 0:
/// r = 4|f|²(1 − cos(φ+Ω₊τ₀))(1 − cos(Ω₋τ₀)).
pub fn cpd_modified_zero_delay<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    omega_plus: T,
    omega_minus: T,
) -> Result<T> {
    if config.tau.value() != T::zero() {
        return Err(Error::ContractViolation(format!(
            "zero-delay kernel called with tau = {}",
            config.tau.value()
        )));
    }
    ensure_finite_pair(omega_plus, omega_minus)?;
    Ok(zero_delay_unchecked(
        &model.tpsa,
        config.tau0.value(),
        config.phi,
        omega_plus,
        omega_minus,
    ))
}

#[inline]
pub(crate) fn cw_unchecked<T: Real>(model: &SourceModel<T>, tau0: T, phi: T, tau: T, omega: T) -> T {
    let half = T::lit(0.5);
    let two_omega = T::lit(2.0) * omega;
    let c = phi.cos();
    let bracket = T::one() + c * (two_omega * tau0).cos()
        - c * (two_omega * tau).cos()
        - half * (two_omega * (tau + tau0)).cos()
        - half * (two_omega * (tau - tau0)).cos();
    let f = model.cw_amplitude(omega);
    (T::lit(4.0) * f * f * bracket).max(T::zero())
}

/// CW-pump CPD r_c(τ, Ω) with Ω₊ ≡ 0 and Ω₋ = 2Ω.
pub fn cpd_cw<T: Real>(model: &SourceModel<T>, config: &InterferometerConfig<T>, omega: T) -> Result<T> {
    if !model.is_cw() {
        return Err(Error::ContractViolation(
            "CW kernel requires a CW-pumped source".into(),
        ));
    }
    ensure_finite(omega, "detuning")?;
    Ok(cw_unchecked(
        model,
        config.tau0.value(),
        config.phi,
        config.tau.value(),
        omega,
    ))
}

#[inline]
pub(crate) fn standard_hom_unchecked<T: Real>(tpsa: &impl Tpsa<T>, tau: T, op: T, om: T) -> T {
    tpsa.intensity(op, om) * (T::one() - (om * tau).cos())
}

/// Standard HOM CPD |f|²[1 − cos(Ω₋τ)]; phase independent.
pub fn cpd_standard_hom<T: Real>(model: &SourceModel<T>, tau: T, omega_s: T, omega_i: T) -> Result<T> {
    ensure_finite(tau, "tau")?;
    ensure_finite_pair(omega_s, omega_i)?;
    let (op, om) = to_sum_difference(omega_s, omega_i);
    Ok(standard_hom_unchecked(&model.tpsa, tau, op, om))
}

#[inline]
pub(crate) fn noon_unchecked<T: Real>(tpsa: &impl Tpsa<T>, tau: T, phi_noon: T, op: T, om: T) -> T {
    tpsa.intensity(op, om) * (T::one() + (phi_noon + op * tau).cos())
}

/// N00N-state CPD |f|²[1 + cos(φ_N + Ω₊τ)] with φ_N = ω_p τ.
pub fn cpd_noon<T: Real>(
    model: &SourceModel<T>,
    tau: T,
    phi_noon: T,
    omega_s: T,
    omega_i: T,
) -> Result<T> {
    ensure_finite(tau, "tau")?;
    ensure_finite(phi_noon, "phi_noon")?;
    ensure_finite_pair(omega_s, omega_i)?;
    let (op, om) = to_sum_difference(omega_s, omega_i);
    Ok(noon_unchecked(&model.tpsa, tau, phi_noon, op, om))
}

/// Raw modified-HOM kernel re-expressed in sum/difference coordinates.
pub fn cpd_modified_raw_sd<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    omega_plus: T,
    omega_minus: T,
) -> Result<T> {
    let (ws, wi) = to_signal_idler(omega_plus, omega_minus);
    cpd_modified_raw(model, config, ws, wi)
}
