//! Temporal coincidence-rate curves R(τ).
//!
//! Two independent routes are provided: closed-form expressions in terms of
//! the normalized transforms g±, and trapezoid quadrature of the CPD kernels
//! normalized by the analytic baseline integral 4∫∫|f|² dΩ₊dΩ₋ (8πσ₊σ₋ for
//! the Gaussian source).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fourier::g_gaussian;
use crate::grid::{Axis, Grid1D};
use crate::kernels::{cw_unchecked, modified_unchecked};
use crate::model::{warn_if_short_imbalance, InterferometerConfig, SourceModel};
use crate::scalar::Real;

/// How a rate curve is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// Normalized coincidence rate sampled over a delay axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interferogram<T> {
    pub delays: Grid1D<T>,
    pub values: Vec<T>,
    /// Level approached for |τ| → ∞, 1 + a.
    pub baseline: T,
    pub model: SourceModel<T>,
    pub config: InterferometerConfig<T>,
    pub method: Method,
}

impl<T: Real> Interferogram<T> {
    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Value at the delay node nearest to `tau`.
    pub fn at(&self, tau: T) -> T {
        self.values[self.delays.nearest(tau)]
    }
}

/// Visibility parameters of the pulsed-pump interferogram:
/// a = cosφ·g₊(τ₀)g₋(τ₀) and b = cosφ·g₊(τ₀).
pub fn visibility_params<T: Real>(model: &SourceModel<T>, tau0: T, phi: T) -> (T, T) {
    let b = phi.cos() * g_gaussian(model.sigma_plus(), tau0);
    let a = b * g_gaussian(model.sigma_minus(), tau0);
    (a, b)
}

#[inline]
fn pulsed_unchecked<T: Real>(model: &SourceModel<T>, tau0: T, phi: T, tau: T) -> T {
    let half = T::lit(0.5);
    let gm = |t: T| g_gaussian(model.sigma_minus(), t);
    let (a, b) = visibility_params(model, tau0, phi);
    clamp(T::one() + a - b * gm(tau) - half * gm(tau + tau0) - half * gm(tau - tau0))
}

/// Round-off can push an exact zero of the rate slightly negative.
#[inline]
fn clamp<T: Real>(r: T) -> T {
    r.max(T::zero()) + T::zero()
}

#[inline]
fn cw_rate_unchecked<T: Real>(model: &SourceModel<T>, tau0: T, phi: T, tau: T) -> T {
    // |f(Ω)|² = exp(-2Ω²/σ₋²) has linewidth σ₋/2 in Ω
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let g = |t: T| g_gaussian(half * model.sigma_minus(), t);
    clamp(T::one() - phi.cos() * g(two * tau) - half * g(two * (tau + tau0)) - half * g(two * (tau - tau0)))
}

fn check_args<T: Real>(tau0: T, phi: T, tau: T) -> Result<()> {
    ensure_finite(tau0, "tau0")?;
    ensure_finite(phi, "phi")?;
    ensure_finite(tau, "tau")?;
    if tau0 < T::zero() {
        return Err(Error::InvalidInput("tau0 must be non-negative".into()));
    }
    Ok(())
}

/// Pulsed-pump normalized rate
/// R_N(τ) = 1 + a − b·g₋(τ) − ½g₋(τ+τ₀) − ½g₋(τ−τ₀).
pub fn rate_modified_pulsed<T: Real>(model: &SourceModel<T>, tau0: T, phi: T, tau: T) -> Result<T> {
    if model.is_cw() {
        return Err(Error::ContractViolation(
            "pulsed-pump rate requires a pulsed source".into(),
        ));
    }
    check_args(tau0, phi, tau)?;
    warn_if_short_imbalance(model, tau0);
    Ok(pulsed_unchecked(model, tau0, phi, tau))
}

/// CW-pump normalized rate
/// R_Nc(τ) = 1 − cosφ·g(2τ) − ½g(2(τ+τ₀)) − ½g(2(τ−τ₀)).
pub fn rate_modified_cw<T: Real>(model: &SourceModel<T>, tau0: T, phi: T, tau: T) -> Result<T> {
    if !model.is_cw() {
        return Err(Error::ContractViolation(
            "CW rate requires a CW-pumped source".into(),
        ));
    }
    check_args(tau0, phi, tau)?;
    warn_if_short_imbalance(model, tau0);
    Ok(cw_rate_unchecked(model, tau0, phi, tau))
}

/// Trapezoid rule settings for the frequency-domain rate.
///
/// For pulsed sources the box spans ±`span_sigmas`·σ₊ along Ω₊ and
/// ±`span_sigmas`·σ₋ along Ω₋. For CW sources only `points_difference` is used,
/// over Ω ∈ ±`span_sigmas`·σ₋/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec<T> {
    pub span_sigmas: T,
    pub points_sum: usize,
    pub points_difference: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub const MIN_SPAN_SIGMAS: f64 = 5.0;
    const MIN_POINTS: usize = 129;

    /// Smallest grid satisfying the resolution guard at delay `tau`, spanning
    /// ±8σ on each axis.
    pub fn auto(model: &SourceModel<T>, tau0: T, tau: T) -> Self {
        let span_sigmas = T::lit(8.0);
        let points = |half_span: T, max_freq: T| {
            let needed = if max_freq > T::zero() {
                let max_step = (T::lit(4.0) * max_freq).recip();
                (T::lit(2.0) * half_span / max_step).ceil().to_usize().unwrap_or(usize::MAX) + 1
            } else {
                0
            };
            needed.max(Self::MIN_POINTS) | 1
        };
        if model.is_cw() {
            let half_span = span_sigmas * T::lit(0.5) * model.sigma_minus();
            // cos(2Ω(|τ|+τ₀)) oscillates at 2(|τ|+τ₀) in Ω
            let freq = T::lit(2.0) * (tau.abs() + tau0);
            Self {
                span_sigmas,
                points_sum: 1,
                points_difference: points(half_span, freq),
            }
        } else {
            Self {
                span_sigmas,
                points_sum: points(span_sigmas * model.sigma_plus(), tau0),
                points_difference: points(span_sigmas * model.sigma_minus(), tau.abs() + tau0),
            }
        }
    }
}

fn trapezoid_weight<T: Real>(k: usize, n: usize) -> T {
    if k == 0 || k + 1 == n {
        T::lit(0.5)
    } else {
        T::one()
    }
}

fn check_axis<T: Real>(grid: &Grid1D<T>, max_freq: T, name: &str) -> Result<()> {
    if max_freq > T::zero() && grid.step > (T::lit(4.0) * max_freq).recip() {
        return Err(Error::Resolution(format!(
            "{name} step {} exceeds 1/(4·{max_freq})",
            grid.step
        )));
    }
    Ok(())
}

/// Normalized rate from trapezoid quadrature of the CPD kernel.
///
/// Pulsed sources integrate the modified-HOM kernel over (Ω₊, Ω₋); CW sources
/// integrate r_c(τ, Ω) over Ω. Both are divided by the integral of the
/// kernel's constant term, so the result is directly comparable with the
/// closed forms.
pub fn rate_modified_quadrature<T: Real>(
    model: &SourceModel<T>,
    tau0: T,
    phi: T,
    tau: T,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    check_args(tau0, phi, tau)?;
    if quad.span_sigmas < T::lit(QuadratureSpec::<T>::MIN_SPAN_SIGMAS) {
        return Err(Error::Resolution(format!(
            "quadrature span of {} sigma is below the required 5 sigma",
            quad.span_sigmas
        )));
    }
    if model.is_cw() {
        let grid = Grid1D::symmetric(
            quad.span_sigmas * T::lit(0.5) * model.sigma_minus(),
            quad.points_difference,
            Axis::Omega,
        )?;
        check_axis(&grid, T::lit(2.0) * (tau.abs() + tau0), "detuning")?;
        let n = grid.count;
        let mut num = T::zero();
        for k in 0..n {
            let weight: T = trapezoid_weight(k, n);
            num = num + weight * cw_unchecked(model, tau0, phi, tau, grid.at(k));
        }
        // 4∫|f(Ω)|²dΩ = 4·√(2π)·σ₋/2
        let baseline = T::lit(2.0) * T::TAU().sqrt() * model.sigma_minus();
        return Ok(num * grid.step / baseline);
    }

    let sum_axis = Grid1D::symmetric(
        quad.span_sigmas * model.sigma_plus(),
        quad.points_sum,
        Axis::Sum,
    )?;
    let diff_axis = Grid1D::symmetric(
        quad.span_sigmas * model.sigma_minus(),
        quad.points_difference,
        Axis::Difference,
    )?;
    check_axis(&sum_axis, tau0, "sum-detuning")?;
    check_axis(&diff_axis, tau.abs() + tau0, "difference-detuning")?;

    let (np, nm) = (sum_axis.count, diff_axis.count);
    let row_sums: Vec<T> = (0..np)
        .into_par_iter()
        .map(|r| {
            let op = sum_axis.at(r);
            let mut acc = T::zero();
            for c in 0..nm {
                let w: T = trapezoid_weight(c, nm);
                acc = acc + w * modified_unchecked(&model.tpsa, tau0, phi, tau, op, diff_axis.at(c));
            }
            acc * trapezoid_weight(r, np)
        })
        .collect();
    let total: T = row_sums.into_iter().sum();
    let integral = total * sum_axis.step * diff_axis.step;
    Ok(integral / (T::lit(4.0) * model.tpsa.intensity_integral()))
}

/// Evaluates the normalized rate at every node of `delays`.
pub fn scan<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    delays: &Grid1D<T>,
    method: Method,
) -> Result<Interferogram<T>> {
    if delays.count == 0 {
        return Err(Error::InvalidInput("empty delay grid".into()));
    }
    let tau0 = config.tau0.value();
    let phi = config.phi;
    warn_if_short_imbalance(model, tau0);
    let values: Vec<T> = match method {
        Method::ClosedForm => (0..delays.count)
            .map(|k| {
                let tau = delays.at(k);
                if model.is_cw() {
                    cw_rate_unchecked(model, tau0, phi, tau)
                } else {
                    pulsed_unchecked(model, tau0, phi, tau)
                }
            })
            .collect(),
        Method::Quadrature => (0..delays.count)
            .into_par_iter()
            .map(|k| {
                let tau = delays.at(k);
                let quad = QuadratureSpec::auto(model, tau0, tau);
                rate_modified_quadrature(model, tau0, phi, tau, &quad)
            })
            .collect::<Result<_>>()?,
    };
    let baseline = if model.is_cw() {
        T::one()
    } else {
        T::one() + visibility_params(model, tau0, phi).0
    };
    Ok(Interferogram {
        delays: *delays,
        values,
        baseline,
        model: *model,
        config: *config,
        method,
    })
}
