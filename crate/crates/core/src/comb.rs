//! Frequency-comb analysis of zero-delay marginal spectra: tooth detection,
//! dimensionality, inverse design of τ₀ and read-back of τ₀ from the temporal
//! side dips.
//!
//! The dimensionality of a comb is the number of strict local maxima that reach
//! at least a fraction (10% by default) of the global maximum inside the
//! analysis window, ±3σ of the marginal by default.

use serde::{Deserialize, Serialize};

use crate::analysis::{local_maxima, local_minima, parabolic_vertex};
use crate::error::{Error, Result};
use crate::fourier::g_gaussian;
use crate::grid::{Axis, Coords, Grid1D, Grid2D};
use crate::interferogram::Interferogram;
use crate::kernels::cw_unchecked;
use crate::maps::{jsi_map, project, spectral_map, MapKind};
use crate::model::{Delay, Detuning, InterferometerConfig, SourceModel};
use crate::scalar::Real;

/// Threshold used by [`design_tau0`] and [`characterize_from_dips`].
pub const DEFAULT_THRESHOLD: f64 = 0.1;
/// Half width of the default analysis window, in marginal standard deviations.
pub const DEFAULT_WINDOW_SIGMAS: f64 = 3.0;

/// Marginal onto which the zero-delay CPD is projected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marginal {
    Signal,
    Idler,
    SumAxis,
    DiffAxis,
}

impl Marginal {
    pub fn axis(self) -> Axis {
        match self {
            Marginal::Signal => Axis::Signal,
            Marginal::Idler => Axis::Idler,
            Marginal::SumAxis => Axis::Sum,
            Marginal::DiffAxis => Axis::Difference,
        }
    }

    /// Marginal along which a strongly (anti-)correlated source is modulated.
    pub fn dominant<T: Real>(model: &SourceModel<T>) -> Self {
        if model.is_cw() || model.sigma_minus() >= model.sigma_plus() {
            Marginal::DiffAxis
        } else {
            Marginal::SumAxis
        }
    }

    /// Standard deviation of the source intensity projected on this marginal.
    pub fn std_dev<T: Real>(self, model: &SourceModel<T>) -> T {
        let (p, m) = (model.sigma_plus(), model.sigma_minus());
        match self {
            Marginal::SumAxis => p,
            Marginal::DiffAxis => m,
            Marginal::Signal | Marginal::Idler => T::lit(0.5) * (p * p + m * m).sqrt(),
        }
    }

    /// Expected comb period for imbalance `tau0`.
    pub fn period<T: Real>(self, tau0: T) -> T {
        match self {
            Marginal::SumAxis | Marginal::DiffAxis => T::TAU() / tau0,
            Marginal::Signal | Marginal::Idler => T::PI() / tau0,
        }
    }
}

/// A sampled spectrum, optionally with the unmodulated envelope it sits on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub grid: Grid1D<T>,
    pub values: Vec<T>,
    /// Projection of 4|f|², the spectrum without interference modulation.
    pub envelope: Option<Vec<T>>,
    /// Expected modulation period, used for the sampling check.
    pub period_hint: Option<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(grid: Grid1D<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(Error::InvalidInput(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.count
            )));
        }
        Ok(Self {
            grid,
            values,
            envelope: None,
            period_hint: None,
        })
    }

    pub fn with_period_hint(mut self, period: T) -> Self {
        self.period_hint = Some(period);
        self
    }
}

/// One detected comb tooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tooth<T> {
    pub center: Detuning<T>,
    pub height: T,
    pub fwhm: T,
}

/// Result of [`count_teeth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombReport<T> {
    /// Sorted by center.
    pub teeth: Vec<Tooth<T>>,
    pub dimensionality: usize,
    /// Comb period: median gap between the modulation maxima under adjacent
    /// teeth, zero with fewer than two teeth.
    pub spacing: T,
    /// (max − min)/(max + min) of the envelope-normalized spectrum.
    pub visibility: T,
}

/// Zero-delay analysis grid for `which`: the kept axis spans
/// ±`window_sigmas`·std of the marginal, the integrated axis covers the full
/// support of the source, and both resolve the comb period with ≥ 16 samples.
pub fn marginal_grid<T: Real>(
    model: &SourceModel<T>,
    which: Marginal,
    tau0: T,
    window_sigmas: T,
) -> Result<Grid2D<T>> {
    let samples_per_period = T::lit(16.0);
    let max_step = if tau0 > T::zero() {
        Marginal::Signal.period(tau0) / samples_per_period
    } else {
        T::infinity()
    };
    let count = |half_span: T, step: T| -> usize {
        let n = (T::lit(2.0) * half_span / step).ceil().to_usize().unwrap_or(usize::MAX);
        (n + 1).max(257) | 1
    };
    let (p, m) = (model.sigma_plus(), model.sigma_minus());
    let kept_half = window_sigmas * which.std_dev(model);
    let kept = |axis| {
        let step = max_step.min(kept_half / T::lit(64.0));
        Grid1D::symmetric(kept_half, count(kept_half, step), axis)
    };
    match which {
        Marginal::SumAxis | Marginal::DiffAxis => {
            let (other_sigma, other_axis) = if which == Marginal::SumAxis {
                (m, Axis::Difference)
            } else {
                (p, Axis::Sum)
            };
            let other_half = T::lit(8.0) * other_sigma;
            let other = Grid1D::symmetric(
                other_half,
                count(other_half, max_step.min(other_sigma / T::lit(8.0))),
                other_axis,
            )?;
            let kept = kept(which.axis())?;
            if which == Marginal::SumAxis {
                Grid2D::new(kept, other)
            } else {
                Grid2D::new(other, kept)
            }
        }
        Marginal::Signal | Marginal::Idler => {
            // at fixed Ω_s the intensity is Gaussian in Ω_i with this width
            let cond = p * m / (p * p + m * m).sqrt();
            let other_half = kept_half + T::lit(8.0) * cond;
            let step = max_step.min(cond / T::lit(8.0));
            let other_axis = if which == Marginal::Signal {
                Axis::Idler
            } else {
                Axis::Signal
            };
            let kept = kept(which.axis())?;
            let other = Grid1D::symmetric(other_half, count(other_half, step), other_axis)?;
            if which == Marginal::Signal {
                Grid2D::new(kept, other)
            } else {
                Grid2D::new(other, kept)
            }
        }
    }
}

/// Projects the zero-delay modified-HOM CPD onto `which`.
///
/// `grid` must be in (Ω_s, Ω_i) coordinates for the signal and idler marginals
/// and in (Ω₊, Ω₋) coordinates for the sum and difference marginals.
pub fn marginal_spectrum<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    which: Marginal,
    grid: &Grid2D<T>,
) -> Result<Spectrum<T>> {
    if config.tau.value() != T::zero() {
        return Err(Error::ContractViolation(
            "marginal spectra are defined at tau = 0".into(),
        ));
    }
    if model.is_cw() {
        return Err(Error::ContractViolation(
            "use cw_spectrum for CW-pumped sources".into(),
        ));
    }
    let want = match which {
        Marginal::Signal | Marginal::Idler => Coords::SignalIdler,
        Marginal::SumAxis | Marginal::DiffAxis => Coords::SumDifference,
    };
    if grid.coords()? != want {
        return Err(Error::AxisMismatch(format!(
            "{which:?} marginal needs a {want:?} grid"
        )));
    }
    let map = spectral_map(model, config, grid, MapKind::ModifiedHom)?;
    let profile = project(&map, which.axis())?;
    let jsi = jsi_map(model, grid)?;
    let envelope = project(&jsi, which.axis())?
        .values
        .into_iter()
        .map(|v| T::lit(4.0) * v)
        .collect();
    let tau0 = config.tau0.value();
    Ok(Spectrum {
        grid: profile.grid,
        values: profile.values,
        envelope: Some(envelope),
        period_hint: (tau0 > T::zero()).then(|| which.period(tau0)),
    })
}

/// Zero-delay CW spectrum r_c(0, Ω) over `omega_grid`.
pub fn cw_spectrum<T: Real>(
    model: &SourceModel<T>,
    tau0: T,
    phi: T,
    omega_grid: &Grid1D<T>,
) -> Result<Spectrum<T>> {
    if !model.is_cw() {
        return Err(Error::ContractViolation(
            "cw_spectrum requires a CW-pumped source".into(),
        ));
    }
    let grid = omega_grid.with_axis(Axis::Omega);
    let values = (0..grid.count)
        .map(|k| cw_unchecked(model, tau0, phi, T::zero(), grid.at(k)))
        .collect();
    let envelope = (0..grid.count)
        .map(|k| {
            let f = model.cw_amplitude(grid.at(k));
            T::lit(4.0) * f * f
        })
        .collect();
    Ok(Spectrum {
        grid,
        values,
        envelope: Some(envelope),
        period_hint: (tau0 > T::zero()).then(|| T::PI() / tau0),
    })
}

/// Closed-form sum- or difference-axis marginal of the zero-delay CPD.
///
/// At τ = 0 the kernel and the Gaussian intensity both factorize in (Ω₊, Ω₋),
/// so the integral over the other axis is a constant:
/// √(2π)σ₊(1 − cosφ·g₊(τ₀)) for the difference axis and √(2π)σ₋(1 − g₋(τ₀))
/// for the sum axis.
pub fn axis_marginal<T: Real>(
    model: &SourceModel<T>,
    tau0: T,
    phi: T,
    which: Marginal,
    grid: &Grid1D<T>,
) -> Result<Spectrum<T>> {
    if model.is_cw() {
        return Err(Error::ContractViolation(
            "use cw_spectrum for CW-pumped sources".into(),
        ));
    }
    let (p, m) = (model.sigma_plus(), model.sigma_minus());
    let root = (T::TAU()).sqrt();
    let four = T::lit(4.0);
    type Line<'a, T> = Box<dyn Fn(T) -> (T, T) + 'a>;
    let (other, line): (T, Line<T>) = match which {
        Marginal::DiffAxis => (
            root * p,
            Box::new(move |w: T| {
                let f = model.tpsa.difference_intensity(w);
                (f * (T::one() - (w * tau0).cos()), f)
            }),
        ),
        Marginal::SumAxis => (
            root * m,
            Box::new(move |w: T| {
                let f = model.tpsa.sum_intensity(w);
                (f * (T::one() - (phi + w * tau0).cos()), f)
            }),
        ),
        _ => {
            return Err(Error::ContractViolation(
                "closed-form marginals exist only for the sum and difference axes".into(),
            ))
        }
    };
    let modulation = match which {
        Marginal::DiffAxis => T::one() - phi.cos() * g_gaussian(p, tau0),
        _ => T::one() - g_gaussian(m, tau0),
    };
    let grid = grid.with_axis(which.axis());
    let (values, envelope) = (0..grid.count)
        .map(|k| {
            let (v, f) = line(grid.at(k));
            (four * other * modulation * v, four * other * f)
        })
        .unzip();
    Ok(Spectrum {
        grid,
        values,
        envelope: Some(envelope),
        period_hint: (tau0 > T::zero()).then(|| which.period(tau0)),
    })
}

/// Default one-dimensional analysis grid for `which`: ±`window_sigmas`·std
/// with ≥ 16 samples per comb period.
pub fn marginal_axis_grid<T: Real>(
    model: &SourceModel<T>,
    which: Marginal,
    tau0: T,
    window_sigmas: T,
) -> Result<Grid1D<T>> {
    let half = window_sigmas * which.std_dev(model);
    let mut step = half / T::lit(64.0);
    if tau0 > T::zero() {
        step = step.min(which.period(tau0) / T::lit(16.0));
    }
    let n = ((T::lit(2.0) * half / step).ceil().to_usize().unwrap_or(usize::MAX) + 1).max(257) | 1;
    Grid1D::symmetric(half, n, which.axis())
}

/// Default CW analysis grid: ±`window_sigmas`·σ₋/2 in Ω with ≥ 16 samples per
/// period π/τ₀.
pub fn cw_grid<T: Real>(model: &SourceModel<T>, tau0: T, window_sigmas: T) -> Result<Grid1D<T>> {
    let half = window_sigmas * T::lit(0.5) * model.sigma_minus();
    let step = (T::PI() / (T::lit(16.0) * tau0)).min(half / T::lit(64.0));
    let n = ((T::lit(2.0) * half / step).ceil().to_usize().unwrap_or(usize::MAX) + 1).max(257) | 1;
    Grid1D::symmetric(half, n, Axis::Omega)
}

fn half_width<T: Real>(values: &[T], k: usize, level: T, step: T) -> T {
    let n = values.len();
    let mut left = None;
    let mut j = k;
    while j > 0 {
        if values[j - 1] < level {
            let frac = (values[j] - level) / (values[j] - values[j - 1]);
            left = Some(T::from_usize_lossy(k - j) + frac);
            break;
        }
        j -= 1;
    }
    let mut right = None;
    let mut j = k;
    while j + 1 < n {
        if values[j + 1] < level {
            let frac = (values[j] - level) / (values[j] - values[j + 1]);
            right = Some(T::from_usize_lossy(j - k) + frac);
            break;
        }
        j += 1;
    }
    let edge_left = T::from_usize_lossy(k);
    let edge_right = T::from_usize_lossy(n - 1 - k);
    (left.unwrap_or(edge_left) + right.unwrap_or(edge_right)) * step
}

fn median<T: Real>(mut xs: Vec<T>) -> T {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        T::lit(0.5) * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Detects comb teeth: strict local maxima reaching `threshold_fraction` of
/// the global maximum.
pub fn count_teeth<T: Real>(spectrum: &Spectrum<T>, threshold_fraction: T) -> Result<CombReport<T>> {
    if !(threshold_fraction > T::zero() && threshold_fraction < T::one()) {
        return Err(Error::InvalidInput(
            "threshold fraction must lie in (0, 1)".into(),
        ));
    }
    let values = &spectrum.values;
    let step = spectrum.grid.step;
    if let Some(period) = spectrum.period_hint {
        if step * T::lit(8.0) > period {
            return Err(Error::Resolution(format!(
                "step {step} gives fewer than 8 samples per period {period}"
            )));
        }
    }
    let global = values.iter().copied().fold(T::zero(), T::max);
    let threshold = threshold_fraction * global;
    let peaks: Vec<usize> = local_maxima(values)
        .into_iter()
        .filter(|&k| values[k] >= threshold)
        .collect();
    if spectrum.period_hint.is_none() && peaks.windows(2).any(|w| w[1] - w[0] < 8) {
        return Err(Error::Resolution(
            "adjacent teeth are fewer than 8 samples apart".into(),
        ));
    }

    let teeth: Vec<Tooth<T>> = peaks
        .iter()
        .map(|&k| {
            let (offset, height) = parabolic_vertex(values, k);
            let center = spectrum.grid.at(k) + offset * step;
            Tooth {
                center: Detuning::new(center).expect("grid nodes are finite"),
                height,
                fwhm: half_width(values, k, T::lit(0.5) * height, step),
            }
        })
        .collect();
    let positions: Vec<T> = match &spectrum.envelope {
        Some(env) => modulation_peaks(values, env, &peaks, &spectrum.grid),
        None => teeth.iter().map(|t| t.center.value()).collect(),
    };
    let spacing = if positions.len() >= 2 {
        median(positions.windows(2).map(|w| w[1] - w[0]).collect())
    } else {
        T::zero()
    };
    let visibility = if teeth.is_empty() {
        T::zero()
    } else {
        match &spectrum.envelope {
            Some(env) => envelope_visibility(values, env),
            None => valley_visibility(values, &peaks),
        }
    };
    Ok(CombReport {
        dimensionality: teeth.len(),
        teeth,
        spacing,
        visibility,
    })
}

/// Positions of the modulation maxima (spectrum divided by its envelope)
/// nearest to each detected tooth, so the spacing is free of envelope pull.
fn modulation_peaks<T: Real>(values: &[T], envelope: &[T], peaks: &[usize], grid: &Grid1D<T>) -> Vec<T> {
    let ratio: Vec<T> = values
        .iter()
        .zip(envelope)
        .map(|(&v, &e)| if e > T::zero() { v / e } else { T::zero() })
        .collect();
    let mut out: Vec<T> = Vec::with_capacity(peaks.len());
    let mut last = None;
    for &k in peaks {
        let mut j = k;
        loop {
            if j > 0 && ratio[j - 1] > ratio[j] {
                j -= 1;
            } else if j + 1 < ratio.len() && ratio[j + 1] > ratio[j] {
                j += 1;
            } else {
                break;
            }
        }
        if last == Some(j) {
            continue;
        }
        last = Some(j);
        out.push(grid.at(j) + parabolic_vertex(&ratio, j).0 * grid.step);
    }
    out
}

fn envelope_visibility<T: Real>(values: &[T], envelope: &[T]) -> T {
    let env_max = envelope.iter().copied().fold(T::zero(), T::max);
    let cutoff = T::lit(1e-3) * env_max;
    let (lo, hi) = values
        .iter()
        .zip(envelope)
        .filter(|(_, &e)| e > cutoff)
        .map(|(&v, &e)| v / e)
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if hi + lo > T::zero() {
        (hi - lo) / (hi + lo)
    } else {
        T::zero()
    }
}

/// Mean per-tooth contrast against the deeper-filled neighbouring valley.
fn valley_visibility<T: Real>(values: &[T], peaks: &[usize]) -> T {
    let minima = local_minima(values);
    let contrasts: Vec<T> = peaks
        .iter()
        .map(|&k| {
            let left = minima.iter().rev().find(|&&j| j < k).map(|&j| values[j]);
            let right = minima.iter().find(|&&j| j > k).map(|&j| values[j]);
            let valley = match (left, right) {
                (Some(a), Some(b)) => a.max(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => values[0].min(values[values.len() - 1]),
            };
            let h = values[k];
            (h - valley) / (h + valley)
        })
        .collect();
    contrasts.iter().copied().sum::<T>() / T::from_usize_lossy(contrasts.len())
}

/// Comb report of marginal `which` at imbalance `tau0` and phase `phi`.
pub fn comb_at<T: Real>(
    model: &SourceModel<T>,
    tau0: T,
    phi: T,
    which: Marginal,
    window_sigmas: T,
    threshold_fraction: T,
) -> Result<CombReport<T>> {
    if model.is_cw() {
        let grid = cw_grid(model, tau0, window_sigmas)?;
        return count_teeth(&cw_spectrum(model, tau0, phi, &grid)?, threshold_fraction);
    }
    if matches!(which, Marginal::SumAxis | Marginal::DiffAxis) {
        let grid = marginal_axis_grid(model, which, tau0, window_sigmas)?;
        return count_teeth(&axis_marginal(model, tau0, phi, which, &grid)?, threshold_fraction);
    }
    let config = InterferometerConfig::new(tau0, phi, T::zero())?;
    let grid = marginal_grid(model, which, tau0, window_sigmas)?;
    count_teeth(
        &marginal_spectrum(model, &config, which, &grid)?,
        threshold_fraction,
    )
}

/// Smallest τ₀ ∈ (0, 100] ps at which the dominant marginal (φ = 0, threshold
/// 10%, window ±`window_sigmas`·σ) has exactly `target_dimension` teeth.
///
/// The τ₀ axis is scanned on a 0.05 ps lattice until the count reaches the
/// target, and the crossing is then bisected to 1e-6 ps.
pub fn design_tau0<T: Real>(
    model: &SourceModel<T>,
    target_dimension: usize,
    window_sigmas: T,
) -> Result<Delay<T>> {
    if target_dimension < 2 {
        return Err(Error::InvalidInput("target dimension must be at least 2".into()));
    }
    let ratio = model.sigma_plus() / model.sigma_minus();
    if !model.is_cw() && ratio < T::lit(10.0) && ratio > T::lit(0.1) {
        return Err(Error::ContractViolation(format!(
            "no dominant modulation axis for sigma_plus/sigma_minus = {ratio}"
        )));
    }
    let which = Marginal::dominant(model);
    let threshold = T::lit(DEFAULT_THRESHOLD);
    let count = |tau0: T| -> Result<usize> {
        Ok(comb_at(model, tau0, T::zero(), which, window_sigmas, threshold)?.dimensionality)
    };

    let coarse = T::lit(0.05);
    let limit = T::lit(100.0);
    let tol = T::lit(1e-6);
    let mut lo = T::zero();
    let mut k = 1usize;
    loop {
        let hi = coarse * T::from_usize_lossy(k);
        if hi > limit {
            break;
        }
        let n = count(hi)?;
        if n == target_dimension {
            // shrink [lo, hi] onto the first τ₀ reaching the target
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = T::lit(0.5) * (a + b);
                if count(mid)? >= target_dimension {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            if count(b)? == target_dimension {
                return Delay::new(b);
            }
            return Delay::new(hi);
        }
        if n < target_dimension {
            lo = hi;
        }
        k += 1;
    }
    Err(Error::NotFound(format!(
        "no tau0 in (0, 100] ps yields {target_dimension} teeth"
    )))
}

/// τ₀ read back from the two side dips of a temporal interferogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipCharacterization<T> {
    pub tau0: Delay<T>,
    /// Refined positions of the negative- and positive-delay side dips.
    pub dips: (T, T),
    /// Tooth count the generating source would show at the estimated τ₀.
    pub dimensionality: usize,
}

/// Locates the outermost dips on either side of τ = 0 (at least a quarter
/// below the baseline), refines them parabolically and returns half their
/// separation as τ₀.
pub fn characterize_from_dips<T: Real>(interferogram: &Interferogram<T>) -> Result<DipCharacterization<T>> {
    let values = &interferogram.values;
    let grid = &interferogram.delays;
    let level = interferogram.baseline - T::lit(0.25);
    let minima: Vec<usize> = local_minima(values)
        .into_iter()
        .filter(|&k| values[k] < level)
        .collect();
    let half_step = T::lit(0.5) * grid.step;
    let negative = minima.iter().copied().find(|&k| grid.at(k) < -half_step);
    let positive = minima.iter().rev().copied().find(|&k| grid.at(k) > half_step);
    let (neg, pos) = match (negative, positive) {
        (Some(n), Some(p)) => (n, p),
        _ => {
            return Err(Error::FeatureNotFound(
                "fewer than two side dips in the interferogram".into(),
            ))
        }
    };
    let refine = |k: usize| grid.at(k) + parabolic_vertex(values, k).0 * grid.step;
    let (left, right) = (refine(neg), refine(pos));
    let tau0 = T::lit(0.5) * (right - left);
    let model = &interferogram.model;
    let which = Marginal::dominant(model);
    let report = comb_at(
        model,
        tau0,
        interferogram.config.phi,
        which,
        T::lit(DEFAULT_WINDOW_SIGMAS),
        T::lit(DEFAULT_THRESHOLD),
    )?;
    Ok(DipCharacterization {
        tau0: Delay::new(tau0)?,
        dips: (left, right),
        dimensionality: report.dimensionality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferogram::{scan, Method};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn pure_cosine_comb() {
        let (sigma, tau0) = (5.0f64, 3.0f64);
        let grid = Grid1D::symmetric(3.0 * sigma, 1201, Axis::Difference).unwrap();
        let values = grid.values().iter().map(|w| 1.0 - (w * tau0).cos()).collect();
        let spec = Spectrum::new(grid, values)
            .unwrap()
            .with_period_hint(2.0 * PI / tau0);
        let r = count_teeth(&spec, 0.1).unwrap();
        // maxima at (2k+1)π/3 inside ±15: k = -7..=6
        assert_eq!(r.dimensionality, 14);
        for t in &r.teeth {
            let k = ((t.center.value() * tau0 / PI - 1.0) / 2.0).round();
            assert!((t.center.value() - (2.0 * k + 1.0) * PI / tau0).abs() < grid.step);
        }
        assert!((r.spacing - 2.0 * PI / 3.0).abs() <= grid.step);
        assert!(r.teeth.windows(2).all(|w| w[0].center < w[1].center));
        assert!((r.visibility - 1.0).abs() < 1e-2);
        // FWHM of 1 − cos is half the period
        assert!((r.teeth[3].fwhm - PI / tau0).abs() < 2.0 * grid.step);
    }

    #[test]
    fn constant_spectrum_has_no_teeth() {
        let grid = Grid1D::symmetric(1.0, 101, Axis::Difference).unwrap();
        let r = count_teeth(&Spectrum::new(grid, vec![2.0; 101]).unwrap(), 0.1).unwrap();
        assert_eq!(r.dimensionality, 0);
        assert_eq!(r.spacing, 0.0);
        assert_eq!(r.visibility, 0.0);
    }

    #[test]
    fn undersampled_spectrum_is_rejected() {
        let grid = Grid1D::symmetric(15.0, 31, Axis::Difference).unwrap();
        let values = grid.values().iter().map(|w: &f64| 1.0 - (w * 3.0).cos()).collect();
        let spec = Spectrum::new(grid, values).unwrap().with_period_hint(2.0 * PI / 3.0);
        assert!(matches!(count_teeth(&spec, 0.1), Err(Error::Resolution(_))));
        assert!(count_teeth(&spec, 0.0).is_err());
        assert!(count_teeth(&spec, 1.0).is_err());
    }

    fn peak_normalized(v: &[f64]) -> Vec<f64> {
        let m = v.iter().copied().fold(0.0, f64::max);
        v.iter().map(|x| x / m).collect()
    }

    #[test]
    fn limiting_regimes_match_one_dimensional_formulas() {
        let tau0 = 3.0f64;
        let cases = [
            (0.1, 5.0, 0.0, Marginal::DiffAxis),
            (5.0, 0.1, 0.0, Marginal::SumAxis),
        ];
        for (sp, sm, phi, which) in cases {
            let m = SourceModel::pulsed(sp, sm).unwrap();
            let c = InterferometerConfig::new(tau0, phi, 0.0).unwrap();
            let grid = marginal_grid(&m, which, tau0, 3.0).unwrap();
            let spec = marginal_spectrum(&m, &c, which, &grid).unwrap();
            let approx: Vec<f64> = spec
                .grid
                .values()
                .iter()
                .map(|&w: &f64| match which {
                    Marginal::DiffAxis => m.tpsa.difference_intensity(w) * (1.0 - (w * tau0).cos()),
                    _ => m.tpsa.sum_intensity(w) * (1.0 - (phi + w * tau0).cos()),
                })
                .collect();
            let (a, b) = (peak_normalized(&spec.values), peak_normalized(&approx));
            let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(worst <= 0.01, "{which:?}: {worst}");
        }
    }

    #[test]
    fn numeric_axis_marginals_match_closed_form() {
        for (sp, sm, tau0, phi) in [(1.0, 5.0, 1.5, 0.3), (5.0, 0.1, 3.0, 2.0), (0.1, 5.0, 3.0, PI)] {
            let m = SourceModel::pulsed(sp, sm).unwrap();
            let c = InterferometerConfig::new(tau0, phi, 0.0).unwrap();
            for which in [Marginal::SumAxis, Marginal::DiffAxis] {
                let grid = marginal_grid(&m, which, tau0, 3.0).unwrap();
                let num = marginal_spectrum(&m, &c, which, &grid).unwrap();
                let exact = axis_marginal(&m, tau0, phi, which, &num.grid).unwrap();
                let peak = exact.values.iter().copied().fold(0.0, f64::max);
                for (a, b) in num.values.iter().zip(&exact.values) {
                    assert!((a - b).abs() <= 1e-8 * peak, "{which:?} {a} {b}");
                }
                let env = num.envelope.unwrap();
                for (a, b) in env.iter().zip(exact.envelope.as_ref().unwrap()) {
                    assert!((a - b).abs() <= 1e-8 * b.max(1e-300) + 1e-300);
                }
            }
        }
    }

    #[test]
    fn uncorrelated_signal_marginal_is_even() {
        let m = SourceModel::pulsed(5.0, 5.0).unwrap();
        let c = InterferometerConfig::new(3.0, 0.0, 0.0).unwrap();
        let grid = marginal_grid(&m, Marginal::Signal, 3.0, 3.0).unwrap();
        let spec = marginal_spectrum(&m, &c, Marginal::Signal, &grid).unwrap();
        let n = spec.values.len();
        for k in 0..n {
            let (a, b): (f64, f64) = (spec.values[k], spec.values[n - 1 - k]);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn marginal_requires_zero_delay_and_matching_grid() {
        let m = SourceModel::pulsed(5.0, 5.0).unwrap();
        let grid = marginal_grid(&m, Marginal::Signal, 3.0, 3.0).unwrap();
        let c = InterferometerConfig::new(3.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            marginal_spectrum(&m, &c, Marginal::Signal, &grid),
            Err(Error::ContractViolation(_))
        ));
        let c = InterferometerConfig::new(3.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            marginal_spectrum(&m, &c, Marginal::SumAxis, &grid),
            Err(Error::AxisMismatch(_))
        ));
    }

    #[test]
    fn phase_translates_correlated_teeth() {
        let m = SourceModel::pulsed(5.0, 0.1).unwrap();
        let tau0 = 3.0;
        let delta = 0.6;
        let r0 = comb_at(&m, tau0, 0.0, Marginal::SumAxis, 3.0, 0.1).unwrap();
        let r1 = comb_at(&m, tau0, delta, Marginal::SumAxis, 3.0, 0.1).unwrap();
        let step = marginal_grid(&m, Marginal::SumAxis, tau0, 3.0).unwrap().rows.step;
        // compare the teeth nearest the origin, which are least pulled by the envelope
        let nearest = |r: &CombReport<f64>, x: f64| {
            r.teeth
                .iter()
                .map(|t| t.center.value())
                .min_by(|a, b| (a - x).abs().partial_cmp(&(b - x).abs()).unwrap())
                .unwrap()
        };
        let before = nearest(&r0, PI / tau0);
        let after = nearest(&r1, before - delta / tau0);
        assert!((after - before + delta / tau0).abs() <= step, "{before} -> {after}");
    }

    #[test]
    fn design_reaches_target_and_is_monotone() {
        let m = SourceModel::pulsed(0.1, 5.0).unwrap();
        let mut last = 0.0;
        for target in [2, 4, 6] {
            let tau0 = design_tau0(&m, target, 3.0).unwrap().value();
            let r = comb_at(&m, tau0, 0.0, Marginal::DiffAxis, 3.0, 0.1).unwrap();
            assert_eq!(r.dimensionality, target);
            assert!(tau0 >= last);
            last = tau0;
        }
        assert!(matches!(design_tau0(&m, 3, 3.0), Err(Error::NotFound(_))));
        assert!(design_tau0(&m, 1, 3.0).is_err());
        let general = SourceModel::pulsed(1.0, 5.0).unwrap();
        assert!(matches!(
            design_tau0(&general, 4, 3.0),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn dips_recover_tau0() {
        let delays = Grid1D::symmetric(6.0, 1201, Axis::Tau).unwrap();
        let cw = SourceModel::cw(5.0).unwrap();
        let cfg = InterferometerConfig::new(3.0, FRAC_PI_2, 0.0).unwrap();
        let ig = scan(&cw, &cfg, &delays, Method::ClosedForm).unwrap();
        let c = characterize_from_dips(&ig).unwrap();
        assert!((c.tau0.value() - 3.0).abs() <= delays.step);
        assert!(c.dimensionality > 0);

        let pulsed = SourceModel::pulsed(1.0, 5.0).unwrap();
        let cfg = InterferometerConfig::new(1.5, 0.0, 0.0).unwrap();
        let ig = scan(&pulsed, &cfg, &delays, Method::ClosedForm).unwrap();
        let c = characterize_from_dips(&ig).unwrap();
        assert!((c.tau0.value() - 1.5).abs() <= delays.step);

        let mut flat = ig.clone();
        flat.values.iter_mut().for_each(|v| *v = 1.0);
        assert!(matches!(characterize_from_dips(&flat), Err(Error::FeatureNotFound(_))));
    }
}
