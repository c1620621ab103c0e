//! Fourier helpers: the normalized spectral transforms g±(τ) and centered
//! discrete transforms returning an explicit conjugate axis.

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{ensure_finite, Error, Result};
use crate::grid::{Axis, Grid1D};
use crate::scalar::Real;

/// Normalized real transform of a Gaussian intensity exp(-Ω²/2σ²):
/// g(τ) = exp(-σ²τ²/2).
#[inline]
pub fn g_gaussian<T: Real>(sigma: T, tau: T) -> T {
    let x = sigma * tau;
    (-T::lit(0.5) * x * x).exp()
}

/// g(τ) = Re[G(τ)/G(0)] for the Gaussian intensity of linewidth `sigma`.
pub fn g_fourier<T: Real>(sigma: T, tau: T) -> Result<T> {
    ensure_finite(sigma, "sigma")?;
    ensure_finite(tau, "tau")?;
    if sigma <= T::zero() {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    Ok(g_gaussian(sigma, tau))
}

/// g(τ) = Re[∫F(Ω)e^{iΩτ}dΩ / ∫F(Ω)dΩ] by trapezoid quadrature of an
/// arbitrary spectral intensity sampled on `grid`.
///
/// The grid must reach where `intensity` is negligible and resolve the
/// oscillation e^{iΩτ}.
pub fn g_fourier_numeric<T: Real, F>(intensity: F, grid: &Grid1D<T>, tau: T) -> Result<T>
where
    F: Fn(T) -> T,
{
    ensure_finite(tau, "tau")?;
    if grid.step * tau.abs() > T::PI() / T::lit(4.0) {
        return Err(Error::Resolution(format!(
            "detuning step {} too coarse for tau = {}",
            grid.step, tau
        )));
    }
    let mut num = T::zero();
    let mut den = T::zero();
    for k in 0..grid.count {
        let w = grid.at(k);
        let weight = if k == 0 || k + 1 == grid.count {
            T::lit(0.5)
        } else {
            T::one()
        };
        let v = intensity(w) * weight;
        num = num + v * (w * tau).cos();
        den = den + v;
    }
    if den <= T::zero() {
        return Err(Error::InvalidInput(
            "spectral intensity integrates to zero".into(),
        ));
    }
    Ok(num / den)
}

/// Sign of the exponent in a Fourier kernel e^{±iΩT}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Conjugate axis of a uniform grid: node k at (k − ⌊N/2⌋)·2π/(NΔ).
pub fn conjugate_grid<T: Real>(grid: &Grid1D<T>, axis: Axis) -> Result<Grid1D<T>> {
    let n = grid.count;
    let dt = T::TAU() / (T::from_usize_lossy(n) * grid.step);
    Grid1D::new(-T::from_usize_lossy(n / 2) * dt, dt, n, axis)
}

pub(crate) fn plan<T: Real>(n: usize, sign: Sign) -> std::sync::Arc<dyn Fft<T>> {
    let direction = match sign {
        Sign::Plus => FftDirection::Inverse,
        Sign::Minus => FftDirection::Forward,
    };
    FftPlanner::<T>::new().plan_fft(n, direction)
}

/// Centered transform of samples on a uniform grid:
/// X(T_k) = Δ · Σₙ xₙ e^{±iΩₙT_k}, evaluated with one FFT.
pub fn centered_dft<T: Real>(
    values: &[Complex<T>],
    grid: &Grid1D<T>,
    sign: Sign,
    conj_axis: Axis,
) -> Result<(Grid1D<T>, Vec<Complex<T>>)> {
    if values.len() != grid.count {
        return Err(Error::InvalidInput(format!(
            "{} samples for a grid of {} nodes",
            values.len(),
            grid.count
        )));
    }
    let tgrid = conjugate_grid(grid, conj_axis)?;
    let fft = plan::<T>(values.len(), sign);
    let mut buf = values.to_vec();
    transform_in_place(&mut buf, grid, &tgrid, sign, fft.as_ref());
    Ok((tgrid, buf))
}

fn signed<T: Real>(sign: Sign, x: T) -> T {
    match sign {
        Sign::Plus => x,
        Sign::Minus => -x,
    }
}

/// Applies the centered transform to one line of samples with a planned FFT
/// of matching length and direction.
pub(crate) fn transform_in_place<T: Real>(
    buf: &mut [Complex<T>],
    grid: &Grid1D<T>,
    tgrid: &Grid1D<T>,
    sign: Sign,
    fft: &dyn Fft<T>,
) {
    let n = buf.len();
    let shift = n / 2;
    let nf = T::from_usize_lossy(n);
    // ΩₙT_k = Ω₀T_k + 2πn(k − m)/N with m = ⌊N/2⌋
    for (j, x) in buf.iter_mut().enumerate() {
        let turns = T::from_usize_lossy((j * shift) % n) / nf;
        *x = *x * Complex::from_polar(T::one(), signed(sign, -T::TAU() * turns));
    }
    fft.process(buf);
    for (k, x) in buf.iter_mut().enumerate() {
        let t = tgrid.at(k);
        *x = *x * Complex::from_polar(grid.step, signed(sign, grid.start * t));
    }
}
