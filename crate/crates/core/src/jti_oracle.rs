//! Time-domain route to the modified-HOM coincidence rate.
//!
//! The two-photon temporal amplitude A is the unitary Fourier transform of the
//! TPSA in (Ω₊, Ω₋) ↔ (t₊, t₋), with t± = (t_s ± t_i)/2:
//!
//! A(t₊, t₋) = (1/2π) ∫∫ f(Ω₊, Ω₋) e^{−i(Ω₊t₊ + Ω₋t₋)} dΩ₊ dΩ₋,
//!
//! which for the Gaussian TPSA is 2σ₊σ₋·exp(−σ₊²t₊² − σ₋²t₋²). The output
//! state superposes four shifted copies (d = τ + τ₀):
//!
//! Ψ = A(t_s+d, t_i) − A(t_s, t_i+d) + e^{−iφ}A(t_s+d, t_i+2τ₀) − e^{−iφ}A(t_s+2τ₀, t_i+d),
//!
//! and the joint temporal intensity |Ψ|² integrated over dt₊dt₋ and divided by
//! 4∫∫|f|² reproduces the frequency-domain rate.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::fourier::{conjugate_grid, plan, transform_in_place, Sign};
use crate::grid::{Axis, Coords, Grid1D, Grid2D};
use crate::model::{InterferometerConfig, SourceModel, Tpsa};
use crate::scalar::Real;

/// Half width, in units of 1/σ, kept around every amplitude center.
pub const WINDOW_SIGMAS: f64 = 6.0;
/// Largest integration step, in units of 1/σ.
pub const MAX_STEP_SIGMAS: f64 = 0.25;
/// Default number of nodes per time axis.
pub const DEFAULT_POINTS: usize = 512;
/// Largest tolerated share of the integral on the window boundary.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

/// Temporal two-photon amplitude A(t₊, t₋).
#[derive(Debug, Clone, PartialEq)]
pub enum TemporalAmplitude<T> {
    /// Closed form of the Gaussian TPSA.
    Gaussian { sigma_plus: T, sigma_minus: T },
    /// Numerical transform sampled on a (t₊, t₋) grid; bilinear between
    /// nodes and zero outside.
    Sampled {
        grid: Grid2D<T>,
        values: Vec<Complex<T>>,
    },
}

impl<T: Real> TemporalAmplitude<T> {
    /// A at mean time t₊ and half difference t₋.
    pub fn at_sum_difference(&self, t_plus: T, t_minus: T) -> Complex<T> {
        match self {
            TemporalAmplitude::Gaussian {
                sigma_plus,
                sigma_minus,
            } => {
                let (x, y) = (*sigma_plus * t_plus, *sigma_minus * t_minus);
                let peak = T::lit(2.0) * *sigma_plus * *sigma_minus;
                Complex::new(peak * (-(x * x + y * y)).exp(), T::zero())
            }
            TemporalAmplitude::Sampled { grid, values } => bilinear(grid, values, t_plus, t_minus),
        }
    }

    /// A at signal and idler arrival times.
    pub fn at(&self, t_s: T, t_i: T) -> Complex<T> {
        let half = T::lit(0.5);
        self.at_sum_difference(half * (t_s + t_i), half * (t_s - t_i))
    }

    /// Widths (σ₊, σ₋) setting the temporal extent along t₊ and t₋.
    pub fn widths(&self) -> Option<(T, T)> {
        match self {
            TemporalAmplitude::Gaussian {
                sigma_plus,
                sigma_minus,
            } => Some((*sigma_plus, *sigma_minus)),
            TemporalAmplitude::Sampled { .. } => None,
        }
    }
}

fn bilinear<T: Real>(grid: &Grid2D<T>, values: &[Complex<T>], x: T, y: T) -> Complex<T> {
    let locate = |g: &Grid1D<T>, v: T| -> Option<(usize, T)> {
        let u = (v - g.start) / g.step;
        if u < T::zero() || u > T::from_usize_lossy(g.count - 1) {
            return None;
        }
        let k = u.floor().to_usize().unwrap_or(0).min(g.count - 2);
        Some((k, u - T::from_usize_lossy(k)))
    };
    let (Some((r, fr)), Some((c, fc))) = (locate(&grid.rows, x), locate(&grid.cols, y)) else {
        return Complex::new(T::zero(), T::zero());
    };
    let n = grid.cols.count;
    let at = |i: usize, j: usize| values[i * n + j];
    let one = T::one();
    at(r, c) * ((one - fr) * (one - fc))
        + at(r, c + 1) * ((one - fr) * fc)
        + at(r + 1, c) * (fr * (one - fc))
        + at(r + 1, c + 1) * (fr * fc)
}

/// Closed-form temporal amplitude of the model's Gaussian TPSA.
pub fn temporal_amplitude<T: Real>(model: &SourceModel<T>) -> Result<TemporalAmplitude<T>> {
    if model.is_cw() {
        return Err(Error::ContractViolation(
            "the temporal amplitude of a CW source is not square-integrable".into(),
        ));
    }
    Ok(TemporalAmplitude::Gaussian {
        sigma_plus: model.sigma_plus(),
        sigma_minus: model.sigma_minus(),
    })
}

/// Default (Ω₊, Ω₋) grid for [`temporal_amplitude_numeric`]: ±12 widths with
/// 128 nodes per axis.
pub fn default_frequency_grid<T: Real>(tpsa: &dyn Tpsa<T>) -> Result<Grid2D<T>> {
    let span = T::lit(12.0);
    Grid2D::sum_difference(span * tpsa.sum_width(), 128, span * tpsa.difference_width(), 128)
}

/// Temporal amplitude of an arbitrary TPSA by a 2-D FFT of its samples on a
/// (Ω₊, Ω₋) grid.
///
/// Each axis must reach 10 widths, where a Gaussian has decayed below 1e-10,
/// and its step must stay under half a width so that the periodic images of A
/// do not overlap.
pub fn temporal_amplitude_numeric<T: Real>(
    tpsa: &dyn Tpsa<T>,
    freq_grid: &Grid2D<T>,
) -> Result<TemporalAmplitude<T>> {
    if freq_grid.coords()? != Coords::SumDifference {
        return Err(Error::AxisMismatch(
            "the temporal transform needs a (sum, difference) grid".into(),
        ));
    }
    for (g, width) in [
        (&freq_grid.rows, tpsa.sum_width()),
        (&freq_grid.cols, tpsa.difference_width()),
    ] {
        let reach = (-g.start).min(g.end());
        if reach < T::lit(10.0) * width {
            return Err(Error::Resolution(format!(
                "{} axis reaches {reach}, below 10 widths ({width})",
                g.axis.as_str()
            )));
        }
        if g.step > T::lit(0.5) * width {
            return Err(Error::Resolution(format!(
                "{} step {} exceeds half a width ({width})",
                g.axis.as_str(),
                g.step
            )));
        }
    }
    let (rows, cols) = (freq_grid.rows, freq_grid.cols);
    let trows = conjugate_grid(&rows, Axis::TimeSum)?;
    let tcols = conjugate_grid(&cols, Axis::TimeDifference)?;
    let (nr, nc) = (rows.count, cols.count);

    let mut data: Vec<Complex<T>> = (0..nr * nc)
        .map(|k| Complex::new(tpsa.amplitude(rows.at(k / nc), cols.at(k % nc)), T::zero()))
        .collect();
    let row_fft = plan::<T>(nc, Sign::Minus);
    data.par_chunks_mut(nc)
        .for_each(|line| transform_in_place(line, &cols, &tcols, Sign::Minus, row_fft.as_ref()));
    let col_fft = plan::<T>(nr, Sign::Minus);
    let scale = T::one() / T::TAU();
    let columns: Vec<Vec<Complex<T>>> = (0..nc)
        .into_par_iter()
        .map(|c| {
            let mut line: Vec<Complex<T>> = (0..nr).map(|r| data[r * nc + c]).collect();
            transform_in_place(&mut line, &rows, &trows, Sign::Minus, col_fft.as_ref());
            line
        })
        .collect();
    for (c, line) in columns.into_iter().enumerate() {
        for (r, v) in line.into_iter().enumerate() {
            data[r * nc + c] = v * scale;
        }
    }
    Ok(TemporalAmplitude::Sampled {
        grid: Grid2D::new(trows, tcols)?,
        values: data,
    })
}

/// (t_s, t_i) shifts of the four amplitudes for delay `tau`, such that A_k is
/// evaluated at (t_s + Δs, t_i + Δi).
fn shifts<T: Real>(tau0: T, tau: T) -> [(T, T); 4] {
    let d = tau + tau0;
    let two = T::lit(2.0) * tau0;
    let z = T::zero();
    [(d, z), (z, d), (d, two), (two, d)]
}

fn coefficients<T: Real>(phi: T) -> [Complex<T>; 4] {
    let one = Complex::new(T::one(), T::zero());
    let e = Complex::from_polar(T::one(), -phi);
    [one, -one, e, -e]
}

/// The 16 products of |Ψ|² collected by their role in the rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JtiTerms<T> {
    /// |A₁|² + |A₂|² + |A₃|² + |A₄|².
    pub baseline: T,
    /// A₁A₃* and A₂A₄* with their conjugates.
    pub a_term: T,
    /// A₁A₄* and A₂A₃* with their conjugates.
    pub b_term: T,
    /// A₁A₂* and A₃A₄* with their conjugates.
    pub side_dips: T,
}

impl<T: Real> JtiTerms<T> {
    pub fn total(&self) -> T {
        self.baseline + self.a_term + self.b_term + self.side_dips
    }

    fn scaled(self, s: T) -> Self {
        Self {
            baseline: self.baseline * s,
            a_term: self.a_term * s,
            b_term: self.b_term * s,
            side_dips: self.side_dips * s,
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            baseline: self.baseline + o.baseline,
            a_term: self.a_term + o.a_term,
            b_term: self.b_term + o.b_term,
            side_dips: self.side_dips + o.side_dips,
        }
    }

    fn zero() -> Self {
        Self {
            baseline: T::zero(),
            a_term: T::zero(),
            b_term: T::zero(),
            side_dips: T::zero(),
        }
    }
}

fn weighted<T: Real>(amp: &TemporalAmplitude<T>, tau0: T, phi: T, tau: T, t_s: T, t_i: T) -> [Complex<T>; 4] {
    let c = coefficients(phi);
    let sh = shifts(tau0, tau);
    std::array::from_fn(|k| c[k] * amp.at(t_s + sh[k].0, t_i + sh[k].1))
}

/// |Ψ(t_s, t_i)|² by direct complex arithmetic.
pub fn jti_direct<T: Real>(amp: &TemporalAmplitude<T>, config: &InterferometerConfig<T>, t_s: T, t_i: T) -> T {
    let w = weighted(amp, config.tau0.value(), config.phi, config.tau.value(), t_s, t_i);
    (w[0] + w[1] + w[2] + w[3]).norm_sqr()
}

/// The 16-term expansion of |Ψ(t_s, t_i)|², grouped.
pub fn jti_terms<T: Real>(
    amp: &TemporalAmplitude<T>,
    config: &InterferometerConfig<T>,
    t_s: T,
    t_i: T,
) -> JtiTerms<T> {
    let w = weighted(amp, config.tau0.value(), config.phi, config.tau.value(), t_s, t_i);
    groups(&w)
}

fn groups<T: Real>(w: &[Complex<T>; 4]) -> JtiTerms<T> {
    let two = T::lit(2.0);
    let cross = |j: usize, k: usize| two * (w[j] * w[k].conj()).re;
    JtiTerms {
        baseline: w.iter().map(|x| x.norm_sqr()).sum(),
        a_term: cross(0, 2) + cross(1, 3),
        b_term: cross(0, 3) + cross(1, 2),
        side_dips: cross(0, 1) + cross(2, 3),
    }
}

/// Joint temporal intensity of the modified HOM output at (t_s, t_i).
pub fn jti<T: Real>(model: &SourceModel<T>, config: &InterferometerConfig<T>, t_s: T, t_i: T) -> Result<T> {
    ensure_finite(t_s, "t_s")?;
    ensure_finite(t_i, "t_i")?;
    let amp = temporal_amplitude(model)?;
    Ok(jti_direct(&amp, config, t_s, t_i))
}

/// Amplitude centers in (t₊, t₋).
fn centers<T: Real>(tau0: T, tau: T) -> [(T, T); 4] {
    let half = T::lit(0.5);
    shifts(tau0, tau).map(|(ds, di)| (-half * (ds + di), -half * (ds - di)))
}

/// Default integration grid: every amplitude center ± 6/σ on each axis, with
/// at least 512 nodes and a step no larger than 0.25/σ.
pub fn default_time_grid<T: Real>(model: &SourceModel<T>, tau0: T, tau: T) -> Result<Grid2D<T>> {
    let cs = centers(tau0, tau);
    let axis = |sigma: T, pick: fn(&(T, T)) -> T, name| -> Result<Grid1D<T>> {
        let margin = T::lit(WINDOW_SIGMAS) / sigma;
        let lo = cs.iter().map(pick).fold(T::infinity(), T::min) - margin;
        let hi = cs.iter().map(pick).fold(T::neg_infinity(), T::max) + margin;
        let need = ((hi - lo) * sigma / T::lit(MAX_STEP_SIGMAS)).ceil().to_usize().unwrap_or(usize::MAX) + 1;
        Grid1D::span(lo, hi, need.max(DEFAULT_POINTS), name)
    };
    Grid2D::new(
        axis(model.sigma_plus(), |c| c.0, Axis::TimeSum)?,
        axis(model.sigma_minus(), |c| c.1, Axis::TimeDifference)?,
    )
}

/// Rate and its term groups from time-domain integration, all normalized by
/// 4∫∫|f|² (8πσ₊σ₋ for the Gaussian TPSA).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JtiRate<T> {
    pub rate: T,
    pub terms: JtiTerms<T>,
}

/// Integrates |Ψ|² over a (t₊, t₋) grid at delay `tau` and normalizes it.
///
/// The grid must cover every amplitude center by 6/σ on each axis with a step
/// of at most 0.25/σ; more than 1e-8 of the integral on the window boundary is
/// reported as a window error.
pub fn rate_from_jti<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    tau: T,
    time_grid: &Grid2D<T>,
) -> Result<JtiRate<T>> {
    ensure_finite(tau, "tau")?;
    if time_grid.coords()? != Coords::Temporal {
        return Err(Error::AxisMismatch(
            "JTI integration needs a (time-sum, time-difference) grid".into(),
        ));
    }
    let amp = temporal_amplitude(model)?;
    let (tau0, phi) = (config.tau0.value(), config.phi);
    let (rows, cols) = (time_grid.rows, time_grid.cols);
    for (g, sigma, pick) in [
        (&rows, model.sigma_plus(), 0usize),
        (&cols, model.sigma_minus(), 1usize),
    ] {
        if g.step > T::lit(MAX_STEP_SIGMAS) / sigma {
            return Err(Error::Resolution(format!(
                "{} step {} exceeds {}/sigma",
                g.axis.as_str(),
                g.step,
                MAX_STEP_SIGMAS
            )));
        }
        let margin = T::lit(WINDOW_SIGMAS) / sigma;
        let slack = T::lit(1e-6) * g.step;
        for c in centers(tau0, tau) {
            let x = if pick == 0 { c.0 } else { c.1 };
            if x - margin < g.start - slack || x + margin > g.end() + slack {
                return Err(Error::Window(format!(
                    "amplitude center {x} ± {margin} leaves the {} window [{}, {}]",
                    g.axis.as_str(),
                    g.start,
                    g.end()
                )));
            }
        }
    }

    let (nr, nc) = (rows.count, cols.count);
    let per_row: Vec<(T, JtiTerms<T>, T)> = (0..nr)
        .into_par_iter()
        .map(|r| {
            let tp = rows.at(r);
            let mut direct = T::zero();
            let mut terms = JtiTerms::zero();
            let mut edge = T::zero();
            for c in 0..nc {
                let tm = cols.at(c);
                let w = weighted(&amp, tau0, phi, tau, tp + tm, tp - tm);
                let v = (w[0] + w[1] + w[2] + w[3]).norm_sqr();
                direct = direct + v;
                terms = terms.add(groups(&w));
                if r == 0 || r + 1 == nr || c == 0 || c + 1 == nc {
                    edge = edge + v;
                }
            }
            (direct, terms, edge)
        })
        .collect();
    let cell = rows.step * cols.step;
    let (direct, terms, edge) = per_row.into_iter().fold(
        (T::zero(), JtiTerms::zero(), T::zero()),
        |(d, t, e), (d2, t2, e2)| (d + d2, t.add(t2), e + e2),
    );
    let total_mass = terms.baseline;
    if edge > T::lit(BOUNDARY_MASS_LIMIT) * total_mass {
        return Err(Error::Window(format!(
            "boundary holds {} of the JTI mass",
            edge / total_mass
        )));
    }
    let norm = T::lit(4.0) * model.tpsa.intensity_integral();
    Ok(JtiRate {
        rate: direct * cell / norm,
        terms: terms.scaled(cell / norm),
    })
}

/// [`rate_from_jti`] on [`default_time_grid`].
pub fn rate_from_jti_auto<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    tau: T,
) -> Result<JtiRate<T>> {
    let grid = default_time_grid(model, config.tau0.value(), tau)?;
    rate_from_jti(model, config, tau, &grid)
}
