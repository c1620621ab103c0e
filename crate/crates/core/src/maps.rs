//! Spectrally resolved two-dimensional interference maps, their projections
//! and Fourier-conjugate time maps.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{conjugate_grid, plan, transform_in_place, Sign};
use crate::grid::{to_sum_difference, Axis, Coords, Grid1D, Grid2D};
use crate::kernels::{cw_unchecked, modified_unchecked, noon_unchecked, standard_hom_unchecked};
use crate::model::{warn_if_short_imbalance, InterferometerConfig, SourceModel, Tpsa};
use crate::scalar::Real;

/// What a [`SpectralMap`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// Joint spectral intensity |f|².
    Jsi,
    /// Modified-HOM CPD.
    ModifiedHom,
    /// Standard HOM CPD.
    StandardHom,
    /// N00N-state CPD.
    Noon,
    /// CW CPD r_c(τ, Ω).
    FreqDelay,
    /// |r̃_c(τ, T)|, the transform of r_c along Ω.
    ConjugateTime,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Jsi => "jsi",
            MapKind::ModifiedHom => "modified-hom",
            MapKind::StandardHom => "standard-hom",
            MapKind::Noon => "noon",
            MapKind::FreqDelay => "freq-delay",
            MapKind::ConjugateTime => "conjugate-time",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "jsi" => MapKind::Jsi,
            "modified-hom" => MapKind::ModifiedHom,
            "standard-hom" => MapKind::StandardHom,
            "noon" => MapKind::Noon,
            "freq-delay" => MapKind::FreqDelay,
            "conjugate-time" => MapKind::ConjugateTime,
            other => return Err(Error::Parse(format!("unknown map kind '{other}'"))),
        })
    }
}

/// Parameters a map was generated with.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MapMetadata<T> {
    pub sigma_plus: Option<T>,
    pub sigma_minus: Option<T>,
    pub tau0: Option<T>,
    pub phi: Option<T>,
    pub tau: Option<T>,
}

impl<T: Real> MapMetadata<T> {
    fn from_model(model: &SourceModel<T>) -> Self {
        Self {
            sigma_plus: (!model.is_cw()).then(|| model.sigma_plus()),
            sigma_minus: Some(model.sigma_minus()),
            ..Self::default()
        }
    }
}

/// Non-negative values on a row-major [`Grid2D`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMap<T> {
    pub grid: Grid2D<T>,
    pub values: Vec<T>,
    pub kind: MapKind,
    pub metadata: MapMetadata<T>,
}

impl<T: Real> SpectralMap<T> {
    pub fn new(grid: Grid2D<T>, values: Vec<T>, kind: MapKind, metadata: MapMetadata<T>) -> Result<Self> {
        grid.coords()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.rows.count,
                grid.cols.count
            )));
        }
        Ok(Self {
            grid,
            values,
            kind,
            metadata,
        })
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.grid.cols.count + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let n = self.grid.cols.count;
        &self.values[row * n..(row + 1) * n]
    }

    pub fn column(&self, col: usize) -> Vec<T> {
        (0..self.grid.rows.count).map(|r| self.get(r, col)).collect()
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }
}

/// A one-dimensional profile over a uniform axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile<T> {
    pub grid: Grid1D<T>,
    pub values: Vec<T>,
}

fn fill<T: Real, F>(grid: &Grid2D<T>, f: F) -> Vec<T>
where
    F: Fn(T, T) -> T + Sync,
{
    let (rows, cols) = (grid.rows, grid.cols);
    (0..rows.count)
        .into_par_iter()
        .flat_map_iter(|r| {
            let x = rows.at(r);
            let f = &f;
            (0..cols.count).map(move |c| f(x, cols.at(c)))
        })
        .collect()
}

/// Evaluates `f(Ω₊, Ω₋)` over a detuning grid in either coordinate system.
fn fill_detuning<T: Real, F>(grid: &Grid2D<T>, f: F) -> Result<Vec<T>>
where
    F: Fn(T, T) -> T + Sync,
{
    match grid.coords()? {
        Coords::SignalIdler => Ok(fill(grid, |ws, wi| {
            let (op, om) = to_sum_difference(ws, wi);
            f(op, om)
        })),
        Coords::SumDifference => Ok(fill(grid, f)),
        other => Err(Error::AxisMismatch(format!(
            "detuning map requested on a {other:?} grid"
        ))),
    }
}

/// Joint spectral intensity |f|² over a detuning grid.
pub fn jsi_map<T: Real>(model: &SourceModel<T>, grid: &Grid2D<T>) -> Result<SpectralMap<T>> {
    let tpsa = &model.tpsa;
    let values = fill_detuning(grid, |op, om| tpsa.intensity(op, om))?;
    SpectralMap::new(*grid, values, MapKind::Jsi, MapMetadata::from_model(model))
}

/// CPD map of the modified HOM, standard HOM or N00N interferometer.
///
/// The delay is `config.tau`. For [`MapKind::Noon`] the phase `config.phi`
/// is the N00N carrier phase φ_N = ω_p τ; for [`MapKind::ModifiedHom`] it is
/// φ = ω_p τ₀.
pub fn spectral_map<T: Real>(
    model: &SourceModel<T>,
    config: &InterferometerConfig<T>,
    grid: &Grid2D<T>,
    kind: MapKind,
) -> Result<SpectralMap<T>> {
    let tpsa = &model.tpsa;
    let (tau0, phi, tau) = (config.tau0.value(), config.phi, config.tau.value());
    let values = match kind {
        MapKind::ModifiedHom => {
            fill_detuning(grid, |op, om| modified_unchecked(tpsa, tau0, phi, tau, op, om))?
        }
        MapKind::StandardHom => {
            fill_detuning(grid, |op, om| standard_hom_unchecked(tpsa, tau, op, om))?
        }
        MapKind::Noon => fill_detuning(grid, |op, om| noon_unchecked(tpsa, tau, phi, op, om))?,
        other => {
            return Err(Error::ContractViolation(format!(
                "spectral_map cannot produce a {} map",
                other.as_str()
            )))
        }
    };
    let mut metadata = MapMetadata::from_model(model);
    metadata.phi = Some(phi);
    metadata.tau = Some(tau);
    if kind == MapKind::ModifiedHom {
        metadata.tau0 = Some(tau0);
    }
    SpectralMap::new(*grid, values, kind, metadata)
}

/// CW frequency-delay interferogram r_c(τ, Ω); rows are delays, columns detunings.
pub fn freq_delay_map<T: Real>(
    model: &SourceModel<T>,
    tau_grid: &Grid1D<T>,
    omega_grid: &Grid1D<T>,
    tau0: T,
    phi: T,
) -> Result<SpectralMap<T>> {
    if !model.is_cw() {
        return Err(Error::ContractViolation(
            "frequency-delay map requires a CW-pumped source".into(),
        ));
    }
    warn_if_short_imbalance(model, tau0);
    let grid = Grid2D::new(tau_grid.with_axis(Axis::Tau), omega_grid.with_axis(Axis::Omega))?;
    let values = fill(&grid, |tau, omega| cw_unchecked(model, tau0, phi, tau, omega));
    let metadata = MapMetadata {
        tau0: Some(tau0),
        phi: Some(phi),
        ..MapMetadata::from_model(model)
    };
    SpectralMap::new(grid, values, MapKind::FreqDelay, metadata)
}

/// |r̃_c(τ, T)| with r̃_c(τ, T) = (1/√2π)∫r_c(τ, Ω)e^{iΩT}dΩ evaluated by a
/// centered FFT along Ω for every delay. The T axis has spacing 2π/(NΔΩ).
pub fn conjugate_time_map<T: Real>(map: &SpectralMap<T>) -> Result<SpectralMap<T>> {
    if map.kind != MapKind::FreqDelay || map.grid.coords()? != Coords::DelayDetuning {
        return Err(Error::ContractViolation(
            "conjugate-time map requires a frequency-delay map".into(),
        ));
    }
    let omega = map.grid.cols;
    if !(omega.step.is_finite() && omega.step > T::zero()) {
        return Err(Error::InvalidInput("detuning axis is not uniform".into()));
    }
    let tgrid = conjugate_grid(&omega, Axis::ConjugateTime)?;
    let fft = plan::<T>(omega.count, Sign::Plus);
    let norm = T::TAU().sqrt().recip();
    let values: Vec<T> = (0..map.grid.rows.count)
        .into_par_iter()
        .flat_map_iter(|r| {
            let mut buf: Vec<Complex<T>> = map
                .row(r)
                .iter()
                .map(|&v| Complex::new(v, T::zero()))
                .collect();
            transform_in_place(&mut buf, &omega, &tgrid, Sign::Plus, fft.as_ref());
            buf.into_iter().map(move |z| z.norm() * norm)
        })
        .collect();
    let grid = Grid2D::new(map.grid.rows, tgrid)?;
    SpectralMap::new(grid, values, MapKind::ConjugateTime, map.metadata)
}

fn trapezoid<T: Real>(values: impl ExactSizeIterator<Item = T>, step: T) -> T {
    let n = values.len();
    let half = T::lit(0.5);
    values
        .enumerate()
        .map(|(k, v)| if k == 0 || k + 1 == n { half * v } else { v })
        .sum::<T>()
        * step
}

/// Integrates a map over the complementary axis, keeping `axis`.
pub fn project<T: Real>(map: &SpectralMap<T>, axis: Axis) -> Result<Profile<T>> {
    let (rows, cols) = (map.grid.rows, map.grid.cols);
    if axis == rows.axis {
        let values = (0..rows.count)
            .map(|r| trapezoid(map.row(r).iter().copied(), cols.step))
            .collect();
        Ok(Profile { grid: rows, values })
    } else if axis == cols.axis {
        let values = (0..cols.count)
            .map(|c| trapezoid((0..rows.count).map(|r| map.get(r, c)), rows.step))
            .collect();
        Ok(Profile { grid: cols, values })
    } else {
        Err(Error::AxisMismatch(format!(
            "map has axes ({}, {}), not {}",
            rows.axis.as_str(),
            cols.axis.as_str(),
            axis.as_str()
        )))
    }
}
