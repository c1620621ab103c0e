//! Temporal and spectrally resolved two-photon interference in a modified
//! Hong-Ou-Mandel interferometer: an unbalanced Mach-Zehnder interferometer
//! (imbalance τ₀, phase φ) in the signal arm of a standard HOM setup.
//!
//! Every routine is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`). The `*64` aliases at the crate root fix the scalar to
//! `f64`, the precision every tolerance in the test suites is stated for.
//!
//! Units: linewidths and detunings are angular frequencies in rad/ps, delays
//! are in ps.

pub mod analysis;
pub mod comb;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod interferogram;
pub mod io;
pub mod jti_oracle;
pub mod kernels;
pub mod maps;
pub mod model;
pub mod scalar;
pub mod validation;

pub use error::{Error, Result};
pub use grid::{Axis, Coords, Grid1D, Grid2D};
pub use model::{
    coherence_time, tpsa_eval, Correlation, Delay, Detuning, GaussianTpsa, InterferometerConfig,
    Pump, SourceModel, Tpsa,
};
pub use scalar::Real;

pub use comb::{CombReport, Marginal, Spectrum, Tooth};
pub use interferogram::{Interferogram, Method};
pub use maps::{MapKind, SpectralMap};

pub type Grid1D64 = Grid1D<f64>;
pub type Grid2D64 = Grid2D<f64>;
pub type GaussianTpsa64 = GaussianTpsa<f64>;
pub type SourceModel64 = SourceModel<f64>;
pub type InterferometerConfig64 = InterferometerConfig<f64>;
pub type Interferogram64 = interferogram::Interferogram<f64>;
pub type SpectralMap64 = maps::SpectralMap<f64>;
pub type Spectrum64 = comb::Spectrum<f64>;
pub type CombReport64 = comb::CombReport<f64>;
pub type TemporalAmplitude64 = jti_oracle::TemporalAmplitude<f64>;
