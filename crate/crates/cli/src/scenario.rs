//! Scenario description shared by presets and TOML config files.

use mhom::comb::Marginal;
use mhom::{Coords, MapKind, Method};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Interferogram,
    SpectralMap,
    FreqDelayMap,
    ConjugateMap,
    CombReport,
    Design,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PumpKind {
    #[default]
    Pulsed,
    Cw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub source: SourceSpec,
    #[serde(default)]
    pub interferometer: InterferometerSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub comb: CombSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSpec {
    pub pump: PumpKind,
    /// Ignored for CW pumps.
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

impl Default for SourceSpec {
    fn default() -> Self {
        Self {
            pump: PumpKind::Pulsed,
            sigma_plus: 5.0,
            sigma_minus: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterferometerSpec {
    pub tau0: f64,
    pub phi: f64,
    pub tau: f64,
    /// Interferogram only: one curve per phase instead of `phi`.
    pub phases: Vec<f64>,
    /// Column names for `phases`.
    pub phase_labels: Vec<String>,
    pub method: Method,
    /// Quadrature nodes per detuning axis; automatic when absent.
    pub quadrature_points: Option<usize>,
}

impl Default for InterferometerSpec {
    fn default() -> Self {
        Self {
            tau0: 3.0,
            phi: 0.0,
            tau: 0.0,
            phases: Vec::new(),
            phase_labels: Vec::new(),
            method: Method::ClosedForm,
            quadrature_points: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub half_span: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Delay axis (ps).
    pub tau: Range,
    /// Detuning axis or axes (rad/ps).
    pub omega: Span,
    pub coords: Coords,
    pub map: MapKind,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            tau: Range {
                start: -5.0,
                end: 5.0,
                count: 1001,
            },
            omega: Span {
                half_span: 15.0,
                count: 256,
            },
            coords: Coords::SignalIdler,
            map: MapKind::ModifiedHom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CombSpec {
    pub marginal: Marginal,
    /// (σ₊, σ₋) rows; empty means the `source` section.
    pub sigma_pairs: Vec<[f64; 2]>,
    /// Columns; empty means `interferometer.tau0`.
    pub tau0_values: Vec<f64>,
    pub threshold: f64,
    pub window_sigmas: f64,
    /// Design targets.
    pub targets: Vec<usize>,
}

impl Default for CombSpec {
    fn default() -> Self {
        Self {
            marginal: Marginal::Signal,
            sigma_pairs: Vec::new(),
            tau0_values: Vec::new(),
            threshold: mhom::comb::DEFAULT_THRESHOLD,
            window_sigmas: mhom::comb::DEFAULT_WINDOW_SIGMAS,
            targets: vec![2, 4, 6, 8],
        }
    }
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tau0: Option<f64>,
    pub phi: Option<f64>,
    pub sigma_plus: Option<f64>,
    pub sigma_minus: Option<f64>,
    pub grid: Option<usize>,
    pub format: Option<Format>,
}

impl Scenario {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.tau0 {
            self.interferometer.tau0 = v;
            self.comb.tau0_values.clear();
        }
        if let Some(v) = o.phi {
            self.interferometer.phi = v;
            self.interferometer.phases.clear();
            self.interferometer.phase_labels.clear();
        }
        if let Some(v) = o.sigma_plus {
            self.source.sigma_plus = v;
            self.comb.sigma_pairs.clear();
        }
        if let Some(v) = o.sigma_minus {
            self.source.sigma_minus = v;
            self.comb.sigma_pairs.clear();
        }
        if let Some(n) = o.grid {
            self.grid.tau.count = n;
            self.grid.omega.count = n;
            if self.interferometer.method == Method::Quadrature {
                self.interferometer.quadrature_points = Some(n);
            }
        }
        if let Some(f) = o.format {
            self.format = f;
        }
    }
}
