//! Built-in scenarios, in listing order.

use std::f64::consts::{FRAC_PI_2, PI};

use mhom::comb::Marginal;
use mhom::{Coords, MapKind};

use crate::scenario::{
    CombSpec, GridSpec, InterferometerSpec, Kind, PumpKind, Range, Scenario, SourceSpec, Span,
};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> Scenario,
}

impl Preset {
    pub fn scenario(&self) -> Scenario {
        (self.build)()
    }
}

fn base(name: &str, kind: Kind) -> Scenario {
    Scenario {
        name: name.to_string(),
        kind,
        format: Default::default(),
        source: SourceSpec::default(),
        interferometer: InterferometerSpec::default(),
        grid: GridSpec::default(),
        comb: CombSpec::default(),
    }
}

fn cw_source() -> SourceSpec {
    SourceSpec {
        pump: PumpKind::Cw,
        sigma_plus: 5.0,
        sigma_minus: 5.0,
    }
}

fn fig1b() -> Scenario {
    let mut s = base("fig1b", Kind::Interferogram);
    s.source = cw_source();
    s.interferometer.phases = vec![0.0, FRAC_PI_2, PI];
    s.interferometer.phase_labels = ["phi0", "phi_pi2", "phi_pi"].map(String::from).to_vec();
    s
}

fn fig2(name: &str, map: MapKind, tau0: f64, phi: f64, tau: f64) -> Scenario {
    let mut s = base(name, Kind::SpectralMap);
    s.interferometer.tau0 = tau0;
    s.interferometer.phi = phi;
    s.interferometer.tau = tau;
    s.grid.map = map;
    s.grid.coords = Coords::SignalIdler;
    s.grid.omega = Span {
        half_span: 15.0,
        count: 256,
    };
    s
}

fn fig3_common(name: &str, kind: Kind) -> Scenario {
    let mut s = base(name, kind);
    s.source = cw_source();
    s.interferometer.phi = FRAC_PI_2;
    s.grid.tau = Range {
        start: -5.0,
        end: 5.0,
        count: 401,
    };
    s.grid.omega = Span {
        half_span: 20.0,
        count: 512,
    };
    s
}

fn fig4_grid() -> Scenario {
    let mut s = base("fig4-grid", Kind::CombReport);
    s.comb.marginal = Marginal::Signal;
    s.comb.sigma_pairs = vec![[0.1, 5.0], [5.0, 0.1], [1.0, 5.0]];
    s.comb.tau0_values = vec![1.0, 1.5, 2.0, 2.5, 3.0];
    s
}

fn design() -> Scenario {
    let mut s = base("design", Kind::Design);
    s.source.sigma_plus = 0.1;
    s.source.sigma_minus = 5.0;
    s.comb.targets = vec![4, 6, 8, 10];
    s
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1b",
        description: "CW temporal interferograms, sigma_minus=5, tau0=3, phi in {0, pi/2, pi}",
        build: fig1b,
    },
    Preset {
        name: "fig2a",
        description: "standard HOM CPD map at tau=1, sigma=5",
        build: || fig2("fig2a", MapKind::StandardHom, 3.0, 0.0, 1.0),
    },
    Preset {
        name: "fig2b",
        description: "N00N CPD map at tau=1, phi=0, sigma=5",
        build: || fig2("fig2b", MapKind::Noon, 3.0, 0.0, 1.0),
    },
    Preset {
        name: "fig2c",
        description: "N00N CPD map at tau=1, phi=pi, sigma=5",
        build: || fig2("fig2c", MapKind::Noon, 3.0, PI, 1.0),
    },
    Preset {
        name: "fig2d",
        description: "modified HOM CPD map at tau=0, tau0=3, phi=0, sigma=5",
        build: || fig2("fig2d", MapKind::ModifiedHom, 3.0, 0.0, 0.0),
    },
    Preset {
        name: "fig2e",
        description: "modified HOM CPD map at tau=0, tau0=3, phi=pi, sigma=5",
        build: || fig2("fig2e", MapKind::ModifiedHom, 3.0, PI, 0.0),
    },
    Preset {
        name: "fig2f",
        description: "modified HOM CPD map at tau=1, tau0=3, phi=0, sigma=5",
        build: || fig2("fig2f", MapKind::ModifiedHom, 3.0, 0.0, 1.0),
    },
    Preset {
        name: "fig3",
        description: "CW frequency-delay map r_c(tau, Omega), tau0=3, phi=pi/2",
        build: || fig3_common("fig3", Kind::FreqDelayMap),
    },
    Preset {
        name: "fig3-conjugate",
        description: "conjugate-time map of the fig3 frequency-delay map",
        build: || fig3_common("fig3-conjugate", Kind::ConjugateMap),
    },
    Preset {
        name: "fig4-grid",
        description: "comb teeth of the signal marginal over (sigma_plus, sigma_minus) in {(0.1,5), (5,0.1), (1,5)} x tau0 in {1, 1.5, 2, 2.5, 3}",
        build: fig4_grid,
    },
    Preset {
        name: "design",
        description: "smallest tau0 giving 4, 6, 8, 10 teeth for sigma_plus=0.1, sigma_minus=5",
        build: design,
    },
    Preset {
        name: "validate",
        description: "closed form vs quadrature vs time-domain JTI over 20 configurations",
        build: || base("validate", Kind::Validate),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_required_ones_exist() {
        for n in ["fig1b", "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig3", "fig4-grid", "validate"] {
            assert!(find(n).is_some(), "{n}");
        }
        let mut names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), PRESETS.len());
    }

    #[test]
    fn fig4_grid_is_three_by_five() {
        let s = find("fig4-grid").unwrap().scenario();
        assert_eq!(s.comb.sigma_pairs.len(), 3);
        assert_eq!(s.comb.tau0_values, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn presets_survive_toml_round_trip() {
        for p in PRESETS {
            let s = p.scenario();
            let text = toml::to_string(&s).unwrap();
            assert_eq!(toml::from_str::<Scenario>(&text).unwrap(), s, "{}", p.name);
        }
    }
}
