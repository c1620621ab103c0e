//! Cross-check of the three rate routes: closed form, frequency-domain
//! quadrature and time-domain JTI integration.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::interferogram::{rate_modified_pulsed, rate_modified_quadrature, QuadratureSpec};
use crate::jti_oracle::rate_from_jti_auto;
use crate::model::{InterferometerConfig, SourceModel};
use crate::scalar::Real;

/// Pairwise agreement required between routes.
pub const ROUTE_TOLERANCE: f64 = 2e-5;

/// One parameter set of the comparison matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteCase<T> {
    pub model: SourceModel<T>,
    pub config: InterferometerConfig<T>,
}

/// Rates from the three routes at one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteComparison<T> {
    pub case: RouteCase<T>,
    pub closed_form: T,
    pub quadrature: T,
    pub jti: T,
}

impl<T: Real> RouteComparison<T> {
    /// Largest pairwise absolute difference.
    pub fn spread(&self) -> T {
        let (a, b, c) = (self.closed_form, self.quadrature, self.jti);
        (a - b).abs().max((a - c).abs()).max((b - c).abs())
    }

    pub fn passes(&self) -> bool {
        self.spread() <= T::lit(ROUTE_TOLERANCE)
    }
}

/// Twenty pulsed configurations covering σ₊/σ₋ ∈ {0.02, 0.2, 1, 5, 50} and
/// φ ∈ {0, π/2, π, 3π/2}, with τ cycling through {−τ₀, 0, τ₀} and τ₀ > 1/σ₋.
pub fn route_matrix<T: Real>() -> Result<Vec<RouteCase<T>>> {
    let ratios = [0.02, 0.2, 1.0, 5.0, 50.0];
    let phases = [0.0, 0.5, 1.0, 1.5];
    let sigma_minus = [2.0, 3.0, 5.0];
    let tau0 = [1.0, 1.5, 0.8, 1.2];
    let mut cases = Vec::with_capacity(20);
    for (i, &ratio) in ratios.iter().enumerate() {
        for (j, &turns) in phases.iter().enumerate() {
            let k = i * phases.len() + j;
            let sm = sigma_minus[k % sigma_minus.len()];
            let t0 = tau0[k % tau0.len()];
            let tau = [-t0, 0.0, t0][k % 3];
            let model = SourceModel::pulsed(T::lit(ratio * sm), T::lit(sm))?;
            let config = InterferometerConfig::new(T::lit(t0), T::lit(turns) * T::PI(), T::lit(tau))?;
            cases.push(RouteCase { model, config });
        }
    }
    Ok(cases)
}

/// Evaluates all three routes at `case`, using default grids.
pub fn compare_routes<T: Real>(case: &RouteCase<T>) -> Result<RouteComparison<T>> {
    let (model, config) = (&case.model, &case.config);
    let (tau0, phi, tau) = (config.tau0.value(), config.phi, config.tau.value());
    let closed_form = rate_modified_pulsed(model, tau0, phi, tau)?;
    let quadrature = rate_modified_quadrature(model, tau0, phi, tau, &QuadratureSpec::auto(model, tau0, tau))?;
    let jti = rate_from_jti_auto(model, config, tau)?.rate;
    Ok(RouteComparison {
        case: *case,
        closed_form,
        quadrature,
        jti,
    })
}
