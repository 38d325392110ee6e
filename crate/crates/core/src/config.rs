use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1/sqrt(5), the limit of the angle function of every rotational graph
/// end and the location of the asymptotes of the Gamma curve.
pub const INV_SQRT5: f64 = 0.447_213_595_499_957_94;

/// Largest hyperboloid radius before sinh/cosh overflow in f64.
pub const R_OVERFLOW: f64 = 700.0;

/// Canonical window on which asymptotic quantities are resolved at
/// double precision: exp(-2r) < 2e-7 at r = 8 while cosh(2r) is still
/// far from overflow at r = 12.
pub const ASYMPTOTIC_WINDOW: (f64, f64) = (8.0, 12.0);

/// Integrator and event tolerances. All tolerance constants used by the
/// library are centralized here.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    /// Residual tolerance for event location.
    pub event_tol: f64,
    /// Radius at which the series start through the rotation axis hands
    /// over to the adaptive integrator.
    pub r_min_axis: f64,
    /// Hard cap on accepted steps per integration.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 0.1,
            event_tol: 1e-12,
            r_min_axis: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let all_positive = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_step > 0.0
            && self.event_tol > 0.0
            && self.r_min_axis > 0.0;
        if !all_positive {
            return Err(Error::Contract(
                "integrator tolerances must be positive".into(),
            ));
        }
        if self.event_tol > self.abs_tol {
            return Err(Error::Contract(format!(
                "event_tol {} must not exceed abs_tol {}",
                self.event_tol, self.abs_tol
            )));
        }
        Ok(())
    }
}
