//! Tail behavior of rotational graph solitons: the phi initial-value
//! problem phi' = (1 + phi^2)(2 - phi coth r), the correction
//! psi = phi - 2 tanh r with its two-sided bounds, the closed-form model
//! profile, and extraction of the linear asymptote offset f(r) = 2r + k.

use serde::{Deserialize, Serialize};

use crate::config::IntegratorConfig;
use crate::error::{Error, Result};
use crate::ode::{Dopri5, Solution};

/// Dense solution of the phi initial-value problem on [R, r_end].
#[derive(Debug, Clone)]
pub struct PhiSolution {
    pub r_start: f64,
    pub phi0: f64,
    pub r_end: f64,
    solution: Solution<1>,
}

impl PhiSolution {
    pub fn phi(&self, r: f64) -> f64 {
        self.solution.eval(r)[0]
    }

    /// psi(r) = phi(r) - 2 tanh r.
    pub fn psi(&self, r: f64) -> f64 {
        self.phi(r) - 2.0 * r.tanh()
    }

    /// psi'(r) from the ODE: phi'(r) - 2/cosh^2 r.
    pub fn psi_prime(&self, r: f64) -> f64 {
        phi_rhs(r, self.phi(r)) - 2.0 / r.cosh().powi(2)
    }
}

fn phi_rhs(r: f64, phi: f64) -> f64 {
    (1.0 + phi * phi) * (2.0 - phi / r.tanh())
}

/// Integrates the phi equation from phi(R) = phi0 out to r_end.
pub fn solve_phi(r_start: f64, phi0: f64, r_end: f64, cfg: &IntegratorConfig) -> Result<PhiSolution> {
    if r_start <= 0.0 || phi0 <= 0.0 || r_end <= r_start {
        return Err(Error::Domain(format!(
            "solve_phi requires R > 0, phi0 > 0, r_end > R; got ({r_start}, {phi0}, {r_end})"
        )));
    }
    let solver = Dopri5 {
        abs_tol: cfg.abs_tol.min(1e-12),
        rel_tol: cfg.rel_tol.min(1e-12),
        max_step: cfg.max_step,
        max_steps: cfg.max_steps,
        event_tol: cfg.event_tol,
    };
    let res = solver.integrate(
        |r, y: &[f64; 1]| {
            if !y[0].is_finite() {
                return Err(Error::Integration(format!("phi blew up before r = {r}")));
            }
            Ok([phi_rhs(r, y[0])])
        },
        r_start,
        [phi0],
        r_end,
        &[],
    )?;
    Ok(PhiSolution {
        r_start,
        phi0,
        r_end,
        solution: res.solution,
    })
}

/// Lower bound for -psi wherever psi' > 0:
/// -psi > 2 tanh r / (cosh^2 r (1 + 4 tanh^2 r)).
pub fn psi_lower_bound(r: f64) -> f64 {
    2.0 * r.tanh() / (r.cosh().powi(2) * (1.0 + 4.0 * r.tanh().powi(2)))
}

/// Upper bound for -psi with slack eps0, valid for r past a threshold:
/// -psi < 2 tanh r / (cosh^2 r (1 + (2 tanh r - eps0)^2))
///        + eps0 tanh r / (1 + (2 tanh r - eps0)^2).
pub fn psi_upper_bound(r: f64, eps0: f64) -> f64 {
    let d = 1.0 + (2.0 * r.tanh() - eps0).powi(2);
    2.0 * r.tanh() / (r.cosh().powi(2) * d) + eps0 * r.tanh() / d
}

/// Right-hand side of the psi equation:
/// psi' = -(psi/tanh r)(1 + (2 tanh r + psi)^2) - 2/cosh^2 r.
pub fn psi_ode_rhs(r: f64, psi: f64) -> f64 {
    -(psi / r.tanh()) * (1.0 + (2.0 * r.tanh() + psi).powi(2)) - 2.0 / r.cosh().powi(2)
}

/// Closed-form model graph
/// f(r) = 2 log cosh r + (1/4) log(cosh^2 r / (5 cosh 2r - 3)).
pub fn model_f(r: f64) -> f64 {
    2.0 * r.cosh().ln() + 0.25 * (r.cosh().powi(2) / (5.0 * (2.0 * r).cosh() - 3.0)).ln()
}

/// Derivative of the model graph: 2 tanh r + model_psi(r).
pub fn model_phi(r: f64) -> f64 {
    2.0 * r.tanh() + model_psi(r)
}

/// Model correction psi(r) = -4 tanh r / (5 cosh 2r - 3).
pub fn model_psi(r: f64) -> f64 {
    -4.0 * r.tanh() / (5.0 * (2.0 * r).cosh() - 3.0)
}

/// The bounded log term of the model, log(cosh^2 r/(5 cosh 2r - 3));
/// tends to -log 10 from above.
pub fn model_log_term(r: f64) -> f64 {
    (r.cosh().powi(2) / (5.0 * (2.0 * r).cosh() - 3.0)).ln()
}

/// Exact limit offset of the model graph: k = -2 log 2 - (1/4) log 10.
pub fn model_offset() -> f64 {
    -2.0 * 2f64.ln() - 0.25 * 10f64.ln()
}

/// Offset k of the linear asymptote f(r) = 2r + k, extracted as the
/// windowed mean of f(r) - 2r, together with the variation over the
/// window and a flag when the window starts below r = 8.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymptoticOffset {
    pub k: f64,
    pub variation: f64,
    pub window: (f64, f64),
    pub below_resolved_window: bool,
}

pub fn asymptotic_offset<F>(f: F, window: (f64, f64), n: usize) -> Result<AsymptoticOffset>
where
    F: Fn(f64) -> f64,
{
    let (a, b) = window;
    if !(b >= a) || n < 2 {
        return Err(Error::Contract(format!("bad offset window [{a}, {b}]")));
    }
    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = f(r) - 2.0 * r;
        sum += v;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(AsymptoticOffset {
        k: sum / n as f64,
        variation: hi - lo,
        window,
        below_resolved_window: a < 8.0,
    })
}

/// First radius in [lo, hi] past which `pred` holds on a fine grid all
/// the way to hi; the measured counterpart of the existential thresholds.
pub fn measured_threshold<P>(pred: P, lo: f64, hi: f64, n: usize) -> Option<f64>
where
    P: Fn(f64) -> bool,
{
    let mut threshold = None;
    for i in 0..n {
        let r = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        if pred(r) {
            if threshold.is_none() {
                threshold = Some(r);
            }
        } else {
            threshold = None;
        }
    }
    threshold
}
