//! Arc-length profile system of a rotational generating curve and the
//! first-order phase system, with event detection and the series start
//! through the rotation axis.
//!
//! The arc-length form (r, w, theta) is the primary integration variable:
//! horizontal tangency (y = +-1, i.e. sin theta = 0) is a regular point of
//! this system, while the phase form (r, y) loses Lipschitz continuity
//! there through sqrt(1 - y^2).

use serde::{Deserialize, Serialize};

use crate::config::IntegratorConfig;
use crate::error::{Error, Result};
use crate::ode::{DenseStep, Dopri5, OdeEvent};

/// Arc-length profile data: t is arc length, r the distance to the axis,
/// w the height and theta the tangent angle, so r' = cos theta and
/// w' = sin theta identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileState {
    pub t: f64,
    pub r: f64,
    pub w: f64,
    pub theta: f64,
}

impl ProfileState {
    pub fn r_prime(&self) -> f64 {
        self.theta.cos()
    }

    pub fn w_prime(&self) -> f64 {
        self.theta.sin()
    }

    /// Angle function nu = r' with the orientation fixed globally.
    pub fn nu(&self) -> f64 {
        self.r_prime()
    }

    /// Orientation sign eps = sign(w').
    pub fn eps(&self) -> i8 {
        if self.w_prime() >= 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn orbit_sample(&self) -> OrbitSample {
        OrbitSample {
            r: self.r,
            y: self.r_prime(),
            eps: self.eps(),
        }
    }
}

/// A phase-space point (r, y) with orientation sign eps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub r: f64,
    pub y: f64,
    pub eps: i8,
}

/// What terminated an integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    /// r decreased to the configured axis guard radius.
    AxisReached,
    /// y = +-1, i.e. w' = 0: the profile tangent became horizontal.
    HorizontalTangency,
    /// The orbit crossed the Gamma curve (y' = 0 with eps y > 1/sqrt 5).
    GammaCrossing,
    RMaxReached,
    TMaxReached,
}

/// Terminating event with the state at which it fired.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub state: ProfileState,
    pub residual: f64,
}

/// Stopping conditions for one integration leg.
#[derive(Debug, Clone, Copy)]
pub struct StopSpec {
    pub r_max: f64,
    /// Arc-length budget measured from the start state.
    pub t_span: f64,
    /// Stop when r decreases to this radius (axis guard), if set.
    pub r_min: Option<f64>,
    pub stop_on_tangency: bool,
    pub stop_on_gamma: bool,
}

impl StopSpec {
    pub fn to_r_max(r_max: f64) -> Self {
        Self {
            r_max,
            t_span: 10.0 * r_max.max(1.0) + 10.0,
            r_min: None,
            stop_on_tangency: false,
            stop_on_gamma: false,
        }
    }
}

/// Right-hand side of the arc-length system:
/// (r', w', theta') = (cos theta, sin theta, 2 cos theta - sin theta coth r).
pub fn rhs_arclength(s: &ProfileState) -> Result<(f64, f64, f64)> {
    if s.r <= 0.0 {
        return Err(Error::AxisSingularity { r: s.r });
    }
    let (sin_t, cos_t) = s.theta.sin_cos();
    Ok((cos_t, sin_t, 2.0 * cos_t - sin_t / s.r.tanh()))
}

/// Geodesic curvature kappa_1 = theta' of the profile curve, from the ODE.
pub fn theta_prime(r: f64, theta: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::AxisSingularity { r });
    }
    let (sin_t, cos_t) = theta.sin_cos();
    Ok(2.0 * cos_t - sin_t / r.tanh())
}

/// Right-hand side of the first-order phase system:
/// (r', y') = (y, (1 - y^2) coth r - 2 eps y sqrt(1 - y^2)).
pub fn rhs_phase(o: &OrbitSample) -> Result<(f64, f64)> {
    if o.r <= 0.0 {
        return Err(Error::AxisSingularity { r: o.r });
    }
    let one_minus = (1.0 - o.y * o.y).max(0.0);
    Ok((
        o.y,
        one_minus / o.r.tanh() - 2.0 * f64::from(o.eps) * o.y * one_minus.sqrt(),
    ))
}

/// Series start at the rotation axis for the upward-oriented solution
/// with nu = 1 at the axis: f'(r) = r + r^3/6 - r^5/30 + O(r^7).
pub fn axis_start(cfg: &IntegratorConfig) -> ProfileState {
    let r = cfg.r_min_axis;
    let phi = r + r.powi(3) / 6.0 - r.powi(5) / 30.0;
    let w = r * r / 2.0 + r.powi(4) / 24.0 - r.powi(6) / 180.0;
    let t = r + r.powi(3) / 6.0 + r.powi(5) / 120.0;
    ProfileState {
        t,
        r,
        w,
        theta: phi.atan(),
    }
}

/// Truncated series f'(r) near the axis, exposed for oracle tests.
pub fn axis_series_phi(r: f64) -> f64 {
    r + r.powi(3) / 6.0 - r.powi(5) / 30.0
}

/// One integrated leg: dense steps plus the orientation sign along it.
#[derive(Debug, Clone)]
pub struct Segment {
    pub steps: Vec<DenseStep<3>>,
    pub t0: f64,
    pub t1: f64,
    start: [f64; 3],
    end: [f64; 3],
}

impl Segment {
    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = if self.t1 >= self.t0 {
            (self.t0, self.t1)
        } else {
            (self.t1, self.t0)
        };
        t >= lo - 1e-12 && t <= hi + 1e-12
    }

    pub fn eval(&self, t: f64) -> ProfileState {
        if (t - self.t0).abs() < 1e-300 || self.steps.is_empty() {
            return state_from(self.t0, &self.start);
        }
        if (t - self.t1).abs() < 1e-300 {
            return state_from(self.t1, &self.end);
        }
        for step in &self.steps {
            if step.contains(t) {
                return state_from(t, &step.eval(t));
            }
        }
        // clamp to the nearest endpoint
        if (t - self.t0).abs() < (t - self.t1).abs() {
            state_from(self.t0, &self.start)
        } else {
            state_from(self.t1, &self.end)
        }
    }

    pub fn start_state(&self) -> ProfileState {
        state_from(self.t0, &self.start)
    }

    pub fn end_state(&self) -> ProfileState {
        state_from(self.t1, &self.end)
    }
}

fn state_from(t: f64, y: &[f64; 3]) -> ProfileState {
    ProfileState {
        t,
        r: y[0],
        w: y[1],
        theta: y[2],
    }
}

/// Integrates the arc-length system from `start` in direction +-1 until
/// the first enabled event fires. Interior points are never a stopping
/// point: the leg ends at an event or errs with a diagnostic.
pub fn integrate(
    start: &ProfileState,
    cfg: &IntegratorConfig,
    direction: i8,
    stop: &StopSpec,
) -> Result<(Segment, Event)> {
    cfg.validate()?;
    if start.r <= 0.0 {
        return Err(Error::AxisSingularity { r: start.r });
    }
    let solver = Dopri5 {
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        max_step: cfg.max_step,
        max_steps: cfg.max_steps,
        event_tol: cfg.event_tol,
    };
    let dir = f64::from(direction.signum());
    let t_end = start.t + dir * stop.t_span;
    let y0 = [start.r, start.w, start.theta];

    let rhs = |_t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        // Trial stages of a large step may poke past the axis before the
        // r_min event has a chance to stop the leg. Clamping r keeps the
        // right-hand side finite but enormous there, so the error
        // controller rejects such steps and shrinks toward the event.
        let r = y[0].max(1e-12);
        let (sin_t, cos_t) = y[2].sin_cos();
        Ok([cos_t, sin_t, 2.0 * cos_t - sin_t / r.tanh()])
    };

    // Enabled events, tagged with their kind.
    let mut kinds: Vec<EventKind> = Vec::new();
    let mut funcs: Vec<Box<dyn Fn(f64, &[f64; 3]) -> f64>> = Vec::new();
    let r_max = stop.r_max;
    kinds.push(EventKind::RMaxReached);
    funcs.push(Box::new(move |_t, y: &[f64; 3]| y[0] - r_max));
    if let Some(r_min) = stop.r_min {
        kinds.push(EventKind::AxisReached);
        funcs.push(Box::new(move |_t, y: &[f64; 3]| y[0] - r_min));
    }
    if stop.stop_on_tangency {
        kinds.push(EventKind::HorizontalTangency);
        funcs.push(Box::new(|_t, y: &[f64; 3]| y[2].sin()));
    }
    if stop.stop_on_gamma {
        kinds.push(EventKind::GammaCrossing);
        funcs.push(Box::new(|_t, y: &[f64; 3]| {
            2.0 * y[2].cos() - y[2].sin() / y[0].tanh()
        }));
    }
    let refs: Vec<&dyn Fn(f64, &[f64; 3]) -> f64> =
        funcs.iter().map(|f| f.as_ref() as _).collect();

    let res = solver.integrate(rhs, start.t, y0, t_end, &refs)?;
    let (kind, state, residual) = match &res.event {
        Some(OdeEvent {
            index,
            t,
            y,
            residual,
        }) => (kinds[*index], state_from(*t, y), *residual),
        None => (
            EventKind::TMaxReached,
            state_from(res.solution.t_end, &res.solution.y_end),
            0.0,
        ),
    };
    let segment = Segment {
        steps: res.solution.steps,
        t0: start.t,
        t1: state.t,
        start: y0,
        end: [state.r, state.w, state.theta],
    };
    Ok((
        segment,
        Event {
            kind,
            state,
            residual,
        },
    ))
}

/// Continuation state after a horizontal-tangency event: the arc-length
/// system is regular there, so the state itself continues unchanged and
/// only the orientation sign eps (recomputed as sign(sin theta)) flips.
pub fn switch_epsilon(e: &Event) -> Result<ProfileState> {
    if e.kind != EventKind::HorizontalTangency {
        return Err(Error::Contract(format!(
            "switch_epsilon called on {:?} event",
            e.kind
        )));
    }
    Ok(e.state)
}
