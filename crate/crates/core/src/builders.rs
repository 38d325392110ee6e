//! Canonical solitons: the bowl, the translating catenoids and the
//! vertical planes, plus the bowl-cap height tau(sigma), the radial
//! Dirichlet problem and the C^1 distance to the bowl.

use serde::{Deserialize, Serialize};

use crate::config::IntegratorConfig;
use crate::error::{Error, Result};
use crate::hyperbolic::PoincarePoint;
use crate::profile::{
    axis_start, integrate, switch_epsilon, Event, EventKind, ProfileState, Segment, StopSpec,
};

/// Hard cap on the profile radius; sinh/cosh stay far from overflow and
/// all asymptotic limits are resolved well before it.
pub const R_MAX_SUPPORTED: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    Bowl,
    CatenoidUpper,
    CatenoidLower,
    Generic,
}

/// A verified sampled generating curve with dense-output interpolation.
#[derive(Debug, Clone)]
pub struct SolitonProfile {
    pub kind: ProfileKind,
    pub segments: Vec<Segment>,
    /// Accepted-step states in integration order.
    pub samples: Vec<ProfileState>,
}

impl SolitonProfile {
    pub fn from_segments(kind: ProfileKind, segments: Vec<Segment>) -> Self {
        let mut samples = Vec::new();
        for seg in &segments {
            if samples.is_empty() {
                samples.push(seg.start_state());
            }
            let forward = seg.t1 >= seg.t0;
            for step in &seg.steps {
                let te = step.t1();
                let inside = if forward {
                    te > seg.t0 && te < seg.t1
                } else {
                    te < seg.t0 && te > seg.t1
                };
                if inside {
                    samples.push(seg.eval(te));
                }
            }
            samples.push(seg.end_state());
        }
        Self {
            kind,
            segments,
            samples,
        }
    }

    pub fn t_range(&self) -> (f64, f64) {
        let first = self.samples.first().map(|s| s.t).unwrap_or(0.0);
        let last = self.samples.last().map(|s| s.t).unwrap_or(0.0);
        (first, last)
    }

    pub fn eval(&self, t: f64) -> Result<ProfileState> {
        for seg in &self.segments {
            if seg.contains(t) {
                return Ok(seg.eval(t));
            }
        }
        Err(Error::Contract(format!(
            "t = {t} outside the profile parameter range {:?}",
            self.t_range()
        )))
    }

    /// Height and slope (f(r), f'(r)) of the profile seen as a radial
    /// graph at radius `r`. Requires r to be bracketed by consecutive
    /// samples with non-vanishing r'.
    pub fn graph(&self, r: f64) -> Result<(f64, f64)> {
        let s = self.state_at_radius(r)?;
        let rp = s.r_prime();
        if rp.abs() < 1e-9 {
            return Err(Error::Contract(format!(
                "profile is not graphical at r = {r} (vertical tangency)"
            )));
        }
        Ok((s.w, s.w_prime() / rp))
    }

    /// Locates the profile state at radius `r` by bisection on the dense
    /// output between the bracketing samples.
    pub fn state_at_radius(&self, r: f64) -> Result<ProfileState> {
        let n = self.samples.len();
        for i in 0..n {
            // snap only when the query is at a sample to the last bit;
            // anything looser would contaminate finite differences of
            // graph values
            if (self.samples[i].r - r).abs() < 1e-13 {
                return Ok(self.samples[i]);
            }
            if i + 1 < n {
                let (a, b) = (&self.samples[i], &self.samples[i + 1]);
                if (a.r - r) * (b.r - r) < 0.0 {
                    let (mut ta, mut tb) = (a.t, b.t);
                    let mut ga = a.r - r;
                    for _ in 0..200 {
                        let tm = 0.5 * (ta + tb);
                        if tm <= ta.min(tb) || tm >= ta.max(tb) {
                            break;
                        }
                        let gm = self.eval(tm)?.r - r;
                        if ga * gm <= 0.0 {
                            tb = tm;
                        } else {
                            ta = tm;
                            ga = gm;
                        }
                    }
                    return self.eval(0.5 * (ta + tb));
                }
            }
        }
        // event-located end samples sit within the event tolerance of the
        // nominal radius; accept queries at the exact nominal value
        for s in [self.samples.first(), self.samples.last()].into_iter().flatten() {
            if (s.r - r).abs() < 1e-9 {
                return Ok(*s);
            }
        }
        Err(Error::Contract(format!(
            "radius r = {r} not covered by the profile"
        )))
    }

    pub fn min_radius(&self) -> f64 {
        self.samples.iter().fold(f64::INFINITY, |m, s| m.min(s.r))
    }

    pub fn max_radius(&self) -> f64 {
        self.samples
            .iter()
            .fold(f64::NEG_INFINITY, |m, s| m.max(s.r))
    }
}

/// Builds the bowl soliton profile from the series start at the axis out
/// to r = r_max. Normalized so the vertex sits at height 0.
pub fn build_bowl(r_max: f64, cfg: &IntegratorConfig) -> Result<SolitonProfile> {
    if !(r_max > 0.0 && r_max <= R_MAX_SUPPORTED) {
        return Err(Error::Domain(format!(
            "bowl r_max must lie in (0, {R_MAX_SUPPORTED}]; got {r_max}"
        )));
    }
    let start = axis_start(cfg);
    let (seg, ev) = integrate(&start, cfg, 1, &StopSpec::to_r_max(r_max))?;
    expect_event(&ev, EventKind::RMaxReached)?;
    Ok(SolitonProfile::from_segments(ProfileKind::Bowl, vec![seg]))
}

/// A translating catenoid: neck at radius r0, turning circle at r1 > r0.
#[derive(Debug, Clone)]
pub struct Catenoid {
    pub neck_radius: f64,
    pub turning_radius: f64,
    /// State at the horizontal tangency (the height minimum circle).
    pub turning_state: ProfileState,
    /// State at the Gamma crossing of the upper wing (maximum of y(r)).
    pub gamma_crossing: ProfileState,
    pub upper: SolitonProfile,
    pub lower: SolitonProfile,
}

impl Catenoid {
    /// The shared neck sample (upper and lower wings glue here).
    pub fn neck_state(&self) -> ProfileState {
        self.upper.samples[0]
    }
}

/// Builds the translating catenoid with neck radius r0, following the
/// orbit forward (upper wing) and backward through the y = -1 turning
/// event with an eps switch (lower wing), both out to r = r_max.
pub fn build_catenoid(r0: f64, r_max: f64, cfg: &IntegratorConfig) -> Result<Catenoid> {
    if r0 <= 0.0 {
        return Err(Error::Domain(format!("neck radius must be positive: {r0}")));
    }
    if !(r_max > r0 && r_max <= R_MAX_SUPPORTED) {
        return Err(Error::Domain(format!(
            "catenoid r_max must lie in ({r0}, {R_MAX_SUPPORTED}]; got {r_max}"
        )));
    }
    let neck = ProfileState {
        t: 0.0,
        r: r0,
        w: 0.0,
        theta: std::f64::consts::FRAC_PI_2,
    };

    // Upper wing: forward through the Gamma crossing, then on to r_max.
    let stop_gamma = StopSpec {
        stop_on_gamma: true,
        ..StopSpec::to_r_max(r_max)
    };
    let (seg_a, ev_a) = integrate(&neck, cfg, 1, &stop_gamma)?;
    expect_event(&ev_a, EventKind::GammaCrossing)?;
    let gamma_crossing = ev_a.state;
    let (seg_b, ev_b) = integrate(&gamma_crossing, cfg, 1, &StopSpec::to_r_max(r_max))?;
    expect_event(&ev_b, EventKind::RMaxReached)?;
    let upper = SolitonProfile::from_segments(ProfileKind::CatenoidUpper, vec![seg_a, seg_b]);

    // Lower wing: backward to the horizontal tangency at (r1, y = -1),
    // switch eps, continue backward to r_max.
    let stop_turn = StopSpec {
        stop_on_tangency: true,
        ..StopSpec::to_r_max(r_max)
    };
    let (seg_c, ev_c) = integrate(&neck, cfg, -1, &stop_turn)?;
    expect_event(&ev_c, EventKind::HorizontalTangency)?;
    let turning_state = ev_c.state;
    let continuation = switch_epsilon(&ev_c)?;
    let (seg_d, ev_d) = integrate(&continuation, cfg, -1, &StopSpec::to_r_max(r_max))?;
    expect_event(&ev_d, EventKind::RMaxReached)?;
    let lower = SolitonProfile::from_segments(ProfileKind::CatenoidLower, vec![seg_c, seg_d]);

    let turning_radius = turning_state.r;
    if turning_radius <= r0 {
        return Err(Error::Integration(format!(
            "turning radius {turning_radius} not beyond the neck {r0}"
        )));
    }
    Ok(Catenoid {
        neck_radius: r0,
        turning_radius,
        turning_state,
        gamma_crossing,
        upper,
        lower,
    })
}

fn expect_event(ev: &Event, kind: EventKind) -> Result<()> {
    if ev.kind != kind {
        return Err(Error::Integration(format!(
            "expected {kind:?}, integration stopped at {:?} (state {:?})",
            ev.kind, ev.state
        )));
    }
    Ok(())
}

/// A vertical plane gamma x R over a geodesic of H^2: a trivial soliton
/// with nu = 0 and H = 0 identically, described exactly.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VerticalPlane {
    /// A point of the generating geodesic, disk model.
    pub through: PoincarePoint,
    /// Direction angle of the geodesic at that point.
    pub direction: f64,
}

impl VerticalPlane {
    pub fn new(through: PoincarePoint, direction: f64) -> Self {
        Self { through, direction }
    }

    pub fn angle_function(&self) -> f64 {
        0.0
    }

    pub fn mean_curvature(&self) -> f64 {
        0.0
    }

    /// H - nu, exactly zero.
    pub fn soliton_residual(&self) -> f64 {
        0.0
    }
}

/// Height of the bowl cap over the boundary circle of radius sigma:
/// tau(sigma) = f_bowl(sigma) - f_bowl(0), with f_bowl(0) = 0 by the
/// vertex normalization.
pub fn tau_from_bowl(bowl: &SolitonProfile, sigma: f64) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::Domain(format!("tau needs sigma >= 0; got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(0.0);
    }
    if sigma <= bowl.min_radius() {
        // inside the series-start radius
        return Ok(sigma * sigma / 2.0 + sigma.powi(4) / 24.0);
    }
    Ok(bowl.graph(sigma)?.0)
}

/// Convenience wrapper that builds its own bowl.
pub fn tau(sigma: f64, cfg: &IntegratorConfig) -> Result<f64> {
    if !(0.0..=R_MAX_SUPPORTED).contains(&sigma) {
        return Err(Error::Domain(format!(
            "tau needs sigma in [0, {R_MAX_SUPPORTED}]; got {sigma}"
        )));
    }
    let bowl = build_bowl(sigma.max(1.0), cfg)?;
    tau_from_bowl(&bowl, sigma)
}

/// Radial solution of the rotational Dirichlet problem on the disk of
/// radius R with constant boundary value c: u(r) = c - (f(R) - f(r)).
#[derive(Debug, Clone)]
pub struct RadialDirichlet {
    pub radius: f64,
    pub boundary_value: f64,
    bowl: SolitonProfile,
    f_at_boundary: f64,
}

impl RadialDirichlet {
    pub fn u(&self, r: f64) -> Result<f64> {
        let f = if r <= self.bowl.min_radius() {
            r * r / 2.0 + r.powi(4) / 24.0
        } else {
            self.bowl.graph(r)?.0
        };
        Ok(self.boundary_value - (self.f_at_boundary - f))
    }

    /// Residual of the radial graph equation computed from finite
    /// differences of u alone (independent of the ODE route):
    /// 2/sqrt(1+u'^2) - u''/(1+u'^2)^{3/2} - u' coth r/sqrt(1+u'^2).
    /// Sixth-order seven-point stencils with a wide step keep both the
    /// truncation error (amplified by coth r near the axis) and the
    /// interpolation noise of the dense output below the target.
    pub fn residual_fd(&self, r: f64, h: f64) -> Result<f64> {
        let mut u = [0.0; 7];
        for (k, v) in u.iter_mut().enumerate() {
            *v = self.u(r + (k as f64 - 3.0) * h)?;
        }
        let du = (-u[0] + 9.0 * u[1] - 45.0 * u[2] + 45.0 * u[4] - 9.0 * u[5] + u[6]) / (60.0 * h);
        let ddu = (2.0 * u[0] - 27.0 * u[1] + 270.0 * u[2] - 490.0 * u[3] + 270.0 * u[4]
            - 27.0 * u[5]
            + 2.0 * u[6])
            / (180.0 * h * h);
        let s = (1.0 + du * du).sqrt();
        Ok(2.0 / s - ddu / (s * s * s) - du / (r.tanh() * s))
    }
}

pub fn solve_rotational_dirichlet(
    radius: f64,
    boundary_value: f64,
    cfg: &IntegratorConfig,
) -> Result<RadialDirichlet> {
    if !(radius > 0.0 && radius <= R_MAX_SUPPORTED) {
        return Err(Error::Domain(format!(
            "Dirichlet radius must lie in (0, {R_MAX_SUPPORTED}]; got {radius}"
        )));
    }
    // the finite-difference residual oracle differentiates the dense
    // output twice, so the solve runs at tightened tolerances to keep
    // the interpolation error curvature below the residual target
    let cfg = IntegratorConfig {
        abs_tol: cfg.abs_tol.min(1e-12),
        rel_tol: cfg.rel_tol.min(1e-12),
        ..*cfg
    };
    let bowl = build_bowl(radius, &cfg)?;
    let f_at_boundary = bowl.graph(radius)?.0;
    Ok(RadialDirichlet {
        radius,
        boundary_value,
        bowl,
        f_at_boundary,
    })
}

/// C^0 and C^1 deviation of a graph from the bowl graph over a window,
/// after quotienting the additive constant by a least-squares vertical
/// shift.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct C1Distance {
    pub c0: f64,
    pub c1: f64,
    pub shift: f64,
}

pub fn c1_distance_to_bowl(
    profile: &SolitonProfile,
    window: (f64, f64),
    bowl: &SolitonProfile,
    n: usize,
) -> Result<C1Distance> {
    let (a, b) = window;
    if !(b > a) || n < 2 {
        return Err(Error::Contract(format!("bad comparison window [{a}, {b}]")));
    }
    let mut diffs = Vec::with_capacity(n);
    let mut dslopes = Vec::with_capacity(n);
    for i in 0..n {
        let r = a + (b - a) * i as f64 / (n - 1) as f64;
        let (g, gp) = profile.graph(r)?;
        let (f, fp) = bowl.graph(r)?;
        diffs.push(g - f);
        dslopes.push(gp - fp);
    }
    let shift = diffs.iter().sum::<f64>() / n as f64;
    let c0 = diffs
        .iter()
        .fold(0.0f64, |m, d| m.max((d - shift).abs()));
    let c1 = dslopes.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(C1Distance { c0, c1, shift })
}
