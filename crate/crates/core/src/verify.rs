//! Pointwise identity checks: the soliton equation in its prescribed,
//! weighted and conformal formulations, principal curvatures and their
//! sign laws, the height Laplacian identity, the first variation of the
//! weighted area, and the height-extrema census.

use serde::{Deserialize, Serialize};

use crate::builders::SolitonProfile;
use crate::error::{Error, Result};
use crate::profile::{theta_prime, ProfileState};

/// Residual threshold for identities on built profiles.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Samples closer than this to y' = 0 (or to a vertical/horizontal
/// tangency) are excluded from the sign-law count.
pub const SIGN_TOL: f64 = 1e-8;

/// Tolerance for the orbit-consistency residual: sample increments
/// against the profile field at step midpoints. The midpoint comparison
/// carries an O(step^2) discretization error (about 1e-3 at the default
/// step cap), so this is a coarse check that the data actually lies on
/// an orbit, not a convergence-grade residual.
pub const ORBIT_TOL: f64 = 1e-2;

/// Principal curvatures of the surface of revolution generated by a
/// unit-speed curve with angle theta and curvature theta' at radius r:
/// kappa1 = r'w'' - r''w' (the profile curvature) and kappa2 = w' coth r.
pub fn principal_curvatures_general(r: f64, theta: f64, theta_p: f64) -> Result<(f64, f64)> {
    if r <= 0.0 {
        return Err(Error::AxisSingularity { r });
    }
    let (sin_t, cos_t) = theta.sin_cos();
    let (rp, wp) = (cos_t, sin_t);
    let rpp = -sin_t * theta_p;
    let wpp = cos_t * theta_p;
    let kappa1 = rp * wpp - rpp * wp;
    let kappa2 = wp / r.tanh();
    Ok((kappa1, kappa2))
}

/// Principal curvatures of a soliton profile sample, with theta' taken
/// from the profile equation (r'' analytic, no numerical differentiation).
pub fn principal_curvatures(s: &ProfileState) -> Result<(f64, f64)> {
    principal_curvatures_general(s.r, s.theta, theta_prime(s.r, s.theta)?)
}

/// H - nu with H = (kappa1 + kappa2)/2 and nu = r'.
pub fn soliton_residual(s: &ProfileState) -> Result<f64> {
    let (k1, k2) = principal_curvatures(s)?;
    Ok(0.5 * (k1 + k2) - s.nu())
}

/// The weighted mean curvature H_h = H - nu and the mean curvature of
/// the conformal metric, e^{-w/2} (H - nu). Both vanish on solitons.
pub fn weighted_and_conformal_h(s: &ProfileState) -> Result<(f64, f64)> {
    let hh = soliton_residual(s)?;
    Ok((hh, (-s.w / 2.0).exp() * hh))
}

/// Residual of the height identity w'' + r' coth(r) w' - 2 H nu, the
/// surface Laplacian of the height against twice the mean curvature
/// times the angle function.
pub fn laplacian_height_identity(s: &ProfileState) -> Result<f64> {
    let (k1, k2) = principal_curvatures(s)?;
    let tp = theta_prime(s.r, s.theta)?;
    let wpp = s.theta.cos() * tp;
    let h = 0.5 * (k1 + k2);
    Ok(wpp + s.r_prime() * s.w_prime() / s.r.tanh() - 2.0 * h * s.nu())
}

/// Everything the identity layer knows about one sample.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub t: f64,
    pub r: f64,
    pub w: f64,
    pub theta: f64,
    pub y: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub h: f64,
    pub h_weighted: f64,
    pub h_conformal: f64,
    pub residual: f64,
    pub laplacian_residual: f64,
}

impl CurvatureSample {
    pub fn from_state(s: &ProfileState) -> Result<Self> {
        let (kappa1, kappa2) = principal_curvatures(s)?;
        let h = 0.5 * (kappa1 + kappa2);
        let residual = h - s.nu();
        let h_weighted = residual;
        let h_conformal = (-s.w / 2.0).exp() * residual;
        let laplacian_residual = laplacian_height_identity(s)?;
        Ok(Self {
            t: s.t,
            r: s.r,
            w: s.w,
            theta: s.theta,
            y: s.nu(),
            kappa1,
            kappa2,
            h,
            h_weighted,
            h_conformal,
            residual,
            laplacian_residual,
        })
    }

    /// y' along the profile, analytic: y = cos theta, y' = -sin theta
    /// times theta'.
    pub fn y_prime(&self) -> f64 {
        match theta_prime(self.r, self.theta) {
            Ok(tp) => -self.theta.sin() * tp,
            Err(_) => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub t: f64,
    pub r: f64,
    pub w: f64,
}

/// Interior local extrema of the height along a sampled curve, detected
/// from sign changes of the discrete height increments.
pub fn height_extrema_census_samples(samples: &[ProfileState]) -> Vec<Extremum> {
    let mut out = Vec::new();
    let n = samples.len();
    if n < 3 {
        return out;
    }
    let mut prev_d: Option<f64> = None;
    for i in 1..n {
        let d = samples[i].w - samples[i - 1].w;
        if d == 0.0 {
            continue;
        }
        if let Some(p) = prev_d {
            if p > 0.0 && d < 0.0 {
                out.push(extremum_at(&samples[i - 1], ExtremumKind::Maximum));
            } else if p < 0.0 && d > 0.0 {
                out.push(extremum_at(&samples[i - 1], ExtremumKind::Minimum));
            }
        }
        prev_d = Some(d);
    }
    out
}

fn extremum_at(s: &ProfileState, kind: ExtremumKind) -> Extremum {
    Extremum {
        kind,
        t: s.t,
        r: s.r,
        w: s.w,
    }
}

pub fn height_extrema_census(profile: &SolitonProfile) -> Vec<Extremum> {
    height_extrema_census_samples(&profile.samples)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MaxResiduals {
    pub soliton: f64,
    pub weighted: f64,
    /// max of |e^{w/2} H_conformal|, i.e. the conformal residual with
    /// the weight scaled back out.
    pub conformal_scaled: f64,
    pub laplacian: f64,
    pub mean_convention: f64,
    /// Max deviation of the sample increments from the profile field at
    /// step midpoints. The pointwise curvature residuals take theta'
    /// from the profile equation, so this is the check that ties
    /// re-read data to an actual orbit; without it any smooth curve
    /// would satisfy the identities vacuously.
    pub orbit_consistency: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Thresholds {
    pub residual: f64,
    pub sign_tolerance: f64,
    pub orbit_consistency: f64,
}

/// Machine-readable verdict for one profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub profile_id: String,
    pub samples: usize,
    pub max_residuals: MaxResiduals,
    pub sign_violations: usize,
    pub extrema: Vec<Extremum>,
    pub thresholds: Thresholds,
}

impl VerificationReport {
    pub fn passes(&self) -> bool {
        let m = &self.max_residuals;
        m.soliton < self.thresholds.residual
            && m.weighted < self.thresholds.residual
            && m.conformal_scaled < self.thresholds.residual
            && m.laplacian < self.thresholds.residual
            && m.orbit_consistency < self.thresholds.orbit_consistency
            && self.sign_violations == 0
            && !self
                .extrema
                .iter()
                .any(|e| e.kind == ExtremumKind::Maximum)
    }
}

/// Builds a report from curvature samples (already computed, so the
/// same routine serves both built profiles and re-read CSV exports).
pub fn report_from_samples(profile_id: &str, samples: &[CurvatureSample]) -> VerificationReport {
    let mut max = MaxResiduals {
        soliton: 0.0,
        weighted: 0.0,
        conformal_scaled: 0.0,
        laplacian: 0.0,
        mean_convention: 0.0,
        orbit_consistency: 0.0,
    };
    let mut sign_violations = 0;
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let dt = b.t - a.t;
        if !(dt > 0.0 && dt <= 0.5) {
            continue;
        }
        let rm = 0.5 * (a.r + b.r);
        let thm = 0.5 * (a.theta + b.theta);
        if let Ok(tp) = theta_prime(rm, thm) {
            let dev = ((b.r - a.r) / dt - thm.cos())
                .abs()
                .max(((b.w - a.w) / dt - thm.sin()).abs())
                .max(((b.theta - a.theta) / dt - tp).abs());
            max.orbit_consistency = max.orbit_consistency.max(dev);
        }
    }
    for c in samples {
        max.soliton = max.soliton.max(c.residual.abs());
        max.weighted = max.weighted.max(c.h_weighted.abs());
        max.conformal_scaled = max
            .conformal_scaled
            .max(((c.w / 2.0).exp() * c.h_conformal).abs());
        max.laplacian = max.laplacian.max(c.laplacian_residual.abs());
        max.mean_convention = max
            .mean_convention
            .max((2.0 * c.h - (c.kappa1 + c.kappa2)).abs());

        let yp = c.y_prime();
        let sin_t = c.theta.sin();
        if yp.abs() > SIGN_TOL && sin_t.abs() > SIGN_TOL {
            let eps = sin_t.signum();
            if c.kappa1.abs() > SIGN_TOL && c.kappa1.signum() != (-eps * yp).signum() {
                sign_violations += 1;
            }
            if c.kappa2.abs() > SIGN_TOL && c.kappa2.signum() != eps.signum() {
                sign_violations += 1;
            }
        }
    }
    VerificationReport {
        profile_id: profile_id.to_string(),
        samples: samples.len(),
        max_residuals: max,
        sign_violations,
        extrema: Vec::new(),
        thresholds: Thresholds {
            residual: RESIDUAL_TOL,
            sign_tolerance: SIGN_TOL,
            orbit_consistency: ORBIT_TOL,
        },
    }
}

pub fn verify_profile(profile_id: &str, profile: &SolitonProfile) -> Result<VerificationReport> {
    let samples: Vec<CurvatureSample> = profile
        .samples
        .iter()
        .map(CurvatureSample::from_state)
        .collect::<Result<_>>()?;
    let mut report = report_from_samples(profile_id, &samples);
    report.extrema = height_extrema_census(profile);
    Ok(report)
}

// ---------------------------------------------------------------------
// First variation of the weighted area
// ---------------------------------------------------------------------

/// A point of a rotational patch: unit-speed generating curve with its
/// own curvature theta'. For soliton profiles theta' comes from the
/// profile equation; synthetic patches (planes, cylinders) supply their
/// own.
#[derive(Debug, Clone, Copy)]
pub struct PatchPoint {
    pub r: f64,
    pub w: f64,
    pub theta: f64,
    pub theta_prime: f64,
}

impl PatchPoint {
    pub fn mean_curvature(&self) -> f64 {
        let k1 = self.theta_prime;
        let k2 = self.theta.sin() / self.r.tanh();
        0.5 * (k1 + k2)
    }

    pub fn weighted_mean_curvature(&self) -> f64 {
        self.mean_curvature() - self.theta.cos()
    }
}

/// Smooth compactly supported bump on (center - half_width,
/// center + half_width), the classical mollifier profile normalized to
/// peak amplitude.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: f64, half_width: f64, amplitude: f64) -> Result<Self> {
        if half_width <= 0.0 {
            return Err(Error::Contract(format!(
                "bump half-width must be positive: {half_width}"
            )));
        }
        Ok(Self {
            center,
            half_width,
            amplitude,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    pub fn value(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.half_width;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        self.amplitude * (1.0 - 1.0 / (1.0 - x * x)).exp()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let x = (t - self.center) / self.half_width;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - x * x;
        self.value(t) * (-2.0 * x / (q * q)) / self.half_width
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FirstVariation {
    /// Finite-difference derivative of the weighted area at eps = 0.
    pub derivative: f64,
    /// Analytic value of the same derivative,
    /// -2 pi * int 2 (H - nu) omega e^{2w} sinh r dt.
    pub predicted: f64,
    /// Weighted area of the unperturbed patch over the bump support.
    pub area: f64,
    pub bump_sup: f64,
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss5<F: FnMut(f64) -> Result<f64>>(a: f64, b: f64, n: usize, mut f: F) -> Result<f64> {
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (mid, rad) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, wgt) in GAUSS5_NODES.iter().zip(GAUSS5_WEIGHTS) {
            total += wgt * rad * f(mid + rad * x)?;
        }
    }
    Ok(total)
}

/// Weighted area over the bump support of the patch pushed off by
/// eps * omega along the unit normal
/// (-w' cosh r cos, -w' cosh r sin, -w' sinh r, r').
///
/// The density is e^{2z}: differentiating this area in eps gives
/// -2 pi int (kappa1 + kappa2 - 2 nu) omega e^{2w} sinh r dt, and the
/// built profiles satisfy kappa1 + kappa2 = 2 nu, so they are exactly
/// the critical points of this functional.
fn perturbed_weighted_area<P>(patch: &P, bump: &Bump, eps: f64, n: usize) -> Result<f64>
where
    P: Fn(f64) -> Result<PatchPoint>,
{
    let (a, b) = bump.support();
    let area = gauss5(a, b, n, |t| {
        let p = patch(t)?;
        let (sin_t, cos_t) = p.theta.sin_cos();
        let (rp, wp) = (cos_t, sin_t);
        let (rpp, wpp) = (-sin_t * p.theta_prime, cos_t * p.theta_prime);
        let om = bump.value(t);
        let omp = bump.derivative(t);
        // (omega w')' and (omega r')'
        let d_ow = omp * wp + om * wpp;
        let d_or = omp * rp + om * rpp;
        let r_eps = p.r - eps * om * wp;
        if r_eps <= 0.0 {
            return Err(Error::Domain(format!(
                "perturbed radius crossed the axis at t = {t}"
            )));
        }
        let speed = ((rp - eps * d_ow).powi(2) + (wp + eps * d_or).powi(2)).sqrt();
        Ok((2.0 * (p.w + eps * om * rp)).exp() * speed * r_eps.sinh())
    })?;
    Ok(2.0 * std::f64::consts::PI * area)
}

/// First variation of the weighted area of a rotational patch under the
/// normal perturbation eps * omega. Fourth-order central differences in
/// eps against the analytic value
/// -2 pi int 2 (H - nu) omega e^{2w} sinh r dt.
pub fn weighted_area_first_variation<P>(
    patch: &P,
    span: (f64, f64),
    bump: &Bump,
) -> Result<FirstVariation>
where
    P: Fn(f64) -> Result<PatchPoint>,
{
    let (sa, sb) = bump.support();
    if sa <= span.0 || sb >= span.1 {
        return Err(Error::Contract(format!(
            "bump support [{sa}, {sb}] touches the patch boundary [{}, {}]",
            span.0, span.1
        )));
    }
    let n = 80;
    let delta = 1e-3;
    let a = |e: f64| perturbed_weighted_area(patch, bump, e, n);
    let derivative =
        (a(-2.0 * delta)? - 8.0 * a(-delta)? + 8.0 * a(delta)? - a(2.0 * delta)?) / (12.0 * delta);
    let predicted = -2.0
        * std::f64::consts::PI
        * gauss5(sa, sb, n, |t| {
            let p = patch(t)?;
            Ok(2.0 * p.weighted_mean_curvature() * bump.value(t) * (2.0 * p.w).exp() * p.r.sinh())
        })?;
    Ok(FirstVariation {
        derivative,
        predicted,
        area: a(0.0)?,
        bump_sup: bump.amplitude.abs(),
    })
}

/// Adapts a built profile to the patch interface; theta' from the
/// profile equation.
pub fn profile_patch(profile: &SolitonProfile) -> impl Fn(f64) -> Result<PatchPoint> + '_ {
    move |t| {
        let s = profile.eval(t)?;
        Ok(PatchPoint {
            r: s.r,
            w: s.w,
            theta: s.theta,
            theta_prime: theta_prime(s.r, s.theta)?,
        })
    }
}

/// A horizontal-plane annulus traversed inward (theta = pi, downward
/// normal): r(t) = r_start - t at constant height. H = 0, nu = -1, so
/// the weighted mean curvature is +1.
pub fn horizontal_annulus_patch(r_start: f64, height: f64) -> impl Fn(f64) -> Result<PatchPoint> {
    move |t| {
        let r = r_start - t;
        if r <= 0.0 {
            return Err(Error::AxisSingularity { r });
        }
        Ok(PatchPoint {
            r,
            w: height,
            theta: std::f64::consts::PI,
            theta_prime: 0.0,
        })
    }
}
