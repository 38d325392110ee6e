//! Phase space Theta_eps = (0, inf) x (-1, 1): the Gamma curve, region
//! classification, monotonicity predictions and the no-equilibria scan.

use serde::{Deserialize, Serialize};

use crate::config::INV_SQRT5;
use crate::error::{Error, Result};
use crate::profile::{rhs_phase, OrbitSample};

/// Monotonicity regions of Theta_eps, cut by the Gamma curve and y = 0,
/// with explicit boundary tags for the measure-zero sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Lambda1Minus,
    Lambda1Plus,
    Theta1Minus,
    ThetaMinus1Plus,
    LambdaMinus1Minus,
    LambdaMinus1Plus,
    OnGamma,
    OnAxisY0,
}

/// Expected local behavior of an orbit seen as a graph y(r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Decreasing,
    Increasing,
    LocalExtremum,
    OrthogonalCrossing,
}

/// The inflection locus r = Gamma_eps(y) = artanh(sqrt(1-y^2)/(2 eps y)),
/// defined for eps y > 1/sqrt 5; asymptotes at y = +-1/sqrt 5.
pub fn gamma(y: f64, eps: i8) -> Result<f64> {
    let ey = f64::from(eps) * y;
    if ey <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma undefined for eps*y = {ey} <= 0"
        )));
    }
    if y.abs() <= INV_SQRT5 {
        return Err(Error::Domain(format!(
            "gamma has an asymptote at |y| = 1/sqrt(5); got y = {y}"
        )));
    }
    let arg = (1.0 - y * y).max(0.0).sqrt() / (2.0 * ey);
    Ok(arg.atanh())
}

/// Tolerance band used for the boundary tags OnGamma / OnAxisY0.
pub const BOUNDARY_TOL: f64 = 1e-12;

pub fn classify(o: &OrbitSample) -> Region {
    classify_with_tol(o, BOUNDARY_TOL)
}

pub fn classify_with_tol(o: &OrbitSample, tol: f64) -> Region {
    if o.y.abs() <= tol {
        return Region::OnAxisY0;
    }
    let ey = f64::from(o.eps) * o.y;
    if ey > INV_SQRT5 {
        // Gamma side matters here
        let g = gamma(o.y, o.eps).expect("domain checked");
        if (o.r - g).abs() <= tol {
            return Region::OnGamma;
        }
        let outside = o.r > g;
        return match (o.eps, outside) {
            (1, true) => Region::Lambda1Plus,
            (1, false) => Region::Lambda1Minus,
            (_, true) => Region::LambdaMinus1Plus,
            (_, false) => Region::LambdaMinus1Minus,
        };
    }
    match (o.eps >= 0, o.y > 0.0) {
        (true, true) => Region::Lambda1Minus, // Theta_1^+ below the asymptote
        (true, false) => Region::Theta1Minus,
        (false, true) => Region::ThetaMinus1Plus,
        (false, false) => Region::LambdaMinus1Minus,
    }
}

/// Sign of dy/dr predicted by the region classification. Points within
/// `BOUNDARY_TOL` of Gamma or y = 0 receive the extremum / orthogonal tags.
pub fn predict_monotonicity(o: &OrbitSample) -> Monotonicity {
    match classify(o) {
        Region::OnAxisY0 => Monotonicity::OrthogonalCrossing,
        Region::OnGamma => Monotonicity::LocalExtremum,
        // y > 0, r > Gamma is decreasing; for y < 0 the mirrored cases
        // (r < Gamma, or Gamma undefined) are decreasing as well.
        Region::Lambda1Plus | Region::LambdaMinus1Minus | Region::Theta1Minus => {
            Monotonicity::Decreasing
        }
        Region::Lambda1Minus | Region::LambdaMinus1Plus | Region::ThetaMinus1Plus => {
            Monotonicity::Increasing
        }
    }
}

/// Result of a brute-force grid scan for equilibria of the phase field.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EquilibriumScan {
    pub min_norm: f64,
    pub argmin: (f64, f64),
}

/// Minimum of ||F(r, y)|| over a rectangular grid in (0, inf) x (-1, 1);
/// positive everywhere since the system has no equilibrium points.
pub fn equilibrium_scan(
    r_range: (f64, f64),
    y_range: (f64, f64),
    n_r: usize,
    n_y: usize,
    eps: i8,
) -> Result<EquilibriumScan> {
    if r_range.0 <= 0.0 || y_range.0 <= -1.0 || y_range.1 >= 1.0 {
        return Err(Error::Domain(
            "equilibrium grid must lie inside (0,inf) x (-1,1)".into(),
        ));
    }
    let mut best = EquilibriumScan {
        min_norm: f64::INFINITY,
        argmin: (r_range.0, y_range.0),
    };
    for i in 0..n_r {
        let r = r_range.0 + (r_range.1 - r_range.0) * i as f64 / (n_r - 1).max(1) as f64;
        for j in 0..n_y {
            let y = y_range.0 + (y_range.1 - y_range.0) * j as f64 / (n_y - 1).max(1) as f64;
            let (fr, fy) = rhs_phase(&OrbitSample { r, y, eps })?;
            let norm = fr.hypot(fy);
            if norm < best.min_norm {
                best = EquilibriumScan {
                    min_norm: norm,
                    argmin: (r, y),
                };
            }
        }
    }
    Ok(best)
}

/// One row of a sampled phase portrait.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PortraitSample {
    pub r: f64,
    pub y: f64,
    /// Normalized direction of F.
    pub dir_r: f64,
    pub dir_y: f64,
    pub region: Region,
}

/// Sampled orbit field plus the Gamma polyline and asymptote lines,
/// CSV-ready for plotting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Portrait {
    pub eps: i8,
    pub field: Vec<PortraitSample>,
    /// Vertices (r, y) of the Gamma curve inside the grid.
    pub gamma: Vec<(f64, f64)>,
    /// Horizontal asymptote lines y = +-1/sqrt 5.
    pub asymptotes: [f64; 2],
}

pub fn portrait(
    eps: i8,
    r_range: (f64, f64),
    y_range: (f64, f64),
    n: usize,
) -> Result<Portrait> {
    if n < 2 {
        return Err(Error::Contract("portrait grid needs n >= 2".into()));
    }
    let mut field = Vec::with_capacity(n * n);
    for i in 0..n {
        let r = r_range.0 + (r_range.1 - r_range.0) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let y = y_range.0 + (y_range.1 - y_range.0) * j as f64 / (n - 1) as f64;
            let o = OrbitSample { r, y, eps };
            let (fr, fy) = rhs_phase(&o)?;
            let norm = fr.hypot(fy).max(1e-300);
            field.push(PortraitSample {
                r,
                y,
                dir_r: fr / norm,
                dir_y: fy / norm,
                region: classify(&o),
            });
        }
    }
    // Gamma polyline over its domain restricted to the y-grid range.
    let mut gamma_poly = Vec::new();
    let y_lo = if eps > 0 {
        (INV_SQRT5 + 1e-9).max(y_range.0)
    } else {
        y_range.0.max(-1.0 + 1e-12)
    };
    let y_hi = if eps > 0 {
        y_range.1.min(1.0 - 1e-12)
    } else {
        (-INV_SQRT5 - 1e-9).min(y_range.1)
    };
    let m = 4 * n;
    for j in 0..=m {
        let y = y_lo + (y_hi - y_lo) * j as f64 / m as f64;
        if let Ok(r) = gamma(y, eps) {
            if r >= r_range.0 && r <= r_range.1 {
                gamma_poly.push((r, y));
            }
        }
    }
    Ok(Portrait {
        eps,
        field,
        gamma: gamma_poly,
        asymptotes: [INV_SQRT5, -INV_SQRT5],
    })
}
