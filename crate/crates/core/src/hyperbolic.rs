//! The two models of H^2 x R used throughout the library: the hyperboloid
//! in Lorentz-Minkowski 3-space and the Poincare disk with conformal
//! factor lambda = 2/(1 - u1^2 - u2^2).
//!
//! The model isometry is the stereographic map (u1, u2) = (x1, x2)/(1 + x3),
//! which is numerically stable for every x3 >= 1.

use serde::{Deserialize, Serialize};

use crate::config::R_OVERFLOW;
use crate::error::{Error, Result};

/// A point of H^2 x R in hyperboloid-model coordinates: (x1, x2, x3) on
/// the hyperquadric x1^2 + x2^2 - x3^2 = -1, x3 >= 1, plus height z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub z: f64,
}

/// A point of H^2 x R in Poincare-disk coordinates: (u1, u2) in the open
/// unit disk, plus height z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincarePoint {
    pub u1: f64,
    pub u2: f64,
    pub z: f64,
}

/// Base point of a tangent vector, in either chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmbientPoint {
    Hyperboloid(HyperboloidPoint),
    Poincare(PoincarePoint),
}

/// A tangent vector of H^2 x R expressed in the chart of its base point:
/// (d x1, d x2, d x3, d z) over the hyperboloid, (d u1, d u2, d z) over
/// the disk (third chart component unused there).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub components: [f64; 4],
    pub base: AmbientPoint,
}

impl HyperboloidPoint {
    /// Builds the point at hyperbolic distance `r` from the origin in the
    /// direction `(cos phi, sin phi)`, at height `z`.
    pub fn from_polar(r: f64, phi: f64, z: f64) -> Result<Self> {
        if r > R_OVERFLOW {
            return Err(Error::HyperboloidOverflow { r, max: R_OVERFLOW });
        }
        if r < 0.0 {
            return Err(Error::Domain(format!("negative radius {r}")));
        }
        Ok(Self {
            x1: r.sinh() * phi.cos(),
            x2: r.sinh() * phi.sin(),
            x3: r.cosh(),
            z,
        })
    }

    /// Residual of the hyperquadric constraint x1^2 + x2^2 - x3^2 + 1.
    pub fn quadric_residual(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 - self.x3 * self.x3 + 1.0
    }

    /// Hyperbolic distance of the H^2 part to the origin (0, 0, 1).
    pub fn dist_to_origin(&self) -> f64 {
        // acosh(x3) computed through the stereographic radius for small r
        // accuracy is not needed here; x3 >= 1 always.
        self.x3.acosh()
    }
}

impl PoincarePoint {
    pub fn new(u1: f64, u2: f64, z: f64) -> Result<Self> {
        let norm_sq = u1 * u1 + u2 * u2;
        if norm_sq >= 1.0 {
            return Err(Error::OutsideDisk { norm_sq });
        }
        Ok(Self { u1, u2, z })
    }

    pub fn norm_sq(&self) -> f64 {
        self.u1 * self.u1 + self.u2 * self.u2
    }
}

/// Stereographic projection hyperboloid -> disk: (x1, x2)/(1 + x3).
pub fn to_poincare(p: &HyperboloidPoint) -> PoincarePoint {
    let d = 1.0 + p.x3;
    PoincarePoint {
        u1: p.x1 / d,
        u2: p.x2 / d,
        z: p.z,
    }
}

/// Inverse stereographic map disk -> hyperboloid.
pub fn to_hyperboloid(q: &PoincarePoint) -> Result<HyperboloidPoint> {
    let rho_sq = q.norm_sq();
    if rho_sq >= 1.0 {
        return Err(Error::OutsideDisk { norm_sq: rho_sq });
    }
    let d = 1.0 - rho_sq;
    Ok(HyperboloidPoint {
        x1: 2.0 * q.u1 / d,
        x2: 2.0 * q.u2 / d,
        x3: (1.0 + rho_sq) / d,
        z: q.z,
    })
}

/// Conformal factor lambda = 2/(1 - u1^2 - u2^2) of the disk metric.
pub fn conformal_factor(q: &PoincarePoint) -> Result<f64> {
    let rho_sq = q.norm_sq();
    if rho_sq >= 1.0 {
        return Err(Error::OutsideDisk { norm_sq: rho_sq });
    }
    Ok(2.0 / (1.0 - rho_sq))
}

/// Hyperbolic distance from a disk point to the origin: 2 artanh |u|.
pub fn dist_to_origin(q: &PoincarePoint) -> Result<f64> {
    let rho_sq = q.norm_sq();
    if rho_sq >= 1.0 {
        return Err(Error::OutsideDisk { norm_sq: rho_sq });
    }
    Ok(2.0 * rho_sq.sqrt().atanh())
}

/// Pushes a disk-chart tangent vector (du1, du2, dz) forward through the
/// inverse stereographic map, returning hyperboloid-chart components
/// (dx1, dx2, dx3, dz).
pub fn push_forward_to_hyperboloid(v: &TangentVector) -> Result<TangentVector> {
    let q = match v.base {
        AmbientPoint::Poincare(q) => q,
        AmbientPoint::Hyperboloid(_) => {
            return Err(Error::Contract(
                "push_forward_to_hyperboloid expects a disk-based vector".into(),
            ))
        }
    };
    let (u1, u2) = (q.u1, q.u2);
    let d = 1.0 - q.norm_sq();
    let (du1, du2, dz) = (v.components[0], v.components[1], v.components[2]);
    // Jacobian of (2u1/d, 2u2/d, (1+rho^2)/d) with d = 1 - rho^2.
    let dd_du1 = -2.0 * u1;
    let dd_du2 = -2.0 * u2;
    let dx1 = 2.0 * du1 / d - 2.0 * u1 * (dd_du1 * du1 + dd_du2 * du2) / (d * d);
    let dx2 = 2.0 * du2 / d - 2.0 * u2 * (dd_du1 * du1 + dd_du2 * du2) / (d * d);
    let drho_sq = 2.0 * (u1 * du1 + u2 * du2);
    let dx3 = drho_sq / d + (1.0 + q.norm_sq()) * drho_sq / (d * d);
    let p = to_hyperboloid(&q)?;
    Ok(TangentVector {
        components: [dx1, dx2, dx3, dz],
        base: AmbientPoint::Hyperboloid(p),
    })
}

/// Product metric on hyperboloid-chart tangent vectors: Minkowski inner
/// product on the H^2 factor plus dz * dz.
pub fn minkowski_product_metric(a: &TangentVector, b: &TangentVector) -> f64 {
    let x = a.components;
    let y = b.components;
    x[0] * y[0] + x[1] * y[1] - x[2] * y[2] + x[3] * y[3]
}

/// Product metric on disk-chart tangent vectors: lambda^2 (du . dv) + dz dz.
pub fn poincare_metric(q: &PoincarePoint, a: &TangentVector, b: &TangentVector) -> Result<f64> {
    let lambda = conformal_factor(q)?;
    let x = a.components;
    let y = b.components;
    Ok(lambda * lambda * (x[0] * y[0] + x[1] * y[1]) + x[2] * y[2])
}
