//! Data and mesh exporters: profile CSV (stable column order), OBJ
//! meshes of the surfaces of revolution, JSON reports. All files are
//! written atomically (temp + rename).

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::builders::SolitonProfile;
use crate::error::{Error, Result};
use crate::verify::CurvatureSample;

/// Ambient model used for mesh vertex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// (u1, u2, z): disk coordinates, u1^2 + u2^2 < 1.
    Poincare,
    /// (x1, x2, z): the first two hyperboloid coordinates with the height.
    Hyperboloid,
}

/// One CSV record. Column order is part of the format contract:
/// t,r,w,theta,y,eps,kappa1,kappa2,H,residual
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CsvRow {
    pub t: f64,
    pub r: f64,
    pub w: f64,
    pub theta: f64,
    pub y: f64,
    pub eps: i8,
    pub kappa1: f64,
    pub kappa2: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub residual: f64,
}

impl CsvRow {
    pub fn from_curvature(c: &CurvatureSample) -> Self {
        let sin_t = c.theta.sin();
        Self {
            t: c.t,
            r: c.r,
            w: c.w,
            theta: c.theta,
            y: c.y,
            eps: if sin_t > 0.0 {
                1
            } else if sin_t < 0.0 {
                -1
            } else {
                0
            },
            kappa1: c.kappa1,
            kappa2: c.kappa2,
            h: c.h,
            residual: c.residual,
        }
    }

    pub fn state(&self) -> crate::profile::ProfileState {
        crate::profile::ProfileState {
            t: self.t,
            r: self.r,
            w: self.w,
            theta: self.theta,
        }
    }
}

pub fn profile_rows(profile: &SolitonProfile) -> Result<Vec<CsvRow>> {
    profile
        .samples
        .iter()
        .map(|s| Ok(CsvRow::from_curvature(&CurvatureSample::from_state(s)?)))
        .collect()
}

pub fn write_profile_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in rows {
        wtr.serialize(row)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv flush: {e}")))?;
    atomic_write(path, &bytes)
}

pub fn read_profile_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?);
    }
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// Writes via a temp file in the same directory, then renames over the
/// target, so readers never observe a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Contract(format!("not a file path: {}", path.display())))?;
    let tmp = {
        let mut name = file_name.to_os_string();
        name.push(format!(".tmp-{}", std::process::id()));
        match dir {
            Some(d) => d.join(name),
            None => name.into(),
        }
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Triangulation-free quad mesh of the surface of revolution swept by a
/// profile, with the per-vertex data the verifier cares about.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RevolutionMesh {
    pub model: Model,
    /// Vertex positions in the requested model, (a, b, z).
    pub vertices: Vec<[f64; 3]>,
    /// Quads, indices into `vertices`, closed in the angle direction.
    pub faces: Vec<[usize; 4]>,
    /// Per-vertex (r, t, angle, nu, H).
    pub attributes: Vec<[f64; 5]>,
}

pub fn mesh_revolution(
    profile: &SolitonProfile,
    n_theta: usize,
    model: Model,
) -> Result<RevolutionMesh> {
    if n_theta < 8 {
        return Err(Error::Contract(format!(
            "n_theta must be at least 8; got {n_theta}"
        )));
    }
    let n = profile.samples.len();
    let mut vertices = Vec::with_capacity(n * n_theta);
    let mut attributes = Vec::with_capacity(n * n_theta);
    for s in &profile.samples {
        let c = CurvatureSample::from_state(s)?;
        for j in 0..n_theta {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let (sin_a, cos_a) = ang.sin_cos();
            let v = match model {
                Model::Poincare => {
                    let rho = (s.r / 2.0).tanh();
                    [rho * cos_a, rho * sin_a, s.w]
                }
                Model::Hyperboloid => {
                    let sh = s.r.sinh();
                    [sh * cos_a, sh * sin_a, s.w]
                }
            };
            vertices.push(v);
            attributes.push([s.r, s.t, ang, c.y, c.h]);
        }
    }
    let mut faces = Vec::with_capacity((n - 1) * n_theta);
    for i in 0..n - 1 {
        for j in 0..n_theta {
            let jn = (j + 1) % n_theta;
            faces.push([
                i * n_theta + j,
                (i + 1) * n_theta + j,
                (i + 1) * n_theta + jn,
                i * n_theta + jn,
            ]);
        }
    }
    Ok(RevolutionMesh {
        model,
        vertices,
        faces,
        attributes,
    })
}

pub fn write_obj(path: &Path, mesh: &RevolutionMesh) -> Result<()> {
    let mut out = String::with_capacity(mesh.vertices.len() * 48);
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", v[0], v[1], v[2]));
    }
    for f in &mesh.faces {
        out.push_str(&format!(
            "f {} {} {} {}\n",
            f[0] + 1,
            f[1] + 1,
            f[2] + 1,
            f[3] + 1
        ));
    }
    atomic_write(path, out.as_bytes())
}
