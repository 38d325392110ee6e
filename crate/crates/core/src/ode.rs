//! Adaptive Dormand-Prince 5(4) integrator with 4th-order dense output
//! and event location on the continuous extension.
//!
//! Events are scalar functions g(t, y); a root is located by bisection on
//! the dense output whenever g changes sign across an accepted step, and
//! the solution is truncated at the first root found.

use crate::error::{Error, Result};

// Butcher tableau of DOPRI5.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b - b_hat, the embedded 4th-order error weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights (Hairer & Wanner, DOPRI5 continuous extension).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step with its quartic interpolant.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluates the interpolant at `t` (expected inside the step).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i]
                + theta
                    * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
        }
        y
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = if self.h >= 0.0 {
            (self.t0, self.t1())
        } else {
            (self.t1(), self.t0)
        };
        t >= lo - 1e-14 && t <= hi + 1e-14
    }
}

/// Continuous solution over `[t_start, t_end]` (possibly `t_end < t_start`).
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub steps: Vec<DenseStep<N>>,
    pub t_start: f64,
    pub t_end: f64,
    pub y_start: [f64; N],
    pub y_end: [f64; N],
}

impl<const N: usize> Solution<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.steps.is_empty() || (t - self.t_start).abs() < 1e-300 {
            return self.y_start;
        }
        let forward = self.t_end >= self.t_start;
        // binary search on step start times
        let mut lo = 0usize;
        let mut hi = self.steps.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let after = if forward {
                t >= self.steps[mid].t0
            } else {
                t <= self.steps[mid].t0
            };
            if after {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.steps[lo].eval(t)
    }
}

/// A detected event: which event function fired and where.
#[derive(Debug, Clone)]
pub struct OdeEvent<const N: usize> {
    pub index: usize,
    pub t: f64,
    pub y: [f64; N],
    /// Residual |g(t, y)| at the located root.
    pub residual: f64,
}

pub struct Integration<const N: usize> {
    pub solution: Solution<N>,
    /// First event hit, if any; `None` means the integration ran to `t_end`.
    pub event: Option<OdeEvent<N>>,
}

/// Adaptive DOPRI5 driver.
pub struct Dopri5 {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub event_tol: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 0.1,
            max_steps: 1_000_000,
            event_tol: 1e-12,
        }
    }
}

type EventFn<'a, const N: usize> = &'a dyn Fn(f64, &[f64; N]) -> f64;

impl Dopri5 {
    /// Integrates `rhs` from `(t0, y0)` to `t_end`, stopping early at the
    /// first sign change of any event function.
    pub fn integrate<const N: usize, F>(
        &self,
        rhs: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        events: &[EventFn<N>],
    ) -> Result<Integration<N>>
    where
        F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let span = (t_end - t0).abs();
        if span == 0.0 {
            return Ok(Integration {
                solution: Solution {
                    steps: vec![],
                    t_start: t0,
                    t_end,
                    y_start: y0,
                    y_end: y0,
                },
                event: None,
            });
        }

        let mut t = t0;
        let mut y = y0;
        let mut k1 = rhs(t, &y)?;
        let mut h = dir * self.initial_step(&y, &k1, span);
        let mut steps: Vec<DenseStep<N>> = Vec::new();
        // Event sign state; None until |g| rises above the tolerance so a
        // start exactly on an event surface does not fire immediately.
        let mut signs: Vec<Option<f64>> = events
            .iter()
            .map(|g| {
                let v = g(t0, &y0);
                if v.abs() > self.event_tol {
                    Some(v)
                } else {
                    None
                }
            })
            .collect();

        for _ in 0..self.max_steps {
            if h.abs() > self.max_step {
                h = dir * self.max_step;
            }
            if (t + h - t_end) * dir > 0.0 {
                h = t_end - t;
            }
            if h.abs() < 1e-15 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow {
                    t,
                    state: y.to_vec(),
                });
            }

            let (y1, k, err) = self.try_step(&rhs, t, &y, &k1, h)?;
            if err <= 1.0 {
                // accept
                let step = make_dense(t, h, &y, &y1, &k);
                let t1 = t + h;

                // event scan on this step
                let mut best: Option<OdeEvent<N>> = None;
                for (idx, g) in events.iter().enumerate() {
                    let g1 = g(t1, &step.eval(t1));
                    match signs[idx] {
                        None => {
                            if g1.abs() > self.event_tol {
                                signs[idx] = Some(g1);
                            }
                        }
                        Some(g0) => {
                            if g0 * g1 <= 0.0 {
                                let (te, ye, res) = locate_root(g, &step, t, t1, g0, g1);
                                let better = match &best {
                                    None => true,
                                    Some(b) => (te - t) * dir < (b.t - t) * dir,
                                };
                                if better {
                                    best = Some(OdeEvent {
                                        index: idx,
                                        t: te,
                                        y: ye,
                                        residual: res,
                                    });
                                }
                            } else {
                                signs[idx] = Some(g1);
                            }
                        }
                    }
                }

                if let Some(ev) = best {
                    steps.push(step);
                    return Ok(Integration {
                        solution: Solution {
                            steps,
                            t_start: t0,
                            t_end: ev.t,
                            y_start: y0,
                            y_end: ev.y,
                        },
                        event: Some(ev),
                    });
                }

                steps.push(step);
                t = t1;
                y = y1;
                k1 = k[6]; // FSAL
                if (t - t_end) * dir >= 0.0 {
                    return Ok(Integration {
                        solution: Solution {
                            steps,
                            t_start: t0,
                            t_end: t,
                            y_start: y0,
                            y_end: y,
                        },
                        event: None,
                    });
                }
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                h *= fac;
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                h *= fac;
            }
        }
        Err(Error::Integration(format!(
            "step budget exhausted at t = {t}"
        )))
    }

    fn initial_step<const N: usize>(&self, y: &[f64; N], k: &[f64; N], span: f64) -> f64 {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            let sc = self.abs_tol + self.rel_tol * y[i].abs();
            d0 += (y[i] / sc).powi(2);
            d1 += (k[i] / sc).powi(2);
        }
        let h0 = if d1 > 1e-10 {
            0.01 * (d0.sqrt() / d1.sqrt()).max(1e-6)
        } else {
            1e-6
        };
        h0.min(self.max_step).min(span)
    }

    #[allow(clippy::type_complexity)]
    fn try_step<const N: usize, F>(
        &self,
        rhs: &F,
        t: f64,
        y: &[f64; N],
        k1: &[f64; N],
        h: f64,
    ) -> Result<([f64; N], [[f64; N]; 7], f64)>
    where
        F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    {
        let mut k = [[0.0; N]; 7];
        k[0] = *k1;
        let stage = |k: &[[f64; N]; 7], coeffs: &[f64]| {
            let mut out = *y;
            for (j, &a) in coeffs.iter().enumerate() {
                for i in 0..N {
                    out[i] += h * a * k[j][i];
                }
            }
            out
        };
        k[1] = rhs(t + C[1] * h, &stage(&k, &A2))?;
        k[2] = rhs(t + C[2] * h, &stage(&k, &A3))?;
        k[3] = rhs(t + C[3] * h, &stage(&k, &A4))?;
        k[4] = rhs(t + C[4] * h, &stage(&k, &A5))?;
        k[5] = rhs(t + C[5] * h, &stage(&k, &A6))?;
        let y1 = stage(&k, &B);
        k[6] = rhs(t + h, &y1)?;

        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = self.abs_tol + self.rel_tol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        Ok((y1, k, err))
    }
}

fn make_dense<const N: usize>(
    t: f64,
    h: f64,
    y0: &[f64; N],
    y1: &[f64; N],
    k: &[[f64; N]; 7],
) -> DenseStep<N> {
    let mut cont = [[0.0; N]; 5];
    for i in 0..N {
        let ydiff = y1[i] - y0[i];
        let bspl = h * k[0][i] - ydiff;
        cont[0][i] = y0[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k[6][i] - bspl;
        let mut d = 0.0;
        for (j, kj) in k.iter().enumerate() {
            d += D[j] * kj[i];
        }
        cont[4][i] = h * d;
    }
    DenseStep { t0: t, h, cont }
}

/// Bisection on the dense interpolant; the bracket is tightened to
/// machine resolution in t, which drives |g| below the event tolerance
/// for any event function with O(1) slope.
fn locate_root<const N: usize>(
    g: &dyn Fn(f64, &[f64; N]) -> f64,
    step: &DenseStep<N>,
    mut a: f64,
    mut b: f64,
    mut ga: f64,
    gb: f64,
) -> (f64, [f64; N], f64) {
    debug_assert!(ga * gb <= 0.0);
    let _ = gb;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break; // bracket at machine resolution
        }
        let gm = g(m, &step.eval(m));
        if ga * gm <= 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    let (ta, tb) = (a, b);
    let (ya, yb) = (step.eval(ta), step.eval(tb));
    let (ra, rb) = (g(ta, &ya).abs(), g(tb, &yb).abs());
    if ra <= rb {
        (ta, ya, ra)
    } else {
        (tb, yb, rb)
    }
}
