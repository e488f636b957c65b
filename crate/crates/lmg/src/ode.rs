//! Adaptive Dormand-Prince 5(4) integrator with 4th-order dense output.
//!
//! Classic embedded Runge-Kutta pair with FSAL and the quartic interpolant of
//! Hairer, Norsett & Wanner, "Solving Ordinary Differential Equations I" (DOPRI5).
//! Step control uses the WRMS error norm with safety factor 0.9 and step-scale
//! limits [0.2, 10].

use crate::error::{LmgError, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A2: [f64; 1] = [1.0 / 5.0];
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
// a7 equals the 5th-order weights b (FSAL)
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// embedded 4th-order weights
const BHAT: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
// dense-output coefficients (rcont5 weights)
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: f64,
    pub h_init: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 50_000_000,
            h_max: f64::INFINITY,
            h_init: 0.0, // 0 = choose automatically
        }
    }
}

/// One-step driver; `interpolate` covers the span of the last accepted step.
pub struct Dopri5<F: FnMut(f64, &[f64], &mut [f64])> {
    f: F,
    opts: AdaptiveOptions,
    n: usize,
    t: f64,
    t_prev: f64,
    y: Vec<f64>,
    k: [Vec<f64>; 7],
    ytmp: Vec<f64>,
    h: f64,
    // dense-output polynomial for the last accepted step
    rcont: [Vec<f64>; 5],
    steps_taken: usize,
    pub accepted: usize,
    pub rejected: usize,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Dopri5<F> {
    pub fn new(mut f: F, t0: f64, y0: &[f64], opts: AdaptiveOptions) -> Self {
        let n = y0.len();
        let mut k0 = vec![0.0; n];
        f(t0, y0, &mut k0);
        let h = if opts.h_init > 0.0 {
            opts.h_init
        } else {
            initial_step(&mut f, t0, y0, &k0, opts.rtol, opts.atol).min(opts.h_max)
        };
        Dopri5 {
            f,
            opts,
            n,
            t: t0,
            t_prev: t0,
            y: y0.to_vec(),
            k: [
                k0,
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
            ],
            ytmp: vec![0.0; n],
            h,
            rcont: [
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
            ],
            steps_taken: 0,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn t_prev(&self) -> f64 {
        self.t_prev
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Current derivative at `t` (FSAL stage).
    pub fn dydt(&self) -> &[f64] {
        &self.k[0]
    }

    /// Advance by one accepted step (internally retries rejected steps).
    pub fn step(&mut self) -> Result<()> {
        let n = self.n;
        loop {
            self.steps_taken += 1;
            if self.steps_taken > self.opts.max_steps {
                return Err(LmgError::Numerical(format!(
                    "integrator exceeded {} steps at t = {:.6e}",
                    self.opts.max_steps, self.t
                )));
            }
            let h = self.h;
            if !(h.is_finite()) || self.t + h == self.t {
                return Err(LmgError::Numerical(format!(
                    "step size underflow (h = {:.3e}); last good t = {:.12e}",
                    h, self.t
                )));
            }

            // stages 2..7
            let stage = |a: &[f64], k: &[Vec<f64>], y: &[f64], ytmp: &mut [f64]| {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, &aj) in a.iter().enumerate() {
                        acc += aj * k[j][i];
                    }
                    ytmp[i] = y[i] + h * acc;
                }
            };
            macro_rules! eval_stage {
                ($idx:expr, $coeffs:expr) => {{
                    stage(&$coeffs, &self.k, &self.y, &mut self.ytmp);
                    (self.f)(self.t + C[$idx] * h, &self.ytmp, &mut self.k[$idx]);
                }};
            }
            eval_stage!(1, A2);
            eval_stage!(2, A3);
            eval_stage!(3, A4);
            eval_stage!(4, A5);
            eval_stage!(5, A6);
            // 5th-order solution into ytmp (also stage-7 argument)
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..6 {
                    acc += B[j] * self.k[j][i];
                }
                self.ytmp[i] = self.y[i] + h * acc;
            }
            (self.f)(self.t + h, &self.ytmp, &mut self.k[6]);

            // WRMS error estimate
            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for j in 0..7 {
                    e += (B[j] - BHAT[j]) * self.k[j][i];
                }
                e *= h;
                let scale =
                    self.opts.atol + self.opts.rtol * self.y[i].abs().max(self.ytmp[i].abs());
                err_sq += (e / scale) * (e / scale);
            }
            let err = (err_sq / n as f64).sqrt();

            if err <= 1.0 {
                // dense output coefficients for [t, t+h]
                for i in 0..n {
                    let ydiff = self.ytmp[i] - self.y[i];
                    let bspl = h * self.k[0][i] - ydiff;
                    self.rcont[0][i] = self.y[i];
                    self.rcont[1][i] = ydiff;
                    self.rcont[2][i] = bspl;
                    self.rcont[3][i] = ydiff - h * self.k[6][i] - bspl;
                    let mut acc = 0.0;
                    for j in 0..7 {
                        acc += D[j] * self.k[j][i];
                    }
                    self.rcont[4][i] = h * acc;
                }
                self.t_prev = self.t;
                self.t += h;
                std::mem::swap(&mut self.y, &mut self.ytmp);
                self.k.swap(0, 6); // FSAL
                self.accepted += 1;

                let scale = (0.9 * err.powf(-0.2)).clamp(0.2, 10.0);
                self.h = (h * scale).min(self.opts.h_max);
                return Ok(());
            }
            self.rejected += 1;
            let scale = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            self.h = h * scale;
        }
    }

    /// Interpolate within the last accepted step, t in [t_prev, t].
    pub fn interpolate(&self, t: f64, out: &mut [f64]) {
        let h = self.t - self.t_prev;
        let theta = if h == 0.0 { 0.0 } else { (t - self.t_prev) / h };
        let th1 = 1.0 - theta;
        for i in 0..self.n {
            out[i] = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + th1 * (self.rcont[2][i]
                            + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])));
        }
    }
}

/// Starting step heuristic based on the initial derivative scale.
fn initial_step<F: FnMut(f64, &[f64], &mut [f64])>(
    f: &mut F,
    t0: f64,
    y0: &[f64],
    k0: &[f64],
    rtol: f64,
    atol: f64,
) -> f64 {
    let n = y0.len();
    let norm = |v: &[f64], w: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            let sc = atol + rtol * w[i].abs();
            s += (v[i] / sc) * (v[i] / sc);
        }
        (s / n as f64).sqrt()
    };
    let d0 = norm(y0, y0);
    let d1 = norm(k0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    // explicit Euler probe
    let mut y1 = vec![0.0; n];
    for i in 0..n {
        y1[i] = y0[i] + h0 * k0[i];
    }
    let mut k1 = vec![0.0; n];
    f(t0 + h0, &y1, &mut k1);
    let mut diff = vec![0.0; n];
    for i in 0..n {
        diff[i] = k1[i] - k0[i];
    }
    let d2 = norm(&diff, y0) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// Integrate and sample the solution on `t_grid` (strictly increasing, t_grid[0] >= t0).
pub fn solve_to_grid<F: FnMut(f64, &[f64], &mut [f64])>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_grid: &[f64],
    opts: AdaptiveOptions,
) -> Result<Vec<Vec<f64>>> {
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(LmgError::InvalidParameter(
                "time grid must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&first) = t_grid.first() {
        if first < t0 {
            return Err(LmgError::InvalidParameter(format!(
                "time grid starts at {first} before t0 = {t0}"
            )));
        }
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut stepper = Dopri5::new(f, t0, y0, opts);
    let mut buf = vec![0.0; y0.len()];
    for &tq in t_grid {
        if tq == t0 {
            out.push(y0.to_vec());
            continue;
        }
        while stepper.t() < tq {
            // do not overshoot far past the last requested point
            stepper.step()?;
        }
        if stepper.t() == tq {
            out.push(stepper.y().to_vec());
        } else {
            stepper.interpolate(tq, &mut buf);
            out.push(buf.clone());
        }
    }
    Ok(out)
}
