//! The second-order difference equation as a planar dynamical system.
//!
//! With `x = u_n`, `y = u_{n-1}` the recurrence becomes
//!
//! ```text
//! F_n(x, y) = (coeff0 · h(n) · x^k + τ·x − y,  x),   coeff0 = y0 + x1 − τ < 0,
//! ```
//!
//! an area-preserving Hénon/McMillan-type map (for constant `h`).
//! Trajectories start at `(x1, 1)` and the step leaving `(x_n, y_n)`
//! uses `h(n)`, so the first step uses `h(1)`.

use serde::Serialize;

use crate::error::Error;
use crate::field::Field;
use crate::Result;

/// Stepping halts once `|x|` exceeds this bound; the recurrence then
/// overflows within a few steps and no quantity of interest is larger.
pub const ESCAPE_BOUND: f64 = 1e12;

/// Validated parameters of the map.
///
/// `theta` is the root of `θ + 1/θ = τ` in `(0, 1)`; the map itself
/// depends only on `τ`, so the choice is a reporting convention.
#[derive(Debug, Clone, Serialize)]
pub struct ModelParams {
    k: u32,
    tau: f64,
    theta: f64,
    field: Field,
    y0: f64,
    x1: f64,
    coeff0: f64,
}

/// A point `(x, y) = (u_n, u_{n-1})` of the planar system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub fn new(x: f64, y: f64) -> Self {
        State { x, y }
    }

    pub fn dist(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// A finite forward orbit with positivity/escape annotations.
///
/// `points[m]` is the m-fold image of `points[0] = (x1, 1)`;
/// `first_nonpositive` is the first index `m` with `points[m].x ≤ 0`
/// (iteration continues past it; sign changes are data), while
/// `escaped_at` marks the index whose `|x|` exceeded [`ESCAPE_BOUND`]
/// and stopped the run.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub points: Vec<State>,
    pub first_nonpositive: Option<usize>,
    pub escaped_at: Option<usize>,
    pub max_abs: f64,
}

impl ModelParams {
    pub fn new(k: u32, tau: f64, field: Field, y0: f64, x1: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder(k));
        }
        if tau <= 2.0 || !tau.is_finite() {
            return Err(Error::InvalidTau(tau));
        }
        if y0 <= 0.0 || x1 <= 0.0 || !y0.is_finite() || !x1.is_finite() {
            return Err(Error::NonpositiveInitial { y0, x1 });
        }
        if y0 + x1 >= tau {
            return Err(Error::InitialConditionViolated { sum: y0 + x1, tau });
        }
        // root of θ² − τθ + 1 = 0 inside (0, 1)
        let theta = (tau - (tau * tau - 4.0).sqrt()) / 2.0;
        Ok(ModelParams {
            k,
            tau,
            theta,
            field,
            y0,
            x1,
            coeff0: y0 + x1 - tau,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    /// The cached map coefficient `y0 + x1 − τ` (always negative).
    pub fn coeff0(&self) -> f64 {
        self.coeff0
    }

    /// Field weight used by the step leaving index `n`.
    pub fn field_at(&self, n: usize) -> f64 {
        self.field.weight(n as i64)
    }

    /// The constant field value, when the field is constant on ℤ.
    pub fn constant_field(&self) -> Result<f64> {
        self.field.constant_value().ok_or(Error::NotConstantField)
    }
}

/// Integer power by repeated multiplication (`k` is small); keeps the
/// arithmetic identical across every call site and the test oracles.
pub(crate) fn ipow(x: f64, k: u32) -> f64 {
    match k {
        2 => x * x,
        3 => x * x * x,
        _ => {
            let mut r = 1.0;
            let mut b = x;
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    r *= b;
                }
                b *= b;
                e >>= 1;
            }
            r
        }
    }
}

pub(crate) fn step_raw(p: &ModelParams, s: State, n: usize) -> State {
    let h = p.field_at(n);
    State {
        x: p.coeff0 * h * ipow(s.x, p.k) + p.tau * s.x - s.y,
        y: s.x,
    }
}

/// One forward step `(x, y) ↦ (coeff0·h(n)·x^k + τx − y, x)`.
pub fn step_forward(p: &ModelParams, s: State, n: usize) -> Result<State> {
    let next = step_raw(p, s, n);
    if !next.x.is_finite() || next.x.abs() > ESCAPE_BOUND {
        return Err(Error::Overflow(format!(
            "forward step produced x = {}",
            next.x
        )));
    }
    Ok(next)
}

/// One backward step `(x, y) ↦ (y, coeff0·h(n)·y^k + τy − x)`, the
/// algebraic inverse of [`step_forward`] at the same index.
pub fn step_backward(p: &ModelParams, s: State, n: usize) -> Result<State> {
    let h = p.field_at(n);
    let next = State {
        x: s.y,
        y: p.coeff0 * h * ipow(s.y, p.k) + p.tau * s.y - s.x,
    };
    if !next.y.is_finite() || next.y.abs() > ESCAPE_BOUND {
        return Err(Error::Overflow(format!(
            "backward step produced y = {}",
            next.y
        )));
    }
    Ok(next)
}

/// Forward orbit of `(x1, 1)` for `n_steps` steps (so `n_steps + 1`
/// points unless the orbit escapes first).
pub fn iterate(p: &ModelParams, n_steps: usize) -> Trajectory {
    let mut points = Vec::with_capacity(n_steps + 1);
    let mut s = State::new(p.x1, 1.0);
    points.push(s);
    let mut first_nonpositive = if s.x <= 0.0 { Some(0) } else { None };
    let mut escaped_at = None;
    let mut max_abs = s.x.abs();

    for i in 0..n_steps {
        // points[i] is the state at index 1 + i, so the step uses h(1 + i)
        s = step_raw(p, s, 1 + i);
        points.push(s);
        let m = i + 1;
        max_abs = max_abs.max(s.x.abs());
        if first_nonpositive.is_none() && s.x <= 0.0 {
            first_nonpositive = Some(m);
        }
        if !s.x.is_finite() || s.x.abs() > ESCAPE_BOUND {
            escaped_at = Some(m);
            break;
        }
    }

    Trajectory {
        points,
        first_nonpositive,
        escaped_at,
        max_abs,
    }
}

/// `(max |x_m|, positivity held, never escaped)` for a trajectory.
pub fn boundedness_stats(t: &Trajectory) -> (f64, bool, bool) {
    (
        t.max_abs,
        t.first_nonpositive.is_none(),
        t.escaped_at.is_none(),
    )
}

/// First step index with `x ≤ 0`, or `None` when the orbit stays
/// strictly positive for all of `n_max` steps.
pub fn positivity_horizon(p: &ModelParams, n_max: usize) -> Option<usize> {
    let t = iterate(p, n_max);
    if let Some(m) = t.first_nonpositive {
        return Some(m);
    }
    // A positive escape forces the next iterate negative: the x^k term
    // dominates and its coefficient is negative.
    match t.escaped_at {
        Some(e) if e < n_max => Some(e + 1),
        _ => None,
    }
}
