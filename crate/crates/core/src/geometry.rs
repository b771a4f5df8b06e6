//! The candidate invariant region of the constant-field map and the
//! swap conjugacy between the map and its inverse.
//!
//! The region is bounded by the curve `y = ψ(x)` and its downward
//! shift by `a` over the strip `0 ≤ x ≤ a`, where
//! `ψ(x) = coeff0·h·x^k + τx` and `a` is the positive solution of
//! `ψ(a) = a`. Membership and the grid check implement the displayed
//! inequalities verbatim; [`verify_invariance`] reports how many grid
//! images actually leave the region rather than assuming containment.

use serde::Serialize;

use crate::error::Error;
use crate::map::{ipow, step_raw, ModelParams, State};
use crate::Result;

/// Tolerance absorbing rounding on the boundary curves.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Scalars describing the region for one parameter set.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantSetSpec {
    /// Right edge of the strip; `ψ(a) = a`.
    pub a: f64,
    /// Argmax of `ψ`: increasing before, decreasing after.
    pub x_hat: f64,
    /// Positive zero of `ψ`.
    pub x_hat0: f64,
    /// Argmax of `ψ(x) − x` on `[0, a]`.
    pub x_star_max: f64,
    /// Whether `2 < τ ≤ 1 + k^(k/(k−1))/(k−1)` holds.
    pub condition_ok: bool,
    coeff_h: f64,
    tau: f64,
    k: u32,
}

impl InvariantSetSpec {
    /// `ψ(x) = coeff0·h·x^k + τ·x`.
    pub fn psi(&self, x: f64) -> f64 {
        self.coeff_h * ipow(x, self.k) + self.tau * x
    }

    /// Lower boundary `max{0, ψ(x) − a}` of the fibre at `x`.
    pub fn lower(&self, x: f64) -> f64 {
        (self.psi(x) - self.a).max(0.0)
    }
}

/// Region scalars for a constant-field parameter set.
pub fn invariant_set(p: &ModelParams) -> Result<InvariantSetSpec> {
    let h = p.constant_field()?;
    let k = p.k();
    let kf = k as f64;
    let tau = p.tau();
    let denom = h * (tau - p.y0() - p.x1());
    let exp = 1.0 / (kf - 1.0);

    let a = ((tau - 1.0) / denom).powf(exp);
    let x_hat0 = (tau / denom).powf(exp);
    let x_hat = x_hat0 * (1.0 / kf).powf(exp);
    let x_star_max = ((tau - 1.0) / (h * kf * (tau - p.y0() - p.x1()))).powf(exp);
    let condition_ok = tau > 2.0 && tau <= 1.0 + kf.powf(kf / (kf - 1.0)) / (kf - 1.0);

    Ok(InvariantSetSpec {
        a,
        x_hat,
        x_hat0,
        x_star_max,
        condition_ok,
        coeff_h: p.coeff0() * h,
        tau,
        k,
    })
}

/// Membership test `0 ≤ x ≤ a`, `max{0, ψ(x)−a} ≤ y ≤ ψ(x)`, with
/// [`MEMBERSHIP_TOL`] slack on every inequality.
pub fn contains(spec: &InvariantSetSpec, s: State) -> Result<bool> {
    if !spec.condition_ok {
        return Err(Error::ConditionNotSatisfied);
    }
    Ok(margin(spec, s) >= -MEMBERSHIP_TOL)
}

/// Signed slack of the four membership inequalities (negative means
/// outside).
fn margin(spec: &InvariantSetSpec, s: State) -> f64 {
    let psi = spec.psi(s.x);
    let lower = (psi - spec.a).max(0.0);
    (s.x)
        .min(spec.a - s.x)
        .min(s.y - lower)
        .min(psi - s.y)
}

/// Grid check of the containment claim: samples `grid_n × grid_n`
/// points of the region, applies one forward step, and counts images
/// whose margin drops below `−`[`MEMBERSHIP_TOL`]. Returns the count
/// and the worst signed margin seen.
pub fn verify_invariance(
    spec: &InvariantSetSpec,
    p: &ModelParams,
    grid_n: usize,
) -> Result<(usize, f64)> {
    if !spec.condition_ok {
        return Err(Error::ConditionNotSatisfied);
    }
    let n = grid_n.max(2);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let x = spec.a * i as f64 / (n - 1) as f64;
        let hi = spec.psi(x);
        let lo = (hi - spec.a).max(0.0);
        for j in 0..n {
            let y = lo + (hi - lo) * j as f64 / (n - 1) as f64;
            let image = step_raw(p, State::new(x, y), 1);
            let m = margin(spec, image);
            worst = worst.min(m);
            if m < -MEMBERSHIP_TOL {
                violations += 1;
            }
        }
    }
    Ok((violations, worst))
}

/// Max distance over `samples` between `F(s)` and `(ℓ∘F⁻¹∘ℓ)(s)`,
/// where `ℓ` swaps coordinates. The two sides agree identically, so
/// this certifies the inverse formula.
pub fn conjugacy_residual(p: &ModelParams, samples: &[State]) -> f64 {
    let h = p.field().weight(1);
    let inverse = |s: State| State {
        x: s.y,
        y: p.coeff0() * h * ipow(s.y, p.k()) + p.tau() * s.y - s.x,
    };
    let mut worst: f64 = 0.0;
    for &s in samples {
        let forward = step_raw(p, s, 1);
        let swapped = State::new(s.y, s.x);
        let round = inverse(swapped);
        let other = State::new(round.y, round.x);
        worst = worst.max(forward.dist(&other));
    }
    worst
}
