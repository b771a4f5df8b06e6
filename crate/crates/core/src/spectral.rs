//! Fixed points of the constant-field map and their spectra.
//!
//! The Jacobian has unit determinant, so eigenvalues come from
//! `λ² − Tλ + 1 = 0` with `T` the trace; they are computed from this
//! characteristic polynomial rather than a general eigensolver so the
//! `λ₁λ₂ = 1` structure survives exactly.

use num_complex::Complex64;
use serde::Serialize;

use crate::map::{ipow, step_raw, ModelParams, State};
use crate::Result;

/// Absolute tolerance on each resonance locus equation.
pub const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedPointLabel {
    Origin,
    Interior,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPoint {
    pub location: State,
    pub label: FixedPointLabel,
    /// Distance between the location and its one-step image.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityType {
    /// Unreachable here (unit determinant); kept for completeness.
    Attracting,
    /// Unreachable here (unit determinant); kept for completeness.
    Repelling,
    Saddle,
    NonHyperbolic,
}

/// Interior-point regime in `τ` for fixed `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `2 < τ < 2(k+1)/(k−1)`: complex eigenvalues of modulus one.
    ComplexUnitModulus,
    /// `τ = 2(k+1)/(k−1)`: double eigenvalue −1.
    DoubleMinusOne,
    /// `τ > 2(k+1)/(k−1)`: real pair with `|λ₁| < 1 < |λ₂|`.
    RealSaddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Resonance {
    /// Double eigenvalue −1 (`τ = 2(k+1)/(k−1)`).
    OneTwo,
    /// Trace −1 (`2k − (k−1)τ = −1`), eigenvalues `e^{±2πi/3}`.
    OneThree,
    /// Eigenvalues `±i` (`τ = 2k/(k−1)`).
    OneFour,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub fixed_point: FixedPoint,
    /// `(λ₁, λ₂)` ordered by modulus (equal modulus: by imaginary part).
    pub eigenvalues: (Complex64, Complex64),
    pub type_tag: StabilityType,
    /// Present for interior fixed points only.
    pub regime: Option<Regime>,
    pub resonances: Vec<Resonance>,
    /// Principal argument of the eigenvalue with positive imaginary
    /// part, in `(0, π)`; complex regime only.
    pub rotation_angle: Option<f64>,
    /// `arctan((2k−(k−1)τ)/√((k−1)(τ−2)(2(k+1)−(k−1)τ)))`, the
    /// complement of `rotation_angle`; complex regime only.
    pub theta_tau: Option<f64>,
}

/// `(2(k+1)/(k−1), 2k/(k−1))`: the upper end of the unit-modulus
/// window and the strong-resonance locus inside it.
pub fn regime_thresholds(k: u32) -> (f64, f64) {
    let k = k as f64;
    (2.0 * (k + 1.0) / (k - 1.0), 2.0 * k / (k - 1.0))
}

/// The two fixed points `P₀ = (0,0)` and `P₁ = (x*, x*)` with
/// `x* = ((τ−2)/(h(τ−y₀−x₁)))^(1/(k−1))`.
pub fn fixed_points(p: &ModelParams) -> Result<(FixedPoint, FixedPoint)> {
    let h = p.constant_field()?;
    let tau = p.tau();
    let denom = h * (tau - p.y0() - p.x1());
    let xs = ((tau - 2.0) / denom).powf(1.0 / (p.k() as f64 - 1.0));

    let origin = fixed_point_at(p, State::new(0.0, 0.0), FixedPointLabel::Origin);
    let interior = fixed_point_at(p, State::new(xs, xs), FixedPointLabel::Interior);
    Ok((origin, interior))
}

fn fixed_point_at(p: &ModelParams, s: State, label: FixedPointLabel) -> FixedPoint {
    let image = step_raw(p, s, 1);
    FixedPoint {
        location: s,
        label,
        residual: image.dist(&s),
    }
}

/// Jacobian `[[coeff0·h·k·x^(k−1) + τ, −1], [1, 0]]` of the
/// constant-field map at `s`; its determinant is exactly 1.
pub fn jacobian(p: &ModelParams, s: State) -> Result<[[f64; 2]; 2]> {
    let h = p.constant_field()?;
    let t = p.coeff0() * h * p.k() as f64 * ipow(s.x, p.k() - 1) + p.tau();
    Ok([[t, -1.0], [1.0, 0.0]])
}

/// Spectral classification of a fixed point from [`fixed_points`].
pub fn classify(p: &ModelParams, fp: &FixedPoint) -> Result<SpectralReport> {
    let jac = jacobian(p, fp.location)?;
    let trace = jac[0][0];
    let k = p.k();
    let tau = p.tau();
    let (tau_ns, tau_strong) = regime_thresholds(k);

    let interior = fp.label == FixedPointLabel::Interior;
    let regime = if interior {
        Some(if (tau - tau_ns).abs() <= RESONANCE_TOL {
            Regime::DoubleMinusOne
        } else if tau < tau_ns {
            Regime::ComplexUnitModulus
        } else {
            Regime::RealSaddle
        })
    } else {
        None
    };

    let (eigenvalues, type_tag) = match regime {
        Some(Regime::DoubleMinusOne) => (
            (Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)),
            StabilityType::NonHyperbolic,
        ),
        Some(Regime::ComplexUnitModulus) => {
            let im = (4.0 - trace * trace).sqrt() / 2.0;
            (
                (
                    Complex64::new(trace / 2.0, -im),
                    Complex64::new(trace / 2.0, im),
                ),
                StabilityType::NonHyperbolic,
            )
        }
        _ => {
            // origin (trace = τ > 2) or interior real-saddle regime
            let disc = trace * trace - 4.0;
            if disc > 0.0 {
                let s = disc.sqrt();
                let (l1, l2) = ((trace - s) / 2.0, (trace + s) / 2.0);
                let (small, big) = if l1.abs() <= l2.abs() { (l1, l2) } else { (l2, l1) };
                (
                    (Complex64::new(small, 0.0), Complex64::new(big, 0.0)),
                    StabilityType::Saddle,
                )
            } else {
                let im = (-disc).max(0.0).sqrt() / 2.0;
                (
                    (
                        Complex64::new(trace / 2.0, -im),
                        Complex64::new(trace / 2.0, im),
                    ),
                    StabilityType::NonHyperbolic,
                )
            }
        }
    };

    let mut resonances = Vec::new();
    if interior {
        if (tau - tau_ns).abs() <= RESONANCE_TOL {
            resonances.push(Resonance::OneTwo);
        }
        let kf = k as f64;
        if (2.0 * kf - (kf - 1.0) * tau + 1.0).abs() <= RESONANCE_TOL {
            resonances.push(Resonance::OneThree);
        }
        if (tau - tau_strong).abs() <= RESONANCE_TOL {
            resonances.push(Resonance::OneFour);
        }
    }

    let (rotation_angle, theta_tau) = if regime == Some(Regime::ComplexUnitModulus) {
        let kf = k as f64;
        let radicand = (kf - 1.0) * (tau - 2.0) * (2.0 * (kf + 1.0) - (kf - 1.0) * tau);
        (
            Some(eigenvalues.1.im.atan2(eigenvalues.1.re)),
            Some(((2.0 * kf - (kf - 1.0) * tau) / radicand.sqrt()).atan()),
        )
    } else {
        (None, None)
    };

    Ok(SpectralReport {
        fixed_point: fp.clone(),
        eigenvalues,
        type_tag,
        regime,
        resonances,
        rotation_angle,
        theta_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::field::Field;

    fn params(k: u32, tau: f64, h: f64, y0: f64, x1: f64) -> ModelParams {
        ModelParams::new(k, tau, Field::constant(h).unwrap(), y0, x1).unwrap()
    }

    fn fig1() -> ModelParams {
        params(2, 3.0, 1.0, 0.5, 1.48589)
    }

    #[test]
    fn fixed_points_fig1() {
        let (p0, p1) = fixed_points(&fig1()).unwrap();
        assert_eq!(p0.location, State::new(0.0, 0.0));
        assert_eq!(p0.residual, 0.0);
        assert!((p1.location.x - 0.9860863219966275).abs() < 1e-15);
        assert!(p1.residual <= 1e-12 * (1.0 + p1.location.norm()));
    }

    #[test]
    fn fixed_point_cubic_case() {
        let (_, p1) = fixed_points(&params(3, 4.0, 1.0, 1.2, 0.8)).unwrap();
        assert!((p1.location.x - 1.0).abs() < 1e-15);
        assert!(p1.residual <= 1e-12 * (1.0 + p1.location.norm()));
    }

    #[test]
    fn non_constant_field_is_rejected() {
        let p = crate::lab::presets::preset("fig13").unwrap().params().unwrap();
        assert!(matches!(fixed_points(&p), Err(Error::NotConstantField)));
    }

    #[test]
    fn jacobian_values() {
        let p = fig1();
        let j0 = jacobian(&p, State::new(0.0, 0.0)).unwrap();
        assert_eq!(j0, [[3.0, -1.0], [1.0, 0.0]]);

        // at P₁ the top-left entry collapses to 2k − (k−1)τ
        let (_, p1) = fixed_points(&p).unwrap();
        let j1 = jacobian(&p, p1.location).unwrap();
        assert!((j1[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let p = fig1();
        let h = 1e-6;
        for &(x, y) in &[(0.4, 0.9), (1.3, 0.1), (0.75, 1.75)] {
            let jac = jacobian(&p, State::new(x, y)).unwrap();
            let f = |x: f64, y: f64| step_raw(&p, State::new(x, y), 1);
            let fd = [
                [
                    (f(x + h, y).x - f(x - h, y).x) / (2.0 * h),
                    (f(x, y + h).x - f(x, y - h).x) / (2.0 * h),
                ],
                [
                    (f(x + h, y).y - f(x - h, y).y) / (2.0 * h),
                    (f(x, y + h).y - f(x, y - h).y) / (2.0 * h),
                ],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((jac[r][c] - fd[r][c]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn origin_classification_tau_three() {
        let p = fig1();
        let (p0, _) = fixed_points(&p).unwrap();
        let rep = classify(&p, &p0).unwrap();
        assert!((rep.eigenvalues.0.re - 0.3819660112501051).abs() < 1e-12);
        assert!((rep.eigenvalues.1.re - 2.618033988749895).abs() < 1e-12);
        assert_eq!(rep.type_tag, StabilityType::Saddle);
        assert_eq!(rep.regime, None);
        assert!(rep.resonances.is_empty());
        assert_eq!(rep.rotation_angle, None);
    }

    #[test]
    fn interior_classification_fig1() {
        let p = fig1();
        let (_, p1) = fixed_points(&p).unwrap();
        let rep = classify(&p, &p1).unwrap();
        assert_eq!(rep.regime, Some(Regime::ComplexUnitModulus));
        assert_eq!(rep.type_tag, StabilityType::NonHyperbolic);
        assert!((rep.eigenvalues.1.re - 0.5).abs() < 1e-12);
        assert!((rep.eigenvalues.1.im - 0.8660254037844386).abs() < 1e-12);
        assert!((rep.eigenvalues.1.norm() - 1.0).abs() < 1e-12);
        let angle = rep.rotation_angle.unwrap();
        assert!((angle - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        // the printed arctan form is the complement of the true argument
        let tt = rep.theta_tau.unwrap();
        assert!((tt - std::f64::consts::FRAC_PI_6).abs() < 1e-12);
        assert!((angle + tt - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn double_minus_one_at_the_threshold() {
        let p = params(3, 4.0, 1.0, 1.2, 0.8);
        let (_, p1) = fixed_points(&p).unwrap();
        let rep = classify(&p, &p1).unwrap();
        assert_eq!(rep.regime, Some(Regime::DoubleMinusOne));
        assert_eq!(rep.eigenvalues.0, Complex64::new(-1.0, 0.0));
        assert_eq!(rep.eigenvalues.1, Complex64::new(-1.0, 0.0));
        assert_eq!(rep.resonances, vec![Resonance::OneTwo]);
        assert_eq!(rep.type_tag, StabilityType::NonHyperbolic);
    }

    #[test]
    fn regime_flips_around_the_threshold() {
        let (tau_ns, _) = regime_thresholds(2);
        assert_eq!(tau_ns, 6.0);
        for (tau, want) in [
            (tau_ns - 1e-6, Regime::ComplexUnitModulus),
            (tau_ns, Regime::DoubleMinusOne),
            (tau_ns + 1e-6, Regime::RealSaddle),
        ] {
            let p = params(2, tau, 1.0, 1.0, 1.0);
            let (_, p1) = fixed_points(&p).unwrap();
            let rep = classify(&p, &p1).unwrap();
            assert_eq!(rep.regime, Some(want), "tau = {tau}");
        }
    }

    #[test]
    fn strong_resonances() {
        // 1:4 locus for k=2 sits at τ = 4
        let p = params(2, 4.0, 1.0, 1.5, 1.0);
        let (_, p1) = fixed_points(&p).unwrap();
        let rep = classify(&p, &p1).unwrap();
        assert_eq!(rep.resonances, vec![Resonance::OneFour]);
        assert!(rep.eigenvalues.1.re.abs() < 1e-12);
        assert!((rep.eigenvalues.1.im - 1.0).abs() < 1e-12);

        // 1:3 locus for k=2 sits at τ = 5 (trace −1)
        let p = params(2, 5.0, 1.0, 1.5, 1.0);
        let (_, p1) = fixed_points(&p).unwrap();
        let rep = classify(&p, &p1).unwrap();
        assert_eq!(rep.resonances, vec![Resonance::OneThree]);
        let angle = rep.rotation_angle.unwrap();
        assert!((angle - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn thresholds_table() {
        assert_eq!(regime_thresholds(2), (6.0, 4.0));
        assert_eq!(regime_thresholds(3), (4.0, 3.0));
        let (a, b) = regime_thresholds(1_000_000);
        assert!((a - 2.0).abs() < 1e-5);
        assert!((b - 2.0).abs() < 1e-5);
    }

    #[test]
    fn unit_modulus_window_sweep() {
        // |λ| = 1 across the whole window, for several orders
        for k in 2..=6u32 {
            let (tau_ns, _) = regime_thresholds(k);
            for i in 0..50 {
                let tau = 2.0 + (tau_ns - 2.0) * (i as f64 + 0.5) / 50.0;
                let p = params(k, tau, 1.0, 0.49 * tau, 0.49 * tau);
                let (p0, p1) = fixed_points(&p).unwrap();
                let rep = classify(&p, &p1).unwrap();
                assert!((rep.eigenvalues.0.norm() - 1.0).abs() < 1e-10);
                assert!((rep.eigenvalues.1.norm() - 1.0).abs() < 1e-10);
                // unit determinant
                let prod = rep.eigenvalues.0 * rep.eigenvalues.1;
                assert!((prod.re - 1.0).abs() < 1e-10 && prod.im.abs() < 1e-10);
                // rotation angle satisfies 2cos(angle) = trace
                let jac = jacobian(&p, p1.location).unwrap();
                if let Some(angle) = rep.rotation_angle {
                    assert!((2.0 * angle.cos() - jac[0][0]).abs() < 1e-10);
                }
                // the origin stays a saddle, and the unreachable tags
                // stay unreachable
                let rep0 = classify(&p, &p0).unwrap();
                assert_eq!(rep0.type_tag, StabilityType::Saddle);
                for r in [&rep, &rep0] {
                    assert!(!matches!(
                        r.type_tag,
                        StabilityType::Attracting | StabilityType::Repelling
                    ));
                }
            }
        }
    }
}
