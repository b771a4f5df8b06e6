//! JSON report structures (stable key order = declaration order) and
//! the CSV float convention: 17 significant digits, `.` separator,
//! lossless for `f64`.

use num_complex::Complex64;
use serde::Serialize;

use crate::field::Field;
use crate::geometry::{self, InvariantSetSpec};
use crate::law::{
    normalisability_check, rho_residual, tail_series_verdict, verify_solution_ratio, BoundaryLaw,
    LawKind, SeriesVerdict, Side,
};
use crate::map::{ModelParams, Trajectory};
use crate::spectral::{classify, fixed_points, Regime, Resonance, SpectralReport, StabilityType};
use crate::Result;

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsEcho {
    pub k: u32,
    pub tau: f64,
    pub theta: f64,
    pub field: Field,
    pub y0: f64,
    pub x1: f64,
    pub coeff0: f64,
}

impl From<&ModelParams> for ParamsEcho {
    fn from(p: &ModelParams) -> Self {
        ParamsEcho {
            k: p.k(),
            tau: p.tau(),
            theta: p.theta(),
            field: p.field().clone(),
            y0: p.y0(),
            x1: p.x1(),
            coeff0: p.coeff0(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueEcho {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

impl From<Complex64> for EigenvalueEcho {
    fn from(z: Complex64) -> Self {
        EigenvalueEcho {
            re: z.re,
            im: z.im,
            modulus: z.norm(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub location: [f64; 2],
    pub residual: f64,
    pub eigenvalues: [EigenvalueEcho; 2],
    pub type_tag: StabilityType,
    pub regime: Option<Regime>,
    pub resonances: Vec<Resonance>,
    pub rotation_angle: Option<f64>,
    pub theta_tau: Option<f64>,
}

impl From<SpectralReport> for FixedPointReport {
    fn from(r: SpectralReport) -> Self {
        FixedPointReport {
            location: [r.fixed_point.location.x, r.fixed_point.location.y],
            residual: r.fixed_point.residual,
            eigenvalues: [r.eigenvalues.0.into(), r.eigenvalues.1.into()],
            type_tag: r.type_tag,
            regime: r.regime,
            resonances: r.resonances,
            rotation_angle: r.rotation_angle,
            theta_tau: r.theta_tau,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralJson {
    pub params: ParamsEcho,
    pub origin: FixedPointReport,
    pub interior: FixedPointReport,
}

/// Fixed points plus classification for a constant-field parameter set.
pub fn spectral_json(p: &ModelParams) -> Result<SpectralJson> {
    let (p0, p1) = fixed_points(p)?;
    Ok(SpectralJson {
        params: p.into(),
        origin: classify(p, &p0)?.into(),
        interior: classify(p, &p1)?.into(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertionReport {
    pub expected_first_nonpositive: Option<(usize, usize)>,
    pub expected_positive: Option<bool>,
    pub expected_regime: Option<Regime>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryReport {
    pub name: String,
    pub params: ParamsEcho,
    pub n_steps: usize,
    pub points: usize,
    pub first_nonpositive: Option<usize>,
    pub escaped_at: Option<usize>,
    pub max_abs: f64,
    pub is_positive: bool,
    pub is_bounded: bool,
    pub spectral: Option<SpectralJson>,
    pub assertions: Option<AssertionReport>,
}

pub fn trajectory_report(
    name: &str,
    p: &ModelParams,
    n_steps: usize,
    t: &Trajectory,
) -> TrajectoryReport {
    let spectral = if p.field().constant_value().is_some() {
        spectral_json(p).ok()
    } else {
        None
    };
    TrajectoryReport {
        name: name.to_string(),
        params: p.into(),
        n_steps,
        points: t.points.len(),
        first_nonpositive: t.first_nonpositive,
        escaped_at: t.escaped_at,
        max_abs: t.max_abs,
        is_positive: t.first_nonpositive.is_none(),
        is_bounded: t.escaped_at.is_none(),
        spectral,
        assertions: None,
    }
}

/// Trajectory CSV: header `step,x,y`, one row per point, step = index.
pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::with_capacity(t.points.len() * 48 + 16);
    out.push_str("step,x,y\n");
    for (i, s) in t.points.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, fmt_f64(s.x), fmt_f64(s.y)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantSetJson {
    pub params: ParamsEcho,
    pub a: f64,
    pub x_hat: f64,
    pub x_hat0: f64,
    pub x_star_max: f64,
    pub condition_ok: bool,
    pub grid_n: Option<usize>,
    pub violations: Option<usize>,
    pub worst_margin: Option<f64>,
}

pub fn invariant_set_json(p: &ModelParams, grid_n: Option<usize>) -> Result<InvariantSetJson> {
    let spec: InvariantSetSpec = geometry::invariant_set(p)?;
    let (violations, worst) = match grid_n {
        Some(n) if spec.condition_ok => {
            let (v, w) = geometry::verify_invariance(&spec, p, n)?;
            (Some(v), Some(w))
        }
        _ => (None, None),
    };
    Ok(InvariantSetJson {
        params: p.into(),
        a: spec.a,
        x_hat: spec.x_hat,
        x_hat0: spec.x_hat0,
        x_star_max: spec.x_star_max,
        condition_ok: spec.condition_ok,
        grid_n: if spec.condition_ok { grid_n } else { None },
        violations,
        worst_margin: worst,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionJson {
    pub name: &'static str,
    pub side: Side,
    pub exponent: i32,
    pub verdict: SeriesVerdict,
    pub required: &'static str,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZEntry {
    pub i: i64,
    pub ln_z: f64,
    pub z: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub i: i64,
    pub residual: f64,
    pub ratio_estimate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SclScrJson {
    pub scl_holds: bool,
    pub scl_witness: Option<u32>,
    pub scr_holds: bool,
    pub scr_witness: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryLawJson {
    pub kind: LawKind,
    pub theta: f64,
    pub k: u32,
    pub field: Field,
    pub imax: i64,
    pub trunc_n: usize,
    pub z: Vec<ZEntry>,
    pub conditions: Vec<ConditionJson>,
    pub scl_scr: Option<SclScrJson>,
    pub rho_residual: Option<f64>,
    pub valid_in_regime: bool,
    pub residuals: Vec<ResidualEntry>,
    pub normalisability: SeriesVerdict,
}

/// Full per-law report: z-window, regime conditions, verification
/// residuals and the normalisability verdict.
pub fn boundary_law_json(law: &BoundaryLaw, imax: i64, trunc_n: usize) -> Result<BoundaryLawJson> {
    let field = law.field();
    let theta = law.theta();
    let k = law.k() as i32;

    let z: Vec<ZEntry> = (-imax..=imax)
        .map(|i| {
            let ln_z = law.ln_z(i);
            ZEntry {
                i,
                ln_z,
                z: law.z_value(i).ok(),
            }
        })
        .collect();

    let mut conditions = Vec::new();
    let mut scl_scr = None;
    let mut rho_res = None;
    let valid = match law.kind() {
        LawKind::LeftInfinite => {
            let lin = tail_series_verdict(field, theta, -(k - 1), Side::Left);
            let rfi = tail_series_verdict(field, theta, k + 1, Side::Right);
            let ok = lin.diverges() && rfi.converges();
            conditions.push(ConditionJson {
                name: "left_tail_infinite",
                side: Side::Left,
                exponent: -(k - 1),
                satisfied: lin.diverges(),
                verdict: lin,
                required: "diverges",
            });
            conditions.push(ConditionJson {
                name: "right_tail_finite",
                side: Side::Right,
                exponent: k + 1,
                satisfied: rfi.converges(),
                verdict: rfi,
                required: "converges",
            });
            ok
        }
        LawKind::RightInfinite => {
            let lfi = tail_series_verdict(field, theta, k + 1, Side::Left);
            let rin = tail_series_verdict(field, theta, -(k - 1), Side::Right);
            let ok = lfi.converges() && rin.diverges();
            conditions.push(ConditionJson {
                name: "left_tail_finite",
                side: Side::Left,
                exponent: k + 1,
                satisfied: lfi.converges(),
                verdict: lfi,
                required: "converges",
            });
            conditions.push(ConditionJson {
                name: "right_tail_infinite",
                side: Side::Right,
                exponent: -(k - 1),
                satisfied: rin.diverges(),
                verdict: rin,
                required: "diverges",
            });
            ok
        }
        LawKind::BothInfinite { rho } => {
            let report = crate::law::scl_scr_check(field, theta, law.k());
            let res = rho_residual(field, theta, law.k(), *rho, trunc_n)?;
            let ok = report.scl_holds && report.scr_holds && res.abs() <= 1e-9;
            scl_scr = Some(SclScrJson {
                scl_holds: report.scl_holds,
                scl_witness: report.scl_witness,
                scr_holds: report.scr_holds,
                scr_witness: report.scr_witness,
            });
            rho_res = Some(res);
            ok
        }
        LawKind::Custom(_) => true,
    };

    let residuals: Vec<ResidualEntry> = (-imax..=imax)
        .filter(|i| *i != 0)
        .filter_map(|i| {
            verify_solution_ratio(law, i, trunc_n)
                .ok()
                .map(|(residual, ratio_estimate)| ResidualEntry {
                    i,
                    residual,
                    ratio_estimate,
                })
        })
        .collect();

    Ok(BoundaryLawJson {
        kind: law.kind().clone(),
        theta,
        k: law.k(),
        field: field.clone(),
        imax,
        trunc_n,
        z,
        conditions,
        scl_scr,
        rho_residual: rho_res,
        valid_in_regime: valid,
        residuals,
        normalisability: normalisability_check(law, trunc_n),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureJson {
    pub k: u32,
    pub depth: u32,
    pub vertices: usize,
    pub boundary_vertices: usize,
    pub coordinates: crate::law::LawCoordinates,
    pub log_measure: f64,
}
