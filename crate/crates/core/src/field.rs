//! External-field weights `h(·)` on the integers.
//!
//! Two normalisation conventions coexist in the model: series work
//! assumes `Σ h = 1` (a probability field) while the difference
//! equation assumes `h(0) = 1`. A [`Field`] carries raw weights plus a
//! [`Normalization`] tag and evaluates per consumer, so both
//! conventions can be expressed without rescaling by hand.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::Result;

/// Parametric form of the weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FieldKind {
    /// `h(j) = h` for every `j`.
    Constant(f64),
    /// `h(j) = ((1-θ)/(1+θ)) θ^|j|`; sums to 1 exactly for θ ∈ (0,1).
    GeometricNormalized { theta: f64 },
    /// `h(j) = c · base^(α|j|)`.
    GeometricFamily { c: f64, base: f64, alpha: f64 },
    /// Listed values with a default for unlisted integers.
    Table { values: BTreeMap<i64, f64>, default: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    /// Weights rescaled so they sum to 1 over ℤ.
    Probability,
    /// Weights rescaled so `h(0) = 1`.
    UnitAtZero,
    /// Weights used exactly as constructed.
    Raw,
}

/// Positive weights on ℤ with a fixed normalisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field {
    kind: FieldKind,
    normalization: Normalization,
    scale: f64,
}

impl Field {
    pub fn new(kind: FieldKind, normalization: Normalization) -> Result<Self> {
        match &kind {
            FieldKind::Constant(h) => {
                if !h.is_finite() || *h <= 0.0 {
                    return Err(Error::InvalidFieldSpec(format!(
                        "constant weight must be positive and finite, got {h}"
                    )));
                }
            }
            FieldKind::GeometricNormalized { theta } => {
                if !(0.0 < *theta && *theta < 1.0) {
                    return Err(Error::InvalidFieldSpec(format!(
                        "normalized geometric field needs theta in (0,1), got {theta}"
                    )));
                }
            }
            FieldKind::GeometricFamily { c, base, alpha } => {
                if !c.is_finite() || *c <= 0.0 || !base.is_finite() || *base <= 0.0 {
                    return Err(Error::InvalidFieldSpec(format!(
                        "geometric family needs c > 0 and base > 0, got c={c}, base={base}"
                    )));
                }
                if !alpha.is_finite() {
                    return Err(Error::InvalidFieldSpec("alpha must be finite".into()));
                }
            }
            FieldKind::Table { values, default } => {
                if !default.is_finite() || *default <= 0.0 {
                    return Err(Error::InvalidFieldSpec(format!(
                        "table default must be positive and finite, got {default}"
                    )));
                }
                for (j, v) in values {
                    if !v.is_finite() || *v <= 0.0 {
                        return Err(Error::InvalidFieldSpec(format!(
                            "table weight at {j} must be positive and finite, got {v}"
                        )));
                    }
                }
            }
        }

        let scale = match normalization {
            Normalization::Raw => 1.0,
            Normalization::UnitAtZero => 1.0 / raw_weight(&kind, 0),
            Normalization::Probability => {
                let total = match &kind {
                    FieldKind::GeometricNormalized { .. } => 1.0,
                    FieldKind::GeometricFamily { c, base, alpha } => {
                        let q = base.powf(*alpha);
                        if q >= 1.0 {
                            return Err(Error::InvalidFieldSpec(
                                "geometric family is not summable, cannot normalise to a probability field".into(),
                            ));
                        }
                        c * (1.0 + 2.0 * q / (1.0 - q))
                    }
                    FieldKind::Constant(_) | FieldKind::Table { .. } => {
                        return Err(Error::InvalidFieldSpec(
                            "field has infinite total mass, cannot normalise to a probability field".into(),
                        ));
                    }
                };
                1.0 / total
            }
        };

        Ok(Field { kind, normalization, scale })
    }

    pub fn constant(h: f64) -> Result<Self> {
        Field::new(FieldKind::Constant(h), Normalization::Raw)
    }

    /// The probability field `h(j) = ((1-θ)/(1+θ)) θ^|j|`.
    pub fn geometric_normalized(theta: f64) -> Result<Self> {
        Field::new(
            FieldKind::GeometricNormalized { theta },
            Normalization::Probability,
        )
    }

    pub fn geometric_family(c: f64, base: f64, alpha: f64) -> Result<Self> {
        Field::new(
            FieldKind::GeometricFamily { c, base, alpha },
            Normalization::Raw,
        )
    }

    pub fn table(values: BTreeMap<i64, f64>, default: f64) -> Result<Self> {
        Field::new(FieldKind::Table { values, default }, Normalization::Raw)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Weight at `j` under this field's normalisation.
    pub fn weight(&self, j: i64) -> f64 {
        self.scale * raw_weight(&self.kind, j)
    }

    /// `ln h(j)`, evaluated without forming `h(j)` (safe for large `|j|`).
    pub fn ln_weight(&self, j: i64) -> f64 {
        self.scale.ln() + ln_raw_weight(&self.kind, j)
    }

    /// The single value of a field that is constant on all of ℤ.
    pub fn constant_value(&self) -> Option<f64> {
        match &self.kind {
            FieldKind::Constant(_) => Some(self.weight(0)),
            FieldKind::GeometricFamily { alpha, .. } if *alpha == 0.0 => Some(self.weight(0)),
            FieldKind::Table { values, default } => {
                let w0 = self.scale * *default;
                if values.values().all(|v| self.scale * *v == w0) {
                    Some(w0)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The value shared by `h(1), h(2), …` when those are all equal;
    /// `h(0)` may differ. This is the constant that drives the map once
    /// iteration has left the origin step.
    pub fn constant_tail(&self) -> Option<f64> {
        if let Some(v) = self.constant_value() {
            return Some(v);
        }
        match &self.kind {
            FieldKind::Table { values, default } => {
                let tail = self.scale * *default;
                if values
                    .iter()
                    .filter(|(j, _)| **j >= 1)
                    .all(|(_, v)| self.scale * *v == tail)
                {
                    Some(tail)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Per-term ratio `h(±(j+1))/h(±j)` for `j ≥ 1` when it is
    /// `j`-independent (every kind except [`FieldKind::Table`]).
    /// Symmetric by construction, so one value covers both sides.
    pub fn tail_ratio(&self) -> Option<f64> {
        match &self.kind {
            FieldKind::Constant(_) => Some(1.0),
            FieldKind::GeometricNormalized { theta } => Some(*theta),
            FieldKind::GeometricFamily { base, alpha, .. } => Some(base.powf(*alpha)),
            FieldKind::Table { .. } => None,
        }
    }

    /// Whether `h(j) = h(-j)` holds identically.
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            FieldKind::Table { values, .. } => values
                .iter()
                .all(|(j, v)| values.get(&-j).map(|w| w == v).unwrap_or(false)),
            // the parametric kinds depend on |j| only
            _ => true,
        }
    }
}

fn raw_weight(kind: &FieldKind, j: i64) -> f64 {
    match kind {
        FieldKind::Constant(h) => *h,
        FieldKind::GeometricNormalized { theta } => {
            (1.0 - theta) / (1.0 + theta) * theta.powi(j.unsigned_abs().min(i32::MAX as u64) as i32)
        }
        FieldKind::GeometricFamily { c, base, alpha } => {
            c * base.powf(alpha * j.unsigned_abs() as f64)
        }
        FieldKind::Table { values, default } => *values.get(&j).unwrap_or(default),
    }
}

fn ln_raw_weight(kind: &FieldKind, j: i64) -> f64 {
    match kind {
        FieldKind::Constant(h) => h.ln(),
        FieldKind::GeometricNormalized { theta } => {
            ((1.0 - theta) / (1.0 + theta)).ln() + j.unsigned_abs() as f64 * theta.ln()
        }
        FieldKind::GeometricFamily { c, base, alpha } => {
            c.ln() + alpha * j.unsigned_abs() as f64 * base.ln()
        }
        FieldKind::Table { values, default } => values.get(&j).unwrap_or(default).ln(),
    }
}
