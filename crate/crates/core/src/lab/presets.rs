//! The thirteen figure presets, keyed `fig1` … `fig13`.
//!
//! Parameter sets are the captions' values verbatim. Presets carry
//! optional expectations checked by `preset` runs; mismatches exit
//! with status 3 rather than failing the run.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::field::Field;
use crate::map::ModelParams;
use crate::spectral::Regime;
use crate::Result;

#[derive(Debug, Clone, Copy, Serialize)]
pub enum FieldDef {
    Constant(f64),
    /// `h(0) = 1` with a different constant on every other height.
    UnitZeroTail(f64),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Expected {
    /// `(target, tolerance)` for the first step with `x ≤ 0`.
    pub first_nonpositive: Option<(usize, usize)>,
    /// Expect the orbit to keep (or lose) strict positivity.
    pub positive: Option<bool>,
    pub regime: Option<Regime>,
}

const NO_EXPECTATIONS: Expected = Expected {
    first_nonpositive: None,
    positive: None,
    regime: None,
};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub k: u32,
    pub tau: f64,
    pub field_def: FieldDef,
    pub y0: f64,
    pub x1: f64,
    pub n_steps: usize,
    pub expected: Expected,
}

impl Preset {
    pub fn field(&self) -> Field {
        match self.field_def {
            FieldDef::Constant(h) => Field::constant(h).expect("preset field"),
            FieldDef::UnitZeroTail(h) => {
                let mut values = BTreeMap::new();
                values.insert(0, 1.0);
                Field::table(values, h).expect("preset field")
            }
        }
    }

    pub fn h_value(&self) -> f64 {
        match self.field_def {
            FieldDef::Constant(h) | FieldDef::UnitZeroTail(h) => h,
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.k, self.tau, self.field(), self.y0, self.x1)
    }
}

pub static PRESETS: [Preset; 13] = [
    Preset {
        name: "fig1",
        k: 2,
        tau: 3.0,
        field_def: FieldDef::Constant(1.0),
        y0: 0.5,
        x1: 1.48589,
        n_steps: 3000,
        expected: Expected {
            positive: Some(true),
            ..NO_EXPECTATIONS
        },
    },
    Preset {
        name: "fig2",
        k: 2,
        tau: 2.6,
        field_def: FieldDef::Constant(1.0),
        y0: 0.8,
        x1: 1.713,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig3",
        k: 2,
        tau: 4.0,
        field_def: FieldDef::Constant(1.0),
        y0: 1.5,
        x1: 1.0,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig4",
        k: 2,
        tau: 4.0,
        field_def: FieldDef::Constant(1.0),
        y0: 1.5,
        x1: 1.02,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig5",
        k: 2,
        tau: 4.0,
        field_def: FieldDef::Constant(1.0),
        y0: 1.5,
        x1: 0.98,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig6",
        k: 2,
        tau: 4.5,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 1.3,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig7",
        k: 2,
        tau: 4.5,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 1.3,
        n_steps: 500,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig8",
        k: 2,
        tau: 4.5,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 1.3,
        n_steps: 25,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig9",
        k: 2,
        tau: 4.5,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 1.2838,
        n_steps: 10000,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig10",
        k: 2,
        tau: 5.5,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 1.1,
        n_steps: 100,
        expected: NO_EXPECTATIONS,
    },
    Preset {
        name: "fig11",
        k: 3,
        tau: 4.0,
        field_def: FieldDef::Constant(1.0),
        y0: 1.2,
        x1: 0.8,
        n_steps: 500,
        expected: Expected {
            regime: Some(Regime::DoubleMinusOne),
            ..NO_EXPECTATIONS
        },
    },
    Preset {
        name: "fig12",
        k: 2,
        tau: 3.0,
        field_def: FieldDef::Constant(0.5),
        y0: 1.2,
        x1: 0.6,
        n_steps: 200,
        expected: Expected {
            positive: Some(true),
            ..NO_EXPECTATIONS
        },
    },
    Preset {
        name: "fig13",
        k: 2,
        tau: 3.0,
        field_def: FieldDef::UnitZeroTail(1.05),
        y0: 1.2,
        x1: 0.6,
        n_steps: 95,
        expected: Expected {
            first_nonpositive: Some((93, 2)),
            ..NO_EXPECTATIONS
        },
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
