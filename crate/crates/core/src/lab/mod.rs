//! Workbench front end: presets, sweeps, reports and export formats
//! shared by the `sosdyn` binary and the tests.

pub mod config;
pub mod plot;
pub mod presets;
pub mod report;
pub mod sweep;

use std::path::{Path, PathBuf};

use crate::map::iterate;
use crate::spectral::Regime;
use crate::Result;

pub use config::{load_config, parse_field_spec, Config};
pub use plot::plot_data_from_csv;
pub use presets::{preset, Preset, PRESETS};
pub use report::{
    boundary_law_json, invariant_set_json, spectral_json, trajectory_csv, trajectory_report,
    AssertionReport, TrajectoryReport,
};
pub use sweep::{sweep_csv, Range, SweepSpec};

/// Files written by a preset run, plus the assertion outcome
/// (`None` when the preset carries no expectations).
#[derive(Debug, Clone)]
pub struct PresetOutcome {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub assertions_passed: Option<bool>,
}

/// Runs a preset: writes `<name>_trajectory.csv` and
/// `<name>_report.json` under `out_dir` and evaluates the preset's
/// expectations against the computed trajectory.
pub fn run_preset(def: &Preset, out_dir: &Path) -> Result<PresetOutcome> {
    let params = def.params()?;
    let t = iterate(&params, def.n_steps);
    let mut rep = trajectory_report(def.name, &params, def.n_steps, &t);

    let expected = def.expected;
    let has_expectations = expected.first_nonpositive.is_some()
        || expected.positive.is_some()
        || expected.regime.is_some();
    let assertions_passed = if has_expectations {
        let mut ok = true;
        if let Some((target, tol)) = expected.first_nonpositive {
            ok &= match t.first_nonpositive {
                Some(m) => m.abs_diff(target) <= tol,
                None => false,
            };
        }
        if let Some(positive) = expected.positive {
            ok &= t.first_nonpositive.is_none() == positive;
        }
        if let Some(regime) = expected.regime {
            let got: Option<Regime> = rep
                .spectral
                .as_ref()
                .and_then(|s| s.interior.regime);
            ok &= got == Some(regime);
        }
        Some(ok)
    } else {
        None
    };

    rep.assertions = Some(AssertionReport {
        expected_first_nonpositive: expected.first_nonpositive,
        expected_positive: expected.positive,
        expected_regime: expected.regime,
        passed: assertions_passed.unwrap_or(true),
    });

    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{}_trajectory.csv", def.name));
    let json_path = out_dir.join(format!("{}_report.json", def.name));
    std::fs::write(&csv_path, trajectory_csv(&t))?;
    std::fs::write(&json_path, serde_json::to_string_pretty(&rep).unwrap() + "\n")?;

    Ok(PresetOutcome {
        csv_path,
        json_path,
        assertions_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("sosdyn-lab-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn fig8_preset_writes_both_files() {
        let dir = tmpdir("fig8");
        let out = run_preset(preset("fig8").unwrap(), &dir).unwrap();
        assert_eq!(out.assertions_passed, None);
        let csv = std::fs::read_to_string(&out.csv_path).unwrap();
        assert_eq!(csv.lines().count(), 27); // header + 26 points
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out.json_path).unwrap()).unwrap();
        assert_eq!(json["name"], "fig8");
        assert_eq!(json["first_nonpositive"], serde_json::Value::Null);
    }

    #[test]
    fn fig11_regime_assertion_passes() {
        let dir = tmpdir("fig11");
        let out = run_preset(preset("fig11").unwrap(), &dir).unwrap();
        assert_eq!(out.assertions_passed, Some(true));
    }

    #[test]
    fn fig12_positivity_assertion_passes() {
        let dir = tmpdir("fig12");
        let out = run_preset(preset("fig12").unwrap(), &dir).unwrap();
        assert_eq!(out.assertions_passed, Some(true));
    }
}
