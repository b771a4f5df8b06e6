//! Positivity-horizon raster over the `(y0, x1)` initial-data plane.
//!
//! Cells are independent and may be evaluated in parallel; rows are
//! buffered and written in row-major grid order so the output bytes do
//! not depend on scheduling.

use rayon::prelude::*;

use crate::error::Error;
use crate::field::Field;
use crate::lab::report::fmt_f64;
use crate::map::{iterate, ModelParams};
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub k: u32,
    pub tau: f64,
    pub field: Field,
    pub y0_range: Range,
    pub x1_range: Range,
    pub n_steps: usize,
    pub workers: Option<usize>,
}

/// One CSV row per grid cell, row-major in `(y0, x1)`:
/// `y0,x1,admissible,horizon,max_abs` where `horizon` is the first
/// step with `x ≤ 0` or `>=n` when positivity held throughout.
/// Inadmissible cells (`y0 + x1 ≥ τ`) keep the trailing columns empty.
pub fn sweep_csv(spec: &SweepSpec) -> Result<String> {
    if spec.y0_range.count == 0 || spec.x1_range.count == 0 {
        return Err(Error::Parse("sweep ranges must be nonempty".into()));
    }
    let cells: Vec<(f64, f64)> = (0..spec.y0_range.count)
        .flat_map(|iy| {
            let y0 = spec.y0_range.value(iy);
            (0..spec.x1_range.count).map(move |ix| (y0, ix))
        })
        .map(|(y0, ix)| (y0, spec.x1_range.value(ix)))
        .collect();

    let eval = |&(y0, x1): &(f64, f64)| -> String {
        match ModelParams::new(spec.k, spec.tau, spec.field.clone(), y0, x1) {
            Ok(p) => {
                let t = iterate(&p, spec.n_steps);
                let horizon = match t.first_nonpositive {
                    Some(m) => m.to_string(),
                    None => match t.escaped_at {
                        // a positive escape makes the next step negative
                        Some(e) if e < spec.n_steps => (e + 1).to_string(),
                        _ => format!(">={}", spec.n_steps),
                    },
                };
                format!(
                    "{},{},1,{},{}\n",
                    fmt_f64(y0),
                    fmt_f64(x1),
                    horizon,
                    fmt_f64(t.max_abs)
                )
            }
            Err(_) => format!("{},{},0,,\n", fmt_f64(y0), fmt_f64(x1)),
        }
    };

    let rows: Vec<String> = match spec.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            pool.install(|| cells.par_iter().map(eval).collect())
        }
        None => cells.par_iter().map(eval).collect(),
    };

    let mut out = String::with_capacity(rows.len() * 64 + 32);
    out.push_str("y0,x1,admissible,horizon,max_abs\n");
    for row in rows {
        out.push_str(&row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range1(v: f64) -> Range {
        Range { min: v, max: v, count: 1 }
    }

    #[test]
    fn single_cell_fig12() {
        let spec = SweepSpec {
            k: 2,
            tau: 3.0,
            field: Field::constant(0.5).unwrap(),
            y0_range: range1(1.2),
            x1_range: range1(0.6),
            n_steps: 200,
            workers: None,
        };
        let csv = sweep_csv(&spec).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("y0,x1,admissible,horizon,max_abs"));
        let row = lines.next().unwrap();
        assert!(row.contains(",1,>=200,"), "row: {row}");
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn inadmissible_cells_are_flagged_not_evaluated() {
        let spec = SweepSpec {
            k: 2,
            tau: 3.0,
            field: Field::constant(1.0).unwrap(),
            y0_range: Range { min: 1.0, max: 2.5, count: 4 },
            x1_range: range1(1.0),
            n_steps: 10,
            workers: None,
        };
        let csv = sweep_csv(&spec).unwrap();
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let y0: f64 = cols[0].parse().unwrap();
            let x1: f64 = cols[1].parse().unwrap();
            if y0 + x1 >= 3.0 {
                assert_eq!(cols[2], "0");
                assert_eq!(cols[3], "");
                assert_eq!(cols[4], "");
            } else {
                assert_eq!(cols[2], "1");
                assert!(!cols[3].is_empty());
            }
        }
    }

    #[test]
    fn parallel_runs_are_byte_identical() {
        let spec = SweepSpec {
            k: 2,
            tau: 3.0,
            field: Field::constant(1.0).unwrap(),
            y0_range: Range { min: 0.1, max: 1.4, count: 20 },
            x1_range: Range { min: 0.1, max: 1.4, count: 20 },
            n_steps: 150,
            workers: Some(4),
        };
        let a = sweep_csv(&spec).unwrap();
        let b = sweep_csv(&spec).unwrap();
        let serial = sweep_csv(&SweepSpec { workers: Some(1), ..spec.clone() }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, serial);
        assert_eq!(a.lines().count(), 401);
    }
}
