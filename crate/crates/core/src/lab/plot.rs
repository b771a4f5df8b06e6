//! Plot-ready export: trajectory CSV in, unit-viewport scatter out.

use crate::error::Error;
use crate::lab::report::fmt_f64;
use crate::Result;

/// Rescales trajectory points to the unit viewport. The output starts
/// with the viewport and the original bounding box, then one `u,v` row
/// per point; identical input bytes give identical output bytes. A
/// degenerate axis (single point, vertical/horizontal segment) maps to
/// the viewport centre on that axis.
pub fn plot_data_from_csv(csv: &str) -> Result<String> {
    let mut rows = Vec::new();
    for (lineno, line) in csv.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            if !line.starts_with("step") {
                return Err(Error::Parse(format!(
                    "expected trajectory header starting with 'step', got {line:?}"
                )));
            }
            continue;
        }
        let mut cols = line.split(',');
        let _step = cols.next();
        let x: f64 = cols
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing x", lineno + 1)))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let y: f64 = cols
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing y", lineno + 1)))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push((x, y));
    }
    if rows.is_empty() {
        return Err(Error::Parse("trajectory file has no points".into()));
    }

    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &rows {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let scale = |v: f64, lo: f64, hi: f64| {
        if hi > lo {
            (v - lo) / (hi - lo)
        } else {
            0.5
        }
    };

    let mut out = String::with_capacity(rows.len() * 48 + 96);
    out.push_str("# viewport 0 1 0 1\n");
    out.push_str(&format!(
        "# bbox {} {} {} {}\n",
        fmt_f64(xmin),
        fmt_f64(xmax),
        fmt_f64(ymin),
        fmt_f64(ymax)
    ));
    out.push_str("u,v\n");
    for &(x, y) in &rows {
        out.push_str(&format!(
            "{},{}\n",
            fmt_f64(scale(x, xmin, xmax)),
            fmt_f64(scale(y, ymin, ymax))
        ));
    }
    Ok(out)
}
