//! Experiment configuration: a flat TOML file plus CLI-style field
//! specifications. Flags override file values key by key.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::Error;
use crate::field::Field;
use crate::Result;

/// Values a config file (or flag set) can carry; all optional so the
/// two sources can merge.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub k: Option<u32>,
    pub tau: Option<f64>,
    pub theta: Option<f64>,
    pub field: Option<Field>,
    pub y0: Option<f64>,
    pub x1: Option<f64>,
    pub n_steps: Option<usize>,
    pub trunc_n: Option<usize>,
}

impl Config {
    /// Overlay `self` (higher precedence) on `base`.
    pub fn over(self, base: Config) -> Config {
        Config {
            k: self.k.or(base.k),
            tau: self.tau.or(base.tau),
            theta: self.theta.or(base.theta),
            field: self.field.or(base.field),
            y0: self.y0.or(base.y0),
            x1: self.x1.or(base.x1),
            n_steps: self.n_steps.or(base.n_steps),
            trunc_n: self.trunc_n.or(base.trunc_n),
        }
    }

    /// `τ` from either `tau` or `theta` (`τ = θ + 1/θ`); `tau` wins
    /// when both are present.
    pub fn resolve_tau(&self) -> Result<f64> {
        if let Some(tau) = self.tau {
            return Ok(tau);
        }
        if let Some(theta) = self.theta {
            if theta <= 0.0 || !theta.is_finite() {
                return Err(Error::Parse(format!("theta must be positive, got {theta}")));
            }
            return Ok(theta + 1.0 / theta);
        }
        Err(Error::Parse("either tau or theta is required".into()))
    }

    pub fn require(name: &str, v: Option<f64>) -> Result<f64> {
        v.ok_or_else(|| Error::Parse(format!("missing required value: {name}")))
    }
}

/// Reads the TOML config file. Recognised keys: `k`, `tau`, `theta`,
/// `y0`, `x1`, `n_steps`, `trunc_n` and the `h.*` field block
/// (`h.kind` = `constant` | `geom` | `family` | `table` with the
/// matching parameter keys).
pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)?;
    let value: toml::Value = text
        .parse()
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let table = value
        .as_table()
        .ok_or_else(|| Error::Parse("config root must be a table".into()))?;

    let get_f64 = |key: &str| -> Result<Option<f64>> {
        match table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .map(Some)
                .ok_or_else(|| Error::Parse(format!("{key} must be a number"))),
        }
    };
    let get_usize = |key: &str| -> Result<Option<usize>> {
        match table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_integer()
                .filter(|i| *i >= 0)
                .map(|i| Some(i as usize))
                .ok_or_else(|| Error::Parse(format!("{key} must be a nonnegative integer"))),
        }
    };

    let field = match table.get("h") {
        None => None,
        Some(toml::Value::Float(f)) => Some(Field::constant(*f)?),
        Some(toml::Value::Integer(i)) => Some(Field::constant(*i as f64)?),
        Some(toml::Value::Table(h)) => Some(field_from_toml(h)?),
        Some(_) => return Err(Error::Parse("h must be a number or a table".into())),
    };

    Ok(Config {
        k: get_usize("k")?.map(|v| v as u32),
        tau: get_f64("tau")?,
        theta: get_f64("theta")?,
        field,
        y0: get_f64("y0")?,
        x1: get_f64("x1")?,
        n_steps: get_usize("n_steps")?,
        trunc_n: get_usize("trunc_n")?,
    })
}

fn field_from_toml(h: &toml::map::Map<String, toml::Value>) -> Result<Field> {
    let num = |key: &str| -> Result<f64> {
        h.get(key)
            .and_then(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
            .ok_or_else(|| Error::Parse(format!("h.{key} must be a number")))
    };
    let kind = h
        .get("kind")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Parse("h.kind is required in the h table".into()))?;
    match kind {
        "constant" => Field::constant(num("value")?),
        "geom" => Field::geometric_normalized(num("theta")?),
        "family" => Field::geometric_family(num("c")?, num("base")?, num("alpha")?),
        "table" => {
            let default = num("default")?;
            let mut values = BTreeMap::new();
            if let Some(t) = h.get("table") {
                let t = t
                    .as_table()
                    .ok_or_else(|| Error::Parse("h.table must be a table".into()))?;
                for (key, v) in t {
                    let j: i64 = key
                        .parse()
                        .map_err(|_| Error::Parse(format!("h.table key {key:?} is not an integer")))?;
                    let w = v
                        .as_float()
                        .or_else(|| v.as_integer().map(|i| i as f64))
                        .ok_or_else(|| Error::Parse(format!("h.table[{key}] must be a number")))?;
                    values.insert(j, w);
                }
            }
            Field::table(values, default)
        }
        other => Err(Error::Parse(format!("unknown h.kind {other:?}"))),
    }
}

/// Parses a `--field` flag: `constant:H`, `geom:THETA`,
/// `family:c=C,base=B,alpha=A`, `table:J=W,...,default=D`.
pub fn parse_field_spec(spec: &str) -> Result<Field> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("field spec {spec:?} needs kind:args")))?;
    match kind {
        "constant" => Field::constant(parse_num(rest)?),
        "geom" => Field::geometric_normalized(parse_num(rest)?),
        "family" => {
            let kv = parse_kv(rest)?;
            let want = |key: &str| -> Result<f64> {
                kv.get(key)
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("field spec missing {key}")))
            };
            Field::geometric_family(want("c")?, want("base")?, want("alpha")?)
        }
        "table" => {
            let mut default = None;
            let mut values = BTreeMap::new();
            for part in rest.split([',', ';']).filter(|p| !p.is_empty()) {
                let (key, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad table entry {part:?}")))?;
                if key == "default" {
                    default = Some(parse_num(v)?);
                } else {
                    let j: i64 = key
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad table key {key:?}")))?;
                    values.insert(j, parse_num(v)?);
                }
            }
            let default =
                default.ok_or_else(|| Error::Parse("table spec needs default=".into()))?;
            Field::table(values, default)
        }
        other => Err(Error::Parse(format!("unknown field kind {other:?}"))),
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
}

fn parse_kv(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in s.split([',', ';']).filter(|p| !p.is_empty()) {
        let (key, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad key=value entry {part:?}")))?;
        out.insert(key.trim().to_string(), parse_num(v)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs_parse() {
        let f = parse_field_spec("constant:0.5").unwrap();
        assert_eq!(f.weight(3), 0.5);
        let f = parse_field_spec("geom:0.5").unwrap();
        assert!((f.weight(0) - 1.0 / 3.0).abs() < 1e-15);
        let f = parse_field_spec("family:c=1,base=0.5,alpha=2").unwrap();
        assert_eq!(f.weight(1), 0.25);
        let f = parse_field_spec("table:0=1,default=1.05").unwrap();
        assert_eq!(f.weight(0), 1.0);
        assert_eq!(f.weight(5), 1.05);
        assert!(parse_field_spec("nonsense").is_err());
        assert!(parse_field_spec("table:default=bad").is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("sosdyn-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            "k = 2\ntau = 3.0\ny0 = 1.2\nx1 = 0.6\nn_steps = 95\n\
             [h]\nkind = \"table\"\ndefault = 1.05\n[h.table]\n0 = 1.0\n",
        )
        .unwrap();
        let cfg = load_config(&path).unwrap();
        assert_eq!(cfg.k, Some(2));
        assert_eq!(cfg.tau, Some(3.0));
        assert_eq!(cfg.n_steps, Some(95));
        let f = cfg.field.unwrap();
        assert_eq!(f.weight(0), 1.0);
        assert_eq!(f.weight(9), 1.05);
    }

    #[test]
    fn flag_overrides_file() {
        let file = Config {
            k: Some(2),
            tau: Some(3.0),
            y0: Some(0.5),
            ..Config::default()
        };
        let flags = Config {
            tau: Some(4.0),
            ..Config::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.tau, Some(4.0));
        assert_eq!(merged.k, Some(2));
        assert_eq!(merged.y0, Some(0.5));
    }

    #[test]
    fn theta_resolves_to_tau() {
        let cfg = Config {
            theta: Some(0.5),
            ..Config::default()
        };
        assert!((cfg.resolve_tau().unwrap() - 2.5).abs() < 1e-15);
        let both = Config {
            tau: Some(3.0),
            theta: Some(0.5),
            ..Config::default()
        };
        assert_eq!(both.resolve_tau().unwrap(), 3.0);
        assert!(Config::default().resolve_tau().is_err());
    }
}
