use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sosdyn::lab::{self, Config, Range, SweepSpec};
use sosdyn::law::{
    cylinder_log_measure, BoundaryLaw, LawCoordinates, LawKind,
};
use sosdyn::map::{iterate, ModelParams};
use sosdyn::tree::CayleySubtree;
use sosdyn::{Error, Field};

#[derive(Parser)]
#[command(
    name = "sosdyn",
    about = "Boundary laws of the SOS model on a Cayley tree and the McMillan-type map they induce",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Tree order (k >= 2)
    #[arg(long)]
    k: Option<u32>,
    /// Map parameter tau = theta + 1/theta (> 2)
    #[arg(long)]
    tau: Option<f64>,
    /// Temperature parameter in (0,1); alternative to --tau
    #[arg(long, conflicts_with = "tau")]
    theta: Option<f64>,
    /// Constant field value (shorthand for --field constant:H)
    #[arg(long)]
    h: Option<f64>,
    /// Field spec: constant:H | geom:THETA | family:c=..,base=..,alpha=.. | table:J=W,..,default=D
    #[arg(long)]
    field: Option<String>,
    /// Initial u_{-1}
    #[arg(long)]
    y0: Option<f64>,
    /// Initial u_1
    #[arg(long)]
    x1: Option<f64>,
    /// Series truncation length
    #[arg(long)]
    trunc: Option<usize>,
    /// TOML config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn to_config(&self) -> Result<Config, Error> {
        let field = match (&self.field, self.h) {
            (Some(spec), _) => Some(lab::parse_field_spec(spec)?),
            (None, Some(h)) => Some(Field::constant(h)?),
            (None, None) => None,
        };
        let flags = Config {
            k: self.k,
            tau: self.tau,
            theta: self.theta,
            field,
            y0: self.y0,
            x1: self.x1,
            n_steps: None,
            trunc_n: self.trunc,
        };
        Ok(match &self.config {
            Some(path) => flags.over(lab::load_config(path)?),
            None => flags,
        })
    }

    fn params(&self) -> Result<ModelParams, Error> {
        let cfg = self.to_config()?;
        let tau = cfg.resolve_tau()?;
        let k = cfg.k.ok_or_else(|| Error::Parse("missing --k".into()))?;
        let field = cfg
            .field
            .clone()
            .ok_or_else(|| Error::Parse("missing --h or --field".into()))?;
        let y0 = Config::require("y0", cfg.y0)?;
        let x1 = Config::require("x1", cfg.x1)?;
        ModelParams::new(k, tau, field, y0, x1)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a figure preset: trajectory CSV + JSON report
    Preset {
        /// fig1 .. fig13
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Iterate the map for custom parameters: trajectory CSV + JSON report
    Iterate {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of forward steps
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Positivity-horizon raster over (y0, x1)
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// y0 range as min:max:count
        #[arg(long)]
        y0_range: String,
        /// x1 range as min:max:count
        #[arg(long)]
        x1_range: String,
        #[arg(long)]
        steps: Option<usize>,
        /// Worker threads for cell evaluation
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fixed points, eigenvalues, regime and resonances as JSON
    Spectral {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Invariant-region scalars and grid verification as JSON
    InvariantSet {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Boundary-law report: z-window, conditions, residuals, normalisability
    BoundaryLaw {
        #[command(flatten)]
        common: CommonArgs,
        /// s1 | s2 | s3 | left | right | both
        #[arg(long)]
        law: String,
        /// rho for the two-sided family (default 1)
        #[arg(long)]
        rho: Option<f64>,
        /// Report z_i for |i| <= imax
        #[arg(long, default_value_t = 5)]
        imax: i64,
    },
    /// Cylinder log-measure of a configuration on a finite subtree
    Measure {
        #[command(flatten)]
        common: CommonArgs,
        /// Subtree depth (>= 1)
        #[arg(long)]
        depth: u32,
        /// Spins for every vertex in breadth-first order, comma separated
        #[arg(long)]
        spins: String,
        /// s1 | s2 | s3 | left | right | both
        #[arg(long)]
        law: String,
        #[arg(long)]
        rho: Option<f64>,
        /// Use original coordinates l(i) = z_i / h(i)
        #[arg(long)]
        original_coords: bool,
    },
    /// Rescale a trajectory CSV to unit-viewport scatter data
    PlotData {
        /// Trajectory CSV produced by preset/iterate
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Writes to stdout, treating a closed pipe (e.g. `| head`) as success.
fn emit(text: &str) -> Result<(), Error> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e.into()),
    }
}

fn parse_range(spec: &str) -> Result<Range, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("range {spec:?} must be min:max:count")));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Parse(format!("bad range min: {e}")))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Parse(format!("bad range max: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| Error::Parse(format!("bad range count: {e}")))?;
    if count == 0 {
        return Err(Error::Parse("range count must be positive".into()));
    }
    Ok(Range { min, max, count })
}

fn build_law(common: &CommonArgs, law: &str, rho: Option<f64>) -> Result<BoundaryLaw, Error> {
    let cfg = common.to_config()?;
    let theta = cfg
        .theta
        .ok_or_else(|| Error::Parse("boundary laws need --theta".into()))?;
    let k = cfg.k.ok_or_else(|| Error::Parse("missing --k".into()))?;
    // the worked families default to the normalized geometric field
    let field = match cfg.field.clone() {
        Some(f) => f,
        None => Field::geometric_normalized(theta)?,
    };
    let kind = match law {
        "s1" | "left" => LawKind::LeftInfinite,
        "s2" | "right" => LawKind::RightInfinite,
        "s3" | "both" => LawKind::BothInfinite {
            rho: rho.unwrap_or(1.0),
        },
        other => {
            return Err(Error::Parse(format!(
                "unknown law {other:?}; expected s1|s2|s3|left|right|both"
            )))
        }
    };
    BoundaryLaw::new(kind, theta, k, field)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Preset { name, out } => {
            let def = lab::preset(&name)
                .ok_or_else(|| Error::Parse(format!("unknown preset {name:?}")))?;
            let outcome = lab::run_preset(def, &out)?;
            eprintln!(
                "wrote {} and {}",
                outcome.csv_path.display(),
                outcome.json_path.display()
            );
            if outcome.assertions_passed == Some(false) {
                eprintln!("preset {name}: expectation mismatch");
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Iterate { common, steps, out } => {
            let cfg = common.to_config()?;
            let params = common.params()?;
            let n_steps = steps
                .or(cfg.n_steps)
                .ok_or_else(|| Error::Parse("missing --steps".into()))?;
            let t = iterate(&params, n_steps);
            let rep = lab::trajectory_report("iterate", &params, n_steps, &t);
            std::fs::create_dir_all(&out)?;
            let csv_path = out.join("iterate_trajectory.csv");
            let json_path = out.join("iterate_report.json");
            std::fs::write(&csv_path, lab::trajectory_csv(&t))?;
            std::fs::write(&json_path, serde_json::to_string_pretty(&rep).unwrap() + "\n")?;
            eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sweep {
            common,
            y0_range,
            x1_range,
            steps,
            workers,
            out,
        } => {
            let cfg = common.to_config()?;
            let tau = cfg.resolve_tau()?;
            let k = cfg.k.ok_or_else(|| Error::Parse("missing --k".into()))?;
            let field = cfg
                .field
                .clone()
                .ok_or_else(|| Error::Parse("missing --h or --field".into()))?;
            let n_steps = steps
                .or(cfg.n_steps)
                .ok_or_else(|| Error::Parse("missing --steps".into()))?;
            let spec = SweepSpec {
                k,
                tau,
                field,
                y0_range: parse_range(&y0_range)?,
                x1_range: parse_range(&x1_range)?,
                n_steps,
                workers,
            };
            let csv = lab::sweep_csv(&spec)?;
            std::fs::write(&out, csv)?;
            eprintln!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Spectral { common } => {
            let params = common.params()?;
            let json = lab::spectral_json(&params)?;
            emit(&(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::InvariantSet { common, grid } => {
            let params = common.params()?;
            let json = lab::invariant_set_json(&params, Some(grid))?;
            emit(&(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::BoundaryLaw {
            common,
            law,
            rho,
            imax,
        } => {
            let cfg = common.to_config()?;
            let built = build_law(&common, &law, rho)?;
            let trunc = cfg.trunc_n.unwrap_or(400);
            let json = lab::boundary_law_json(&built, imax, trunc)?;
            emit(&(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Measure {
            common,
            depth,
            spins,
            law,
            rho,
            original_coords,
        } => {
            let cfg = common.to_config()?;
            let k = cfg.k.ok_or_else(|| Error::Parse("missing --k".into()))?;
            let built = build_law(&common, &law, rho)?;
            let tree = CayleySubtree::new(k, depth)?;
            let config: Vec<i64> = spins
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad spin {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let coords = if original_coords {
                LawCoordinates::Original
            } else {
                LawCoordinates::Simplified
            };
            let log_measure = cylinder_log_measure(&tree, &built, &config, coords)?;
            let json = lab::report::MeasureJson {
                k,
                depth,
                vertices: tree.vertex_count(),
                boundary_vertices: tree.boundary().count(),
                coordinates: coords,
                log_measure,
            };
            emit(&(serde_json::to_string_pretty(&json).unwrap() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::PlotData { input, out } => {
            let csv = std::fs::read_to_string(&input)?;
            let data = lab::plot_data_from_csv(&csv)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, data)?;
                    eprintln!("wrote {}", path.display());
                }
                None => emit(&data)?,
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
