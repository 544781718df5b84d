use std::path::PathBuf;

use clap::Subcommand;
use gaugebench::adhm::{
    adhm_residuals, asd_residual, existence_threshold, field_strength, grid_report, moduli_dimension,
    projector_densities, thooft_data, AdhmData, Group,
};
use gaugebench::numerics::Grid4D;
use rayon::prelude::*;
use serde_json::json;

use super::{parse_list, parse_point, parse_points, require_json, to_value, tolerance};
use crate::report::{check_le, RunReport};
use crate::{Failure, Format, Outcome, RunConfig};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Aliases keep clap from treating the lists as repeated flags.
type Points = Vec<[f64; 4]>;
type Floats = Vec<f64>;

#[derive(clap::Args, Clone)]
struct Instanton {
    /// Centres `x1,x2,x3,x4`, separated by `;`.
    #[arg(long, default_value = "0,0,0,0", allow_hyphen_values = true, value_parser = parse_points)]
    centers: Points,
    /// One scale per centre.
    #[arg(long, default_value = "1", value_parser = parse_list)]
    scales: Floats,
}

#[derive(clap::Args, Clone)]
struct GridOpts {
    /// Grid covers `[-L, L]^4`.
    #[arg(long, default_value_t = 4.0)]
    half_width: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 24)]
    n: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-2)]
    h: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Topological charge (1/8π²)∫tr(F∧F), Yang–Mills action and the
    /// largest self-dual part of F for a t'Hooft instanton on a grid.
    Thooft {
        #[command(flatten)]
        inst: Instanton,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Action density |F|^2 at every grid point (use --format csv).
    Density {
        #[command(flatten)]
        inst: Instanton,
        #[command(flatten)]
        grid: GridOpts,
    },
    /// Curvature at one point, with its anti-self-duality residual.
    Field {
        #[command(flatten)]
        inst: Instanton,
        /// Point `x1,x2,x3,x4`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        x: [f64; 4],
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Real and complex moment-map residuals of ADHM data read from JSON.
    Residuals {
        #[arg(long)]
        data: PathBuf,
    },
    /// Whether irreducible ASD connections exist on S^4 for a group and charge.
    Threshold {
        /// SU, Sp, Spin, G2, F4, E6, E7 or E8.
        #[arg(long)]
        group: String,
        /// Rank parameter (ignored for exceptional groups).
        #[arg(long, default_value_t = 0)]
        rank: u32,
        #[arg(long)]
        k: u32,
    },
    /// Dimension 8k − 3 of the charge-k SU(2) moduli space.
    Dimension {
        #[arg(long)]
        k: u32,
    },
}

fn hint() -> &'static str {
    "see `gaugebench adhm --help`"
}

fn data(inst: &Instanton) -> Result<AdhmData, Failure> {
    thooft_data(&inst.centers, &inst.scales).map_err(|e| Failure::usage(e, "give one positive scale per distinct centre"))
}

fn grid(g: &GridOpts) -> Result<Grid4D, Failure> {
    Grid4D::new(g.half_width, g.n).map_err(|e| Failure::usage(e, "need --n >= 3 and --half-width > 0"))
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    if !matches!(args.cmd, Cmd::Density { .. }) {
        require_json(cfg, "this adhm subcommand")?;
    }
    match args.cmd {
        Cmd::Thooft { inst, grid: g } => {
            let d = data(&inst)?;
            let gr = grid(&g)?;
            let r = grid_report(&d, &gr, g.h).map_err(|e| Failure::usage(e, hint()))?;
            let k = inst.centers.len() as f64;
            let checks = vec![
                check_le("max ASD residual / max|F|", r.max_asd_residual / r.max_field_norm, tolerance(cfg, "asd_floor", 1e-3)),
                check_le("|charge − k| / k", (r.charge - k).abs() / k, tolerance(cfg, "charge", 0.03)),
            ];
            let inputs = json!({"centers": inst.centers, "scales": inst.scales, "half_width": g.half_width, "n": g.n, "h": g.h});
            Ok(Outcome::Report(RunReport::new("adhm thooft", inputs, to_value(&r)?).with_checks(checks)))
        }
        Cmd::Density { inst, grid: g } => {
            let d = data(&inst)?;
            let gr = grid(&g)?;
            let values: Vec<f64> = (0..gr.len())
                .into_par_iter()
                .map(|i| projector_densities(&d, gr.point(i), g.h).map(|t| t.1).unwrap_or(f64::NAN))
                .collect();
            if cfg.format == Format::Csv {
                let mut buf = Vec::new();
                gr.write_csv(&values, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
                let text = String::from_utf8(buf).map_err(|e| Failure::Io(e.to_string()))?;
                crate::report::emit(&text, cfg.output.as_deref()).map_err(|e| Failure::Io(e.to_string()))?;
                return Ok(Outcome::Written(values.iter().all(|v| v.is_finite())));
            }
            let inputs = json!({"centers": inst.centers, "scales": inst.scales, "half_width": g.half_width, "n": g.n, "h": g.h});
            Ok(Outcome::Report(RunReport::new("adhm density", inputs, json!({"grid": gr, "density": values}))))
        }
        Cmd::Field { inst, x, h } => {
            let d = data(&inst)?;
            let f = field_strength(&d, x, h).map_err(|e| Failure::usage(e, "move --x off the centres"))?;
            let res = asd_residual(&f);
            let norm = f.density().sqrt();
            let results = json!({"density": f.density(), "topological_density": f.topological_density(), "asd_residual": res, "field_norm": norm});
            let checks = vec![check_le("ASD residual / |F|", res / norm.max(f64::MIN_POSITIVE), tolerance(cfg, "asd_floor", 1e-3))];
            Ok(Outcome::Report(RunReport::new("adhm field", json!({"centers": inst.centers, "scales": inst.scales, "x": x, "h": h}), results).with_checks(checks)))
        }
        Cmd::Residuals { data } => {
            let text = std::fs::read_to_string(&data).map_err(|e| Failure::usage(format!("{}: {e}", data.display()), "check the --data path"))?;
            let d: AdhmData = serde_json::from_str(&text).map_err(|e| Failure::usage(e, "ADHM JSON needs k, r, alpha1, alpha2, p_map, q_map"))?;
            let (real, complex) = adhm_residuals(&d);
            let tol = tolerance(cfg, "adhm", 1e-8);
            let checks = vec![check_le("real moment map", real, tol), check_le("complex moment map", complex, tol)];
            Ok(Outcome::Report(RunReport::new("adhm residuals", json!({"data": data}), json!({"real": real, "complex": complex})).with_checks(checks)))
        }
        Cmd::Threshold { group, rank, k } => {
            let g: Group = group.parse().map_err(|e| Failure::usage(e, "groups: SU, Sp, Spin, G2, F4, E6, E7, E8"))?;
            let exists = existence_threshold(g, rank, k).map_err(|e| Failure::usage(e, "Spin needs --rank >= 7; SU and Sp need --rank >= 1"))?;
            Ok(Outcome::Report(RunReport::new("adhm threshold", json!({"group": g, "rank": rank, "k": k}), json!({"exists": exists}))))
        }
        Cmd::Dimension { k } => {
            if k == 0 {
                return Err(Failure::usage("k must be at least 1", "pass --k 1 or larger"));
            }
            Ok(Outcome::Report(RunReport::new("adhm dimension", json!({"k": k}), json!({"dimension": moduli_dimension(k)}))))
        }
    }
}
