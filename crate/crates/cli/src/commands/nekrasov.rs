use clap::Subcommand;
use gaugebench::algebra::{RationalFunction, TruncatedSeries};
use gaugebench::nekrasov::{
    check_exp, fixed_points, limits_of, prepotential, sw_periods, tangent_weights, variables, z_series, NekrasovError,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use super::{parse_complex, require_json, tolerance};
use crate::report::{check_exact, check_le, RunReport};
use crate::{Failure, Outcome, RunConfig};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Z = Σ_k Λ^k Σ_{fixed points} Π 1/weights over tuples of Young diagrams.
    Z {
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Rank 1: compare with exp(Λ/(ε1ε2)).
        #[arg(long)]
        check_exp: bool,
    },
    /// F = ε1ε2 log Z; with --limit, the values at ε1 = ε2 → 0.
    Prepotential {
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long)]
        limit: bool,
    },
    /// Fixed points of charge k and their tangent weights.
    FixedPoints {
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[arg(long)]
        k: u32,
    },
    /// a(u, Λ) = (1/2πi)∮_{|w|=1} z dw/w on the curve Λ(w + 1/w) = z² + u.
    Sw {
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        u: Complex64,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
}

fn usage(e: NekrasovError) -> Failure {
    Failure::usage(e, "rank is 1 or 2; see `gaugebench nekrasov --help`")
}

fn series_json(s: &TruncatedSeries<RationalFunction>) -> Value {
    Value::Array(s.coefficients().iter().map(|c| json!(c.to_string())).collect())
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_json(cfg, "nekrasov")?;
    let report = match args.cmd {
        Cmd::Z { rank, order, check_exp: check } => {
            let z = z_series(rank, order).map_err(usage)?;
            let inputs = json!({"rank": rank, "order": order, "check_exp": check});
            let results = json!({"variables": variables(rank), "coefficients": series_json(&z)});
            let mut r = RunReport::new("nekrasov z", inputs, results);
            if check {
                if rank != 1 {
                    return Err(Failure::usage("--check-exp applies to rank 1", "drop --check-exp or pass --rank 1"));
                }
                let m = check_exp(&z).map_err(usage)?;
                r = r.with_checks(vec![check_exact("Z_k = 1/(k!(e1 e2)^k)", m.is_none(), m.map(|k| format!("mismatch at k={k}")))]);
            }
            r
        }
        Cmd::Prepotential { rank, order, limit } => {
            let f = prepotential(rank, order).map_err(usage)?;
            let inputs = json!({"rank": rank, "order": order, "limit": limit});
            let mut results = json!({"variables": variables(rank), "coefficients": series_json(&f)});
            let mut r = RunReport::new("nekrasov prepotential", inputs, Value::Null);
            if limit {
                match limits_of(rank, &f) {
                    Ok(l) => {
                        results["limits"] = Value::Array(l.iter().map(|c| json!(c.to_string())).collect());
                        r = r.with_checks(vec![check_exact("finite ε → 0 limits", true, None)]);
                    }
                    Err(e @ NekrasovError::PolePersists(_)) => {
                        results["error"] = json!("PolePersists");
                        r = r.with_checks(vec![check_exact("finite ε → 0 limits", false, Some(e.to_string()))]);
                    }
                    Err(e) => return Err(usage(e)),
                }
            }
            r.results = results;
            r
        }
        Cmd::FixedPoints { rank, k } => {
            let fps = fixed_points(rank, k).map_err(usage)?;
            let vars = variables(rank);
            let rows = fps
                .iter()
                .map(|fp| {
                    let ws = tangent_weights(fp).map_err(usage)?;
                    Ok(json!({"partitions": fp.partitions, "weights": ws.iter().map(|w| w.format_with(&vars)).collect::<Vec<_>>()}))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            RunReport::new("nekrasov fixed-points", json!({"rank": rank, "k": k}), json!({"count": rows.len(), "fixed_points": rows}))
        }
        Cmd::Sw { u, lambda, samples } => {
            let p = sw_periods(u, lambda, samples).map_err(|e| Failure::usage(e, "pick |u| well away from 2Λ so the branch points avoid |w| = 1"))?;
            let checks = vec![check_le("change under doubling samples", p.doubling_difference, tolerance(cfg, "sw_convergence", 1e-10))];
            let results = json!({"a": p.a, "a_squared_plus_u": p.a * p.a + u, "doubling_difference": p.doubling_difference, "branch_clearance": p.branch_clearance});
            RunReport::new("nekrasov sw", json!({"u": u, "lambda": lambda, "samples": samples}), results).with_checks(checks)
        }
    };
    Ok(Outcome::Report(report))
}
