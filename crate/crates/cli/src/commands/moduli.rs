use clap::Subcommand;
use gaugebench::algebra::AlgebraError;
use gaugebench::moduli::{aij_table, check_splitting, exponent_rule, homology_via_aij, moduli_poincare, ModuliError, SeriesParams};
use serde_json::json;

use super::{require_json, to_value};
use crate::report::{check_exact, RunReport};
use crate::{Failure, Outcome, RunConfig};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Series {
    #[arg(long)]
    genus: u32,
    /// Truncation order in t (default 6g + 10).
    #[arg(long)]
    order: Option<usize>,
    /// `reconciled` or `paper` (the exponents as usually printed).
    #[arg(long, default_value = "reconciled")]
    exponent_rule: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Poincaré polynomial of the rank-2 odd-degree moduli space,
    /// ((1+t^3)^{2g} − t^{2g}(1+t)^{2g}) / ((1−t^2)(1−t^4)).
    Poincare(Series),
    /// Equivariant series = Poincaré polynomial + one shifted term per
    /// unstable stratum, checked coefficient by coefficient.
    Splitting(Series),
    /// Betti numbers rebuilt from the genus-independent a_ij.
    Homology(Series),
    /// The table a_ij for |i| <= i_max, j <= j_max.
    Aij {
        /// Defaults to j_max.
        #[arg(long, alias = "imax")]
        i_max: Option<i64>,
        #[arg(long, alias = "jmax")]
        j_max: u32,
    },
}

fn params(s: &Series) -> Result<SeriesParams, Failure> {
    let rule = exponent_rule(&s.exponent_rule).map_err(|e| Failure::usage(e, "--exponent-rule reconciled|paper"))?;
    SeriesParams::new(s.genus, s.order, rule).map_err(|e| Failure::usage(e, "need --genus >= 2 and --order >= 6g - 6"))
}

fn inputs(s: &Series) -> serde_json::Value {
    json!({"genus": s.genus, "order": s.order, "exponent_rule": s.exponent_rule})
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_json(cfg, "moduli")?;
    let report = match args.cmd {
        Cmd::Poincare(s) => {
            let p = params(&s)?;
            match moduli_poincare(&p) {
                Ok(poly) => {
                    let coeffs = poly.integer_coefficients();
                    let results = json!({"polynomial": poly.to_string(), "coefficients": coeffs});
                    RunReport::new("moduli poincare", inputs(&s), results)
                        .with_checks(vec![check_exact("exact division", true, None), check_exact("integer coefficients", coeffs.is_some(), None)])
                }
                Err(e @ ModuliError::Algebra(AlgebraError::NonExactDivision(_))) => {
                    let results = json!({"error": "NonExactDivision", "detail": e.to_string()});
                    RunReport::new("moduli poincare", inputs(&s), results).with_checks(vec![check_exact("exact division", false, Some(e.to_string()))])
                }
                Err(e) => return Err(Failure::usage(e, "see `gaugebench moduli poincare --help`")),
            }
        }
        Cmd::Splitting(s) => {
            let p = params(&s)?;
            let r = check_splitting(&p);
            let checks = vec![check_exact("splitting holds", r.holds, r.division_error.clone().or(r.first_mismatch.map(|m| format!("first mismatch at t^{m}"))))];
            RunReport::new("moduli splitting", inputs(&s), to_value(&r)?).with_checks(checks)
        }
        Cmd::Homology(s) => {
            let p = params(&s)?;
            let via = homology_via_aij(&p).map_err(|e| Failure::usage(e, "see --help"))?;
            let direct = moduli_poincare(&p);
            let ok = direct.as_ref().map_or(false, |d| *d == via);
            let results = json!({"via_aij": via.to_string(), "coefficients": via.integer_coefficients()});
            RunReport::new("moduli homology", inputs(&s), results).with_checks(vec![check_exact("agrees with the Poincaré polynomial", ok, None)])
        }
        Cmd::Aij { i_max, j_max } => {
            let i_max = i_max.unwrap_or(j_max as i64);
            let t = aij_table(i_max, j_max).map_err(|e| Failure::usage(e, "pass small non-negative bounds"))?;
            RunReport::new("moduli aij", json!({"i_max": i_max, "j_max": j_max}), to_value(&t)?)
        }
    };
    Ok(Outcome::Report(report))
}
