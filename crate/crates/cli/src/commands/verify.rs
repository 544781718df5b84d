use gaugebench::verify::{registry, verify_all, Scale, VerifyContext};
use serde_json::json;

use super::{require_json, to_value};
use crate::report::RunReport;
use crate::{Failure, Outcome, RunConfig};

#[derive(clap::Args)]
pub struct Args {
    /// `quick` keeps grids at 24^4 and series at order 3.
    #[arg(long)]
    scale: Option<String>,
    /// Override a tolerance, `NAME=VALUE`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Run only these criteria (comma-separated numbers).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
    /// List the criteria and exit.
    #[arg(long)]
    list: bool,
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_json(cfg, "verify")?;
    if args.list {
        let rows: Vec<_> = registry().iter().map(|c| json!({"id": c.id(), "title": c.title()})).collect();
        return Ok(Outcome::Report(RunReport::new("verify", json!({"list": true}), json!({"criteria": rows}))));
    }
    let scale: Scale = args
        .scale
        .as_deref()
        .or(cfg.scale.as_deref())
        .unwrap_or("quick")
        .parse()
        .map_err(|e| Failure::usage(e, "--scale quick|full"))?;
    let mut ctx = VerifyContext::new(scale);
    ctx.timing = cfg.timing;
    if cfg.seed != 0 {
        ctx.seed = cfg.seed;
    }
    let names = ctx.tolerances.names().join(", ");
    for (k, v) in &cfg.tolerances {
        ctx.tolerances.set(k, *v).map_err(|e| Failure::usage(e, format!("known tolerances: {names}")))?;
    }
    for t in &args.tolerances {
        let (k, v) = t.split_once('=').ok_or_else(|| Failure::usage(format!("bad --tol {t:?}"), "use --tol NAME=VALUE"))?;
        let v: f64 = v.parse().map_err(|e| Failure::usage(format!("bad --tol value {v:?}: {e}"), "use --tol NAME=VALUE"))?;
        ctx.tolerances.set(k, v).map_err(|e| Failure::usage(e, format!("known tolerances: {names}")))?;
    }
    if let Some(bad) = args.only.iter().find(|i| !(1..=15).contains(*i)) {
        return Err(Failure::usage(format!("no criterion {bad}"), "criteria are numbered 1 to 15; see --list"));
    }
    let report = verify_all(&ctx, &args.only);
    for c in &report.criteria {
        eprintln!("[{}] criterion {:>2}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title);
        for k in c.checks.iter().filter(|k| !k.passed) {
            eprintln!("       failed check: {} {}", k.name, k.detail.as_deref().unwrap_or(""));
        }
    }
    let passed = report.passed;
    let inputs = json!({"scale": scale, "only": args.only, "seed": ctx.seed});
    let mut r = RunReport::new("verify", inputs, to_value(&report)?);
    if !passed {
        r = r.failed();
    }
    Ok(Outcome::Report(r))
}
