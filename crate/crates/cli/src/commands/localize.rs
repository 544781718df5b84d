use clap::Subcommand;
use gaugebench::localization::{
    ab_integral, boundary_check_cm, dh_lhs_numeric, dh_rhs, load_model, moment_hull_check, pushforward_density,
    CorruptedSampler, LocalizationError, ManifoldModel,
};
use serde_json::json;

use super::{parse_list, require_json, to_value, tolerance};
use crate::report::{check_exact, check_le, RunReport};
use crate::{Failure, Outcome, RunConfig};

type Floats = Vec<f64>;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct ModelOpt {
    /// `s2`, `s2-pair`, `s2-corrupted`, `cp2`, `cN` (formal C^N) or a JSON
    /// model file.
    #[arg(long, default_value = "s2")]
    model: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// ∫ e^{−itH} ω^m/m! by quadrature against the fixed-point sum
    /// Σ e^{−itH(p)} / (e(p)(−it)^m).
    Dh {
        #[command(flatten)]
        model: ModelOpt,
        /// Comma-separated values of t.
        #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_list)]
        t: Floats,
    },
    /// Σ_p α|_p / E_p for a class in the model's catalog; must be a polynomial in τ.
    Ab {
        #[command(flatten)]
        model: ModelOpt,
        /// Class name, e.g. `one`, `omega`, `omega^2`.
        #[arg(long)]
        class: String,
    },
    /// Histogram of H under the Liouville measure with a piecewise
    /// polynomial fit between critical values.
    Density {
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long, default_value_t = 16)]
        bins: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Fit degree (default m − 1).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Sampled torus moment values against the hull of the fixed-point images.
    Hull {
        #[command(flatten)]
        model: ModelOpt,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Wrap the sampler in a deliberately wrong one.
        #[arg(long)]
        corrupt: bool,
    },
    /// Formal integral over C^m with weights 1 against τ^{−m}.
    Boundary {
        #[arg(long)]
        m: u32,
    },
}

fn model(m: &ModelOpt) -> Result<ManifoldModel, Failure> {
    load_model(&m.model).map_err(|e| Failure::usage(e, "built-in models: s2, s2-pair, s2-corrupted, cp2, cN"))
}

fn usage(e: LocalizationError) -> Failure {
    Failure::usage(e, "see `gaugebench localize --help`")
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_json(cfg, "localize")?;
    let report = match args.cmd {
        Cmd::Dh { model: mo, t } => {
            let m = model(&mo)?;
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for &ti in &t {
                let rhs = dh_rhs(&m, ti).map_err(usage)?;
                let lhs = dh_lhs_numeric(&m, ti).map_err(usage)?;
                worst = worst.max((lhs - rhs).norm());
                rows.push(json!({"t": ti, "lhs": lhs, "rhs": rhs, "difference": (lhs - rhs).norm()}));
            }
            RunReport::new("localize dh", json!({"model": mo.model, "t": t}), json!({"values": rows}))
                .with_checks(vec![check_le("max |LHS − RHS|", worst, tolerance(cfg, "dh", 1e-7))])
        }
        Cmd::Ab { model: mo, class } => {
            let m = model(&mo)?;
            let inputs = json!({"model": mo.model, "class": class});
            match ab_integral(&m, &class) {
                Ok(p) => RunReport::new("localize ab", inputs, json!({"integral": p.to_string(), "value": p}))
                    .with_checks(vec![check_exact("polynomial in tau", true, None)]),
                Err(e @ LocalizationError::NotPolynomial(..)) => RunReport::new("localize ab", inputs, json!({"error": "NotPolynomial", "detail": e.to_string()}))
                    .with_checks(vec![check_exact("polynomial in tau", false, Some(e.to_string()))]),
                Err(e) => return Err(usage(e)),
            }
        }
        Cmd::Density { model: mo, bins, samples, degree } => {
            let m = model(&mo)?;
            let d = pushforward_density(&m, bins, samples, cfg.seed, degree).map_err(usage)?;
            let inputs = json!({"model": mo.model, "bins": bins, "samples": samples, "degree": degree, "seed": cfg.seed});
            let checks = vec![check_le("histogram residual / bin mass", d.relative_residual, tolerance(cfg, "density", 0.01))];
            RunReport::new("localize density", inputs, to_value(&d)?).with_checks(checks)
        }
        Cmd::Hull { model: mo, samples, corrupt } => {
            let mut m = model(&mo)?;
            if corrupt {
                let inner = m.sampler.take().ok_or_else(|| usage(LocalizationError::NoSampler(m.name.clone())))?;
                m.sampler = Some(Box::new(CorruptedSampler { inner }));
            }
            let r = moment_hull_check(&m, samples, cfg.seed).map_err(usage)?;
            let inputs = json!({"model": mo.model, "samples": samples, "corrupt": corrupt, "seed": cfg.seed});
            let checks = vec![check_exact("every sample inside the hull", r.inside, Some(format!("{} outside", r.outside)))];
            RunReport::new("localize hull", inputs, to_value(&r)?).with_checks(checks)
        }
        Cmd::Boundary { m } => {
            let b = boundary_check_cm(m).map_err(usage)?;
            let checks = vec![check_exact("formal integral equals τ^{-m}", b.equal, None)];
            RunReport::new("localize boundary", json!({"m": m}), json!({"lhs": b.lhs.to_string(), "rhs": b.rhs.to_string(), "equal": b.equal}))
                .with_checks(checks)
        }
    };
    Ok(Outcome::Report(report))
}
