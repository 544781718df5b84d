use clap::Subcommand;
use gaugebench::numerics::Contour;
use gaugebench::twistor::{
    bateman_transform, harmonic_restriction_residual, ultrahyperbolic_order, ultrahyperbolic_residual, write_csv,
    BatemanParams, IntegrandCatalog,
};
use num_complex::Complex64;
use serde_json::json;

use super::{parse_list, parse_point, require_json, to_value, tolerance};
use crate::report::{check_exact, check_le, RunReport};
use crate::{Failure, Format, Outcome, RunConfig};

type Floats = Vec<f64>;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct ContourOpts {
    /// Integrand `NAME` or `builtin:NAME`; see `twistor list`.
    #[arg(long, default_value = "builtin:pole")]
    integrand: String,
    /// Circle radius (centred at 0).
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Trapezoid nodes on the circle.
    #[arg(long, default_value_t = 128)]
    samples: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Names of the built-in integrands.
    List,
    /// F(p,q,r,s) = ∮ f(z, pz+q, rz+s) dz, the residual of
    /// ∂²F/∂p∂s − ∂²F/∂q∂r = 0 and, for real points, of the Laplace equation.
    Bateman {
        #[command(flatten)]
        contour: ContourOpts,
        /// Real point `x1,x2,x3,x4`, mapped to p = x1+ix2, s = x1−ix2,
        /// q = −x3+ix4, r = x3+ix4.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point, conflicts_with = "params")]
        point: Option<[f64; 4]>,
        /// Complex parameters as `p_re,p_im,q_re,q_im,r_re,r_im,s_re,s_im`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        params: Option<Floats>,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// F on a square of real points in the (x1, x2) plane (use --format csv).
    Grid {
        #[command(flatten)]
        contour: ContourOpts,
        /// Fixed `x3,x4`.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_list)]
        rest: Floats,
        /// Square centre `x1,x2`.
        #[arg(long, default_value = "-1,0", allow_hyphen_values = true, value_parser = parse_list)]
        centre: Floats,
        #[arg(long, default_value_t = 0.2)]
        half_width: f64,
        #[arg(long, default_value_t = 11)]
        n: usize,
    },
}

fn contour(c: &ContourOpts) -> Result<Contour, Failure> {
    Contour::new(Complex64::new(0.0, 0.0), c.radius, c.samples).map_err(|e| Failure::usage(e, "need --radius > 0 and --samples >= 16"))
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let catalog = IntegrandCatalog::default();
    let usage = |e: gaugebench::twistor::TwistorError| Failure::usage(e, "choose an integrand from `twistor list` and a contour inside its annulus");
    match args.cmd {
        Cmd::List => {
            require_json(cfg, "twistor list")?;
            Ok(Outcome::Report(RunReport::new("twistor list", json!({}), json!({"integrands": catalog.names()}))))
        }
        Cmd::Bateman { contour: co, point, params, h } => {
            require_json(cfg, "twistor bateman")?;
            let f = catalog.get(&co.integrand).map_err(usage)?;
            let c = contour(&co)?;
            let x = match (point, &params) {
                (Some(p), _) => BatemanParams::from_point(p),
                (None, Some(v)) if v.len() == 8 => BatemanParams::new(
                    Complex64::new(v[0], v[1]),
                    Complex64::new(v[2], v[3]),
                    Complex64::new(v[4], v[5]),
                    Complex64::new(v[6], v[7]),
                ),
                (None, Some(_)) => return Err(Failure::usage("--params needs 8 numbers", "p_re,p_im,q_re,q_im,r_re,r_im,s_re,s_im")),
                (None, None) => return Err(Failure::usage("no evaluation point", "pass --point or --params")),
            };
            let value = bateman_transform(f, &x, &c).map_err(usage)?;
            let scale = value.norm().max(f64::MIN_POSITIVE);
            let residual = ultrahyperbolic_residual(f, &x, &c, h).map_err(usage)?;
            let order = ultrahyperbolic_order(f, &x, &c, 10.0 * h).map_err(usage)?;
            let mut checks = vec![check_le("ultrahyperbolic residual / |F|", residual / scale, tolerance(cfg, "ultrahyperbolic", 1e-6))];
            let order_ok = order.stencil_exact || order.observed_order.map_or(false, |p| p >= tolerance(cfg, "stencil_order", 1.9));
            checks.push(check_exact("second-order decay or stencil exact", order_ok, order.observed_order.map(|p| format!("observed order {p:.3}"))));
            let mut results = json!({
                "F": value,
                "closed_form": f.closed_form(&x),
                "ultrahyperbolic_residual": residual,
                "order_check": to_value(&order)?,
            });
            if let Some(p) = point {
                let hr = harmonic_restriction_residual(f, p, &c, h).map_err(usage)?;
                results["harmonic_residual"] = json!(hr);
                checks.push(check_le("harmonic residual / |F|", hr / scale, tolerance(cfg, "harmonic", 1e-5)));
            }
            let inputs = json!({"integrand": co.integrand, "radius": co.radius, "samples": co.samples, "point": point, "params": params, "h": h});
            Ok(Outcome::Report(RunReport::new("twistor bateman", inputs, results).with_checks(checks)))
        }
        Cmd::Grid { contour: co, rest, centre, half_width, n } => {
            if rest.len() != 2 || centre.len() != 2 || n < 2 {
                return Err(Failure::usage("--rest and --centre take two numbers; --n >= 2", "e.g. --centre -1,0 --rest 0,0"));
            }
            let f = catalog.get(&co.integrand).map_err(usage)?;
            let c = contour(&co)?;
            let step = 2.0 * half_width / (n - 1) as f64;
            let pts: Vec<[f64; 4]> = (0..n * n)
                .map(|i| [centre[0] - half_width + (i / n) as f64 * step, centre[1] - half_width + (i % n) as f64 * step, rest[0], rest[1]])
                .collect();
            let params: Vec<BatemanParams> = pts.iter().map(|p| BatemanParams::from_point(*p)).collect();
            if cfg.format == Format::Csv {
                let mut buf = Vec::new();
                write_csv(f, &params, &c, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
                let text = String::from_utf8(buf).map_err(|e| Failure::Io(e.to_string()))?;
                crate::report::emit(&text, cfg.output.as_deref()).map_err(|e| Failure::Io(e.to_string()))?;
                return Ok(Outcome::Written(true));
            }
            let values = params.iter().map(|x| bateman_transform(f, x, &c).map_err(usage)).collect::<Result<Vec<_>, _>>()?;
            let inputs = json!({"integrand": co.integrand, "rest": rest, "centre": centre, "half_width": half_width, "n": n});
            Ok(Outcome::Report(RunReport::new("twistor grid", inputs, json!({"points": pts, "F": values}))))
        }
    }
}
