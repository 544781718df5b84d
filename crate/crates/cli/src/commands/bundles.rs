use clap::Subcommand;
use gaugebench::bundles::{
    atiyah_tree, f_tower, line_cohomology_pn, ns_matrices, nu_stability, rr_curve, semistable_cohomology,
    subtractive_euclid, BundleSymbol,
};
use serde_json::json;

use super::{require_json, to_value, tolerance};
use crate::report::{check_exact, check_le, RunReport};
use crate::{Failure, Outcome, RunConfig};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recursive construction of the indecomposable E_{r,d} on an elliptic
    /// curve from E_{1,0} by tensoring with λ and extending by trivial bundles.
    Atiyah {
        #[arg(long)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// The tower 0 → C → F_h → F_{h−1} → 0 of unipotent bundles.
    Ftower {
        #[arg(long)]
        h: u32,
    },
    /// Euler characteristic χ = d + r(1 − g) and, when a vanishing theorem
    /// applies to a semistable bundle, h^0 and h^1.
    Rr {
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long)]
        genus: u32,
    },
    /// h^i(P^n, O(p)) for i = 0..n, with the Serre-dual check.
    LineCohomology {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Unitary A, B with ABA^{-1}B^{-1} = exp(2πi d/r).
    Ns {
        #[arg(long)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Rank-2 stability ν < d/2 for a maximal line subbundle of degree ν.
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        nu: i64,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
}

pub fn run(args: Args, cfg: &RunConfig) -> Result<Outcome, Failure> {
    require_json(cfg, "bundles")?;
    let usage = |e: gaugebench::bundles::BundleError| Failure::usage(e, "rank and degree must be coprime, rank >= 1");
    let report = match args.cmd {
        Cmd::Atiyah { rank, degree } => {
            let t = atiyah_tree(rank, degree).map_err(usage)?;
            let (r, d) = t.replay();
            let mut results = to_value(&t)?;
            if degree >= 0 {
                let (ext, ten) = subtractive_euclid(rank as u64, degree as u64);
                results["euclid_steps"] = json!({"rank_subtractions": ext, "degree_subtractions": ten});
            }
            let checks = vec![check_exact("replay reaches (rank, degree)", (r, d) == (rank, degree), None)];
            RunReport::new("bundles atiyah", json!({"rank": rank, "degree": degree}), results).with_checks(checks)
        }
        Cmd::Ftower { h } => {
            let t = f_tower(h).map_err(|e| Failure::usage(e, "pass --h >= 1"))?;
            RunReport::new("bundles ftower", json!({"h": h}), to_value(&t)?)
        }
        Cmd::Rr { rank, degree, genus } => {
            let e = BundleSymbol::new(rank, degree, genus).map_err(usage)?;
            let chi = rr_curve(&e);
            let h = semistable_cohomology(&e);
            let results = json!({"chi": chi, "h0": h.map(|x| x.0), "h1": h.map(|x| x.1)});
            RunReport::new("bundles rr", json!({"rank": rank, "degree": degree, "genus": genus}), results)
        }
        Cmd::LineCohomology { n, p } => {
            let h = line_cohomology_pn(n, p).map_err(|e| Failure::usage(e, "pass --n >= 1"))?;
            let dual = line_cohomology_pn(n, -(n as i64) - 1 - p).map_err(|e| Failure::usage(e, "pass --n >= 1"))?;
            let ok = (0..=n as usize).all(|i| h[i] == dual[n as usize - i]);
            RunReport::new("bundles line-cohomology", json!({"n": n, "p": p}), json!({"h": h}))
                .with_checks(vec![check_exact("Serre duality h^i(p) = h^{n-i}(-n-1-p)", ok, None)])
        }
        Cmd::Ns { rank, degree } => {
            let pair = ns_matrices(rank, degree).map_err(usage)?;
            let defect = pair.commutator_defect();
            let commutant = pair.commutant_dimension().map_err(usage)?;
            let mut results = to_value(&pair)?;
            results["commutator_defect"] = json!(defect);
            results["commutant_dimension"] = json!(commutant);
            let checks = vec![
                check_le("‖ABA⁻¹B⁻¹ − ζ‖", defect, tolerance(cfg, "ns_commutator", 1e-12)),
                check_exact("irreducible (commutant is scalars)", commutant == 1, None),
            ];
            RunReport::new("bundles ns", json!({"rank": rank, "degree": degree}), results).with_checks(checks)
        }
        Cmd::Stability { nu, degree } => {
            RunReport::new("bundles stability", json!({"nu": nu, "degree": degree}), json!({"stable": nu_stability(nu, degree)}))
        }
    };
    Ok(Outcome::Report(report))
}
