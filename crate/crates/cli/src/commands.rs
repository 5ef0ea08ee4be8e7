//! Subcommand bodies.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use ara_core::construct::{design_rate, ComplexityReport, ValidityReport};
use ara_core::dd::{
    format_f64, is_in_p, symmetry_swap, CorrectedProfile, DdDocument, DegreeDist, Perspective, SharedProfile,
};
use ara_core::de::{self, max_residual, ResidualForm, ThresholdConfig};
use ara_core::sim::{self, SimConfig};
use ara_core::{build, Construction, DegreeDistPair, EnsembleSpec, Family};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::grid::parse_channel;
use crate::output::{emit, to_json};
use crate::{Command, DeArgs, EnsembleArgs};

/// Degree below which the check CDF is reported.
const CDF_UPTO: usize = 64;

/// Outcome of one subcommand.
pub struct Status {
    pub ok: bool,
    /// The product went to stdout, so the status goes to stderr.
    pub streamed: bool,
    pub body: Value,
}

impl Status {
    fn error(command: &str, msg: impl Into<String>, streamed: bool) -> Self {
        let msg = msg.into();
        Self { ok: false, streamed, body: json!({ "command": command, "ok": false, "error": msg }) }
    }
}

pub fn run(cmd: Command) -> Status {
    match cmd {
        Command::Design { ensemble, out } => {
            let streamed = out.is_none();
            design(&ensemble, out.as_deref()).unwrap_or_else(|e| Status::error("design", e, streamed))
        }
        Command::Verify { pair, tol, reduction_tol, out } => {
            let streamed = out.is_none();
            verify(&pair, tol, reduction_tol, out.as_deref()).unwrap_or_else(|e| Status::error("verify", e, streamed))
        }
        Command::De { pair, channel, de, out } => {
            let streamed = out.is_none();
            de_scan(&pair, &channel, &de, out.as_deref()).unwrap_or_else(|e| Status::error("de", e, streamed))
        }
        Command::Threshold { pair, lo, hi, tol_p, de, out } => {
            threshold(&pair, lo, hi, tol_p, &de, out.as_deref()).unwrap_or_else(|e| Status::error("threshold", e, false))
        }
        Command::Simulate { ensemble, n, channel, trials, seed, outer, pilots, fixed_graph, tail_mass, dump_graph, out } => {
            let streamed = out.is_none();
            let opts = SimOpts { n, trials, seed, outer, pilots, fixed_graph, tail_mass, dump_graph };
            simulate(&ensemble, &channel, &opts, out.as_deref()).unwrap_or_else(|e| Status::error("simulate", e, streamed))
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// File written by `design`.
#[derive(Serialize)]
struct DesignDoc<'a> {
    spec: &'a EnsembleSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    lambda: DdDocument,
    rho: DdDocument,
    bit_node: DdDocument,
    check_node: DdDocument,
    validity: &'a ValidityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    complexity: Option<&'a ComplexityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    design_rate: Option<f64>,
    /// Entry `d` is the fraction of check nodes of degree below `d`.
    check_degree_cdf_below: Vec<f64>,
}

/// The parts of a design file needed to rebuild the pair.
#[derive(Deserialize)]
struct DesignInput {
    spec: EnsembleSpec,
    lambda: DdDocument,
    rho: DdDocument,
}

fn design(args: &EnsembleArgs, out: Option<&Path>) -> Result<Status, String> {
    let spec = args.spec()?;
    let c = build(&spec).map_err(err)?;
    let (family, p) = (c.pair.family(), c.pair.p());
    let rate = design_rate(&c.pair).ok();
    let doc = DesignDoc {
        spec: &c.spec,
        b: c.b,
        lambda: DdDocument::from_dist(c.pair.bit(), family, p),
        rho: DdDocument::from_dist(c.pair.check(), family, p),
        bit_node: DdDocument::from_dist(&c.bit_node, family, p),
        check_node: DdDocument::from_dist(&c.check_node, family, p),
        validity: &c.validity,
        complexity: c.complexity.as_ref(),
        design_rate: rate,
        check_degree_cdf_below: c.check_degree_cdf(CDF_UPTO),
    };
    emit(out, &to_json(&doc)).map_err(err)?;
    let ok = c.validity.is_valid();
    Ok(Status {
        ok,
        streamed: out.is_none(),
        body: json!({
            "command": "design",
            "ok": ok,
            "family": family,
            "p": p,
            "b": c.b,
            "design_rate": rate,
            "first_negative_bit": c.validity.bit_negativity.first_index(),
            "first_negative_check": c.validity.check_negativity.first_index(),
            "out": out.map(|p| p.display().to_string()),
        }),
    })
}

/// Stored coefficients evaluated on top of the regenerated analytic profile.
fn corrected(stored: &DdDocument, regen: &DegreeDist) -> Result<(DegreeDist, f64), String> {
    if stored.perspective != Perspective::Edge || stored.side != regen.side() {
        return Err(format!("expected an edge-perspective {:?}-side distribution", regen.side()));
    }
    let series = stored.series().map_err(err)?;
    let n = series.precision().max(regen.precision());
    let delta = series.with_precision(n).sub(&regen.series().with_precision(n));
    let max_delta = delta.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let profile: SharedProfile = Arc::new(CorrectedProfile::new(regen.profile().clone(), delta));
    Ok((DegreeDist::with_profile(series, Perspective::Edge, regen.side(), profile), max_delta))
}

/// Reads a design file and returns the regenerated construction and the
/// stored pair, plus the largest stored-minus-regenerated coefficient gap.
fn load(path: &Path) -> Result<(Construction, DegreeDistPair, f64), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let input: DesignInput = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let c = build(&input.spec).map_err(err)?;
    let (bit, db) = corrected(&input.lambda, c.pair.bit())?;
    let (check, dc) = corrected(&input.rho, c.pair.check())?;
    let pair = DegreeDistPair::new(bit, check, c.pair.family(), c.pair.p()).map_err(err)?;
    Ok((c, pair, db.max(dc)))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Value>,
}

impl Check {
    fn below(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self { name, pass: value < tolerance, value: Some(value), tolerance: Some(tolerance), detail: None }
    }
}

fn verify(path: &Path, tol: f64, reduction_tol: f64, out: Option<&Path>) -> Result<Status, String> {
    let (_, pair, max_delta) = load(path)?;
    let (family, p) = (pair.family(), pair.p());
    let mut checks = Vec::new();
    for (name, d) in [("bit_membership", pair.bit()), ("check_membership", pair.check())] {
        let rep = is_in_p(d);
        checks.push(Check {
            name,
            pass: rep.passes(),
            value: None,
            tolerance: None,
            detail: Some(serde_json::to_value(&rep.violations).map_err(err)?),
        });
    }
    if family != Family::Ldpc {
        checks.push(Check::below("fixed_point_residual", max_residual(&pair, p, ResidualForm::Standard), tol));
        let swapped = symmetry_swap(&pair);
        checks.push(Check::below("swap_residual", max_residual(&swapped, 1.0 - p, ResidualForm::Standard), tol));
    }
    if let Ok(rate) = design_rate(&pair) {
        if family != Family::Ldpc {
            checks.push(Check::below("capacity_identity", (rate - (1.0 - p)).abs(), tol));
        }
    }
    if family == Family::Ara {
        checks.push(Check::below("reduction_equivalence", de::reduction_equivalence(&pair, p).map_err(err)?, reduction_tol));
        checks.push(Check::below(
            "swapped_reduction_equivalence",
            de::swapped_reduction_equivalence(&pair, p).map_err(err)?,
            reduction_tol,
        ));
    }
    let ok = checks.iter().all(|c| c.pass);
    let report = json!({
        "command": "verify",
        "ok": ok,
        "family": family,
        "p": p,
        "max_coefficient_deviation": max_delta,
        "checks": checks,
    });
    if let Some(o) = out {
        emit(Some(o), &to_json(&report)).map_err(err)?;
    }
    Ok(Status { ok, streamed: false, body: report })
}

fn de_scan(path: &Path, channel: &str, args: &DeArgs, out: Option<&Path>) -> Result<Status, String> {
    let grid = parse_channel(channel)?;
    let (_, pair, _) = load(path)?;
    let cfg = args.config();
    let mut csv = String::from("p,success,final_x1,iterations\n");
    let mut successes = 0;
    for &p in &grid {
        let r = de::run_de(&pair, p, &cfg);
        successes += r.converged_to_zero as usize;
        csv.push_str(&format!("{},{},{},{}\n", format_f64(p), r.converged_to_zero, format_f64(r.final_x1), r.iterations));
    }
    emit(out, &csv).map_err(err)?;
    Ok(Status {
        ok: true,
        streamed: out.is_none(),
        body: json!({
            "command": "de",
            "ok": true,
            "points": grid.len(),
            "successes": successes,
            "out": out.map(|p| p.display().to_string()),
        }),
    })
}

fn threshold(path: &Path, lo: f64, hi: f64, tol_p: f64, args: &DeArgs, out: Option<&Path>) -> Result<Status, String> {
    let (_, pair, _) = load(path)?;
    let cfg = ThresholdConfig { lo, hi, tol_p, de: args.config() };
    let t = de::threshold(&pair, &cfg).map_err(err)?;
    if let Some(o) = out {
        emit(Some(o), &format!("{}\n", format_f64(t))).map_err(err)?;
    }
    Ok(Status {
        ok: true,
        streamed: false,
        body: json!({ "command": "threshold", "ok": true, "family": pair.family(), "threshold": t }),
    })
}

pub struct SimOpts {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub outer: Option<String>,
    pub pilots: f64,
    pub fixed_graph: bool,
    pub tail_mass: f64,
    pub dump_graph: Option<PathBuf>,
}

fn simulate(args: &EnsembleArgs, channel: &str, opts: &SimOpts, out: Option<&Path>) -> Result<Status, String> {
    let grid = parse_channel(channel)?;
    if !(0.0..1.0).contains(&opts.pilots) {
        return Err(format!("--pilots must lie in [0, 1), got {}", opts.pilots));
    }
    let c = build(&args.spec()?).map_err(err)?;
    let k = sim::k_for_block_length(&c, opts.n).map_err(err)?;
    let r = opts.outer.as_deref().map(sim::parse_outer_rate).transpose().map_err(err)?.unwrap_or(0);
    let mut cfg = SimConfig::new(k, opts.trials as usize, opts.seed).with_pilots(opts.pilots).with_outer(r);
    cfg.fresh_graph = !opts.fixed_graph;
    cfg.tail_mass = opts.tail_mass;
    if let Some(path) = &opts.dump_graph {
        let g = sim::template(&c, k, opts.tail_mass).map_err(err)?.sample(&mut sim::trial_rng(opts.seed, u64::MAX, 0));
        std::fs::write(path, g.adjacency_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let results = sim::monte_carlo(&c, &grid, &cfg).map_err(err)?;
    emit(out, &sim::results_csv(&results)).map_err(err)?;
    let first = results.first();
    Ok(Status {
        ok: true,
        streamed: out.is_none(),
        body: json!({
            "command": "simulate",
            "ok": true,
            "family": c.spec.family,
            "n": first.map(|r| r.n),
            "k": k,
            "outer_redundancy": r,
            "points": results.len(),
            "trials": opts.trials,
            "out": out.map(|p| p.display().to_string()),
        }),
    })
}
