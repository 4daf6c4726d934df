//! Command-line verifier: one subcommand per verified result, seeded
//! determinism, JSON or text reports.
//!
//! Exit codes: 0 all checks passed, 1 a verification failed, 2 bad input.

mod report;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use netconics::hesse::{self, HesseError};
use netconics::scalar::{parse_rat, Rat};
use netconics::stabilizer;
use netconics::sweep;
use num_traits::Zero;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub const SCHEMA: &str = "netconics/1";

#[derive(Parser)]
#[command(
    name = "netconics",
    about = "Exact verification of enumerative invariants of nets of conics",
    version
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Seed for all randomized sampling.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Sample count for randomized checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Numeric matching tolerance (must lie in (0, 1e-3]).
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    /// Output format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "text"])]
    format: String,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check j(Gamma(W_lambda)) = (6912 - j)^3 / (27 j^2) exactly.
    HessianIdentity {
        /// Explicit pencil parameters (rationals; repeatable).
        #[arg(long = "lambda", value_name = "RAT")]
        lambdas: Vec<String>,
        /// Check this many random admissible parameters instead.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Run the pencil sweep: degree-12 discriminant, multiplicity profile,
    /// node/Veronese correlation, tangent cones, and the class ledger.
    Sweep {
        /// Inclusive seed range "a..b" (overrides --seed).
        #[arg(long)]
        seeds: Option<String>,
        /// Also compute the fiber profile at this j-value.
        #[arg(long = "j", value_name = "RAT")]
        j0: Option<String>,
    },
    /// Root-multiplicity analysis of the fiber cubic at a parameter b.
    Fb {
        #[arg(long = "b", value_name = "RAT")]
        b: String,
    },
    /// Degree of the dual of a degree-d surface with n ordinary double points.
    DualDegree {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        nodes: usize,
    },
    /// Verify the order-18 stabilizer: candidates, closure, presentation,
    /// quadratic residuals, and random non-membership probes.
    Stabilizer {
        /// Pencil parameters to survey (defaults to -7,-5,-3,1,3,5,7).
        #[arg(long = "lambda", value_name = "RAT")]
        lambdas: Vec<String>,
    },
    /// Exact checks on the reference net <xy, x^2 + yz, y^2 + xz>.
    VerifyH0,
    /// Run the full verification battery and emit one aggregate document.
    Report {
        /// Deliberately corrupt the j-calibration to prove the battery
        /// catches it (expected exit code 1).
        #[arg(long, hide = true)]
        negative_control: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // domain errors that indicate bad input exit with 2
            let bad_input = e.downcast_ref::<BadInput>().is_some()
                || e.downcast_ref::<HesseError>().is_some_and(|h| {
                    matches!(h, HesseError::FormulaPole | HesseError::SingularMember)
                });
            if bad_input {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}

#[derive(Debug)]
struct BadInput(String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for BadInput {}

fn validate_config(cfg: &ConfigArgs) -> anyhow::Result<()> {
    if !(cfg.tolerance > 0.0 && cfg.tolerance <= 1e-3) {
        anyhow::bail!(BadInput(format!(
            "tolerance {} outside (0, 1e-3]",
            cfg.tolerance
        )));
    }
    if cfg.samples == Some(0) {
        anyhow::bail!(BadInput("samples must be at least 1".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    validate_config(&cli.config)?;
    let (doc, ok) = match &cli.command {
        Command::HessianIdentity { lambdas, random } => {
            cmd_hessian_identity(&cli.config, lambdas, *random)?
        }
        Command::Sweep { seeds, j0 } => cmd_sweep(&cli.config, seeds.as_deref(), j0.as_deref())?,
        Command::Fb { b } => cmd_fb(b)?,
        Command::DualDegree { d, nodes } => cmd_dual_degree(*d, *nodes)?,
        Command::Stabilizer { lambdas } => cmd_stabilizer(&cli.config, lambdas)?,
        Command::VerifyH0 => cmd_verify_h0()?,
        Command::Report { negative_control } => report::cmd_report(&cli.config, *negative_control)?,
    };
    emit(&cli.config, &doc)?;
    Ok(if ok { 0 } else { 1 })
}

fn emit(cfg: &ConfigArgs, doc: &Value) -> anyhow::Result<()> {
    let rendered = if cfg.format == "json" {
        let mut s = serde_json::to_string_pretty(doc)?;
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        render_text(doc, 0, &mut s);
        s
    };
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {val}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {item}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{v}\n")),
    }
}

fn parse_rat_arg(s: &str) -> anyhow::Result<Rat> {
    parse_rat(s).map_err(|_| BadInput(format!("cannot parse rational {s:?}")).into())
}

pub(crate) fn random_admissible_lambdas(seed: u64, count: usize) -> Vec<Rat> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut out: Vec<Rat> = Vec::new();
    while out.len() < count {
        let num = rng.gen_range(-40i64..=40);
        let den = rng.gen_range(1i64..=12);
        let l = netconics::scalar::rat(num, den);
        // reject singular members, the j = 0 members, and duplicates
        let l3 = &l * &l * &l;
        if (&l3 + Rat::from_integer(1.into())).is_zero() {
            continue;
        }
        if l.is_zero() || l == netconics::scalar::rat_int(2) {
            continue;
        }
        if out.contains(&l) {
            continue;
        }
        out.push(l);
    }
    out
}

fn cmd_hessian_identity(
    cfg: &ConfigArgs,
    lambdas: &[String],
    random: Option<usize>,
) -> anyhow::Result<(Value, bool)> {
    let mut targets: Vec<Rat> = Vec::new();
    for s in lambdas {
        targets.push(parse_rat_arg(s)?);
    }
    if let Some(n) = random {
        targets.extend(random_admissible_lambdas(cfg.seed, n));
    }
    if targets.is_empty() {
        anyhow::bail!(BadInput("provide --lambda or --random".into()));
    }
    let mut rows = Vec::new();
    let mut all_ok = true;
    for l in &targets {
        let r = hesse::hessian_identity_check(l)?;
        all_ok &= r.equal;
        rows.push(serde_json::to_value(&r)?);
    }
    let doc = json!({
        "schema": SCHEMA,
        "command": "hessian-identity",
        "checked": rows.len(),
        "all_equal": all_ok,
        "results": rows,
    });
    Ok((doc, all_ok))
}

fn parse_seed_range(s: &str) -> anyhow::Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| BadInput(format!("bad range {s:?}")))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|_| BadInput(format!("bad range {s:?}")))?;
        if b < a {
            anyhow::bail!(BadInput(format!("empty range {s:?}")));
        }
        Ok((a..=b).collect())
    } else {
        let v: u64 = s
            .trim()
            .parse()
            .map_err(|_| BadInput(format!("bad seed {s:?}")))?;
        Ok(vec![v])
    }
}

fn cmd_sweep(
    cfg: &ConfigArgs,
    seeds: Option<&str>,
    j0: Option<&str>,
) -> anyhow::Result<(Value, bool)> {
    let seeds = match seeds {
        Some(s) => parse_seed_range(s)?,
        None => vec![cfg.seed],
    };
    let j0 = j0.map(parse_rat_arg).transpose()?;
    let mut reports = Vec::new();
    let mut docs = Vec::new();
    let mut ok = true;
    for &seed in &seeds {
        let flag = sweep::sample_flag(seed)?;
        let report = sweep::discriminant_sweep(&flag)?;
        let report = sweep::node_veronese_correlation(&flag, report)?;
        let cones = sweep::tangent_cone_check(&flag)?;
        ok &= report.b1 == Some(4) && report.b2 == Some(4) && cones.ok;
        let mut doc = serde_json::to_value(&report)?;
        doc["tangent_cones"] = serde_json::to_value(&cones)?;
        if let Some(j) = &j0 {
            let fiber = sweep::fiber_sweep(&flag, j)?;
            ok &= fiber.total_multiplicity == 12;
            doc["fiber"] = serde_json::to_value(&fiber)?;
        }
        reports.push(report);
        docs.push(doc);
    }
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "sweep",
        "sweeps": docs,
    });
    if reports.len() > 1 {
        let ledger = sweep::class_ledger(&reports)?;
        ok &= ledger.fiber_class == 12 && ledger.orbit_class == 4;
        doc["ledger"] = serde_json::to_value(&ledger)?;
    }
    Ok((doc, ok))
}

fn cmd_fb(b: &str) -> anyhow::Result<(Value, bool)> {
    let b = parse_rat_arg(b)?;
    let analysis = hesse::fb_root_analysis(&b)?;
    let decomposition = hesse::fiber_decomposition(&b)?;
    let ok = analysis.profile.total() == 3 && decomposition.class_total == 12;
    let roots: Vec<Value> = analysis
        .rational_roots
        .iter()
        .map(|(r, m)| json!({"root": r.to_string(), "multiplicity": m}))
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "command": "fb",
        "b": b.to_string(),
        "profile": analysis.profile,
        "rational_roots": roots,
        "decomposition": decomposition,
    });
    Ok((doc, ok))
}

fn cmd_dual_degree(d: i64, nodes: usize) -> anyhow::Result<(Value, bool)> {
    if d < 2 {
        anyhow::bail!(BadInput("degree must be at least 2".into()));
    }
    let deg = netconics::chow::dual_degree(d, nodes);
    let strict = netconics::chow::strict_transform_class(d, &vec![2; nodes]);
    let polar = netconics::chow::polar_map_class(d, nodes);
    let expected = d * (d - 1) * (d - 1) - 2 * nodes as i64;
    let ok = deg == expected.into();
    let doc = json!({
        "schema": SCHEMA,
        "command": "dual-degree",
        "d": d,
        "nodes": nodes,
        "strict_transform": strict.to_string(),
        "polar_class": polar.to_string(),
        "dual_degree": deg.to_string(),
        "closed_form": format!("{d}({dm1})^2 - 2({nodes}) = {expected}", dm1 = d - 1),
    });
    Ok((doc, ok))
}

fn cmd_stabilizer(cfg: &ConfigArgs, lambdas: &[String]) -> anyhow::Result<(Value, bool)> {
    let lambdas: Vec<Rat> = if lambdas.is_empty() {
        [-7i64, -5, -3, 1, 3, 5, 7]
            .iter()
            .map(|&v| netconics::scalar::rat_int(v))
            .collect()
    } else {
        lambdas
            .iter()
            .map(|s| parse_rat_arg(s))
            .collect::<Result<_, _>>()?
    };
    let elements = stabilizer::candidate_group();
    let group = stabilizer::verify_group_structure(&elements)
        .map_err(|e| anyhow::anyhow!("group structure: {e}"))?;
    let probes = cfg.samples.unwrap_or(1000);
    let rows = stabilizer::stabilizer_survey(&lambdas, probes, cfg.seed)
        .map_err(|e| anyhow::anyhow!("survey: {e}"))?;
    let ok = group.order == 18
        && group.closed
        && rows
            .iter()
            .all(|r| r.candidates_ok == 18 && r.eq2_ok == 18 && r.extra_found == 0);
    let doc = json!({
        "schema": SCHEMA,
        "command": "stabilizer",
        "group": group,
        "survey": rows,
        "completeness": "conjecture-consistent: random probes only, not a proof",
    });
    Ok((doc, ok))
}

fn cmd_verify_h0() -> anyhow::Result<(Value, bool)> {
    let report = sweep::verify_h0()?;
    let doc = json!({
        "schema": SCHEMA,
        "command": "verify-h0",
        "report": report,
        "pass": true,
    });
    Ok((doc, true))
}
