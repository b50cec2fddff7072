//! Command-line front end. `run` does all the work and returns what should be
//! printed, so the binary and the tests share one code path.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::catalog;
use crate::error::{Error, Result};
use crate::exactnum::{MPoly, VarContext};
use crate::graphs::{
    generic_param_names, reductivity_verdict, select_graph, solve_linear_graph_symbolic,
    GeodesicGraph, Provenance, SymbolicSolve, Verdict, VerdictOptions,
};
use crate::metrics::admissibility_sample;
use crate::report::{error_json, error_kind, exit_code_for, RunReport, EXIT_INPUT, EXIT_OK};
use crate::spacefile::{parse_override, ParsedSpace, SCHEMA_VERSION};
use crate::verify::sampling::SampleConfig;
use crate::verify::{
    compare_graphs, fundamental_tensor_residual, geodesic_residual, graph_battery, ResidualReport,
};

const AGREEMENT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print the geodesic graph, symbolically and as selected for the norm.
    Solve,
    /// Decide natural reductivity.
    Verdict,
    /// Run every residual check on the space and its graph.
    Verify,
    /// List the built-in spaces.
    Catalog,
    /// Print the structure of a space and its file form.
    Describe,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Verdict => "verdict",
            Command::Verify => "verify",
            Command::Catalog => "catalog",
            Command::Describe => "describe",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "geograph",
    version,
    about = "Geodesic graphs on homogeneous Finsler spaces"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Built-in space name (see `geograph catalog`).
    #[arg(long, conflicts_with = "file")]
    pub space: Option<String>,
    /// Path to a JSON space file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long)]
    pub json: bool,
    /// Override a file parameter, e.g. `--param c=3/2`. Repeatable.
    #[arg(long = "param", value_name = "KEY=RATIONAL")]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Args::try_parse_from(argv) {
        Ok(args) => execute(&args),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_INPUT,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            }
        }
    }
}

pub fn execute(args: &Args) -> Outcome {
    let start = Instant::now();
    let cfg = SampleConfig::new(args.samples, args.seed);
    let outcome = (|| -> Result<(Option<ParsedSpace>, Body)> {
        if args.command == Command::Catalog {
            return Ok((None, catalog_body()));
        }
        let parsed = load_space(args)?;
        let body = match args.command {
            Command::Solve => solve_body(&parsed, &cfg)?,
            Command::Verdict => verdict_body(&parsed, &cfg)?,
            Command::Verify => verify_body(&parsed, &cfg)?,
            Command::Describe => describe_body(&parsed)?,
            Command::Catalog => unreachable!(),
        };
        Ok((Some(parsed), body))
    })();

    match outcome {
        Ok((parsed, body)) => {
            let report = RunReport {
                schema_version: SCHEMA_VERSION,
                command: args.command.name().to_string(),
                space: parsed.as_ref().map(|p| p.name().to_string()),
                seed: args.seed,
                samples: args.samples,
                parameters: parsed
                    .as_ref()
                    .map(|p| {
                        p.params
                            .iter()
                            .map(|(k, v)| (k.clone(), v.to_string()))
                            .collect()
                    })
                    .unwrap_or_default(),
                result: body.result,
                pass: body.pass,
                timing_ms: start.elapsed().as_millis(),
            };
            let stdout = if args.json {
                serde_json::to_string_pretty(&report).unwrap_or_default() + "\n"
            } else {
                human(&report, &body.text)
            };
            Outcome {
                stdout,
                stderr: String::new(),
                code: report.exit_code(),
            }
        }
        Err(e) => {
            let code = exit_code_for(&e);
            let kind = error_kind(&e);
            let message = e.to_string();
            if args.json {
                let v = error_json(args.command.name(), args.seed, kind, &message);
                Outcome {
                    stdout: serde_json::to_string_pretty(&v).unwrap_or_default() + "\n",
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: format!("error ({kind}): {message}\nseed: {}\n", args.seed),
                    code,
                }
            }
        }
    }
}

fn human(report: &RunReport, text: &str) -> String {
    let mut out = String::new();
    let _ = write!(out, "{}", report.command);
    if let Some(s) = &report.space {
        let _ = write!(out, "  space={s}");
    }
    let _ = writeln!(out, "  seed={}  samples={}", report.seed, report.samples);
    if !report.parameters.is_empty() {
        let ps: Vec<String> = report
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(out, "parameters: {}", ps.join(", "));
    }
    out.push_str(text);
    if !text.ends_with('\n') {
        out.push('\n');
    }
    let _ = writeln!(out, "status: {}", if report.pass { "pass" } else { "fail" });
    out
}

struct Body {
    result: Value,
    text: String,
    pass: bool,
}

fn load_space(args: &Args) -> Result<ParsedSpace> {
    let overrides = args
        .params
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>>>()?;
    match (&args.space, &args.file) {
        (Some(name), _) => catalog::load(name, &overrides),
        (None, Some(path)) => ParsedSpace::load(path, &overrides).map_err(|e| match e {
            Error::Io(io) => Error::parse("--file", format!("{}: {io}", path.display())),
            other => other,
        }),
        (None, None) => Err(Error::parse(
            "--space",
            "a space is required (--space <name> or --file <path>)",
        )),
    }
}

fn catalog_body() -> Body {
    let mut text = String::new();
    let mut list = Vec::new();
    for e in catalog::entries() {
        let desc = ParsedSpace::parse_str(e.source, &[])
            .map(|p| p.file.description.clone())
            .unwrap_or_default();
        let _ = writeln!(text, "{:<16} {desc}", e.name);
        list.push(json!({ "name": e.name, "description": desc }));
    }
    Body {
        result: json!({ "spaces": list }),
        text,
        pass: true,
    }
}

/// Text form of the selected graph.
fn describe_graph(g: &GeodesicGraph) -> Result<Vec<String>> {
    let h = g.space().h_labels();
    Ok(match g.provenance() {
        Provenance::Theorem1 => {
            let sym = g
                .symbolic()
                .ok_or_else(|| Error::SelfCheck("missing symbolic graph".into()))?;
            let names: Vec<String> = (1..=sym.ctx().len()).map(|i| format!("C{i}")).collect();
            let ctx = VarContext::params_only(&names);
            let subs: Vec<MPoly> = (0..names.len()).map(|i| MPoly::var(&ctx, i)).collect();
            let mut lines = sym.specialize(&subs)?.render(&h)?;
            lines.push("C_i(y) = sum_j B_j(y) c_j^i,  B_j = L,_j / (2 F_j)".to_string());
            lines
        }
        Provenance::Prop13 { w } => vec![format!(
            "xi(y) = F_1(y) * L,_b(y) / L,_1(y) * ({})",
            crate::algebra::render_combination(&w, &h)
        )],
        Provenance::Linear { .. } => {
            let k = g.linear_coefficients().unwrap_or_default();
            let y: Vec<String> = (1..=g.space().dim_m()).map(|i| format!("y{i}")).collect();
            k.iter()
                .enumerate()
                .map(|(j, row)| {
                    let terms: Vec<String> = row
                        .iter()
                        .zip(&y)
                        .filter(|(c, _)| !num_traits::Zero::is_zero(*c))
                        .map(|(c, v)| format!("{c} * {v}"))
                        .collect();
                    let rhs = if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ")
                    };
                    format!("xi[{}] = {rhs}", h[j])
                })
                .collect()
        }
        Provenance::Pointwise => {
            vec!["xi(y) solved numerically at each y (minimum-norm least squares)".to_string()]
        }
        Provenance::Custom(name) => vec![format!("custom graph \"{name}\"")],
    })
}

fn solve_body(p: &ParsedSpace, cfg: &SampleConfig) -> Result<Body> {
    let space = &p.space;
    let h = space.h_labels();
    let mut text = String::new();
    let mut result = serde_json::Map::new();

    match solve_linear_graph_symbolic(space, p.norm.block_forms())? {
        SymbolicSolve::Linear(sym) => {
            let generic = sym.render(&h)?;
            let _ = writeln!(
                text,
                "linear graph of the block metrics (parameters {}):",
                generic_param_names(sym.ctx().len()).join(", ")
            );
            for l in &generic {
                let _ = writeln!(text, "  {l}");
            }
            let (_, tuples) = p.metric_polys()?;
            let mut specialized = Vec::new();
            for (j, t) in tuples.iter().enumerate() {
                let lines = sym.specialize(t)?.render(&h)?;
                let _ = writeln!(text, "metric {}:", j + 1);
                for l in &lines {
                    let _ = writeln!(text, "  {l}");
                }
                specialized.push(lines);
            }
            result.insert(
                "symbolic".into(),
                json!({ "generic": generic, "metrics": specialized }),
            );
        }
        SymbolicSolve::Inconsistent { equations } => {
            let _ = writeln!(text, "no linear graph for generic block metrics");
            result.insert(
                "symbolic".into(),
                json!({ "inconsistent_equations": equations }),
            );
        }
    }

    let sel = select_graph(space.clone(), p.norm.clone(), cfg)?;
    let lines = describe_graph(&sel.graph)?;
    let tag = sel.graph.provenance().tag();
    let split = sel.graph.space().m_labels();
    let _ = writeln!(
        text,
        "graph of the norm ({tag}), m = span{{{}}}:",
        split.join(", ")
    );
    for l in &lines {
        let _ = writeln!(text, "  {l}");
    }
    for e in &sel.evidence {
        let _ = writeln!(text, "  {}", e.summary());
    }
    let geo = geodesic_residual(&sel.graph, cfg)?;
    let _ = writeln!(text, "{}", residual_line(&geo));
    result.insert(
        "graph".into(),
        json!({ "kind": tag, "split": split, "formula": lines, "evidence": sel.evidence, "geodesic_residual": geo }),
    );
    Ok(Body {
        result: Value::Object(result),
        text,
        pass: geo.pass,
    })
}

fn verdict_body(p: &ParsedSpace, cfg: &SampleConfig) -> Result<Body> {
    let opts = VerdictOptions {
        cfg: *cfg,
        maximal_isometry_group: p.maximal_isometry_group(),
    };
    let v = reductivity_verdict(p.space.clone(), p.norm.clone(), &opts)?;
    let mut text = String::new();
    let _ = writeln!(text, "verdict: {}", v.verdict.as_str());
    let _ = writeln!(text, "graph: {}", v.graph);
    let _ = writeln!(text, "m = span{{{}}}", v.split.join(", "));
    if let Some(k) = &v.linear_graph {
        let h = p.space.h_labels();
        for (j, row) in k.iter().enumerate() {
            let _ = writeln!(text, "k[{}] = [{}]", h[j], row.join(", "));
        }
    }
    for e in &v.evidence {
        let _ = writeln!(text, "  {}", e.summary());
    }
    Ok(Body {
        pass: v.verdict == Verdict::NaturallyReductive,
        result: serde_json::to_value(&v)?,
        text,
    })
}

fn residual_line(r: &ResidualReport) -> String {
    format!(
        "  {:<22} {:<4} max {:.3e} (threshold {:.0e}, {} samples)",
        r.check,
        if r.pass { "pass" } else { "fail" },
        r.max_residual,
        r.threshold,
        r.samples
    )
}

fn verify_body(p: &ParsedSpace, cfg: &SampleConfig) -> Result<Body> {
    let mut text = String::new();
    let mut pass = true;

    let adm = admissibility_sample(&p.norm, cfg.samples, cfg.seed);
    pass &= adm.pass();
    let _ = writeln!(
        text,
        "  {:<22} {:<4} {} violations ({} samples)",
        "admissibility",
        if adm.pass() { "pass" } else { "fail" },
        adm.violations.len(),
        adm.samples
    );
    let fund = fundamental_tensor_residual(&p.norm, cfg)?;
    pass &= fund.pass;
    let _ = writeln!(text, "{}", residual_line(&fund));

    let sel = select_graph(p.space.clone(), p.norm.clone(), cfg)?;
    let tag = sel.graph.provenance().tag();
    let _ = writeln!(text, "graph {tag}:");
    let battery = graph_battery(&sel.graph, cfg)?;
    for r in &battery {
        pass &= r.pass;
        let _ = writeln!(text, "{}", residual_line(r));
    }

    let mut json_pw = Value::Null;
    let mut json_agree = Value::Null;
    if !matches!(sel.graph.provenance(), Provenance::Pointwise) {
        let pw = GeodesicGraph::pointwise(sel.graph.space().clone(), p.norm.clone());
        let _ = writeln!(text, "graph pointwise:");
        let pw_battery = graph_battery(&pw, cfg)?;
        for r in &pw_battery {
            pass &= r.pass;
            let _ = writeln!(text, "{}", residual_line(r));
        }
        let agree = compare_graphs(&sel.graph, &pw, cfg, AGREEMENT_THRESHOLD)?;
        pass &= agree.pass;
        let _ = writeln!(text, "{}", residual_line(&agree));
        json_pw = serde_json::to_value(&pw_battery)?;
        json_agree = serde_json::to_value(&agree)?;
    }

    Ok(Body {
        result: json!({
            "admissibility": adm,
            "fundamental_tensor": fund,
            "graph": { "kind": tag, "checks": battery },
            "pointwise": json_pw,
            "agreement": json_agree,
        }),
        text,
        pass,
    })
}

fn describe_body(p: &ParsedSpace) -> Result<Body> {
    let spec = p.space.spec();
    let labels = spec.labels();
    let mut brackets = Vec::new();
    for (a, b, terms) in spec.entries() {
        let rhs = crate::algebra::render_combination(
            &{
                let mut v = vec![crate::exactnum::rat(0); labels.len()];
                for (k, c) in terms {
                    v[*k] = c.clone();
                }
                v
            },
            labels,
        );
        brackets.push(format!("[{}, {}] = {rhs}", labels[a], labels[b]));
    }
    let m = p.space.m_labels();
    let blocks: Vec<Vec<String>> = p
        .space
        .msplit()
        .blocks()
        .iter()
        .map(|b| b.iter().map(|i| m[*i].clone()).collect())
        .collect();
    let family = p.norm.family().name();
    let (k, l) = (p.norm.k(), p.norm.l());

    let mut text = String::new();
    if !p.file.description.is_empty() {
        let _ = writeln!(text, "{}", p.file.description);
    }
    let _ = writeln!(text, "basis: {}", labels.join(", "));
    for b in &brackets {
        let _ = writeln!(text, "  {b}");
    }
    let _ = writeln!(text, "h = span{{{}}}", p.space.h_labels().join(", "));
    let _ = writeln!(text, "m = span{{{}}}", m.join(", "));
    let bl: Vec<String> = blocks
        .iter()
        .map(|b| format!("{{{}}}", b.join(", ")))
        .collect();
    let _ = writeln!(text, "blocks: {}", bl.join(" + "));
    let _ = writeln!(text, "norm: {family} (k = {k} metrics, l = {l} one-forms)");
    if let Some(f) = p.maximal_isometry_group() {
        let _ = writeln!(
            text,
            "flag maximal_isometry_group = {f} (asserted, not checked)"
        );
    }
    let file = serde_json::to_value(&p.file)?;
    let params: BTreeMap<_, _> = p
        .params
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect();
    Ok(Body {
        result: json!({
            "basis": labels,
            "brackets": brackets,
            "h": p.space.h_labels(),
            "m": m,
            "blocks": blocks,
            "norm": { "family": family, "k": k, "l": l },
            "parameters": params,
            "flags": p.file.flags,
            "space_file": file,
        }),
        text,
        pass: true,
    })
}
