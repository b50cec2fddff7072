use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::graph::{GeodesicGraph, Provenance};
use super::natred::{
    beta_vanishing_check, finsler_graph_thm1, latifi_residual, natred_f1, prop13_graph,
};
use super::pointwise::pointwise_graph;
use super::symbolic::{solve_linear_graph_symbolic, SymbolicSolve};
use crate::algebra::HomogeneousSpace;
use crate::error::{Error, Result};
use crate::exactnum::{rationalize, Rat};
use crate::metrics::NormSpec;
use crate::verify::sampling::{sphere_points, SampleConfig};
use crate::verify::{compare_graphs, geodesic_residual, linearity_probe, LinearityReport};

const MAX_DEN: i64 = 10_000;
const PROP14_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NaturallyReductive,
    GoNotNaturallyReductive,
    NotGoDetected,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NaturallyReductive => "naturally_reductive",
            Verdict::GoNotNaturallyReductive => "go_not_naturally_reductive",
            Verdict::NotGoDetected => "not_go_detected",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One named test with its outcome (`None` for purely informational
/// entries) and a JSON payload holding the witness or residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub test: String,
    pub pass: Option<bool>,
    pub detail: Value,
}

impl Evidence {
    fn new(test: &str, pass: Option<bool>, detail: impl Serialize) -> Self {
        Evidence {
            test: test.to_string(),
            pass,
            detail: serde_json::to_value(detail).unwrap_or(Value::Null),
        }
    }

    pub fn summary(&self) -> String {
        let status = match self.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "info",
        };
        format!("{:<22} {:<4} {}", self.test, status, self.detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductivityVerdict {
    pub verdict: Verdict,
    /// How the graph under test was produced.
    pub graph: String,
    /// Labels of the m basis in which the decisive checks ran.
    pub split: Vec<String>,
    /// Exact linear graph `k[j][r]` when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_graph: Option<Vec<Vec<String>>>,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, Default)]
pub struct VerdictOptions {
    pub cfg: SampleConfig,
    /// Asserted by the user; reported, never checked.
    pub maximal_isometry_group: Option<bool>,
}

/// The graph the verdict is built on, with the evidence gathered while
/// choosing it.
pub struct GraphSelection {
    pub graph: GeodesicGraph,
    pub evidence: Vec<Evidence>,
}

/// Picks the most explicit geodesic graph available: the substituted linear
/// graph when no one-form enters the geodesic lemma, the central-shift closed
/// form for one metric and one one-form, and the pointwise solve otherwise.
pub fn select_graph(
    space: Arc<HomogeneousSpace>,
    norm: Arc<NormSpec>,
    cfg: &SampleConfig,
) -> Result<GraphSelection> {
    let mut evidence = Vec::new();
    let sym = match solve_linear_graph_symbolic(&space, norm.block_forms())? {
        SymbolicSolve::Linear(s) => {
            evidence.push(Evidence::new(
                "symbolic_solve",
                Some(true),
                json!({ "graph": s.render(&space.h_labels())?, "unique": s.is_unique() }),
            ));
            Some(s)
        }
        SymbolicSolve::Inconsistent { equations } => {
            evidence.push(Evidence::new(
                "symbolic_solve",
                Some(false),
                json!({ "inconsistent_equations": equations }),
            ));
            None
        }
    };

    let mut all_vanish = true;
    for (m, form) in norm.oneforms().iter().enumerate() {
        let report = beta_vanishing_check(&space, form)?;
        all_vanish &= report.pass;
        evidence.push(Evidence::new(
            &format!("beta_vanishing[{m}]"),
            Some(report.pass),
            &report,
        ));
    }

    if let (Some(s), true) = (&sym, all_vanish) {
        match finsler_graph_thm1(space.clone(), norm.clone(), s, cfg) {
            Ok(g) => return Ok(GraphSelection { graph: g, evidence }),
            Err(Error::DenominatorVanishes { witness }) => {
                evidence.push(Evidence::new(
                    "denominators",
                    Some(false),
                    json!({ "witness": witness }),
                ));
            }
            Err(e) => return Err(e),
        }
    }

    if let (Some(s), 1, 1) = (&sym, norm.k(), norm.l()) {
        let attempt = s
            .at_rat(&norm.metric_params()[0].c)
            .and_then(|k| space.shift(&k))
            .and_then(|shifted| prop13_graph(Arc::new(shifted), norm.clone()));
        match attempt {
            Ok(g) => {
                if let Provenance::Prop13 { w } = g.provenance() {
                    let w_label = crate::algebra::render_combination(&w, &g.space().h_labels());
                    evidence.push(Evidence::new(
                        "central_shift",
                        Some(true),
                        json!({ "w": w_label }),
                    ));
                }
                return Ok(GraphSelection { graph: g, evidence });
            }
            Err(e) => evidence.push(Evidence::new(
                "central_shift",
                Some(false),
                json!({ "reason": e.to_string() }),
            )),
        }
    }

    Ok(GraphSelection {
        graph: GeodesicGraph::pointwise(space, norm),
        evidence,
    })
}

fn rat_strings(k: &[Vec<Rat>]) -> Vec<Vec<String>> {
    k.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Decides natural reductivity. A linear graph plus an exact certificate in
/// the shifted split gives `naturally_reductive`; a nonlinear graph that is
/// uniquely determined at generic points and solvable at all samples gives
/// `go_not_naturally_reductive`; a sample with no geodesic vector gives
/// `not_go_detected`. Anything else is `inconclusive`.
pub fn reductivity_verdict(
    space: Arc<HomogeneousSpace>,
    norm: Arc<NormSpec>,
    opts: &VerdictOptions,
) -> Result<ReductivityVerdict> {
    let cfg = &opts.cfg;
    let GraphSelection {
        graph,
        mut evidence,
    } = select_graph(space.clone(), norm.clone(), cfg)?;
    if let Some(flag) = opts.maximal_isometry_group {
        evidence.push(Evidence::new(
            "maximal_isometry_group",
            None,
            json!({ "asserted": flag, "verified": false }),
        ));
    }
    let provenance = graph.provenance().tag().to_string();
    let gspace = graph.space().clone();

    let probe = match linearity_probe(&graph, cfg) {
        Ok(p) => p,
        Err(Error::Unsolvable { y, residual }) => {
            evidence.push(Evidence::new(
                "pointwise_solvability",
                Some(false),
                json!({ "y": y, "residual": residual }),
            ));
            return Ok(finish(
                Verdict::NotGoDetected,
                provenance,
                &gspace,
                None,
                evidence,
            ));
        }
        Err(e @ Error::RankDeficient { .. }) => {
            evidence.push(Evidence::new(
                "linearity_probe",
                None,
                json!({ "error": e.to_string() }),
            ));
            return Ok(finish(
                Verdict::Inconclusive,
                provenance,
                &gspace,
                None,
                evidence,
            ));
        }
        Err(e) => return Err(e),
    };
    evidence.push(Evidence::new("linearity_probe", Some(probe.linear), &probe));

    if probe.linear {
        linear_branch(graph, &probe, cfg, evidence, provenance)
    } else {
        nonlinear_branch(graph, cfg, evidence, provenance)
    }
}

fn finish(
    verdict: Verdict,
    graph: String,
    space: &HomogeneousSpace,
    linear: Option<&[Vec<Rat>]>,
    evidence: Vec<Evidence>,
) -> ReductivityVerdict {
    ReductivityVerdict {
        verdict,
        graph,
        split: space.m_labels(),
        linear_graph: linear.map(rat_strings),
        evidence,
    }
}

fn linear_branch(
    graph: GeodesicGraph,
    probe: &LinearityReport,
    cfg: &SampleConfig,
    mut evidence: Vec<Evidence>,
    provenance: String,
) -> Result<ReductivityVerdict> {
    let space = graph.space().clone();
    let norm = graph.norm().clone();
    let k: Vec<Vec<Rat>> = probe
        .fit
        .iter()
        .map(|row| row.iter().map(|x| rationalize(*x, MAX_DEN)).collect())
        .collect();
    let fixed = GeodesicGraph::linear(space.clone(), norm.clone(), k.clone(), None)?;
    let geo = geodesic_residual(&fixed, cfg)?;
    let agree = compare_graphs(
        &fixed,
        &graph,
        &SampleConfig::new(cfg.samples.min(200), cfg.seed),
        1e-8,
    );
    let agree_ok = match &agree {
        Ok(r) => r.pass,
        Err(_) => false,
    };
    evidence.push(Evidence::new(
        "rational_linear_graph",
        Some(geo.pass && agree_ok),
        json!({ "k": rat_strings(&k), "geodesic_residual": geo, "agreement": agree.ok() }),
    ));
    if !(geo.pass && agree_ok) {
        return Ok(finish(
            Verdict::Inconclusive,
            provenance,
            &space,
            None,
            evidence,
        ));
    }

    let shifted = match space.shift(&k) {
        Ok(s) => s,
        Err(e) => {
            evidence.push(Evidence::new(
                "shift",
                Some(false),
                json!({ "error": e.to_string() }),
            ));
            return Ok(finish(
                Verdict::Inconclusive,
                provenance,
                &space,
                Some(&k),
                evidence,
            ));
        }
    };
    let certified = certificate(&shifted, &norm, &mut evidence)?;

    let latifi = latifi_residual(&shifted, &norm, cfg)?;
    evidence.push(Evidence::new("latifi_residual", Some(latifi.pass), &latifi));

    prop14_evidence(&space, &norm, cfg, &mut evidence)?;

    let verdict = if certified {
        Verdict::NaturallyReductive
    } else {
        Verdict::Inconclusive
    };
    Ok(finish(verdict, provenance, &shifted, Some(&k), evidence))
}

/// Exact check that every vector of the shifted m is a geodesic vector: the
/// identity holds for the total quadratic form when the norm is Riemannian,
/// otherwise for each component metric, with every one-form killing `[m, m]_m`.
fn certificate(
    shifted: &HomogeneousSpace,
    norm: &NormSpec,
    evidence: &mut Vec<Evidence>,
) -> Result<bool> {
    if let Some(q) = norm.quadratic_form() {
        let r = natred_f1(shifted, &q)?;
        evidence.push(Evidence::new("natred_f1", Some(r.pass), &r));
        return Ok(r.pass);
    }
    let mut ok = true;
    for j in 0..norm.k() {
        let r = natred_f1(shifted, norm.gram(j))?;
        ok &= r.pass;
        evidence.push(Evidence::new(
            &format!("natred_f1[g{}]", j + 1),
            Some(r.pass),
            &r,
        ));
    }
    let n = shifted.dim_m();
    let labels = shifted.m_labels();
    for (m, form) in norm.oneforms().iter().enumerate() {
        let mut witness = None;
        'outer: for x in 0..n {
            for u in 0..n {
                let v = form.apply(&shifted.bracket_basis_m(shifted.split().m_indices()[x], u));
                if !v.is_zero() {
                    witness =
                        Some(json!({ "x": labels[x], "u": labels[u], "value": v.to_string() }));
                    break 'outer;
                }
            }
        }
        ok &= witness.is_none();
        evidence.push(Evidence::new(
            &format!("beta_on_brackets[{m}]"),
            Some(witness.is_none()),
            json!({ "witness": witness }),
        ));
    }
    Ok(ok)
}

/// Graphs with and without the one-forms that never enter the geodesic lemma.
fn prop14_evidence(
    space: &Arc<HomogeneousSpace>,
    norm: &Arc<NormSpec>,
    cfg: &SampleConfig,
    evidence: &mut Vec<Evidence>,
) -> Result<()> {
    if norm.l() == 0 {
        return Ok(());
    }
    let keep: Vec<bool> = norm
        .oneforms()
        .iter()
        .map(|f| beta_vanishing_check(space, f).map(|r| !r.pass))
        .collect::<Result<_>>()?;
    if keep.iter().all(|k| *k) {
        return Ok(());
    }
    let reduced = Arc::new(norm.with_forms_filtered(&keep)?);
    let a = GeodesicGraph::pointwise(space.clone(), norm.clone());
    let b = GeodesicGraph::pointwise(space.clone(), reduced);
    let report = compare_graphs(&a, &b, cfg, PROP14_THRESHOLD)?;
    evidence.push(Evidence::new(
        "compare_graphs(F_beta, F_0)",
        Some(report.pass),
        &report,
    ));
    Ok(())
}

fn nonlinear_branch(
    graph: GeodesicGraph,
    cfg: &SampleConfig,
    mut evidence: Vec<Evidence>,
    provenance: String,
) -> Result<ReductivityVerdict> {
    let space = graph.space().clone();
    let norm = graph.norm().clone();
    let points = sphere_points(space.dim_m(), cfg);
    let solves: Vec<_> = points
        .par_iter()
        .map(|p| (p, pointwise_graph(&space, &norm, &p.y)))
        .collect();
    let mut max_residual: f64 = 0.0;
    let mut deficient = None;
    for (p, s) in &solves {
        match s {
            Ok(sol) => {
                max_residual = max_residual.max(sol.residual);
                if !p.structured && sol.rank < space.dim_h() && deficient.is_none() {
                    deficient = Some((p.y.clone(), sol.rank));
                }
            }
            Err(Error::Unsolvable { y, residual }) => {
                evidence.push(Evidence::new(
                    "pointwise_solvability",
                    Some(false),
                    json!({ "y": y, "residual": residual }),
                ));
                return Ok(finish(
                    Verdict::NotGoDetected,
                    provenance,
                    &space,
                    None,
                    evidence,
                ));
            }
            Err(e) => return Err(Error::SelfCheck(e.to_string())),
        }
    }
    evidence.push(Evidence::new(
        "pointwise_solvability",
        Some(true),
        json!({ "samples": solves.len(), "seed": cfg.seed, "max_residual": max_residual }),
    ));
    let latifi = latifi_residual(&space, &norm, cfg)?;
    evidence.push(Evidence::new("latifi_residual", None, &latifi));
    if let Some((y, rank)) = deficient {
        evidence.push(Evidence::new(
            "graph_uniqueness",
            Some(false),
            json!({ "y": y, "rank": rank, "needed": space.dim_h() }),
        ));
        return Ok(finish(
            Verdict::Inconclusive,
            provenance,
            &space,
            None,
            evidence,
        ));
    }
    evidence.push(Evidence::new(
        "graph_uniqueness",
        Some(true),
        json!({ "generic_rank": space.dim_h() }),
    ));
    Ok(finish(
        Verdict::GoNotNaturallyReductive,
        provenance,
        &space,
        None,
        evidence,
    ))
}
