//! End-to-end acceptance checks on the built-in catalog. Each criterion is
//! its own test so that `cargo test` prints one pass/fail line per criterion;
//! the measured values are printed as well (visible with `--nocapture`).

use std::time::{Duration, Instant};

use geograph::catalog;
use geograph::exactnum::{rat, MPoly, RatFunc, VarContext};
use geograph::graphs::{
    latifi_residual, reductivity_verdict, select_graph, solve_linear_graph_symbolic, GeodesicGraph,
    Provenance, ReductivityVerdict, SymbolicSolve, Verdict, VerdictOptions,
};
use geograph::spacefile::ParsedSpace;
use geograph::verify::sampling::{sphere_points, SampleConfig};
use geograph::verify::{
    compare_graphs, equivariance_residual, fundamental_tensor_residual, geodesic_residual,
    homogeneity_residual, linearity_probe,
};

fn report(n: u32, title: &str, ok: bool, detail: &str) {
    println!(
        "criterion {n} [{}] {title}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

fn load(name: &str) -> ParsedSpace {
    catalog::load(name, &[]).unwrap()
}

fn all_spaces() -> Vec<ParsedSpace> {
    catalog::names().into_iter().map(load).collect()
}

/// The selected graph of every catalog space plus its pointwise counterpart
/// in the same split.
fn all_graphs() -> Vec<(String, GeodesicGraph)> {
    let mut out = Vec::new();
    for p in all_spaces() {
        let sel = select_graph(p.space.clone(), p.norm.clone(), &SampleConfig::default()).unwrap();
        let pw = GeodesicGraph::pointwise(sel.graph.space().clone(), p.norm.clone());
        out.push((
            format!("{}/{}", p.name(), sel.graph.provenance().tag()),
            sel.graph,
        ));
        if !matches!(out.last().unwrap().1.provenance(), Provenance::Pointwise) {
            out.push((format!("{}/pointwise", p.name()), pw));
        }
    }
    out
}

fn verdict(name: &str) -> ReductivityVerdict {
    let p = load(name);
    let opts = VerdictOptions {
        cfg: SampleConfig::default(),
        maximal_isometry_group: p.maximal_isometry_group(),
    };
    reductivity_verdict(p.space.clone(), p.norm.clone(), &opts).unwrap()
}

fn evidence<'a>(v: &'a ReductivityVerdict, test: &str) -> Option<&'a geograph::graphs::Evidence> {
    v.evidence.iter().find(|e| e.test == test)
}

#[test]
fn criterion_1_heisenberg_riemannian_graph() {
    let start = Instant::now();
    let p = load("h3");
    let sym = match solve_linear_graph_symbolic(&p.space, p.norm.block_forms()).unwrap() {
        SymbolicSolve::Linear(s) => s,
        SymbolicSolve::Inconsistent { .. } => panic!("no linear graph"),
    };
    let (ctx, tuples) = p.metric_polys().unwrap();
    let spec = sym.specialize(&tuples[0]).unwrap();
    let elapsed = start.elapsed();
    let c = RatFunc::var(&ctx, ctx.index_of("c").unwrap());
    let row = &spec.coefficients[0];
    let exact = row[0].is_zero() && row[1].is_zero() && row[2] == c && sym.is_unique();
    let lines = spec.render(&p.space.h_labels()).unwrap();
    let ok = exact && lines == ["xi[D] = c * y3"] && elapsed < Duration::from_millis(100);
    report(
        1,
        "symbolic graph on h3",
        ok,
        &format!("{:?} in {elapsed:?}", lines),
    );
}

#[test]
fn criterion_2_heisenberg_finsler_closed_form() {
    let start = Instant::now();
    let p = load("h3-qpower");
    let sel = select_graph(p.space.clone(), p.norm.clone(), &SampleConfig::new(200, 0)).unwrap();
    assert_eq!(sel.graph.provenance(), Provenance::Theorem1);
    let (c1, c2) = (1.0, 4.0);
    let mut max_err: f64 = 0.0;
    for pt in sphere_points(3, &SampleConfig::new(200, 11)) {
        let y = &pt.y;
        let h = y[0] * y[0] + y[1] * y[1];
        let (f1, f2) = ((h + c1 * y[2] * y[2]).sqrt(), (h + c2 * y[2] * y[2]).sqrt());
        let closed = (c1 * f1 + c2 * f2) / (f1 + f2) * y[2];
        max_err = max_err.max((sel.graph.eval(y).unwrap()[0] - closed).abs());
    }
    let at_e3 = sel.graph.eval(&[0.0, 0.0, 1.0]).unwrap()[0];
    let elapsed = start.elapsed();
    let ok =
        max_err <= 1e-10 && (at_e3 - 3.0).abs() <= 1e-12 && elapsed < Duration::from_millis(500);
    report(
        2,
        "q = 3 graph matches closed form",
        ok,
        &format!("max error {max_err:.2e} over 200 points, xi(E3) = {at_e3}, {elapsed:?}"),
    );
}

#[test]
fn criterion_3_geodesic_residuals() {
    let start = Instant::now();
    let cfg = SampleConfig::new(500, 0);
    let mut worst = (String::new(), 0.0f64);
    let mut ok = true;
    let mut graphs = all_graphs();
    // The fixed Riemannian graph of h3 as well.
    let p = load("h3");
    graphs.push((
        "h3/linear".into(),
        GeodesicGraph::linear(
            p.space.clone(),
            p.norm.clone(),
            vec![vec![rat(0), rat(0), rat(1)]],
            None,
        )
        .unwrap(),
    ));
    for (name, g) in &graphs {
        let r = geodesic_residual(g, &cfg).unwrap();
        let basis_first = sphere_points(g.space().dim_m(), &cfg)
            .iter()
            .take(g.space().dim_m())
            .enumerate()
            .all(|(i, p)| p.structured && p.y[i] == 1.0);
        ok &= r.pass && r.samples == 500 && basis_first;
        if r.max_residual >= worst.1 {
            worst = (name.clone(), r.max_residual);
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    report(
        3,
        "geodesic lemma residuals",
        ok,
        &format!(
            "{} graphs, worst {} = {:.2e}, {elapsed:?}",
            graphs.len(),
            worst.0,
            worst.1
        ),
    );
}

#[test]
fn criterion_4_fundamental_tensor_oracle() {
    let cfg = SampleConfig::new(100, 0);
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for p in all_spaces() {
        let r = fundamental_tensor_residual(&p.norm, &cfg).unwrap();
        ok &= r.pass && r.threshold <= 1e-5;
        worst = worst.max(r.max_residual);
    }
    report(
        4,
        "fundamental tensor vs finite differences",
        ok,
        &format!("worst relative gap {worst:.2e}"),
    );
}

#[test]
fn criterion_5_verdicts() {
    let q = verdict("h3-qpower");
    let probe = evidence(&q, "linearity_probe").unwrap();
    let q_ok = q.verdict == Verdict::GoNotNaturallyReductive
        && probe.pass == Some(false)
        && !probe.detail["witness"].is_null()
        && probe.detail["deviation"].as_f64().unwrap() > 1e-3;

    let f = verdict("h3xh3-fproduct");
    let f1: Vec<_> = f
        .evidence
        .iter()
        .filter(|e| e.test.starts_with("natred_f1"))
        .collect();
    let f_ok = f.verdict == Verdict::NaturallyReductive
        && !f1.is_empty()
        && f1.iter().all(|e| e.pass == Some(true));

    let b = verdict("h3xR-beta");
    let cmp = evidence(&b, "compare_graphs(F_beta, F_0)").unwrap();
    let gap = cmp.detail["max_residual"].as_f64().unwrap();
    let b_ok = b.verdict == Verdict::NaturallyReductive && cmp.pass == Some(true) && gap <= 1e-12;

    report(
        5,
        "verdicts",
        q_ok && f_ok && b_ok,
        &format!(
            "h3-qpower {} (deviation {}), h3xh3-fproduct {} on split [{}], h3xR-beta {} (graph gap {gap:.1e})",
            q.verdict.as_str(),
            probe.detail["deviation"],
            f.verdict.as_str(),
            f.split.join(", "),
            b.verdict.as_str()
        ),
    );
}

#[test]
fn criterion_6_central_shift_pipeline() {
    let p = load("h3-alphabeta");
    let sel = select_graph(p.space.clone(), p.norm.clone(), &SampleConfig::default()).unwrap();
    let w = match sel.graph.provenance() {
        Provenance::Prop13 { w } => w,
        other => panic!("unexpected graph {other:?}"),
    };
    let w_ok = w == vec![rat(1)];
    let pw = GeodesicGraph::pointwise(sel.graph.space().clone(), p.norm.clone());
    let agree = compare_graphs(&sel.graph, &pw, &SampleConfig::new(200, 0), 1e-8).unwrap();
    let probe = linearity_probe(&sel.graph, &SampleConfig::default()).unwrap();
    let ok = w_ok && agree.pass && agree.samples >= 190 && !probe.linear && probe.deviation > 1e-3;
    report(
        6,
        "central shift graph on h3-alphabeta",
        ok,
        &format!(
            "w = {} D, gap to pointwise {:.2e} over {} points, linearity deviation {:.3}",
            w[0], agree.max_residual, agree.samples, probe.deviation
        ),
    );
}

#[test]
fn criterion_7_equivariance_and_homogeneity() {
    let cfg = SampleConfig::new(500, 0);
    let mut ok = true;
    let (mut eq, mut hom) = (0.0f64, 0.0f64);
    let graphs = all_graphs();
    for (name, g) in &graphs {
        let e = equivariance_residual(g, &cfg).unwrap();
        let h = homogeneity_residual(g, &cfg).unwrap();
        if !(e.pass && h.pass) {
            println!(
                "  {name}: equivariance {:.2e}, homogeneity {:.2e}",
                e.max_residual, h.max_residual
            );
        }
        ok &= e.pass && h.pass;
        eq = eq.max(e.max_residual);
        hom = hom.max(h.max_residual);
    }
    report(
        7,
        "equivariance and homogeneity",
        ok,
        &format!(
            "{} graphs, worst equivariance {eq:.2e}, worst homogeneity {hom:.2e}",
            graphs.len()
        ),
    );
}

#[test]
fn criterion_8_advisory_natred_residual() {
    let mut ok = true;
    let mut lines = Vec::new();
    for name in catalog::names() {
        let v = verdict(name);
        if v.verdict != Verdict::NaturallyReductive {
            continue;
        }
        let e = evidence(&v, "latifi_residual").unwrap();
        let r = e.detail["max_residual"].as_f64().unwrap();
        ok &= r <= 1e-4;
        lines.push(format!("{name} {r:.1e}"));
    }
    let p = load("h3-qpower");
    let q = latifi_residual(&p.space, &p.norm, &SampleConfig::default()).unwrap();
    ok &= q.max_residual > 1e-2 && q.witness.is_some();
    report(
        8,
        "advisory residual",
        ok,
        &format!(
            "naturally reductive: [{}]; h3-qpower {:.2e}",
            lines.join(", "),
            q.max_residual
        ),
    );
}

#[test]
fn criterion_9_identical_metrics_degenerate() {
    let p = load("h3");
    let sym = match solve_linear_graph_symbolic(&p.space, p.norm.block_forms()).unwrap() {
        SymbolicSolve::Linear(s) => s,
        SymbolicSolve::Inconsistent { .. } => panic!("no linear graph"),
    };
    // Identical metrics (1, c): C_i = (sum_j B_j) c_j^i with B_1, B_2 free.
    let ctx = VarContext::params_only(&["B1", "B2", "c"]);
    let b = &MPoly::var(&ctx, 0) + &MPoly::var(&ctx, 1);
    let subs = vec![b.clone(), &b * &MPoly::var(&ctx, 2)];
    let k = sym.specialize(&subs).unwrap();
    let identity = k.coefficients[0][2] == RatFunc::var(&ctx, 2)
        && k.coefficients[0][..2].iter().all(|x| x.is_zero());

    // Numerically, through the full pipeline with c1 = c2 = 5/2.
    let c = geograph::exactnum::parse_rat("5/2").unwrap();
    let q = catalog::load(
        "h3-qpower",
        &[("c1".into(), c.clone()), ("c2".into(), c.clone())],
    )
    .unwrap();
    let g = select_graph(q.space.clone(), q.norm.clone(), &SampleConfig::default())
        .unwrap()
        .graph;
    let fixed = GeodesicGraph::linear(
        q.space.clone(),
        q.norm.clone(),
        vec![vec![rat(0), rat(0), c]],
        None,
    )
    .unwrap();
    let gap = compare_graphs(&g, &fixed, &SampleConfig::default(), 1e-12).unwrap();

    report(
        9,
        "identical metrics give the fixed linear graph",
        identity && gap.pass,
        &format!(
            "symbolic identity {identity}, numeric gap {:.1e}",
            gap.max_residual
        ),
    );
}
