use std::sync::Arc;

use super::*;
use crate::exactnum::rat;
use crate::graphs::{finsler_graph_thm1, solve_linear_graph_symbolic, SymbolicSolve};
use crate::metrics::BlockForms;
use crate::testutil::{h3, h3xr, qpower, riemannian};

fn cfg() -> SampleConfig {
    SampleConfig::new(200, 0)
}

fn h3_linear(c: i64) -> GeodesicGraph {
    let s = Arc::new(h3());
    let n = Arc::new(riemannian(&s, &[1, c]));
    GeodesicGraph::linear(s, n, vec![vec![rat(0), rat(0), rat(c)]], None).unwrap()
}

fn h3_thm1() -> GeodesicGraph {
    let s = Arc::new(h3());
    let n = Arc::new(qpower(&s, 3, &[&[1, 1], &[1, 4]]));
    let sym = match solve_linear_graph_symbolic(&s, &BlockForms::standard(s.msplit())).unwrap() {
        SymbolicSolve::Linear(l) => l,
        SymbolicSolve::Inconsistent { .. } => unreachable!(),
    };
    finsler_graph_thm1(s, n, &sym, &cfg()).unwrap()
}

fn zeroed(g: &GeodesicGraph) -> GeodesicGraph {
    GeodesicGraph::custom(g.space().clone(), g.norm().clone(), "zero", |_| {
        Ok(vec![0.0])
    })
}

#[test]
fn geodesic_residual_examples() {
    let r = geodesic_residual(&h3_linear(3), &cfg()).unwrap();
    assert!(r.max_residual <= 1e-12 && r.pass);
    assert_eq!((r.samples, r.seed), (200, 0));

    let t = h3_thm1();
    assert!(geodesic_residual(&t, &cfg()).unwrap().pass);

    let r = geodesic_residual(&zeroed(&t), &cfg()).unwrap();
    assert!(r.max_residual >= 1e-2 && !r.pass);
    let w = r.witness.unwrap();
    assert!(w.y[2].abs() > 0.0);
}

#[test]
fn witness_reproduces_residual() {
    let g = zeroed(&h3_thm1());
    let r = geodesic_residual(&g, &cfg()).unwrap();
    let w = r.witness.unwrap();
    let u = w.aux.iter().find(|(k, _)| k == "u").unwrap().1[0] as usize;
    let v = g.space().geodesic_bracket(&w.y, &[0.0], u);
    let ny2: f64 = w.y.iter().map(|x| x * x).sum();
    let again = g.norm().gy_pair(&w.y, &v).unwrap().abs() / (1.0 + ny2);
    assert_eq!(again, r.max_residual);
}

#[test]
fn reports_are_reproducible() {
    let t = h3_thm1();
    assert_eq!(
        geodesic_residual(&t, &cfg()).unwrap(),
        geodesic_residual(&t, &cfg()).unwrap()
    );
    assert_eq!(
        equivariance_residual(&t, &cfg()).unwrap(),
        equivariance_residual(&t, &cfg()).unwrap()
    );
}

#[test]
fn linearity_probe_examples() {
    let p = linearity_probe(&h3_linear(3), &cfg()).unwrap();
    assert!(p.linear && p.deviation <= 1e-12);
    assert!((p.fit[0][2] - 3.0).abs() < 1e-12);
    assert!(p.fit[0][0].abs() < 1e-12 && p.fit[0][1].abs() < 1e-12);

    let p = linearity_probe(&h3_thm1(), &cfg()).unwrap();
    assert!(!p.linear && p.deviation > 1e-3);

    let p = linearity_probe(&zeroed(&h3_thm1()), &cfg()).unwrap();
    assert_eq!(p.deviation, 0.0);
    assert!(p.fit[0].iter().all(|x| *x == 0.0));
}

#[test]
fn linearity_probe_rejects_undetermined_samples() {
    use crate::algebra::{HomogeneousSpace, LieAlgebraSpec, ModuleSplit, ReductiveSplit};
    // h acts trivially, so no sample determines the pointwise graph.
    let spec = LieAlgebraSpec::new(vec!["A".into(), "B".into(), "H".into()], vec![]).unwrap();
    let s = HomogeneousSpace::new(
        spec,
        ReductiveSplit::new(vec![2], vec![0, 1], None).unwrap(),
        ModuleSplit::single(2),
    )
    .unwrap();
    let n = riemannian(&s, &[1]);
    let g = GeodesicGraph::pointwise(Arc::new(s), Arc::new(n));
    assert!(matches!(
        linearity_probe(&g, &cfg()),
        Err(crate::Error::RankDeficient { rank: 0, needed: 2 })
    ));
}

#[test]
fn equivariance_examples() {
    assert!(
        equivariance_residual(&h3_thm1(), &cfg())
            .unwrap()
            .max_residual
            <= 1e-8
    );

    let g = h3_thm1();
    let inner = g.clone();
    let perturbed =
        GeodesicGraph::custom(g.space().clone(), g.norm().clone(), "perturbed", move |y| {
            let mut xi = inner.eval(y)?;
            xi[0] += y[0];
            Ok(xi)
        });
    assert!(
        equivariance_residual(&perturbed, &cfg())
            .unwrap()
            .max_residual
            > 1e-3
    );
}

#[test]
fn equivariance_at_identity_is_exact() {
    let g = h3_thm1();
    let s = g.space();
    let y = [0.3, -0.4, 0.5];
    let am = s.exp_ad(&[1.0], 0.0, Subspace::M);
    let moved: Vec<f64> = (&am * DVector::from_column_slice(&y)).as_slice().to_vec();
    assert_eq!(g.eval(&moved).unwrap(), g.eval(&y).unwrap());
}

#[test]
fn homogeneity_of_graphs() {
    for g in [h3_linear(2), h3_thm1()] {
        let r = homogeneity_residual(&g, &cfg()).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let s = Arc::new(h3());
    let n = Arc::new(qpower(&s, 3, &[&[1, 1], &[1, 4]]));
    let pw = GeodesicGraph::pointwise(s, n);
    assert!(homogeneity_residual(&pw, &cfg()).unwrap().pass);
}

#[test]
fn compare_graph_examples() {
    let t = h3_thm1();
    let r = compare_graphs(&t, &t, &cfg(), 1e-12).unwrap();
    assert_eq!(r.max_residual, 0.0);

    let other =
        GeodesicGraph::pointwise(Arc::new(h3xr()), Arc::new(riemannian(&h3xr(), &[1, 1, 1])));
    assert!(matches!(
        compare_graphs(&t, &other, &cfg(), 1e-12),
        Err(crate::Error::SplitMismatch)
    ));
}

#[test]
fn fundamental_tensor_oracle() {
    let s = h3();
    for n in [riemannian(&s, &[1, 2]), qpower(&s, 3, &[&[1, 1], &[1, 4]])] {
        let r = fundamental_tensor_residual(&n, &SampleConfig::new(100, 0)).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn report_serializes() {
    let r = geodesic_residual(&h3_linear(1), &SampleConfig::new(20, 5)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["check"], "geodesic_residual");
    assert_eq!(v["seed"], 5);
    let back: ResidualReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}
