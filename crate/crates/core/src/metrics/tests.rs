use super::*;
use crate::algebra::Subspace;
use crate::exactnum::{rat, ratio};
use crate::testutil::{h3, h3xr, params, qpower, randers, riemannian};
use crate::verify::sampling::{random_unit, rng};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn metric_examples() {
    let s = h3();
    let forms = BlockForms::standard(s.msplit());
    let c = ratio(7, 2);
    let p = MetricParams::new(vec![rat(1), c.clone()]).unwrap();
    let e = |i: usize| {
        let mut v = vec![rat(0); 3];
        v[i] = rat(1);
        v
    };
    assert_eq!(eval_metric(&forms, &p, &e(2), &e(2)).unwrap(), c);
    assert_eq!(eval_metric(&forms, &p, &e(0), &e(1)).unwrap(), rat(0));
    assert_eq!(
        eval_metric(&forms, &p, &e(0), &[rat(0), rat(0), rat(0)]).unwrap(),
        rat(0)
    );
    assert!(MetricParams::new(vec![rat(1), rat(0)]).is_err());
}

#[test]
fn block_form_must_be_positive_definite() {
    let m = crate::exactnum::RatMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(1)]])
        .unwrap();
    assert!(BlockForm::new(0, m).is_err());
}

#[test]
fn qpower_partials() {
    let s = h3();
    let n = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let p = n.l_value_and_partials(&[0.0, 0.0, 1.0]).unwrap();
    assert_eq!(p.f, vec![1.0, 2.0]);
    let c9 = 9f64.cbrt();
    assert!(close(p.l, c9 * c9, 1e-14));
    assert!(close(p.metric[0], 2.0 / c9, 1e-14));
    assert!(close(p.metric[1], 8.0 / c9, 1e-14));
    let f = p.l.sqrt();
    let y = [0.3, -0.2, 0.9];
    let p = n.l_value_and_partials(&y).unwrap();
    let f_y = p.l.sqrt();
    for k in 0..2 {
        assert!(close(p.metric[k], 2.0 * p.f[k] * p.f[k] / f_y, 1e-14));
    }
    assert!(f > 0.0);
}

#[test]
fn riemannian_degeneration() {
    let s = h3();
    let n = riemannian(&s, &[1, 3]);
    let y = [0.5, 1.0, -2.0];
    let p = n.l_value_and_partials(&y).unwrap();
    assert!(close(p.l, p.f[0] * p.f[0], 1e-15));
    assert!(close(p.metric[0], 2.0 * p.f[0], 1e-15));
    let (b, _) = n.bc_functions(&y).unwrap();
    assert!(close(b[0], 1.0, 1e-15));
    let v = [1.0, 2.0, 3.0];
    assert!(close(
        n.gy_pair(&y, &v).unwrap(),
        n.metric_pair(0, &y, &v),
        1e-14
    ));
}

#[test]
fn bc_functions_for_q3() {
    let s = h3();
    let n = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let y = [0.4, 0.1, 0.7];
    let (f1, f2) = {
        let p = n.l_value_and_partials(&y).unwrap();
        (p.f[0], p.f[1])
    };
    let f = n.value(&y).unwrap();
    let (_, c) = n.bc_functions(&y).unwrap();
    assert!(close(c[0], (f1 + f2) / f, 1e-14));
    assert!(close(c[1], (f1 + 4.0 * f2) / f, 1e-14));

    let same = qpower(&s, 3, &[&[1, 5], &[1, 5]]);
    let (_, c) = same.bc_functions(&y).unwrap();
    assert!(close(c[1] / c[0], 5.0, 1e-14));
}

#[test]
fn gy_pair_examples() {
    let s = h3();
    let n = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let g = n.gy_pair(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]).unwrap();
    assert!(close(g, 9f64.powf(2.0 / 3.0), 1e-14));
    assert_eq!(n.gy_pair(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), 0.0);
    assert!(matches!(
        n.gy_pair(&[0.0; 3], &[1.0, 0.0, 0.0]),
        Err(Error::ZeroVector)
    ));
}

#[test]
fn fundamental_tensor_of_riemannian_is_gram() {
    let s = h3();
    let n = riemannian(&s, &[2, 3]);
    let m = fundamental_tensor_fd(&n, &[0.3, 0.5, -0.4]).unwrap();
    let g = n.gram(0).to_f64();
    assert!((m - g).amax() < 1e-5);
}

#[test]
fn fundamental_tensor_matches_formula() {
    let s = h3();
    let n = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let y = [1.0, 1.0, 1.0];
    let m = fundamental_tensor_fd(&n, &y).unwrap();
    let mut r = rng(3);
    for _ in 0..50 {
        let v = random_unit(&mut r, 3);
        let fd: f64 = (0..3)
            .map(|i| (0..3).map(|j| y[i] * m[(i, j)] * v[j]).sum::<f64>())
            .sum();
        let scale: f64 = (0..3)
            .map(|i| (0..3).map(|j| (y[i] * m[(i, j)] * v[j]).abs()).sum::<f64>())
            .sum();
        let exact = n.gy_pair(&y, &v).unwrap();
        assert!((fd - exact).abs() <= 1e-5 * scale, "{fd} vs {exact}");
    }
    let m2 = fundamental_tensor_fd(&n, &[2.0, 2.0, 2.0]).unwrap();
    assert!((m2 - m).amax() < 1e-5);
}

#[test]
fn cartan_tensor_properties() {
    let s = h3();
    let riem = riemannian(&s, &[1, 2]);
    let fins = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let mut r = rng(11);
    for _ in 0..10 {
        let y = random_unit(&mut r, 3);
        let u = random_unit(&mut r, 3);
        let v = random_unit(&mut r, 3);
        let w = random_unit(&mut r, 3);
        assert!(cartan_tensor_fd(&riem, &y, &u, &v, &w).unwrap().abs() < 1e-6);
        assert!(cartan_tensor_fd(&fins, &y, &y, &u, &v).unwrap().abs() < 1e-4);
        let c = cartan_tensor_fd(&fins, &y, &u, &v, &w).unwrap();
        for perm in [
            (&u, &w, &v),
            (&v, &u, &w),
            (&v, &w, &u),
            (&w, &u, &v),
            (&w, &v, &u),
        ] {
            let p = cartan_tensor_fd(&fins, &y, perm.0, perm.1, perm.2).unwrap();
            assert!((p - c).abs() < 1e-4);
        }
    }
}

#[test]
fn cartan_tensor_is_nonzero_for_finsler() {
    let s = h3();
    let fins = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
    let y = [0.0, 0.6, 0.8];
    let c = cartan_tensor_fd(
        &fins,
        &y,
        &[0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0],
    )
    .unwrap();
    assert!(c.abs() > 1e-3);
}

#[test]
fn admissibility_examples() {
    let s = h3();
    assert!(admissibility_sample(&qpower(&s, 3, &[&[1, 1], &[1, 4]]), 200, 0).pass());
    assert!(admissibility_sample(&riemannian(&s, &[1, 2]), 200, 0).pass());
    let q1 = qpower(&s, 1, &[&[1, 1], &[1, 4]]);
    let rep = admissibility_sample(&q1, 200, 0);
    assert!(rep.pass());
    assert!(rep.min_eigenvalue.abs() < 1e-12);
    let half = NormSpec::new(
        BlockForms::standard(s.msplit()),
        NormFamily::QPower {
            q: ratio(1, 2),
            metrics: vec![params(&[1, 1]), params(&[1, 4])],
        },
    )
    .unwrap();
    let rep = admissibility_sample(&half, 200, 0);
    assert!(rep.violations.iter().any(|v| v.condition == "ii"));
}

#[test]
fn bridge_examples() {
    let s = h3();
    let forms = BlockForms::standard(s.msplit());
    let c = ratio(5, 3);
    let p = MetricParams::new(vec![rat(1), c.clone()]).unwrap();
    let beta = Dual::Covector(vec![rat(0), rat(0), rat(1)]);
    let v = oneform_vector_bridge(&forms, &p, &beta).unwrap();
    assert_eq!(v, Dual::Vector(vec![rat(0), rat(0), rat(1) / &c]));
    assert_eq!(oneform_vector_bridge(&forms, &p, &v).unwrap(), beta);
    let zero = Dual::Covector(vec![rat(0); 3]);
    assert_eq!(
        oneform_vector_bridge(&forms, &p, &zero).unwrap(),
        Dual::Vector(vec![rat(0); 3])
    );
}

#[test]
fn oneform_invariance_is_checked() {
    let s = h3();
    assert!(OneFormSpec::new(&s, vec![rat(0), rat(0), rat(1)]).is_ok());
    assert!(OneFormSpec::new(&s, vec![rat(1), rat(0), rat(0)]).is_err());
    let r = h3xr();
    assert!(OneFormSpec::new(&r, vec![rat(0), rat(0), rat(1), rat(1)]).is_ok());
}

#[test]
fn randers_form_must_be_short() {
    let s = h3();
    let forms = BlockForms::standard(s.msplit());
    let big = NormSpec::new(
        forms,
        NormFamily::Randers {
            metric: params(&[1, 1]),
            form: OneFormSpec::new(&s, vec![rat(0), rat(0), rat(1)]).unwrap(),
        },
    );
    assert!(matches!(big, Err(Error::InvalidNorm(_))));
    let ok = randers(&s, &[1, 2], vec![rat(0), rat(0), rat(1)]);
    assert_eq!(ok.l(), 1);
    assert!(ok.with_forms_zeroed().quadratic_form().is_some());
}

#[test]
fn norms_are_thread_safe_values() {
    fn check<T: Send + Sync>() {}
    check::<NormSpec>();
}

fn specs() -> Vec<NormSpec> {
    let s = h3();
    let r = h3xr();
    vec![
        riemannian(&s, &[1, 2]),
        qpower(&s, 3, &[&[1, 1], &[1, 4]]),
        randers(&s, &[1, 2], vec![rat(0), rat(0), rat(1)]),
        randers(&r, &[1, 2, 1], vec![rat(0), rat(0), rat(0), ratio(1, 2)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn euler_and_homogeneity(seed in 0u64..10_000, lambda in 0.1f64..10.0) {
        for n in specs() {
            let mut r = rng(seed);
            let y = random_unit(&mut r, n.dim_m());
            let v = random_unit(&mut r, n.dim_m());
            let f2 = n.value_squared(&y).unwrap();
            prop_assert!(close(n.gy_pair(&y, &y).unwrap(), f2, 1e-12));
            let ly: Vec<f64> = y.iter().map(|x| lambda * x).collect();
            prop_assert!(close(n.gy_pair(&ly, &v).unwrap(), lambda * n.gy_pair(&y, &v).unwrap(), 1e-12));
            let (_, c1) = n.bc_functions(&y).unwrap();
            let (_, c2) = n.bc_functions(&ly).unwrap();
            for (a, b) in c1.iter().zip(&c2) {
                prop_assert!(close(*a, *b, 1e-12));
            }
        }
    }

    #[test]
    fn norm_is_ad_h_invariant(seed in 0u64..10_000, w in -2.0f64..2.0, t in -2.0f64..2.0) {
        let s = h3();
        let n = qpower(&s, 3, &[&[1, 1], &[1, 4]]);
        let mut r = rng(seed);
        let y = random_unit(&mut r, 3);
        let a = s.exp_ad(&[w], t, Subspace::M);
        let ay: Vec<f64> = (&a * nalgebra::DVector::from_column_slice(&y)).as_slice().to_vec();
        prop_assert!(close(n.value(&ay).unwrap(), n.value(&y).unwrap(), 1e-9));
    }
}
