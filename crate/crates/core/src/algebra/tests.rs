use super::*;
use crate::exactnum::{rat, ratio};
use proptest::prelude::*;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// H3 extended by the rotation D: [E1,E2]=E3, [D,E1]=E2, [D,E2]=-E1.
fn h3_spec() -> LieAlgebraSpec {
    LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3", "D"]),
        vec![
            (0, 1, vec![(2, rat(1))]),
            (3, 0, vec![(1, rat(1))]),
            (3, 1, vec![(0, rat(-1))]),
        ],
    )
    .unwrap()
}

fn h3_split() -> ReductiveSplit {
    ReductiveSplit::new(vec![3], vec![0, 1, 2], None).unwrap()
}

fn h3_blocks() -> ModuleSplit {
    ModuleSplit::new(vec![vec![0, 1], vec![2]], 3).unwrap()
}

fn h3_space() -> HomogeneousSpace {
    HomogeneousSpace::new(h3_spec(), h3_split(), h3_blocks()).unwrap()
}

fn e(i: usize) -> Vec<Rat> {
    unit(4, i)
}

#[test]
fn heisenberg_brackets() {
    let s = h3_spec();
    assert_eq!(s.bracket(&e(0), &e(1)).unwrap(), e(2));
    assert!(s.bracket(&e(0), &e(0)).unwrap().iter().all(Zero::is_zero));
    assert_eq!(s.bracket(&e(3), &e(0)).unwrap(), e(1));
    assert!(s.bracket(&e(0), &[rat(1)]).is_err());
}

#[test]
fn projections_on_basis_aligned_split() {
    let split = h3_split();
    let z = vec![rat(0), rat(0), rat(1), rat(2)];
    assert_eq!(split.project(&z, Part::M).unwrap(), e(2));
    assert!(split
        .project(&e(3), Part::M)
        .unwrap()
        .iter()
        .all(Zero::is_zero));
}

#[test]
fn projection_in_shifted_split() {
    let c = ratio(5, 2);
    let split = shift_split(&h3_spec(), &h3_split(), &[vec![rat(0), rat(0), c.clone()]]).unwrap();
    let m = split.project(&e(2), Part::M).unwrap();
    assert_eq!(m, vec![rat(0), rat(0), rat(1), c.clone()]);
    let h = split.project(&e(2), Part::H).unwrap();
    assert_eq!(h, vec![rat(0), rat(0), rat(0), -c]);
}

#[test]
fn block_projection() {
    let b = h3_blocks();
    let y = vec![rat(1), rat(2), rat(3)];
    assert_eq!(
        b.block_project(&y, 0).unwrap(),
        vec![rat(1), rat(2), rat(0)]
    );
    assert_eq!(
        b.block_project(&y, 1).unwrap(),
        vec![rat(0), rat(0), rat(3)]
    );
    assert!(b.block_project(&y, 2).is_err());
    let zero = vec![0.0; 3];
    assert_eq!(b.block_project(&zero, 1).unwrap(), zero);
}

#[test]
fn catalog_algebra_is_valid() {
    assert!(validate(&h3_spec(), &h3_split(), &h3_blocks()).is_ok());
    let abelian = LieAlgebraSpec::new(labels(&["A", "B"]), vec![]).unwrap();
    let split = ReductiveSplit::new(vec![], vec![0, 1], None).unwrap();
    assert!(validate(&abelian, &split, &ModuleSplit::single(2)).is_ok());
}

#[test]
fn jacobi_witness() {
    let bad = LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3"]),
        vec![(0, 1, vec![(2, rat(1))]), (0, 2, vec![(0, rat(1))])],
    )
    .unwrap();
    let split = ReductiveSplit::new(vec![], vec![0, 1, 2], None).unwrap();
    let report = validate(&bad, &split, &ModuleSplit::single(3));
    assert!(matches!(
        report.issues[0],
        ValidationIssue::Jacobi {
            triple: [0, 1, 2],
            ..
        }
    ));
    assert!(report.to_string().contains("(E1, E2, E3)"));
}

#[test]
fn block_invariance_witness() {
    // [D, E1] = E3 moves m_1 into m_2.
    let spec = LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3", "D"]),
        vec![(0, 1, vec![(2, rat(1))]), (3, 0, vec![(2, rat(1))])],
    )
    .unwrap();
    let report = validate(&spec, &h3_split(), &h3_blocks());
    assert!(report.issues.iter().any(|i| matches!(
        i,
        ValidationIssue::BlockInvariance {
            h: 3,
            m: 0,
            block: 0
        }
    )));
}

#[test]
fn duplicate_and_diagonal_brackets_rejected() {
    let l = labels(&["A", "B"]);
    assert!(LieAlgebraSpec::new(l.clone(), vec![(0, 0, vec![(1, rat(1))])]).is_err());
    assert!(LieAlgebraSpec::new(
        l.clone(),
        vec![(0, 1, vec![(1, rat(1))]), (1, 0, vec![(1, rat(1))])]
    )
    .is_err());
    assert!(LieAlgebraSpec::new(l, vec![(0, 5, vec![])]).is_err());
}

#[test]
fn exp_ad_rotation_on_m_identity_on_h() {
    let s = h3_space();
    let r = s.exp_ad(&[1.0], std::f64::consts::FRAC_PI_2, Subspace::M);
    let want =
        nalgebra::DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    assert!((r - want).amax() < 1e-13);
    let id3 = nalgebra::DMatrix::<f64>::identity(3, 3);
    assert_eq!(s.exp_ad(&[0.0], 3.0, Subspace::M), id3);
    let hh = s.exp_ad(&[1.0], 0.7, Subspace::H);
    assert_eq!(hh, nalgebra::DMatrix::<f64>::identity(1, 1));
}

#[test]
fn shift_split_along_heisenberg_graph() {
    let c = rat(3);
    let split = shift_split(&h3_spec(), &h3_split(), &[vec![rat(0), rat(0), c.clone()]]).unwrap();
    assert_eq!(split.basis_vector(0), e(0));
    assert_eq!(split.basis_vector(1), e(1));
    assert_eq!(split.basis_vector(2), vec![rat(0), rat(0), rat(1), c]);
    let same = shift_split(&h3_spec(), &h3_split(), &[vec![rat(0); 3]]).unwrap();
    assert_eq!(same.basis_vector(2), e(2));
    let space = h3_space().shift(&[vec![rat(0), rat(0), rat(3)]]).unwrap();
    assert_eq!(space.m_labels(), vec!["E1", "E2", "E3 + 3 D"]);
}

#[test]
fn non_equivariant_graph_is_rejected() {
    // xi(y) = y1 D is not Ad(H)-equivariant, so m' is not ad(D)-invariant.
    let r = shift_split(&h3_spec(), &h3_split(), &[vec![rat(1), rat(0), rat(0)]]);
    assert!(matches!(r, Err(Error::DegenerateGraph(_))));
}

#[test]
fn central_shift_examples() {
    let c = ratio(7, 3);
    let shifted = h3_space()
        .shift(&[vec![rat(0), rat(0), c.clone()]])
        .unwrap();
    // v = (E3 + cD)/c has m' coordinates (0, 0, 1/c).
    let v = vec![rat(0), rat(0), rat(1) / &c];
    assert_eq!(shifted.central_shift(&v).unwrap(), Some(vec![rat(1)]));
    // E3 is central in g.
    let orig = h3_space();
    assert_eq!(orig.central_shift(&v).unwrap(), Some(vec![rat(0)]));
    // E1 is not central modulo h.
    assert_eq!(orig.central_shift(&[rat(1), rat(0), rat(0)]).unwrap(), None);
}

#[test]
fn ad_operator_matches_numeric_cache() {
    let s = h3_space();
    let ad = s.ad_operator(&e(3), Subspace::M).unwrap();
    assert_eq!(ad.matrix.to_f64(), *s.ad_h_on_m(0));
    assert_eq!(ad.matrix[(1, 0)], rat(1));
}

#[test]
fn geodesic_bracket_in_heisenberg() {
    // [y + xi D, E1]_m = -y2 E3 + xi E2
    let s = h3_space();
    let b = s.geodesic_bracket(&[1.0, 2.0, 3.0], &[5.0], 0);
    assert_eq!(b, vec![0.0, 5.0, -2.0]);
    assert_eq!(
        s.bracket_mm_numeric(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
        vec![0.0, 0.0, 1.0]
    );
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..20, 1i64..8).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_antisymmetric(x in proptest::collection::vec(small_rat(), 4),
                             y in proptest::collection::vec(small_rat(), 4)) {
        let s = h3_spec();
        let a = s.bracket(&x, &y).unwrap();
        let b = s.bracket(&y, &x).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(p, q)| (p + q).is_zero()));
    }

    #[test]
    fn projections_sum_to_identity(z in proptest::collection::vec(small_rat(), 4), c in small_rat()) {
        let split = shift_split(&h3_spec(), &h3_split(), &[vec![rat(0), rat(0), c]]).unwrap();
        let h = split.project(&z, Part::H).unwrap();
        let m = split.project(&z, Part::M).unwrap();
        let sum: Vec<Rat> = h.iter().zip(&m).map(|(a, b)| a + b).collect();
        prop_assert_eq!(&sum, &z);
        prop_assert_eq!(split.project(&m, Part::M).unwrap(), m);
    }

    #[test]
    fn blocks_are_module_invariant(w in small_rat(), u in 0usize..3) {
        let s = h3_space();
        let mut z = vec![rat(0); 4];
        z[3] = w;
        let ad = s.ad_operator(&z, Subspace::M).unwrap();
        let block = s.msplit().block_of(u);
        for r in 0..3 {
            if s.msplit().block_of(r) != block {
                prop_assert!(ad.matrix[(r, u)].is_zero());
            }
        }
    }

    #[test]
    fn exp_ad_inverse(w in -3.0f64..3.0, t in -2.0f64..2.0) {
        let s = h3_space();
        let p = s.exp_ad(&[w], t, Subspace::M) * s.exp_ad(&[w], -t, Subspace::M);
        prop_assert!((p - nalgebra::DMatrix::<f64>::identity(3, 3)).amax() < 1e-10);
    }
}
