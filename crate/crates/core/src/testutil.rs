//! Small spaces shared by the unit tests.

use crate::algebra::{HomogeneousSpace, LieAlgebraSpec, ModuleSplit, ReductiveSplit};
use crate::exactnum::{rat, Rat};
use crate::metrics::{BlockForms, MetricParams, NormFamily, NormSpec, OneFormSpec};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Heisenberg algebra with the rotation D; m = (E1, E2 | E3).
pub fn h3() -> HomogeneousSpace {
    let spec = LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3", "D"]),
        vec![
            (0, 1, vec![(2, rat(1))]),
            (3, 0, vec![(1, rat(1))]),
            (3, 1, vec![(0, rat(-1))]),
        ],
    )
    .unwrap();
    HomogeneousSpace::new(
        spec,
        ReductiveSplit::new(vec![3], vec![0, 1, 2], None).unwrap(),
        ModuleSplit::new(vec![vec![0, 1], vec![2]], 3).unwrap(),
    )
    .unwrap()
}

/// H3 x R; m = (E1, E2 | E3 | E4).
pub fn h3xr() -> HomogeneousSpace {
    let spec = LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3", "E4", "D"]),
        vec![
            (0, 1, vec![(2, rat(1))]),
            (4, 0, vec![(1, rat(1))]),
            (4, 1, vec![(0, rat(-1))]),
        ],
    )
    .unwrap();
    HomogeneousSpace::new(
        spec,
        ReductiveSplit::new(vec![4], vec![0, 1, 2, 3], None).unwrap(),
        ModuleSplit::new(vec![vec![0, 1], vec![2], vec![3]], 4).unwrap(),
    )
    .unwrap()
}

/// H3 x H3 with one rotation per factor; m = (E1, E2 | E3 | F1, F2 | F3).
pub fn h3xh3() -> HomogeneousSpace {
    let spec = LieAlgebraSpec::new(
        labels(&["E1", "E2", "E3", "F1", "F2", "F3", "D1", "D2"]),
        vec![
            (0, 1, vec![(2, rat(1))]),
            (6, 0, vec![(1, rat(1))]),
            (6, 1, vec![(0, rat(-1))]),
            (3, 4, vec![(5, rat(1))]),
            (7, 3, vec![(4, rat(1))]),
            (7, 4, vec![(3, rat(-1))]),
        ],
    )
    .unwrap();
    HomogeneousSpace::new(
        spec,
        ReductiveSplit::new(vec![6, 7], (0..6).collect(), None).unwrap(),
        ModuleSplit::new(vec![vec![0, 1], vec![2], vec![3, 4], vec![5]], 6).unwrap(),
    )
    .unwrap()
}

pub fn params(c: &[i64]) -> MetricParams {
    MetricParams::new(c.iter().map(|&x| rat(x)).collect()).unwrap()
}

pub fn riemannian(space: &HomogeneousSpace, c: &[i64]) -> NormSpec {
    NormSpec::new(
        BlockForms::standard(space.msplit()),
        NormFamily::WeightedSquares {
            weights: vec![rat(1)],
            metrics: vec![params(c)],
            form_weights: vec![],
            forms: vec![],
        },
    )
    .unwrap()
}

pub fn qpower(space: &HomogeneousSpace, q: i64, metrics: &[&[i64]]) -> NormSpec {
    NormSpec::new(
        BlockForms::standard(space.msplit()),
        NormFamily::QPower {
            q: rat(q),
            metrics: metrics.iter().map(|c| params(c)).collect(),
        },
    )
    .unwrap()
}

pub fn randers(space: &HomogeneousSpace, c: &[i64], beta: Vec<Rat>) -> NormSpec {
    NormSpec::new(
        BlockForms::standard(space.msplit()),
        NormFamily::Randers {
            metric: params(c),
            form: OneFormSpec::new(space, beta).unwrap(),
        },
    )
    .unwrap()
}
