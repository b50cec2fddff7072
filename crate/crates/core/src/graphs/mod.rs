//! Geodesic graphs: the symbolic linear solve, its Finsler closure, the
//! closed form for one metric and one one-form, pointwise numeric solves,
//! and the natural-reductivity decision built on them.

mod graph;
mod natred;
mod pointwise;
mod symbolic;
mod verdict;

pub use graph::{GeodesicGraph, GraphValue, Provenance};
pub use natred::{
    beta_vanishing_check, finsler_graph_thm1, latifi_residual, natred_f1, prop13_graph, BetaReport,
    BetaWitness, F1Report, F1Witness,
};
pub use pointwise::{pointwise_graph, pointwise_system, PointwiseSolution};
pub use symbolic::{
    coordinate_names, generic_param_names, solve_linear_graph_symbolic, LinearGraphSym,
    SymbolicSolve,
};
pub use verdict::{
    reductivity_verdict, select_graph, Evidence, GraphSelection, ReductivityVerdict, Verdict,
    VerdictOptions,
};
