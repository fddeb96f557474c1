//! Certifying deciders over exact rationals.
//!
//! Every answer comes with a witness that can be re-checked by plain
//! matrix-vector arithmetic: Farkas, Fredholm, Stiemke and Gordan-type
//! alternatives, exact cone and hull projections, linear programs with
//! zero-gap primal/dual pairs, one-period superhedging prices and
//! zero-sum game solutions.
//!
//! Subset enumeration is spread over rayon when the `parallel` feature (on by
//! default) is enabled. Results never depend on scheduling.

pub mod alternatives;
pub mod cone;
pub mod error;
pub mod exec;
pub mod finance;
pub mod games;
pub mod lp;
pub mod rat;
pub mod ratlin;

pub use alternatives::{
    alternatives_lemma, farkas, fredholm, stiemke, verify_certificate, AltCertificate, Certificate,
    FarkasCertificate, FredholmCertificate, Problem, StiemkeCertificate, Verdict,
};
pub use cone::{
    caratheodory_reduce, cone_distance, hull_distance, independence_witness, independent_family,
    project_onto_span, separating_functional, ConeProjection, HullProjection, IndependenceResult,
    IndependentFamily, SpanProjection,
};
pub use error::{Error, Result};
pub use finance::{
    detect_arbitrage, price_bounds, superhedge_price, ArbitrageOutcome, Claim, HedgeResult,
    MarketModel,
};
pub use games::{
    minimax_gap, optimal_strategy_vertices, solution_unique, solve_game, verify_saddle,
    GameSolution, Uniqueness,
};
pub use lp::{check_optimal_pair, primal_from_dual, solve_lp, LpOutcome, LpProblem};
pub use rat::{Rat, RatMat, RatVec};
pub use ratlin::{gram, rank, solve_linear_system, LinearSolution};

/// Largest column count accepted by the enumerating deciders.
pub const MAX_COLUMNS: usize = 20;
