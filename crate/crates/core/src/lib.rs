//! Analysis of real, complex and mixed polynomial mappings through their
//! Newton polyhedra at infinity: dual cone subdivisions, non-degeneracy
//! certification, bifurcation-bound sets and a numerical asymptotic
//! critical-value search.

pub mod bounds;
pub mod dd;
pub mod error;
pub mod fan;
pub mod linalg;
pub mod nondegeneracy;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod polytope;
pub mod report;
pub mod scalar;
pub mod univariate;

pub use bounds::{
    compute_a, compute_n, invertibility_verdict, kinf_bound, AtypicalDescriptor,
    BoundReport, InvertibilityTag, InvertibilityVerdict, NSet,
};
pub use error::{Error, Result};
pub use fan::{ConeRecord, DualSubdivision, TupleClass};
pub use nondegeneracy::{
    check_strong_nd, compare_definitions, euler_transfer, is_nondegenerate_at_infinity,
    Certificate, ComparisonReport, ConeCheck, NdConfig, NdReport, Verdict, VerdictTag,
};
pub use numeric::{
    cross_check_inclusions, milnor_residual, rabier_nu, search_asymptotic_values,
    CandidateKind, CandidateValue, CrossCheckReport, NuSample, SearchConfig, SearchResult,
};
pub use parse::{parse_polynomial_map, parse_with_options, ParseOptions};
pub use poly::{NumericPoint, PolyMap, Polynomial, Setting, Term};
pub use polytope::{Face, FaceQueryResult, NewtonPolyhedron};
pub use report::{exit_code_for, run_pipeline, run_pipeline_on_text, AnalysisReport, Config};
