//! Exact arithmetic in the integer Laurent ring over Z^d, atorality
//! diagnostics on the torus, numerically certified quasi-inverses, an
//! effective gap-splitting divisibility engine, and brute-force lacunary
//! independence verifiers.

pub mod division;
pub mod error;
pub mod gap;
pub mod lacunary;
pub mod lattice;
pub mod parse;
pub mod poly;
pub mod quasi;
pub mod torus;
pub mod univariate;

pub use division::{divide, divides, normal_form, CosetRep, Divisibility, RatLaurentPoly};
pub use error::{Error, Result};
pub use gap::{
    cluster_support, gap_constant, gap_radius, proof_trace, split_and_verify, GapCertificate,
    TraceReport,
};
pub use lacunary::{
    empirical_m_search, frobenius_counterexample, haar_pairing, independence_check,
    sumset_growth, verify_spaced_divisibility, IndependenceReport, SpacedConfiguration,
};
pub use lattice::{ball_points, ball_sublattice, LatticePoint, SupportSet};
pub use parse::parse_poly;
pub use poly::{IntLaurentPoly, RealSummableArray};
pub use quasi::{attach_user_h, compute_empty_variety, QuasiInverse};
pub use torus::{
    classify_d1, empty_variety_certificate, eval_on_torus, unitary_variety_sample,
    Classification, TorusCertificate, TorusPoint, Verdict,
};
