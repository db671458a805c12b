//! Exact-arithmetic verification engine for the topology and metric
//! existence checklist of Seifert-fibered 5-manifold links over blown-up
//! quadric surfaces.
//!
//! The pipeline builds the Picard lattice of P^1 x P^1 blown up at k - 1
//! points, models a Seifert bundle over it by orbit invariants, computes H1
//! of the link by Smith normal form, checks the divisibility, basis, w2,
//! ampleness and klt hypotheses, and certifies that the link is
//! diffeomorphic to k#(S^2 x S^3) carrying the existence checklist for an
//! Einstein metric. Every computation is exact: arbitrary-precision
//! integers, rationals and Gaussian rationals throughout, no floating
//! point anywhere.

pub mod certifier;
pub mod gaussian;
pub mod kahler_einstein;
pub mod linalg;
pub mod picard;
pub mod seifert;
#[cfg(feature = "testutil")]
pub mod testutil;

pub use certifier::{
    build_family, certify, classify_document, enumerate_parameters, validate_parameters,
    Certificate, Check, ConfigChoice, EinsteinStatus, FamilyParams,
};
pub use linalg::{
    cokernel_invariants, gcd_content, max_affine_over_box, smith_normal_form, FinAbGroup,
    IntMatrix, RatBox,
};
pub use picard::{
    is_part_of_basis, positivity_report, BlowupLattice, DivisorClass, IntersectionLattice,
    Positivity,
};
pub use seifert::{ClassificationReport, DiffeoType, MarkedDivisor, SeifertData, SeifertFlags};
