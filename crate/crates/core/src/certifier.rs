//! End-to-end pipeline: parameter validation, family construction, the
//! topological and metric checklists, certificate assembly, and parameter
//! enumeration.
//!
//! The single largest confusion hazard in this construction is that two
//! different counts are both naturally called k: the number of connected
//! summands of the link, and the number of blown-up points on the quadric.
//! This layer fixes the convention once: `k` is the summand count, the
//! surface is the blowup at k' = k - 1 points, its Picard rank is k + 1, and
//! the classification count is rank - 1 = k. User-facing messages state both
//! numbers.

pub mod schema;

use crate::kahler_einstein::{
    ke_certificate, symmetric_configuration, KeReport, PointConfig,
};
use crate::linalg::gcd_content;
use crate::picard::{BlowupLattice, DivisorClass};
use crate::seifert::{
    ClassificationReport, DiffeoType, MarkedDivisor, SeifertData, SeifertError, SeifertFlags,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Choice of point configuration for the blown-up surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigChoice {
    /// The involution-stable configuration built from the given c-values.
    Symmetric(Vec<BigRational>),
    /// An unspecified configuration near the symmetric locus; existence is
    /// then an open-neighborhood claim, never a full certificate.
    Generic,
}

/// Input parameters of the family: k connected summands and the two fiber
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub k: u64,
    pub m1: u64,
    pub m2: u64,
    pub config: ConfigChoice,
}

impl FamilyParams {
    pub fn symmetric(k: u64, m1: u64, m2: u64, c: Vec<BigRational>) -> Self {
        FamilyParams {
            k,
            m1,
            m2,
            config: ConfigChoice::Symmetric(c),
        }
    }

    pub fn generic(k: u64, m1: u64, m2: u64) -> Self {
        FamilyParams {
            k,
            m1,
            m2,
            config: ConfigChoice::Generic,
        }
    }

    /// Symmetric configuration with the default c_i = i / (m + 1).
    pub fn with_default_symmetric(k: u64, m1: u64, m2: u64) -> Self {
        let k_prime = k.saturating_sub(1) as usize;
        Self::symmetric(
            k,
            m1,
            m2,
            crate::kahler_einstein::default_symmetric_c(k_prime),
        )
    }
}

/// A violated parameter constraint, reported with the clause text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamViolation {
    pub clause: &'static str,
    pub detail: String,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated ({})", self.clause, self.detail)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Validates the family constraints: k >= 6; m1, m2 odd, coprime, > 2; and
/// the ampleness bound m2 > ((k-5)/2) * m1, compared exactly as
/// 2*m2 > (k-5)*m1. Returns every violated clause; empty means valid.
pub fn validate_parameters(k: u64, m1: u64, m2: u64) -> Vec<ParamViolation> {
    let mut violations = Vec::new();
    if k < 6 {
        violations.push(ParamViolation {
            clause: "k >= 6",
            detail: format!("k = {k}"),
        });
    }
    if m1 % 2 == 0 {
        violations.push(ParamViolation {
            clause: "m1 odd",
            detail: format!("m1 = {m1}"),
        });
    }
    if m1 <= 2 {
        violations.push(ParamViolation {
            clause: "m1 > 2",
            detail: format!("m1 = {m1}"),
        });
    }
    if m2 % 2 == 0 {
        violations.push(ParamViolation {
            clause: "m2 odd",
            detail: format!("m2 = {m2}"),
        });
    }
    if m2 <= 2 {
        violations.push(ParamViolation {
            clause: "m2 > 2",
            detail: format!("m2 = {m2}"),
        });
    }
    let g = gcd_u64(m1, m2);
    if g != 1 {
        violations.push(ParamViolation {
            clause: "gcd(m1, m2) = 1",
            detail: format!("gcd({m1}, {m2}) = {g}"),
        });
    }
    if k >= 5 && 2 * m2 as u128 <= (k - 5) as u128 * m1 as u128 {
        violations.push(ParamViolation {
            clause: "m2 > ((k-5)/2)*m1",
            detail: format!("2*m2 = {} <= (k-5)*m1 = {}", 2 * m2 as u128, (k - 5) as u128 * m1 as u128),
        });
    }
    violations
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// The family data without parameter validation, for diagnostic runs on
/// out-of-range parameters. Requires k >= 1 and coprime multiplicities
/// (the marked curves intersect, so the data model enforces coprimality).
fn assemble_family(k: u64, m1: u64, m2: u64) -> Result<(BlowupLattice, SeifertData), SeifertError> {
    let bl = BlowupLattice::new((k - 1) as usize);
    let sd = SeifertData::new(
        Arc::clone(bl.lattice()),
        vec![
            MarkedDivisor {
                class: bl.c1_prime(),
                multiplicity: BigInt::from(m1),
                twist: BigInt::one(),
            },
            MarkedDivisor {
                class: bl.c2_prime(),
                multiplicity: BigInt::from(m2),
                twist: BigInt::one(),
            },
        ],
        DivisorClass::zero(bl.lattice()),
        bl.canonical_class(),
        SeifertFlags::all_true(),
    )?;
    Ok((bl, sd))
}

/// Builds the Seifert bundle of the family: the blowup at k - 1 points with
/// orbit invariants (m1, 1) along C1', (m2, 1) along C2' and trivial
/// background class. Fails on invalid parameters.
pub fn build_family(params: &FamilyParams) -> Result<(BlowupLattice, SeifertData), BuildError> {
    let violations = validate_parameters(params.k, params.m1, params.m2);
    if !violations.is_empty() {
        let text = violations
            .iter()
            .map(ParamViolation::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(BuildError::InvalidParameters(text));
    }
    Ok(assemble_family(params.k, params.m1, params.m2)?)
}

/// One named verification step with its pass/fail verdict and evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub evidence: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EinsteinStatus {
    /// Every hypothesis verified on a validated symmetric configuration.
    Certified,
    /// Every hypothesis verified, configuration generic: existence holds on
    /// an open neighborhood of the symmetric locus.
    OpenNeighborhoodClaim,
    Failed,
}

impl fmt::Display for EinsteinStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EinsteinStatus::Certified => write!(f, "certified"),
            EinsteinStatus::OpenNeighborhoodClaim => write!(f, "open-neighborhood-claim"),
            EinsteinStatus::Failed => write!(f, "failed"),
        }
    }
}

/// The data Complement-style isometry comparison would act on; recorded,
/// never decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryInvariants {
    pub m1: u64,
    pub m2: u64,
    pub point_descriptor: String,
}

/// The structured verdict of a full pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub params: FamilyParams,
    pub checks: Vec<Check>,
    pub classification: Option<ClassificationReport>,
    pub ke: Option<KeReport>,
    pub einstein_status: EinsteinStatus,
    pub diffeo_type: Option<DiffeoType>,
    pub moduli_real_dimension: Option<u64>,
    pub isometry_invariants: Option<IsometryInvariants>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn join_rationals(values: &[BigRational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// The per-check verdicts derived from a classification report. Shared by
/// the family certifier and the generic-input path.
pub fn classification_checks(report: &ClassificationReport) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check {
        name: "h1_trivial",
        pass: report.h1.is_trivial(),
        evidence: format!("H1(L, Z) = {}", report.h1),
    });
    checks.push(Check {
        name: "divisors_part_of_basis",
        pass: report.basis_ok,
        evidence: if report.basis_ok {
            "the marked divisor classes extend to a Z-basis of the lattice".to_string()
        } else {
            "the marked divisor classes do not extend to a Z-basis of the lattice".to_string()
        },
    });
    let content = gcd_content(
        &report
            .integral_chern
            .integral_coords()
            .expect("integral Chern class is integral"),
    );
    checks.push(Check {
        name: "chern_not_divisible",
        pass: report.not_divisible,
        evidence: format!(
            "a*c1(L) = {} has content gcd {content}",
            report.integral_chern
        ),
    });
    checks.push(Check {
        name: "w2_vanishes",
        pass: report.w2.vanishes(),
        evidence: format!(
            "multiplicities all odd: {}; canonical class congruent to a*c1(L) mod 2: {}",
            report.w2.multiplicities_odd, report.w2.parity_matches
        ),
    });
    checks.push(Check {
        name: "pi1_complement_abelian",
        pass: report.flags.pi1_complement_abelian,
        evidence: "hypothesis flag: the fundamental group of the divisor complement is abelian"
            .to_string(),
    });
    checks.push(Check {
        name: "simply_connected",
        pass: report.simply_connected,
        evidence: format!(
            "H1 trivial: {}; basis condition: {}; non-divisibility: {}; abelian complement: {}",
            report.h1.is_trivial(),
            report.basis_ok,
            report.not_divisible,
            report.flags.pi1_complement_abelian
        ),
    });
    checks.push(Check {
        name: "h3_torsion_free",
        pass: report.flags.divisors_rational_curves,
        evidence: match report.h3_rank {
            Some(rank) => format!(
                "marked divisors are rational curves: {}; rank H^3(L, Q) = {rank}",
                report.flags.divisors_rational_curves
            ),
            None => "H1(L) is infinite; the H^3 rank identity does not apply".to_string(),
        },
    });
    checks.push(Check {
        name: "smale_classification",
        pass: report.diffeo_type.is_some(),
        evidence: match &report.diffeo_type {
            Some(d) => format!("L is diffeomorphic to {d}"),
            None => "classification hypotheses are not all verified".to_string(),
        },
    });
    checks
}

fn point_descriptor(config: &PointConfig) -> String {
    let mut fibers = config.pi2_coordinates().to_vec();
    fibers.sort();
    let fibers = fibers
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "symmetric ({} parity); c = [{}]; pi2-fibers = [{}]",
        config.parity(),
        join_rationals(config.c_values()),
        fibers
    )
}

/// Runs the whole pipeline and assembles the certificate. Never fails:
/// invalid parameters or failing hypotheses yield a `failed` certificate
/// with the violated clauses named in the checks.
pub fn certify(params: &FamilyParams) -> Certificate {
    let FamilyParams { k, m1, m2, .. } = *params;
    let violations = validate_parameters(k, m1, m2);
    let mut checks = Vec::new();
    checks.push(Check {
        name: "parameters",
        pass: violations.is_empty(),
        evidence: if violations.is_empty() {
            format!(
                "k = {k} (connected summands), k' = {} (blown-up points), Picard rank {}; \
                 m1 = {m1}, m2 = {m2} odd, coprime, > 2; 2*m2 > (k-5)*m1",
                k - 1,
                k + 1
            )
        } else {
            violations
                .iter()
                .map(ParamViolation::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        },
    });

    // Topology: run whenever the data model can be built, so diagnostics on
    // out-of-range parameters still name every failing gate.
    let mut classification = None;
    if k >= 1 {
        match assemble_family(k, m1, m2) {
            Ok((_bl, sd)) => {
                let report = sd
                    .classify()
                    .expect("the blowup lattice is unimodular");
                checks.push(Check {
                    name: "seifert_data",
                    pass: true,
                    evidence: format!(
                        "orbit invariants ({m1}, 1) along C1' and ({m2}, 1) along C2', \
                         trivial background class, rank {} lattice",
                        k + 1
                    ),
                });
                checks.extend(classification_checks(&report));
                classification = Some(report);
            }
            Err(e) => checks.push(Check {
                name: "seifert_data",
                pass: false,
                evidence: e.to_string(),
            }),
        }
    } else {
        checks.push(Check {
            name: "seifert_data",
            pass: false,
            evidence: format!("cannot build a family with k = {k}"),
        });
    }

    // Metric existence checklist on the blowup at k' = k - 1 points.
    let mut ke = None;
    match k
        .checked_sub(1)
        .ok_or_else(|| "k must be at least 1".to_string())
        .and_then(|kp| ke_certificate(kp as usize, m1, m2).map_err(|e| e.to_string()))
    {
        Ok(report) => {
            checks.push(Check {
                name: "anticanonical_ample",
                pass: report.ample,
                evidence: format!(
                    "(1/{m1})C1' + (1/{m2})C2' on the blowup at {} points is {}",
                    report.k_prime, report.positivity
                ),
            });
            let failing = report.klt.records.iter().filter(|r| !r.pass).count();
            checks.push(Check {
                name: "klt_inequalities",
                pass: report.klt.passes(),
                evidence: if report.klt.passes() {
                    let r1 = report.klt.record("restriction_to_c1").expect("record exists");
                    let r2 = report.klt.record("restriction_to_c2").expect("record exists");
                    format!(
                        "all {} strict inequalities hold at their vertex maxima over \
                         [0, {}] x [0, {}] (restriction worst cases {} and {}); threshold {}",
                        report.klt.records.len(),
                        report.b1,
                        report.b2,
                        r1.worst_case,
                        r2.worst_case,
                        report.threshold
                    )
                } else {
                    format!(
                        "{failing} of {} inequalities fail over [0, {}] x [0, {}]",
                        report.klt.records.len(),
                        report.b1,
                        report.b2
                    )
                },
            });
            ke = Some(report);
        }
        Err(e) => {
            checks.push(Check {
                name: "anticanonical_ample",
                pass: false,
                evidence: e.clone(),
            });
            checks.push(Check {
                name: "klt_inequalities",
                pass: false,
                evidence: e,
            });
        }
    }

    // Point configuration: a validated symmetric configuration carries the
    // involution the metric argument needs; generic weakens the verdict to
    // the open-neighborhood claim.
    let mut config_points = None;
    let config_check = match (&params.config, k.checked_sub(1)) {
        (ConfigChoice::Symmetric(c), Some(kp)) => {
            match symmetric_configuration(kp as usize, c) {
                Ok(config) => {
                    let ev = format!(
                        "symmetric configuration of {} points on C2 minus C1, c = [{}]; \
                         fiber coordinates pairwise distinct",
                        config.points().len(),
                        join_rationals(config.c_values()),
                    );
                    config_points = Some(config);
                    Check {
                        name: "point_configuration",
                        pass: true,
                        evidence: ev,
                    }
                }
                Err(e) => Check {
                    name: "point_configuration",
                    pass: false,
                    evidence: e.to_string(),
                },
            }
        }
        (ConfigChoice::Symmetric(_), None) => Check {
            name: "point_configuration",
            pass: false,
            evidence: "a configuration needs k >= 1".to_string(),
        },
        (ConfigChoice::Generic, _) => Check {
            name: "point_configuration",
            pass: true,
            evidence: "generic configuration: existence is claimed on an open neighborhood \
                       of the symmetric locus, not certified pointwise"
                .to_string(),
        },
    };
    checks.push(config_check);

    let all_pass = checks.iter().all(|c| c.pass);
    let einstein_status = if all_pass {
        match params.config {
            ConfigChoice::Symmetric(_) => EinsteinStatus::Certified,
            ConfigChoice::Generic => EinsteinStatus::OpenNeighborhoodClaim,
        }
    } else {
        EinsteinStatus::Failed
    };
    let failed = einstein_status == EinsteinStatus::Failed;

    let diffeo_type = classification.as_ref().and_then(|c| c.diffeo_type);
    let moduli_real_dimension = (!failed).then(|| 2 * k - 2);
    let isometry_invariants = (!failed).then(|| IsometryInvariants {
        m1,
        m2,
        point_descriptor: match &config_points {
            Some(config) => point_descriptor(config),
            None => "generic".to_string(),
        },
    });
    let mut notes = Vec::new();
    if !failed {
        notes.push(
            "isometry group identity component: S^1 (asserted, not machine-checked)".to_string(),
        );
        notes.push("the metric is Sasakian-Einstein (asserted, not machine-checked)".to_string());
        notes.push(
            "isometry comparison data is recorded, not decided: two certificates agree iff \
             (m1, m2) match and the point sets are related by an automorphism of the quadric \
             fixing both curves (a group of order 4) or by complex conjugation"
                .to_string(),
        );
        if einstein_status == EinsteinStatus::OpenNeighborhoodClaim {
            notes.push(
                "the generic-configuration verdict relies on openness of metric existence \
                 near the certified symmetric locus (asserted, not machine-checked)"
                    .to_string(),
            );
        }
    }

    Certificate {
        params: params.clone(),
        checks,
        classification,
        ke,
        einstein_status,
        diffeo_type,
        moduli_real_dimension,
        isometry_invariants,
        notes,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("enumeration requires k >= 6, got k = {k}")]
    KTooSmall { k: u64 },
    #[error("enumeration requires max >= 3, got max = {max}")]
    BoundTooSmall { max: u64 },
}

/// All pairs (m1, m2) with 3 <= m_i <= max that yield a family on
/// k#(S^2 x S^3), sorted lexicographically.
///
/// A pair is listed when the unordered multiplicities are odd, coprime and
/// satisfy the ampleness bound 2*m2 > (k-5)*m1 in at least one assignment to
/// the divisor roles; the link is the same for both assignments, so each
/// admissible unordered pair appears in both orders. `validate_parameters`
/// tests the oriented assignment that `build_family` actually uses.
pub fn enumerate_parameters(k: u64, max: u64) -> Result<Vec<(u64, u64)>, EnumerateError> {
    if k < 6 {
        return Err(EnumerateError::KTooSmall { k });
    }
    if max < 3 {
        return Err(EnumerateError::BoundTooSmall { max });
    }
    let bound = |a: u64, b: u64| 2 * b as u128 > (k - 5) as u128 * a as u128;
    let mut out = Vec::new();
    for m1 in 3..=max {
        if m1 % 2 == 0 {
            continue;
        }
        for m2 in 3..=max {
            if m2 % 2 == 0 || gcd_u64(m1, m2) != 1 {
                continue;
            }
            if bound(m1, m2) || bound(m2, m1) {
                out.push((m1, m2));
            }
        }
    }
    Ok(out)
}

/// Parses a generic Seifert input document and runs the topological
/// pipeline on it.
pub fn classify_document(document: &str) -> Result<ClassificationReport, schema::InputError> {
    let sd = schema::parse_seifert_input(document)?;
    sd.classify()
        .map_err(|e| schema::InputError::Invariant(e.to_string()))
}
