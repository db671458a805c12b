//! Wire formats: the structured input document for generic Seifert data,
//! the versioned certificate document, and the text rendering.
//!
//! Integers are emitted as JSON integers when they fit in 64 bits and as
//! decimal strings otherwise; both forms are accepted on input. Rationals
//! are always "p/q" strings. Floating point never appears on either side.

use super::{Certificate, ConfigChoice, FamilyParams};
use crate::kahler_einstein::KeReport;
use crate::linalg::IntMatrix;
use crate::picard::{DivisorClass, IntersectionLattice};
use crate::seifert::{ClassificationReport, MarkedDivisor, SeifertData, SeifertFlags};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt::{self, Write as _};
use std::sync::Arc;
use thiserror::Error;

pub const CERTIFICATE_VERSION: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

/// Exact rational from a "p/q" or integer string. Rejects everything else,
/// floating point included.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid integer {num:?} in rational {s:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid integer {den:?} in rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

/// Comma-separated rationals, as accepted by the command line.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// An arbitrary-precision integer on the wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntEntry(pub BigInt);

impl Serialize for IntEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntEntry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntEntry, E> {
                Ok(IntEntry(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntEntry, E> {
                Ok(IntEntry(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<IntEntry, E> {
                v.trim()
                    .parse()
                    .map(IntEntry)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeifertInputDoc {
    pub lattice: LatticeDoc,
    pub divisors: Vec<DivisorDoc>,
    pub background_class: Vec<IntEntry>,
    pub canonical_class: Vec<IntEntry>,
    pub flags: FlagsDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub rank: usize,
    /// Optional basis labels; generated as v1, v2, ... when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub gram: Vec<Vec<IntEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    pub class: Vec<IntEntry>,
    pub a: IntEntry,
    pub b: IntEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsDoc {
    pub pi1_complement_abelian: bool,
    pub divisors_rational_curves: bool,
    pub divisors_smooth_transversal: bool,
}

fn ints(entries: &[IntEntry]) -> Vec<BigInt> {
    entries.iter().map(|e| e.0.clone()).collect()
}

fn entries(values: &[BigInt]) -> Vec<IntEntry> {
    values.iter().map(|v| IntEntry(v.clone())).collect()
}

/// Validated Seifert data from an input document. Schema errors (shape,
/// types, unknown fields) and invariant errors (the structural checks of
/// the data model) are reported separately, each naming the failing clause.
pub fn parse_seifert_input(document: &str) -> Result<SeifertData, InputError> {
    let doc: SeifertInputDoc =
        serde_json::from_str(document).map_err(|e| InputError::Schema(e.to_string()))?;
    seifert_data_from_doc(&doc)
}

pub fn seifert_data_from_doc(doc: &SeifertInputDoc) -> Result<SeifertData, InputError> {
    let rank = doc.lattice.rank;
    if doc.lattice.gram.len() != rank || doc.lattice.gram.iter().any(|row| row.len() != rank) {
        return Err(InputError::Invariant(format!(
            "lattice.gram must be a {rank} x {rank} matrix"
        )));
    }
    let labels = match &doc.lattice.labels {
        Some(labels) => {
            if labels.len() != rank {
                return Err(InputError::Invariant(
                    "lattice.labels must have one entry per basis vector".to_string(),
                ));
            }
            labels.clone()
        }
        None => (1..=rank).map(|i| format!("v{i}")).collect(),
    };
    let gram = IntMatrix::from_rows(doc.lattice.gram.iter().map(|row| ints(row)).collect());
    let lattice = Arc::new(
        IntersectionLattice::new(labels, gram)
            .map_err(|e| InputError::Invariant(format!("lattice: {e}")))?,
    );
    let to_class = |coords: &[IntEntry], what: &str| {
        DivisorClass::from_ints(&lattice, ints(coords))
            .map_err(|e| InputError::Invariant(format!("{what}: {e}")))
    };
    let mut divisors = Vec::with_capacity(doc.divisors.len());
    for (i, d) in doc.divisors.iter().enumerate() {
        divisors.push(MarkedDivisor {
            class: to_class(&d.class, &format!("divisors[{i}].class"))?,
            multiplicity: d.a.0.clone(),
            twist: d.b.0.clone(),
        });
    }
    let background = to_class(&doc.background_class, "background_class")?;
    let canonical = to_class(&doc.canonical_class, "canonical_class")?;
    let flags = SeifertFlags {
        pi1_complement_abelian: doc.flags.pi1_complement_abelian,
        divisors_rational_curves: doc.flags.divisors_rational_curves,
        divisors_smooth_transversal: doc.flags.divisors_smooth_transversal,
    };
    SeifertData::new(lattice, divisors, background, canonical, flags)
        .map_err(|e| InputError::Invariant(e.to_string()))
}

pub fn seifert_input_doc(sd: &SeifertData) -> SeifertInputDoc {
    let lattice = sd.lattice();
    let rank = lattice.rank();
    let gram = (0..rank)
        .map(|i| entries(lattice.gram().row(i)))
        .collect();
    let class_entries = |class: &DivisorClass| {
        entries(
            &class
                .integral_coords()
                .expect("validated Seifert data has integral classes"),
        )
    };
    SeifertInputDoc {
        lattice: LatticeDoc {
            rank,
            labels: Some(lattice.basis_labels().to_vec()),
            gram,
        },
        divisors: sd
            .divisors()
            .iter()
            .map(|d| DivisorDoc {
                class: class_entries(&d.class),
                a: IntEntry(d.multiplicity.clone()),
                b: IntEntry(d.twist.clone()),
            })
            .collect(),
        background_class: class_entries(sd.background()),
        canonical_class: class_entries(sd.canonical()),
        flags: FlagsDoc {
            pi1_complement_abelian: sd.flags().pi1_complement_abelian,
            divisors_rational_curves: sd.flags().divisors_rational_curves,
            divisors_smooth_transversal: sd.flags().divisors_smooth_transversal,
        },
    }
}

/// Deterministic serialization of Seifert data in the input schema.
pub fn emit_seifert_input(sd: &SeifertData) -> String {
    let mut out = serde_json::to_string_pretty(&seifert_input_doc(sd))
        .expect("input document serialization cannot fail");
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ConfigDoc {
    Symmetric { c: Vec<String> },
    Generic,
}

pub fn config_to_doc(config: &ConfigChoice) -> ConfigDoc {
    match config {
        ConfigChoice::Symmetric(c) => ConfigDoc::Symmetric {
            c: c.iter().map(|x| x.to_string()).collect(),
        },
        ConfigChoice::Generic => ConfigDoc::Generic,
    }
}

pub fn config_from_doc(doc: &ConfigDoc) -> Result<ConfigChoice, InputError> {
    match doc {
        ConfigDoc::Symmetric { c } => {
            let values = c
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(InputError::Invariant)?;
            Ok(ConfigChoice::Symmetric(values))
        }
        ConfigDoc::Generic => Ok(ConfigChoice::Generic),
    }
}

/// A configuration document, as passed to `certify --config FILE`.
pub fn parse_config_document(document: &str) -> Result<ConfigChoice, InputError> {
    let doc: ConfigDoc =
        serde_json::from_str(document).map_err(|e| InputError::Schema(e.to_string()))?;
    config_from_doc(&doc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub version: String,
    pub params: ParamsDoc,
    pub checks: Vec<CheckDoc>,
    pub h1: Option<H1Doc>,
    pub classification: Option<ClassificationDoc>,
    pub klt: Option<KeDoc>,
    pub diffeo_type: Option<String>,
    pub einstein_status: String,
    pub moduli_real_dimension: Option<u64>,
    pub isometry_invariants: Option<IsometryDoc>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub k: u64,
    pub m1: u64,
    pub m2: u64,
    pub configuration: ConfigDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H1Doc {
    pub torsion: Vec<String>,
    pub free_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationDoc {
    pub orbit_lcm: String,
    pub chern_class: Vec<String>,
    pub integral_chern_class: Vec<String>,
    pub not_divisible: bool,
    pub basis_ok: bool,
    pub w2_multiplicities_odd: bool,
    pub w2_parity_matches: bool,
    pub w2_zero: bool,
    pub h3_rank: Option<usize>,
    pub simply_connected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeDoc {
    pub k_prime: usize,
    pub b1: String,
    pub b2: String,
    pub threshold: String,
    pub positivity: String,
    pub ample: bool,
    pub pass: bool,
    pub records: Vec<KltRecordDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KltRecordDoc {
    pub label: String,
    pub worst_case: String,
    pub bound: String,
    pub pass: bool,
    pub vertex: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsometryDoc {
    pub m1: u64,
    pub m2: u64,
    pub point_descriptor: String,
}

fn rationals_to_strings(values: &[BigRational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn classification_to_doc(report: &ClassificationReport) -> ClassificationDoc {
    ClassificationDoc {
        orbit_lcm: report.orbit_lcm.to_string(),
        chern_class: rationals_to_strings(report.chern.coords()),
        integral_chern_class: rationals_to_strings(report.integral_chern.coords()),
        not_divisible: report.not_divisible,
        basis_ok: report.basis_ok,
        w2_multiplicities_odd: report.w2.multiplicities_odd,
        w2_parity_matches: report.w2.parity_matches,
        w2_zero: report.w2.vanishes(),
        h3_rank: report.h3_rank,
        simply_connected: report.simply_connected,
    }
}

fn ke_to_doc(report: &KeReport) -> KeDoc {
    KeDoc {
        k_prime: report.k_prime,
        b1: report.b1.to_string(),
        b2: report.b2.to_string(),
        threshold: report.threshold.to_string(),
        positivity: report.positivity.to_string(),
        ample: report.ample,
        pass: report.pass,
        records: report
            .klt
            .records
            .iter()
            .map(|r| KltRecordDoc {
                label: r.label.to_string(),
                worst_case: r.worst_case.to_string(),
                bound: r.bound.to_string(),
                pass: r.pass,
                vertex: rationals_to_strings(&r.vertex),
            })
            .collect(),
    }
}

impl Certificate {
    pub fn to_doc(&self) -> CertificateDoc {
        let FamilyParams { k, m1, m2, .. } = self.params;
        CertificateDoc {
            version: CERTIFICATE_VERSION.to_string(),
            params: ParamsDoc {
                k,
                m1,
                m2,
                configuration: config_to_doc(&self.params.config),
            },
            checks: self
                .checks
                .iter()
                .map(|c| CheckDoc {
                    name: c.name.to_string(),
                    pass: c.pass,
                    evidence: c.evidence.clone(),
                })
                .collect(),
            h1: self.classification.as_ref().map(|c| H1Doc {
                torsion: c.h1.torsion().iter().map(|d| d.to_string()).collect(),
                free_rank: c.h1.free_rank(),
            }),
            classification: self.classification.as_ref().map(classification_to_doc),
            klt: self.ke.as_ref().map(ke_to_doc),
            diffeo_type: self.diffeo_type.map(|d| d.to_string()),
            einstein_status: self.einstein_status.to_string(),
            moduli_real_dimension: self.moduli_real_dimension,
            isometry_invariants: self.isometry_invariants.as_ref().map(|inv| IsometryDoc {
                m1: inv.m1,
                m2: inv.m2,
                point_descriptor: inv.point_descriptor.clone(),
            }),
            notes: self.notes.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertFormat {
    Text,
    Structured,
}

/// Deterministic serialization of a certificate; the structured form parses
/// back losslessly via `parse_certificate`.
pub fn emit_certificate(cert: &Certificate, format: CertFormat) -> String {
    match format {
        CertFormat::Structured => {
            let mut out = serde_json::to_string_pretty(&cert.to_doc())
                .expect("certificate serialization cannot fail");
            out.push('\n');
            out
        }
        CertFormat::Text => render_text(cert),
    }
}

pub fn parse_certificate(document: &str) -> Result<CertificateDoc, InputError> {
    serde_json::from_str(document).map_err(|e| InputError::Schema(e.to_string()))
}

fn render_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let FamilyParams { k, m1, m2, .. } = cert.params;
    let _ = writeln!(out, "link verification certificate (version {CERTIFICATE_VERSION})");
    let _ = writeln!(
        out,
        "parameters: k = {k} (connected summands), m1 = {m1}, m2 = {m2}"
    );
    match &cert.params.config {
        ConfigChoice::Symmetric(c) => {
            let c = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            let _ = writeln!(out, "configuration: symmetric, c = [{c}]");
        }
        ConfigChoice::Generic => {
            let _ = writeln!(out, "configuration: generic");
        }
    }
    let _ = writeln!(out, "einstein status: {}", cert.einstein_status);
    match &cert.diffeo_type {
        Some(d) => {
            let _ = writeln!(out, "diffeomorphism type: {d}");
        }
        None => {
            let _ = writeln!(out, "diffeomorphism type: not established");
        }
    }
    if let Some(dim) = cert.moduli_real_dimension {
        let _ = writeln!(out, "moduli real dimension: {dim}");
    }
    if let Some(c) = &cert.classification {
        let _ = writeln!(out, "H1(L, Z) = {}", c.h1);
        let _ = writeln!(out, "a (lcm of multiplicities) = {}", c.orbit_lcm);
        let _ = writeln!(out, "a*c1(L) = {}", c.integral_chern);
        if let Some(rank) = c.h3_rank {
            let _ = writeln!(out, "rank H^3(L, Q) = {rank}");
        }
    }
    let _ = writeln!(out, "checks:");
    for check in &cert.checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "  [{verdict}] {}: {}", check.name, check.evidence);
    }
    if let Some(ke) = &cert.ke {
        let _ = writeln!(
            out,
            "klt suite (k' = {}, b1 = {}, b2 = {}, threshold = {}):",
            ke.k_prime, ke.b1, ke.b2, ke.threshold
        );
        for r in &ke.klt.records {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let vertex = r
                .vertex
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                out,
                "  [{verdict}] {}: worst case {} (bound {}) at (d1, d2) = ({vertex})",
                r.label, r.worst_case, r.bound
            );
        }
    }
    if let Some(inv) = &cert.isometry_invariants {
        let _ = writeln!(
            out,
            "isometry invariants: m1 = {}, m2 = {}; {}",
            inv.m1, inv.m2, inv.point_descriptor
        );
    }
    if !cert.notes.is_empty() {
        let _ = writeln!(out, "notes:");
        for note in &cert.notes {
            let _ = writeln!(out, "  - {note}");
        }
    }
    out
}

/// Text rendering of a standalone classification report (the generic-input
/// path).
pub fn render_classification_text(report: &ClassificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "generic Seifert data classification");
    let _ = writeln!(out, "H1(L, Z) = {}", report.h1);
    let _ = writeln!(out, "a (lcm of multiplicities) = {}", report.orbit_lcm);
    let _ = writeln!(out, "a*c1(L) = {}", report.integral_chern);
    match report.h3_rank {
        Some(rank) => {
            let _ = writeln!(out, "rank H^3(L, Q) = {rank}");
        }
        None => {
            let _ = writeln!(out, "rank H^3(L, Q): undefined (H1 infinite)");
        }
    }
    match &report.diffeo_type {
        Some(d) => {
            let _ = writeln!(out, "diffeomorphism type: {d}");
        }
        None => {
            let _ = writeln!(out, "diffeomorphism type: not established");
        }
    }
    let _ = writeln!(out, "checks:");
    for check in super::classification_checks(report) {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "  [{verdict}] {}: {}", check.name, check.evidence);
    }
    out
}
