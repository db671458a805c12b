//! Property tests for the certifier: determinism, relabeling invariance,
//! agreement of the enumerator with a brute-force scan, and lossless
//! round-trips of both wire formats.

use num_bigint::BigInt;
use num_rational::BigRational;
use smale_core::certifier::schema::{
    emit_certificate, emit_seifert_input, parse_certificate, parse_seifert_input, CertFormat,
};
use smale_core::certifier::{
    build_family, certify, enumerate_parameters, validate_parameters, EinsteinStatus,
    FamilyParams,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn validated_grid() -> Vec<(u64, u64, u64)> {
    let mut triples = Vec::new();
    for k in 6..=12 {
        for m1 in (3..=15u64).step_by(2) {
            for m2 in (3..=15u64).step_by(2) {
                if validate_parameters(k, m1, m2).is_empty() {
                    triples.push((k, m1, m2));
                }
            }
        }
    }
    triples
}

#[test]
fn certificates_are_byte_deterministic() {
    for params in [
        FamilyParams::symmetric(6, 3, 5, vec![rat(1, 3), rat(1, 2)]),
        FamilyParams::generic(7, 3, 5),
        FamilyParams::with_default_symmetric(6, 2, 5),
        FamilyParams::with_default_symmetric(10, 3, 5),
    ] {
        let a = certify(&params);
        let b = certify(&params);
        assert_eq!(a, b);
        for format in [CertFormat::Structured, CertFormat::Text] {
            assert_eq!(emit_certificate(&a, format), emit_certificate(&b, format));
        }
    }
}

#[test]
fn swapping_multiplicities_relabels_the_same_link() {
    // the divisor roles are exchanged, the 5-manifold is unchanged: same H1
    // and the same connected-sum type whenever both orientations validate
    for (k, m1, m2) in validated_grid() {
        if !validate_parameters(k, m2, m1).is_empty() {
            continue;
        }
        let a = certify(&FamilyParams::generic(k, m1, m2));
        let b = certify(&FamilyParams::generic(k, m2, m1));
        let ca = a.classification.expect("pipeline ran");
        let cb = b.classification.expect("pipeline ran");
        assert_eq!(ca.h1, cb.h1, "H1 differs for ({k}, {m1}, {m2})");
        assert_eq!(ca.diffeo_type, cb.diffeo_type);
        assert_eq!(a.einstein_status, b.einstein_status);
    }
}

#[test]
fn enumerate_agrees_with_a_brute_force_scan() {
    // independent re-statement of the admissibility predicate
    let admissible = |k: u64, m1: u64, m2: u64| {
        let odd = m1 % 2 == 1 && m2 % 2 == 1;
        let big = m1 > 2 && m2 > 2;
        let coprime = {
            let (mut a, mut b) = (m1, m2);
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a == 1
        };
        let bound = |x: u64, y: u64| 2 * y > (k - 5) * x;
        odd && big && coprime && (bound(m1, m2) || bound(m2, m1))
    };
    for k in [6u64, 7, 9, 12] {
        for max in [3u64, 7, 20, 41] {
            let listed = enumerate_parameters(k, max).unwrap();
            let mut expected = Vec::new();
            for m1 in 3..=max {
                for m2 in 3..=max {
                    if admissible(k, m1, m2) {
                        expected.push((m1, m2));
                    }
                }
            }
            assert_eq!(listed, expected, "k = {k}, max = {max}");
            // lexicographic order
            let mut sorted = listed.clone();
            sorted.sort();
            assert_eq!(listed, sorted);
        }
    }
}

#[test]
fn every_listed_pair_certifies_in_some_orientation() {
    for (m1, m2) in enumerate_parameters(6, 9).unwrap() {
        let direct = certify(&FamilyParams::with_default_symmetric(6, m1, m2));
        let swapped = certify(&FamilyParams::with_default_symmetric(6, m2, m1));
        assert!(
            direct.einstein_status == EinsteinStatus::Certified
                || swapped.einstein_status == EinsteinStatus::Certified,
            "neither orientation of ({m1}, {m2}) certifies"
        );
    }
}

#[test]
fn seifert_input_round_trips_across_the_grid() {
    for (k, m1, m2) in validated_grid() {
        let (_, sd) = build_family(&FamilyParams::generic(k, m1, m2)).unwrap();
        let doc = emit_seifert_input(&sd);
        let parsed = parse_seifert_input(&doc).unwrap();
        assert_eq!(parsed, sd, "round-trip failed at ({k}, {m1}, {m2})");
        assert_eq!(emit_seifert_input(&parsed), doc);
    }
}

#[test]
fn certificate_documents_round_trip() {
    for params in [
        FamilyParams::symmetric(6, 3, 5, vec![rat(1, 3), rat(1, 2)]),
        FamilyParams::generic(8, 3, 7),
        FamilyParams::with_default_symmetric(6, 3, 9),
    ] {
        let cert = certify(&params);
        let emitted = emit_certificate(&cert, CertFormat::Structured);
        let parsed = parse_certificate(&emitted).unwrap();
        assert_eq!(parsed, cert.to_doc());
    }
}

#[test]
fn grid_certificates_reach_the_expected_conclusion() {
    // the quantified conclusion over the acceptance window
    let grid = validated_grid();
    assert!(grid.len() >= 40);
    for (k, m1, m2) in grid {
        let cert = certify(&FamilyParams::with_default_symmetric(k, m1, m2));
        assert_eq!(
            cert.einstein_status,
            EinsteinStatus::Certified,
            "({k}, {m1}, {m2}) failed"
        );
        let classification = cert.classification.unwrap();
        assert!(classification.h1.is_trivial());
        assert_eq!(
            cert.diffeo_type.unwrap().to_string(),
            format!("{k}#(S^2 x S^3)")
        );
        assert_eq!(cert.moduli_real_dimension, Some(2 * k - 2));
        // rank bookkeeping: h3 rank = k, Picard rank = k + 1
        assert_eq!(classification.h3_rank, Some(k as usize));
    }
}
