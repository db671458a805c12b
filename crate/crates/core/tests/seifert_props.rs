//! Property tests for the Seifert topology pipeline: invariance of H1 under
//! presentation symmetries and basis changes, agreement with the
//! determinantal oracle, the exact proportionality identity of the built-in
//! family, and the prime-by-prime triviality check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use smale_core::certifier::{build_family, validate_parameters, FamilyParams};
use smale_core::linalg::IntMatrix;
use smale_core::picard::{BlowupLattice, DivisorClass, IntersectionLattice};
use smale_core::seifert::{MarkedDivisor, SeifertData, SeifertFlags};
use smale_core::testutil::{cokernel_oracle, rank_mod_p, signature_by_congruence, SMALL_PRIMES};
use std::sync::Arc;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Arbitrary (not necessarily valid) Seifert data on a blowup lattice; the
/// H1 machinery is total on such data once the lattice is unimodular, so
/// invariance can be probed without satisfying the construction
/// hypotheses.
fn raw_seifert_strategy() -> impl Strategy<Value = SeifertData> {
    (0usize..=3, 0usize..=3).prop_flat_map(|(k_prime, n_divisors)| {
        let rank = k_prime + 2;
        let class_entries = proptest::collection::vec(-4i64..=4, rank);
        (
            proptest::collection::vec((class_entries, 1i64..=6, 1i64..=6), n_divisors),
            proptest::collection::vec(-4i64..=4, rank),
        )
            .prop_map(move |(raw_divisors, raw_background)| {
                let bl = BlowupLattice::new(k_prime);
                let lattice = Arc::clone(bl.lattice());
                let divisors = raw_divisors
                    .into_iter()
                    .map(|(coords, a, b)| MarkedDivisor {
                        class: DivisorClass::from_ints(
                            &lattice,
                            coords.into_iter().map(BigInt::from).collect(),
                        )
                        .unwrap(),
                        multiplicity: BigInt::from(a),
                        twist: BigInt::from(b.min(a)),
                    })
                    .collect();
                let background = DivisorClass::from_ints(
                    &lattice,
                    raw_background.into_iter().map(BigInt::from).collect(),
                )
                .unwrap();
                let canonical = bl.canonical_class();
                SeifertData::new_unchecked(
                    lattice,
                    divisors,
                    background,
                    canonical,
                    SeifertFlags::all_true(),
                )
            })
    })
}

/// A unimodular matrix together with its inverse, built from elementary
/// shears and swaps.
fn unimodular_pair(rank: usize, seed: u64) -> (IntMatrix, IntMatrix) {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = IntMatrix::identity(rank);
    let mut t_inv = IntMatrix::identity(rank);
    for _ in 0..3 * rank {
        let i = rng.gen_range(0..rank);
        let j = rng.gen_range(0..rank);
        if i == j {
            continue;
        }
        let c = rng.gen_range(-2i64..=2);
        // E adds c * row_j to row_i; E^-1 subtracts it
        let mut e = IntMatrix::identity(rank);
        e[(i, j)] = BigInt::from(c);
        let mut e_inv = IntMatrix::identity(rank);
        e_inv[(i, j)] = BigInt::from(-c);
        t = e.mul(&t);
        t_inv = t_inv.mul(&e_inv);
    }
    assert_eq!(t.mul(&t_inv), IntMatrix::identity(rank));
    (t, t_inv)
}

fn transform_coords(t_inv: &IntMatrix, class: &DivisorClass) -> Vec<BigInt> {
    let coords = class.integral_coords().unwrap();
    let column = IntMatrix::from_rows(coords.into_iter().map(|c| vec![c]).collect());
    let out = t_inv.mul(&column);
    (0..out.rows()).map(|i| out[(i, 0)].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn h1_agrees_with_the_determinantal_oracle(sd in raw_seifert_strategy()) {
        let presentation = sd.h1_presentation().unwrap();
        let generators = sd.divisors().len() + 1;
        prop_assert_eq!(sd.h1().unwrap(), cokernel_oracle(&presentation, generators));
    }

    #[test]
    fn h1_is_independent_of_divisor_order(sd in raw_seifert_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut divisors = sd.divisors().to_vec();
        divisors.shuffle(&mut rng);
        let shuffled = SeifertData::new_unchecked(
            Arc::clone(sd.lattice()),
            divisors,
            sd.background().clone(),
            sd.canonical().clone(),
            *sd.flags(),
        );
        prop_assert_eq!(shuffled.h1().unwrap(), sd.h1().unwrap());
    }

    #[test]
    fn h1_is_independent_of_the_lattice_basis(sd in raw_seifert_strategy(), seed in any::<u64>()) {
        let rank = sd.lattice().rank();
        let (t, t_inv) = unimodular_pair(rank, seed);
        // new gram = T^t * G * T; coordinates transform by T^-1
        let mut t_transpose = IntMatrix::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                t_transpose[(i, j)] = t[(j, i)].clone();
            }
        }
        let gram = t_transpose.mul(sd.lattice().gram()).mul(&t);
        let labels = (1..=rank).map(|i| format!("f{i}")).collect();
        let lattice = Arc::new(IntersectionLattice::new(labels, gram).unwrap());
        prop_assert!(lattice.is_unimodular());
        let class = |c: &DivisorClass| {
            DivisorClass::from_ints(&lattice, transform_coords(&t_inv, c)).unwrap()
        };
        let divisors = sd
            .divisors()
            .iter()
            .map(|d| MarkedDivisor {
                class: class(&d.class),
                multiplicity: d.multiplicity.clone(),
                twist: d.twist.clone(),
            })
            .collect();
        let transformed = SeifertData::new_unchecked(
            Arc::clone(&lattice),
            divisors,
            class(sd.background()),
            class(sd.canonical()),
            *sd.flags(),
        );
        prop_assert_eq!(transformed.h1().unwrap(), sd.h1().unwrap());
    }
}

/// Validated parameter triples in the acceptance window.
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
    assert!(triples.len() >= 40, "grid too sparse: {}", triples.len());
    triples
}

#[test]
fn family_chern_class_is_minus_the_log_canonical_class() {
    // c1(L) = -(K + (1 - 1/m1) C1' + (1 - 1/m2) C2'), exactly
    for (k, m1, m2) in validated_grid() {
        let (bl, sd) = build_family(&FamilyParams::generic(k, m1, m2)).unwrap();
        let weight = |m: u64| rat(1, 1) - BigRational::new(BigInt::one(), BigInt::from(m));
        let log_canonical = &(&bl.canonical_class() + &bl.c1_prime().scale(&weight(m1)))
            + &bl.c2_prime().scale(&weight(m2));
        assert_eq!(sd.chern_class(), -&log_canonical, "k={k} m1={m1} m2={m2}");
        // and the integral class is exactly lcm * chern
        let lcm = BigRational::from_integer(sd.orbit_lcm());
        assert_eq!(sd.integral_chern_class(), sd.chern_class().scale(&lcm));
        assert!(sd.integral_chern_class().is_integral());
    }
}

#[test]
fn family_h1_is_trivial_prime_by_prime() {
    // mirror of the prime-by-prime argument: the presentation must have full
    // column rank over F_p for every prime up to 97
    for (k, m1, m2) in validated_grid() {
        let (_, sd) = build_family(&FamilyParams::generic(k, m1, m2)).unwrap();
        assert!(sd.h1().unwrap().is_trivial());
        let presentation = sd.h1_presentation().unwrap();
        let generators = sd.divisors().len() + 1;
        for &p in &SMALL_PRIMES {
            assert_eq!(
                rank_mod_p(&presentation, p),
                generators,
                "presentation drops rank mod {p} at (k, m1, m2) = ({k}, {m1}, {m2})"
            );
        }
    }
}

#[test]
fn blowup_lattice_signature() {
    // hyperbolic plane plus k' negative exceptional directions
    for k_prime in [0usize, 1, 5, 9] {
        let bl = BlowupLattice::new(k_prime);
        assert_eq!(signature_by_congruence(bl.lattice().gram()), (1, k_prime + 1));
    }
}
