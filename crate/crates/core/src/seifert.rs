//! Seifert bundle data over a surface and the topology of its link.
//!
//! A bundle is recorded by its orbit invariants (a_i, b_i) along marked
//! divisors, a background class B, and the hypothesis flags that are not
//! decidable from lattice data. From this the module computes the rational
//! and integral Chern classes, a presentation of H1 of the link, the w2
//! criterion, the rank of H3, and the connected-sum classification of the
//! link as a compact 5-manifold.

use crate::linalg::{cokernel_invariants, gcd_content, FinAbGroup, IntMatrix};
use crate::picard::{is_part_of_basis, DivisorClass, IntersectionLattice, LatticeError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("divisor {index}: class must be integral")]
    NonIntegralDivisor { index: usize },
    #[error("divisor {index}: orbit invariants must satisfy 0 < b <= a, got (a, b) = ({a}, {b})")]
    InvalidOrbitInvariants { index: usize, a: String, b: String },
    #[error("divisor {index}: gcd(a, b) = 1 violated, gcd({a}, {b}) = {gcd}")]
    OrbitInvariantsNotCoprime {
        index: usize,
        a: String,
        b: String,
        gcd: String,
    },
    #[error("divisors {i} and {j} intersect (pairing {pairing}) but gcd(a_{i}, a_{j}) = {gcd} != 1")]
    MultiplicitiesNotCoprime {
        i: usize,
        j: usize,
        pairing: String,
        gcd: String,
    },
    #[error("background class must be integral")]
    NonIntegralBackground,
    #[error("canonical class must be integral")]
    NonIntegralCanonical,
    #[error("lattice is not unimodular; the duality needed for the H1 presentation is unavailable")]
    NonUnimodularLattice,
    #[error("H1 of the link has free rank {free_rank} > 0; the H3 rank formula requires finite H1")]
    InfiniteH1 { free_rank: usize },
}

/// A marked divisor: an integral class with orbit invariants (a, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDivisor {
    pub class: DivisorClass,
    /// Fiber multiplicity a along the divisor.
    pub multiplicity: BigInt,
    /// Twisting b, coprime to a, 0 < b <= a.
    pub twist: BigInt,
}

/// Hypotheses that cannot be decided from lattice data; they are established
/// for the built-in family and user-asserted for generic input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeifertFlags {
    pub pi1_complement_abelian: bool,
    pub divisors_rational_curves: bool,
    pub divisors_smooth_transversal: bool,
}

impl SeifertFlags {
    pub fn all_true() -> Self {
        SeifertFlags {
            pi1_complement_abelian: true,
            divisors_rational_curves: true,
            divisors_smooth_transversal: true,
        }
    }
}

/// Seifert bundle data over a surface with H^2 given by `lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    lattice: Arc<IntersectionLattice>,
    divisors: Vec<MarkedDivisor>,
    background: DivisorClass,
    canonical: DivisorClass,
    flags: SeifertFlags,
}

impl SeifertData {
    /// Validates every structural invariant: integral classes, orbit
    /// invariants with 0 < b <= a and gcd(a, b) = 1, and coprime
    /// multiplicities on any two divisors with positive pairing (the
    /// incidence criterion under the transversality hypothesis).
    pub fn new(
        lattice: Arc<IntersectionLattice>,
        divisors: Vec<MarkedDivisor>,
        background: DivisorClass,
        canonical: DivisorClass,
        flags: SeifertFlags,
    ) -> Result<Self, SeifertError> {
        for (index, d) in divisors.iter().enumerate() {
            if d.class.lattice() != &lattice {
                return Err(LatticeError::LatticeMismatch.into());
            }
            if !d.class.is_integral() {
                return Err(SeifertError::NonIntegralDivisor { index });
            }
            if d.twist <= BigInt::zero() || d.twist > d.multiplicity {
                return Err(SeifertError::InvalidOrbitInvariants {
                    index,
                    a: d.multiplicity.to_string(),
                    b: d.twist.to_string(),
                });
            }
            let g = d.multiplicity.gcd(&d.twist);
            if !g.is_one() {
                return Err(SeifertError::OrbitInvariantsNotCoprime {
                    index,
                    a: d.multiplicity.to_string(),
                    b: d.twist.to_string(),
                    gcd: g.to_string(),
                });
            }
        }
        for i in 0..divisors.len() {
            for j in i + 1..divisors.len() {
                let pairing = divisors[i].class.pairing(&divisors[j].class)?;
                if pairing <= BigRational::zero() {
                    continue;
                }
                let g = divisors[i].multiplicity.gcd(&divisors[j].multiplicity);
                if !g.is_one() {
                    return Err(SeifertError::MultiplicitiesNotCoprime {
                        i,
                        j,
                        pairing: pairing.to_string(),
                        gcd: g.to_string(),
                    });
                }
            }
        }
        if background.lattice() != &lattice || canonical.lattice() != &lattice {
            return Err(LatticeError::LatticeMismatch.into());
        }
        if !background.is_integral() {
            return Err(SeifertError::NonIntegralBackground);
        }
        if !canonical.is_integral() {
            return Err(SeifertError::NonIntegralCanonical);
        }
        Ok(SeifertData {
            lattice,
            divisors,
            background,
            canonical,
            flags,
        })
    }

    /// Bypasses invariant validation. For experiments and tests that probe
    /// what the pipeline does on data violating the construction hypotheses.
    pub fn new_unchecked(
        lattice: Arc<IntersectionLattice>,
        divisors: Vec<MarkedDivisor>,
        background: DivisorClass,
        canonical: DivisorClass,
        flags: SeifertFlags,
    ) -> Self {
        SeifertData {
            lattice,
            divisors,
            background,
            canonical,
            flags,
        }
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn divisors(&self) -> &[MarkedDivisor] {
        &self.divisors
    }

    pub fn background(&self) -> &DivisorClass {
        &self.background
    }

    pub fn canonical(&self) -> &DivisorClass {
        &self.canonical
    }

    pub fn flags(&self) -> &SeifertFlags {
        &self.flags
    }

    /// a = lcm of all fiber multiplicities; 1 when there are no divisors.
    pub fn orbit_lcm(&self) -> BigInt {
        self.divisors
            .iter()
            .fold(BigInt::one(), |acc, d| acc.lcm(&d.multiplicity))
    }

    /// Chern class B + sum (b_i / a_i) [D_i], exact over the rationals.
    pub fn chern_class(&self) -> DivisorClass {
        let mut acc = self.background.clone();
        for d in &self.divisors {
            let w = BigRational::new(d.twist.clone(), d.multiplicity.clone());
            acc = &acc + &d.class.scale(&w);
        }
        acc
    }

    /// a*B + sum b_i (a / a_i) [D_i] with a the orbit lcm. Computed in
    /// integer arithmetic; always integral and equal to a times the Chern
    /// class.
    pub fn integral_chern_class(&self) -> DivisorClass {
        let a = self.orbit_lcm();
        let mut acc = self
            .background
            .scale(&BigRational::from_integer(a.clone()));
        for d in &self.divisors {
            let coeff = &d.twist * (&a / &d.multiplicity);
            acc = &acc + &d.class.scale(&BigRational::from_integer(coeff));
        }
        acc
    }

    /// Relation matrix for H1 of the link over the generators
    /// (k, g_1, ..., g_n): one row a_i g_i + b_i k = 0 per divisor, then one
    /// row k*B_j - sum_i g_i (D_i)_j = 0 per basis coordinate j.
    ///
    /// The coordinate rows evaluate the relations against the dual basis of
    /// H_2. With a unimodular pairing the dual basis is realized inside H^2
    /// by the inverse Gram matrix, and the cap products collapse to plain
    /// coordinates; the cokernel is independent of this choice of H_2 basis
    /// because any two differ by a unimodular transformation of the rows.
    /// Non-unimodular lattices are rejected: without duality the cap
    /// products are not determined by the Gram form.
    pub fn h1_presentation(&self) -> Result<IntMatrix, SeifertError> {
        if !self.lattice.is_unimodular() {
            return Err(SeifertError::NonUnimodularLattice);
        }
        let n = self.divisors.len();
        let rank = self.lattice.rank();
        let mut m = IntMatrix::zeros(n + rank, n + 1);
        for (i, d) in self.divisors.iter().enumerate() {
            m[(i, 0)] = d.twist.clone();
            m[(i, 1 + i)] = d.multiplicity.clone();
        }
        let b_coords = self
            .background
            .integral_coords()
            .map_err(|_| SeifertError::NonIntegralBackground)?;
        let divisor_coords: Vec<Vec<BigInt>> = self
            .divisors
            .iter()
            .enumerate()
            .map(|(index, d)| {
                d.class
                    .integral_coords()
                    .map_err(|_| SeifertError::NonIntegralDivisor { index })
            })
            .collect::<Result<_, _>>()?;
        for j in 0..rank {
            m[(n + j, 0)] = b_coords[j].clone();
            for (i, coords) in divisor_coords.iter().enumerate() {
                m[(n + j, 1 + i)] = -coords[j].clone();
            }
        }
        Ok(m)
    }

    /// H1 of the link in invariant-factor form.
    pub fn h1(&self) -> Result<FinAbGroup, SeifertError> {
        let presentation = self.h1_presentation()?;
        let generators = self.divisors.len() + 1;
        Ok(cokernel_invariants(&presentation, generators))
    }

    /// Whether a * c1(L) is a primitive integral class (content gcd 1).
    /// The zero class counts as divisible.
    pub fn chern_not_divisible(&self) -> bool {
        let coords = self
            .integral_chern_class()
            .integral_coords()
            .expect("integral Chern class is integral by construction");
        gcd_content(&coords).is_one()
    }

    pub fn multiplicities_all_odd(&self) -> bool {
        let two = BigInt::from(2);
        self.divisors
            .iter()
            .all(|d| (&d.multiplicity % &two).is_one())
    }

    /// The w2 criterion: all multiplicities odd, and the canonical class is
    /// congruent to a * c1(L) mod 2. The canonical class must be integral;
    /// it represents w2 of the base because w2 is the mod-2 reduction of c1.
    pub fn w2_vanishes(&self, canonical: &DivisorClass) -> Result<W2Report, SeifertError> {
        let k = canonical
            .integral_coords()
            .map_err(|_| SeifertError::NonIntegralCanonical)?;
        let ic = self
            .integral_chern_class()
            .integral_coords()
            .expect("integral Chern class is integral by construction");
        if canonical.lattice() != &self.lattice {
            return Err(LatticeError::LatticeMismatch.into());
        }
        let parity_matches = k
            .iter()
            .zip(&ic)
            .all(|(x, y)| ((x - y) % BigInt::from(2)).is_zero());
        Ok(W2Report {
            multiplicities_odd: self.multiplicities_all_odd(),
            parity_matches,
        })
    }

    /// rank H^3(L) = rank H^2(X) - 1, valid only when H1(L) is finite.
    pub fn h3_rank(&self) -> Result<usize, SeifertError> {
        let h1 = self.h1()?;
        if !h1.is_finite() {
            return Err(SeifertError::InfiniteH1 {
                free_rank: h1.free_rank(),
            });
        }
        Ok(self.lattice.rank() - 1)
    }

    /// Multiplicity of the Seifert fiber over a point lying on exactly the
    /// indexed divisors: the product of their a_i.
    pub fn fiber_multiplicity(&self, incident: &BTreeSet<usize>) -> BigInt {
        incident
            .iter()
            .map(|&i| &self.divisors[i].multiplicity)
            .product()
    }

    /// Runs every topological check and assembles the classification.
    /// Hypothesis failures are recorded in the report, never thrown; the
    /// only error is a lattice for which the H1 presentation is undefined.
    pub fn classify(&self) -> Result<ClassificationReport, SeifertError> {
        let h1 = self.h1()?;
        let orbit_lcm = self.orbit_lcm();
        let chern = self.chern_class();
        let integral_chern = self.integral_chern_class();
        let not_divisible = self.chern_not_divisible();
        let classes: Vec<DivisorClass> =
            self.divisors.iter().map(|d| d.class.clone()).collect();
        let basis_ok = is_part_of_basis(&self.lattice, &classes)?;
        let w2 = self.w2_vanishes(&self.canonical)?;
        let h3_rank = if h1.is_finite() {
            Some(self.lattice.rank() - 1)
        } else {
            None
        };
        let simply_connected = h1.is_trivial()
            && basis_ok
            && not_divisible
            && self.flags.pi1_complement_abelian;
        let diffeo_type = (simply_connected
            && w2.vanishes()
            && self.flags.divisors_rational_curves)
            .then(|| DiffeoType {
                summands: self.lattice.rank() - 1,
            });
        Ok(ClassificationReport {
            h1,
            orbit_lcm,
            chern,
            integral_chern,
            not_divisible,
            basis_ok,
            w2,
            h3_rank,
            simply_connected,
            diffeo_type,
            flags: self.flags,
        })
    }
}

/// The two halves of the w2 criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct W2Report {
    pub multiplicities_odd: bool,
    pub parity_matches: bool,
}

impl W2Report {
    pub fn vanishes(&self) -> bool {
        self.multiplicities_odd && self.parity_matches
    }
}

/// m#(S^2 x S^3), with the empty connected sum printed as S^5.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffeoType {
    pub summands: usize,
}

impl fmt::Display for DiffeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands == 0 {
            write!(f, "S^5")
        } else {
            write!(f, "{}#(S^2 x S^3)", self.summands)
        }
    }
}

/// Everything the topological pipeline establishes about the link.
/// `diffeo_type` is present only when every classification hypothesis is
/// verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub h1: FinAbGroup,
    pub orbit_lcm: BigInt,
    pub chern: DivisorClass,
    pub integral_chern: DivisorClass,
    pub not_divisible: bool,
    pub basis_ok: bool,
    pub w2: W2Report,
    pub h3_rank: Option<usize>,
    pub simply_connected: bool,
    pub diffeo_type: Option<DiffeoType>,
    pub flags: SeifertFlags,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::BlowupLattice;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// The k = 6 family: blowup at 5 points, (3,1) on C1', (5,1) on C2',
    /// trivial background.
    fn family_k6() -> (BlowupLattice, SeifertData) {
        family(6, 3, 5)
    }

    fn family(k: usize, m1: i64, m2: i64) -> (BlowupLattice, SeifertData) {
        let bl = BlowupLattice::new(k - 1);
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
        )
        .unwrap();
        (bl, sd)
    }

    #[test]
    fn orbit_lcm_examples() {
        let (_, sd) = family_k6();
        assert_eq!(sd.orbit_lcm(), BigInt::from(15));

        let bl = BlowupLattice::new(0);
        let empty = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            bl.h2(),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert_eq!(empty.orbit_lcm(), BigInt::one());

        let (_, sd357) = family(8, 3, 5);
        let mut divisors = sd357.divisors().to_vec();
        let bl8 = BlowupLattice::new(7);
        divisors.push(MarkedDivisor {
            class: bl8.exceptional(1),
            multiplicity: BigInt::from(7),
            twist: BigInt::one(),
        });
        let sd3 = SeifertData::new(
            Arc::clone(bl8.lattice()),
            divisors,
            DivisorClass::zero(bl8.lattice()),
            bl8.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert_eq!(sd3.orbit_lcm(), BigInt::from(105));
    }

    #[test]
    fn chern_class_of_family() {
        let (bl, sd) = family_k6();
        let c1 = sd.chern_class();
        let mut expected = vec![rat(2, 5), rat(8, 15)];
        expected.extend(std::iter::repeat(rat(-1, 5)).take(5));
        assert_eq!(c1.coords(), &expected[..]);

        // c1 = -(K + (1 - 1/3) C1' + (1 - 1/5) C2')
        let k = bl.canonical_class();
        let rhs = -&(&(&k + &bl.c1_prime().scale(&rat(2, 3))) + &bl.c2_prime().scale(&rat(4, 5)));
        assert_eq!(c1, rhs);
    }

    #[test]
    fn chern_class_no_divisors_is_background() {
        let bl = BlowupLattice::new(0);
        let sd = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            bl.h1(),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert_eq!(sd.chern_class(), bl.h1());
        assert_eq!(sd.integral_chern_class(), bl.h1());
    }

    #[test]
    fn integral_chern_class_of_family() {
        let (_, sd) = family_k6();
        let coords = sd.integral_chern_class().integral_coords().unwrap();
        let expected: Vec<BigInt> = [6, 8, -3, -3, -3, -3, -3]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(coords, expected);
        // equals lcm * chern exactly
        assert_eq!(
            sd.integral_chern_class(),
            sd.chern_class().scale(&rat(15, 1))
        );
    }

    #[test]
    fn integral_chern_single_unit_divisor() {
        // (2,1) on one divisor, trivial background: 2 * (1/2) [D] = [D]
        let bl = BlowupLattice::new(1);
        let sd = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![MarkedDivisor {
                class: bl.exceptional(1),
                multiplicity: BigInt::from(2),
                twist: BigInt::one(),
            }],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert_eq!(sd.integral_chern_class(), bl.exceptional(1));
    }

    #[test]
    fn h1_presentation_rows_of_family() {
        let (_, sd) = family_k6();
        let m = sd.h1_presentation().unwrap();
        assert_eq!((m.rows(), m.cols()), (9, 3));
        let row = |i: usize| -> Vec<i64> {
            m.row(i)
                .iter()
                .map(|x| i64::try_from(x).unwrap())
                .collect()
        };
        // divisor relations: 3 g1 + k = 0, 5 g2 + k = 0
        assert_eq!(row(0), vec![1, 3, 0]);
        assert_eq!(row(1), vec![1, 0, 5]);
        // dual to h1: -2 g2 = 0; dual to h2: -g1 - g2 = 0; dual to e_i: g2 = 0
        assert_eq!(row(2), vec![0, 0, -2]);
        assert_eq!(row(3), vec![0, -1, -1]);
        for i in 4..9 {
            assert_eq!(row(i), vec![0, 0, 1]);
        }
    }

    #[test]
    fn h1_of_family_is_trivial() {
        let (_, sd) = family_k6();
        assert!(sd.h1().unwrap().is_trivial());
    }

    #[test]
    fn h1_no_divisors() {
        let bl = BlowupLattice::new(0);
        // B = 0: presentation is the zero matrix over the single generator k
        let sd0 = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        let m = sd0.h1_presentation().unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert!(m.row(0)[0].is_zero() && m.row(1)[0].is_zero());
        let h1 = sd0.h1().unwrap();
        assert_eq!(h1.free_rank(), 1);
        assert!(h1.torsion().is_empty());

        // B = h2: the relation k * (B . eta) = 0 forces k = 0
        let sd1 = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            bl.h2(),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert!(sd1.h1().unwrap().is_trivial());
        assert_eq!(sd1.h3_rank().unwrap(), 1);
    }

    #[test]
    fn h1_rejects_non_unimodular_lattice() {
        let gram = IntMatrix::from_i64_rows(&[&[2]]);
        let lat = Arc::new(IntersectionLattice::new(vec!["x".into()], gram).unwrap());
        let sd = SeifertData::new(
            Arc::clone(&lat),
            vec![],
            DivisorClass::zero(&lat),
            DivisorClass::zero(&lat),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert!(matches!(
            sd.h1(),
            Err(SeifertError::NonUnimodularLattice)
        ));
    }

    #[test]
    fn divisibility_examples() {
        let (_, sd) = family_k6();
        assert!(sd.chern_not_divisible());

        let bl = BlowupLattice::new(0);
        let double = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            bl.h1().scale(&rat(2, 1)),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert!(!double.chern_not_divisible());

        let zero = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert!(!zero.chern_not_divisible());
    }

    #[test]
    fn w2_examples() {
        let (bl, sd) = family_k6();
        let w2 = sd.w2_vanishes(&bl.canonical_class()).unwrap();
        assert!(w2.multiplicities_odd && w2.parity_matches && w2.vanishes());

        // an even multiplicity fails condition (1)
        let (bl2, sd2) = family(6, 2, 5);
        let w2 = sd2.w2_vanishes(&bl2.canonical_class()).unwrap();
        assert!(!w2.multiplicities_odd && !w2.vanishes());

        // shifting B by h1 shifts a*c1 by 15*h1, breaking the parity
        let shifted = SeifertData::new(
            Arc::clone(bl.lattice()),
            sd.divisors().to_vec(),
            bl.h1(),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        let w2 = shifted.w2_vanishes(&bl.canonical_class()).unwrap();
        assert!(w2.multiplicities_odd && !w2.parity_matches && !w2.vanishes());
    }

    #[test]
    fn h3_rank_of_family() {
        let (_, sd) = family_k6();
        assert_eq!(sd.h3_rank().unwrap(), 6);

        let bl = BlowupLattice::new(0);
        let free = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        )
        .unwrap();
        assert!(matches!(
            free.h3_rank(),
            Err(SeifertError::InfiniteH1 { free_rank: 1 })
        ));
    }

    #[test]
    fn classify_family() {
        let (_, sd) = family_k6();
        let report = sd.classify().unwrap();
        assert!(report.h1.is_trivial());
        assert!(report.not_divisible && report.basis_ok && report.w2.vanishes());
        assert!(report.simply_connected);
        assert_eq!(report.h3_rank, Some(6));
        assert_eq!(report.diffeo_type.unwrap().to_string(), "6#(S^2 x S^3)");
    }

    #[test]
    fn classify_rank_one_gives_s5() {
        // multiplicity-3 fiber along a degree-1 class on a rank-1 lattice;
        // the link satisfies every hypothesis and is the 5-sphere
        let gram = IntMatrix::from_i64_rows(&[&[1]]);
        let lat = Arc::new(IntersectionLattice::new(vec!["h".into()], gram).unwrap());
        let h = DivisorClass::basis(&lat, 0);
        let sd = SeifertData::new(
            Arc::clone(&lat),
            vec![MarkedDivisor {
                class: h.clone(),
                multiplicity: BigInt::from(3),
                twist: BigInt::one(),
            }],
            DivisorClass::zero(&lat),
            h.scale(&rat(-3, 1)),
            SeifertFlags::all_true(),
        )
        .unwrap();
        let report = sd.classify().unwrap();
        assert!(report.h1.is_trivial());
        assert_eq!(report.diffeo_type.unwrap().to_string(), "S^5");
    }

    #[test]
    fn classify_even_multiplicity_blocks_diffeo_type() {
        let (_, sd) = family(6, 2, 5);
        let report = sd.classify().unwrap();
        assert!(!report.w2.vanishes());
        assert!(report.diffeo_type.is_none());
    }

    #[test]
    fn fiber_multiplicity_examples() {
        let (_, sd) = family_k6();
        assert_eq!(sd.fiber_multiplicity(&BTreeSet::new()), BigInt::one());
        assert_eq!(
            sd.fiber_multiplicity(&BTreeSet::from([0])),
            BigInt::from(3)
        );
        assert_eq!(
            sd.fiber_multiplicity(&BTreeSet::from([0, 1])),
            BigInt::from(15)
        );
    }

    #[test]
    fn construction_rejects_bad_orbit_invariants() {
        let bl = BlowupLattice::new(1);
        let make = |a: i64, b: i64| {
            SeifertData::new(
                Arc::clone(bl.lattice()),
                vec![MarkedDivisor {
                    class: bl.exceptional(1),
                    multiplicity: BigInt::from(a),
                    twist: BigInt::from(b),
                }],
                DivisorClass::zero(bl.lattice()),
                bl.canonical_class(),
                SeifertFlags::all_true(),
            )
        };
        assert!(matches!(
            make(3, 4),
            Err(SeifertError::InvalidOrbitInvariants { .. })
        ));
        assert!(matches!(
            make(3, 0),
            Err(SeifertError::InvalidOrbitInvariants { .. })
        ));
        assert!(matches!(
            make(6, 4),
            Err(SeifertError::OrbitInvariantsNotCoprime { .. })
        ));
        assert!(make(1, 1).is_ok());
    }

    #[test]
    fn construction_rejects_common_factor_on_meeting_divisors() {
        // C1' . C2' = 2 > 0, so equal multiplicities are rejected
        let bl = BlowupLattice::new(5);
        let result = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![
                MarkedDivisor {
                    class: bl.c1_prime(),
                    multiplicity: BigInt::from(3),
                    twist: BigInt::one(),
                },
                MarkedDivisor {
                    class: bl.c2_prime(),
                    multiplicity: BigInt::from(3),
                    twist: BigInt::one(),
                },
            ],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        );
        assert!(matches!(
            result,
            Err(SeifertError::MultiplicitiesNotCoprime { i: 0, j: 1, .. })
        ));

        // disjoint exceptional curves may share a multiplicity
        let ok = SeifertData::new(
            Arc::clone(bl.lattice()),
            vec![
                MarkedDivisor {
                    class: bl.exceptional(1),
                    multiplicity: BigInt::from(3),
                    twist: BigInt::one(),
                },
                MarkedDivisor {
                    class: bl.exceptional(2),
                    multiplicity: BigInt::from(3),
                    twist: BigInt::one(),
                },
            ],
            DivisorClass::zero(bl.lattice()),
            bl.canonical_class(),
            SeifertFlags::all_true(),
        );
        assert!(ok.is_ok());
    }
}
