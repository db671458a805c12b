//! The Picard lattice of a blown-up quadric and divisor-class arithmetic.
//!
//! The built-in lattice is H^2 of P^1 x P^1 blown up at k' points: basis
//! h1, h2, e1, ..., ek', hyperbolic pairing on the h's, each e_i of square
//! -1, all cross terms zero. Classes are exact rational vectors in that
//! basis; the pairing and every positivity test below are exact.

use crate::linalg::{determinant, gcd_content, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix must be square of the lattice rank")]
    MalformedGram,
    #[error("gram matrix must be symmetric")]
    AsymmetricGram,
    #[error("number of basis labels must equal the rank")]
    LabelCount,
    #[error("class belongs to a different lattice")]
    LatticeMismatch,
    #[error("class has {got} coordinates, lattice rank is {rank}")]
    CoordinateCount { rank: usize, got: usize },
    #[error("class is not integral: coordinate {index} = {value}")]
    NonIntegralClass { index: usize, value: String },
}

/// A finite-rank integer lattice with a named basis and symmetric pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    rank: usize,
    basis_labels: Vec<String>,
    gram: IntMatrix,
}

impl IntersectionLattice {
    pub fn new(basis_labels: Vec<String>, gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::MalformedGram);
        }
        let rank = gram.rows();
        if basis_labels.len() != rank {
            return Err(LatticeError::LabelCount);
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(LatticeError::AsymmetricGram);
                }
            }
        }
        Ok(IntersectionLattice {
            rank,
            basis_labels,
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_unimodular(&self) -> bool {
        determinant(&self.gram).abs().is_one()
    }
}

/// An exact rational vector in the basis of a fixed lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<IntersectionLattice>,
    coords: Vec<BigRational>,
}

impl DivisorClass {
    pub fn new(
        lattice: &Arc<IntersectionLattice>,
        coords: Vec<BigRational>,
    ) -> Result<Self, LatticeError> {
        if coords.len() != lattice.rank() {
            return Err(LatticeError::CoordinateCount {
                rank: lattice.rank(),
                got: coords.len(),
            });
        }
        Ok(DivisorClass {
            lattice: Arc::clone(lattice),
            coords,
        })
    }

    pub fn from_ints(
        lattice: &Arc<IntersectionLattice>,
        coords: Vec<BigInt>,
    ) -> Result<Self, LatticeError> {
        Self::new(
            lattice,
            coords.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    pub fn zero(lattice: &Arc<IntersectionLattice>) -> Self {
        DivisorClass {
            lattice: Arc::clone(lattice),
            coords: vec![BigRational::zero(); lattice.rank()],
        }
    }

    /// The idx-th basis vector as a class.
    pub fn basis(lattice: &Arc<IntersectionLattice>, idx: usize) -> Self {
        assert!(idx < lattice.rank(), "basis index out of range");
        let mut coords = vec![BigRational::zero(); lattice.rank()];
        coords[idx] = BigRational::one();
        DivisorClass {
            lattice: Arc::clone(lattice),
            coords,
        }
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BigRational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, or the first non-integral offender.
    pub fn integral_coords(&self) -> Result<Vec<BigInt>, LatticeError> {
        self.coords
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(LatticeError::NonIntegralClass {
                        index,
                        value: c.to_string(),
                    })
                }
            })
            .collect()
    }

    /// Intersection pairing x^T * gram * y, exact over the rationals.
    pub fn pairing(&self, other: &DivisorClass) -> Result<BigRational, LatticeError> {
        if self.lattice != other.lattice {
            return Err(LatticeError::LatticeMismatch);
        }
        let gram = self.lattice.gram();
        let mut acc = BigRational::zero();
        for i in 0..self.coords.len() {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..other.coords.len() {
                if gram[(i, j)].is_zero() || other.coords[j].is_zero() {
                    continue;
                }
                acc += &self.coords[i]
                    * &other.coords[j]
                    * BigRational::from_integer(gram[(i, j)].clone());
            }
        }
        Ok(acc)
    }

    /// Self-intersection number.
    pub fn square(&self) -> BigRational {
        self.pairing(self).expect("a class pairs with itself")
    }

    pub fn scale(&self, factor: &BigRational) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.lattice, rhs.lattice, "classes in different lattices");
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.lattice, rhs.lattice, "classes in different lattices");
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&DivisorClass> for &BigRational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// H^2 of P^1 x P^1 blown up at `k_prime` points, with the classes that
/// drive the whole construction: the fiber transform C1', the transformed
/// graph curve C2', the exceptional curves and the canonical class.
#[derive(Clone, Debug)]
pub struct BlowupLattice {
    k_prime: usize,
    lattice: Arc<IntersectionLattice>,
}

impl BlowupLattice {
    pub fn new(k_prime: usize) -> Self {
        let rank = k_prime + 2;
        let mut labels = vec!["h1".to_string(), "h2".to_string()];
        labels.extend((1..=k_prime).map(|i| format!("e{i}")));
        let mut gram = IntMatrix::zeros(rank, rank);
        gram[(0, 1)] = BigInt::one();
        gram[(1, 0)] = BigInt::one();
        for i in 0..k_prime {
            gram[(2 + i, 2 + i)] = -BigInt::one();
        }
        let lattice = IntersectionLattice::new(labels, gram)
            .expect("blowup gram matrix is square and symmetric");
        BlowupLattice {
            k_prime,
            lattice: Arc::new(lattice),
        }
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    /// h1 (fiber class of the first projection).
    pub fn h1(&self) -> DivisorClass {
        DivisorClass::basis(&self.lattice, 0)
    }

    /// h2 (fiber class of the second projection).
    pub fn h2(&self) -> DivisorClass {
        DivisorClass::basis(&self.lattice, 1)
    }

    /// The i-th exceptional class (1-based).
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(
            (1..=self.k_prime).contains(&i),
            "exceptional index out of range"
        );
        DivisorClass::basis(&self.lattice, 1 + i)
    }

    /// [C1'] = h2: the birational transform of a fiber of the second
    /// projection through none of the blown-up points.
    pub fn c1_prime(&self) -> DivisorClass {
        self.h2()
    }

    /// [C2'] = 2h1 + h2 - sum e_i: the transform of the graph curve through
    /// all blown-up points.
    pub fn c2_prime(&self) -> DivisorClass {
        let mut coords = vec![BigRational::zero(); self.rank()];
        coords[0] = BigRational::from_integer(BigInt::from(2));
        coords[1] = BigRational::one();
        for i in 0..self.k_prime {
            coords[2 + i] = -BigRational::one();
        }
        DivisorClass::new(&self.lattice, coords).expect("coordinate count matches rank")
    }

    /// K = -2h1 - 2h2 + sum e_i; equals -[C1'] - [C2'].
    pub fn canonical_class(&self) -> DivisorClass {
        -&(&self.c1_prime() + &self.c2_prime())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

/// Whether integral classes extend to a Z-basis of the lattice: true exactly
/// when the coordinate matrix has full rank with all invariant factors 1,
/// i.e. Z^n -> lattice is a split injection.
pub fn is_part_of_basis(
    lattice: &Arc<IntersectionLattice>,
    classes: &[DivisorClass],
) -> Result<bool, LatticeError> {
    let mut rows = Vec::with_capacity(classes.len());
    for class in classes {
        if class.lattice() != lattice {
            return Err(LatticeError::LatticeMismatch);
        }
        rows.push(class.integral_coords()?);
    }
    if rows.is_empty() {
        return Ok(true);
    }
    let n = rows.len();
    let matrix = IntMatrix::from_rows(rows);
    let factors = smith_normal_form(&matrix).invariant_factors();
    Ok(factors.len() == n && factors.iter().all(|f| f.is_one()))
}

/// Verdict of the positivity test for a1*C1' + a2*C2'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Ample,
    NefBigOnly,
    NotNefBig,
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Positivity::Ample => write!(f, "ample"),
            Positivity::NefBigOnly => write!(f, "nef-big-only"),
            Positivity::NotNefBig => write!(f, "not-nef-big"),
        }
    }
}

/// Positivity of a1*C1' + a2*C2' on the blowup at `k_prime` points.
///
/// Nef and big requires a1 > 0, a2 > 0 and 2*a1 + (4 - k')*a2 > 0 (the
/// intersection with C2'), all strict. Ample additionally needs the
/// distinct-fibers hypothesis: when no two blown-up points share a fiber of
/// the second projection there is no curve contracted by the linear system.
/// This is a test for the two-parameter family only, not a general
/// ample-cone membership test.
pub fn positivity_report(
    k_prime: usize,
    a1: &BigRational,
    a2: &BigRational,
    distinct_fibers: bool,
) -> Positivity {
    let zero = BigRational::zero();
    if a1 <= &zero || a2 <= &zero {
        return Positivity::NotNefBig;
    }
    let degree_on_c2 = BigRational::from_integer(BigInt::from(2)) * a1
        + BigRational::from_integer(BigInt::from(4) - BigInt::from(k_prime)) * a2;
    if degree_on_c2 <= zero {
        return Positivity::NotNefBig;
    }
    if distinct_fibers {
        Positivity::Ample
    } else {
        Positivity::NefBigOnly
    }
}

/// Content gcd of an integral class; 0 for the zero class.
pub fn class_content(class: &DivisorClass) -> Result<BigInt, LatticeError> {
    Ok(gcd_content(&class.integral_coords()?))
}
