//! The analytic existence checklist made exact.
//!
//! The metric existence criterion reduces, on the blown-up quadric, to an
//! ampleness inequality plus a finite suite of strict linear inequalities
//! that certify the klt property of every competitor divisor. The true
//! competitor is unknown, so each inequality is maximized exactly over the
//! whole admissible coefficient box; the argument is linear in those
//! coefficients, hence worst-casing them is sound. Symmetric point
//! configurations carry the involution that upgrades "klt away from one
//! point" to "klt", and are validated exactly over Q(i).

use crate::gaussian::{GaussianRational, ProjectiveValue};
use crate::linalg::{max_affine_over_box, RatBox};
use crate::picard::{positivity_report, Positivity};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KltError {
    #[error("the inequality suite requires k' >= 5, got k' = {k_prime}")]
    KPrimeTooSmall { k_prime: usize },
    #[error("bound b{which} must be nonnegative, got {value}")]
    NegativeBound { which: usize, value: String },
    #[error("multiplicity m{which} must be at least 2, got {value}")]
    MultiplicityTooSmall { which: usize, value: u64 },
    #[error("threshold dimension must be at least 1, got {n}")]
    InvalidDimension { n: u64 },
    #[error("threshold requires epsilon > 0, got {value}")]
    InvalidEpsilon { value: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("a point configuration needs k' >= 1, got k' = {k_prime}")]
    KPrimeTooSmall { k_prime: usize },
    #[error("k' = {k_prime} needs exactly {expected} c-values, got {got}")]
    WrongCount {
        k_prime: usize,
        expected: usize,
        got: usize,
    },
    #[error("c[{index}] = {value} must lie in the open interval (0, 1)")]
    OutOfRange { index: usize, value: String },
    #[error("c-values must be strictly increasing: c[{index}] = {value} does not exceed its predecessor")]
    NotStrictlyIncreasing { index: usize, value: String },
    #[error("points {i} and {j} lie on the same fiber of the second projection (coordinate {value})")]
    FiberCollision { i: usize, j: usize, value: String },
    #[error("point {index} does not lie on the curve C2 minus C1")]
    NotOnCurve { index: usize },
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// (n + epsilon) / (n + 1): the coefficient multiplying a competitor divisor
/// in the klt test. The surface case with epsilon = 1/4 gives 3/4.
pub fn nadel_threshold(n: u64, epsilon: &BigRational) -> Result<BigRational, KltError> {
    if n < 1 {
        return Err(KltError::InvalidDimension { n });
    }
    if epsilon <= &BigRational::zero() {
        return Err(KltError::InvalidEpsilon {
            value: epsilon.to_string(),
        });
    }
    let n = BigRational::from_integer(BigInt::from(n));
    Ok((&n + epsilon) / (n + BigRational::one()))
}

/// One inequality of the klt suite: an affine form in (d1, d2) maximized
/// over the box [0, b1] x [0, b2], required to stay strictly below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KltRecord {
    pub label: &'static str,
    pub worst_case: BigRational,
    pub bound: BigRational,
    pub pass: bool,
    /// A vertex of the box attaining the worst case.
    pub vertex: Vec<BigRational>,
}

/// Outcome of the klt inequality suite at parameters (k', b1, b2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KltReport {
    pub k_prime: usize,
    pub b1: BigRational,
    pub b2: BigRational,
    pub records: Vec<KltRecord>,
}

impl KltReport {
    pub fn passes(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn record(&self, label: &str) -> Option<&KltRecord> {
        self.records.iter().find(|r| r.label == label)
    }
}

/// The affine forms of the suite as (label, constant, coeffs, bound), in
/// terms of the unknown coefficients (d1, d2) of C1', C2' inside a
/// competitor divisor of class b1*C1' + b2*C2'.
fn suite_forms(
    k_prime: usize,
    b1: &BigRational,
    b2: &BigRational,
) -> Vec<(&'static str, BigRational, [BigRational; 2], BigRational)> {
    let two = rat(2, 1);
    let half = rat(1, 2);
    let one = rat(1, 1);
    let km4 = BigRational::from_integer(BigInt::from(k_prime as i64 - 4));
    let km5 = BigRational::from_integer(BigInt::from(k_prime as i64 - 5));
    vec![
        // coefficient of C_i' in the boundary: 1/2 + d_i < 1
        (
            "coefficient_on_c1",
            half.clone(),
            [one.clone(), BigRational::zero()],
            one.clone(),
        ),
        (
            "coefficient_on_c2",
            half,
            [BigRational::zero(), one.clone()],
            one.clone(),
        ),
        // deg D'|_{C1'} = 2(b2 - d2) < 1
        (
            "restriction_to_c1",
            &two * b2,
            [BigRational::zero(), -two.clone()],
            one.clone(),
        ),
        // deg D'|_{C2'} = 2(b1 - d1) - (k'-4)(b2 - d2) < 1
        (
            "restriction_to_c2",
            &two * b1 - &km4 * b2,
            [-two.clone(), km4.clone()],
            one.clone(),
        ),
        // along an exceptional curve: 2(b1 - d1) - (k'-5)(b2 - d2) < 1
        (
            "exceptional_curves",
            &two * b1 - &km5 * b2,
            [-two.clone(), km5],
            one,
        ),
        // total degree restricted to C1': 2(1/2 + d2) + 2(b2 - d2) < 2
        (
            "total_degree_on_c1",
            rat(1, 1) + &two * b2,
            [BigRational::zero(), BigRational::zero()],
            two.clone(),
        ),
        // total degree restricted to C2': 2(1/2 + d1) + deg D'|_{C2'} < 2
        (
            "total_degree_on_c2",
            rat(1, 1) + &two * b1 - &km4 * b2,
            [BigRational::zero(), km4],
            two,
        ),
    ]
}

/// Verifies the klt inequality suite in worst case over all admissible
/// (d1, d2) in [0, b1] x [0, b2]. Every inequality is strict; each record
/// stores the exact vertex maximum and an attaining vertex.
pub fn klt_box_check(
    k_prime: usize,
    b1: &BigRational,
    b2: &BigRational,
) -> Result<KltReport, KltError> {
    if k_prime < 5 {
        return Err(KltError::KPrimeTooSmall { k_prime });
    }
    for (which, b) in [(1usize, b1), (2, b2)] {
        if b < &BigRational::zero() {
            return Err(KltError::NegativeBound {
                which,
                value: b.to_string(),
            });
        }
    }
    let bounds = RatBox::new(vec![
        (BigRational::zero(), b1.clone()),
        (BigRational::zero(), b2.clone()),
    ])
    .expect("0 <= b was just checked");
    let records = suite_forms(k_prime, b1, b2)
        .into_iter()
        .map(|(label, constant, coeffs, bound)| {
            let max = max_affine_over_box(&constant, &coeffs, &bounds)
                .expect("suite forms are two-dimensional");
            KltRecord {
                label,
                pass: max.value < bound,
                worst_case: max.value,
                bound,
                vertex: max.vertex,
            }
        })
        .collect();
    Ok(KltReport {
        k_prime,
        b1: b1.clone(),
        b2: b2.clone(),
        records,
    })
}

/// The Kahler-Einstein existence certificate for the surface obtained from
/// a symmetric configuration of k' points, with cone multiplicities
/// (m1, m2) along (C1', C2').
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeReport {
    pub k_prime: usize,
    pub m1: u64,
    pub m2: u64,
    pub b1: BigRational,
    pub b2: BigRational,
    pub threshold: BigRational,
    pub positivity: Positivity,
    pub ample: bool,
    pub klt: KltReport,
    pub pass: bool,
}

/// Runs the full existence checklist: ampleness of (1/m1)C1' + (1/m2)C2'
/// and the klt suite at b_i = 1/2 - 1/(4 m_i).
///
/// The distinct-fibers hypothesis behind ampleness is supplied by the point
/// configuration: this report certifies the symmetric surface, and the
/// certifying layer only issues it together with a configuration whose
/// fiber coordinates were validated pairwise distinct.
pub fn ke_certificate(k_prime: usize, m1: u64, m2: u64) -> Result<KeReport, KltError> {
    if k_prime < 5 {
        return Err(KltError::KPrimeTooSmall { k_prime });
    }
    for (which, m) in [(1usize, m1), (2, m2)] {
        if m < 2 {
            return Err(KltError::MultiplicityTooSmall { which, value: m });
        }
    }
    let inv = |m: u64| BigRational::new(BigInt::one(), BigInt::from(m));
    let positivity = positivity_report(k_prime, &inv(m1), &inv(m2), true);
    let ample = positivity == Positivity::Ample;
    let b = |m: u64| rat(1, 2) - BigRational::new(BigInt::one(), BigInt::from(4 * m as i128));
    let b1 = b(m1);
    let b2 = b(m2);
    let threshold = nadel_threshold(2, &rat(1, 4)).expect("surface threshold parameters are valid");
    let klt = klt_box_check(k_prime, &b1, &b2)?;
    let pass = ample && klt.passes();
    Ok(KeReport {
        k_prime,
        m1,
        m2,
        b1,
        b2,
        threshold,
        positivity,
        ample,
        klt,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// A point of P^1 x P^1 in bihomogeneous coordinates ((s : t), (u : v))
/// over Q(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePoint {
    pub s: GaussianRational,
    pub t: GaussianRational,
    pub u: GaussianRational,
    pub v: GaussianRational,
}

impl SurfacePoint {
    /// On the graph curve C2 of the squaring map (s : t) -> (s^2 : t^2),
    /// i.e. s^2 v = t^2 u.
    pub fn lies_on_c2(&self) -> bool {
        let lhs = &(&self.s * &self.s) * &self.v;
        let rhs = &(&self.t * &self.t) * &self.u;
        lhs == rhs
    }

    /// On the fiber C1 = (u = v) of the second projection.
    pub fn lies_on_c1(&self) -> bool {
        self.u == self.v
    }

    /// Second-projection coordinate (u : v); None for a malformed point.
    pub fn pi2(&self) -> Option<ProjectiveValue> {
        ProjectiveValue::from_ratio(&self.u, &self.v)
    }

    /// The involution (s : t, u : v) -> (-t : s, v : u).
    pub fn tau(&self) -> SurfacePoint {
        SurfacePoint {
            s: -&self.t,
            t: self.s.clone(),
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    /// Projective equality: cross products vanish in both factors.
    pub fn proj_eq(&self, other: &SurfacePoint) -> bool {
        let first = &(&self.s * &other.t) - &(&self.t * &other.s);
        let second = &(&self.u * &other.v) - &(&self.v * &other.u);
        first.is_zero() && second.is_zero()
    }
}

/// A validated symmetric configuration of k' points on C2 minus C1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    k_prime: usize,
    parity: Parity,
    c: Vec<BigRational>,
    points: Vec<SurfacePoint>,
    pi2: Vec<ProjectiveValue>,
}

impl PointConfig {
    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn c_values(&self) -> &[BigRational] {
        &self.c
    }

    pub fn points(&self) -> &[SurfacePoint] {
        &self.points
    }

    pub fn pi2_coordinates(&self) -> &[ProjectiveValue] {
        &self.pi2
    }
}

fn check_pairwise_distinct(pi2: &[ProjectiveValue]) -> Result<(), ConfigError> {
    for i in 0..pi2.len() {
        for j in i + 1..pi2.len() {
            if pi2[i] == pi2[j] {
                return Err(ConfigError::FiberCollision {
                    i,
                    j,
                    value: pi2[i].to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Builds the involution-stable configuration from strictly increasing
/// rationals 0 < c_1 < ... < c_m < 1 (m = floor(k'/2)): the point pair
/// ((c : 1), (c^2 : 1)) and ((-1 : c), (1 : c^2)) for each c, plus the fixed
/// point ((i : 1), (-1 : 1)) when k' is odd. Membership in C2 minus C1 and
/// distinctness of the fiber coordinates are verified exactly over Q(i).
pub fn symmetric_configuration(
    k_prime: usize,
    c: &[BigRational],
) -> Result<PointConfig, ConfigError> {
    if k_prime < 1 {
        return Err(ConfigError::KPrimeTooSmall { k_prime });
    }
    let m = k_prime / 2;
    if c.len() != m {
        return Err(ConfigError::WrongCount {
            k_prime,
            expected: m,
            got: c.len(),
        });
    }
    let zero = BigRational::zero();
    let one = BigRational::one();
    for (index, ci) in c.iter().enumerate() {
        if ci <= &zero || ci >= &one {
            return Err(ConfigError::OutOfRange {
                index,
                value: ci.to_string(),
            });
        }
        if index > 0 && c[index - 1] >= *ci {
            return Err(ConfigError::NotStrictlyIncreasing {
                index,
                value: ci.to_string(),
            });
        }
    }

    let g = GaussianRational::from_rational;
    let one_g = GaussianRational::from_int(1);
    let mut points = Vec::with_capacity(k_prime);
    for ci in c {
        let c_sq = ci * ci;
        points.push(SurfacePoint {
            s: g(ci.clone()),
            t: one_g.clone(),
            u: g(c_sq.clone()),
            v: one_g.clone(),
        });
        points.push(SurfacePoint {
            s: GaussianRational::from_int(-1),
            t: g(ci.clone()),
            u: one_g.clone(),
            v: g(c_sq),
        });
    }
    let parity = if k_prime % 2 == 0 {
        Parity::Even
    } else {
        points.push(SurfacePoint {
            s: GaussianRational::i(),
            t: one_g.clone(),
            u: GaussianRational::from_int(-1),
            v: one_g,
        });
        Parity::Odd
    };

    let mut pi2 = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        if !p.lies_on_c2() || p.lies_on_c1() {
            return Err(ConfigError::NotOnCurve { index });
        }
        match p.pi2() {
            Some(coord) => pi2.push(coord),
            None => return Err(ConfigError::NotOnCurve { index }),
        }
    }
    check_pairwise_distinct(&pi2)?;

    Ok(PointConfig {
        k_prime,
        parity,
        c: c.to_vec(),
        points,
        pi2,
    })
}

/// The default choice c_i = i / (m + 1), valid for every m.
pub fn default_symmetric_c(k_prime: usize) -> Vec<BigRational> {
    let m = k_prime / 2;
    (1..=m)
        .map(|i| BigRational::new(BigInt::from(i), BigInt::from(m + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nadel_threshold_values() {
        assert_eq!(nadel_threshold(2, &rat(1, 4)).unwrap(), rat(3, 4));
        assert_eq!(nadel_threshold(1, &rat(1, 2)).unwrap(), rat(3, 4));
        assert!(matches!(
            nadel_threshold(2, &rat(0, 1)),
            Err(KltError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            nadel_threshold(0, &rat(1, 4)),
            Err(KltError::InvalidDimension { .. })
        ));
    }

    #[test]
    fn klt_suite_at_the_flagship_parameters() {
        // k' = 5, b = (5/12, 9/20): the bounds for (m1, m2) = (3, 5)
        let report = klt_box_check(5, &rat(5, 12), &rat(9, 20)).unwrap();
        assert!(report.passes());
        let worst = |label: &str| report.record(label).unwrap().worst_case.clone();
        assert_eq!(worst("coefficient_on_c1"), rat(11, 12));
        assert_eq!(worst("coefficient_on_c2"), rat(19, 20));
        assert_eq!(worst("restriction_to_c1"), rat(9, 10));
        assert_eq!(worst("restriction_to_c2"), rat(5, 6));
        assert_eq!(worst("exceptional_curves"), rat(5, 6));
        assert_eq!(worst("total_degree_on_c1"), rat(19, 10));
        assert_eq!(worst("total_degree_on_c2"), rat(11, 6));
        let r = report.record("restriction_to_c2").unwrap();
        assert_eq!(r.vertex, vec![rat(0, 1), rat(9, 20)]);
    }

    #[test]
    fn klt_suite_fails_at_the_half_boundary() {
        let report = klt_box_check(5, &rat(5, 12), &rat(1, 2)).unwrap();
        assert!(!report.passes());
        // 1/2 + d2 reaches 1 exactly; the strict bound fails
        assert!(!report.record("coefficient_on_c2").unwrap().pass);
    }

    #[test]
    fn klt_suite_requires_five_points() {
        assert!(matches!(
            klt_box_check(4, &rat(1, 4), &rat(1, 4)),
            Err(KltError::KPrimeTooSmall { k_prime: 4 })
        ));
    }

    #[test]
    fn klt_suite_rejects_negative_bounds() {
        assert!(matches!(
            klt_box_check(5, &rat(-1, 4), &rat(1, 4)),
            Err(KltError::NegativeBound { which: 1, .. })
        ));
    }

    #[test]
    fn ke_certificate_flagship() {
        let report = ke_certificate(5, 3, 5).unwrap();
        assert_eq!(report.b1, rat(5, 12));
        assert_eq!(report.b2, rat(9, 20));
        assert_eq!(report.threshold, rat(3, 4));
        assert!(report.ample && report.klt.passes() && report.pass);
    }

    #[test]
    fn ke_certificate_fails_when_not_ample() {
        let report = ke_certificate(7, 3, 4).unwrap();
        assert!(!report.ample);
        assert!(!report.pass);
    }

    #[test]
    fn ke_certificate_minimal_multiplicities() {
        let report = ke_certificate(5, 2, 2).unwrap();
        assert_eq!(report.b1, rat(3, 8));
        assert!(report.pass);
        assert!(matches!(
            ke_certificate(5, 1, 3),
            Err(KltError::MultiplicityTooSmall { which: 1, .. })
        ));
    }

    #[test]
    fn symmetric_configuration_even() {
        let config = symmetric_configuration(4, &[rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(config.parity(), Parity::Even);
        let coords: Vec<String> = config
            .pi2_coordinates()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(coords, vec!["1/9", "9", "1/4", "4"]);
    }

    #[test]
    fn symmetric_configuration_odd_adds_the_fixed_point() {
        let config = symmetric_configuration(5, &[rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(config.parity(), Parity::Odd);
        assert_eq!(config.points().len(), 5);
        let last = config.pi2_coordinates().last().unwrap();
        assert_eq!(last.to_string(), "-1");
    }

    #[test]
    fn symmetric_configuration_validation() {
        assert!(matches!(
            symmetric_configuration(4, &[rat(1, 2), rat(1, 2)]),
            Err(ConfigError::NotStrictlyIncreasing { index: 1, .. })
        ));
        assert!(matches!(
            symmetric_configuration(4, &[rat(0, 1), rat(1, 2)]),
            Err(ConfigError::OutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            symmetric_configuration(4, &[rat(1, 2)]),
            Err(ConfigError::WrongCount { expected: 2, got: 1, .. })
        ));
        assert!(matches!(
            symmetric_configuration(0, &[]),
            Err(ConfigError::KPrimeTooSmall { .. })
        ));
    }

    #[test]
    fn configuration_points_lie_on_the_curve() {
        let config = symmetric_configuration(5, &[rat(1, 3), rat(1, 2)]).unwrap();
        for p in config.points() {
            assert!(p.lies_on_c2());
            assert!(!p.lies_on_c1());
        }
    }

    #[test]
    fn configuration_is_involution_stable() {
        let config = symmetric_configuration(5, &[rat(1, 4), rat(2, 3)]).unwrap();
        for p in config.points() {
            let image = p.tau();
            assert!(
                config.points().iter().any(|q| q.proj_eq(&image)),
                "involution image of {p:?} escapes the configuration"
            );
        }
        // the fiber-coordinate multiset is invariant under x -> 1/x
        let mut inverted: Vec<ProjectiveValue> = config
            .pi2_coordinates()
            .iter()
            .map(|x| x.invert())
            .collect();
        let mut original = config.pi2_coordinates().to_vec();
        original.sort();
        inverted.sort();
        assert_eq!(original, inverted);
    }

    #[test]
    fn fiber_collision_is_detected() {
        let p = ProjectiveValue::Finite(GaussianRational::from_rational(rat(1, 4)));
        let q = ProjectiveValue::Finite(GaussianRational::from_rational(rat(1, 4)));
        let err = check_pairwise_distinct(&[p, q]);
        assert!(matches!(err, Err(ConfigError::FiberCollision { i: 0, j: 1, .. })));
    }

    #[test]
    fn default_c_values_are_valid() {
        for k_prime in 1..=12 {
            let c = default_symmetric_c(k_prime);
            assert!(symmetric_configuration(k_prime, &c).is_ok(), "k' = {k_prime}");
        }
    }
}
