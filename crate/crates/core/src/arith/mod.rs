//! Exact arithmetic over the rationals: places and their normalized absolute
//! values, the product-formula height, sup metrics, and S-integrality.
//!
//! For `x in Q` and a prime `p`, `|x|_p = p^(-ord_p(x))`, so `|p|_p = 1/p`
//! and the product formula `prod_v |x|_v = 1` holds without twists.

pub mod primes;
mod real;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use real::{rational_to_f64_up, RealVector, DEFAULT_PRECISION};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A prime checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if primes::is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A place of Q. There are no complex places, so `r_v = 1` throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Finite(Prime),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }

    /// Local degree factor; always 1 over Q.
    pub fn r_v(self) -> u32 {
        1
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Value of a normalized absolute value. p-adic values are kept as exact
/// powers of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsoluteValue {
    Zero,
    Real(Rational),
    /// `p^exponent`
    PAdic {
        p: u64,
        exponent: i64,
    },
}

impl AbsoluteValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, AbsoluteValue::Zero)
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            AbsoluteValue::Zero => Rational::zero(),
            AbsoluteValue::Real(r) => r.clone(),
            AbsoluteValue::PAdic { p, exponent } => {
                let base = BigInt::from(*p).pow(exponent.unsigned_abs() as u32);
                if *exponent >= 0 {
                    Rational::from_integer(base)
                } else {
                    Rational::new(BigInt::one(), base)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl PartialOrd for AbsoluteValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use AbsoluteValue::*;
        match (self, other) {
            (Zero, Zero) => Some(Ordering::Equal),
            (Zero, _) => Some(Ordering::Less),
            (_, Zero) => Some(Ordering::Greater),
            (PAdic { p: a, exponent: x }, PAdic { p: b, exponent: y }) if a == b => x.partial_cmp(y),
            _ => self.to_rational().partial_cmp(&other.to_rational()),
        }
    }
}

/// Exponent of `p` in a nonzero rational: `ord_p(num) - ord_p(den)`.
pub fn ord_p(x: &Rational, p: u64) -> i64 {
    assert!(!x.is_zero(), "ord_p(0) is infinite");
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    primes::valuation(num, p) as i64 - primes::valuation(den, p) as i64
}

pub fn absolute_value(x: &Rational, v: Place) -> AbsoluteValue {
    if x.is_zero() {
        return AbsoluteValue::Zero;
    }
    match v {
        Place::Archimedean => AbsoluteValue::Real(x.abs()),
        Place::Finite(p) => AbsoluteValue::PAdic {
            p: p.get(),
            exponent: -ord_p(x, p.get()),
        },
    }
}

/// A point of Q^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector {
    coords: Vec<Rational>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "rational vector needs at least one coordinate".into(),
            ));
        }
        Ok(RationalVector { coords })
    }

    /// `(a_1, ..., a_n) / den`, reduced coordinate-wise.
    pub fn from_integers<I: Into<BigInt> + Copy>(numerators: &[I], den: I) -> Result<Self> {
        let den: BigInt = den.into();
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Self::new(
            numerators
                .iter()
                .map(|&a| Rational::new(a.into(), den.clone()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Common-denominator form `(a_1, ..., a_n) / b` with `b >= 1` and
    /// `gcd(a_1, ..., a_n, b) = 1`.
    pub fn reduced(&self) -> (Vec<BigInt>, BigUint) {
        let b = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coords.iter().map(|c| c.numer() * (&b / c.denom())).collect();
        (nums, b.magnitude().clone())
    }

    fn check_dim(&self, other: &RationalVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Height of a rational point; a positive integer over Q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeightValue(BigUint);

impl HeightValue {
    pub fn new(value: BigUint) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::InvalidArgument("height must be >= 1".into()));
        }
        Ok(HeightValue(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for HeightValue {
    fn from(h: u64) -> Self {
        assert!(h >= 1, "height must be >= 1");
        HeightValue(BigUint::from(h))
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `H(x) = prod_v max_i(1, |x_i|_v)`, evaluated place by place.
///
/// Only the archimedean place and the primes dividing some coordinate
/// denominator contribute a factor other than 1.
pub fn height(x: &RationalVector) -> HeightValue {
    let one = Rational::one();
    let arch = x
        .coords
        .iter()
        .map(|c| c.abs())
        .fold(one.clone(), |m, c| if c > m { c } else { m });

    let lcm_den = x.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut product = arch;
    for (p, _) in primes::factorize(lcm_den.magnitude()) {
        let p64 = p.to_u64().expect("denominator prime fits in u64");
        let place = Place::Finite(Prime(p64));
        let local = x.coords.iter().map(|c| absolute_value(c, place)).fold(
            AbsoluteValue::PAdic { p: p64, exponent: 0 },
            |m, a| {
                if a > m {
                    a
                } else {
                    m
                }
            },
        );
        product *= local.to_rational();
    }
    debug_assert!(product.is_integer());
    HeightValue(product.to_integer().magnitude().clone())
}

/// `max(b, max_i |a_i|)` for the reduced form `(a_1, ..., a_n) / b`.
pub fn height_closed_form(x: &RationalVector) -> HeightValue {
    let (nums, b) = x.reduced();
    let top = nums.iter().map(|a| a.magnitude().clone()).max().unwrap_or_default();
    HeightValue(top.max(b))
}

/// `max_i |x_i - y_i|_v`, exact at every place.
pub fn sup_distance(x: &RationalVector, y: &RationalVector, v: Place) -> Result<AbsoluteValue> {
    x.check_dim(y)?;
    let mut best = AbsoluteValue::Zero;
    for (a, b) in x.coords.iter().zip(&y.coords) {
        let d = absolute_value(&(a - b), v);
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// The set S of places allowed in denominators, with the finite subset
/// `S' ⊆ S` of places where approximation happens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceDescriptor {
    Finite(BTreeSet<Place>),
    /// Every place except the listed primes.
    CofinitePrimes {
        excluded: BTreeSet<Prime>,
    },
}

impl PlaceDescriptor {
    pub fn contains(&self, v: Place) -> bool {
        match (self, v) {
            (PlaceDescriptor::Finite(set), v) => set.contains(&v),
            (PlaceDescriptor::CofinitePrimes { .. }, Place::Archimedean) => true,
            (PlaceDescriptor::CofinitePrimes { excluded }, Place::Finite(p)) => !excluded.contains(&p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSet {
    s_prime: BTreeSet<Place>,
    s: PlaceDescriptor,
}

impl PlaceSet {
    pub fn new(s_prime: BTreeSet<Place>, s: PlaceDescriptor) -> Result<Self> {
        if let Some(v) = s_prime.iter().find(|&&v| !s.contains(v)) {
            return Err(Error::InvalidArgument(format!("place {v} is in S' but not in S")));
        }
        Ok(PlaceSet { s_prime, s })
    }

    /// `S = {inf, p}`, `S' = {inf}`: approximation at the real place by
    /// points with denominators a power of `p`.
    pub fn single_prime(p: Prime) -> Self {
        PlaceSet {
            s_prime: [Place::Archimedean].into_iter().collect(),
            s: PlaceDescriptor::Finite([Place::Archimedean, Place::Finite(p)].into_iter().collect()),
        }
    }

    pub fn s_prime(&self) -> &BTreeSet<Place> {
        &self.s_prime
    }

    pub fn s(&self) -> &PlaceDescriptor {
        &self.s
    }
}

/// True iff every prime dividing the reduced denominator lies in S.
pub fn is_s_integral(x: &RationalVector, ps: &PlaceSet) -> bool {
    let (_, b) = x.reduced();
    match &ps.s {
        PlaceDescriptor::Finite(set) => {
            let mut rest = b;
            for v in set {
                if let Place::Finite(p) = v {
                    let p = BigUint::from(p.get());
                    loop {
                        let (q, r) = rest.div_rem(&p);
                        if !r.is_zero() {
                            break;
                        }
                        rest = q;
                    }
                }
            }
            rest.is_one()
        }
        PlaceDescriptor::CofinitePrimes { excluded } => excluded.iter().all(|p| !(&b % p.get()).is_zero()),
    }
}

/// Product of `|x|_v` over the archimedean place and every prime dividing
/// numerator or denominator. Equals 1 for nonzero `x`.
pub fn product_over_places(x: &Rational) -> Rational {
    assert!(!x.is_zero());
    let mut support = primes::factorize(x.numer().magnitude());
    support.extend(primes::factorize(x.denom().magnitude()));
    let mut product = absolute_value(x, Place::Archimedean).to_rational();
    let mut seen = BTreeSet::new();
    for (p, _) in support {
        let p = p.to_u64().expect("prime fits in u64");
        if seen.insert(p) {
            product *= absolute_value(x, Place::Finite(Prime(p))).to_rational();
        }
    }
    product
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn vecq(c: &[(i64, i64)]) -> RationalVector {
        RationalVector::new(c.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn absolute_value_examples() {
        for v in [Place::Archimedean, Place::prime(2).unwrap(), Place::prime(7).unwrap()] {
            assert_eq!(absolute_value(&q(1, 1), v).to_rational(), q(1, 1));
        }
        let five = Place::prime(5).unwrap();
        assert_eq!(
            absolute_value(&q(50, 1), five),
            AbsoluteValue::PAdic { p: 5, exponent: -2 }
        );
        assert_eq!(absolute_value(&q(50, 1), five).to_rational(), q(1, 25));
        let two = Place::prime(2).unwrap();
        assert_eq!(absolute_value(&q(3, 4), two).to_rational(), q(4, 1));
        assert!(absolute_value(&q(0, 1), two).is_zero());
    }

    #[test]
    fn place_rejects_composites() {
        assert!(matches!(Place::prime(4), Err(Error::NotPrime(4))));
        assert!(Place::prime(1).is_err());
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&vecq(&[(1, 1), (0, 1), (0, 1)])), HeightValue::from(1));
        assert_eq!(height(&vecq(&[(3, 5), (4, 5), (0, 1)])), HeightValue::from(5));
        let x = vecq(&[(7, 4), (1, 2)]);
        assert_eq!(height(&x), HeightValue::from(7));
        assert_eq!(height_closed_form(&x), HeightValue::from(7));
    }

    #[test]
    fn sup_distance_examples() {
        let x = vecq(&[(3, 5), (4, 5), (0, 1)]);
        let y = vecq(&[(0, 1), (1, 1), (0, 1)]);
        assert!(sup_distance(&x, &x, Place::Archimedean).unwrap().is_zero());
        assert!(sup_distance(&x, &x, Place::prime(3).unwrap()).unwrap().is_zero());
        assert_eq!(sup_distance(&x, &y, Place::Archimedean).unwrap().to_rational(), q(3, 5));
        let a = vecq(&[(1, 5), (0, 1)]);
        let b = vecq(&[(0, 1), (0, 1)]);
        assert_eq!(
            sup_distance(&a, &b, Place::prime(5).unwrap()).unwrap().to_rational(),
            q(5, 1)
        );
        let short = vecq(&[(0, 1)]);
        assert!(matches!(
            sup_distance(&a, &short, Place::Archimedean),
            Err(Error::DimensionMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn s_integrality_examples() {
        let ps = PlaceSet::single_prime(Prime::new(5).unwrap());
        assert!(is_s_integral(&vecq(&[(1, 1), (0, 1), (0, 1)]), &ps));
        assert!(is_s_integral(&vecq(&[(3, 5), (4, 5), (0, 1)]), &ps));
        assert!(!is_s_integral(&vecq(&[(1, 3), (0, 1), (0, 1)]), &ps));

        let cofinite = PlaceSet::new(
            [Place::Archimedean].into_iter().collect(),
            PlaceDescriptor::CofinitePrimes {
                excluded: [Prime::new(3).unwrap()].into_iter().collect(),
            },
        )
        .unwrap();
        assert!(is_s_integral(&vecq(&[(1, 10)]), &cofinite));
        assert!(!is_s_integral(&vecq(&[(1, 6)]), &cofinite));
    }

    #[test]
    fn place_set_requires_s_prime_in_s() {
        let five = Place::prime(5).unwrap();
        let err = PlaceSet::new(
            [five].into_iter().collect(),
            PlaceDescriptor::Finite([Place::Archimedean].into_iter().collect()),
        );
        assert!(err.is_err());
    }

    #[test]
    fn reduced_form_is_primitive() {
        let x = vecq(&[(1, 6), (1, 4), (0, 1)]);
        let (nums, b) = x.reduced();
        assert_eq!(b, BigUint::from(12u32));
        assert_eq!(nums, vec![BigInt::from(2), BigInt::from(3), BigInt::from(0)]);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn product_formula(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            prop_assume!(n != 0);
            prop_assert_eq!(product_over_places(&q(n, d)), Rational::one());
        }

        #[test]
        fn ultrametric(x in proptest::collection::vec(arb_rational(), 3),
                       y in proptest::collection::vec(arb_rational(), 3),
                       z in proptest::collection::vec(arb_rational(), 3),
                       p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let (x, y, z) = (RationalVector::new(x).unwrap(), RationalVector::new(y).unwrap(), RationalVector::new(z).unwrap());
            let v = Place::prime(p).unwrap();
            let xz = sup_distance(&x, &z, v).unwrap();
            let xy = sup_distance(&x, &y, v).unwrap();
            let yz = sup_distance(&y, &z, v).unwrap();
            let bound = if xy > yz { xy } else { yz };
            prop_assert!(xz <= bound);
        }

        #[test]
        fn height_invariant_under_signed_permutation(c in proptest::collection::vec(arb_rational(), 4),
                                                   rot in 0usize..4, flips in 0u8..16) {
            let x = RationalVector::new(c.clone()).unwrap();
            let mut moved = c;
            moved.rotate_left(rot);
            for (i, m) in moved.iter_mut().enumerate() {
                if flips >> i & 1 == 1 { *m = -m.clone(); }
            }
            let y = RationalVector::new(moved).unwrap();
            prop_assert_eq!(height(&x), height(&y));
            prop_assert_eq!(height(&x), height_closed_form(&x));
        }
    }
}
