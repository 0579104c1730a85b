use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Exact fraction with arbitrary-precision numerator and denominator.
///
/// Always kept in canonical form: positive denominator, coprime parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ExactError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `num/den` for small literals. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The exact value of a finite float (every finite `f64` is a dyadic rational).
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Best rational approximation of `x` with denominator at most `max_den`,
    /// via continued fractions and the final semiconvergent.
    pub fn approximate(x: f64, max_den: u64) -> Option<Self> {
        let exact = Self::from_f64_exact(x)?;
        let max_den = BigInt::from(max_den.max(1));
        if exact.denom() <= &max_den {
            return Some(exact);
        }
        // convergents h/k of the continued fraction of the exact value
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        let mut num = exact.numer().clone();
        let mut den = exact.denom().clone();
        loop {
            let (a, r) = num.div_mod_floor(&den);
            let k_next = &a * &k + &k_prev;
            if k_next > max_den {
                // best semiconvergent that still fits
                let t = (&max_den - &k_prev) / &k;
                let cand_h = &t * &h + &h_prev;
                let cand_k = &t * &k + &k_prev;
                let conv = Rational(BigRational::new(h.clone(), k.clone()));
                if cand_k.is_zero() {
                    return Some(conv);
                }
                let semi = Rational(BigRational::new(cand_h, cand_k));
                let de_conv = (&conv - &exact).abs();
                let de_semi = (&semi - &exact).abs();
                return Some(if de_semi < de_conv { semi } else { conv });
            }
            let h_next = &a * &h + &h_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            if r.is_zero() {
                return Some(Rational(BigRational::new(h, k)));
            }
            num = std::mem::replace(&mut den, r);
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

/// Canonicalizes an integer fraction.
pub fn rat_normalize(num: i64, den: i64) -> Result<Rational, ExactError> {
    Rational::new(num, den)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExactError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_integer(n))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                self.0.$assign_method(rhs.0);
            }
        }
        impl<'a> $assign_trait<&'a Rational> for Rational {
            fn $assign_method(&mut self, rhs: &'a Rational) {
                self.0.$assign_method(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
// Division by zero panics, as with the underlying big rationals; use `recip` for a checked path.
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Dot product of two equal-length rational slices.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += &x.0 * &y.0;
    }
    Rational(acc)
}

/// Least common multiple of the denominators in `v`.
pub fn common_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same direction.
/// Returns all zeros for the zero vector.
pub fn to_primitive_integers(v: &[Rational]) -> Vec<BigInt> {
    let l = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(rat_normalize(2, 4).unwrap().to_string(), "1/2");
        let z = rat_normalize(0, 7).unwrap();
        assert_eq!((z.numer().clone(), z.denom().clone()), (BigInt::zero(), BigInt::one()));
        assert_eq!(rat_normalize(3, -6).unwrap().to_string(), "-1/2");
        assert_eq!(rat_normalize(1, 0), Err(ExactError::ZeroDenominator));
    }

    #[test]
    fn string_form() {
        assert_eq!(Rational::frac(-3, 7).to_string(), "-3/7");
        assert_eq!(Rational::from(5i64).to_string(), "5");
        assert_eq!("-6/14".parse::<Rational>().unwrap(), Rational::frac(-3, 7));
        assert_eq!(" 12 ".parse::<Rational>().unwrap(), Rational::from(12i64));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let js = serde_json::to_string(&Rational::frac(1, 3)).unwrap();
        assert_eq!(js, "\"1/3\"");
        let back: Rational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, Rational::frac(1, 3));
    }

    #[test]
    fn approximation() {
        assert_eq!(Rational::approximate(0.5, 10).unwrap(), Rational::frac(1, 2));
        assert_eq!(Rational::approximate(1.0 / 3.0, 1000).unwrap(), Rational::frac(1, 3));
        assert_eq!(
            Rational::approximate(std::f64::consts::PI, 1000).unwrap(),
            Rational::frac(355, 113)
        );
        let a = Rational::approximate(-0.1234567891234, 1_000_000_000).unwrap();
        assert!((a.to_f64() + 0.1234567891234).abs() < 1e-12);
        assert!(a.denom() <= &BigInt::from(1_000_000_000u64));
    }

    #[test]
    fn primitive_integers() {
        let v = vec![Rational::frac(1, 2), Rational::frac(-3, 4), Rational::zero()];
        let ints = to_primitive_integers(&v);
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::frac(n, d))
    }

    proptest! {
        #[test]
        fn addition_associates(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&a + &(&b + &c), &(&a + &b) + &c);
        }

        #[test]
        fn reciprocal_cancels(a in arb_rational()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(&a * &a.recip().unwrap(), Rational::one());
        }

        #[test]
        fn canonical_after_ops(a in arb_rational(), b in arb_rational()) {
            let c = &a * &b - &a;
            prop_assert!(c.denom() > &BigInt::zero());
            prop_assert!(c.numer().gcd(c.denom()).is_one() || c.is_zero());
            prop_assert_eq!(c.to_string().parse::<Rational>().unwrap(), c);
        }
    }
}
