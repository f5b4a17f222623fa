use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarParseError;

/// An exact field of scalars.
///
/// Implementors are immutable values in canonical form, so structural equality
/// is field equality.
pub trait Field:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Panics on division by zero.
    fn div_ref(&self, rhs: &Self) -> Self {
        self.mul_ref(&rhs.inv().expect("division by zero"))
    }
    fn parse_text(s: &str) -> Result<Self, ScalarParseError>;
    fn to_text(&self) -> String {
        self.to_string()
    }
    /// Cost estimate used to prefer cheap pivots; zero is never a pivot.
    fn height(&self) -> u64;
    /// Short identifier such as `q` or `fp:101`.
    fn descriptor() -> String;
    /// Rescales a row by a nonzero constant toward integral, primitive entries.
    /// Used by fraction-free elimination; the default leaves the row alone.
    fn normalize_row(_row: &mut [Self]) {}
}

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in `i64` are kept inline;
/// everything else falls back to arbitrary precision. The representation is
/// canonical: a value is `Small` whenever it fits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive, numerator never `i64::MIN`.
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational(Repr::Small(0, 1));
        }
        let neg = (num < 0) != (den < 0);
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd_u128(n, d);
        let (n, d) = (n / g, d / g);
        if n <= i64::MAX as u128 && d <= i64::MAX as u128 {
            let n = n as i64;
            return Rational(Repr::Small(if neg { -n } else { n }, d as i64));
        }
        let n = BigInt::from(n);
        let n = if neg { -n } else { n };
        Rational(Repr::Big(Box::new(BigRational::new_raw(n, BigInt::from(d)))))
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with positive denominator.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::new(n, 1)
    }
}

impl FromStr for Rational {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ScalarParseError(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, d)),
            Repr::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.add_ref(&rhs)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.sub_ref(&rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.mul_ref(&rhs)
    }
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from(n)
    }

    fn inv(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Rational::from_i128(*d as i128, *n as i128)),
            Repr::Big(b) => Some(Rational::from_big(b.recip())),
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::from_i128(a + c, b);
            }
            if let Some(n) = (a * d).checked_add(c * b) {
                return Rational::from_i128(n, b * d);
            }
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Rational::from_i128(a - c, b);
            }
            if let Some(n) = (a * d).checked_sub(c * b) {
                return Rational::from_i128(n, b * d);
            }
        }
        Rational::from_big(self.to_big() - rhs.to_big())
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            if *a == 0 || *c == 0 {
                return Rational::zero();
            }
            return Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128);
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            assert!(*c != 0, "division by zero");
            return Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128);
        }
        let r = rhs.to_big();
        assert!(!r.is_zero(), "division by zero");
        Rational::from_big(self.to_big() / r)
    }

    fn parse_text(s: &str) -> Result<Self, ScalarParseError> {
        s.parse()
    }

    fn height(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => n.unsigned_abs().max(*d as u64),
            Repr::Big(b) => (1u64 << 62) + b.numer().bits() + b.denom().bits(),
        }
        .max(1)
    }

    fn descriptor() -> String {
        "q".to_string()
    }

    fn normalize_row(row: &mut [Self]) {
        let mut lcm = BigInt::one();
        let mut all_small = true;
        for x in row.iter() {
            match &x.0 {
                Repr::Small(_, 1) => {}
                Repr::Small(_, d) => lcm = lcm.lcm(&BigInt::from(*d)),
                Repr::Big(b) => {
                    all_small = false;
                    lcm = lcm.lcm(b.denom());
                }
            }
        }
        let mut g = BigInt::zero();
        for x in row.iter() {
            if !x.is_zero() {
                let n = x.numer() * (&lcm / x.denom());
                g = g.gcd(&n);
            }
        }
        if g.is_zero() || (all_small && lcm.is_one() && g.is_one()) {
            return;
        }
        let scale = Rational::from_big(BigRational::new(lcm, g));
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&scale);
            }
        }
    }
}

/// Residues modulo a prime `P`.
///
/// Rank over `Fp` can be smaller than over the rationals, so results are
/// only meaningful for data that is defined modulo `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(n: i64) -> Self {
        Fp((n as i128).rem_euclid(P as i128) as u64)
    }

    pub fn residue(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn parse_text(s: &str) -> Result<Self, ScalarParseError> {
        let q: Rational = s.parse()?;
        let reduce = |b: BigInt| -> Fp<P> {
            let m = BigInt::from(P);
            Fp(b.mod_floor(&m).to_u64().expect("residue fits"))
        };
        let (n, d) = (reduce(q.numer()), reduce(q.denom()));
        d.inv()
            .map(|di| n * di)
            .ok_or_else(|| ScalarParseError(format!("{s} (denominator vanishes mod {P})")))
    }

    fn height(&self) -> u64 {
        1
    }

    fn descriptor() -> String {
        format!("fp:{P}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(0, -5), Rational::zero());
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from(i64::MAX);
        let sq = big.mul_ref(&big);
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = sq.div_ref(&big);
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let min = Rational::from_big(BigRational::from_integer(BigInt::from(i64::MIN)));
        assert_eq!(min.clone().neg().neg(), min);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-3", "7/9", "-12/5", "123456789012345678901234567891/2"] {
            let x: Rational = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("6/-4".parse::<Rational>().unwrap(), q(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        type F7 = Fp<7>;
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
        assert_eq!(F7::from_i64(3).inv(), Some(F7::from_i64(5)));
        assert_eq!(F7::parse_text("1/2").unwrap(), F7::from_i64(4));
        assert!(F7::parse_text("1/7").is_err());
        assert_eq!(F7::zero().inv(), None);
    }

    #[test]
    fn normalize_row_clears_denominators() {
        let mut row = vec![q(1, 2), q(-3, 4), Rational::zero()];
        Rational::normalize_row(&mut row);
        assert_eq!(row, vec![q(2, 1), q(-3, 1), Rational::zero()]);
    }
}
