//! Exact scalars: rationals and elements of a real quadratic field Q(√d).
//!
//! Rationals use an `i64` fast path and fall back to arbitrary precision on
//! overflow. The representation is canonical, so derived equality and hashing
//! agree with field equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(x), Rat::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rat::Small(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Rat::Big(x) => {
                1u8.hash(state);
                x.numer().hash(state);
                x.denom().hash(state);
            }
        }
    }
}

fn small_from_i128(n: i128, d: i128) -> Rat {
    debug_assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) if a != i64::MIN => Rat::Small(a, b),
        _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
    }
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(0, 1)
    }

    pub fn one() -> Rat {
        Rat::Small(1, 1)
    }

    pub fn from_int(v: i64) -> Rat {
        if v == i64::MIN {
            Rat::Big(BigRational::from_integer(BigInt::from(v)))
        } else {
            Rat::Small(v, 1)
        }
    }

    /// Builds `n/d`; panics if `d` is zero.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        small_from_i128(n as i128, d as i128)
    }

    pub fn from_big(x: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (x.numer().to_i64(), x.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rat::Small(n, d);
            }
        }
        Rat::Big(x)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Rat::Big(x) => x.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(a, _) => *a == 0,
            Rat::Big(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small(a, _) => a.signum() as i32,
            Rat::Big(x) => {
                if x.is_positive() {
                    1
                } else if x.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, b) => *b == 1,
            Rat::Big(x) => x.is_integer(),
        }
    }

    pub fn numer_big(&self) -> BigInt {
        match self {
            Rat::Small(a, _) => BigInt::from(*a),
            Rat::Big(x) => x.numer().clone(),
        }
    }

    pub fn denom_big(&self) -> BigInt {
        match self {
            Rat::Small(_, b) => BigInt::from(*b),
            Rat::Big(x) => x.denom().clone(),
        }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return small_from_i128(*a as i128 + *c as i128, 1);
                }
                let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                small_from_i128(n, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rat::zero();
                }
                small_from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(a, b) => Rat::Small(-a, *b),
            Rat::Big(x) => Rat::from_big(-x),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Rat {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Rat::Small(a, b) => small_from_i128(*b as i128, *a as i128),
            Rat::Big(x) => Rat::from_big(x.recip()),
        }
    }

    pub fn div(&self, o: &Rat) -> Rat {
        self.mul(&o.inv())
    }

    pub fn cmp_rat(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }

    fn parse(s: &str) -> Option<Rat> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::from_big(BigRational::new(n, d)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(a, 1) => write!(f, "{a}"),
            Rat::Small(a, b) => write!(f, "{a}/{b}"),
            Rat::Big(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Rat::Big(x) => write!(f, "{}/{}", x.numer(), x.denom()),
        }
    }
}

/// An element of an ordered field: a rational, or `a + b·√d` with `b ≠ 0`
/// and squarefree `d > 1`.
///
/// Mixing two different radicands in one operation is a programming error
/// and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(Rat),
    Quadratic { a: Rat, b: Rat, d: u64 },
}

impl Default for FieldScalar {
    fn default() -> Self {
        FieldScalar::zero()
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl FieldScalar {
    pub fn zero() -> Self {
        FieldScalar::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        FieldScalar::Rational(Rat::one())
    }

    pub fn from_int(v: i64) -> Self {
        FieldScalar::Rational(Rat::from_int(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        FieldScalar::Rational(Rat::new(n, d))
    }

    pub fn from_rat(r: Rat) -> Self {
        FieldScalar::Rational(r)
    }

    /// `a + b·√d`, normalized to a rational when `b = 0`.
    pub fn quadratic(a: Rat, b: Rat, d: u64) -> Result<Self> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::Parse(format!("radicand {d} is not a squarefree integer > 1")));
        }
        Ok(Self::quad_raw(a, b, d))
    }

    fn quad_raw(a: Rat, b: Rat, d: u64) -> Self {
        if b.is_zero() {
            FieldScalar::Rational(a)
        } else {
            FieldScalar::Quadratic { a, b, d }
        }
    }

    /// `√d` as a field element.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::quadratic(Rat::zero(), Rat::one(), d)
    }

    pub fn parts(&self) -> (Rat, Rat, Option<u64>) {
        match self {
            FieldScalar::Rational(r) => (r.clone(), Rat::zero(), None),
            FieldScalar::Quadratic { a, b, d } => (a.clone(), b.clone(), Some(*d)),
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            FieldScalar::Rational(_) => None,
            FieldScalar::Quadratic { d, .. } => Some(*d),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldScalar::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Quadratic { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Quadratic { .. } => false,
        }
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            FieldScalar::Rational(r) => r.signum(),
            FieldScalar::Quadratic { a, b, d } => {
                let sa = a.signum();
                let sb = b.signum();
                if sa == 0 || sa == sb {
                    return sb;
                }
                // Opposite signs: compare a² with b²·d.
                let a2 = a.mul(a);
                let b2d = b.mul(b).mul(&Rat::from_int(*d as i64));
                match a2.cmp_rat(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                }
            }
        }
    }

    fn common_d(x: Option<u64>, y: Option<u64>) -> Option<u64> {
        match (x, y) {
            (Some(p), Some(q)) => {
                assert_eq!(p, q, "mixing Q(sqrt {p}) and Q(sqrt {q})");
                Some(p)
            }
            (Some(p), None) | (None, Some(p)) => Some(p),
            (None, None) => None,
        }
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldScalar::Rational(x), FieldScalar::Rational(y)) => FieldScalar::Rational(x.add(y)),
            _ => {
                let (a1, b1, d1) = self.parts();
                let (a2, b2, d2) = o.parts();
                let d = Self::common_d(d1, d2).unwrap();
                Self::quad_raw(a1.add(&a2), b1.add(&b2), d)
            }
        }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        match self {
            FieldScalar::Rational(x) => FieldScalar::Rational(x.neg()),
            FieldScalar::Quadratic { a, b, d } => FieldScalar::Quadratic { a: a.neg(), b: b.neg(), d: *d },
        }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldScalar::Rational(x), FieldScalar::Rational(y)) => FieldScalar::Rational(x.mul(y)),
            (FieldScalar::Rational(x), FieldScalar::Quadratic { a, b, d })
            | (FieldScalar::Quadratic { a, b, d }, FieldScalar::Rational(x)) => {
                if x.is_zero() {
                    return FieldScalar::zero();
                }
                Self::quad_raw(a.mul(x), b.mul(x), *d)
            }
            (FieldScalar::Quadratic { a: a1, b: b1, d: d1 }, FieldScalar::Quadratic { a: a2, b: b2, d: d2 }) => {
                let d = Self::common_d(Some(*d1), Some(*d2)).unwrap();
                let dd = Rat::from_int(d as i64);
                let a = a1.mul(a2).add(&b1.mul(b2).mul(&dd));
                let b = a1.mul(b2).add(&b1.mul(a2));
                Self::quad_raw(a, b, d)
            }
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        match self {
            FieldScalar::Rational(x) => FieldScalar::Rational(x.inv()),
            FieldScalar::Quadratic { a, b, d } => {
                // (a - b√d) / (a² - b²d)
                let norm = a.mul(a).sub(&b.mul(b).mul(&Rat::from_int(*d as i64)));
                let ni = norm.inv();
                Self::quad_raw(a.mul(&ni), b.neg().mul(&ni), *d)
            }
        }
    }

    pub fn div_ref(&self, o: &Self) -> Self {
        self.mul_ref(&o.inv())
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg_ref()
        } else {
            self.clone()
        }
    }

    /// Parses `p/q`, `a+b*sqrt(d)`, `a-b*sqrt(d)`, `b*sqrt(d)`, `sqrt(d)`, `-sqrt(d)`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("invalid scalar {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(pos) = t.find("sqrt(") else {
            return Rat::parse(&t).map(FieldScalar::Rational).ok_or_else(err);
        };
        let inner_end = t[pos..].find(')').map(|e| pos + e).ok_or_else(err)?;
        if inner_end != t.len() - 1 {
            return Err(err());
        }
        let d: u64 = t[pos + 5..inner_end].parse().map_err(|_| err())?;
        let head = &t[..pos];
        // head is "", "-", "+", "<coef>*", "<a>+<coef>*", "<a>-<coef>*", "<a>+", "<a>-"
        let head = head.strip_suffix('*').unwrap_or(head);
        // Split off the rational part at the last top-level sign (not at index 0, not after '/').
        let bytes = head.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                split = Some(i);
                break;
            }
        }
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let a = Rat::parse(a_str).ok_or_else(err)?;
        let b = match b_str {
            "" | "+" => Rat::one(),
            "-" => Rat::from_int(-1),
            other => Rat::parse(other.strip_prefix('+').unwrap_or(other)).ok_or_else(err)?,
        };
        FieldScalar::quadratic(a, b, d)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::Quadratic { a, b, d } => {
                let bs = if b.signum() < 0 { b.neg() } else { b.clone() };
                let sign = if b.signum() < 0 { "-" } else { "+" };
                let coef = if bs.is_one() { String::new() } else { format!("{bs}*") };
                if a.is_zero() {
                    let lead = if sign == "-" { "-" } else { "" };
                    write!(f, "{lead}{coef}sqrt({d})")
                } else {
                    write!(f, "{a}{sign}{coef}sqrt({d})")
                }
            }
        }
    }
}

impl FromStr for FieldScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FieldScalar::parse(s)
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub_ref(other).signum().cmp(&0)
    }
}

impl From<i64> for FieldScalar {
    fn from(v: i64) -> Self {
        FieldScalar::from_int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                self.$f(o)
            }
        }
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                self.$f(&o)
            }
        }
        impl $tr<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: &FieldScalar) -> FieldScalar {
                self.$f(o)
            }
        }
        impl $tr<FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $m(self, o: FieldScalar) -> FieldScalar {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Zero for FieldScalar {
    fn zero() -> Self {
        FieldScalar::zero()
    }
    fn is_zero(&self) -> bool {
        FieldScalar::is_zero(self)
    }
}

impl One for FieldScalar {
    fn one() -> Self {
        FieldScalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> FieldScalar {
        FieldScalar::parse(x).unwrap()
    }

    #[test]
    fn rational_lowest_terms() {
        assert_eq!(FieldScalar::ratio(2, -4), s("-1/2"));
        assert_eq!(s("6/3").to_string(), "2");
        assert_eq!(s("-3/6").to_string(), "-1/2");
    }

    #[test]
    fn small_overflow_promotes() {
        let big = FieldScalar::from_int(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        assert_eq!(&sum - &big, big);
        let sq = &big * &big;
        assert_eq!(&sq / &big, big);
    }

    #[test]
    fn quadratic_arith() {
        let phi = s("1/2+1/2*sqrt(5)");
        // φ² = φ + 1
        assert_eq!(&phi * &phi, &phi + &FieldScalar::one());
        assert_eq!(&phi * &phi.inv(), FieldScalar::one());
        let x = s("sqrt(5)") - s("sqrt(5)");
        assert!(x.is_rational() && x.is_zero());
    }

    #[test]
    fn quadratic_sign() {
        assert_eq!(s("3-sqrt(5)").signum(), 1);
        assert_eq!(s("2-sqrt(5)").signum(), -1);
        assert_eq!(s("-3+sqrt(5)").signum(), -1);
        assert_eq!(s("-2+sqrt(5)").signum(), 1);
        assert!(s("sqrt(2)") < s("3/2"));
        assert!(s("sqrt(2)") > s("7/5"));
    }

    #[test]
    fn text_round_trip() {
        for t in ["0", "-7", "3/4", "sqrt(5)", "-sqrt(5)", "2*sqrt(3)", "1/2+1/2*sqrt(5)", "1-3/7*sqrt(2)"] {
            let v = s(t);
            assert_eq!(v.to_string(), t);
            assert_eq!(s(&v.to_string()), v);
        }
        assert!(FieldScalar::parse("1/0").is_err());
        assert!(FieldScalar::parse("sqrt(4)").is_err());
        assert!(FieldScalar::parse("x").is_err());
    }

    #[test]
    #[should_panic]
    fn mixed_radicands_panic() {
        let _ = s("sqrt(2)") + s("sqrt(3)");
    }
}
