use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// Exact rational number. Small values stay in machine words; anything that
/// overflows is promoted to a boxed `BigRational` and demoted again when it fits.
#[derive(Clone)]
pub enum Q {
    S(i64, i64),
    B(Box<BigRational>),
}

fn norm128(mut n: i128, mut d: i128) -> Q {
    debug_assert!(d != 0);
    if d < 0 {
        n = -n;
        d = -d;
    }
    if n == 0 {
        return Q::S(0, 1);
    }
    let g = n.gcd(&d);
    if g != 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Q::S(a, b),
        _ => Q::B(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
    }
}

fn from_big(r: BigRational) -> Q {
    // BigRational arithmetic keeps lowest terms with positive denominator.
    if let (Some(a), Some(b)) = (r.numer().to_i64(), r.denom().to_i64()) {
        return Q::S(a, b);
    }
    Q::B(Box::new(r))
}

impl Q {
    pub fn zero() -> Q {
        Q::S(0, 1)
    }
    pub fn one() -> Q {
        Q::S(1, 1)
    }
    pub fn int(n: i64) -> Q {
        Q::S(n, 1)
    }
    pub fn frac(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        norm128(n as i128, d as i128)
    }
    pub fn from_bigint(n: BigInt) -> Q {
        from_big(BigRational::from_integer(n))
    }
    pub fn from_ratio(n: BigInt, d: BigInt) -> Q {
        from_big(BigRational::new(n, d))
    }
    pub fn to_big(&self) -> BigRational {
        match self {
            Q::S(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Q::B(r) => (**r).clone(),
        }
    }
    pub fn numer(&self) -> BigInt {
        match self {
            Q::S(a, _) => BigInt::from(*a),
            Q::B(r) => r.numer().clone(),
        }
    }
    pub fn denom(&self) -> BigInt {
        match self {
            Q::S(_, b) => BigInt::from(*b),
            Q::B(r) => r.denom().clone(),
        }
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Q::S(0, _))
    }
    pub fn is_one(&self) -> bool {
        matches!(self, Q::S(1, 1))
    }
    pub fn is_integer(&self) -> bool {
        matches!(self, Q::S(_, 1))
    }
    pub fn signum(&self) -> i32 {
        match self {
            Q::S(a, _) => a.signum() as i32,
            Q::B(r) => {
                if r.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }
    pub fn recip(&self) -> Q {
        match self {
            Q::S(0, _) => panic!("division by zero"),
            Q::S(a, b) => norm128(*b as i128, *a as i128),
            Q::B(r) => from_big(r.recip()),
        }
    }
    pub fn checked_div(&self, o: &Q) -> Result<Q, ArithError> {
        if o.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self * &o.recip())
    }

    /// p-adic valuation; `None` stands for +infinity.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        match self {
            Q::S(0, _) => None,
            Q::S(a, b) => Some(val_u(a.unsigned_abs(), p) - val_u(b.unsigned_abs(), p)),
            Q::B(r) => Some(val_big(r.numer(), p) - val_big(r.denom(), p)),
        }
    }
    /// Membership in Z_(p).
    pub fn is_integral(&self, p: u64) -> bool {
        match self {
            Q::S(_, 1) => true,
            Q::S(_, b) => (*b as u64) % p != 0,
            Q::B(r) => !(r.denom() % BigInt::from(p)).is_zero(),
        }
    }
    /// Unit of Z_(p).
    pub fn is_unit(&self, p: u64) -> bool {
        self.valuation(p) == Some(0)
    }
    pub fn pow_i(p: u64, e: i64) -> Q {
        let mut r = BigInt::one();
        for _ in 0..e.unsigned_abs() {
            r *= p;
        }
        if e >= 0 {
            Q::from_bigint(r)
        } else {
            Q::from_ratio(BigInt::one(), r)
        }
    }
}

fn val_u(mut x: u64, p: u64) -> i64 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn val_big(x: &BigInt, p: u64) -> i64 {
    let mut x = x.abs();
    let bp = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::zero()
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => a == c && b == d,
            (Q::B(x), Q::B(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Q::S(a, b) => {
                0u8.hash(h);
                a.hash(h);
                b.hash(h);
            }
            Q::B(r) => {
                1u8.hash(h);
                r.hash(h);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    #[inline]
    fn add(self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) => o.clone(),
            (_, Q::S(0, _)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => {
                if b == d {
                    norm128(*a as i128 + *c as i128, *b as i128)
                } else {
                    norm128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => from_big(self.to_big() + o.to_big()),
        }
    }
}
impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    #[inline]
    fn sub(self, o: &Q) -> Q {
        match (self, o) {
            (_, Q::S(0, _)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => {
                if b == d {
                    norm128(*a as i128 - *c as i128, *b as i128)
                } else {
                    norm128(
                        *a as i128 * *d as i128 - *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => from_big(self.to_big() - o.to_big()),
        }
    }
}
impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    #[inline]
    fn mul(self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) | (_, Q::S(0, _)) => Q::zero(),
            (Q::S(1, 1), _) => o.clone(),
            (_, Q::S(1, 1)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => norm128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => from_big(self.to_big() * o.to_big()),
        }
    }
}
impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, o: &Q) -> Q {
        self * &o.recip()
    }
}
impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::S(a, b) if *a != i64::MIN => Q::S(-a, *b),
            _ => from_big(-self.to_big()),
        }
    }
}
impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $f(self, o: Q) -> Q {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $f(self, o: &Q) -> Q {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<Q> for &'a Q {
            type Output = Q;
            fn $f(self, o: Q) -> Q {
                self.$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&Q> for Q {
    #[inline]
    fn add_assign(&mut self, o: &Q) {
        if o.is_zero() {
            return;
        }
        *self = &*self + o;
    }
}
impl AddAssign<Q> for Q {
    fn add_assign(&mut self, o: Q) {
        *self += &o;
    }
}
impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, o: &Q) {
        if o.is_zero() {
            return;
        }
        *self = &*self - o;
    }
}
impl SubAssign<Q> for Q {
    fn sub_assign(&mut self, o: Q) {
        *self -= &o;
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::S(a, 1) => write!(f, "{a}"),
            Q::S(a, b) => write!(f, "{a}/{b}"),
            Q::B(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Q::B(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}
impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Q {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Q, ArithError> {
        let s = s.trim();
        let bad = || ArithError::Parse(s.to_string());
        match s.split_once('/') {
            None => Ok(Q::from_bigint(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n = n.trim().parse::<BigInt>().map_err(|_| bad())?;
                let d = d.trim().parse::<BigInt>().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Q::from_ratio(n, d))
            }
        }
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Q::int)
                .ok_or_else(|| serde::de::Error::custom("non-integer JSON number; use \"a/b\"")),
            other => Err(serde::de::Error::custom(format!("expected scalar, got {other}"))),
        }
    }
}

/// Element of O = Z_(p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalScalar {
    p: u64,
    value: Q,
}

impl LocalScalar {
    pub fn new(value: Q, p: u64) -> Result<Self, ArithError> {
        if !value.is_integral(p) {
            return Err(ArithError::NotIntegral(value.to_string(), p));
        }
        Ok(LocalScalar { p, value })
    }
    pub fn value(&self) -> &Q {
        &self.value
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    /// Explicit embedding O -> K.
    pub fn embed(&self) -> FieldScalar {
        FieldScalar(self.value.clone())
    }
    pub fn is_unit(&self) -> bool {
        self.value.is_unit(self.p)
    }
    pub fn add(&self, o: &Self) -> Self {
        LocalScalar { p: self.p, value: &self.value + &o.value }
    }
    pub fn mul(&self, o: &Self) -> Self {
        LocalScalar { p: self.p, value: &self.value * &o.value }
    }
    pub fn neg(&self) -> Self {
        LocalScalar { p: self.p, value: -&self.value }
    }
    /// Division inside O; fails unless the divisor is a unit.
    pub fn div(&self, o: &Self) -> Result<Self, ArithError> {
        if !o.is_unit() {
            return Err(ArithError::NotAUnit(o.value.to_string(), self.p));
        }
        Ok(LocalScalar { p: self.p, value: &self.value / &o.value })
    }
}

/// Element of K = Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldScalar(pub Q);

impl FieldScalar {
    pub fn valuation(&self, p: u64) -> Option<i64> {
        self.0.valuation(p)
    }
}

/// Element of K/O, stored as num/p^exp with 0 <= num < p^exp and p not dividing num.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatlisValue {
    pub p: u64,
    pub num: BigInt,
    pub exp: u32,
}

impl MatlisValue {
    pub fn zero(p: u64) -> Self {
        MatlisValue { p, num: BigInt::zero(), exp: 0 }
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// Any rational representative.
    pub fn to_q(&self) -> Q {
        let den = num_traits::pow(BigInt::from(self.p), self.exp as usize);
        Q::from_ratio(self.num.clone(), den)
    }
    pub fn add(&self, o: &Self) -> Self {
        matlis_reduce(&(self.to_q() + o.to_q()), self.p)
    }
    pub fn neg(&self) -> Self {
        matlis_reduce(&(-self.to_q()), self.p)
    }
}

impl fmt::Display for MatlisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}^{}", self.num, self.p, self.exp)
        }
    }
}

impl Serialize for MatlisValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn valuation(x: &Q, p: u64) -> Option<i64> {
    x.valuation(p)
}

/// Canonical representative of x + O in K/O.
pub fn matlis_reduce(x: &Q, p: u64) -> MatlisValue {
    let v = match x.valuation(p) {
        None => return MatlisValue::zero(p),
        Some(v) if v >= 0 => return MatlisValue::zero(p),
        Some(v) => v,
    };
    let k = (-v) as u32;
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    // x = a/(p^k b) with p ∤ b; the class is a·b^{-1} mod p^k over p^k.
    let n = x.numer();
    let d = x.denom();
    let b = &d / &pk;
    let binv = mod_inverse(&b.mod_floor(&pk), &pk).expect("denominator part is a unit");
    let num = (n * binv).mod_floor(&pk);
    MatlisValue { p, num, exp: k }
}

/// Inverse of a modulo m for gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Reduce an element of O modulo p^k to an integer in [0, p^k).
pub fn residue(x: &Q, p: u64, k: u32) -> BigInt {
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    if pk.is_one() {
        return BigInt::zero();
    }
    let d = x.denom().mod_floor(&pk);
    let inv = mod_inverse(&d, &pk).expect("element of O");
    (x.numer() * inv).mod_floor(&pk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&Q::frac(3, 5), 2), Some(0));
        assert_eq!(valuation(&Q::int(12), 2), Some(2));
        assert_eq!(valuation(&Q::frac(1, 9), 3), Some(-2));
        assert_eq!(valuation(&Q::zero(), 3), None);
    }

    #[test]
    fn matlis_examples() {
        assert_eq!(matlis_reduce(&Q::frac(7, 2), 2).to_string(), "1/2^1");
        assert!(matlis_reduce(&Q::frac(3, 5), 2).is_zero());
        let m = matlis_reduce(&Q::frac(5, 9), 3);
        assert_eq!((m.num.clone(), m.exp), (BigInt::from(5), 2));
        // 1/6 at p=3: 1/(3*2) = 2^{-1}/3 = 2/3 mod O
        let m = matlis_reduce(&Q::frac(1, 6), 3);
        assert_eq!((m.num.clone(), m.exp), (BigInt::from(2), 1));
    }

    #[test]
    fn local_division_rejects_non_units() {
        let two = LocalScalar::new(Q::int(2), 2).unwrap();
        let three = LocalScalar::new(Q::int(3), 2).unwrap();
        assert!(two.div(&two.add(&two)).is_err());
        assert_eq!(two.div(&three).unwrap().value(), &Q::frac(2, 3));
        assert!(LocalScalar::new(Q::frac(1, 2), 2).is_err());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::int(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Q::B(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back, Q::S(..)));
        assert_eq!("-6/4".parse::<Q>().unwrap(), Q::frac(-3, 2));
    }

    fn arb_q() -> impl Strategy<Value = Q> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(a, b)| Q::frac(a, b))
    }

    proptest! {
        #[test]
        fn field_axioms_exact(a in arb_q(), b in arb_q(), c in arb_q()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn matlis_zero_iff_integral(n in -10_000i64..10_000, d in 1i64..5000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let x = Q::frac(n, d);
            let m = matlis_reduce(&x, p);
            prop_assert_eq!(m.is_zero(), x.valuation(p).map_or(true, |v| v >= 0));
            // the representative differs from x by an element of O
            prop_assert!((&x - &m.to_q()).is_integral(p));
        }
    }
}
