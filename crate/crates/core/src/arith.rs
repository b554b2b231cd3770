//! Prime-field scalars and the small amount of combinatorial number theory
//! needed by every coefficient computation: binomials and multinomials mod p
//! via Lucas' theorem, and base-p digit expansions.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Primes accepted by [`Context::new`].
pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Largest sequence length accepted by [`Context::new`].
pub const MAX_LENGTH: usize = 6;

/// The prime `p` and the length `n` every computation is bound to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    p: u32,
    n: usize,
}

impl Context {
    pub fn new(p: u32, n: usize) -> Result<Context> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::UnsupportedLength(n));
        }
        Ok(Context { p, n })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Same prime, different length.
    pub fn with_n(&self, n: usize) -> Result<Context> {
        Context::new(self.p, n)
    }

    pub fn zero(&self) -> Fp {
        Fp::zero(self.p)
    }

    pub fn one(&self) -> Fp {
        Fp::one(self.p)
    }

    pub fn fp(&self, v: i64) -> Fp {
        Fp::new(v, self.p)
    }
}

/// An element of `Z/pZ`. The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    pub fn new(v: i64, p: u32) -> Fp {
        Fp { value: v.rem_euclid(p as i64) as u32, p }
    }

    pub fn zero(p: u32) -> Fp {
        Fp { value: 0, p }
    }

    pub fn one(p: u32) -> Fp {
        Fp { value: 1 % p, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// `(-1)^e`.
    pub fn sign(e: i64, p: u32) -> Fp {
        if e.rem_euclid(2) == 0 {
            Fp::one(p)
        } else {
            Fp::new(-1, p)
        }
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Fp> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.p as u64 - 2))
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp { value: (self.value + rhs.value) % self.p, p: self.p }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp { value: (self.value + self.p - rhs.value) % self.p, p: self.p }
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp { value: ((self.value as u64 * rhs.value as u64) % self.p as u64) as u32, p: self.p }
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: (self.p - self.value) % self.p, p: self.p }
    }
}

/// A nonnegative integer with checked arithmetic. Overflow is an error, never
/// a wraparound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(pub u128);

impl Nat {
    pub const ZERO: Nat = Nat(0);

    pub fn checked_add(self, rhs: Nat) -> Result<Nat> {
        self.0.checked_add(rhs.0).map(Nat).ok_or(Error::Overflow)
    }

    pub fn checked_sub(self, rhs: Nat) -> Result<Nat> {
        self.0.checked_sub(rhs.0).map(Nat).ok_or(Error::Overflow)
    }

    pub fn checked_mul(self, rhs: Nat) -> Result<Nat> {
        self.0.checked_mul(rhs.0).map(Nat).ok_or(Error::Overflow)
    }

    pub fn checked_pow(self, e: u32) -> Result<Nat> {
        self.0.checked_pow(e).map(Nat).ok_or(Error::Overflow)
    }

    pub fn to_u64(self) -> Result<u64> {
        u64::try_from(self.0).map_err(|_| Error::Overflow)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Nat {
        Nat(v as u128)
    }
}

/// `p^e` as a `u64`, with overflow reported.
pub fn pow_u64(p: u32, e: u32) -> Result<u64> {
    (p as u64).checked_pow(e).ok_or(Error::Overflow)
}

/// Base-p digits of `a`, least significant first. Zero has no digits.
pub fn padic_digits(a: Nat, ctx: &Context) -> Vec<u32> {
    let p = ctx.p() as u128;
    let mut digits = Vec::new();
    let mut a = a.0;
    while a > 0 {
        digits.push((a % p) as u32);
        a /= p;
    }
    digits
}

/// `C(a, b) mod p`, zero whenever `a < 0`, `b < 0` or `b > a`.
pub fn binom_mod_p(a: i64, b: i64, ctx: &Context) -> Fp {
    binom_mod(a, b, ctx.p())
}

pub(crate) fn binom_mod(a: i64, b: i64, p: u32) -> Fp {
    if a < 0 || b < 0 || b > a {
        return Fp::zero(p);
    }
    let pp = p as i64;
    let (mut a, mut b) = (a, b);
    let mut acc = Fp::one(p);
    while b > 0 {
        let (ad, bd) = (a % pp, b % pp);
        if bd > ad {
            return Fp::zero(p);
        }
        acc *= small_binom(ad as u32, bd as u32, p);
        a /= pp;
        b /= pp;
    }
    acc
}

// C(a, b) mod p for 0 <= b <= a < p, where no factor of the numerator is divisible by p.
fn small_binom(a: u32, b: u32, p: u32) -> Fp {
    let mut num = Fp::one(p);
    let mut den = Fp::one(p);
    for k in 0..b {
        num *= Fp::new((a - k) as i64, p);
        den *= Fp::new((k + 1) as i64, p);
    }
    num * den.inv().expect("k + 1 < p is a unit")
}

/// `(sum parts)! / prod(parts_t!) mod p`, as a product of sequential binomials.
pub fn multinom_mod_p(parts: &[Nat], ctx: &Context) -> Result<Fp> {
    let mut acc = ctx.one();
    let mut total = Nat::ZERO;
    for &part in parts {
        total = total.checked_add(part)?;
        let (t, k) = (to_i64(total)?, to_i64(part)?);
        acc *= binom_mod_p(t, k, ctx);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

fn to_i64(n: Nat) -> Result<i64> {
    i64::try_from(n.0).map_err(|_| Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> Context {
        Context::new(p, 2).unwrap()
    }

    // exact binomial by the multiplicative formula, in u128
    fn exact_binom(a: u64, b: u64) -> u128 {
        if b > a {
            return 0;
        }
        let mut r: u128 = 1;
        for k in 0..b {
            r = r * (a - k) as u128 / (k + 1) as u128;
        }
        r
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_mod_p(5, 2, &ctx(3)).value(), 1);
        assert_eq!(binom_mod_p(-1, 1, &ctx(3)).value(), 0);
        assert_eq!(binom_mod_p(7, 3, &ctx(2)).value(), 1);
        assert_eq!(binom_mod_p(-1, 0, &ctx(3)).value(), 0);
        assert_eq!(binom_mod_p(3, -1, &ctx(3)).value(), 0);
        assert_eq!(binom_mod_p(2, 3, &ctx(3)).value(), 0);
    }

    #[test]
    fn lucas_matches_factorials() {
        for p in [2u32, 3, 5] {
            let c = ctx(p);
            for a in 0..=30u64 {
                for b in 0..=a {
                    let expect = (exact_binom(a, b) % p as u128) as u32;
                    assert_eq!(binom_mod_p(a as i64, b as i64, &c).value(), expect, "C({a},{b}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn vandermonde() {
        for p in [2u32, 3, 5] {
            let c = ctx(p);
            for m in 0..=15i64 {
                for n in 0..=15i64 {
                    for j in 0..=(m + n) {
                        let mut s = c.zero();
                        for k in 0..=j {
                            s += binom_mod_p(m, k, &c) * binom_mod_p(n, j - k, &c);
                        }
                        assert_eq!(s, binom_mod_p(m + n, j, &c));
                    }
                }
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        let n = |v: &[u128]| v.iter().map(|&x| Nat(x)).collect::<Vec<_>>();
        assert_eq!(multinom_mod_p(&n(&[1, 1]), &ctx(3)).unwrap().value(), 2);
        assert_eq!(multinom_mod_p(&n(&[2, 0]), &ctx(3)).unwrap().value(), 1);
        assert_eq!(multinom_mod_p(&n(&[2, 2]), &ctx(2)).unwrap().value(), 0);
        assert_eq!(multinom_mod_p(&n(&[2, 1, 3]), &ctx(5)).unwrap().value(), (60 % 5) as u32);
        assert_eq!(multinom_mod_p(&n(&[1, 2, 1]), &ctx(7)).unwrap().value(), 12 % 7);
    }

    #[test]
    fn digits() {
        assert_eq!(padic_digits(Nat(10), &ctx(3)), vec![1, 0, 1]);
        assert!(padic_digits(Nat(0), &ctx(5)).is_empty());
        assert_eq!(padic_digits(Nat(7), &ctx(2)), vec![1, 1, 1]);
    }

    #[test]
    fn field_ops() {
        let c = ctx(5);
        let a = c.fp(3);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((-a).value(), 2);
        assert_eq!(c.fp(-7).value(), 3);
        assert_eq!(Fp::sign(3, 5).value(), 4);
        assert!(c.zero().inv().is_none());
    }

    #[test]
    fn context_allow_list() {
        assert!(Context::new(4, 2).is_err());
        assert!(Context::new(3, 0).is_err());
        assert!(Context::new(7, 6).is_ok());
        assert!(Context::new(11, 2).is_err());
    }

    #[test]
    fn nat_overflow_is_reported() {
        assert!(Nat(u128::MAX).checked_add(Nat(1)).is_err());
        assert!(Nat(3).checked_pow(200).is_err());
        assert_eq!(Nat(3).checked_pow(4).unwrap(), Nat(81));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn multinomial_is_permutation_invariant(parts in prop::collection::vec(0u128..12, 1..5), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
                let c = Context::new(p, 2).unwrap();
                let fwd: Vec<Nat> = parts.iter().map(|&x| Nat(x)).collect();
                let mut rev = fwd.clone();
                rev.reverse();
                let mut sorted = fwd.clone();
                sorted.sort();
                let a = multinom_mod_p(&fwd, &c).unwrap();
                prop_assert_eq!(a, multinom_mod_p(&rev, &c).unwrap());
                prop_assert_eq!(a, multinom_mod_p(&sorted, &c).unwrap());
            }
        }
    }
}
