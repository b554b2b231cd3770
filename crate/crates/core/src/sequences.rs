//! Operation sequences `(I, eps)` in lower and upper notation.
//!
//! A lower sequence `(j_1, ..., j_n; eps_1, ..., eps_n)` stands for the
//! composite `b^eps_1 e_j1 ... b^eps_n e_jn`, leftmost applied last. Entries
//! live in the monoid generated by the naturals and `1/2`, so they are stored
//! doubled. Everything here is plain bookkeeping: degrees, excess,
//! admissibility, the excess ordering and the named families of sequences
//! that are dual to the Dickson generators.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{Context, Nat};
use crate::error::{Error, Result};

/// A nonnegative half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(u64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub fn from_twice(twice: u64) -> HalfInt {
        HalfInt(twice)
    }

    pub fn from_int(v: u64) -> HalfInt {
        HalfInt(2 * v)
    }

    #[inline]
    pub fn twice(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_integral(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn as_int(self) -> Option<u64> {
        self.is_integral().then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn validate(entries: &[HalfInt], eps: &[bool], p: u32) -> Result<()> {
    if entries.len() != eps.len() {
        return Err(Error::LengthMismatch { expected: entries.len(), got: eps.len() });
    }
    if p == 2 {
        if eps.iter().any(|&e| e) {
            return Err(Error::Malformed("Bockstein bits are not allowed for p = 2".into()));
        }
        if entries.iter().any(|e| !e.is_integral()) {
            return Err(Error::Malformed("half-integral entries are not allowed for p = 2".into()));
        }
    }
    Ok(())
}

/// A lower-notation sequence; the element `e_{I,eps}` of T or `Q_{I,eps}` of R.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpSeq {
    p: u32,
    entries: Vec<HalfInt>,
    eps: Vec<bool>,
}

/// An upper-notation sequence `b^eps_1 f^i_1 ... b^eps_n f^i_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpperSeq {
    p: u32,
    entries: Vec<HalfInt>,
    eps: Vec<bool>,
}

macro_rules! seq_common {
    ($t:ident) => {
        impl $t {
            pub fn new(entries: Vec<HalfInt>, eps: Vec<bool>, p: u32) -> Result<$t> {
                validate(&entries, &eps, p)?;
                Ok($t { p, entries, eps })
            }

            /// Integer entries, no Bocksteins; length must match `ctx.n()`.
            pub fn from_ints(ints: &[u64], ctx: &Context) -> Result<$t> {
                if ints.len() != ctx.n() {
                    return Err(Error::LengthMismatch { expected: ctx.n(), got: ints.len() });
                }
                $t::new(ints.iter().map(|&v| HalfInt::from_int(v)).collect(), vec![false; ints.len()], ctx.p())
            }

            /// Entries given doubled, with Bockstein bits; length must match `ctx.n()`.
            pub fn from_twice(twice: &[u64], eps: &[bool], ctx: &Context) -> Result<$t> {
                if twice.len() != ctx.n() {
                    return Err(Error::LengthMismatch { expected: ctx.n(), got: twice.len() });
                }
                $t::new(twice.iter().map(|&v| HalfInt::from_twice(v)).collect(), eps.to_vec(), ctx.p())
            }

            pub fn zero(ctx: &Context) -> $t {
                $t { p: ctx.p(), entries: vec![HalfInt::ZERO; ctx.n()], eps: vec![false; ctx.n()] }
            }

            #[inline]
            pub fn p(&self) -> u32 {
                self.p
            }

            #[inline]
            pub fn len(&self) -> usize {
                self.entries.len()
            }

            #[inline]
            pub fn is_empty(&self) -> bool {
                self.entries.is_empty()
            }

            #[inline]
            pub fn entries(&self) -> &[HalfInt] {
                &self.entries
            }

            #[inline]
            pub fn eps(&self) -> &[bool] {
                &self.eps
            }

            pub fn twice(&self) -> Vec<u64> {
                self.entries.iter().map(|e| e.twice()).collect()
            }

            pub fn has_bockstein(&self) -> bool {
                self.eps.iter().any(|&e| e)
            }

            /// Integer entries when every entry is integral.
            pub fn ints(&self) -> Option<Vec<u64>> {
                self.entries.iter().map(|e| e.as_int()).collect()
            }

            pub fn check_ctx(&self, ctx: &Context) -> Result<()> {
                if self.p != ctx.p() {
                    return Err(Error::PrimeMismatch(self.p, ctx.p()));
                }
                if self.len() != ctx.n() {
                    return Err(Error::LengthMismatch { expected: ctx.n(), got: self.len() });
                }
                Ok(())
            }
        }
    };
}

seq_common!(OpSeq);
seq_common!(UpperSeq);

fn to_nat(v: i128) -> Result<Nat> {
    if v < 0 {
        return Err(Error::Malformed(format!("negative total degree {v}")));
    }
    Ok(Nat(v as u128))
}

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow)
}

// Degree of a single upper-notation factor b^e f^i, i given doubled.
fn upper_factor_degree(p: u32, twice: u64, eps: bool) -> Result<i128> {
    let t = twice as i128;
    if p == 2 {
        Ok(t / 2)
    } else {
        Ok(ck((p as i128 - 1).checked_mul(t))? - eps as i128)
    }
}

impl OpSeq {
    /// Topological degree: `2(p-1) sum j_t p^(t-1) - sum eps_t p^(t-1)`,
    /// or `sum j_t 2^(t-1)` for p = 2.
    pub fn degree(&self) -> Result<Nat> {
        let p = self.p as i128;
        let mut total: i128 = 0;
        let mut weight: i128 = 1;
        for (e, &b) in self.entries.iter().zip(&self.eps) {
            let t = e.twice() as i128;
            let term = if self.p == 2 {
                ck((t / 2).checked_mul(weight))?
            } else {
                ck(ck((p - 1).checked_mul(t))?.checked_mul(weight))? - if b { weight } else { 0 }
            };
            total = ck(total.checked_add(term))?;
            weight = ck(weight.checked_mul(p))?;
        }
        to_nat(total)
    }

    /// `2 j_1 - eps_1`; `None` for the empty sequence (excess infinity).
    pub fn excess(&self) -> Option<i64> {
        self.tail_excess(0)
    }

    /// Excess of the tail starting at position `t` (0-based).
    pub fn tail_excess(&self, t: usize) -> Option<i64> {
        let e = self.entries.get(t)?;
        Some(e.twice() as i64 - self.eps[t] as i64)
    }

    /// The vector of tail excesses, the key of the excess ordering.
    pub fn excess_vector(&self) -> Vec<i64> {
        (0..self.len()).map(|t| self.tail_excess(t).unwrap()).collect()
    }

    /// `0 <= 2 j_t - 2 j_(t-1) - eps_t` for t = 2..n.
    pub fn is_admissible(&self) -> bool {
        self.first_defect().is_none()
    }

    /// The first position `t` (0-based) where the pair `(t, t+1)` breaks admissibility.
    pub fn first_defect(&self) -> Option<usize> {
        (0..self.len().saturating_sub(1)).find(|&t| {
            (self.entries[t + 1].twice() as i64) - (self.entries[t].twice() as i64) - (self.eps[t + 1] as i64) < 0
        })
    }

    pub fn to_upper(&self) -> Result<UpperSeq> {
        let mut tail: i128 = 0;
        let mut out = vec![HalfInt::ZERO; self.len()];
        for t in (0..self.len()).rev() {
            let shift = if self.p == 2 { 2 * tail } else { tail };
            let twice_i = self.entries[t].twice() as i128 + shift;
            if twice_i < 0 {
                return Err(Error::Malformed(format!("upper entry {t} would be negative")));
            }
            out[t] = HalfInt::from_twice(twice_i as u64);
            tail = ck(tail.checked_add(upper_factor_degree(self.p, twice_i as u64, self.eps[t])?))?;
        }
        Ok(UpperSeq { p: self.p, entries: out, eps: self.eps.clone() })
    }

    /// Concatenation `I (+) I'`.
    pub fn direct_sum(&self, other: &OpSeq) -> Result<OpSeq> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        let mut eps = self.eps.clone();
        eps.extend_from_slice(&other.eps);
        Ok(OpSeq { p: self.p, entries, eps })
    }

    pub(crate) fn from_parts_unchecked(p: u32, entries: Vec<HalfInt>, eps: Vec<bool>) -> OpSeq {
        OpSeq { p, entries, eps }
    }
}

impl UpperSeq {
    /// `2(p-1) sum i_t - sum eps_t`, or `sum i_t` for p = 2.
    pub fn degree(&self) -> Result<Nat> {
        let mut total: i128 = 0;
        for (e, &b) in self.entries.iter().zip(&self.eps) {
            total = ck(total.checked_add(upper_factor_degree(self.p, e.twice(), b)?))?;
        }
        to_nat(total)
    }

    /// `i_1 - eps_1 - 2(p-1) sum_(t>=2) i_t`, or `i_1 - sum_(t>=2) i_t` for p = 2.
    pub fn excess(&self) -> Result<i64> {
        let first = self
            .entries
            .first()
            .ok_or_else(|| Error::Malformed("excess of the empty sequence is infinite".into()))?;
        let i1 = first
            .as_int()
            .ok_or_else(|| Error::Malformed("half-integral leading upper entry".into()))? as i64;
        let rest: i64 = self.entries[1..].iter().map(|e| e.twice() as i64).sum();
        if self.p == 2 {
            Ok(i1 - rest / 2)
        } else {
            Ok(i1 - self.eps[0] as i64 - (self.p as i64 - 1) * rest)
        }
    }

    pub fn to_lower(&self) -> Result<OpSeq> {
        let mut tail: i128 = 0;
        let mut out = vec![HalfInt::ZERO; self.len()];
        for t in (0..self.len()).rev() {
            let twice_i = self.entries[t].twice();
            let shift = if self.p == 2 { 2 * tail } else { tail };
            let twice_j = twice_i as i128 - shift;
            if twice_j < 0 {
                return Err(Error::Malformed(format!("lower entry {} would be negative", t + 1)));
            }
            out[t] = HalfInt::from_twice(twice_j as u64);
            tail = ck(tail.checked_add(upper_factor_degree(self.p, twice_i, self.eps[t])?))?;
        }
        Ok(OpSeq { p: self.p, entries: out, eps: self.eps.clone() })
    }
}

impl fmt::Display for OpSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        write_body(f, &self.entries, &self.eps)
    }
}

impl fmt::Display for UpperSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E")?;
        write_body(f, &self.entries, &self.eps)
    }
}

pub(crate) fn write_body(f: &mut impl fmt::Write, entries: &[HalfInt], eps: &[bool]) -> fmt::Result {
    write!(f, "[")?;
    for (k, e) in entries.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    if eps.iter().any(|&b| b) {
        write!(f, ";eps=")?;
        for &b in eps {
            write!(f, "{}", b as u8)?;
        }
    }
    write!(f, "]")
}

/// The excess ordering: lexicographic on the vector of tail excesses.
pub fn compare(a: &OpSeq, b: &OpSeq) -> Ordering {
    let (va, vb) = (a.excess_vector(), b.excess_vector());
    va.cmp(&vb)
}

/// The named sequences dual to Dickson generators and their Bockstein
/// companions. Indices follow the conventions of the closed forms for their
/// degrees; see [`family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `(0^i, 1^(n-i))`, `0 <= i <= n-1`.
    I { i: usize },
    /// `(1/2^i, 1^(n-i))` with a Bockstein at position `i+1`, `0 <= i <= n-1`.
    J { i: usize },
    /// `(0^s, 1/2^(i-s), 1^(n-i))` with Bocksteins at positions `s+1` and `i+1`, `0 <= s < i <= n-1`.
    K { s: usize, i: usize },
    /// A single 1 at position `i`, `1 <= i <= n`.
    O { i: usize },
    /// `(1/2^(i-1), 1, 0^(n-i))` with a Bockstein at position `i`, `1 <= i <= n`.
    JLow { i: usize },
    /// `(0^s, 1/2^(i-s-1), 1, 0^(n-i))` with Bocksteins at positions `s+1` and `i`, `0 <= s < i-1 <= n-1`.
    KLow { s: usize, i: usize },
}

/// Construct one of the named families in `ctx`.
pub fn family(f: Family, ctx: &Context) -> Result<OpSeq> {
    let n = ctx.n();
    let oor = |msg: String| Err(Error::OutOfRange(msg));
    let needs_odd = !matches!(f, Family::I { .. } | Family::O { .. });
    if needs_odd && !ctx.is_odd() {
        return Err(Error::BocksteinUnsupported(format!("{f:?} requires an odd prime")));
    }
    let (half, zero, one) = (HalfInt::HALF, HalfInt::ZERO, HalfInt::from_int(1));
    let mut entries = vec![zero; n];
    let mut eps = vec![false; n];
    match f {
        Family::I { i } => {
            if i >= n {
                return oor(format!("I_{{{n},{i}}} needs 0 <= i <= n-1"));
            }
            entries[i..].fill(one);
        }
        Family::J { i } => {
            if i >= n {
                return oor(format!("J_{{{n};{i}}} needs 0 <= i <= n-1"));
            }
            entries[..i].fill(half);
            entries[i..].fill(one);
            eps[i] = true;
        }
        Family::K { s, i } => {
            if !(s < i && i < n) {
                return oor(format!("K_{{{n};{s},{i}}} needs 0 <= s < i <= n-1"));
            }
            entries[s..i].fill(half);
            entries[i..].fill(one);
            eps[s] = true;
            eps[i] = true;
        }
        Family::O { i } => {
            if !(1..=n).contains(&i) {
                return oor(format!("O_{{{n},{i}}} needs 1 <= i <= n"));
            }
            entries[i - 1] = one;
        }
        Family::JLow { i } => {
            if !(1..=n).contains(&i) {
                return oor(format!("J_{{{n},{i};{}}} needs 1 <= i <= n", i as i64 - 1));
            }
            entries[..i - 1].fill(half);
            entries[i - 1] = one;
            eps[i - 1] = true;
        }
        Family::KLow { s, i } => {
            if !(s + 1 < i && i <= n) {
                return oor(format!("K_{{{n},{i};{s},{}}} needs 0 <= s < i-1 <= n-1", i as i64 - 1));
            }
            entries[s..i - 1].fill(half);
            entries[i - 1] = one;
            eps[s] = true;
            eps[i - 1] = true;
        }
    }
    OpSeq::new(entries, eps, ctx.p())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, n: usize) -> Context {
        Context::new(p, n).unwrap()
    }

    fn lower(ints: &[u64], p: u32) -> OpSeq {
        OpSeq::from_ints(ints, &ctx(p, ints.len())).unwrap()
    }

    fn upper(ints: &[u64], p: u32) -> UpperSeq {
        UpperSeq::from_ints(ints, &ctx(p, ints.len())).unwrap()
    }

    #[test]
    fn lower_degrees() {
        assert_eq!(lower(&[0, 2], 3).degree().unwrap(), Nat(24));
        assert_eq!(lower(&[1, 1], 2).degree().unwrap(), Nat(3));
        let i21 = family(Family::I { i: 1 }, &ctx(3, 2)).unwrap();
        assert_eq!(i21.degree().unwrap(), Nat(12));
    }

    #[test]
    fn upper_degrees() {
        assert_eq!(upper(&[4, 2], 3).degree().unwrap(), Nat(24));
        for p in [2, 3, 5, 7] {
            assert_eq!(upper(&[0, 0, 0], p).degree().unwrap(), Nat(0));
        }
        assert_eq!(upper(&[2, 1], 2).degree().unwrap(), Nat(3));
    }

    #[test]
    fn negative_degree_is_malformed() {
        let s = OpSeq::from_twice(&[0], &[true], &ctx(3, 1)).unwrap();
        assert!(matches!(s.degree(), Err(Error::Malformed(_))));
    }

    #[test]
    fn lower_excess() {
        assert_eq!(lower(&[0, 2], 3).excess(), Some(0));
        assert_eq!(lower(&[3, 1], 3).excess(), Some(6));
        let j = family(Family::J { i: 1 }, &ctx(3, 2)).unwrap();
        assert_eq!(j.excess(), Some(1));
        let empty = OpSeq::new(vec![], vec![], 3).unwrap();
        assert_eq!(empty.excess(), None);
    }

    #[test]
    fn upper_excess() {
        assert_eq!(upper(&[4, 2], 3).excess().unwrap(), -4);
        assert_eq!(upper(&[4, 1], 2).excess().unwrap(), 3);
        assert_eq!(upper(&[7], 5).excess().unwrap(), 7);
    }

    #[test]
    fn notation_conversion() {
        assert_eq!(lower(&[0, 2], 3).to_upper().unwrap(), upper(&[4, 2], 3));
        assert_eq!(lower(&[0, 0, 0], 5).to_upper().unwrap(), upper(&[0, 0, 0], 5));
        assert_eq!(upper(&[4, 1], 2).to_lower().unwrap(), lower(&[3, 1], 2));
        assert!(upper(&[0, 1], 2).to_lower().is_err());
    }

    #[test]
    fn admissibility() {
        assert!(lower(&[0, 2], 3).is_admissible());
        assert!(!lower(&[3, 1], 3).is_admissible());
        assert!(lower(&[1, 1, 2], 3).is_admissible());
        let s = OpSeq::from_twice(&[2, 1], &[false, true], &ctx(3, 2)).unwrap();
        assert!(!s.is_admissible());
        let s = OpSeq::from_twice(&[1, 1], &[true, false], &ctx(3, 2)).unwrap();
        assert!(s.is_admissible());
        // b e_(3/2) b e_1 is Q^3 b Q^1 in upper notation, and 3 >= 3 * 1
        let s = OpSeq::from_twice(&[3, 2], &[true, true], &ctx(3, 2)).unwrap();
        assert!(!s.is_admissible());
        let s = OpSeq::from_twice(&[1, 2], &[true, true], &ctx(3, 2)).unwrap();
        assert!(s.is_admissible());
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(compare(&lower(&[0, 3], 2), &lower(&[2, 2], 2)), Ordering::Less);
        let s = lower(&[1, 2], 3);
        assert_eq!(compare(&s, &s), Ordering::Equal);
        assert_eq!(compare(&lower(&[1, 2], 2), &lower(&[0, 3], 2)), Ordering::Greater);
    }

    #[test]
    fn direct_sums() {
        let c1 = ctx(3, 1);
        let a = OpSeq::from_ints(&[1], &c1).unwrap();
        let b = OpSeq::from_ints(&[2], &c1).unwrap();
        assert_eq!(a.direct_sum(&b).unwrap(), lower(&[1, 2], 3));
        let zero2 = OpSeq::zero(&ctx(3, 2));
        assert_eq!(zero2.direct_sum(&lower(&[1, 1], 3)).unwrap(), lower(&[0, 0, 1, 1], 3));
        let empty = OpSeq::new(vec![], vec![], 3).unwrap();
        assert_eq!(lower(&[3, 1], 3).direct_sum(&empty).unwrap(), lower(&[3, 1], 3));
        assert!(lower(&[1], 2).direct_sum(&lower(&[1], 3)).is_err());
    }

    #[test]
    fn family_shapes() {
        let c = ctx(3, 2);
        assert_eq!(family(Family::I { i: 1 }, &c).unwrap(), lower(&[0, 1], 3));
        let o = family(Family::O { i: 2 }, &ctx(3, 3)).unwrap();
        assert_eq!(o, lower(&[0, 1, 0], 3));
        assert_eq!(o.degree().unwrap(), Nat(2 * 3 * 2));
        let k = family(Family::K { s: 0, i: 1 }, &c).unwrap();
        assert_eq!(k.twice(), vec![1, 2]);
        assert_eq!(k.eps(), &[true, true]);
        assert_eq!(k.degree().unwrap(), Nat(2 * (3 * 2 - 1)));
        assert!(family(Family::K { s: 1, i: 1 }, &c).is_err());
        assert!(family(Family::J { i: 0 }, &ctx(2, 2)).is_err());
        assert!(family(Family::O { i: 0 }, &c).is_err());
    }

    fn pw(p: u32, e: usize) -> i128 {
        (p as i128).pow(e as u32)
    }

    // Closed-form degrees and excesses of every family, over a range of n and p.
    #[test]
    fn family_closed_forms() {
        for p in [3u32, 5, 7] {
            for n in 1..=4usize {
                let c = ctx(p, n);
                let deg = |f| family(f, &c).unwrap().degree().unwrap().0 as i128;
                let exc = |f| family(f, &c).unwrap().excess().unwrap();
                for i in 0..n {
                    assert_eq!(deg(Family::I { i }), 2 * pw(p, i) * (pw(p, n - i) - 1));
                    if i > 0 {
                        assert_eq!(exc(Family::I { i }), 0);
                    }
                    assert_eq!(deg(Family::J { i }), 2 * pw(p, i) * (pw(p, n - i) - 1) - 1);
                    assert_eq!(exc(Family::J { i }), 1);
                    for s in 0..i {
                        assert_eq!(deg(Family::K { s, i }), 2 * (pw(p, i) * (pw(p, n - i) - 1) - pw(p, s)));
                        assert_eq!(exc(Family::K { s, i }), 0);
                    }
                }
                for i in 1..=n {
                    assert_eq!(deg(Family::O { i }), 2 * pw(p, i - 1) * (p as i128 - 1));
                    if i > 1 {
                        assert_eq!(exc(Family::O { i }), 0);
                    }
                    assert_eq!(deg(Family::JLow { i }), 2 * pw(p, i - 1) * (p as i128 - 1) - 1);
                    assert_eq!(exc(Family::JLow { i }), 1);
                    for s in 0..i.saturating_sub(1) {
                        assert_eq!(deg(Family::KLow { s, i }), 2 * (pw(p, i) - pw(p, s) - pw(p, i - 1)));
                        assert_eq!(exc(Family::KLow { s, i }), 0);
                    }
                }
            }
        }
        for n in 1..=5usize {
            let c = ctx(2, n);
            for i in 0..n {
                let s = family(Family::I { i }, &c).unwrap();
                assert_eq!(s.degree().unwrap().0 as i128, pw(2, n) - pw(2, i));
            }
            for i in 1..=n {
                let s = family(Family::O { i }, &c).unwrap();
                assert_eq!(s.degree().unwrap().0 as i128, pw(2, i - 1));
            }
        }
    }

    // All sequences with entries (doubled) up to `max_twice`, eps arbitrary for odd p.
    fn all_seqs(p: u32, n: usize, max_twice: u64) -> Vec<OpSeq> {
        let c = ctx(p, n);
        let step = if p == 2 { 2 } else { 1 };
        let mut out = Vec::new();
        let mut twice = vec![0u64; n];
        let eps_count = if p == 2 { 1 } else { 1 << n };
        loop {
            for mask in 0..eps_count {
                let eps: Vec<bool> = (0..n).map(|t| mask >> t & 1 == 1).collect();
                out.push(OpSeq::from_twice(&twice, &eps, &c).unwrap());
            }
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                twice[k] += step;
                if twice[k] <= max_twice {
                    break;
                }
                twice[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn round_trip_and_degree_agreement() {
        for p in [2u32, 3] {
            for n in 1..=3 {
                for s in all_seqs(p, n, 20) {
                    let Ok(u) = s.to_upper() else {
                        // only Bockstein-bearing sequences with a degree -1 tail can fail
                        assert!(s.has_bockstein());
                        continue;
                    };
                    assert_eq!(u.to_lower().unwrap(), s);
                    if let Ok(d) = s.degree() {
                        assert_eq!(u.degree().unwrap(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_iff_weakly_increasing() {
        for p in [2u32, 3] {
            for s in all_seqs(p, 3, 12).into_iter().filter(|s| !s.has_bockstein()) {
                let inc = s.entries().windows(2).all(|w| w[0] <= w[1]);
                assert_eq!(s.is_admissible(), inc, "{s}");
            }
        }
    }

    #[test]
    fn compare_is_antisymmetric_on_admissible_degree_classes() {
        use std::collections::BTreeMap;
        for p in [2u32, 3] {
            for n in 1..=3 {
                let mut by_degree: BTreeMap<Nat, Vec<OpSeq>> = BTreeMap::new();
                for s in all_seqs(p, n, 16) {
                    if s.is_admissible() {
                        if let Ok(d) = s.degree() {
                            by_degree.entry(d).or_default().push(s);
                        }
                    }
                }
                for class in by_degree.values() {
                    for a in class {
                        for b in class {
                            if compare(a, b) == Ordering::Equal {
                                assert_eq!(a, b);
                            }
                            assert_eq!(compare(a, b), compare(b, a).reverse());
                        }
                    }
                }
            }
        }
    }
}
