//! Linear combinations of operation sequences, the juxtaposition product,
//! the coproduct, and classical straightening by the Adem relations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arith::{binom_mod, Fp};
use crate::error::{Error, Result};
use crate::sequences::{HalfInt, OpSeq, UpperSeq};

/// Default bound on pair rewrites performed by one straightening call.
pub const REWRITE_CAP: u64 = 10_000_000;

/// A finite `F_p`-combination of sequences, with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpPoly {
    p: u32,
    terms: BTreeMap<OpSeq, Fp>,
}

impl OpPoly {
    pub fn zero(p: u32) -> OpPoly {
        OpPoly { p, terms: BTreeMap::new() }
    }

    pub fn from_seq(seq: OpSeq) -> OpPoly {
        let p = seq.p();
        let mut out = OpPoly::zero(p);
        out.add_term(seq, Fp::one(p));
        out
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpSeq, Fp)> + '_ {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    pub fn coeff(&self, seq: &OpSeq) -> Fp {
        self.terms.get(seq).copied().unwrap_or(Fp::zero(self.p))
    }

    pub fn add_term(&mut self, seq: OpSeq, c: Fp) {
        debug_assert_eq!(seq.p(), self.p);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(seq).or_insert(Fp::zero(self.p));
        *slot += c;
        if slot.is_zero() {
            // re-find to remove; entry API has no remove-from-OccupiedEntry after deref
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Fp) -> OpPoly {
        let mut out = OpPoly::zero(self.p);
        for (s, v) in self.terms() {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    /// Every key satisfies [`OpSeq::is_admissible`].
    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(OpSeq::is_admissible)
    }
}

impl FromIterator<(OpSeq, Fp)> for OpPoly {
    /// Panics on an empty iterator, since the prime cannot be inferred.
    fn from_iter<T: IntoIterator<Item = (OpSeq, Fp)>>(iter: T) -> OpPoly {
        let mut it = iter.into_iter().peekable();
        let p = it.peek().map(|(_, c)| c.modulus()).expect("empty term list");
        let mut out = OpPoly::zero(p);
        for (s, c) in it {
            out.add_term(s, c);
        }
        out
    }
}

/// Bilinear extension of [`OpSeq::direct_sum`].
pub fn concat_product(a: &OpPoly, b: &OpPoly) -> Result<OpPoly> {
    if a.p != b.p {
        return Err(Error::PrimeMismatch(a.p, b.p));
    }
    let mut out = OpPoly::zero(a.p);
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            out.add_term(sa.direct_sum(sb)?, ca * cb);
        }
    }
    Ok(out)
}

/// A raw term that may still carry negative entries.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub twice: Vec<i64>,
    pub eps: Vec<bool>,
    pub coeff: i64,
}

/// Reduce modulo the ideal of negative excess: drop terms with a negative
/// entry and terms whose coefficient vanishes mod p.
pub fn quotient_excess(raw: &[RawTerm], p: u32) -> Result<OpPoly> {
    let mut out = OpPoly::zero(p);
    for t in raw {
        if t.twice.iter().zip(&t.eps).any(|(&v, &b)| v < b as i64) {
            continue;
        }
        let entries = t.twice.iter().map(|&v| HalfInt::from_twice(v as u64)).collect();
        out.add_term(OpSeq::new(entries, t.eps.clone(), p)?, Fp::new(t.coeff, p));
    }
    Ok(out)
}

/// A finite combination of r-fold tensors of sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTensor {
    p: u32,
    terms: BTreeMap<Vec<OpSeq>, Fp>,
}

impl MultiTensor {
    pub fn zero(p: u32) -> MultiTensor {
        MultiTensor { p, terms: BTreeMap::new() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[OpSeq], Fp)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn coeff(&self, key: &[OpSeq]) -> Fp {
        self.terms.get(key).copied().unwrap_or(Fp::zero(self.p))
    }

    pub fn add_term(&mut self, key: Vec<OpSeq>, c: Fp) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert(Fp::zero(self.p));
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Apply `f` to tensor factor `pos` of every term, expanding linearly.
    pub fn map_factor<F>(&self, pos: usize, mut f: F) -> Result<MultiTensor>
    where
        F: FnMut(&OpSeq) -> Result<OpPoly>,
    {
        let mut out = MultiTensor::zero(self.p);
        for (key, c) in self.terms() {
            for (s, v) in f(&key[pos])?.terms() {
                let mut k = key.to_vec();
                k[pos] = s.clone();
                out.add_term(k, c * v);
            }
        }
        Ok(out)
    }
}

/// Two-fold tensors.
pub type TensorPoly = MultiTensor;

// One upper factor b^eps f^i, i integral.
#[derive(Clone, Copy)]
struct UpperFactor {
    i: u64,
    beta: bool,
}

fn upper_factors(s: &OpSeq) -> Result<Vec<UpperFactor>> {
    let up = s.to_upper()?;
    up.entries()
        .iter()
        .zip(up.eps())
        .map(|(e, &beta)| {
            e.as_int()
                .map(|i| UpperFactor { i, beta })
                .ok_or_else(|| Error::Malformed(format!("{s} has a half-integral upper entry")))
        })
        .collect()
}

fn lower_of(factors: &[UpperFactor], p: u32) -> Option<OpSeq> {
    let up = UpperSeq::new(
        factors.iter().map(|f| HalfInt::from_int(f.i)).collect(),
        factors.iter().map(|f| f.beta).collect(),
        p,
    )
    .ok()?;
    up.to_lower().ok().filter(|s| !negative_excess(s))
}

/// The coproduct of one sequence, computed factorwise in upper notation.
///
/// `psi f^i = sum f^(i-j) (x) f^j` and `psi b f^i = sum b f^(i-j) (x) f^j + f^(i-j) (x) b f^j`,
/// extended multiplicatively with the Koszul sign; `b f^0 = 0`. Sides with a
/// negative lower entry vanish.
pub fn coproduct(s: &OpSeq) -> Result<TensorPoly> {
    let p = s.p();
    let factors = upper_factors(s)?;
    // partial products: (left factors, right factors, sign parity)
    let mut partial: Vec<(Vec<UpperFactor>, Vec<UpperFactor>, bool)> = vec![(vec![], vec![], false)];
    for f in &factors {
        let mut next = Vec::new();
        for (left, right, odd) in &partial {
            let right_betas = right.iter().filter(|g| g.beta).count() % 2 == 1;
            for j in 0..=f.i {
                let mut choices = Vec::with_capacity(2);
                if !f.beta {
                    choices.push((false, false));
                } else {
                    if f.i - j > 0 {
                        choices.push((true, false));
                    }
                    if j > 0 {
                        choices.push((false, true));
                    }
                }
                for (lb, rb) in choices {
                    let mut l = left.clone();
                    let mut r = right.clone();
                    l.push(UpperFactor { i: f.i - j, beta: lb });
                    r.push(UpperFactor { i: j, beta: rb });
                    next.push((l, r, *odd ^ (right_betas && lb)));
                }
            }
        }
        partial = next;
    }
    let mut out = TensorPoly::zero(p);
    for (l, r, odd) in partial {
        if let (Some(a), Some(b)) = (lower_of(&l, p), lower_of(&r, p)) {
            out.add_term(vec![a, b], Fp::sign(odd as i64, p));
        }
    }
    Ok(out)
}

/// The coproduct extended linearly to a combination.
pub fn coproduct_poly(x: &OpPoly) -> Result<TensorPoly> {
    let mut out = TensorPoly::zero(x.p);
    for (s, c) in x.terms() {
        for (k, v) in coproduct(s)?.terms() {
            out.add_term(k.to_vec(), c * v);
        }
    }
    Ok(out)
}

/// The r-fold iterated coproduct, splitting the last factor each time.
pub fn iterated_coproduct(x: &OpPoly, r: usize) -> Result<MultiTensor> {
    if r == 0 {
        return Err(Error::OutOfRange("iterated coproduct needs r >= 1".into()));
    }
    let mut out = MultiTensor::zero(x.p);
    for (s, c) in x.terms() {
        out.add_term(vec![s.clone()], c);
    }
    for k in 1..r {
        let mut next = MultiTensor::zero(x.p);
        for (key, c) in out.terms() {
            for (split, v) in coproduct(&key[k - 1])?.terms() {
                let mut nk = key[..k - 1].to_vec();
                nk.extend_from_slice(split);
                next.add_term(nk, c * v);
            }
        }
        out = next;
    }
    Ok(out)
}

/// One term of a pair rewrite: coefficient, then (doubled entry, Bockstein)
/// for the left and right factors.
#[derive(Clone, Copy, Debug)]
struct PairTerm {
    coeff: Fp,
    left: (u64, bool),
    right: (u64, bool),
}

type PairKey = (bool, u64, u64, bool);

/// Classical straightening to admissible form, with a memo of pair rewrites.
pub struct Straightener {
    p: u32,
    cap: u64,
    memo: Option<HashMap<PairKey, Arc<Vec<PairTerm>>>>,
}

impl Straightener {
    pub fn new(p: u32) -> Straightener {
        Straightener { p, cap: REWRITE_CAP, memo: Some(HashMap::new()) }
    }

    /// Same engine with the pair-rewrite memo switched off.
    pub fn without_memo(p: u32) -> Straightener {
        Straightener { p, cap: REWRITE_CAP, memo: None }
    }

    pub fn with_cap(mut self, cap: u64) -> Straightener {
        self.cap = cap;
        self
    }

    pub fn straighten_seq(&mut self, s: &OpSeq) -> Result<OpPoly> {
        self.straighten(&OpPoly::from_seq(s.clone()))
    }

    /// Rewrite the leftmost inadmissible pair of every term until all terms
    /// are admissible.
    pub fn straighten(&mut self, x: &OpPoly) -> Result<OpPoly> {
        if x.p != self.p {
            return Err(Error::PrimeMismatch(x.p, self.p));
        }
        let mut done = OpPoly::zero(self.p);
        let mut pending: BTreeMap<OpSeq, Fp> = BTreeMap::new();
        for (s, c) in x.terms().filter(|(s, _)| !negative_excess(s)) {
            add_into(&mut pending, s.clone(), c);
        }
        let mut rewrites = 0u64;
        while !pending.is_empty() {
            let mut next: BTreeMap<OpSeq, Fp> = BTreeMap::new();
            for (s, c) in pending {
                let Some(t) = s.first_defect() else {
                    done.add_term(s, c);
                    continue;
                };
                rewrites += 1;
                if rewrites > self.cap {
                    return Err(Error::NonTermination(self.cap));
                }
                let key = (s.eps()[t], s.entries()[t].twice(), s.entries()[t + 1].twice(), s.eps()[t + 1]);
                for term in self.pair(key).iter() {
                    let mut entries = s.entries().to_vec();
                    let mut eps = s.eps().to_vec();
                    entries[t] = HalfInt::from_twice(term.left.0);
                    eps[t] = term.left.1;
                    entries[t + 1] = HalfInt::from_twice(term.right.0);
                    eps[t + 1] = term.right.1;
                    add_into(&mut next, OpSeq::from_parts_unchecked(self.p, entries, eps), c * term.coeff);
                }
            }
            pending = next;
        }
        Ok(done)
    }

    fn pair(&mut self, key: PairKey) -> Arc<Vec<PairTerm>> {
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(&key)) {
            return hit.clone();
        }
        let terms = Arc::new(pair_rewrite(self.p, key));
        if let Some(m) = self.memo.as_mut() {
            m.insert(key, terms.clone());
        }
        terms
    }
}

fn add_into(map: &mut BTreeMap<OpSeq, Fp>, s: OpSeq, c: Fp) {
    if c.is_zero() {
        return;
    }
    let p = c.modulus();
    let slot = map.entry(s).or_insert(Fp::zero(p));
    *slot += c;
    if slot.is_zero() {
        map.retain(|_, v| !v.is_zero());
    }
}

// Some tail `b^eps e_j ...` with `2j < eps`, i.e. a factor `b e_0`.
fn negative_excess(s: &OpSeq) -> bool {
    s.entries().iter().zip(s.eps()).any(|(e, &b)| e.twice() < b as u64)
}


/// Expand `(b^eps1 e_r)(b^eps2 e_s)` for an inadmissible pair. Doubled
/// indices throughout: `r2 = 2r`, `s2 = 2s`, `i2 = 2i`.
fn pair_rewrite(p: u32, (eps1, r2, s2, eps2): PairKey) -> Vec<PairTerm> {
    let (r2, s2) = (r2 as i64, s2 as i64);
    let pp = p as i64;
    let mut out = Vec::new();
    let push = |out: &mut Vec<PairTerm>, coeff: Fp, l2: i64, lb: bool, i2: i64, rb: bool| {
        if !coeff.is_zero() && l2 >= lb as i64 && i2 >= rb as i64 {
            out.push(PairTerm { coeff, left: (l2 as u64, lb), right: (i2 as u64, rb) });
        }
    };
    if !eps2 {
        // e_r e_s = sum_i (-1)^(r-i) C((p-1)(i-s)-1, r-i-1) e_(r+ps-pi) e_i
        let mut i2 = r2 - 2;
        while i2 >= 0 {
            let top = (pp - 1) * (i2 - s2) / 2 - 1;
            let c = Fp::sign((r2 - i2) / 2, p) * binom_mod(top, (r2 - i2) / 2 - 1, p);
            push(&mut out, c, r2 + pp * s2 - pp * i2, eps1, i2, false);
            i2 -= 2;
        }
    } else {
        // e_r b e_s = sum_i (-1)^(r-i-1/2) C((p-1)(i-s), r-i-1/2) b e_(r+ps-pi-1/2) e_i
        //           - sum_i (-1)^(r-i-1/2) C((p-1)(i-s)-1, r-i-1/2) e_(r+ps-pi) b e_i
        let mut i2 = r2 - 1;
        while i2 >= 0 {
            let b = (r2 - 1 - i2) / 2;
            let top = (pp - 1) * (i2 - s2) / 2;
            let sign = Fp::sign(b, p);
            if !eps1 {
                push(&mut out, sign * binom_mod(top, b, p), r2 + pp * s2 - pp * i2 - 1, true, i2, false);
            }
            push(&mut out, -(sign * binom_mod(top - 1, b, p)), r2 + pp * s2 - pp * i2, eps1, i2, true);
            i2 -= 2;
        }
    }
    out
}

/// Straighten with a fresh engine.
pub fn adem_straighten_classical(x: &OpPoly) -> Result<OpPoly> {
    Straightener::new(x.p).straighten(x)
}
