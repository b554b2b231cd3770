//! Sparse commutative polynomials over `F_p`, keyed by exponent vectors.
//!
//! Used both for `B[n]` (variables `h_1..h_n`) and for `S[n]` (variables
//! `y_1..y_n`). Keys iterate in lexicographic order; exponent arithmetic is
//! checked.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{pow_u64, Fp, Nat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u64>, Fp>,
}

impl Poly {
    pub fn zero(p: u32, nvars: usize) -> Poly {
        Poly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn one(p: u32, nvars: usize) -> Poly {
        Poly::monomial(p, vec![0; nvars], Fp::one(p))
    }

    pub fn monomial(p: u32, exps: Vec<u64>, c: Fp) -> Poly {
        let mut out = Poly::zero(p, exps.len());
        out.add_term(exps, c);
        out
    }

    /// The variable with 0-based index `k`.
    pub fn var(p: u32, nvars: usize, k: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Poly::monomial(p, e, Fp::one(p))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Terms in increasing lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u64], Fp)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u64]) -> Fp {
        self.terms.get(exps).copied().unwrap_or(Fp::zero(self.p))
    }

    pub fn support(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.terms.keys().map(|k| k.as_slice())
    }

    pub fn add_term(&mut self, exps: Vec<u64>, c: Fp) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert(Fp::zero(self.p));
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.to_vec(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.to_vec(), -c);
        }
        out
    }

    pub fn scale(&self, c: Fp) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (e, v) in self.terms() {
            out.add_term(e.to_vec(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        let mut acc: BTreeMap<Vec<u64>, Fp> = BTreeMap::new();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let key = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow))
                    .collect::<Result<Vec<u64>>>()?;
                *acc.entry(key).or_insert(Fp::zero(self.p)) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Poly { p: self.p, nvars: self.nvars, terms: acc })
    }

    /// `f^(p^k)`: in characteristic p this only scales exponents.
    pub fn frobenius(&self, k: u32) -> Result<Poly> {
        let q = pow_u64(self.p, k)?;
        let mut out = Poly::zero(self.p, self.nvars);
        for (e, c) in self.terms() {
            let key = e.iter().map(|x| x.checked_mul(q).ok_or(Error::Overflow)).collect::<Result<Vec<u64>>>()?;
            out.add_term(key, c);
        }
        Ok(out)
    }

    /// `f^e`, splitting `e` into base-p digits and applying Frobenius per digit.
    pub fn pow(&self, e: u64) -> Result<Poly> {
        let mut acc = Poly::one(self.p, self.nvars);
        let mut rest = e;
        let mut k = 0u32;
        while rest > 0 {
            let digit = rest % self.p as u64;
            if digit > 0 {
                let mut small = Poly::one(self.p, self.nvars);
                for _ in 0..digit {
                    small = small.mul(self)?;
                }
                acc = acc.mul(&small.frobenius(k)?)?;
            }
            rest /= self.p as u64;
            k += 1;
        }
        Ok(acc)
    }

    /// Substitute `images[k]` for variable `k`.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, got: images.len() });
        }
        let target = images.first().map(|q| q.nvars).unwrap_or(0);
        let mut cache: Vec<BTreeMap<u64, Poly>> = vec![BTreeMap::new(); self.nvars];
        let mut out = Poly::zero(self.p, target);
        for (e, c) in self.terms() {
            let mut term = Poly::monomial(self.p, vec![0; target], c);
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !cache[k].contains_key(&x) {
                    let pw = images[k].pow(x)?;
                    cache[k].insert(x, pw);
                }
                term = term.mul(&cache[k][&x])?;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `a` divides `b` monomially.
    pub fn divides(a: &[u64], b: &[u64]) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    /// The same polynomial in more variables (new variables appended).
    pub fn widen(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        let mut out = Poly::zero(self.p, nvars);
        for (e, c) in self.terms() {
            let mut k = e.to_vec();
            k.resize(nvars, 0);
            out.add_term(k, c);
        }
        out
    }
}

/// Weighted degree `sum_t exps_t * weights_t`, checked.
pub fn weighted_degree(exps: &[u64], weights: &[u64]) -> Result<Nat> {
    let mut d = Nat::ZERO;
    for (&e, &w) in exps.iter().zip(weights) {
        d = d.checked_add(Nat(e as u128).checked_mul(Nat(w as u128))?)?;
    }
    Ok(d)
}

/// Render with variable stem `var`, highest monomial first: `h1^3 + 2*h1*h2 + h2`.
pub fn render(poly: &Poly, var: &str) -> String {
    if poly.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::with_capacity(poly.len());
    for (e, c) in poly.terms().rev() {
        let mono = render_monomial(e, var);
        parts.push(match (c.value(), mono.as_str()) {
            (v, "1") => v.to_string(),
            (1, m) => m.to_string(),
            (v, m) => format!("{v}*{m}"),
        });
    }
    parts.join(" + ")
}

/// `h1^3*h2`, or `1` for the empty monomial.
pub fn render_monomial(exps: &[u64], var: &str) -> String {
    let factors: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| if e == 1 { format!("{var}{}", k + 1) } else { format!("{var}{}^{e}", k + 1) })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", render(self, "x"), self.p)
    }
}
