//! Identities among Dickson generators of different widths, checked by
//! expanding both sides in the `h_t`.

use std::fmt;

use super::dickson::dickson_in_width;
use super::poly::{render_monomial, Poly};
use crate::arith::{pow_u64, Fp};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `d_{k,s} d_{k+1,k} - d_{k+1,s}` against its expansion as a sum over
    /// `t < s` of terms in `d_{k-t-1,*}` and `h_{k-t}`, closed by
    /// `d_{k-s,0}^(p^s) d_{k-s,k-s-1}^(p^(s+1))`.
    Decomposition { k: usize, s: usize },
    /// The same difference against the commonly quoted form whose last term
    /// is `d_{k-s,1}^(p^(s-1)) h_{k-s+1}^(p^(s-1))` (dropped when `s = 0`).
    QuotedDecomposition { k: usize, s: usize },
    /// Every term of `d_{k+t,s}` is a term of `d_{k,s} d_{k+t,k}`, and no term
    /// of the difference is divisible by `h_(k+1) ... h_(k+t)`.
    Inclusion { k: usize, t: usize, s: usize },
    /// Every term of `d_{k+q,k} d_{k+t,s}` is a term of `d_{k+q,s} d_{k+t,k}`,
    /// and no term of the difference is divisible by `h_(k+q+1) ... h_(k+t)`.
    DoubleInclusion { k: usize, q: usize, t: usize, s: usize },
}

/// A monomial witnessing a failed identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub monomial: Vec<u64>,
    pub reason: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", render_monomial(&self.monomial, "h"), self.reason)
    }
}

/// `None` when the identity holds, otherwise the first offending monomial.
pub fn identity_check(kind: Identity, p: u32) -> Result<Option<Counterexample>> {
    match kind {
        Identity::Decomposition { k, s } => {
            check_range(s < k, "0 <= s < k")?;
            let lhs = decomposition_lhs(k, s, p)?;
            compare_polys(&lhs, &decomposition_rhs(k, s, p)?)
        }
        Identity::QuotedDecomposition { k, s } => {
            check_range(s < k, "0 <= s < k")?;
            let lhs = decomposition_lhs(k, s, p)?;
            compare_polys(&lhs, &quoted_rhs(k, s, p)?)
        }
        Identity::Inclusion { k, t, s } => {
            check_range(s < k && t >= 1, "0 <= s < k, 1 <= t")?;
            let w = k + t;
            let big = d(k, s, p, w)?.mul(&d(w, k, p, w)?)?;
            let small = d(w, s, p, w)?;
            inclusion(&small, &big, k + 1..=w)
        }
        Identity::DoubleInclusion { k, q, t, s } => {
            check_range(s < k && q < t, "0 <= s < k, 0 <= q < t")?;
            let w = k + t;
            let big = d(k + q, s, p, w)?.mul(&d(w, k, p, w)?)?;
            let small = d(k + q, k, p, w)?.mul(&d(w, s, p, w)?)?;
            inclusion(&small, &big, k + q + 1..=w)
        }
    }
}

pub fn holds(kind: Identity, p: u32) -> Result<bool> {
    Ok(identity_check(kind, p)?.is_none())
}

fn check_range(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("identity parameters need {what}")))
    }
}

fn d(k: usize, s: usize, p: u32, w: usize) -> Result<Poly> {
    dickson_in_width(k, s as i64, p, w)
}

fn d_at(k: i64, s: i64, p: u32, w: usize) -> Result<Poly> {
    if k < 0 {
        return Ok(Poly::zero(p, w));
    }
    dickson_in_width(k as usize, s, p, w)
}

fn h_pow(k: usize, e: u64, p: u32, w: usize) -> Poly {
    let mut exps = vec![0; w];
    exps[k - 1] = e;
    Poly::monomial(p, exps, Fp::one(p))
}

fn q(p: u32, e: i64) -> Result<u64> {
    pow_u64(p, e as u32)
}

fn decomposition_lhs(k: usize, s: usize, p: u32) -> Result<Poly> {
    let w = k + 1;
    Ok(d(k, s, p, w)?.mul(&d(k + 1, k, p, w)?)?.sub(&d(k + 1, s, p, w)?))
}

fn decomposition_rhs(k: usize, s: usize, p: u32) -> Result<Poly> {
    let w = k + 1;
    let (ki, si) = (k as i64, s as i64);
    let mut out = Poly::zero(p, w);
    for t in 0..si {
        let head = d_at(ki - t - 1, si - t, p, w)?.frobenius(t as u32)?;
        let tail = d_at(ki - t - 1, ki - t - 2, p, w)?.frobenius(t as u32 + 2)?;
        let h = h_pow((ki - t) as usize, q(p, t)?, p, w);
        out = out.add(&head.mul(&tail)?.mul(&h)?);
        let hh = h_pow((ki - t) as usize, q(p, t)? * (p as u64 + 1), p, w);
        out = out.add(&head.mul(&hh)?);
    }
    let last = d_at(ki - si, 0, p, w)?
        .frobenius(s as u32)?
        .mul(&d_at(ki - si, ki - si - 1, p, w)?.frobenius(s as u32 + 1)?)?;
    Ok(out.add(&last))
}

fn quoted_rhs(k: usize, s: usize, p: u32) -> Result<Poly> {
    let w = k + 1;
    let (ki, si) = (k as i64, s as i64);
    let mut out = Poly::zero(p, w);
    for t in 0..si {
        let head = d_at(ki - t - 1, si - t, p, w)?.frobenius(t as u32)?;
        let tail = d_at(ki - t - 1, ki - t - 2, p, w)?.frobenius(t as u32 + 2)?;
        let h = h_pow((ki - t) as usize, q(p, t)?, p, w);
        out = out.add(&head.mul(&tail)?.mul(&h)?);
    }
    out = out.add(
        &d_at(ki - si, 0, p, w)?
            .frobenius(s as u32)?
            .mul(&d_at(ki - si, ki - si - 1, p, w)?.frobenius(s as u32 + 1)?)?,
    );
    if s >= 1 {
        let e = q(p, si - 1)?;
        out = out.add(&d_at(ki - si, 1, p, w)?.frobenius(s as u32 - 1)?.mul(&h_pow(k - s + 1, e, p, w))?);
    }
    Ok(out)
}

fn compare_polys(lhs: &Poly, rhs: &Poly) -> Result<Option<Counterexample>> {
    let diff = lhs.sub(rhs);
    let first = diff.support().next().map(|e| e.to_vec());
    Ok(first.map(|e| Counterexample {
        reason: format!("coefficient {} on the left, {} on the right", lhs.coeff(&e).value(), rhs.coeff(&e).value()),
        monomial: e,
    }))
}

// 1-based variable range `vars` whose product must divide no term of `big - small`.
fn inclusion(small: &Poly, big: &Poly, vars: std::ops::RangeInclusive<usize>) -> Result<Option<Counterexample>> {
    for (e, c) in small.terms() {
        if big.coeff(e) != c {
            return Ok(Some(Counterexample {
                monomial: e.to_vec(),
                reason: format!("coefficient {} in the smaller product, {} in the larger", c.value(), big.coeff(e).value()),
            }));
        }
    }
    let diff = big.sub(small);
    for (e, _) in diff.terms() {
        if vars.clone().all(|v| e[v - 1] > 0) {
            return Ok(Some(Counterexample {
                monomial: e.to_vec(),
                reason: format!("term of the difference divisible by h{}..h{}", vars.start(), vars.end()),
            }));
        }
    }
    Ok(None)
}
