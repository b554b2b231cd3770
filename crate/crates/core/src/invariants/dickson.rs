//! Dickson generators `d_{n,j}` written in the Borel generators `h_t`, and
//! the maps relating Dickson monomials to admissible sequences.

use rayon::prelude::*;

use super::poly::{weighted_degree, Poly};
use crate::arith::{multinom_mod_p, padic_digits, pow_u64, Context, Fp, Nat};
use crate::error::{Error, Result};
use crate::sequences::OpSeq;

/// A polynomial in `h_1..h_n`.
pub type BPoly = Poly;

/// Exponent vector of a monomial `h^J`.
pub type HMonomial = Vec<u64>;

/// `d^m = prod_i d_{n,i}^(m_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DicksonMono {
    m: Vec<u64>,
}

impl DicksonMono {
    pub fn new(m: Vec<u64>, ctx: &Context) -> Result<DicksonMono> {
        if m.len() != ctx.n() {
            return Err(Error::LengthMismatch { expected: ctx.n(), got: m.len() });
        }
        Ok(DicksonMono { m })
    }

    pub fn one(ctx: &Context) -> DicksonMono {
        DicksonMono { m: vec![0; ctx.n()] }
    }

    /// `d_{n,i}^e`.
    pub fn generator(i: usize, e: u64, ctx: &Context) -> Result<DicksonMono> {
        if i >= ctx.n() {
            return Err(Error::OutOfRange(format!("d_{{{},{i}}} needs 0 <= i <= n-1", ctx.n())));
        }
        let mut m = vec![0; ctx.n()];
        m[i] = e;
        Ok(DicksonMono { m })
    }

    #[inline]
    pub fn exps(&self) -> &[u64] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn degree(&self, ctx: &Context) -> Result<Nat> {
        let w = (0..ctx.n()).map(|i| generator_degree(i, ctx).and_then(|d| d.to_u64())).collect::<Result<Vec<_>>>()?;
        weighted_degree(&self.m, &w)
    }

    pub fn mul(&self, other: &DicksonMono) -> Result<DicksonMono> {
        let m = self.m.iter().zip(&other.m).map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow)).collect::<Result<_>>()?;
        Ok(DicksonMono { m })
    }
}

/// `|d_{n,i}| = 2(p^n - p^i)`, or `2^n - 2^i` for p = 2.
pub fn generator_degree(i: usize, ctx: &Context) -> Result<Nat> {
    let top = pow_u64(ctx.p(), ctx.n() as u32)?;
    let low = pow_u64(ctx.p(), i as u32)?;
    let d = Nat::from(top - low);
    if ctx.is_odd() {
        d.checked_mul(Nat(2))
    } else {
        Ok(d)
    }
}

/// `|h_t| = 2 p^(t-1) (p-1)`, or `2^(t-1)` for p = 2; index 0 is `h_1`.
pub fn h_weights(ctx: &Context) -> Result<Vec<u64>> {
    (0..ctx.n())
        .map(|t| {
            let pt = pow_u64(ctx.p(), t as u32)?;
            if ctx.is_odd() {
                pt.checked_mul(2 * (ctx.p() as u64 - 1)).ok_or(Error::Overflow)
            } else {
                Ok(pt)
            }
        })
        .collect()
}

pub fn h_degree(exps: &[u64], ctx: &Context) -> Result<Nat> {
    if exps.len() != ctx.n() {
        return Err(Error::LengthMismatch { expected: ctx.n(), got: exps.len() });
    }
    weighted_degree(exps, &h_weights(ctx)?)
}

/// Closed formula for `d_{k,s}` in `h_1..h_k`, embedded in `nvars >= k`
/// variables: a sum over `(k-s)`-subsets `j_1 < ... < j_(k-s)` of
/// `prod_r h_(j_r)^(p^(s + r - j_r))`. `d_{k,k} = 1`; zero outside `0..=k`.
pub fn dickson_in_width(k: usize, s: i64, p: u32, nvars: usize) -> Result<Poly> {
    if s < 0 || s as usize > k {
        return Ok(Poly::zero(p, nvars));
    }
    if k > nvars {
        return Err(Error::OutOfRange(format!("width {k} exceeds {nvars} variables")));
    }
    let s = s as usize;
    let size = k - s;
    let mut out = Poly::zero(p, nvars);
    let mut subset: Vec<usize> = (1..=size).collect();
    loop {
        let mut e = vec![0u64; nvars];
        for (r, &j) in subset.iter().enumerate() {
            e[j - 1] = pow_u64(p, (s + r + 1 - j) as u32)?;
        }
        out.add_term(e, Fp::one(p));
        // next subset in lexicographic order
        let mut r = size;
        loop {
            if r == 0 {
                return Ok(out);
            }
            r -= 1;
            if subset[r] < k - (size - 1 - r) {
                break;
            }
        }
        subset[r] += 1;
        for q in r + 1..size {
            subset[q] = subset[q - 1] + 1;
        }
    }
}

/// `d_{n,j}` in `B[n]`.
pub fn dickson_to_borel(j: usize, ctx: &Context) -> Result<BPoly> {
    if j >= ctx.n() {
        return Err(Error::OutOfRange(format!("d_{{{},{j}}} needs 0 <= j <= n-1", ctx.n())));
    }
    dickson_in_width(ctx.n(), j as i64, ctx.p(), ctx.n())
}

/// `d_{k,s}` by `d_{k,s} = d_{k-1,s-1}^p + d_{k-1,s} h_k`, from `d_{k,k} = 1`.
pub fn dickson_to_borel_recursive(k: usize, s: i64, ctx: &Context) -> Result<BPoly> {
    if k > ctx.n() {
        return Err(Error::OutOfRange(format!("width {k} exceeds n = {}", ctx.n())));
    }
    recursive_in_width(k, s, ctx.p(), ctx.n())
}

pub(crate) fn recursive_in_width(k: usize, s: i64, p: u32, nvars: usize) -> Result<Poly> {
    if s < 0 || s as usize > k {
        return Ok(Poly::zero(p, nvars));
    }
    if s as usize == k {
        return Ok(Poly::one(p, nvars));
    }
    let upper = recursive_in_width(k - 1, s - 1, p, nvars)?.frobenius(1)?;
    let lower = recursive_in_width(k - 1, s, p, nvars)?.mul(&Poly::var(p, nvars, k - 1))?;
    Ok(upper.add(&lower))
}

/// One member of `A_{n,j}`: the nonzero row `j` of a 0/1 matrix, with row sum `n - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMatrixA {
    pub j: usize,
    pub a: Vec<bool>,
}

/// All of `A_{n,j}`; there are `C(n, n-j)` of them.
pub fn enumerate_a(j: usize, ctx: &Context) -> Result<Vec<RowMatrixA>> {
    let n = ctx.n();
    if j >= n {
        return Err(Error::OutOfRange(format!("A_{{{n},{j}}} needs 0 <= j <= n-1")));
    }
    Ok((0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == n - j)
        .map(|mask| RowMatrixA { j, a: (0..n).map(|t| mask >> t & 1 == 1).collect() })
        .collect())
}

/// `h^(1.C(A))` with `b_t = a_t p^(j - 1 - t + a_0 + ... + a_t)`, columns from 0.
pub fn matrix_to_monomial(row: &RowMatrixA, ctx: &Context) -> Result<HMonomial> {
    let mut ones = 0i64;
    let mut out = vec![0u64; row.a.len()];
    for (t, &bit) in row.a.iter().enumerate() {
        if bit {
            ones += 1;
            let e = row.j as i64 - 1 - t as i64 + ones;
            if e < 0 {
                return Err(Error::Malformed(format!("negative exponent in C(A) for {row:?}")));
            }
            out[t] = pow_u64(ctx.p(), e as u32)?;
        }
    }
    Ok(out)
}

/// `d_{n,j}` as the sum over `A_{n,j}`.
pub fn dickson_from_matrices(j: usize, ctx: &Context) -> Result<BPoly> {
    let mut out = Poly::zero(ctx.p(), ctx.n());
    for row in enumerate_a(j, ctx)? {
        out.add_term(matrix_to_monomial(&row, ctx)?, ctx.one());
    }
    Ok(out)
}

/// The inclusion `D[n] -> B[n]` on a monomial.
pub fn expand_dickson_monomial(m: &DicksonMono, ctx: &Context) -> Result<BPoly> {
    if m.len() != ctx.n() {
        return Err(Error::LengthMismatch { expected: ctx.n(), got: m.len() });
    }
    let factors = m
        .exps()
        .par_iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| dickson_to_borel(i, ctx)?.pow(e))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Poly::one(ctx.p(), ctx.n());
    for f in &factors {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

/// Coefficient of `h^J` in `d^m`, read off the expansion.
pub fn coeff_in_expansion(m: &DicksonMono, target: &[u64], ctx: &Context) -> Result<Fp> {
    if m.degree(ctx)? != h_degree(target, ctx)? {
        return Ok(ctx.zero());
    }
    Ok(expand_dickson_monomial(m, ctx)?.coeff(target))
}

/// Coefficient of `h^J` in `d^m` by the partition formula: write each
/// `m_j = sum_a m_{j,a} p^a`, distribute every digit `m_{j,a}` over
/// `A_{n,j}` and weight each choice by its multinomial.
pub fn coeff_by_partitions(m: &DicksonMono, target: &[u64], ctx: &Context) -> Result<Fp> {
    if m.len() != ctx.n() {
        return Err(Error::LengthMismatch { expected: ctx.n(), got: m.len() });
    }
    if m.degree(ctx)? != h_degree(target, ctx)? {
        return Ok(ctx.zero());
    }
    let mut groups: Vec<(Vec<HMonomial>, u64)> = Vec::new();
    for (j, &mj) in m.exps().iter().enumerate() {
        if mj == 0 {
            continue;
        }
        let base = enumerate_a(j, ctx)?.iter().map(|row| matrix_to_monomial(row, ctx)).collect::<Result<Vec<_>>>()?;
        for (alpha, digit) in padic_digits(Nat(mj as u128), ctx).into_iter().enumerate() {
            if digit == 0 {
                continue;
            }
            let q = pow_u64(ctx.p(), alpha as u32)?;
            let scaled = base
                .iter()
                .map(|e| e.iter().map(|x| x.checked_mul(q).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            groups.push((scaled, digit as u64));
        }
    }
    let mut remaining = target.to_vec();
    distribute_groups(&groups, 0, &mut remaining, ctx)
}

fn distribute_groups(groups: &[(Vec<HMonomial>, u64)], g: usize, remaining: &mut Vec<u64>, ctx: &Context) -> Result<Fp> {
    let Some((monos, digit)) = groups.get(g) else {
        return Ok(if remaining.iter().all(|&x| x == 0) { ctx.one() } else { ctx.zero() });
    };
    let mut parts = vec![0u64; monos.len()];
    let mut acc = ctx.zero();
    distribute_slots(groups, g, monos, 0, *digit, &mut parts, remaining, &mut acc, ctx)?;
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn distribute_slots(
    groups: &[(Vec<HMonomial>, u64)],
    g: usize,
    monos: &[HMonomial],
    slot: usize,
    left: u64,
    parts: &mut Vec<u64>,
    remaining: &mut Vec<u64>,
    acc: &mut Fp,
    ctx: &Context,
) -> Result<()> {
    if slot + 1 == monos.len() {
        // the last slot takes whatever is left
        if !take(remaining, &monos[slot], left) {
            return Ok(());
        }
        parts[slot] = left;
        let nat_parts: Vec<Nat> = parts.iter().map(|&x| Nat(x as u128)).collect();
        let c = multinom_mod_p(&nat_parts, ctx)?;
        if !c.is_zero() {
            *acc += c * distribute_groups(groups, g + 1, remaining, ctx)?;
        }
        give(remaining, &monos[slot], left);
        parts[slot] = 0;
        return Ok(());
    }
    for k in 0..=left {
        if !take(remaining, &monos[slot], k) {
            break;
        }
        parts[slot] = k;
        distribute_slots(groups, g, monos, slot + 1, left - k, parts, remaining, acc, ctx)?;
        give(remaining, &monos[slot], k);
    }
    parts[slot] = 0;
    Ok(())
}

// remaining -= k * mono, if that stays nonnegative
fn take(remaining: &mut [u64], mono: &[u64], k: u64) -> bool {
    if remaining.iter().zip(mono).any(|(r, e)| e.saturating_mul(k) > *r) {
        return false;
    }
    for (r, e) in remaining.iter_mut().zip(mono) {
        *r -= e * k;
    }
    true
}

fn give(remaining: &mut [u64], mono: &[u64], k: u64) {
    for (r, e) in remaining.iter_mut().zip(mono) {
        *r += e * k;
    }
}

/// `chi_min(d^m)_t = m_0 + ... + m_(t-1)`: the lexicographically least
/// monomial of `d^m`, read as a lower sequence.
pub fn chi_min(m: &DicksonMono, ctx: &Context) -> Result<OpSeq> {
    let mut acc = 0u64;
    let mut out = Vec::with_capacity(m.len());
    for &mi in m.exps() {
        acc = acc.checked_add(mi).ok_or(Error::Overflow)?;
        out.push(acc);
    }
    OpSeq::from_ints(&out, ctx)
}

/// The lexicographically greatest monomial of `d^m`, additively from
/// `chi_max(d_{n,i}) = (p^i, ..., p^i, 0, ..., 0)` with `n - i` copies of `p^i`.
pub fn chi_max(m: &DicksonMono, ctx: &Context) -> Result<OpSeq> {
    let n = ctx.n();
    let mut out = vec![0u64; n];
    for (i, &mi) in m.exps().iter().enumerate() {
        let w = pow_u64(ctx.p(), i as u32)?.checked_mul(mi).ok_or(Error::Overflow)?;
        for slot in &mut out[..n - i] {
            *slot = slot.checked_add(w).ok_or(Error::Overflow)?;
        }
    }
    OpSeq::from_ints(&out, ctx)
}

/// Inverse of [`chi_min`] on admissible sequences without Bocksteins.
pub fn chi_min_inverse(seq: &OpSeq, ctx: &Context) -> Result<DicksonMono> {
    seq.check_ctx(ctx)?;
    if seq.has_bockstein() {
        return Err(Error::BocksteinUnsupported(seq.to_string()));
    }
    let ints = seq.ints().ok_or_else(|| Error::Malformed(format!("{seq} has half-integral entries")))?;
    if !seq.is_admissible() {
        return Err(Error::Malformed(format!("{seq} is not admissible")));
    }
    let mut m = Vec::with_capacity(ints.len());
    let mut prev = 0;
    for v in ints {
        m.push(v - prev);
        prev = v;
    }
    Ok(DicksonMono { m })
}

/// `Psi(d^m) = Q_(chi_min(d^m))`.
pub fn psi_map(m: &DicksonMono, ctx: &Context) -> Result<OpSeq> {
    chi_min(m, ctx)
}

/// `Psi_T(h^J) = e_J`.
pub fn psi_t(exps: &[u64], ctx: &Context) -> Result<OpSeq> {
    OpSeq::from_ints(exps, ctx)
}
