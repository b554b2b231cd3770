//! Realizing `B[n]` inside `S[n] = F_p[y_1, ..., y_n]` and checking
//! invariance under generators of the Borel subgroup and of `GL_n`.

use super::dickson::{expand_dickson_monomial, BPoly, DicksonMono};
use super::poly::Poly;
use crate::arith::{Context, Fp};
use crate::error::{Error, Result};

/// A polynomial in `y_1..y_n`.
pub type YPoly = Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Borel,
    General,
}

fn guard(ctx: &Context) -> Result<()> {
    if ctx.n() > 3 || (ctx.n() == 3 && ctx.p() > 3) {
        return Err(Error::SizeGuard(format!(
            "realization in y needs n <= 2, or n = 3 with p in {{2, 3}} (got p = {}, n = {})",
            ctx.p(),
            ctx.n()
        )));
    }
    Ok(())
}

fn primitive_root(p: u32) -> u32 {
    (1..p).find(|&g| (1..p - 1).all(|e| Fp::new(g as i64, p).pow(e as u64).value() != 1)).unwrap_or(1)
}

/// `h_k = (prod over u in span(y_1..y_(k-1)) of (y_k - u))^(p-1)`, `k` 1-based.
pub fn h_in_y(k: usize, ctx: &Context) -> Result<YPoly> {
    guard(ctx)?;
    let (p, n) = (ctx.p(), ctx.n());
    let mut orbit = Poly::one(p, n);
    let count = (p as usize).pow(k as u32 - 1);
    for code in 0..count {
        let mut factor = Poly::var(p, n, k - 1);
        let mut c = code;
        for b in 0..k - 1 {
            let coeff = (c % p as usize) as i64;
            c /= p as usize;
            factor = factor.sub(&Poly::var(p, n, b).scale(Fp::new(coeff, p)));
        }
        orbit = orbit.mul(&factor)?;
    }
    orbit.pow(p as u64 - 1)
}

/// Substitute `h_k -> h_in_y(k)`.
pub fn realize_in_y(x: &BPoly, ctx: &Context) -> Result<YPoly> {
    guard(ctx)?;
    let images = (1..=ctx.n()).map(|k| h_in_y(k, ctx)).collect::<Result<Vec<_>>>()?;
    x.compose(&images)
}

pub fn realize_dickson(m: &DicksonMono, ctx: &Context) -> Result<YPoly> {
    realize_in_y(&expand_dickson_monomial(m, ctx)?, ctx)
}

/// Generators acting by linear substitution of the variables: every
/// transvection `y_a -> y_a + y_b` with `b < a`, scaling one variable by a
/// primitive root, and for `GL_n` every adjacent transposition.
pub fn generators(group: Group, ctx: &Context) -> Vec<Vec<YPoly>> {
    let (p, n) = (ctx.p(), ctx.n());
    let ident: Vec<YPoly> = (0..n).map(|k| Poly::var(p, n, k)).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..a {
            let mut g = ident.clone();
            g[a] = ident[a].add(&ident[b]);
            out.push(g);
        }
    }
    let root = primitive_root(p);
    if root != 1 {
        for a in 0..n {
            let mut g = ident.clone();
            g[a] = ident[a].scale(Fp::new(root as i64, p));
            out.push(g);
        }
    }
    if group == Group::General {
        for a in 0..n.saturating_sub(1) {
            let mut g = ident.clone();
            g.swap(a, a + 1);
            out.push(g);
        }
    }
    out
}

/// True when every generator of `group` fixes `x`.
pub fn check_invariance(x: &YPoly, group: Group, ctx: &Context) -> Result<bool> {
    guard(ctx)?;
    for g in generators(group, ctx) {
        if x.compose(&g)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::poly::render;

    fn ctx(p: u32, n: usize) -> Context {
        Context::new(p, n).unwrap()
    }

    #[test]
    fn examples() {
        let c1 = ctx(3, 1);
        let d10 = realize_dickson(&DicksonMono::generator(0, 1, &c1).unwrap(), &c1).unwrap();
        assert_eq!(render(&d10, "y"), "y1^2");
        assert!(check_invariance(&d10, Group::General, &c1).unwrap());

        let c2 = ctx(2, 2);
        let h2 = h_in_y(2, &c2).unwrap();
        assert_eq!(render(&h2, "y"), "y1*y2 + y2^2");
        assert!(check_invariance(&h2, Group::Borel, &c2).unwrap());
        assert!(!check_invariance(&h2, Group::General, &c2).unwrap());

        let d21 = realize_dickson(&DicksonMono::generator(1, 1, &c2).unwrap(), &c2).unwrap();
        assert!(check_invariance(&d21, Group::General, &c2).unwrap());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(h_in_y(1, &ctx(5, 3)), Err(Error::SizeGuard(_))));
        assert!(matches!(h_in_y(1, &ctx(2, 4)), Err(Error::SizeGuard(_))));
    }
}
