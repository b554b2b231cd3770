//! Text syntax for sequences, their combinations, Dickson and Borel
//! polynomials, and dual expansions.
//!
//! ```text
//! seq      := ("e" | "Q" | "E" | "Qu") "[" entry ("," entry)* [";" ["eps="] bits] "]"
//! entry    := int | int "/2"
//! dickson  := factor ("*" factor)*      factor := ("d" int | "d(" int "," int ")") ["^" int]
//! borel    := hfactor ("*" hfactor)*    hfactor := "h" int ["^" int]
//! dual     := "(" seq ")*"
//! tensor   := seq ("(x)" seq)*
//! sum      := ["-"] term (("+" | "-") term)*     term := [int "*"] atom | int
//! ```
//!
//! `E[...]` and `Qu[...]` are upper notation and are converted to lower on
//! input. Whitespace is ignored; errors carry byte offsets.

use std::fmt::Write as _;

use crate::arith::{Context, Fp};
use crate::correspondence::{sorted_by_compare, DicksonCombination, DualExpansion};
use crate::error::{Error, Result};
use crate::invariants::dickson::{BPoly, DicksonMono};
use crate::invariants::poly::{render as render_poly, Poly};
use crate::opalgebra::{MultiTensor, OpPoly};
use crate::sequences::{compare, write_body, OpSeq, UpperSeq};

/// Any value the grammar can denote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Ops(OpPoly),
    Dickson(DicksonCombination),
    Borel(BPoly),
    Dual(DualExpansion),
    Tensor(MultiTensor),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: Context,
}

fn syntax<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { offset, message: message.into() })
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, ctx: &Context) -> Parser<'a> {
        Parser { src: text.as_bytes(), pos: 0, ctx: *ctx }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            syntax(self.pos, format!("expected `{s}`"))
        }
    }

    fn at_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return syntax(start, "expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::OutOfRange(format!("number {text} at byte {start} is too large")))
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.src.len() {
            return syntax(self.pos, "unexpected trailing input");
        }
        Ok(())
    }

    /// A signed sum of terms; `atom` returns `None` when no atom starts here.
    fn sum<T>(&mut self, mut atom: impl FnMut(&mut Self) -> Result<Option<T>>) -> Result<Vec<(Fp, Option<T>)>> {
        let p = self.ctx.p();
        let mut out = Vec::new();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            let start = self.pos;
            let (coeff, item) = if self.at_digit() {
                let c = self.int()?;
                if self.eat("*") {
                    match atom(self)? {
                        Some(t) => (c, Some(t)),
                        None => return syntax(self.pos, "expected a term after `*`"),
                    }
                } else {
                    (c, None)
                }
            } else {
                match atom(self)? {
                    Some(t) => (1, Some(t)),
                    None => return syntax(start, "expected a term"),
                }
            };
            out.push((Fp::new(sign * (coeff % p as u64) as i64, p), item));
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    fn seq(&mut self) -> Result<Option<OpSeq>> {
        self.skip_ws();
        let start = self.pos;
        let upper = if self.eat("Qu") || self.eat("E") {
            true
        } else if self.eat("Q") || self.eat("e") {
            false
        } else {
            return Ok(None);
        };
        self.expect("[")?;
        let mut twice = Vec::new();
        loop {
            let v = self.int()?;
            if self.eat("/") {
                let at = self.pos;
                if self.int()? != 2 {
                    return syntax(at, "only halves `k/2` are allowed");
                }
                twice.push(v);
            } else {
                twice.push(v.checked_mul(2).ok_or_else(|| Error::OutOfRange(format!("entry {v} is too large")))?);
            }
            if !self.eat(",") {
                break;
            }
        }
        let mut eps = vec![false; twice.len()];
        if self.eat(";") {
            self.eat("eps=");
            let at = self.pos;
            let mut bits = Vec::new();
            while let Some(c) = self.peek() {
                match c {
                    b'0' | b'1' => bits.push(c == b'1'),
                    b',' => {}
                    _ => break,
                }
                self.pos += 1;
            }
            if bits.len() != twice.len() {
                return syntax(at, format!("expected {} Bockstein bits, found {}", twice.len(), bits.len()));
            }
            eps = bits;
        }
        self.expect("]")?;
        if twice.len() != self.ctx.n() {
            return Err(Error::LengthMismatch { expected: self.ctx.n(), got: twice.len() });
        }
        if self.ctx.p() == 2 && eps.iter().any(|&b| b) {
            return Err(Error::BocksteinUnsupported(format!("Bockstein bits at byte {start} with p = 2")));
        }
        let s = if upper {
            UpperSeq::from_twice(&twice, &eps, &self.ctx)?.to_lower()?
        } else {
            OpSeq::from_twice(&twice, &eps, &self.ctx)?
        };
        Ok(Some(s))
    }

    fn dickson(&mut self) -> Result<Option<DicksonMono>> {
        if self.peek() != Some(b'd') {
            return Ok(None);
        }
        let n = self.ctx.n();
        let mut m = vec![0u64; n];
        loop {
            let at = self.pos;
            self.expect("d")?;
            let i = if self.eat("(") {
                let width = self.int()?;
                if width as usize != n {
                    return syntax(at, format!("d({width},..) in a context with n = {n}"));
                }
                self.expect(",")?;
                let i = self.int()?;
                self.expect(")")?;
                i
            } else {
                self.int()?
            };
            if i as usize >= n {
                return Err(Error::OutOfRange(format!("d{i} at byte {at} needs 0 <= i <= {}", n - 1)));
            }
            let e = if self.eat("^") { self.int()? } else { 1 };
            m[i as usize] = m[i as usize].checked_add(e).ok_or(Error::Overflow)?;
            let save = self.pos;
            if !self.eat("*") {
                break;
            }
            if self.peek() != Some(b'd') {
                self.pos = save;
                break;
            }
        }
        Ok(Some(DicksonMono::new(m, &self.ctx)?))
    }

    fn borel(&mut self) -> Result<Option<Vec<u64>>> {
        if self.peek() != Some(b'h') {
            return Ok(None);
        }
        let n = self.ctx.n();
        let mut e = vec![0u64; n];
        loop {
            let at = self.pos;
            self.expect("h")?;
            let k = self.int()? as usize;
            if !(1..=n).contains(&k) {
                return Err(Error::OutOfRange(format!("h{k} at byte {at} needs 1 <= k <= {n}")));
            }
            let x = if self.eat("^") { self.int()? } else { 1 };
            e[k - 1] = e[k - 1].checked_add(x).ok_or(Error::Overflow)?;
            let save = self.pos;
            if !self.eat("*") {
                break;
            }
            if self.peek() != Some(b'h') {
                self.pos = save;
                break;
            }
        }
        Ok(Some(e))
    }

    fn dual(&mut self) -> Result<Option<OpSeq>> {
        if !self.eat("(") {
            return Ok(None);
        }
        let Some(s) = self.seq()? else {
            return syntax(self.pos, "expected a sequence inside `( )*`");
        };
        self.expect(")")?;
        self.expect("*")?;
        Ok(Some(s))
    }

    fn tensor(&mut self) -> Result<Option<Vec<OpSeq>>> {
        let Some(first) = self.seq()? else {
            return Ok(None);
        };
        let mut out = vec![first];
        while self.eat("(x)") {
            match self.seq()? {
                Some(s) => out.push(s),
                None => return syntax(self.pos, "expected a sequence after `(x)`"),
            }
        }
        Ok(Some(out))
    }
}

fn constant_only<T>(terms: &[(Fp, Option<T>)], what: &str) -> Result<()> {
    if terms.iter().any(|(c, t)| t.is_none() && !c.is_zero()) {
        return Err(Error::Malformed(format!("a {what} has no constant terms")));
    }
    Ok(())
}

pub fn parse_seq(text: &str, ctx: &Context) -> Result<OpSeq> {
    let mut ps = Parser::new(text, ctx);
    let Some(s) = ps.seq()? else {
        return syntax(ps.pos, "expected a sequence `e[..]`, `Q[..]`, `E[..]` or `Qu[..]`");
    };
    ps.finish()?;
    Ok(s)
}

pub fn parse_op_poly(text: &str, ctx: &Context) -> Result<OpPoly> {
    let mut ps = Parser::new(text, ctx);
    let terms = ps.sum(|ps| ps.seq())?;
    ps.finish()?;
    constant_only(&terms, "combination of sequences")?;
    let mut out = OpPoly::zero(ctx.p());
    for (c, s) in terms.into_iter() {
        if let Some(s) = s {
            out.add_term(s, c);
        }
    }
    Ok(out)
}

pub fn parse_dickson_mono(text: &str, ctx: &Context) -> Result<DicksonMono> {
    let comb = parse_dickson(text, ctx)?;
    let mut terms = comb.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c.value() == 1 => Ok(m.clone()),
        _ => Err(Error::Malformed(format!("`{text}` is not a single Dickson monomial"))),
    }
}

pub fn parse_dickson(text: &str, ctx: &Context) -> Result<DicksonCombination> {
    let mut ps = Parser::new(text, ctx);
    let terms = ps.sum(|ps| ps.dickson())?;
    ps.finish()?;
    let mut out = DicksonCombination::zero(ctx.p());
    for (c, m) in terms {
        out.add_term(m.unwrap_or_else(|| DicksonMono::one(ctx)), c);
    }
    Ok(out)
}

pub fn parse_borel(text: &str, ctx: &Context) -> Result<BPoly> {
    let mut ps = Parser::new(text, ctx);
    let terms = ps.sum(|ps| ps.borel())?;
    ps.finish()?;
    let mut out = Poly::zero(ctx.p(), ctx.n());
    for (c, e) in terms {
        out.add_term(e.unwrap_or_else(|| vec![0; ctx.n()]), c);
    }
    Ok(out)
}

pub fn parse_dual(text: &str, ctx: &Context) -> Result<DualExpansion> {
    let mut ps = Parser::new(text, ctx);
    let terms = ps.sum(|ps| ps.dual())?;
    ps.finish()?;
    constant_only(&terms, "dual expansion")?;
    let mut out = OpPoly::zero(ctx.p());
    for (c, s) in terms.into_iter() {
        if let Some(s) = s {
            out.add_term(s, c);
        }
    }
    Ok(DualExpansion(out))
}

pub fn parse_tensor(text: &str, ctx: &Context) -> Result<MultiTensor> {
    let mut ps = Parser::new(text, ctx);
    let terms = ps.sum(|ps| ps.tensor())?;
    ps.finish()?;
    constant_only(&terms, "tensor")?;
    let mut out = MultiTensor::zero(ctx.p());
    for (c, k) in terms.into_iter() {
        if let Some(k) = k {
            out.add_term(k, c);
        }
    }
    Ok(out)
}

/// Dispatch on the leading token.
pub fn parse(text: &str, ctx: &Context) -> Result<Parsed> {
    let trimmed = text.trim_start().trim_start_matches(|c: char| c.is_ascii_digit() || c == '*' || c == '-');
    let trimmed = trimmed.trim_start();
    if text.trim() == "0" {
        return Ok(Parsed::Ops(OpPoly::zero(ctx.p())));
    }
    match trimmed.as_bytes().first() {
        Some(b'd') => parse_dickson(text, ctx).map(Parsed::Dickson),
        Some(b'h') => parse_borel(text, ctx).map(Parsed::Borel),
        Some(b'(') => parse_dual(text, ctx).map(Parsed::Dual),
        Some(b'e' | b'Q' | b'E') if text.contains("(x)") => parse_tensor(text, ctx).map(Parsed::Tensor),
        Some(b'e' | b'Q' | b'E') => parse_op_poly(text, ctx).map(Parsed::Ops),
        None if text.trim().chars().all(|c| c.is_ascii_digit()) && !text.trim().is_empty() => {
            parse_dickson(text, ctx).map(Parsed::Dickson)
        }
        _ => syntax(text.len() - trimmed.len(), "expected a sequence, Dickson or Borel expression"),
    }
}

/// `Q[0,2]`, `e[3/2,1;eps=01]`.
pub fn render_seq(s: &OpSeq, stem: &str) -> String {
    let mut out = String::from(stem);
    write_body(&mut out, s.entries(), s.eps()).unwrap();
    out
}

pub fn render_upper(s: &UpperSeq, stem: &str) -> String {
    let mut out = String::from(stem);
    write_body(&mut out, s.entries(), s.eps()).unwrap();
    out
}

fn join_terms(parts: Vec<(Fp, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, body)) in parts.into_iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        if c.value() != 1 {
            write!(out, "{}*", c.value()).unwrap();
        }
        out.push_str(&body);
    }
    out
}

/// Terms ascending under [`compare`]: `2*Q[0,2] + Q[1,1]`.
pub fn render_op_poly(x: &OpPoly, stem: &str) -> String {
    join_terms(sorted_by_compare(x).into_iter().map(|(s, c)| (c, render_seq(&s, stem))).collect())
}

/// `(Q[0,3])* + (Q[2,2])*`.
pub fn render_dual(x: &DualExpansion) -> String {
    join_terms(x.sorted_terms().into_iter().map(|(s, c)| (c, format!("({})*", render_seq(&s, "Q")))).collect())
}

/// `d0*d1^2`, or `1`.
pub fn render_dickson_mono(m: &DicksonMono) -> String {
    let factors: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("d{i}") } else { format!("d{i}^{e}") })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// Terms ascending by `chi_min`: `d1^3 + d0^2`.
pub fn render_dickson(x: &DicksonCombination, ctx: &Context) -> String {
    let parts = x.sorted_terms(ctx).into_iter().map(|(m, c)| (c, render_dickson_mono(&m))).collect::<Vec<_>>();
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, body)) in parts.into_iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        match (c.value(), body.as_str()) {
            (v, "1") => write!(out, "{v}").unwrap(),
            (1, b) => out.push_str(b),
            (v, b) => write!(out, "{v}*{b}").unwrap(),
        }
    }
    out
}

pub fn render_borel(x: &BPoly) -> String {
    render_poly(x, "h")
}

/// `e[1,0] (x) e[0,1] + ...`, keys in lexicographic order of their
/// excess vectors.
pub fn render_tensor(x: &MultiTensor, stem: &str) -> String {
    let mut terms: Vec<(&[OpSeq], Fp)> = x.terms().collect();
    terms.sort_by(|a, b| {
        a.0.iter().zip(b.0).map(|(s, t)| compare(s, t)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    join_terms(
        terms
            .into_iter()
            .map(|(k, c)| (c, k.iter().map(|s| render_seq(s, stem)).collect::<Vec<_>>().join(" (x) ")))
            .collect(),
    )
}
