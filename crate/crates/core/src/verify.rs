//! Self-check suites comparing independent computations of the same values.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{binom_mod_p, Context, Fp, Nat};
use crate::correspondence::{admissible_basis, solve_degree_diophantine, DicksonCombination, DualEngine, SolveMethod};
use crate::error::Result;
use crate::invariants::dickson::{
    chi_min, chi_min_inverse, coeff_by_partitions, coeff_in_expansion, dickson_from_matrices, dickson_to_borel,
    dickson_to_borel_recursive, expand_dickson_monomial, DicksonMono,
};
use crate::invariants::identities::{identity_check, Identity};
use crate::invariants::realize::{check_invariance, realize_dickson, realize_in_y, Group};
use crate::invariants::poly::Poly;
use crate::opalgebra::{OpPoly, Straightener};
use crate::sequences::OpSeq;
use crate::syntax::{parse_op_poly, render_dickson_mono, render_op_poly, render_seq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    OracleEquivalence,
    DicksonOracles,
    Roundtrip,
    Triangularity,
    Identities,
    Invariance,
    PaperVectors,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::OracleEquivalence,
        Suite::DicksonOracles,
        Suite::Roundtrip,
        Suite::Triangularity,
        Suite::Identities,
        Suite::Invariance,
        Suite::PaperVectors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::DicksonOracles => "dickson-oracles",
            Suite::Roundtrip => "roundtrip",
            Suite::Triangularity => "triangularity",
            Suite::Identities => "identities",
            Suite::Invariance => "invariance",
            Suite::PaperVectors => "paper-vectors",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bounds for a suite run. Unset fields fall back to per-suite defaults.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ranges {
    pub p: Option<u32>,
    pub n: Option<usize>,
    pub max_entry: Option<u64>,
    pub max_degree: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    pub cases: Vec<Case>,
}

impl Report {
    fn new(suite: Suite) -> Report {
        Report { suite, cases: Vec::new() }
    }

    fn pass(&mut self, name: impl Into<String>) {
        self.cases.push(Case { name: name.into(), passed: true, detail: None });
    }

    fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.cases.push(Case { name: name.into(), passed: false, detail: Some(detail.into()) });
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            match &c.detail {
                None => writeln!(f, "PASS {}", c.name)?,
                Some(d) => writeln!(f, "FAIL {}: {d}", c.name)?,
            }
        }
        let bad = self.failures().count();
        write!(f, "{}: {} cases, {} failed", self.suite, self.cases.len(), bad)
    }
}

pub fn run(suite: Suite, ranges: &Ranges) -> Result<Report> {
    let p = ranges.p.unwrap_or(2);
    match suite {
        Suite::OracleEquivalence => {
            let n = ranges.n.unwrap_or(2);
            let ctx = Context::new(p, n)?;
            oracle_equivalence(&ctx, ranges.max_entry.unwrap_or_else(|| default_max_entry(p, n)))
        }
        Suite::DicksonOracles => dickson_oracles(p, ranges.n.unwrap_or(4)),
        Suite::Roundtrip => {
            let ctx = Context::new(p, ranges.n.unwrap_or(2))?;
            roundtrip(&ctx, 6, ranges.max_degree, ranges.max_entry.unwrap_or(6))
        }
        Suite::Triangularity => triangularity(&Context::new(p, ranges.n.unwrap_or(2))?, 6, ranges.max_degree),
        Suite::Identities => identities(p),
        Suite::Invariance => invariance(p, ranges.n.unwrap_or(if p == 2 { 3 } else { 2 })),
        Suite::PaperVectors => paper_vectors(p),
    }
}

fn default_max_entry(p: u32, n: usize) -> u64 {
    match (p, n) {
        (2, 1 | 2) => 20,
        (3, 1 | 2) => 10,
        (2, 3) => 8,
        (3, 3) => 5,
        _ => 4,
    }
}

/// Every integral sequence with entries `<= max` (lower notation, no Bocksteins).
pub fn all_sequences(max: u64, ctx: &Context) -> Vec<OpSeq> {
    let n = ctx.n();
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    loop {
        out.push(OpSeq::from_ints(&cur, ctx).expect("small entries"));
        let mut t = n;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            if cur[t] < max {
                cur[t] += 1;
                break;
            }
            cur[t] = 0;
        }
    }
}

/// Dickson monomials of length `n` with exponent sum `<= total`.
pub fn dickson_monomials(total: u64, ctx: &Context) -> Vec<DicksonMono> {
    fn fill(i: usize, left: u64, m: &mut Vec<u64>, out: &mut Vec<DicksonMono>, ctx: &Context) {
        if i == m.len() {
            out.push(DicksonMono::new(m.clone(), ctx).expect("small exponents"));
            return;
        }
        for e in 0..=left {
            m[i] = e;
            fill(i + 1, left - e, m, out, ctx);
        }
        m[i] = 0;
    }
    let mut out = Vec::new();
    fill(0, total, &mut vec![0; ctx.n()], &mut out, ctx);
    out
}

fn oracle_equivalence(ctx: &Context, max: u64) -> Result<Report> {
    let engine = DualEngine::new(*ctx);
    let outcomes: Vec<Result<Option<String>>> = all_sequences(max, ctx)
        .par_iter()
        .map_init(
            || Straightener::new(ctx.p()),
            |st, s| {
                let classical = st.straighten_seq(s)?;
                let invariant = engine.adem_via_invariants(s)?;
                Ok((classical != invariant).then(|| {
                    format!(
                        "{}: classical {}, invariant {}",
                        render_seq(s, "e"),
                        render_op_poly(&classical, "Q"),
                        render_op_poly(&invariant, "Q")
                    )
                }))
            },
        )
        .collect();
    let mut rep = Report::new(Suite::OracleEquivalence);
    let mut count = 0;
    for o in outcomes {
        count += 1;
        if let Some(d) = o? {
            rep.fail(format!("rho p={} n={}", ctx.p(), ctx.n()), d);
        }
    }
    if rep.passed() {
        rep.pass(format!("rho p={} n={} entries<={max}: {count} sequences agree", ctx.p(), ctx.n()));
    }
    Ok(rep)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn dickson_oracles(p: u32, max_n: usize) -> Result<Report> {
    let mut rep = Report::new(Suite::DicksonOracles);
    for n in 1..=max_n {
        let ctx = Context::new(p, n)?;
        for j in 0..n {
            let closed = dickson_to_borel(j, &ctx)?;
            let rec = dickson_to_borel_recursive(n, j as i64, &ctx)?;
            let mat = dickson_from_matrices(j, &ctx)?;
            let name = format!("d({n},{j}) p={p}");
            let expect = binomial(n as u64, (n - j) as u64);
            rep.check(name, closed == rec && rec == mat && closed.len() as u64 == expect, || {
                format!(
                    "closed {} terms, recursive {} terms, matrices {} terms, expected {expect}",
                    closed.len(),
                    rec.len(),
                    mat.len()
                )
            });
        }
    }
    Ok(rep)
}

fn within(m: &DicksonMono, max_degree: Option<u64>, ctx: &Context) -> Result<bool> {
    Ok(max_degree.is_none_or(|d| m.degree(ctx).map(|x| x.0 <= d as u128).unwrap_or(false)))
}

fn roundtrip(ctx: &Context, total: u64, max_degree: Option<u64>, max_entry: u64) -> Result<Report> {
    let mut rep = Report::new(Suite::Roundtrip);
    let engine = DualEngine::new(*ctx);
    let mut bad = Vec::new();
    let monos = dickson_monomials(total, ctx);
    for m in &monos {
        if !within(m, max_degree, ctx)? {
            continue;
        }
        let dual = engine.dual_of_dickson(m)?;
        let mut back = DicksonCombination::zero(ctx.p());
        for (s, c) in dual.0.terms() {
            for (k, v) in engine.dickson_of_dual(s)?.terms() {
                back.add_term(k.clone(), c * v);
            }
        }
        if (back.terms().count() != 1 || back.coeff(m).value() != 1) && bad.is_empty() {
            bad.push(format!("{} does not come back from its dual", render_dickson_mono(m)));
        }
        let lead = chi_min(m, ctx)?;
        let again = engine.dual_of_combination(&engine.dickson_of_dual(&lead)?)?;
        if again.0 != OpPoly::from_seq(lead.clone()) && bad.is_empty() {
            bad.push(format!("(Q{})* does not come back from its Dickson form", &render_seq(&lead, "Q")[1..]));
        }
    }
    match bad.pop() {
        None => rep.pass(format!("dual round trip p={} n={}: {} monomials", ctx.p(), ctx.n(), monos.len())),
        Some(d) => rep.fail(format!("dual round trip p={} n={}", ctx.p(), ctx.n()), d),
    }

    let mut seq_bad = None;
    let seqs = all_sequences(max_entry, ctx);
    for s in &seqs {
        let up = s.to_upper().and_then(|u| u.to_lower());
        let text = render_op_poly(&OpPoly::from_seq(s.clone()), "e");
        let parsed = parse_op_poly(&text, ctx);
        if up.as_ref() != Ok(s) || parsed != Ok(OpPoly::from_seq(s.clone())) {
            seq_bad = Some(format!("{text} does not round trip"));
            break;
        }
        if s.is_admissible() {
            let m = chi_min_inverse(s, ctx)?;
            if chi_min(&m, ctx)? != *s {
                seq_bad = Some(format!("chi_min does not invert on {text}"));
                break;
            }
        }
    }
    match seq_bad {
        None => rep.pass(format!("sequence round trips p={} n={}: {} sequences", ctx.p(), ctx.n(), seqs.len())),
        Some(d) => rep.fail(format!("sequence round trips p={} n={}", ctx.p(), ctx.n()), d),
    }
    Ok(rep)
}

fn triangularity(ctx: &Context, total: u64, max_degree: Option<u64>) -> Result<Report> {
    let mut rep = Report::new(Suite::Triangularity);
    let gauss = DualEngine::with_method(*ctx, SolveMethod::Gaussian);
    let tri = DualEngine::with_method(*ctx, SolveMethod::Triangular);
    let mut degrees: Vec<Nat> = Vec::new();
    for m in dickson_monomials(total, ctx) {
        if within(&m, max_degree, ctx)? {
            degrees.push(m.degree(ctx)?);
        }
    }
    degrees.sort();
    degrees.dedup();
    for d in degrees {
        let block = gauss.block(d)?;
        let basis = admissible_basis(d, ctx)?;
        let monos = solve_degree_diophantine(d, ctx)?;
        let chis = monos.iter().map(|m| chi_min(m, ctx)).collect::<Result<Vec<_>>>()?;
        let name = format!("degree {} p={} n={}", d.0, ctx.p(), ctx.n());
        if chis != basis {
            rep.fail(name, "chi_min is not a bijection onto the admissible basis");
            continue;
        }
        if !block.is_unitriangular() {
            rep.fail(name, format!("pairing matrix of size {} is not unitriangular", basis.len()));
            continue;
        }
        let mut agree = true;
        for s in &basis {
            if gauss.adem_via_invariants(s)? != tri.adem_via_invariants(s)? {
                agree = false;
            }
        }
        rep.check(name, agree, || "Gaussian and triangular solves differ".into());
    }
    Ok(rep)
}

fn identities(p: u32) -> Result<Report> {
    let mut rep = Report::new(Suite::Identities);
    let mut run = |name: String, kind: Identity| -> Result<()> {
        match identity_check(kind, p)? {
            None => rep.pass(name),
            Some(c) => rep.fail(name, c.to_string()),
        }
        Ok(())
    };
    for k in 1..=4 {
        for s in 0..k {
            run(format!("decomposition k={k} s={s} p={p}"), Identity::Decomposition { k, s })?;
        }
    }
    for k in 1..=4 {
        for t in 1..=5 - k {
            for s in 0..k {
                run(format!("inclusion k={k} t={t} s={s} p={p}"), Identity::Inclusion { k, t, s })?;
                for q in 0..t {
                    run(format!("double inclusion k={k} q={q} t={t} s={s} p={p}"), Identity::DoubleInclusion { k, q, t, s })?;
                }
            }
        }
    }
    Ok(rep)
}

/// Borel monomials of total degree `<= total` in `n` variables.
fn h_monomials(total: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                let used: u64 = v.iter().sum();
                (0..=total - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn invariance(p: u32, max_n: usize) -> Result<Report> {
    let mut rep = Report::new(Suite::Invariance);
    for n in 1..=max_n {
        let ctx = Context::new(p, n)?;
        for i in 0..n {
            let y = realize_dickson(&DicksonMono::generator(i, 1, &ctx)?, &ctx)?;
            rep.check(format!("d({n},{i}) under GL p={p}"), check_invariance(&y, Group::General, &ctx)?, || {
                "moved by a generator".into()
            });
        }
        let total = if n == 3 { 1 } else { 2 };
        for e in h_monomials(total, n) {
            let x = Poly::monomial(p, e.clone(), Fp::one(p));
            let y = realize_in_y(&x, &ctx)?;
            let name = format!("{} under Borel p={p} n={n}", crate::invariants::poly::render(&x, "h"));
            rep.check(name, check_invariance(&y, Group::Borel, &ctx)?, || "moved by a generator".into());
        }
    }
    Ok(rep)
}

/// Equal after multiplying by some unit of `F_p`.
pub fn equal_up_to_unit(a: &OpPoly, b: &OpPoly) -> bool {
    let p = a.p();
    (1..p).any(|u| a.scale(Fp::new(u as i64, p)) == *b)
}

fn seq2(twice: [u64; 2], eps: [bool; 2], ctx: &Context) -> Result<OpSeq> {
    OpSeq::from_twice(&twice, &eps, ctx)
}

fn term(c: i64, s: OpSeq) -> OpPoly {
    let p = s.p();
    let mut out = OpPoly::zero(p);
    out.add_term(s, Fp::new(c, p));
    out
}

/// `(input, expected)` pairs for the two-step relations, in doubled entries.
pub fn lemma_vectors(p: u32, k: u32, ctx: &Context) -> Result<Vec<(OpSeq, OpPoly)>> {
    let q = crate::arith::pow_u64(p, k)?;
    let r = q / p as u64;
    let z = OpPoly::zero(p);
    let s = |a: u64, b: u64| seq2([2 * a, 2 * b], [false, false], ctx);
    let mut out = vec![
        (s(q, 0)?, term(1, s(0, r)?)),
        (s(1, 0)?, z.clone()),
        (s(q + 1, 1)?, term(1, s(1, r + 1)?)),
        (s(2, 1)?, z),
        (s(p as u64, 1)?, term(2, s(0, 2)?)),
    ];
    // at k = 1 this is the previous vector with coefficient 1 instead of 2
    if k > 1 {
        out.push((s(q, 1)?, term(1, s(0, r + 1)?)));
    }
    Ok(out)
}

/// The same relations with a Bockstein on the right factor; odd `p` only.
pub fn bockstein_vectors(p: u32, k: u32, ctx: &Context) -> Result<Vec<(OpSeq, OpPoly)>> {
    let q = crate::arith::pow_u64(p, k)?;
    let r = q / p as u64;
    let z = OpPoly::zero(p);
    let (f, t) = (false, true);
    Ok(vec![
        (seq2([2 * q + 1, 1], [f, f], ctx)?, term(1, seq2([1, 2 * r + 1], [f, f], ctx)?)),
        (seq2([3, 1], [f, f], ctx)?, z.clone()),
        (seq2([2, 1], [f, t], ctx)?, term(1, seq2([1, 1], [t, f], ctx)?)),
        (seq2([2 * q, 1], [f, t], ctx)?, term(1, seq2([0, 2 * r + 1], [f, t], ctx)?)),
        (seq2([2 * q + 2, 1], [f, t], ctx)?, term(1, seq2([1, 2 * r + 1], [t, f], ctx)?)),
        (seq2([4, 1], [f, t], ctx)?, z),
    ])
}

fn paper_vectors(p: u32) -> Result<Report> {
    let mut rep = Report::new(Suite::PaperVectors);
    let ctx = Context::new(p, 2)?;
    let engine = DualEngine::new(ctx);
    let mut st = Straightener::new(p);
    for k in 1..=3 {
        for (input, expect) in lemma_vectors(p, k, &ctx)? {
            let classical = st.straighten_seq(&input)?;
            let invariant = engine.adem_via_invariants(&input)?;
            let name = format!("rho {} p={p}", render_seq(&input, "e"));
            rep.check(name, classical == expect && invariant == expect, || {
                format!(
                    "expected {}, classical {}, invariant {}",
                    render_op_poly(&expect, "Q"),
                    render_op_poly(&classical, "Q"),
                    render_op_poly(&invariant, "Q")
                )
            });
        }
    }
    if p == 3 {
        for k in 1..=2 {
            for (input, expect) in bockstein_vectors(p, k, &ctx)? {
                let got = st.straighten_seq(&input)?;
                let name = format!("rho {} p={p} (up to a unit)", render_seq(&input, "e"));
                rep.check(name, equal_up_to_unit(&got, &expect), || {
                    format!("expected {}, classical {}", render_op_poly(&expect, "Q"), render_op_poly(&got, "Q"))
                });
            }
        }
    }
    for n in 2..=3 {
        let ctx = Context::new(p, n)?;
        let engine = DualEngine::new(ctx);
        for i in 1..n {
            for k in 1..=n - i {
                // the stated coefficient C(ak,mu) C(a0,mu) fails once ak > a0 >= 1
                for ak in 0..=2 {
                    for a0 in ak..=2 {
                        let name = format!("power dual n={n} i={i} k={k} ({ak},{a0}) p={p}");
                        rep.check(name, engine.power_dual_check(i, k, ak, a0)?, || {
                            format!("coefficient differs from C({ak},mu)C({a0},mu) = {}", {
                                let mu = ak.min(a0) as i64;
                                (binom_mod_p(ak as i64, mu, &ctx) * binom_mod_p(a0 as i64, mu, &ctx)).value()
                            })
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Random-free check of the partition coefficient formula on a grid.
pub fn coefficient_formula_agrees(m: &DicksonMono, ctx: &Context) -> Result<bool> {
    let full = expand_dickson_monomial(m, ctx)?;
    for (e, c) in full.terms() {
        if coeff_by_partitions(m, e, ctx)? != c || coeff_in_expansion(m, e, ctx)? != c {
            return Ok(false);
        }
    }
    Ok(true)
}
