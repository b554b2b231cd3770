//! The pairing between Dickson monomials and admissible sequences, read off
//! as coefficients in `B[n]`, and what it buys: hom-duals of Dickson
//! monomials, their inverses, and straightening without Adem relations.
//!
//! All of this is for sequences without Bocksteins.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::arith::{binom_mod_p, Context, Fp, Nat};
use crate::error::{Error, Result};
use crate::invariants::dickson::{chi_min, chi_min_inverse, expand_dickson_monomial, generator_degree, BPoly, DicksonMono};
use crate::opalgebra::OpPoly;
use crate::sequences::{compare, OpSeq};

/// All `m` with `sum_i m_i |d_{n,i}| = degree`, ordered by `chi_min(m)`.
pub fn solve_degree_diophantine(degree: Nat, ctx: &Context) -> Result<Vec<DicksonMono>> {
    let weights = (0..ctx.n()).map(|i| generator_degree(i, ctx)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut m = vec![0u64; ctx.n()];
    fill_diophantine(&weights, 0, degree.0, &mut m, &mut out, ctx)?;
    out.sort_by(|a, b| chi_cmp(a, b, ctx));
    Ok(out)
}

fn fill_diophantine(
    weights: &[Nat],
    i: usize,
    left: u128,
    m: &mut Vec<u64>,
    out: &mut Vec<DicksonMono>,
    ctx: &Context,
) -> Result<()> {
    if i == weights.len() {
        if left == 0 {
            out.push(DicksonMono::new(m.clone(), ctx)?);
        }
        return Ok(());
    }
    let w = weights[i].0;
    for k in 0..=left / w {
        m[i] = k as u64;
        fill_diophantine(weights, i + 1, left - k * w, m, out, ctx)?;
    }
    m[i] = 0;
    Ok(())
}

fn chi_cmp(a: &DicksonMono, b: &DicksonMono, ctx: &Context) -> Ordering {
    match (chi_min(a, ctx), chi_min(b, ctx)) {
        (Ok(x), Ok(y)) => compare(&x, &y),
        _ => a.cmp(b),
    }
}

/// Weakly increasing length-n sequences of the given degree, ascending
/// under [`compare`].
pub fn admissible_basis(degree: Nat, ctx: &Context) -> Result<Vec<OpSeq>> {
    let weights = crate::invariants::dickson::h_weights(ctx)?;
    let mut out = Vec::new();
    let mut seq = vec![0u64; ctx.n()];
    let top = u64::try_from(degree.0).map_err(|_| Error::Overflow)?;
    fill_basis(&weights, ctx.n(), top, u64::MAX, &mut seq, &mut out, ctx)?;
    out.sort_by(compare);
    Ok(out)
}

// Fill positions `..len` from the right, each entry at most `cap`.
fn fill_basis(
    weights: &[u64],
    len: usize,
    left: u64,
    cap: u64,
    seq: &mut Vec<u64>,
    out: &mut Vec<OpSeq>,
    ctx: &Context,
) -> Result<()> {
    if len == 0 {
        if left == 0 {
            out.push(OpSeq::from_ints(seq, ctx)?);
        }
        return Ok(());
    }
    let w = weights[len - 1];
    let most = (left / w).min(cap);
    for v in 0..=most {
        seq[len - 1] = v;
        fill_basis(weights, len - 1, left - v * w, v, seq, out, ctx)?;
    }
    Ok(())
}

fn integral_exps(seq: &OpSeq) -> Result<Vec<u64>> {
    if seq.has_bockstein() {
        return Err(Error::BocksteinUnsupported(seq.to_string()));
    }
    seq.ints().ok_or_else(|| Error::Malformed(format!("{seq} has half-integral entries; use the classical engine")))
}

/// `<d^m, Q_J>`: the coefficient of `h^J` in `d^m`.
pub fn kronecker_pair(m: &DicksonMono, seq: &OpSeq, ctx: &Context) -> Result<Fp> {
    seq.check_ctx(ctx)?;
    crate::invariants::dickson::coeff_in_expansion(m, &integral_exps(seq)?, ctx)
}

/// `sum_J c_J (Q_J)*`, keyed by admissible `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualExpansion(pub OpPoly);

impl DualExpansion {
    /// Terms ascending under [`compare`].
    pub fn sorted_terms(&self) -> Vec<(OpSeq, Fp)> {
        sorted_by_compare(&self.0)
    }
}

pub fn sorted_by_compare(x: &OpPoly) -> Vec<(OpSeq, Fp)> {
    let mut v: Vec<(OpSeq, Fp)> = x.terms().map(|(s, c)| (s.clone(), c)).collect();
    v.sort_by(|a, b| compare(&a.0, &b.0));
    v
}

/// A finite combination of Dickson monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicksonCombination {
    p: u32,
    terms: BTreeMap<DicksonMono, Fp>,
}

impl DicksonCombination {
    pub fn zero(p: u32) -> DicksonCombination {
        DicksonCombination { p, terms: BTreeMap::new() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn add_term(&mut self, m: DicksonMono, c: Fp) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert(Fp::zero(self.p));
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coeff(&self, m: &DicksonMono) -> Fp {
        self.terms.get(m).copied().unwrap_or(Fp::zero(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DicksonMono, Fp)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Terms ascending by `chi_min`.
    pub fn sorted_terms(&self, ctx: &Context) -> Vec<(DicksonMono, Fp)> {
        let mut v: Vec<(DicksonMono, Fp)> = self.terms().map(|(m, c)| (m.clone(), c)).collect();
        v.sort_by(|a, b| chi_cmp(&a.0, &b.0, ctx));
        v
    }
}

/// How the pairing system is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    /// Full Gaussian elimination mod p.
    Gaussian,
    /// Back substitution from the largest sequence, trusting unitriangularity.
    Triangular,
}

/// The pairing matrix in one degree: rows are `d^(m(K))`, columns `Q_J`,
/// both indexed by the admissible basis in ascending order.
#[derive(Clone, Debug)]
pub struct DegreeBlock {
    pub degree: Nat,
    pub basis: Vec<OpSeq>,
    pub monos: Vec<DicksonMono>,
    pub matrix: Vec<Vec<Fp>>,
}

impl DegreeBlock {
    pub fn index_of(&self, seq: &OpSeq) -> Option<usize> {
        self.basis.binary_search_by(|s| compare(s, seq)).ok().filter(|&k| self.basis[k] == *seq)
    }

    /// Ones on the diagonal, zeros below.
    pub fn is_unitriangular(&self) -> bool {
        self.matrix.iter().enumerate().all(|(k, row)| {
            row.iter().enumerate().all(|(j, c)| match j.cmp(&k) {
                Ordering::Less => c.is_zero(),
                Ordering::Equal => c.value() == 1,
                Ordering::Greater => true,
            })
        })
    }
}

/// Memoizing front end for everything in this module.
pub struct DualEngine {
    ctx: Context,
    method: SolveMethod,
    expansions: Mutex<HashMap<DicksonMono, Arc<BPoly>>>,
    blocks: Mutex<HashMap<Nat, Arc<DegreeBlock>>>,
}

/// The invariant-theoretic straightening of one sequence.
#[derive(Clone, Debug)]
pub struct AdemSolution {
    pub result: OpPoly,
    /// Admissible `J` above the input with a nonzero coefficient; expected empty.
    pub above_input: Vec<OpSeq>,
}

impl DualEngine {
    pub fn new(ctx: Context) -> DualEngine {
        DualEngine::with_method(ctx, SolveMethod::Gaussian)
    }

    pub fn with_method(ctx: Context, method: SolveMethod) -> DualEngine {
        DualEngine { ctx, method, expansions: Mutex::new(HashMap::new()), blocks: Mutex::new(HashMap::new()) }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn expansion(&self, m: &DicksonMono) -> Result<Arc<BPoly>> {
        if let Some(hit) = self.expansions.lock().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let e = Arc::new(expand_dickson_monomial(m, &self.ctx)?);
        self.expansions.lock().unwrap().insert(m.clone(), e.clone());
        Ok(e)
    }

    pub fn block(&self, degree: Nat) -> Result<Arc<DegreeBlock>> {
        if let Some(hit) = self.blocks.lock().unwrap().get(&degree) {
            return Ok(hit.clone());
        }
        let basis = admissible_basis(degree, &self.ctx)?;
        let monos = basis.iter().map(|s| chi_min_inverse(s, &self.ctx)).collect::<Result<Vec<_>>>()?;
        let exps = basis.iter().map(|s| s.ints().expect("basis entries are integral")).collect::<Vec<_>>();
        let matrix = monos
            .par_iter()
            .map(|m| {
                let e = self.expansion(m)?;
                Ok(exps.iter().map(|j| e.coeff(j)).collect())
            })
            .collect::<Result<Vec<Vec<Fp>>>>()?;
        let block = Arc::new(DegreeBlock { degree, basis, monos, matrix });
        self.blocks.lock().unwrap().insert(degree, block.clone());
        Ok(block)
    }

    pub fn kronecker_pair(&self, m: &DicksonMono, seq: &OpSeq) -> Result<Fp> {
        seq.check_ctx(&self.ctx)?;
        let exps = integral_exps(seq)?;
        if m.degree(&self.ctx)? != seq.degree()? {
            return Ok(self.ctx.zero());
        }
        Ok(self.expansion(m)?.coeff(&exps))
    }

    /// `d^m = sum_J <d^m, Q_J> (Q_J)*` over the admissible basis of its degree.
    pub fn dual_of_dickson(&self, m: &DicksonMono) -> Result<DualExpansion> {
        let block = self.block(m.degree(&self.ctx)?)?;
        let e = self.expansion(m)?;
        let mut out = OpPoly::zero(self.ctx.p());
        for s in &block.basis {
            out.add_term(s.clone(), e.coeff(&s.ints().expect("integral basis")));
        }
        Ok(DualExpansion(out))
    }

    /// The Dickson combination whose dual expansion is `(Q_J)*`.
    pub fn dickson_of_dual(&self, seq: &OpSeq) -> Result<DicksonCombination> {
        seq.check_ctx(&self.ctx)?;
        integral_exps(seq)?;
        if !seq.is_admissible() {
            return Err(Error::Malformed(format!("{seq} is not admissible")));
        }
        let block = self.block(seq.degree()?)?;
        let col = block.index_of(seq).expect("admissible sequence lies in its degree's basis");
        // x^T C = e_J, i.e. C^T x = e_J
        let size = block.basis.len();
        let transpose: Vec<Vec<Fp>> = (0..size).map(|j| (0..size).map(|k| block.matrix[k][j]).collect()).collect();
        let mut rhs = vec![self.ctx.zero(); size];
        rhs[col] = self.ctx.one();
        let x = match self.method {
            SolveMethod::Gaussian => solve_mod_p(&transpose, &rhs, block.degree)?,
            SolveMethod::Triangular => solve_lower_triangular(&transpose, &rhs, block.degree)?,
        };
        let mut out = DicksonCombination::zero(self.ctx.p());
        for (m, c) in block.monos.iter().zip(x) {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    /// Dual expansion of a Dickson combination, by linearity.
    pub fn dual_of_combination(&self, x: &DicksonCombination) -> Result<DualExpansion> {
        let mut out = OpPoly::zero(self.ctx.p());
        for (m, c) in x.terms() {
            for (s, v) in self.dual_of_dickson(m)?.0.terms() {
                out.add_term(s.clone(), c * v);
            }
        }
        Ok(DualExpansion(out))
    }

    /// `rho(e_I)` from the pairing: solve `sum_J <d^(m(K)), Q_J> a_J = [h^I] d^(m(K))`.
    pub fn adem(&self, seq: &OpSeq) -> Result<AdemSolution> {
        seq.check_ctx(&self.ctx)?;
        let exps = integral_exps(seq)?;
        let block = self.block(seq.degree()?)?;
        let rhs = block
            .monos
            .iter()
            .map(|m| Ok(self.expansion(m)?.coeff(&exps)))
            .collect::<Result<Vec<_>>>()?;
        let a = match self.method {
            SolveMethod::Gaussian => solve_mod_p(&block.matrix, &rhs, block.degree)?,
            SolveMethod::Triangular => solve_upper_triangular(&block.matrix, &rhs, block.degree)?,
        };
        let mut result = OpPoly::zero(self.ctx.p());
        let mut above_input = Vec::new();
        for (s, c) in block.basis.iter().zip(a) {
            if !c.is_zero() && compare(s, seq) == Ordering::Greater {
                above_input.push(s.clone());
            }
            result.add_term(s.clone(), c);
        }
        Ok(AdemSolution { result, above_input })
    }

    pub fn adem_via_invariants(&self, seq: &OpSeq) -> Result<OpPoly> {
        Ok(self.adem(seq)?.result)
    }

    /// Checks the two coefficients predicted for
    /// `d_{n,n-i}^(a_k p^k + a_0)`: 1 at its own `Psi`, and
    /// `C(a_k, mu) C(a_0, mu)` at `Psi(d_{n,n-i-k}^(mu p^k) d_{n,n-i}^((a_k-mu)p^k + a_0-mu) d_{n,n-i+k}^mu)`,
    /// `mu = min(a_k, a_0)`. With `mu = 0` the two coincide and only the first is checked.
    pub fn power_dual_check(&self, i: usize, k: usize, alpha_k: u64, alpha_0: u64) -> Result<bool> {
        let ctx = &self.ctx;
        let n = ctx.n();
        if !(1..n).contains(&i) || k == 0 || k > n - i {
            return Err(Error::OutOfRange(format!("power lemma needs 1 <= i < n and 1 <= k <= n-i (n={n}, i={i}, k={k})")));
        }
        let q = crate::arith::pow_u64(ctx.p(), k as u32)?;
        let e = alpha_k.checked_mul(q).and_then(|x| x.checked_add(alpha_0)).ok_or(Error::Overflow)?;
        let main = DicksonMono::generator(n - i, e, ctx)?;
        let dual = self.dual_of_dickson(&main)?;
        if dual.0.coeff(&chi_min(&main, ctx)?).value() != 1 {
            return Ok(false);
        }
        let mu = alpha_k.min(alpha_0);
        if mu == 0 {
            return Ok(true);
        }
        let top = n - i + k;
        if top > n {
            // d_{n,j} = 0 for j > n: the second term is absent
            return Ok(true);
        }
        let mut m = vec![0u64; n];
        m[n - i - k] += mu * q;
        m[n - i] += (alpha_k - mu) * q + (alpha_0 - mu);
        if top < n {
            m[top] += mu;
        }
        let second = DicksonMono::new(m, ctx)?;
        let predicted = binom_mod_p(alpha_k as i64, mu as i64, ctx) * binom_mod_p(alpha_0 as i64, mu as i64, ctx);
        Ok(dual.0.coeff(&chi_min(&second, ctx)?) == predicted)
    }
}

/// `adem_via_invariants` with a fresh engine.
pub fn adem_via_invariants(seq: &OpSeq, ctx: &Context) -> Result<OpPoly> {
    DualEngine::new(*ctx).adem_via_invariants(seq)
}

pub fn dual_of_dickson(m: &DicksonMono, ctx: &Context) -> Result<DualExpansion> {
    DualEngine::new(*ctx).dual_of_dickson(m)
}

pub fn dickson_of_dual(seq: &OpSeq, ctx: &Context) -> Result<DicksonCombination> {
    DualEngine::new(*ctx).dickson_of_dual(seq)
}

pub fn power_dual_check(i: usize, k: usize, alpha_k: u64, alpha_0: u64, ctx: &Context) -> Result<bool> {
    DualEngine::new(*ctx).power_dual_check(i, k, alpha_k, alpha_0)
}

/// Solve `A x = b` over `F_p`; `A` must be square and invertible.
pub fn solve_mod_p(a: &[Vec<Fp>], b: &[Fp], degree: Nat) -> Result<Vec<Fp>> {
    let size = b.len();
    if size == 0 {
        return Ok(vec![]);
    }
    let mut rows: Vec<Vec<Fp>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !rows[r][col].is_zero()).ok_or(Error::Singular(degree.0))?;
        rows.swap(col, pivot);
        let inv = rows[col][col].inv().expect("nonzero pivot");
        for v in rows[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..size {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col];
                let pivot_row = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[size]).collect())
}

/// Back substitution for a unitriangular upper matrix.
pub fn solve_upper_triangular(a: &[Vec<Fp>], b: &[Fp], degree: Nat) -> Result<Vec<Fp>> {
    let size = b.len();
    let mut x = b.to_vec();
    for k in (0..size).rev() {
        if a[k][k].is_zero() {
            return Err(Error::Singular(degree.0));
        }
        let mut v = b[k];
        for j in k + 1..size {
            v -= a[k][j] * x[j];
        }
        x[k] = v * a[k][k].inv().expect("nonzero diagonal");
    }
    Ok(x)
}

/// Forward substitution for a unitriangular lower matrix.
pub fn solve_lower_triangular(a: &[Vec<Fp>], b: &[Fp], degree: Nat) -> Result<Vec<Fp>> {
    let size = b.len();
    let mut x = b.to_vec();
    for k in 0..size {
        if a[k][k].is_zero() {
            return Err(Error::Singular(degree.0));
        }
        let mut v = b[k];
        for j in 0..k {
            v -= a[k][j] * x[j];
        }
        x[k] = v * a[k][k].inv().expect("nonzero diagonal");
    }
    Ok(x)
}
