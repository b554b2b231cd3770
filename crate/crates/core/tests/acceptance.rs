//! Acceptance run: one PASS/FAIL line per criterion, with its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dl_core::arith::binom_mod_p;
use dl_core::correspondence::DualEngine;
use dl_core::invariants::dickson::{
    chi_max, chi_min, coeff_by_partitions, coeff_in_expansion, enumerate_a, expand_dickson_monomial, h_degree,
    psi_t, DicksonMono,
};
use dl_core::opalgebra::{coproduct_poly, iterated_coproduct, MultiTensor, OpPoly, Straightener, TensorPoly};
use dl_core::sequences::compare;
use dl_core::verify::{self, all_sequences, bockstein_vectors, dickson_monomials, equal_up_to_unit, lemma_vectors, Ranges, Suite};
use dl_core::{Context, Fp, OpSeq, UpperSeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, check, time budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ctx(p: u32, n: usize) -> Context {
    Context::new(p, n).unwrap()
}

fn suite(s: Suite, p: u32, n: usize, max_entry: Option<u64>) -> Outcome {
    let rep = verify::run(s, &Ranges { p: Some(p), n: Some(n), max_entry, max_degree: None }).map_err(|e| e.to_string())?;
    if let Some(c) = rep.failures().next() {
        return Err(format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("failed")));
    }
    Ok(match rep.cases.as_slice() {
        [only] => only.name.clone(),
        cases if s == Suite::Identities => format!("{s} p={p}: {} cases", cases.len()),
        cases => format!("{s} p={p} n={n}: {} cases", cases.len()),
    })
}

fn all(parts: impl IntoIterator<Item = Outcome>) -> Outcome {
    Ok(parts.into_iter().collect::<Result<Vec<_>, _>>()?.join("; "))
}

fn a1() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut cases = 0;
    for p in [3, 5] {
        let c = ctx(p, 2);
        let engine = DualEngine::new(c);
        for k in 1..=3 {
            for (input, expect) in lemma_vectors(p, k, &c).map_err(|e| e.to_string())? {
                let start = Instant::now();
                let classical = Straightener::new(p).straighten_seq(&input).map_err(|e| e.to_string())?;
                let invariant = engine.adem_via_invariants(&input).map_err(|e| e.to_string())?;
                slowest = slowest.max(start.elapsed());
                cases += 1;
                if classical != expect || invariant != expect {
                    return Err(format!("e{input} p={p}: classical {classical:?}, invariant {invariant:?}"));
                }
            }
        }
    }
    if slowest > Duration::from_secs(1) {
        return Err(format!("slowest case took {slowest:?}"));
    }
    Ok(format!("{cases} vectors, both engines, slowest {slowest:.2?}"))
}

fn a2() -> Outcome {
    all([(2, 2, 20), (3, 2, 10), (2, 3, 8), (3, 3, 5)].map(|(p, n, max)| suite(Suite::OracleEquivalence, p, n, Some(max))))
}

fn a3() -> Outcome {
    for p in [2, 3, 5] {
        suite(Suite::DicksonOracles, p, 4, None)?;
        for n in 1..=4 {
            for j in 0..n {
                let rows = enumerate_a(j, &ctx(p, n)).map_err(|e| e.to_string())?.len() as u64;
                let want = (0..(n - j) as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1));
                if rows != want {
                    return Err(format!("A({n},{j}) has {rows} rows, expected {want}"));
                }
            }
        }
    }
    Ok("closed = recursive = matrices for n <= 4, p in {2,3,5}".into())
}

fn a4() -> Outcome {
    let mut parts = Vec::new();
    for p in [2, 3] {
        for n in [2, 3] {
            parts.push(suite(Suite::Roundtrip, p, n, None));
            parts.push(suite(Suite::Triangularity, p, n, None));
        }
    }
    all(parts)
}

fn a5() -> Outcome {
    all([2, 3].map(|p| suite(Suite::Identities, p, 2, None)))
}

fn a6() -> Outcome {
    all([suite(Suite::Invariance, 2, 3, None), suite(Suite::Invariance, 3, 2, None)])
}

fn a7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_eda7);
    let mut nonzero = 0;
    for trial in 0..500 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(1..=3);
        let c = ctx(p, n);
        let mut m = vec![0u64; n];
        for _ in 0..rng.gen_range(1..=4) {
            m[rng.gen_range(0..n)] += 1;
        }
        let m = DicksonMono::new(m, &c).map_err(|e| e.to_string())?;
        let expansion = expand_dickson_monomial(&m, &c).map_err(|e| e.to_string())?;
        let support: Vec<&[u64]> = expansion.support().collect();
        let target: Vec<u64> = if rng.gen_bool(0.5) {
            support[rng.gen_range(0..support.len())].to_vec()
        } else {
            let cap = support.iter().flat_map(|j| j.iter()).copied().max().unwrap_or(0);
            (0..n).map(|_| rng.gen_range(0..=cap)).collect()
        };
        let direct = coeff_in_expansion(&m, &target, &c).map_err(|e| e.to_string())?;
        let formula = coeff_by_partitions(&m, &target, &c).map_err(|e| e.to_string())?;
        if direct != formula {
            return Err(format!("pair {trial}: p={p} m={:?} J={target:?}: {direct:?} vs {formula:?}", m.exps()));
        }
        nonzero += usize::from(!direct.is_zero());
    }
    Ok(format!("500 pairs, {nonzero} nonzero"))
}

fn a8() -> Outcome {
    let c = ctx(3, 2);
    let mut st = Straightener::new(3);
    let mut cases = 0;
    for k in 1..=2 {
        for (input, expect) in bockstein_vectors(3, k, &c).map_err(|e| e.to_string())? {
            let got = st.straighten_seq(&input).map_err(|e| e.to_string())?;
            if !equal_up_to_unit(&got, &expect) {
                return Err(format!("e{input}: got {got:?}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} vectors up to a unit"))
}

fn lucas_and_vandermonde() -> Outcome {
    let exact = |a: u128, b: u128| (0..b).fold(1u128, |acc, i| acc * (a - i) / (i + 1));
    for p in [2, 3, 5] {
        let c = ctx(p, 1);
        for a in 0..=30i64 {
            for b in 0..=a {
                if binom_mod_p(a, b, &c).value() as u128 != exact(a as u128, b as u128) % p as u128 {
                    return Err(format!("C({a},{b}) mod {p}"));
                }
            }
        }
        for m in 0..=30i64 {
            for n in 0..=30 - m {
                for j in 0..=m + n {
                    let sum = (0..=j).fold(c.zero(), |s, k| s + binom_mod_p(m, k, &c) * binom_mod_p(n, j - k, &c));
                    if sum != binom_mod_p(m + n, j, &c) {
                        return Err(format!("Vandermonde m={m} n={n} j={j} p={p}"));
                    }
                }
            }
        }
    }
    Ok(String::new())
}

fn sequence_round_trips() -> Outcome {
    for p in [2, 3] {
        for n in 1..=3 {
            let c = ctx(p, n);
            for s in all_sequences(10, &c) {
                let up = s.to_upper().map_err(|e| e.to_string())?;
                if up.to_lower().as_ref() != Ok(&s) || up.degree() != s.degree() {
                    return Err(format!("e{s}"));
                }
            }
        }
    }
    Ok(String::new())
}

fn rho_tensor(t: &TensorPoly) -> Result<TensorPoly, String> {
    let mut st = Straightener::new(t.p());
    let a = t.map_factor(0, |x| st.straighten_seq(x)).map_err(|e| e.to_string())?;
    a.map_factor(1, |x| st.straighten_seq(x)).map_err(|e| e.to_string())
}

fn coalgebra() -> Outcome {
    for p in [2, 3] {
        let c = ctx(p, 1);
        for i in 0..=8 {
            let x = OpPoly::from_seq(UpperSeq::from_ints(&[i], &c).and_then(|u| u.to_lower()).map_err(|e| e.to_string())?);
            let once = coproduct_poly(&x).map_err(|e| e.to_string())?;
            // (psi x 1) psi against the iterated coproduct, which splits on the right
            let mut lhs = MultiTensor::zero(p);
            for (k, v) in once.terms() {
                for (kk, w) in coproduct_poly(&OpPoly::from_seq(k[0].clone())).map_err(|e| e.to_string())?.terms() {
                    lhs.add_term(vec![kk[0].clone(), kk[1].clone(), k[1].clone()], v * w);
                }
            }
            if lhs != iterated_coproduct(&x, 3).map_err(|e| e.to_string())? {
                return Err(format!("coassociativity at f^{i} p={p}"));
            }
        }
        let c = ctx(p, 2);
        let mut st = Straightener::new(p);
        for s in all_sequences(6, &c) {
            let x = OpPoly::from_seq(s.clone());
            let rho = st.straighten(&x).map_err(|e| e.to_string())?;
            let lhs = rho_tensor(&coproduct_poly(&x).map_err(|e| e.to_string())?)?;
            let rhs = rho_tensor(&coproduct_poly(&rho).map_err(|e| e.to_string())?)?;
            if lhs != rhs {
                return Err(format!("psi rho != rho psi at e{s} p={p}"));
            }
        }
    }
    Ok(String::new())
}

fn expansion_properties() -> Outcome {
    for (p, n, total) in [(2, 1, 5), (2, 2, 5), (2, 3, 5), (3, 1, 5), (3, 2, 5), (3, 3, 3)] {
        let c = ctx(p, n);
        for m in dickson_monomials(total, &c) {
            let e = expand_dickson_monomial(&m, &c).map_err(|e| e.to_string())?;
            let what = format!("d^{:?} p={p}", m.exps());
            let degree = m.degree(&c).map_err(|e| e.to_string())?;
            if e.support().any(|j| h_degree(j, &c).ok() != Some(degree)) {
                return Err(format!("{what} is not homogeneous"));
            }
            let lifted = DicksonMono::new(m.exps().iter().map(|x| x * p as u64).collect(), &c).map_err(|e| e.to_string())?;
            if total < 5 || m.exps().iter().sum::<u64>() <= 2 {
                let frob = e.frobenius(1).map_err(|e| e.to_string())?;
                if expand_dickson_monomial(&lifted, &c).map_err(|e| e.to_string())? != frob {
                    return Err(format!("Frobenius fails at {what}"));
                }
            }
            let support: Vec<OpSeq> = e.support().map(|j| psi_t(j, &c)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            let lo = support.iter().min_by(|a, b| compare(a, b)).unwrap();
            let hi = support.iter().max_by(|a, b| compare(a, b)).unwrap();
            let min = chi_min(&m, &c).map_err(|e| e.to_string())?;
            let max = chi_max(&m, &c).map_err(|e| e.to_string())?;
            let one = Fp::one(p);
            if lo != &min || hi != &max || e.coeff(&min.ints().unwrap()) != one || e.coeff(&max.ints().unwrap()) != one {
                return Err(format!("chi extremality fails at {what}"));
            }
        }
    }
    Ok(String::new())
}

fn a9() -> Outcome {
    lucas_and_vandermonde().map_err(|e| format!("arith: {e}"))?;
    sequence_round_trips().map_err(|e| format!("sequences: {e}"))?;
    coalgebra().map_err(|e| format!("coproduct: {e}"))?;
    expansion_properties().map_err(|e| format!("expansion: {e}"))?;
    Ok("arith, sequence round trips, coassociativity, psi rho = rho psi, Frobenius, homogeneity, chi extremality".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("A1", a1, Duration::from_secs(60)),
        ("A2", a2, Duration::from_secs(600)),
        ("A3", a3, Duration::from_secs(10)),
        ("A4", a4, Duration::from_secs(120)),
        ("A5", a5, Duration::from_secs(60)),
        ("A6", a6, Duration::from_secs(60)),
        ("A7", a7, Duration::from_secs(60)),
        ("A8", a8, Duration::from_secs(60)),
        ("A9", a9, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if took > budget {
                Err(format!("{d}; took {took:.2?}, budget {budget:?}"))
            } else {
                Ok(d)
            }
        });
        match outcome {
            Ok(d) => println!("PASS {name} ({took:.2?}): {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {name} ({took:.2?}): {d}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
