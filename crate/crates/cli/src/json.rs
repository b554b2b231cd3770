//! JSON encoding of domain values.
//!
//! Sequence entries are decimal strings (`"3"`, `"3/2"`), Bockstein bits
//! are `0`/`1`, coefficients are integers in `1..p`. A combination is an
//! array of term objects, each carrying `coeff` and one payload:
//! `seq`+`eps`, `dickson`, `h`, or `factors`.

use dl_core::correspondence::{DicksonCombination, DualExpansion};
use dl_core::invariants::{BPoly, DicksonMono, Poly};
use dl_core::opalgebra::{MultiTensor, OpPoly};
use dl_core::{Context, Fp, HalfInt, OpSeq};
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
#[error("bad JSON value: {0}")]
pub struct JsonError(pub String);

type Result<T> = std::result::Result<T, JsonError>;

fn bad<T>(what: impl Into<String>) -> Result<T> {
    Err(JsonError(what.into()))
}

fn entry_text(e: HalfInt) -> String {
    e.to_string()
}

fn entry_parse(v: &Value) -> Result<u64> {
    let Some(s) = v.as_str() else { return bad(format!("entry {v} is not a string")) };
    let twice = match s.strip_suffix("/2") {
        Some(num) => num.parse::<u64>().ok(),
        None => s.parse::<u64>().ok().and_then(|x| x.checked_mul(2)),
    };
    twice.map_or_else(|| bad(format!("entry {s:?}")), Ok)
}

pub fn seq_fields(s: &OpSeq) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("seq".into(), s.entries().iter().map(|&e| Value::from(entry_text(e))).collect());
    m.insert("eps".into(), s.eps().iter().map(|&b| Value::from(b as u8)).collect());
    m
}

pub fn seq_to_json(s: &OpSeq) -> Value {
    Value::Object(seq_fields(s))
}

pub fn seq_from_json(v: &Value, ctx: &Context) -> Result<OpSeq> {
    let Some(entries) = v.get("seq").and_then(Value::as_array) else { return bad("missing `seq`") };
    let twice = entries.iter().map(entry_parse).collect::<Result<Vec<_>>>()?;
    let eps = match v.get("eps").and_then(Value::as_array) {
        Some(bits) => bits
            .iter()
            .map(|b| match b.as_u64() {
                Some(0) => Ok(false),
                Some(1) => Ok(true),
                _ => bad(format!("eps bit {b}")),
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![false; twice.len()],
    };
    OpSeq::from_twice(&twice, &eps, ctx).map_err(|e| JsonError(e.to_string()))
}

fn term(c: Fp, mut body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("coeff".into(), Value::from(c.value()));
    m.append(&mut body);
    Value::Object(m)
}

fn coeff_of(v: &Value, p: u32) -> Result<Fp> {
    match v.get("coeff").map(Value::as_u64) {
        None => Ok(Fp::one(p)),
        Some(Some(c)) => Ok(Fp::new(c as i64, p)),
        Some(None) => bad("`coeff` is not a non-negative integer"),
    }
}

fn terms_of(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().map_or_else(|| bad("expected an array of terms"), Ok)
}

pub fn op_poly_to_json(x: &OpPoly) -> Value {
    dl_core::correspondence::sorted_by_compare(x).iter().map(|(s, c)| term(*c, seq_fields(s))).collect()
}

pub fn op_poly_from_json(v: &Value, ctx: &Context) -> Result<OpPoly> {
    let mut out = OpPoly::zero(ctx.p());
    for t in terms_of(v)? {
        out.add_term(seq_from_json(t, ctx)?, coeff_of(t, ctx.p())?);
    }
    Ok(out)
}

pub fn dual_to_json(x: &DualExpansion) -> Value {
    op_poly_to_json(&x.0)
}

pub fn dual_from_json(v: &Value, ctx: &Context) -> Result<DualExpansion> {
    op_poly_from_json(v, ctx).map(DualExpansion)
}

fn dickson_fields(m: &DicksonMono) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("dickson".into(), json!(m.exps()));
    out
}

pub fn dickson_mono_to_json(m: &DicksonMono) -> Value {
    Value::Object(dickson_fields(m))
}

pub fn dickson_mono_from_json(v: &Value, ctx: &Context) -> Result<DicksonMono> {
    let Some(exps) = v.get("dickson").and_then(Value::as_array) else { return bad("missing `dickson`") };
    let exps = exps.iter().map(|e| e.as_u64().map_or_else(|| bad(format!("exponent {e}")), Ok)).collect::<Result<_>>()?;
    DicksonMono::new(exps, ctx).map_err(|e| JsonError(e.to_string()))
}

pub fn dickson_to_json(x: &DicksonCombination, ctx: &Context) -> Value {
    x.sorted_terms(ctx).iter().map(|(m, c)| term(*c, dickson_fields(m))).collect()
}

pub fn dickson_from_json(v: &Value, ctx: &Context) -> Result<DicksonCombination> {
    let mut out = DicksonCombination::zero(ctx.p());
    for t in terms_of(v)? {
        out.add_term(dickson_mono_from_json(t, ctx)?, coeff_of(t, ctx.p())?);
    }
    Ok(out)
}

/// Highest monomial first, as in the text rendering.
pub fn borel_to_json(x: &BPoly) -> Value {
    x.terms()
        .rev()
        .map(|(e, c)| {
            let mut m = Map::new();
            m.insert("h".into(), json!(e));
            term(c, m)
        })
        .collect()
}

pub fn borel_from_json(v: &Value, ctx: &Context) -> Result<BPoly> {
    let mut out = Poly::zero(ctx.p(), ctx.n());
    for t in terms_of(v)? {
        let Some(exps) = t.get("h").and_then(Value::as_array) else { return bad("missing `h`") };
        let exps: Vec<u64> =
            exps.iter().map(|e| e.as_u64().map_or_else(|| bad(format!("exponent {e}")), Ok)).collect::<Result<_>>()?;
        if exps.len() != ctx.n() {
            return bad(format!("`h` has {} exponents, expected {}", exps.len(), ctx.n()));
        }
        out.add_term(exps, coeff_of(t, ctx.p())?);
    }
    Ok(out)
}

pub fn tensor_to_json(x: &MultiTensor) -> Value {
    x.terms()
        .map(|(k, c)| {
            let mut m = Map::new();
            m.insert("factors".into(), k.iter().map(seq_to_json).collect());
            term(c, m)
        })
        .collect()
}

pub fn tensor_from_json(v: &Value, ctx: &Context) -> Result<MultiTensor> {
    let mut out = MultiTensor::zero(ctx.p());
    for t in terms_of(v)? {
        let Some(fs) = t.get("factors").and_then(Value::as_array) else { return bad("missing `factors`") };
        let key = fs.iter().map(|f| seq_from_json(f, ctx)).collect::<Result<Vec<_>>>()?;
        out.add_term(key, coeff_of(t, ctx.p())?);
    }
    Ok(out)
}

/// A single term with coefficient 1 is written as its bare payload, anything
/// else as `{"terms": [...]}`.
pub fn as_input(terms: Value) -> Value {
    match terms.as_array().map(Vec::as_slice) {
        Some([only]) if only.get("coeff") == Some(&Value::from(1)) => {
            let mut m = only.as_object().cloned().unwrap_or_default();
            m.shift_remove("coeff");
            Value::Object(m)
        }
        _ => json!({ "terms": terms }),
    }
}

/// Inverse of [`as_input`].
pub fn input_terms(v: &Value) -> Value {
    match v.get("terms") {
        Some(t) => t.clone(),
        None => Value::Array(vec![v.clone()]),
    }
}
