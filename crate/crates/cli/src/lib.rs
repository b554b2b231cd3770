//! Command-line front end for `dl-core`.

pub mod json;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dl_core::correspondence::{
    admissible_basis, solve_degree_diophantine, DicksonCombination, DualEngine, DualExpansion,
};
use dl_core::invariants::{expand_dickson_monomial, Poly};
use dl_core::opalgebra::{coproduct_poly, OpPoly, Straightener};
use dl_core::syntax::{self, render_borel, render_dickson, render_dickson_mono, render_dual, render_op_poly, render_seq};
use dl_core::verify::{self, Ranges, Suite};
use dl_core::{Context, Error, Fp, Nat};

#[derive(Parser, Debug)]
#[command(name = "dl", version, about = "Adem relations and hom-duals in the Dyer-Lashof algebra")]
pub struct Cli {
    /// The prime
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// Sequence length
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest entry enumerated by `verify`
    #[arg(long, global = true)]
    pub max_entry: Option<u64>,
    /// Largest degree enumerated by `verify`
    #[arg(long, global = true)]
    pub max_degree: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Admissible form via coefficient extraction in the Borel invariants
    Adem { expr: String },
    /// Admissible form via the Adem relations
    AdemClassical { expr: String },
    /// Dual expansion of a Dickson combination
    Dual { expr: String },
    /// Dickson combination dual to admissible sequences
    InvertDual { expr: String },
    /// Dickson combination expanded in h_1..h_n
    Expand { expr: String },
    /// Admissible sequences of a degree
    Basis { degree: u64 },
    /// Dickson monomials of a degree
    SolveDegree { degree: u64 },
    /// Kronecker pairing of a Dickson monomial with a sequence
    Pair { dickson: String, seq: String },
    /// Coproduct of a combination of sequences
    Coprod { expr: String },
    /// Run a self-check suite
    Verify { suite: Suite },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Adem { .. } => "adem",
            Command::AdemClassical { .. } => "adem-classical",
            Command::Dual { .. } => "dual",
            Command::InvertDual { .. } => "invert-dual",
            Command::Expand { .. } => "expand",
            Command::Basis { .. } => "basis",
            Command::SolveDegree { .. } => "solve-degree",
            Command::Pair { .. } => "pair",
            Command::Coprod { .. } => "coprod",
            Command::Verify { .. } => "verify",
        }
    }
}

/// How a run failed, mapped to the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad request: unparsable expression, unsupported prime or length, missing flag.
    Usage(String),
    /// The library rejected a well-formed request, or a suite failed.
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Syntax { .. } | Error::UnsupportedPrime(_) | Error::UnsupportedLength(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Rendered output of a successful run; `ok` is false when a suite failed.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn context(cli: &Cli) -> Result<Context, Failure> {
    let n = cli.n.ok_or_else(|| Failure::Usage(format!("`{}` needs --n", cli.command.name())))?;
    Ok(Context::new(cli.p, n)?)
}

fn envelope(cli: &Cli, ctx: Option<&Context>, input: Value, result: Value) -> String {
    let mut v = json!({ "p": cli.p });
    if let Some(c) = ctx {
        v["n"] = json!(c.n());
    } else if let Some(n) = cli.n {
        v["n"] = json!(n);
    }
    v["command"] = json!(cli.command.name());
    v["input"] = input;
    v["result"] = result;
    v.to_string()
}

fn ops_input(x: &OpPoly) -> Value {
    json::as_input(json::op_poly_to_json(x))
}

fn dual_input(text: &str, ctx: &Context) -> Result<OpPoly, Failure> {
    if text.contains(")*") {
        Ok(syntax::parse_dual(text, ctx)?.0)
    } else {
        Ok(syntax::parse_op_poly(text, ctx)?)
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let done = |text: String| Ok(Output { text, ok: true });
    let as_json = cli.format == Format::Json;
    match &cli.command {
        Command::Adem { expr } => {
            let ctx = context(cli)?;
            let x = syntax::parse_op_poly(expr, &ctx)?;
            let engine = DualEngine::new(ctx);
            let mut out = OpPoly::zero(ctx.p());
            for (s, c) in x.terms() {
                out = out.add(&engine.adem_via_invariants(s)?.scale(c));
            }
            done(if as_json {
                envelope(cli, Some(&ctx), ops_input(&x), json::op_poly_to_json(&out))
            } else {
                render_op_poly(&out, "Q")
            })
        }
        Command::AdemClassical { expr } => {
            let ctx = context(cli)?;
            let x = syntax::parse_op_poly(expr, &ctx)?;
            let out = Straightener::new(ctx.p()).straighten(&x)?;
            done(if as_json {
                envelope(cli, Some(&ctx), ops_input(&x), json::op_poly_to_json(&out))
            } else {
                render_op_poly(&out, "Q")
            })
        }
        Command::Dual { expr } => {
            let ctx = context(cli)?;
            let x = syntax::parse_dickson(expr, &ctx)?;
            let out = DualEngine::new(ctx).dual_of_combination(&x)?;
            done(if as_json {
                envelope(cli, Some(&ctx), json::as_input(json::dickson_to_json(&x, &ctx)), json::dual_to_json(&out))
            } else {
                render_dual(&out)
            })
        }
        Command::InvertDual { expr } => {
            let ctx = context(cli)?;
            let x = dual_input(expr, &ctx)?;
            let engine = DualEngine::new(ctx);
            let mut out = DicksonCombination::zero(ctx.p());
            for (s, c) in x.terms() {
                for (m, v) in engine.dickson_of_dual(s)?.terms() {
                    out.add_term(m.clone(), c * v);
                }
            }
            done(if as_json {
                let input = json::as_input(json::dual_to_json(&DualExpansion(x)));
                envelope(cli, Some(&ctx), input, json::dickson_to_json(&out, &ctx))
            } else {
                render_dickson(&out, &ctx)
            })
        }
        Command::Expand { expr } => {
            let ctx = context(cli)?;
            let x = syntax::parse_dickson(expr, &ctx)?;
            let mut out = Poly::zero(ctx.p(), ctx.n());
            for (m, c) in x.terms() {
                out = out.add(&expand_dickson_monomial(m, &ctx)?.scale(c));
            }
            done(if as_json {
                envelope(cli, Some(&ctx), json::as_input(json::dickson_to_json(&x, &ctx)), json::borel_to_json(&out))
            } else {
                render_borel(&out)
            })
        }
        Command::Basis { degree } => {
            let ctx = context(cli)?;
            let basis = admissible_basis(Nat(*degree as u128), &ctx)?;
            done(if as_json {
                let result = basis.iter().map(json::seq_to_json).collect();
                envelope(cli, Some(&ctx), json!({ "degree": degree }), result)
            } else {
                basis.iter().map(|s| render_seq(s, "Q")).collect::<Vec<_>>().join("\n")
            })
        }
        Command::SolveDegree { degree } => {
            let ctx = context(cli)?;
            let monos = solve_degree_diophantine(Nat(*degree as u128), &ctx)?;
            done(if as_json {
                let result = monos.iter().map(json::dickson_mono_to_json).collect();
                envelope(cli, Some(&ctx), json!({ "degree": degree }), result)
            } else {
                monos.iter().map(render_dickson_mono).collect::<Vec<_>>().join("\n")
            })
        }
        Command::Pair { dickson, seq } => {
            let ctx = context(cli)?;
            let m = syntax::parse_dickson_mono(dickson, &ctx)?;
            let s = syntax::parse_seq(seq, &ctx)?;
            let v: Fp = DualEngine::new(ctx).kronecker_pair(&m, &s)?;
            done(if as_json {
                let input = json!({ "dickson": m.exps(), "seq": json::seq_to_json(&s) });
                envelope(cli, Some(&ctx), input, json!(v.value()))
            } else {
                v.value().to_string()
            })
        }
        Command::Coprod { expr } => {
            let ctx = context(cli)?;
            let x = syntax::parse_op_poly(expr, &ctx)?;
            let out = coproduct_poly(&x)?;
            done(if as_json {
                envelope(cli, Some(&ctx), ops_input(&x), json::tensor_to_json(&out))
            } else {
                syntax::render_tensor(&out, "e")
            })
        }
        Command::Verify { suite } => {
            let ranges = Ranges { p: Some(cli.p), n: cli.n, max_entry: cli.max_entry, max_degree: cli.max_degree };
            let report = verify::run(*suite, &ranges)?;
            let text = if as_json {
                let cases: Vec<Value> = report
                    .cases
                    .iter()
                    .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                    .collect();
                let result = json!({ "passed": report.passed(), "cases": cases });
                envelope(cli, None, json!({ "suite": suite.name() }), result)
            } else {
                report.to_string()
            };
            Ok(Output { text, ok: report.passed() })
        }
    }
}
