use std::process::{Command, Output};

use dl_cli::json;
use dl_core::syntax;
use dl_core::Context;
use serde_json::Value;

fn dl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dl")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = dl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&["adem", "--p", "3", "--n", "2", "e[3,1]"]), "2*Q[0,2]");
    assert_eq!(stdout(&["dual", "--p", "2", "--n", "2", "d1^3"]), "(Q[0,3])* + (Q[2,2])*");
    assert_eq!(stdout(&["expand", "--p", "3", "--n", "2", "d1"]), "h1^3 + h2");
}

#[test]
fn normative_json() {
    let got = stdout(&["adem", "--p", "3", "--n", "2", "e[3,1]", "--format", "json"]);
    assert_eq!(
        got,
        r#"{"p":3,"n":2,"command":"adem","input":{"seq":["3","1"],"eps":[0,0]},"result":[{"coeff":2,"seq":["0","2"],"eps":[0,0]}]}"#
    );
}

#[test]
fn engines_agree_through_the_cli() {
    for expr in ["e[3,1]", "e[9,0]", "e[4,1] + 2*e[5,2]", "e[0,2]"] {
        let a = stdout(&["adem", "--p", "3", "--n", "2", expr]);
        let b = stdout(&["adem-classical", "--p", "3", "--n", "2", expr]);
        assert_eq!(a, b, "{expr}");
    }
    assert_eq!(stdout(&["adem-classical", "--p", "3", "--n", "2", "e[1,1/2;eps=01]"]), "Q[1/2,1/2;eps=10]");
}

#[test]
fn other_commands() {
    assert_eq!(stdout(&["invert-dual", "--p", "2", "--n", "2", "(Q[0,3])*"]), "d1^3 + d0^2");
    assert_eq!(stdout(&["invert-dual", "--p", "2", "--n", "2", "Q[0,3]"]), "d1^3 + d0^2");
    assert_eq!(stdout(&["basis", "12", "--p", "2", "--n", "2"]), "Q[0,6]\nQ[2,5]\nQ[4,4]");
    assert_eq!(stdout(&["solve-degree", "12", "--p", "2", "--n", "2"]), "d1^6\nd0^2*d1^3\nd0^4");
    assert_eq!(stdout(&["pair", "--p", "2", "--n", "2", "d1^3", "Q[2,2]"]), "1");
    assert_eq!(stdout(&["coprod", "--p", "3", "--n", "1", "e[1]"]), "e[0] (x) e[1] + e[1] (x) e[0]");
    assert_eq!(stdout(&["adem", "--p", "3", "--n", "2", "e[1,0]"]), "0");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| dl(args).status.code().unwrap();
    assert_eq!(code(&["adem", "--p", "3", "--n", "2", "e[3,1]"]), 0);
    // syntax error, with the byte offset in the message
    let out = dl(&["adem", "--p", "3", "--n", "2", "e[3,"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 4"));
    assert_eq!(code(&["adem", "--p", "4", "--n", "2", "e[3,1]"]), 2);
    assert_eq!(code(&["adem", "--p", "3", "e[3,1]"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["verify", "no-such-suite"]), 2);
    // well-formed but outside what the engine handles
    assert_eq!(code(&["adem", "--p", "3", "--n", "2", "e[3/2,1;eps=01]"]), 1);
    assert_eq!(code(&["invert-dual", "--p", "3", "--n", "2", "Q[3,1]"]), 1);
    assert_eq!(code(&["adem", "--p", "3", "--n", "2", "e[3,1,0]"]), 1);
    assert_eq!(code(&["adem-classical", "--p", "2", "--n", "2", "e[1,1;eps=01]"]), 1);
}

#[test]
fn json_round_trips() {
    let c32 = Context::new(3, 2).unwrap();
    let c22 = Context::new(2, 2).unwrap();

    let v = json_of(&["adem-classical", "--p", "3", "--n", "2", "e[4,1/2;eps=01] + e[5,1]"]);
    let input = json::op_poly_from_json(&json::input_terms(&v["input"]), &c32).unwrap();
    assert_eq!(input, syntax::parse_op_poly("e[4,1/2;eps=01] + e[5,1]", &c32).unwrap());
    let text = stdout(&["adem-classical", "--p", "3", "--n", "2", "e[4,1/2;eps=01] + e[5,1]"]);
    let result = json::op_poly_from_json(&v["result"], &c32).unwrap();
    assert_eq!(result, syntax::parse_op_poly(&text, &c32).unwrap());

    let v = json_of(&["dual", "--p", "2", "--n", "2", "d1^3"]);
    let dual = json::dual_from_json(&v["result"], &c22).unwrap();
    assert_eq!(syntax::render_dual(&dual), "(Q[0,3])* + (Q[2,2])*");

    let v = json_of(&["invert-dual", "--p", "2", "--n", "2", "Q[0,3]"]);
    let d = json::dickson_from_json(&v["result"], &c22).unwrap();
    assert_eq!(d, syntax::parse_dickson("d1^3 + d0^2", &c22).unwrap());

    let v = json_of(&["expand", "--p", "3", "--n", "2", "d1^2 + d0"]);
    let b = json::borel_from_json(&v["result"], &c32).unwrap();
    let text = stdout(&["expand", "--p", "3", "--n", "2", "d1^2 + d0"]);
    assert_eq!(b, syntax::parse_borel(&text, &c32).unwrap());

    let v = json_of(&["coprod", "--p", "3", "--n", "2", "e[2,1]"]);
    let t = json::tensor_from_json(&v["result"], &c32).unwrap();
    let text = stdout(&["coprod", "--p", "3", "--n", "2", "e[2,1]"]);
    assert_eq!(t, syntax::parse_tensor(&text, &c32).unwrap());

    let v = json_of(&["basis", "12", "--p", "2", "--n", "2"]);
    let seqs: Vec<_> = v["result"].as_array().unwrap().iter().map(|s| json::seq_from_json(s, &c22).unwrap()).collect();
    assert_eq!(seqs.len(), 3);

    let v = json_of(&["solve-degree", "12", "--p", "2", "--n", "2"]);
    let monos: Vec<_> =
        v["result"].as_array().unwrap().iter().map(|m| json::dickson_mono_from_json(m, &c22).unwrap()).collect();
    assert_eq!(monos[0].exps(), &[0, 6]);

    assert_eq!(json_of(&["pair", "--p", "2", "--n", "2", "d1^3", "Q[2,2]"])["result"], 1);
}

#[test]
fn text_is_stable_under_rerendering() {
    let c = Context::new(3, 2).unwrap();
    for expr in ["e[9,0] + e[3,1] + e[4,1]", "e[10,1/2;eps=01]"] {
        let text = stdout(&["adem-classical", "--p", "3", "--n", "2", expr]);
        let again = syntax::render_op_poly(&syntax::parse_op_poly(&text, &c).unwrap(), "Q");
        assert_eq!(text, again);
    }
}

#[test]
fn verify_suites() {
    assert!(stdout(&["verify", "paper-vectors", "--p", "3"]).ends_with("0 failed"));
    assert!(stdout(&["verify", "dickson-oracles", "--p", "2", "--n", "3"]).ends_with("0 failed"));
    assert!(stdout(&["verify", "oracle-equivalence", "--p", "2", "--n", "2", "--max-entry", "12"]).ends_with("0 failed"));
    let v = json_of(&["verify", "identities", "--p", "2"]);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_dl"))
            .env("DL_THREADS", threads)
            .args(["dual", "--p", "3", "--n", "3", "d0^2*d1*d2^3"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(env!("CARGO_BIN_EXE_dl")).env("DL_THREADS", "many").args(["basis", "4", "--n", "1"]).output();
    assert_eq!(bad.unwrap().status.code(), Some(2));
}
