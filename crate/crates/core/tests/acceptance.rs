//! Acceptance battery. Each criterion is checked through the library and
//! again through the `qgit` binary; one PASS/FAIL line is printed per
//! criterion and the process fails if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use quadric_git::suite::{self, CriterionResult, LEMMA_TIME_BUDGET};
use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    elapsed: Duration,
}

fn qgit(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qgit"))
        .args(args)
        .arg("--json")
        .output()
        .expect("qgit runs");
    let elapsed = start.elapsed();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        json,
        elapsed,
    }
}

fn add(result: &mut CriterionResult, ok: bool, what: String) {
    result.passed &= ok;
    result.details.push(format!("{}: {what}", if ok { "ok" } else { "FAILED" }));
}

fn cli_lemmas(r: &mut CriterionResult) {
    for d in 3..=10 {
        let n = d.to_string();
        let run = qgit(&["verify-lemmas", "--d", &n]);
        let ok = run.code == 0 && run.json["result"]["passed"] == Value::Bool(true);
        add(r, ok, format!("qgit verify-lemmas --d {d} passes"));
        add(
            r,
            run.elapsed < LEMMA_TIME_BUDGET,
            format!("qgit verify-lemmas --d {d} took {:.3}s", run.elapsed.as_secs_f64()),
        );
    }
}

fn cli_lct(r: &mut CriterionResult) {
    let run = qgit(&["lct-bound", "--d", "4", "--f", "@family:3/1", "--weights", "2,3,4"]);
    let res = &run.json["result"];
    add(
        r,
        res["weighted_multiplicity"] == 12 && res["lct_upper_bound"] == "3/4",
        format!("qgit lct-bound d=4 slope 3/1: {} / {}", res["weighted_multiplicity"], res["lct_upper_bound"]),
    );
    let run = qgit(&["lct-bound", "--d", "3", "--f", "@family:3/1:strict", "--weights", "2,3,4"]);
    let res = &run.json["result"];
    add(
        r,
        res["weighted_multiplicity"] == 10 && res["lct_upper_bound"] == "9/10",
        format!("qgit lct-bound d=3 strict slope 3/1: {} / {}", res["weighted_multiplicity"], res["lct_upper_bound"]),
    );
}

fn cli_chow(r: &mut CriterionResult) {
    let f = "x0*x3^3+x1*x2^2*x3";
    let run = qgit(&["chow", "--q", "x0*x4+x1*x3+x2^2", "--f", f, "--chi", "3,3,-2,-2,-2"]);
    let res = &run.json["result"];
    add(
        r,
        run.code == 0 && res["mu_q"] == 1 && res["mu_y"] == -3 && res["combined"] == -2,
        format!("qgit chow: mu_q {}, mu_y {}, combined {}", res["mu_q"], res["mu_y"], res["combined"]),
    );
    let run = qgit(&["check", "--d", "4", "--f", f, "--fail-on", "unstable"]);
    add(
        r,
        run.code == 0 && run.json["result"]["verdict"] == "torus-non-stable",
        format!("qgit check: {}", run.json["result"]["verdict"]),
    );
}

fn cli_orbits(r: &mut CriterionResult) {
    for d in 3..=8u32 {
        let n = d.to_string();
        let mus = vec!["1"; d as usize / 2 + 1].join(",");
        let run = qgit(&["type-xi", "--d", &n, "--mus", &mus]);
        add(
            r,
            run.json["result"]["orbit"]["closed"] == true,
            format!("qgit type-xi d={d}: closed"),
        );
        let extra = format!("x1^{}*x4", d - 1);
        let run = qgit(&["type-xi", "--d", &n, "--mus", &mus, "--extra", &extra]);
        let orbit = &run.json["result"]["orbit"];
        add(
            r,
            orbit["closed"] == false && orbit["limit_is_type_xi"] == true,
            format!("qgit type-xi d={d} with {extra}: limit {}", orbit["limit"]),
        );
    }
}

fn main() -> ExitCode {
    let mut results = suite::run_all();
    for r in &mut results {
        match r.id {
            1 => cli_lemmas(r),
            4 => cli_lct(r),
            5 => cli_chow(r),
            6 => cli_orbits(r),
            _ => {}
        }
    }
    for r in &results {
        println!("{}", r.line());
        for d in r.details.iter().filter(|d| d.starts_with("FAILED")) {
            println!("    {d}");
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
