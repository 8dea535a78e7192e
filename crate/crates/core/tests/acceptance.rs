//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero when any criterion departs from its recorded state.

mod support;

use std::process::ExitCode;
use std::time::Instant;

use sec_core::arith::rat;
use sec_core::constraints::Recipe;
use sec_core::exponents::{discrepancy_grid, exponent_c, exponent_cn, threshold_table, ThresholdOptions};

use support::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_check(c: Check) -> Self {
        match c {
            Ok(detail) => Self { pass: true, detail },
            Err(detail) => Self { pass: false, detail },
        }
    }
}

const TABLE_CELLS: [(u64, u64, u64, u64); 8] =
    [(2, 3, 6, 106), (2, 4, 6, 108), (2, 7, 7, 114), (3, 3, 15, 552), (3, 4, 15, 553), (4, 4, 28, 1164), (2, 100, 100, 234), (2, 1000, 1000, 1000)];

/// Cells known to miss the published threshold under the unit-r convention.
const KNOWN_MISMATCHES: [(u64, u64); 4] = [(2, 100), (6, 100), (6, 1000), (7, 100)];

/// Returns the outcome and whether it matches the recorded state: only the known cells differ.
fn threshold_cells() -> (Outcome, bool) {
    let ledgers = threshold_table(&ThresholdOptions::default());
    let attempted = ledgers.len();
    let matched = ledgers.iter().filter(|l| l.matches_published == Some(true)).count();
    let mut lines = vec![format!("{matched}/{attempted} published cells reproduced")];
    let mut required_ok = true;
    for (m, d, n0, big_n) in TABLE_CELLS {
        let l = ledgers.iter().find(|l| (l.row.m, l.row.d) == (m, d)).expect("cell in table");
        if (l.row.n0, l.row.big_n) != (n0, big_n) {
            required_ok = false;
            lines.push(format!("required ({m},{d}) -> ({n0},{big_n}) computed ({},{})", l.row.n0, l.row.big_n));
        }
    }
    let mut mismatched = Vec::new();
    let mut margins_reported = true;
    for l in ledgers.iter().filter(|l| l.matches_published != Some(true)) {
        mismatched.push((l.row.m, l.row.d));
        match (&l.last_failure, &l.published) {
            (Some(f), Some(p)) => lines.push(format!(
                "mismatch ({},{}): N={} published {}, last failing n={} misses by {}",
                l.row.m, l.row.d, l.row.big_n, p.big_n, f.n, f.exact_gap
            )),
            _ => margins_reported = false,
        }
    }
    let fraction_ok = matched * 10 >= attempted * 9;
    let pass = required_ok && fraction_ok && margins_reported;
    let expected = !required_ok && fraction_ok && margins_reported && mismatched == KNOWN_MISMATCHES;
    (Outcome { pass, detail: lines.join("\n    ") }, expected)
}

fn exponent_identities() -> Outcome {
    let anchors = exponent_c(2, 3, 6).ok() == Some(rat(8, 1))
        && exponent_c(3, 4, 7).ok() == Some(rat(5, 1))
        && exponent_cn(2, 3, 6).ok() == Some((rat(4, 45), rat(4, 45)))
        && exponent_cn(3, 4, 7).ok() == Some((rat(-3, 49), rat(-3, 49)));
    if !anchors {
        return Outcome { pass: false, detail: "anchor values differ".into() };
    }
    Outcome::from_check(check_exponent_grid().map(|s| format!("anchors hold; {s}")))
}

fn shapes() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (curve, n, recipe) in shape_cases() {
        match run_recipe(&curve, n, recipe, 100, 7, None) {
            Ok(run) => {
                pass &= run.shape_ok();
                lines.push(format!("{}: {}/{} matched, {} rejected", run.label, run.matched, run.accepted(), run.rejected));
            }
            Err(e) => {
                pass = false;
                lines.push(e);
            }
        }
    }
    Outcome { pass, detail: lines.join("\n    ") }
}

fn galois_soundness() -> Outcome {
    let corpus = check_small_corpus(3, 200).and_then(|c3| check_small_corpus(4, 200).map(|c4| (c3, c4)));
    let (((i3, s3), (i4, s4)), products) = match corpus.and_then(|c| check_reducible_products(10_000, 21, 60).map(|p| (c, p))) {
        Ok(x) => x,
        Err(e) => return Outcome { pass: false, detail: e },
    };
    Outcome {
        pass: true,
        detail: format!("cubics {s3}/{i3} certified, quartics {s4}/{i4} certified, none false; {products} without certificates"),
    }
}

fn hilbert() -> Outcome {
    let y2 = curve(2, &[1, 1, 0, 1]);
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    let recipes = [
        Recipe::ShortCycle { ell: 2 },
        Recipe::ShortCycle { ell: 3 },
        Recipe::ShortCycle { ell: 5 },
        Recipe::BTransitive,
        Recipe::BLong,
    ];
    for recipe in recipes {
        match run_recipe(&y2, 6, recipe, 200, 1, Some(500)) {
            Ok(run) => {
                pass &= run.certified * 100 >= run.drawn * 95;
                lines.push(format!("{}: {}/{} certified S_6", recipe.name(), run.certified, run.drawn));
            }
            Err(e) => lines.push(format!("{e} (recipe not applicable)")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 120.0 && lines.iter().any(|l| l.contains("certified"));
    lines.push(format!("{secs:.1}s"));
    Outcome { pass, detail: lines.join("\n    ") }
}

fn oracles() -> Outcome {
    let checks = [check_frobenius(), check_hulls(1000, 11), check_newton_polygons(300, 12), check_mod_p_factoring(120, 13), check_fujiwara(500, 14)];
    let pass = checks.iter().all(Result::is_ok);
    let detail = checks.into_iter().map(|c| c.unwrap_or_else(|e| format!("FAILED {e}"))).collect::<Vec<_>>().join("; ");
    Outcome { pass, detail }
}

fn degree_contracts() -> Outcome {
    Outcome::from_check(check_point_contracts().and_then(|p| check_generic_degrees(200, 3).map(|g| format!("point plans {p}; {g} of degree n"))))
}

fn discrepancy_report() -> Outcome {
    match discrepancy_grid(2, 6, 12, 200) {
        Ok(grid) => {
            let names = grid.kind_names();
            let counts: Vec<String> = grid.kinds.iter().map(|k| format!("{} x{}", k.name, k.occurrences)).collect();
            Outcome { pass: names == ["improved-exponent", "point-closed-form"], detail: counts.join(", ") }
        }
        Err(e) => Outcome { pass: false, detail: e.to_string() },
    }
}

fn main() -> ExitCode {
    let (table, table_recorded) = threshold_cells();
    // Criterion 1 is recorded as failing on the known cells; every other criterion must pass.
    let mut results = vec![(table, table_recorded)];
    for out in [exponent_identities(), shapes(), galois_soundness(), hilbert(), oracles(), degree_contracts(), discrepancy_report()] {
        let pass = out.pass;
        results.push((out, pass));
    }
    let mut unexpected = 0;
    for (i, (out, recorded)) in results.iter().enumerate() {
        println!("criterion {}: {} - {}", i + 1, if out.pass { "PASS" } else { "FAIL" }, out.detail);
        if !recorded {
            unexpected += 1;
        }
    }
    let passed = results.iter().filter(|(o, _)| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria differ from their recorded state");
        ExitCode::FAILURE
    }
}
