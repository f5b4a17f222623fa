//! The acceptance criteria, one line each. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use derivator::verify::{run_suite, Report, SUITES};
use derivator::{Matrix, Rational, Q};

/// Wall-clock ceilings; everything else is compared exactly.
const DER_AXIOMS_LIMIT: Duration = Duration::from_secs(30);
const TRIANGULATION_LIMIT: Duration = Duration::from_secs(60);
const SEED: u64 = 1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Passed and total counts per check kind, over all trials.
fn tally(r: &Report) -> BTreeMap<String, (usize, usize)> {
    let mut t = BTreeMap::new();
    for v in &r.verdicts {
        let kind = v.name.split_once(": ").map_or(v.name.as_str(), |(_, k)| k).to_string();
        let e = t.entry(kind).or_insert((0, 0));
        e.0 += usize::from(v.pass);
        e.1 += 1;
    }
    t
}

/// Every check kind whose name contains one of `needles` ran at least
/// `min` times and always passed.
fn kinds_hold(r: &Report, needles: &[&str], min: usize) -> Result<(), String> {
    let t = tally(r);
    for n in needles {
        let rows: Vec<_> = t.iter().filter(|(k, _)| k.contains(n)).collect();
        if rows.is_empty() {
            return Err(format!("no check matching {n:?}"));
        }
        for (k, &(ok, total)) in rows {
            if total < min || ok != total {
                return Err(format!("{k}: {ok}/{total}"));
            }
        }
    }
    Ok(())
}

fn controls_caught(r: &Report) -> bool {
    !r.controls.is_empty() && r.controls.iter().all(|c| c.caught)
}

fn suite_criterion(name: &str, trials: usize, needles: &[&str], min: usize, limit: Option<Duration>) -> Outcome {
    let r = match run_suite(name, SEED, trials) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("suite error: {e}")),
    };
    let checks = kinds_hold(&r, needles, min);
    let time_ok = limit.is_none_or(|l| r.duration < l);
    let pass = r.pass && checks.is_ok() && controls_caught(&r) && time_ok;
    let mut detail = format!(
        "{}/{} checks, {}/{} controls caught, {:.2}s",
        r.totals.passed,
        r.totals.checks,
        r.totals.controls_caught,
        r.totals.controls,
        r.duration.as_secs_f64()
    );
    if let Some(l) = limit {
        detail += &format!(" (limit {}s)", l.as_secs());
    }
    if let Err(e) = checks {
        detail += &format!("; {e}");
    }
    if let Some(v) = r.failures().next() {
        detail += &format!("; first failure {}", v.name);
    }
    outcome(pass, detail)
}

fn der_axioms() -> Outcome {
    suite_criterion(
        "der_axioms_A",
        25,
        &["Kan formula mate", "Hom(", "triangle identity", "coproduct"],
        25,
        Some(DER_AXIOMS_LIMIT),
    )
}

fn exact_squares() -> Outcome {
    suite_criterion(
        "exact_squares",
        25,
        &["comma square", "Kan formula square", "pullback along an opfibration", "cofinality of a right adjoint"],
        25,
        None,
    )
}

fn pointed() -> Outcome {
    suite_criterion("pointed", 10, &["vanishes off the image", "1^?", "0^!", "0_*"], 10, None)
}

fn stable_squares() -> Outcome {
    suite_criterion(
        "stable_squares",
        25,
        &["pushout square is biCartesian", "cancellation", "quasi-isomorphism iff acyclic cone"],
        25,
        None,
    )
}

fn triangulation() -> Outcome {
    suite_criterion(
        "triangulation",
        10,
        &["long exact sequence of T(f)", "rotation compares to -Σf", "long exact sequence of octahedron", "octahedron identifications"],
        10,
        Some(TRIANGULATION_LIMIT),
    )
}

fn additivity() -> Outcome {
    suite_criterion("additivity", 10, &["H(X ⊕ Y)", "Segal map for n = 2", "Segal map for n = 3", "σ*", "concatenation"], 10, None)
}

fn recollement() -> Outcome {
    suite_criterion("recollement", 10, &["on [1]", "on 4 elements"], 10, None)
}

/// Exact arithmetic: the 12 × 12 Hilbert matrix has full rank and its
/// inverse is exact, where floating point loses rank at this size.
/// Also runs the one suite no other criterion covers.
fn exactness() -> Outcome {
    let n = 12;
    let h: Matrix<Q> = Matrix::from_fn(n, n, |i, j| Rational::new(1, (i + j + 1) as i64));
    let rank = h.rank();
    let inv_ok = h.inverse().is_some_and(|inv| h.mul(&inv) == Matrix::identity(n));
    let third = Rational::new(1, 3);
    let sum_ok = third.clone() + third.clone() + third == Rational::from(1);
    let shift = suite_criterion("dprime_shift", 10, &["evaluation preserves", "fully faithful"], 10, None);
    outcome(
        rank == n && inv_ok && sum_ok && shift.pass,
        format!("Hilbert rank {rank}/{n}, exact inverse {inv_ok}, dprime_shift: {}", shift.detail),
    )
}

fn determinism() -> Outcome {
    let mut bad = Vec::new();
    for name in SUITES {
        let a = run_suite(name, 7, 3).map(|r| r.to_json());
        let b = run_suite(name, 7, 3).map(|r| r.to_json());
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => bad.push(name),
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} suites byte-identical", SUITES.len()) } else { format!("differ: {bad:?}") })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("der_axioms_A", der_axioms),
        ("exact_squares", exact_squares),
        ("pointed", pointed),
        ("stable_squares", stable_squares),
        ("triangulation", triangulation),
        ("additivity", additivity),
        ("recollement", recollement),
        ("exactness", exactness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} {name}: {} ({}; {:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
