//! Seeded theorem suites.
//!
//! A suite runs a battery of checks on `trials` generated instances and a
//! fixed set of negative controls. Each trial draws its own generator from
//! `(seed, trial index)`, so trials run in parallel and the report does not
//! depend on scheduling. Reports carry no timing in their JSON form and are
//! byte-stable under `(seed, trials)`.

pub mod gen;
mod suites;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::stablemodel::Triangle;
use crate::verdict::Verdict;

pub use gen::{gen_instance, Gen, InstanceKind, SizeBounds};

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 8] = [
    "der_axioms_A",
    "exact_squares",
    "pointed",
    "stable_squares",
    "triangulation",
    "recollement",
    "dprime_shift",
    "additivity",
];

pub const REPORT_HEADER: &str =
    "Each check instantiates a theorem about derivators; the theorems are the oracles, so a failing check indicts the implementation.";

/// A check that must fail; `caught` records that it did, with a witness.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Control {
    pub name: String,
    pub caught: bool,
    pub verdict: Verdict,
}

impl Control {
    pub fn new(verdict: Verdict) -> Self {
        Control { name: verdict.name.clone(), caught: !verdict.pass && verdict.witness.is_some(), verdict }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Totals {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub controls: usize,
    pub controls_caught: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub header: String,
    pub seed: u64,
    pub trials: usize,
    pub field: String,
    pub verdicts: Vec<Verdict>,
    pub controls: Vec<Control>,
    pub totals: Totals,
    /// Every check passed and every control was caught.
    pub pass: bool,
    /// Wall-clock time; shown in the table, kept out of the JSON.
    #[serde(skip)]
    pub duration: Duration,
}

impl Report {
    fn new(suite: &str, seed: u64, trials: usize, field: String, verdicts: Vec<Verdict>, controls: Vec<Control>) -> Self {
        let passed = verdicts.iter().filter(|v| v.pass).count();
        let caught = controls.iter().filter(|c| c.caught).count();
        let totals = Totals {
            checks: verdicts.len(),
            passed,
            failed: verdicts.len() - passed,
            controls: controls.len(),
            controls_caught: caught,
        };
        Report {
            suite: suite.into(),
            header: REPORT_HEADER.into(),
            seed,
            trials,
            field,
            pass: totals.failed == 0 && caught == controls.len(),
            verdicts,
            controls,
            totals,
            duration: Duration::ZERO,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// One line per distinct check name, aggregated over trials, then the
    /// controls and totals.
    pub fn table(&self) -> String {
        let mut rows: Vec<(String, usize, usize)> = Vec::new();
        for v in &self.verdicts {
            let key = check_kind(&v.name).to_string();
            match rows.iter_mut().find(|r| r.0 == key) {
                Some(r) => {
                    r.1 += 1;
                    r.2 += usize::from(v.pass);
                }
                None => rows.push((key, 1, usize::from(v.pass))),
            }
        }
        let width = rows.iter().map(|r| r.0.chars().count()).chain(self.controls.iter().map(|c| c.name.chars().count())).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "suite {} (seed {}, {} trials, field {})", self.suite, self.seed, self.trials, self.field);
        let _ = writeln!(out, "{}", self.header);
        for (name, n, ok) in &rows {
            let mark = if ok == n { "pass" } else { "FAIL" };
            let _ = writeln!(out, "  {mark}  {name:<width$}  {ok}/{n}");
        }
        for c in &self.controls {
            let mark = if c.caught { "caught" } else { "MISSED" };
            let _ = writeln!(out, "  {mark}  control: {}", c.name);
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "{}: {}/{} checks, {}/{} controls caught, {:.2}s",
            if self.pass { "PASS" } else { "FAIL" },
            t.passed,
            t.checks,
            t.controls_caught,
            t.controls,
            self.duration.as_secs_f64()
        );
        out
    }
}

/// Verdict names are `trial N: check`; the table groups by `check`.
fn check_kind(name: &str) -> &str {
    match name.split_once(": ") {
        Some((head, rest)) if head.starts_with("trial ") => rest,
        _ => name,
    }
}

/// The seed of trial `i`: an independent ChaCha stream per trial index.
pub fn trial_seed(seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng.next_u64()
}

/// Runs a suite over ℚ with default sizes.
pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<Report> {
    run_suite_with::<crate::Q>(name, seed, trials, SizeBounds::default())
}

pub fn run_suite_with<F: Field>(name: &str, seed: u64, trials: usize, bounds: SizeBounds) -> Result<Report> {
    if trials == 0 {
        return Err(Error::BadParams("a suite needs at least one trial".into()));
    }
    if bounds.max_elements == 0 || bounds.window.0 > bounds.window.1 {
        return Err(Error::BadParams("size bounds must be positive".into()));
    }
    let suite = suites::lookup::<F>(name).ok_or_else(|| Error::UnknownSuite(name.into()))?;
    let start = Instant::now();
    let per_trial: Vec<Vec<Verdict>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i);
            let mut g = Gen::new(s, bounds);
            let verdicts = (suite.trial)(&mut g).unwrap_or_else(|e| vec![Verdict::fail("error", json!({"error": e.to_string()}))]);
            verdicts
                .into_iter()
                .map(|v| Verdict { name: format!("trial {i}: {}", v.name), ..v }.with_seed(s))
                .collect()
        })
        .collect();
    let controls = (suite.controls)()
        .unwrap_or_else(|e| vec![Verdict::pass(format!("control could not be built: {e}"))])
        .into_iter()
        .map(Control::new)
        .collect();
    let mut report = Report::new(name, seed, trials, F::descriptor(), per_trial.into_iter().flatten().collect(), controls);
    report.duration = start.elapsed();
    Ok(report)
}

/// Exactness of the long homology sequence of `t` at every joint.
pub fn long_exact_check<F: Field>(t: &Triangle<F>) -> Verdict {
    let name = format!("long exact sequence of {}", t.provenance);
    match t.les_defects() {
        Ok(defects) => Verdict::check(name, defects.is_empty(), || json!({"defects": defects})),
        Err(e) => Verdict::fail(name, json!({"error": e.to_string()})),
    }
}
