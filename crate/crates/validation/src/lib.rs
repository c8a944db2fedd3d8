//! Reporting for the acceptance suite: each criterion runs under a time
//! budget and prints one PASS/FAIL line with its measured evidence.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Named sub-checks of one criterion; the criterion passes when all do.
#[derive(Debug, Default)]
pub struct Checks {
    parts: Vec<(bool, String)>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, ok: bool, detail: impl Into<String>) -> &mut Self {
        self.parts.push((ok, detail.into()));
        self
    }

    /// Evidence that does not decide the outcome.
    pub fn note(&mut self, detail: impl Into<String>) -> &mut Self {
        self.parts.push((true, format!("note: {}", detail.into())));
        self
    }

    pub fn passed(&self) -> bool {
        self.parts.iter().all(|(ok, _)| *ok)
    }
}

#[derive(Debug, Default)]
pub struct Suite {
    outcomes: Vec<(u32, bool)>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs one criterion; a panic counts as a failure.
    pub fn run(&mut self, id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Checks)) {
        let mut checks = Checks::new();
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| body(&mut checks)));
        let elapsed = start.elapsed();
        if let Err(p) = outcome {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            checks.check(false, format!("panicked: {msg}"));
        }
        let in_time = elapsed <= budget;
        let pass = checks.passed() && in_time;
        println!(
            "{} criterion {id:>2}: {title} [{:.2} s of {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
        for (ok, detail) in &checks.parts {
            println!("    {} {detail}", if *ok { "ok " } else { "BAD" });
        }
        self.outcomes.push((id, pass));
    }

    pub fn failed(&self) -> Vec<u32> {
        self.outcomes
            .iter()
            .filter(|(_, p)| !p)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Prints the summary line; the exit status is nonzero when any criterion failed.
    pub fn finish(self) -> std::process::ExitCode {
        let failed = self.failed();
        println!(
            "acceptance: {} passed, {} failed{}",
            self.outcomes.len() - failed.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" ({failed:?})")
            }
        );
        if failed.is_empty() {
            std::process::ExitCode::SUCCESS
        } else {
            std::process::ExitCode::FAILURE
        }
    }
}
