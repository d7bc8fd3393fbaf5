//! The one-shot verification suite behind `loctab verify`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use loctab::arith::SieveTable;

use crate::checks::{self, Findings};
use crate::{HarnessError, RunConfig, EXIT_ASSERTION, EXIT_CAPACITY, EXIT_OK};

/// How many failing instances a report lists per suite.
pub const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: Status,
    pub findings: Findings,
    pub error: Option<HarnessError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: String,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn total(&self) -> usize {
        self.suites.len()
    }

    /// Skipped suites count as passed only because the config allowed it.
    pub fn passed(&self) -> usize {
        self.suites.iter().filter(|s| matches!(s.status, Status::Pass | Status::Skipped)).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.suites.iter().any(|s| s.status == Status::Error) {
            EXIT_CAPACITY
        } else if self.suites.iter().any(|s| s.status == Status::Fail) {
            EXIT_ASSERTION
        } else {
            EXIT_OK
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "config {}", self.config);
        for s in &self.suites {
            let _ = writeln!(
                out,
                "[{}] {} checked={} failed={}",
                s.status.tag(),
                s.name,
                s.findings.checked,
                s.findings.failures.len()
            );
            if let Some(e) = &s.error {
                let _ = writeln!(out, "    {e}");
            }
            for f in s.findings.failures.iter().take(MAX_LISTED) {
                let _ = writeln!(out, "    {f}");
            }
            if s.findings.failures.len() > MAX_LISTED {
                let _ = writeln!(out, "    ... {} more", s.findings.failures.len() - MAX_LISTED);
            }
            for n in &s.findings.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let _ = writeln!(out, "SUITES total={} passed={}", self.total(), self.passed());
        out
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    sieve: OnceLock<Result<SieveTable, HarnessError>>,
}

impl Ctx<'_> {
    fn sieve(&self) -> Result<&SieveTable, HarnessError> {
        self.sieve
            .get_or_init(|| SieveTable::with_memory_cap(self.cfg.sieve_limit, self.cfg.memory_cap).map_err(Into::into))
            .as_ref()
            .map_err(Clone::clone)
    }
}

type Suite = (&'static str, fn(&Ctx) -> Result<Findings, HarnessError>);

fn suites() -> Vec<Suite> {
    vec![
        ("arith.factorization", |c| Ok(checks::factorization(c.sieve()?, 20_000)?)),
        ("arith.tau_multiplicative", |c| Ok(checks::tau_multiplicative(c.sieve()?, 500, 3000, c.cfg.mc_seed)?)),
        ("arith.tau_squarefree", |c| Ok(checks::tau_squarefree(c.sieve()?, 5000, 4)?)),
        ("arith.lambda_greedy", |c| Ok(checks::lambda_greedy(c.cfg.sieve_limit, &[1, 2, 3])?)),
        ("arith.lambda_drift", |c| Ok(checks::lambda_drift(c.cfg.sieve_limit, &[1, 2, 3])?)),
        ("localized.tau_oracle", |c| Ok(checks::tau_oracle(c.sieve()?, &[1, 2, 3], 10, 1000, c.cfg.mc_seed)?)),
        ("localized.h_count_oracle", |c| Ok(checks::h_count_oracle(c.sieve()?, &[1, 2], 20, 2000, c.cfg.mc_seed)?)),
        ("localized.window_monotone", |c| Ok(checks::window_monotone(c.sieve()?, 20, 600, c.cfg.mc_seed)?)),
        ("localized.window_permutation", |c| Ok(checks::window_permutation(c.sieve()?, 10, 1000, c.cfg.mc_seed)?)),
        ("localized.sandwich", |c| Ok(checks::sandwich(c.sieve()?, &[(1, 32), (2, 8)])?)),
        ("boxes.lemma31a", |c| Ok(checks::lemma31_a(c.sieve()?, 1000, &[1, 2, 3])?)),
        ("boxes.lemma31b", |c| Ok(checks::lemma31_b(c.sieve()?, 100, 3000, &[1, 2, 3], c.cfg.mc_seed)?)),
        ("boxes.lemma31c", |c| Ok(checks::lemma31_c(c.sieve()?, 1000, 4, &[1, 2, 3])?)),
        ("boxes.union_vs_merge", |c| Ok(checks::union_vs_merge(c.sieve()?, 1000)?)),
        ("boxes.union_vs_sampling", |c| {
            Ok(checks::union_vs_sampling(c.sieve()?, 10, 3000, c.cfg.mc_samples / 10, c.cfg.mc_seed)?)
        }),
        ("boxes.holder", |c| Ok(checks::holder(c.sieve()?, 50, 300, c.cfg.mc_seed)?)),
        ("table.backings", |_| Ok(checks::table_backings(&[(1, 256), (2, 32)], 1 << 12)?)),
        ("table.oracle", |_| Ok(checks::table_oracle(&[(1, 64), (2, 16)])?)),
        ("farey.identity", |c| Ok(checks::farey_identity(&[(2, 15), (3, 6)], c.cfg.enumeration_cap)?)),
        ("farey.inequality", |c| Ok(checks::farey_inequality(&[2, 3], 10, c.cfg.enumeration_cap)?)),
        ("tuples.mb_identity", |c| Ok(checks::mb_identity(&checks::tuple_ranges(4, 2), c.cfg.enumeration_cap)?)),
        ("tuples.lemma36", |c| {
            Ok(checks::lemma36(&checks::tuple_ranges(4, 2), &[1.25, 1.5, 2.0], c.cfg.enumeration_cap)?)
        }),
        ("tuples.lemma36_p3", |c| Ok(checks::lemma36_probe(&checks::tuple_ranges(4, 2), 3.0, c.cfg.enumeration_cap)?)),
        ("tuples.lemma37", |_| Ok(checks::lemma37(10)?)),
        ("tuples.permutation", |c| Ok(checks::tuple_permutation(3, &[1.25, 2.0], c.cfg.enumeration_cap)?)),
        ("tuples.remark31", |c| Ok(checks::remark31(500, c.cfg.mc_seed)?)),
        ("order.steck", |c| Ok(checks::steck(100, 6, c.cfg.mc_seed)?)),
        ("order.q_monotone", |_| Ok(checks::q_monotone(6)?)),
        ("order.mc_vs_exact", |c| Ok(checks::mc_vs_exact(6, c.cfg.mc_samples / 10, c.cfg.mc_seed)?)),
        ("order.lemma51", |_| Ok(checks::lemma51(8)?)),
        ("order.lemma310", |c| {
            let cfg = c.cfg;
            Ok(checks::lemma310(cfg.lemma310_bmax, cfg.mc_samples, cfg.mc_seed, &[cfg.k], cfg.yb_n, cfg.yb_floor)?)
        }),
        ("order.lemma44", |c| {
            let cfg = c.cfg;
            Ok(checks::lemma44(cfg.k, cfg.lemma44_vmax, cfg.mc_samples / 10, cfg.mc_seed, cfg.lemma44_ceiling)?)
        }),
        ("order.lemma53", |c| {
            let cfg = c.cfg;
            Ok(checks::lemma53(cfg.k, 4, 2, cfg.mc_samples / 10, cfg.mc_seed, cfg.lemma53_ceiling)?)
        }),
    ]
}

/// Names of all suites, in run order.
pub fn suite_names() -> Vec<&'static str> {
    suites().into_iter().map(|(n, _)| n).collect()
}

/// Runs every suite (or those whose name starts with `filter`). A config
/// error stops nothing: each suite reports its own status.
pub fn run_verify(cfg: &RunConfig, filter: Option<&str>) -> VerifyReport {
    let ctx = Ctx { cfg, sieve: OnceLock::new() };
    let mut results = Vec::new();
    for (name, run) in suites() {
        if filter.is_some_and(|f| !name.starts_with(f)) {
            continue;
        }
        let (status, findings, error) = match run(&ctx) {
            Ok(f) if f.ok() => (Status::Pass, f, None),
            Ok(f) => (Status::Fail, f, None),
            Err(e @ HarnessError::Capacity(_)) if cfg.allow_skips => (Status::Skipped, Findings::default(), Some(e)),
            Err(e) => (Status::Error, Findings::default(), Some(e)),
        };
        results.push(SuiteResult { name, status, findings, error });
    }
    VerifyReport { config: cfg.describe(), suites: results }
}
