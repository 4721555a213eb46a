//! JSON reports: one entry per executed check plus an environment block.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::checks::{resolve, run_checks, CheckResult, Context};
use crate::error::Result;
use crate::io::write_atomic;
use crate::tolerances::Tolerances;

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub versions: Versions,
    pub seed: u64,
    pub carrier: Value,
    pub tau_grid: Option<f64>,
    pub tolerances: Tolerances,
    pub timings: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub starprod: &'static str,
    pub report_schema: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub pass: bool,
    pub summary: Summary,
    pub environment: Environment,
    pub checks: Vec<CheckResult>,
}

/// Options for a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub parallel: bool,
    pub timings: bool,
}

impl Report {
    pub fn new(ctx: &Context, seed: u64, tol: &Tolerances, timings: bool, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Self {
            pass: passed == checks.len(),
            summary: Summary { total: checks.len(), passed, failed: checks.len() - passed },
            environment: Environment {
                versions: Versions { starprod: env!("CARGO_PKG_VERSION"), report_schema: 1 },
                seed,
                carrier: ctx.describe(),
                tau_grid: ctx.tau_grid(),
                tolerances: tol.clone(),
                timings,
            },
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_json())
    }
}

/// Resolves check names against the context and runs them.
pub fn run_named(ctx: &Context, names: &[String], tol: &Tolerances, seed: u64, opts: RunOptions) -> Result<Report> {
    let checks = resolve(ctx, names)?;
    let results = run_checks(&checks, ctx, tol, seed, opts.parallel, opts.timings);
    Ok(Report::new(ctx, seed, tol, opts.timings, results))
}
