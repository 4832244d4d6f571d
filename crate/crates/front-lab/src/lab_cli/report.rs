//! Plain-text + CSV experiment reports: diff-able, no binary verdicts.

use crate::Result;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

/// One measured quantity compared against its tolerance.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub label: String,
    pub measured: f64,
    pub expected: f64,
    /// Allowed |measured - expected|; `inf` marks report-only rows.
    pub tolerance: f64,
    pub pass: bool,
}

impl CriterionResult {
    /// A |measured - expected| ≤ tolerance check.
    pub fn near(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        CriterionResult {
            label: label.into(),
            measured,
            expected,
            tolerance,
            pass: (measured - expected).abs() <= tolerance,
        }
    }

    /// A measured ≤ bound check.
    pub fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CriterionResult {
            label: label.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured <= bound,
        }
    }

    /// A measured ≥ bound check.
    pub fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        CriterionResult {
            label: label.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured >= bound,
        }
    }

    /// A boolean fact.
    pub fn flag(label: impl Into<String>, pass: bool) -> Self {
        CriterionResult {
            label: label.into(),
            measured: f64::from(u8::from(pass)),
            expected: 1.0,
            tolerance: 0.0,
            pass,
        }
    }
}

/// A named CSV table attached to a report.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub name: String,
    pub header: String,
    pub rows: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub criteria: Vec<CriterionResult>,
    pub tables: Vec<CsvTable>,
    pub wall_time: Duration,
    /// Echo of the configuration that produced this report.
    pub config_echo: String,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(name: &str, config_echo: String) -> Self {
        ExperimentReport {
            name: name.to_string(),
            criteria: Vec::new(),
            tables: Vec::new(),
            wall_time: Duration::ZERO,
            config_echo,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# experiment: {} (front-lab {})", self.name, self.version);
        let _ = writeln!(s, "# wall time: {:.2}s", self.wall_time.as_secs_f64());
        let _ = writeln!(s, "# config:");
        for line in self.config_echo.lines() {
            let _ = writeln!(s, "#   {line}");
        }
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "{}: {} | measured={:.6e} expected={:.6e} tol={:.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.label,
                c.measured,
                c.expected,
                c.tolerance,
            );
        }
        let _ = writeln!(
            s,
            "# verdict: {}",
            if self.all_pass() { "ALL PASS" } else { "FAILURES PRESENT" }
        );
        s
    }
}

/// Write `report.txt` plus one CSV file per attached table.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.txt"), report.render_text())?;
    for table in &report.tables {
        let mut s = String::new();
        let _ = writeln!(s, "{}", table.header);
        for row in &table.rows {
            let _ = writeln!(s, "{row}");
        }
        fs::write(dir.join(format!("{}.csv", table.name)), s)?;
    }
    Ok(())
}
