//! Run reports: named checks, CSV rows, summary statistics.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::Result;

/// Identifier of the generator behind every seeded draw.
pub const RNG_ALGORITHM: &str = "ChaCha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Passes when `measured <= threshold`.
    AtMost,
    /// Passes when `measured >= threshold`.
    AtLeast,
    /// A boolean outcome; `measured` is 1 or 0.
    Holds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::AtMost => format!("{tag} {}: {:.3e} <= {:.3e}", self.name, self.measured, self.threshold),
            Relation::AtLeast => format!("{tag} {}: {:.3e} >= {:.3e}", self.name, self.measured, self.threshold),
            Relation::Holds => format!("{tag} {}", self.name),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub name: String,
    pub config: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, f64)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Printed, never written to disk.
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn with_header(mut self, cols: &[&str]) -> Self {
        self.header = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn stat(&mut self, name: impl Into<String>, value: f64) {
        self.summary.push((name.into(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn push(&mut self, name: impl Into<String>, measured: f64, threshold: f64, relation: Relation) -> bool {
        let passed = match relation {
            Relation::AtMost => measured <= threshold,
            Relation::AtLeast => measured >= threshold,
            Relation::Holds => measured == 1.0,
        };
        self.checks.push(Check {
            name: name.into(),
            measured,
            threshold,
            relation,
            passed,
        });
        passed
    }

    pub fn check_at_most(&mut self, name: impl Into<String>, measured: f64, threshold: f64) -> bool {
        // NaN never passes.
        self.push(name, measured, threshold, Relation::AtMost)
    }

    pub fn check_at_least(&mut self, name: impl Into<String>, measured: f64, threshold: f64) -> bool {
        self.push(name, measured, threshold, Relation::AtLeast)
    }

    pub fn check(&mut self, name: impl Into<String>, holds: bool) -> bool {
        self.push(name, if holds { 1.0 } else { 0.0 }, 1.0, Relation::Holds)
    }

    /// Records a failed check carrying the error text, so suites can keep going.
    pub fn check_error(&mut self, name: impl Into<String>, err: &crate::Error) {
        let name = name.into();
        self.note(format!("{name}: {err}"));
        self.check(name, false);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: RunReport) {
        let prefix = other.name.clone();
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        for (k, v) in other.summary {
            self.summary.push((format!("{prefix}/{k}"), v));
        }
        for n in other.notes {
            self.notes.push(format!("{prefix}: {n}"));
        }
        self.wall_time += other.wall_time;
    }

    pub fn check_lines(&self) -> Vec<String> {
        self.checks.iter().map(Check::line).collect()
    }

    /// Plain-text summary. Deterministic: no timings, no paths.
    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "report = {}", self.name);
        let _ = writeln!(s, "rng = {RNG_ALGORITHM}");
        for (k, v) in &self.config {
            let _ = writeln!(s, "config.{k} = {v}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "stat.{k} = {v:e}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "check.{} = {} measured={:e} threshold={:e}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.measured,
                c.threshold
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note = {n}");
        }
        let _ = writeln!(s, "result = {}", if self.passed() { "pass" } else { "fail" });
        s
    }

    pub fn csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.header.is_empty() {
            w.write_record(&self.header).map_err(csv_err)?;
        }
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))
    }

    /// Writes `<dir>/<name>.csv` (when there are rows) and `<dir>/<name>.summary.txt`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let stem = self.name.replace('/', "_");
        if !self.rows.is_empty() {
            let p = dir.join(format!("{stem}.csv"));
            fs::write(&p, self.csv_bytes()?)?;
            written.push(p);
        }
        let p = dir.join(format!("{stem}.summary.txt"));
        fs::write(&p, self.summary_text())?;
        written.push(p);
        Ok(written)
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_output() {
        let mut r = RunReport::new("demo").with_header(&["a", "re", "im"]);
        r.row(["1/2", "0.5", "-0"]);
        r.row(["x,y", "1", "2"]);
        assert!(r.check_at_most("dev", 1e-13, 1e-12));
        assert!(!r.check_at_most("nan", f64::NAN, 1.0));
        assert!(r.check("flag", true));
        assert!(!r.passed());
        let csv = String::from_utf8(r.csv_bytes().unwrap()).unwrap();
        assert_eq!(csv, "a,re,im\n1/2,0.5,-0\n\"x,y\",1,2\n");
        r.wall_time = Duration::from_secs(5);
        let text = r.summary_text();
        assert!(text.contains("rng = ChaCha8"));
        assert!(text.contains("check.dev = pass"));
        assert!(text.ends_with("result = fail\n"));
        assert_eq!(r.check_lines()[1], "FAIL nan: NaN <= 1.000e0");
    }
}
