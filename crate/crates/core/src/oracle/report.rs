use std::fmt;

use serde::Serialize;

/// One verification check: what was tested, what was expected, what came
/// out, and which table row (if any) it certifies.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub network: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_row: Option<String>,
}

/// Structured verification report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
    pub skipped: Vec<String>,
}

impl VerificationReport {
    pub fn push(
        &mut self,
        name: impl Into<String>,
        network: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        table_row: Option<String>,
    ) {
        let expected = expected.into();
        let actual = actual.into();
        let pass = expected == actual;
        self.checks.push(CheckOutcome {
            name: name.into(),
            network: network.into(),
            expected,
            actual,
            pass,
            table_row,
        });
    }

    pub fn skip(&mut self, what: impl Into<String>) {
        self.skipped.push(what.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            write!(f, "{mark} {} [{}]", c.name, c.network)?;
            if let Some(row) = &c.table_row {
                write!(f, " ({row})")?;
            }
            if c.pass {
                writeln!(f)?;
            } else {
                writeln!(f, " expected {} actual {}", c.expected, c.actual)?;
            }
        }
        for s in &self.skipped {
            writeln!(f, "skip {s}")?;
        }
        let (passed, total) = (
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
        );
        writeln!(f, "{passed}/{total} checks passed")
    }
}
