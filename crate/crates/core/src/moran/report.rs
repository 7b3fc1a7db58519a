//! Versioned plain-text verification report.

use std::fmt;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl From<bool> for Status {
    fn from(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A ",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.status, self.name, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoranReport {
    pub header: Vec<(String, String)>,
    pub lines: Vec<CheckLine>,
    /// `C - 4 eta`, present only when no check failed.
    pub certificate: Option<f64>,
}

impl MoranReport {
    pub fn passed(&self) -> bool {
        self.certificate.is_some() && !self.lines.iter().any(CheckLine::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| l.failed())
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("moran-verify report\nformat: {REPORT_FORMAT}\n");
        for (k, v) in &self.header {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for l in &self.lines {
            out.push_str(&format!("{l}\n"));
        }
        match self.certificate {
            Some(c) => out.push_str(&format!("certificate: P(E(z0), phi, eps) >= C - 4 eta = {c}\n")),
            None => out.push_str("certificate: none\n"),
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}
