//! Machine-readable verification reports.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::symbolic::{Chart, RationalPoint, ScalarField};

pub const TOOL: &str = "rpoisson";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
    /// The check could not run on this input, e.g. non-constant rank.
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skip => "skip",
            Verdict::Error => "error",
        }
    }
}

/// A nonzero expression together with a point where it evaluates nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub expr: String,
    pub point: Option<String>,
    pub value: Option<String>,
}

impl Witness {
    /// Builds a witness for `field`, evaluated at the first sample where it
    /// is defined and nonzero, falling back to a small integer grid.
    pub fn locate(label: impl Into<String>, field: &ScalarField, chart: &Chart, samples: &[RationalPoint]) -> Self {
        let hit = samples.iter().cloned().chain(small_grid(chart.dim())).find_map(|p| match field.eval(&p) {
            Ok(v) if !num_traits::Zero::is_zero(&v) => Some((p, v)),
            _ => None,
        });
        Witness {
            label: label.into(),
            expr: field.display(chart).to_string(),
            point: hit.as_ref().map(|(p, _)| p.to_string()),
            value: hit.map(|(_, v)| v.to_string()),
        }
    }
}

/// Integer points with coordinates in `-2..=2`, nearest the origin first.
fn small_grid(n: usize) -> impl Iterator<Item = RationalPoint> {
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        points = points.into_iter().flat_map(|p| (-2..=2).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    points.sort_by_key(|p| p.iter().map(|v| v.abs()).sum::<i64>());
    points.into_iter().map(|p| RationalPoint::from_ints(&p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: &str, verdict: Verdict, detail: impl Into<String>) -> Self {
        Check { name: name.into(), verdict, detail: detail.into(), witness: None }
    }

    pub fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self::new(name, Verdict::Pass, detail)
    }

    pub fn fail(name: &str, detail: impl Into<String>, witness: Option<Witness>) -> Self {
        Check { witness, ..Self::new(name, Verdict::Fail, detail) }
    }

    pub fn skip(name: &str, detail: impl Into<String>) -> Self {
        Self::new(name, Verdict::Skip, detail)
    }

    pub fn error(name: &str, detail: impl Into<String>) -> Self {
        Self::new(name, Verdict::Error, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: String,
    pub input_hash: String,
    pub checks: Vec<Check>,
    /// Command-specific payload such as tables or Betti windows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub timing_ms: u64,
    /// Extra lines for the text rendering.
    #[serde(skip)]
    pub text: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str, input: &str, source: &[u8]) -> Self {
        Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            input: input.into(),
            input_hash: sha256_hex(source),
            checks: Vec::new(),
            data: None,
            timing_ms: 0,
            text: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when nothing failed or errored, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| matches!(c.verdict, Verdict::Fail | Verdict::Error)) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the timing field zeroed, for comparisons.
    pub fn to_json_untimed(&self) -> String {
        Report { timing_ms: 0, ..self.clone() }.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {}", self.tool, self.version, self.command, self.input);
        for line in &self.text {
            let _ = writeln!(out, "{line}");
        }
        for c in &self.checks {
            let _ = write!(out, "{}: {}", c.name, c.verdict.as_str());
            if !c.detail.is_empty() {
                let _ = write!(out, " ({})", c.detail);
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = write!(out, "  witness {} = {}", w.label, w.expr);
                if let (Some(p), Some(v)) = (&w.point, &w.value) {
                    let _ = write!(out, " [= {v} at {p}]");
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_scalar;

    #[test]
    fn witness_falls_back_to_grid() {
        let c = Chart::new(["x", "z"]).unwrap();
        let f = parse_scalar("z+z^3", &c).unwrap();
        let w = Witness::locate("Dpi(dx,dx,dz)", &f, &c, &[RationalPoint::from_ints(&[0, 0])]);
        assert_eq!(w.expr, "z+z^3");
        assert_eq!(w.point.as_deref(), Some("(0,-1)"));
        assert_eq!(w.value.as_deref(), Some("-2"));
        let w = Witness::locate("x", &f, &c, &[RationalPoint::from_ints(&[5, 1])]);
        assert_eq!(w.value.as_deref(), Some("2"));
    }

    #[test]
    fn exit_codes_and_text() {
        let mut r = Report::new("check", "a.json", b"{}");
        r.push(Check::pass("poisson", ""));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::skip("foliation", "not requested"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::error("rank", "rank varies"));
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().contains("poisson: pass\n"));
        assert_eq!(r.input_hash.len(), 64);
    }
}
