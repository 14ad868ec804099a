//! Check records and their text and JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::verdict::{Verdict, Witness};

/// Anchor identifiers a record may carry, one per family of identities.
pub const ANCHORS: &[&str] = &[
    "algebra-axioms",
    "module-axioms",
    "universal-dimension",
    "calculus-ideal",
    "calculus-d-squared",
    "calculus-leibniz",
    "kappa0",
    "right-leibniz",
    "connection-extension",
    "nabla-hat",
    "derivation-law",
    "left-leibniz-d-nabla",
    "kappa1-diagram",
    "kappa1-bimodule",
    "induced-first-order",
    "sigma-existence",
    "sigma-left-leibniz",
    "sigma-universal-agreement",
    "curvature-right-omega",
    "curvature-left-a",
    "omega-hat",
    "omega-hat-derivation",
    "nabla-hat-square",
    "j-low-degrees",
    "j-nabla-closed",
    "j-omega-hat-closed",
    "quotient-coherence",
    "quotient-curvature",
    "commutator-span",
    "induced-calculus",
    "d-nabla-squared",
    "kappa-diagram",
    "kappa-multiplicative",
    "sigma-full",
    "sigma-u-identities",
    "preceq",
    "degeneracy",
    "compatibility",
    "nu-hat",
    "associated-connection",
    "tensor-connection",
    "route-agreement",
    "comparison",
];

/// Identities must hold; observations record a property that may go either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Identity,
    Observation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Absent,
    Unavailable,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Absent => "ABSENT",
            Status::Unavailable => "UNAVAILABLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub paper_anchor: String,
    pub kind: Kind,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Record {
    pub fn new(check_id: impl Into<String>, anchor: &str, kind: Kind, status: Status) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor}");
        Record { check_id: check_id.into(), paper_anchor: anchor.into(), kind, status, witness: None, dims: None, data: None }
    }

    pub fn verdict(check_id: impl Into<String>, anchor: &str, kind: Kind, v: &Verdict) -> Self {
        let mut r = Record::new(check_id, anchor, kind, if v.is_pass() { Status::Pass } else { Status::Fail });
        r.witness = v.witness().cloned();
        r
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_dims(mut self, dims: Vec<usize>) -> Self {
        self.dims = Some(dims);
        self
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn is_identity_failure(&self) -> bool {
        self.kind == Kind::Identity && self.status == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub absent: usize,
    pub unavailable: usize,
    pub identity_failures: usize,
    pub verdict: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: impl Into<String>, records: Vec<Record>) -> Self {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        let identity_failures = records.iter().filter(|r| r.is_identity_failure()).count();
        let summary = Summary {
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            absent: count(Status::Absent),
            unavailable: count(Status::Unavailable),
            identity_failures,
            verdict: if identity_failures == 0 { Status::Pass } else { Status::Fail },
        };
        Report { command: command.into(), records, summary }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.identity_failures == 0 {
            0
        } else {
            1
        }
    }

    pub fn record(&self, check_id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.check_id == check_id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let kind = match r.kind {
                Kind::Identity => "",
                Kind::Observation => " (observation)",
            };
            let _ = write!(out, "[{}] {}{kind}", r.status.label(), r.check_id);
            if let Some(d) = &r.dims {
                let _ = write!(out, " dims={d:?}");
            }
            if let Some(w) = &r.witness {
                let _ = write!(out, " witness: {w}");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{}: {} pass, {} fail ({} identity), {} absent, {} unavailable",
            self.command, s.pass, s.fail, s.identity_failures, s.absent, s.unavailable
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            "check",
            vec![
                Record::new("a", "right-leibniz", Kind::Identity, Status::Pass),
                Record::new("b", "curvature-left-a", Kind::Observation, Status::Fail)
                    .with_witness(Witness::with_residual("(e1, e2)", vec![crate::q(1, 2)])),
                Record::new("c", "sigma-existence", Kind::Observation, Status::Absent),
                Record::new("d", "nu-hat", Kind::Observation, Status::Unavailable).with_dims(vec![1, 2]),
            ],
        )
    }

    #[test]
    fn observations_do_not_fail_the_run() {
        let r = sample();
        assert_eq!(r.exit_code(), 0);
        assert_eq!((r.summary.pass, r.summary.fail, r.summary.absent, r.summary.unavailable), (1, 1, 1, 1));
        let mut records = r.records.clone();
        records.push(Record::verdict("e", "kappa0", Kind::Identity, &Verdict::Fail(Witness::new("x"))));
        let failing = Report::new("check", records);
        assert_eq!(failing.exit_code(), 1);
        assert_eq!(failing.summary.verdict, Status::Fail);
    }

    #[test]
    fn json_roundtrip_and_text() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let text = r.to_text();
        assert!(text.contains("[FAIL] b (observation) witness: (e1, e2) -> [1/2]"));
        assert!(text.contains("[UNAVAILABLE] d (observation) dims=[1, 2]"));
        assert!(r.to_json().contains("\"paper_anchor\": \"right-leibniz\""));
    }

    #[test]
    fn anchors_are_unique() {
        let mut sorted = ANCHORS.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ANCHORS.len());
    }
}
