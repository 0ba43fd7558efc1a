//! Machine-readable pass/fail reports.
//!
//! Verification routines collect named claims with witnesses instead of
//! panicking, so callers (tests, the command-line tool) can decide how to
//! surface failures. JSON output is deterministic: claims keep insertion
//! order and object keys serialize sorted.

use serde_json::Value;

#[derive(Debug, Clone)]
pub struct Claim {
    /// Stable identifier of the checked statement.
    pub id: String,
    pub ok: bool,
    /// One-line human summary.
    pub detail: String,
    /// Supporting data: offending entries, paths, matrices.
    pub witness: Value,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, id: &str, ok: bool, detail: String, witness: Value) {
        self.claims.push(Claim {
            id: id.to_string(),
            ok,
            detail,
            witness,
        });
    }

    pub fn push_ok(&mut self, id: &str, detail: String) {
        self.push(id, true, detail, Value::Null);
    }

    pub fn ok(&self) -> bool {
        self.claims.iter().all(|c| c.ok)
    }

    pub fn merge(&mut self, other: Report) {
        self.claims.extend(other.claims);
    }

    pub fn to_json(&self) -> Value {
        let claims: Vec<Value> = self
            .claims
            .iter()
            .map(|c| {
                serde_json::json!({
                    "id": c.id,
                    "ok": c.ok,
                    "detail": c.detail,
                    "witness": c.witness,
                })
            })
            .collect();
        serde_json::json!({ "ok": self.ok(), "claims": claims })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregates_and_serializes() {
        let mut r = Report::new();
        r.push_ok("first", "fine".into());
        assert!(r.ok());
        r.push("second", false, "broke".into(), serde_json::json!({"at": 3}));
        assert!(!r.ok());
        let j = r.to_json();
        assert_eq!(j["ok"], serde_json::json!(false));
        assert_eq!(j["claims"][1]["witness"]["at"], serde_json::json!(3));
    }
}
