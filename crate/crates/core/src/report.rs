//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub status: Status,
    pub cases_total: u64,
    pub cases_failed: u64,
    pub first_failure: Option<Value>,
    pub data: Value,
}

impl Report {
    pub fn new(check: &str, params: Value) -> Self {
        Report {
            check: check.to_string(),
            params,
            status: Status::Pass,
            cases_total: 0,
            cases_failed: 0,
            first_failure: None,
            data: json!({}),
        }
    }

    /// Record one case; the first failing detail is kept.
    pub fn case(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.cases_total += 1;
        if !ok {
            self.cases_failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
            self.status = Status::Fail;
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), v);
        }
    }

    pub fn inconclusive(&mut self, why: &str) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
        self.set("inconclusive", json!(why));
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Fold a sub-report in as a group of cases.
    pub fn absorb(&mut self, other: Report) {
        self.cases_total += other.cases_total;
        self.cases_failed += other.cases_failed;
        if self.first_failure.is_none() {
            if let Some(f) = &other.first_failure {
                self.first_failure = Some(json!({ "check": other.check, "detail": f }));
            }
        }
        match other.status {
            Status::Fail => self.status = Status::Fail,
            Status::Inconclusive if self.status == Status::Pass => self.status = Status::Inconclusive,
            _ => {}
        }
        let key = other.check.clone();
        let sub = json!({ "params": other.params, "status": other.status, "data": other.data });
        if let Value::Object(m) = &mut self.data {
            match m.get_mut(&key) {
                Some(Value::Array(a)) => a.push(sub),
                Some(prev) => {
                    let p = prev.take();
                    *prev = json!([p, sub]);
                }
                None => {
                    m.insert(key, sub);
                }
            }
        }
    }
}
