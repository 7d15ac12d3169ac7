//! Machine-readable check reports.

use serde::Serialize;
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One check outcome. `elapsed_ms` is reported on stdout but excluded from
/// the JSON payload so that identical inputs produce byte-identical files.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub target: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing)]
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn pass(check: &str, target: impl Into<String>, elapsed_ms: u64) -> Self {
        CheckReport {
            check: check.to_string(),
            target: target.into(),
            status: Status::Pass,
            counterexample: None,
            elapsed_ms,
        }
    }

    pub fn fail(
        check: &str,
        target: impl Into<String>,
        counterexample: serde_json::Value,
        elapsed_ms: u64,
    ) -> Self {
        CheckReport {
            check: check.to_string(),
            target: target.into(),
            status: Status::Fail,
            counterexample: Some(counterexample),
            elapsed_ms,
        }
    }

    pub fn error(check: &str, target: impl Into<String>, message: String) -> Self {
        CheckReport {
            check: check.to_string(),
            target: target.into(),
            status: Status::Error,
            counterexample: Some(serde_json::json!({ "error": message })),
            elapsed_ms: 0,
        }
    }
}

/// Sorts by `(check, target)` for order-stable aggregation.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| (a.check.as_str(), a.target.as_str()).cmp(&(b.check.as_str(), b.target.as_str())));
}

/// Writes the JSON array with stable field order; deterministic for
/// identical inputs and seed.
pub fn emit_report(reports: &[CheckReport], path: &std::path::Path) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    let body = serde_json::to_string_pretty(reports)?;
    file.write_all(body.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Human one-liner per report.
pub fn print_summary(reports: &[CheckReport]) {
    for r in reports {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        println!("[{status}] {} :: {} ({} ms)", r.check, r.target, r.elapsed_ms);
        if let (Status::Fail | Status::Error, Some(cex)) = (r.status, &r.counterexample) {
            println!("        {cex}");
        }
    }
    let failed = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .count();
    println!(
        "{} checks, {} passed, {} failed",
        reports.len(),
        reports.len() - failed,
        failed
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_empty_array() {
        let dir = std::env::temp_dir().join("twistfr_report_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.json");
        emit_report(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "[]\n");
    }

    #[test]
    fn passing_check_has_no_counterexample_field() {
        let r = CheckReport::pass("cybe", "sl2", 3);
        let v = serde_json::to_value(&r).unwrap();
        assert!(v.get("counterexample").is_none());
        assert!(v.get("elapsed_ms").is_none());
        assert_eq!(v["status"], "pass");
    }

    #[test]
    fn failing_check_carries_payload() {
        let r = CheckReport::fail(
            "jacobi",
            "P=1 3 2 4",
            serde_json::json!({"triple": ["g1_11","g1_12","g1_21"], "residual": "g1_11^2"}),
            5,
        );
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["counterexample"]["residual"], "g1_11^2");
    }
}
