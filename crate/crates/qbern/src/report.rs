//! Machine-readable verification reports.
//!
//! Every CLI run emits one [`RunReport`]: the resolved grid (so a report
//! is self-describing and replayable), one row per case in grid order,
//! and a pass/fail summary. Status strings are `exact-zero`,
//! `zero-to-precision` and `FAIL`.

use serde::Serialize;

use crate::measure::Value;

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub check: String,
    pub params: serde_json::Value,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_valuation: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_valuations: Option<Vec<Option<i64>>>,
}

impl CaseReport {
    pub fn new(check: &str, params: serde_json::Value) -> Self {
        CaseReport {
            check: check.to_string(),
            params,
            status: String::new(),
            witness: None,
            certified_valuation: None,
            level_valuations: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != "FAIL"
    }

    /// Grade a difference that must vanish: exact zero, zero to the
    /// stated precision, or a failure carrying the witness.
    pub fn grade_zero(mut self, value: &Value, required_prec: Option<i64>) -> Self {
        match value {
            Value::Symbolic(f) => {
                if f.is_zero() {
                    self.status = "exact-zero".into();
                } else {
                    self.status = "FAIL".into();
                    self.witness = Some(f.to_string());
                }
            }
            Value::Padic(x) => {
                let needed = required_prec.unwrap_or(1);
                if x.is_zero_rep() && x.prec() >= needed {
                    self.status = "zero-to-precision".into();
                    self.certified_valuation = Some(x.prec());
                } else {
                    self.status = "FAIL".into();
                    self.witness = Some(x.to_string());
                    self.certified_valuation = Some(x.valuation_lb());
                }
            }
        }
        self
    }

    pub fn pass_exact(mut self) -> Self {
        self.status = "exact-zero".into();
        self
    }

    pub fn fail(mut self, witness: String) -> Self {
        self.status = "FAIL".into();
        self.witness = Some(witness);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub grid: serde_json::Value,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(command: &str, grid: serde_json::Value, seed: u64, cases: Vec<CaseReport>) -> Self {
        let passed = cases.iter().filter(|c| c.passed()).count();
        let failed = cases.len() - passed;
        RunReport {
            command: command.to_string(),
            grid,
            seed,
            summary: Summary {
                total: cases.len(),
                passed,
                failed,
            },
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV: check, params, status, witness.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,params,status,witness\n");
        for c in &self.cases {
            out.push_str(&format!(
                "{},{:?},{},{}\n",
                c.check,
                c.params.to_string(),
                c.status,
                c.witness.as_deref().unwrap_or("")
            ));
        }
        out
    }
}
