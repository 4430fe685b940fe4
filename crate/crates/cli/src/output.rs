//! Line-delimited records for `--output structured`.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Record {
    Pi {
        formula: u32,
        method: &'static str,
        digits: u64,
        terms: u32,
        value: String,
    },
    Row {
        n: u32,
        tau_re: f64,
        tau_im: f64,
        j: String,
        approx_j: String,
        c: i64,
        b: String,
        a: String,
        s2: String,
        approx_s2: String,
        frac: String,
        j_radius: f64,
        a_radius: f64,
    },
    Check {
        suite: &'static str,
        name: String,
        passed: bool,
        residual: Option<f64>,
        tolerance: Option<f64>,
        error: Option<String>,
    },
    Bench {
        digits: u64,
        method: &'static str,
        seconds: f64,
        terms: u32,
    },
    Summary {
        command: &'static str,
        passed: usize,
        failed: usize,
        ok: bool,
    },
}

impl Record {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}
