//! Wall-clock timings of the π engine over a digit ladder.

use std::time::Instant;

use chudnovsky::piengine::{compute_pi, terms_needed, FormulaSpec, Method};

use crate::output::Record;

pub const LADDER: [u64; 3] = [1_000, 10_000, 100_000];

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub digits: u64,
    pub method: Method,
    pub seconds: f64,
    pub terms: u32,
    pub value: String,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::BinarySplit => "bs",
        Method::Naive => "naive",
    }
}

pub fn run(spec: &FormulaSpec, max_digits: u64) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for digits in LADDER.into_iter().filter(|&d| d <= max_digits) {
        for method in [Method::BinarySplit, Method::Naive] {
            let start = Instant::now();
            let value = compute_pi(spec, digits, method);
            let seconds = start.elapsed().as_secs_f64();
            rows.push(BenchRow { digits, method, seconds, terms: terms_needed(spec, digits), value });
        }
    }
    rows
}

pub fn record(r: &BenchRow) -> Record {
    Record::Bench { digits: r.digits, method: method_name(r.method), seconds: r.seconds, terms: r.terms }
}
