//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use chudnovsky::divpoly::structural_check;
use chudnovsky::mpnum::{log10_f, log2_f, ref_pi};
use chudnovsky::piengine::{decimal_string, digits_ctx, digits_per_term, find_formula, partial_pi, Method};
use chudnovsky::PrecisionCtx;
use chudnovsky_cli::suites::{catalog_checks, run_suite, scaling_probes, Check, Suite};
use rug::Float;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_chudnovsky");

const VAN_CEULEN: &str = "3.14159265358979323846264338327950288";

// (N, 1728J, c, b, a, s2, (1-s2)/6, s2~ to 20 places)
type Row = (u32, i64, i64, i64, i64, &'static str, &'static str, &'static str);

const TABLE: [Row; 11] = [
    (7, -3375, 1, 756, 180, "5/21", "8/63", "0.23809564791495822417"),
    (8, 8000, -1, 896, 320, "5/14", "3/28", "0.35714272614825257875"),
    (11, -32768, 1, 5544, 2304, "32/77", "15/154", "0.41558441699505054414"),
    (12, 54000, -1, 7128, 3240, "5/11", "1/11", "0.45454545415223844453"),
    (16, 287496, -2, 48384, 25344, "11/21", "5/63", "0.52380952380664189452"),
    (19, -884736, 1, 102600, 57600, "32/57", "25/342", "0.56140350877203450431"),
    (27, -12288000, 1, 892584, 564480, "160/253", "31/506", "0.63241106719367593347"),
    (28, 16581375, -1, 1055754, 674730, "85/133", "8/133", "0.63909774436090223748"),
    (43, -884736000, 1, 23600808, 16727040, "640/903", "263/5418", "0.70874861572535991141"),
    (67, -147197952000, 1, 907582536, 695819520, "33440/43617", "10177/261702", "0.76667354471880230185"),
    (
        163,
        -262537412640768000,
        1,
        10996566783048,
        9351571368960,
        "77265280/90856689",
        "13591409/545140134",
        "0.85040827318723886141",
    ),
];

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn run_bin(args: &[&str]) -> (i32, String, Duration) {
    let start = Instant::now();
    let out = Command::new(BIN).args(args).env_remove("CHUDPI_PRECISION").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), start.elapsed())
}

fn all_pass(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed()).map(|c| format!("{}: {}", c.suite, c.name)).collect();
    if failed.is_empty() {
        (true, format!("{} checks", checks.len()))
    } else {
        (false, format!("{} of {} failed: {}", failed.len(), checks.len(), failed.join("; ")))
    }
}

fn table_reproduction() -> Outcome {
    let (code, stdout, elapsed) = run_bin(&["--precision", "256", "--output", "structured", "table"]);
    if code != 0 {
        return (false, format!("exit code {code}"));
    }
    let rows: Vec<Value> = stdout.lines().map(|l| serde_json::from_str(l).expect("json line")).collect();
    if rows.len() != TABLE.len() {
        return (false, format!("{} rows", rows.len()));
    }
    let mut bad = Vec::new();
    let mut worst_j = 0f64;
    let mut worst_a = 0f64;
    for (row, &(n, j, c, b, a, s2, frac, approx)) in rows.iter().zip(TABLE.iter()) {
        let ok = row["n"] == n
            && row["j"].as_str() == Some(j.to_string().as_str())
            && row["c"] == c
            && row["b"].as_str() == Some(b.to_string().as_str())
            && row["a"].as_str() == Some(a.to_string().as_str())
            && row["s2"] == s2
            && row["frac"] == frac
            && row["approx_s2"] == approx;
        let jr = row["j_radius"].as_f64().unwrap_or(f64::INFINITY);
        let ar = row["a_radius"].as_f64().unwrap_or(f64::INFINITY);
        worst_j = worst_j.max(jr);
        worst_a = worst_a.max(ar);
        if !ok || jr >= 0.5 || ar >= 0.01 {
            bad.push(n.to_string());
        }
    }
    let detail = format!("max radii {worst_j:.1e} / {worst_a:.1e}, {:.2} s", elapsed.as_secs_f64());
    if !bad.is_empty() {
        return (false, format!("rows N={} differ; {detail}", bad.join(",")));
    }
    (elapsed <= Duration::from_secs(60), detail)
}

fn pi_computation() -> Outcome {
    let (c163, d163, t163) = run_bin(&["pi", "--formula", "163", "--digits", "1000"]);
    let (c67, d67, _) = run_bin(&["pi", "--formula", "67", "--digits", "1000"]);
    let (d163, d67) = (d163.trim(), d67.trim());
    let reference = decimal_string(&ref_pi(digits_ctx(1000)), 1000);
    let ok = c163 == 0 && c67 == 0 && d163 == reference && d67 == reference && d163.starts_with(VAN_CEULEN);
    let detail = format!("{} chars, {:.3} s", d163.len(), t163.as_secs_f64());
    (ok && t163 <= Duration::from_secs(10), detail)
}

fn convergence_rate() -> Outcome {
    let s = find_formula(163).expect("catalog row");
    let dpt = digits_per_term(&s).to_f64();
    let ctx = PrecisionCtx::new(512);
    let pi = ref_pi(ctx);
    let mut worst = f64::INFINITY;
    let mut ok = (dpt - 14.1816).abs() <= 1e-4;
    for n in 1..=10u32 {
        let approx = partial_pi(&s, n, Method::BinarySplit, ctx);
        let err = Float::with_val(ctx.prec(), &approx - &pi).abs() / &pi;
        let digits = -log10_f(&err);
        worst = worst.min(digits - (14.0 * n as f64 - 2.0));
        ok &= digits >= 14.0 * n as f64 - 2.0;
    }
    (ok, format!("digits per term {dpt:.6}, smallest margin {worst:.2} digits"))
}

fn exact_suites() -> Outcome {
    let ctx = PrecisionCtx::new(256);
    let mut checks = run_suite(Suite::Clausen, ctx);
    checks.extend(run_suite(Suite::Odes, ctx));
    checks.push(Check::exact("divpoly", "P_m structure m <= 16", structural_check(16)));
    checks.extend(catalog_checks(ctx));
    all_pass(&checks)
}

fn residual_suites() -> Outcome {
    let ctx = PrecisionCtx::new(256);
    let mut checks = Vec::new();
    for s in [Suite::Weierstrass, Suite::Divpoly, Suite::AppendixB, Suite::Kummer, Suite::PicardFuchs, Suite::MainTheorem] {
        checks.extend(run_suite(s, ctx));
    }
    let worst = checks.iter().filter_map(|c| c.residual_value()).fold(0f64, f64::max);
    let (ok, detail) = all_pass(&checks);
    (ok, format!("{detail}, largest residual {worst:.2e}"))
}

fn bound_suite() -> Outcome {
    all_pass(&run_suite(Suite::Bounds, PrecisionCtx::new(256)))
}

fn engine_equivalence() -> Outcome {
    all_pass(&run_suite(Suite::EngineEquivalence, PrecisionCtx::new(256)))
}

fn precision_scaling() -> Outcome {
    let levels = [128u32, 256, 512];
    let runs: Vec<Vec<(String, chudnovsky::Result<Float>)>> =
        levels.iter().map(|&b| scaling_probes(PrecisionCtx::with_guard(b, 0))).collect();
    let mut bad = Vec::new();
    let mut excluded = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..runs[0].len() {
        let name = &runs[0][i].0;
        let logs: Result<Vec<f64>, String> = runs
            .iter()
            .map(|r| r[i].1.as_ref().map(log2_f).map_err(|e| e.to_string()))
            .collect();
        let logs = match logs {
            Ok(l) => l,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        // Below the square of the unit roundoff a residual is an exact cancellation, not a rounding measurement.
        if logs.iter().zip(levels).any(|(l, b)| *l < -2.0 * b as f64) {
            excluded += 1;
            continue;
        }
        for k in 0..2 {
            let slope = (logs[k + 1] - logs[k]) / (levels[k + 1] - levels[k]) as f64;
            lo = lo.min(slope);
            hi = hi.max(slope);
            if !(-1.1..=-0.9).contains(&slope) {
                bad.push(format!("{name}: slope {slope:.3} ({}→{} bits)", levels[k], levels[k + 1]));
            }
        }
    }
    let detail = format!("{} probes, {excluded} exact, slopes in [{lo:.3}, {hi:.3}]", runs[0].len());
    if bad.is_empty() {
        (true, detail)
    } else {
        (false, format!("{detail}; {}", bad.join("; ")))
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("table reproduction", table_reproduction),
        ("pi computation", pi_computation),
        ("convergence rate", convergence_rate),
        ("exact identity suites", exact_suites),
        ("numeric residual suites", residual_suites),
        ("bound suite", bound_suite),
        ("engine equivalence and determinism", engine_equivalence),
        ("precision scaling", precision_scaling),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| (false, "panicked".to_string()));
        failures += usize::from(!ok);
        println!("criterion {}: {}  {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
