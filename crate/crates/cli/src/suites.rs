//! Verification suites. Each check reports a residual (or an exact verdict)
//! against a fixed tolerance.

use chudnovsky::cmcoeffs::{appendix_b_check, cm_table, coefficient_table};
use chudnovsky::divpoly::{baker_identity_check_with, bridge_residual, division_value_sum_with, f_recursion_with, structural_check};
use chudnovsky::hypergeom::{
    chud_coeff, chud_coeff_pochhammer, clausen_check, kummer_check, kummer_params, ode_recursion_check_2f1, ode_recursion_check_3f2,
    picard_fuchs_residual, HG2F1, HG3F2,
};
use chudnovsky::mpnum::{abs_c, log2_f, rel_dist};
use chudnovsky::piengine::{bs_exact, compute_pi, formula_catalog, main_theorem_check, sum_binary_split, sum_exact, sum_naive, Method};
use chudnovsky::qseries::{bound_suite, divisor_bound_holds, QPoint};
use chudnovsky::weierstrass::Elliptic;
use chudnovsky::{PrecisionCtx, Rat};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

pub const SEED: u64 = 0x5eed_2026;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    Bounds,
    Clausen,
    Odes,
    Kummer,
    PicardFuchs,
    Weierstrass,
    Divpoly,
    #[value(name = "appendixB")]
    AppendixB,
    MainTheorem,
    EngineEquivalence,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Bounds,
        Suite::Clausen,
        Suite::Odes,
        Suite::Kummer,
        Suite::PicardFuchs,
        Suite::Weierstrass,
        Suite::Divpoly,
        Suite::AppendixB,
        Suite::MainTheorem,
        Suite::EngineEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Clausen => "clausen",
            Suite::Odes => "odes",
            Suite::Kummer => "kummer",
            Suite::PicardFuchs => "picard-fuchs",
            Suite::Weierstrass => "weierstrass",
            Suite::Divpoly => "divpoly",
            Suite::AppendixB => "appendixB",
            Suite::MainTheorem => "main-theorem",
            Suite::EngineEquivalence => "engine-equivalence",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Exact comparison, no tolerance.
    Exact(bool),
    /// `log2` of the residual against `log2` of the tolerance.
    Residual { log2: f64, log2_tol: f64 },
    Error(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub verdict: Verdict,
}

impl Check {
    pub fn exact(suite: &'static str, name: impl Into<String>, ok: bool) -> Self {
        Self { suite, name: name.into(), verdict: Verdict::Exact(ok) }
    }

    pub fn residual(suite: &'static str, name: impl Into<String>, r: chudnovsky::Result<Float>, tol: f64) -> Self {
        let verdict = match r {
            Ok(r) => Verdict::Residual { log2: log2_f(&r), log2_tol: tol.log2() },
            Err(e) => Verdict::Error(e.to_string()),
        };
        Self { suite, name: name.into(), verdict }
    }

    pub fn passed(&self) -> bool {
        match &self.verdict {
            Verdict::Exact(ok) => *ok,
            Verdict::Residual { log2, log2_tol } => log2 < log2_tol,
            Verdict::Error(_) => false,
        }
    }

    pub fn residual_value(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Residual { log2, .. } => Some(log2.exp2()),
            _ => None,
        }
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self.verdict {
            Verdict::Residual { log2_tol, .. } => Some(log2_tol.exp2()),
            _ => None,
        }
    }
}

/// Default tolerance for numeric identities at 256 bits.
pub const TOL: f64 = 1e-25;

fn qp(re: f64, im: f64, ctx: PrecisionCtx) -> QPoint {
    QPoint::from_f64(re, im, ctx).expect("sample point in the upper half plane")
}

fn tau_sqrt(n: u32, half_real: bool, ctx: PrecisionCtx) -> QPoint {
    let im = Float::with_val(ctx.prec(), n).sqrt() / 2u32;
    let re = if half_real { 0.5 } else { 0.0 };
    QPoint::new(ctx.complex((re, im)), ctx).expect("CM point")
}

fn labelled_lattices(ctx: PrecisionCtx) -> Vec<(&'static str, QPoint)> {
    vec![("i√2", tau_sqrt(8, false, ctx)), ("0.5+1.5i", qp(0.5, 1.5, ctx))]
}

fn random_z(rng: &mut ChaCha8Rng, ctx: PrecisionCtx) -> Complex {
    loop {
        let (x, y): (f64, f64) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.45..0.45));
        if x.abs() > 0.05 || y.abs() > 0.05 {
            return ctx.complex((x, y));
        }
    }
}

fn fmt_z(z: &Complex) -> String {
    format!("{:.4}{:+.4}i", z.real().to_f64(), z.imag().to_f64())
}

pub fn run_suite(suite: Suite, ctx: PrecisionCtx) -> Vec<Check> {
    match suite {
        Suite::Bounds => bounds(ctx),
        Suite::Clausen => clausen(),
        Suite::Odes => odes(),
        Suite::Kummer => kummer(ctx),
        Suite::PicardFuchs => picard_fuchs(ctx),
        Suite::Weierstrass => weierstrass(ctx),
        Suite::Divpoly => divpoly(ctx),
        Suite::AppendixB => trace_kappa(ctx),
        Suite::MainTheorem => main_theorem(ctx),
        Suite::EngineEquivalence => engine(ctx),
    }
}

/// Catalog rows against freshly recognized coefficients, plus `b² = cN(1728-j)(AC)⁴`.
pub fn catalog_checks(ctx: PrecisionCtx) -> Vec<Check> {
    const S: &str = "catalog";
    let rows = match coefficient_table(ctx) {
        Ok(r) => r,
        Err(e) => return vec![Check { suite: S, name: "recognition".into(), verdict: Verdict::Error(e.to_string()) }],
    };
    let cm = cm_table();
    let mut out = Vec::new();
    for spec in formula_catalog() {
        let Some(row) = rows.iter().find(|r| r.n == spec.n) else {
            out.push(Check::exact(S, format!("N={} present", spec.n), false));
            continue;
        };
        out.push(Check::exact(S, format!("N={} j and frac", spec.n), row.j == spec.j && row.frac == spec.frac));
        let ac = cm.iter().find(|p| p.n == spec.n).map(|p| p.ac()).unwrap_or(0);
        let lhs = Integer::from(row.b.square_ref());
        let rhs = Integer::from(1728 - &row.j) * spec.n * row.c * Integer::from(ac).pow(4);
        out.push(Check::exact(S, format!("N={} b^2 = cN(1728-j)(AC)^4", spec.n), lhs == rhs));
    }
    out
}

fn bounds(ctx: PrecisionCtx) -> Vec<Check> {
    const S: &str = "bounds";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut samples: Vec<QPoint> = (0..100).map(|_| qp(rng.gen_range(-0.5..0.5), rng.gen_range(1.2501..3.0), ctx)).collect();
    for p in cm_table().iter().filter(|p| p.n >= 7) {
        samples.push(p.qpoint(ctx).expect("CM point"));
    }
    let mut out = vec![Check::exact(S, "sigma_k(n) <= n^(k+1), n <= 10^4", divisor_bound_holds(10_000))];
    match bound_suite(&samples, ctx) {
        Ok(report) => {
            let names: Vec<&str> = report.rows[0].checks.iter().map(|c| c.name).collect();
            for name in names {
                let ok = report.rows.iter().all(|r| r.checks.iter().filter(|c| c.name == name).all(|c| c.holds));
                out.push(Check::exact(S, format!("{name} on {} points", report.rows.len()), ok));
            }
        }
        Err(e) => out.push(Check { suite: S, name: "bound suite".into(), verdict: Verdict::Error(e.to_string()) }),
    }
    out
}

fn q(a: i64, b: i64) -> Rat {
    Rat::from((a, b))
}

fn random_rationals(rng: &mut ChaCha8Rng) -> (Rat, Rat) {
    (q(rng.gen_range(1..12), rng.gen_range(1..13)), q(rng.gen_range(1..12), rng.gen_range(1..13)))
}

fn clausen() -> Vec<Check> {
    const S: &str = "clausen";
    let mut out = Vec::new();
    let ok = clausen_check(&q(1, 12), &q(5, 12), 64).unwrap_or(false);
    out.push(Check::exact(S, "(1/12, 5/12) to n=64", ok));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10 {
        let (a, b) = random_rationals(&mut rng);
        let ok = clausen_check(&a, &b, 64).unwrap_or(false);
        out.push(Check::exact(S, format!("({a}, {b}) to n=64"), ok));
    }
    let forms = (0..=200).all(|n| chud_coeff(n) == chud_coeff_pochhammer(n));
    out.push(Check::exact(S, "factorial = Pochhammer coefficients to n=200", forms));
    out
}

fn odes() -> Vec<Check> {
    const S: &str = "odes";
    let mut out = Vec::new();
    let f21 = [kummer_params(), HG2F1::new(q(1, 1), q(1, 1), q(2, 1)).unwrap(), HG2F1::new(q(1, 12), q(5, 12), q(1, 1)).unwrap()];
    for p in &f21 {
        let name = format!("2F1({}, {}; {}) to n=64", p.a, p.b, p.c);
        out.push(Check::exact(S, name, ode_recursion_check_2f1(p, 64)));
    }
    let f32 = [
        HG3F2::new(q(1, 6), q(5, 6), q(1, 2), q(1, 1), q(1, 1)).unwrap(),
        HG3F2::new(q(1, 3), q(1, 4), q(2, 7), q(3, 5), q(5, 3)).unwrap(),
    ];
    for p in &f32 {
        let name = format!("3F2({}, {}, {}; {}, {}) to n=64", p.alpha, p.beta, p.gamma, p.delta, p.eps);
        out.push(Check::exact(S, name, ode_recursion_check_3f2(p, 64)));
    }
    out
}

fn kummer(ctx: PrecisionCtx) -> Vec<Check> {
    [tau_sqrt(8, false, ctx), qp(0.0, 1.3, ctx), qp(0.5, 1.5, ctx)]
        .iter()
        .map(|p| Check::residual("kummer", format!("tau={}", fmt_z(&p.tau)), kummer_check(p, ctx), TOL))
        .collect()
}

fn picard_fuchs(ctx: PrecisionCtx) -> Vec<Check> {
    [ctx.complex(10), ctx.complex(-5), ctx.complex((3, -4))]
        .iter()
        .map(|j| Check::residual("picard-fuchs", format!("J={}", fmt_z(j)), picard_fuchs_residual(j, ctx), 1e-30))
        .collect()
}

fn main_theorem(ctx: PrecisionCtx) -> Vec<Check> {
    [tau_sqrt(8, false, ctx), qp(0.0, 1.3, ctx), qp(0.25, 1.4, ctx)]
        .iter()
        .map(|p| Check::residual("main-theorem", format!("tau={}", fmt_z(&p.tau)), main_theorem_check(p, ctx), TOL))
        .collect()
}

fn trace_kappa(ctx: PrecisionCtx) -> Vec<Check> {
    [7u32, 8, 11, 19]
        .iter()
        .map(|&n| Check::residual("appendixB", format!("N={n} trace and kappa"), appendix_b_check(n, ctx), TOL))
        .collect()
}

/// Residual-type probes shared by the weierstrass suite and the precision-scaling criterion.
pub fn weierstrass_residuals(ctx: PrecisionCtx) -> Vec<(String, chudnovsky::Result<Float>, f64)> {
    let prec = ctx.prec();
    let mut out: Vec<(String, chudnovsky::Result<Float>, f64)> = Vec::new();
    for (label, p) in [("i√2", tau_sqrt(8, false, ctx)), ("3i", qp(0.0, 3.0, ctx)), ("(1+i√7)/2", tau_sqrt(7, true, ctx))] {
        match Elliptic::new(&p, ctx) {
            Ok(e) => {
                out.push((format!("Legendre tau={label}"), e.legendre_residual(), 1e-30));
                let eta2 = e.measure_eta2().map(|m| rel_dist(&m, &e.inv.eta2));
                out.push((format!("measured eta2 tau={label}"), eta2, TOL));
            }
            Err(err) => out.push((format!("lattice tau={label}"), Err(err), TOL)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (label, p) in labelled_lattices(ctx) {
        let e = match Elliptic::new(&p, ctx) {
            Ok(e) => e,
            Err(err) => {
                out.push((format!("lattice tau={label}"), Err(err), TOL));
                continue;
            }
        };
        out.push((format!("half-period symmetric functions tau={label}"), e.half_period_residual(), TOL));
        let halves = [ctx.complex(0.5), Complex::with_val(prec, &p.tau / 2u32), Complex::with_val(prec, &p.tau / 2u32) + 0.5f64];
        for h in &halves {
            out.push((format!("wp'({}) = 0 tau={label}", fmt_z(h)), e.wp_prime(h).map(|v| abs_c(&v)), TOL));
        }
        for _ in 0..3 {
            let z = random_z(&mut rng, ctx);
            let w = random_z(&mut rng, ctx);
            let zs = fmt_z(&z);
            out.push((format!("wp DE z={zs} tau={label}"), e.de_residual(&z), TOL));
            let neg = Complex::with_val(prec, -&z);
            let even = e.wp(&z).and_then(|a| e.wp(&neg).map(|b| rel_dist(&a, &b)));
            out.push((format!("wp even z={zs} tau={label}"), even, TOL));
            out.push((format!("wp periodic z={zs} tau={label}"), e.wp_periodicity_check(&z), TOL));
            out.push((format!("duplication and wp'' z={zs} tau={label}"), e.duplication_check(&z), TOL));
            let odd = e.sigma(&z).and_then(|a| e.sigma(&neg).map(|b| rel_dist(&a, &(-b))));
            out.push((format!("sigma odd z={zs} tau={label}"), odd, TOL));
            out.push((format!("sigma translation z={zs} tau={label}"), e.sigma_translation_check(&z), TOL));
            out.push((format!("sigma addition u={zs} v={} tau={label}", fmt_z(&w)), e.sigma_addition_check(&z, &w), TOL));
            let u2 = random_z(&mut rng, ctx);
            let u3 = random_z(&mut rng, ctx);
            out.push((format!("three-term sigma u={zs} tau={label}"), e.sigma_three_term_check(&z, &w, &u2, &u3), TOL));
            out.push((format!("three-term sigma u=0 tau={label}"), e.sigma_three_term_check(&ctx.complex(0), &w, &u2, &u3), TOL));
        }
    }
    out
}

fn weierstrass(ctx: PrecisionCtx) -> Vec<Check> {
    let mut out: Vec<Check> =
        weierstrass_residuals(ctx).into_iter().map(|(n, r, t)| Check::residual("weierstrass", n, r, t)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    if let Ok(e) = Elliptic::new(&tau_sqrt(8, false, ctx), ctx) {
        let (u, v) = (random_z(&mut rng, ctx), random_z(&mut rng, ctx));
        let r = e.sigma_three_term_check(&ctx.complex(0.3), &u, &v, &v);
        out.push(Check::residual("weierstrass", "three-term sigma u2=u3", r, TOL));
    }
    out
}

/// Residual-type probes of the division-polynomial layer.
pub fn divpoly_residuals(ctx: PrecisionCtx) -> Vec<(String, chudnovsky::Result<Float>, f64)> {
    let mut out: Vec<(String, chudnovsky::Result<Float>, f64)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for (label, p) in labelled_lattices(ctx) {
        let e = match Elliptic::new(&p, ctx) {
            Ok(e) => e,
            Err(err) => {
                out.push((format!("lattice tau={label}"), Err(err), TOL));
                continue;
            }
        };
        for _ in 0..5 {
            let z = random_z(&mut rng, ctx);
            for m in 1..=6 {
                out.push((format!("F_{m} bridge z={} tau={label}", fmt_z(&z)), bridge_residual(m, &z, &e), TOL));
            }
        }
        let x = ctx.complex((rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        for m in 2..=6 {
            out.push((format!("Baker m={m} x={} tau={label}", fmt_z(&x)), baker_identity_check_with(m, &x, &e, 6), TOL));
        }
        for m in 2..=8 {
            out.push((format!("division value sum m={m} tau={label}"), division_value_sum_with(m, &e), TOL));
        }
        let z = random_z(&mut rng, ctx);
        for n in 2..=4 {
            out.push((format!("F recursions n={n} z={} tau={label}", fmt_z(&z)), f_recursion_with(n, &z, &e), TOL));
        }
    }
    out
}

fn divpoly(ctx: PrecisionCtx) -> Vec<Check> {
    let mut out = vec![Check::exact("divpoly", "P_m structure m <= 16", structural_check(16))];
    out.extend(divpoly_residuals(ctx).into_iter().map(|(n, r, t)| Check::residual("divpoly", n, r, t)));
    out
}

fn engine(ctx: PrecisionCtx) -> Vec<Check> {
    const S: &str = "engine-equivalence";
    let mut out = Vec::new();
    let ulp = Float::with_val(64, Float::i_exp(1, -(ctx.prec() as i32)));
    for s in formula_catalog() {
        let mut exact_ok = true;
        let mut float_ok = true;
        for n in 1..=32u32 {
            let exact = sum_exact(&s, n);
            exact_ok &= bs_exact(&s, &sum_binary_split(&s, n)) == exact;
            let e = Float::with_val(ctx.prec(), &exact);
            let d = Float::with_val(ctx.prec(), &sum_naive(&s, n, ctx) - &e).abs();
            float_ok &= d <= Float::with_val(64, e.abs_ref()) * &ulp * 4u32;
        }
        out.push(Check::exact(S, format!("N={} binary splitting = exact, n <= 32", s.n), exact_ok));
        out.push(Check::exact(S, format!("N={} naive = exact to 4 ulp, n <= 32", s.n), float_ok));
    }
    for s in formula_catalog().iter().filter(|s| [8, 163].contains(&s.n)) {
        let a = compute_pi(s, 300, Method::BinarySplit);
        let b = compute_pi(s, 300, Method::BinarySplit);
        let c = compute_pi(s, 300, Method::Naive);
        out.push(Check::exact(S, format!("N={} repeated runs identical", s.n), a == b));
        out.push(Check::exact(S, format!("N={} bs and naive digits identical", s.n), a == c));
    }
    out
}

/// Every residual-type probe, used by the precision-scaling criterion.
pub fn scaling_probes(ctx: PrecisionCtx) -> Vec<(String, chudnovsky::Result<Float>)> {
    let mut out: Vec<(String, chudnovsky::Result<Float>)> = Vec::new();
    let tagged = |suite: &str, v: Vec<(String, chudnovsky::Result<Float>, f64)>| {
        v.into_iter().map(|(n, r, _)| (format!("{suite}: {n}"), r)).collect::<Vec<_>>()
    };
    out.extend(tagged("weierstrass", weierstrass_residuals(ctx)));
    out.extend(tagged("divpoly", divpoly_residuals(ctx)));
    for p in [tau_sqrt(8, false, ctx), qp(0.0, 1.3, ctx), qp(0.5, 1.5, ctx)] {
        out.push((format!("kummer: tau={}", fmt_z(&p.tau)), kummer_check(&p, ctx)));
    }
    for j in [ctx.complex(10), ctx.complex(-5), ctx.complex((3, -4))] {
        out.push((format!("picard-fuchs: J={}", fmt_z(&j)), picard_fuchs_residual(&j, ctx)));
    }
    for p in [tau_sqrt(8, false, ctx), qp(0.0, 1.3, ctx), qp(0.25, 1.4, ctx)] {
        out.push((format!("main-theorem: tau={}", fmt_z(&p.tau)), main_theorem_check(&p, ctx)));
    }
    for n in [7u32, 8, 11, 19] {
        out.push((format!("appendixB: N={n}"), appendix_b_check(n, ctx)));
    }
    out
}
