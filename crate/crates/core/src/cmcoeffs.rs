//! Class-number-one CM points and certified recognition of `j_N`, `b_N`,
//! `a_N = s2(τ_N) b_N` and `(1 - s2)/6`.

use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mpnum::{abs_c, log2_f, principal_sqrt, rel_dist, PrecisionCtx};
use crate::qseries::{approx_j, approx_s2, e2_star, modular_j1728_certified, modular_s2_certified, QPoint};
use crate::weierstrass::{division_points_ctau, Elliptic};

/// `C τ² + B τ + A = 0`, `B² - 4AC = -N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CMPoint {
    pub n: u32,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl CMPoint {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn ac(&self) -> i64 {
        self.a * self.c
    }

    /// `i√N/2` for `N ≡ 0 (4)`, `(1 + i√N)/2` otherwise.
    pub fn tau(&self, ctx: PrecisionCtx) -> Complex {
        let im = Float::with_val(ctx.prec(), self.n).sqrt() / 2u32;
        let re = if self.n.is_multiple_of(4) { 0.0 } else { 0.5 };
        Complex::with_val(ctx.prec(), (re, im))
    }

    pub fn qpoint(&self, ctx: PrecisionCtx) -> Result<QPoint> {
        QPoint::new(self.tau(ctx), ctx)
    }

    pub fn relation_residual(&self, ctx: PrecisionCtx) -> Float {
        let t = self.tau(ctx);
        let t2 = Complex::with_val(ctx.prec(), t.square_ref());
        let v = t2 * self.c + Complex::with_val(ctx.prec(), &t * self.b) + self.a;
        abs_c(&v)
    }
}

const TABLE: [(u32, i64, i64, i64); 13] = [
    (3, 1, -1, 1),
    (4, 1, 0, 1),
    (7, 2, -1, 1),
    (8, 2, 0, 1),
    (11, 3, -1, 1),
    (12, 3, 0, 1),
    (16, 4, 0, 1),
    (19, 5, -1, 1),
    (27, 7, -1, 1),
    (28, 7, 0, 1),
    (43, 11, -1, 1),
    (67, 17, -1, 1),
    (163, 41, -1, 1),
];

pub fn cm_table() -> Vec<CMPoint> {
    let ctx = PrecisionCtx::new(64);
    TABLE
        .iter()
        .map(|&(n, a, b, c)| {
            let p = CMPoint { n, a, b, c };
            assert_eq!(p.discriminant(), -(n as i64));
            assert!(p.relation_residual(ctx) < 1e-15, "quadratic relation fails for N={n}");
            p
        })
        .collect()
}

pub fn cm_point(n: u32) -> Result<CMPoint> {
    cm_table().into_iter().find(|p| p.n == n).ok_or_else(|| Error::InvalidCm(format!("N={n} is not a class-number-one index")))
}

fn recognizable(n: u32) -> Result<CMPoint> {
    let p = cm_point(n)?;
    if n < 7 {
        return Err(Error::InvalidCm(format!("N={n} has |1728J| <= 1728 and yields no series")));
    }
    Ok(p)
}

/// An integer recovered from a certified approximation.
#[derive(Clone, Debug)]
pub struct Recognized {
    pub value: Integer,
    pub approx: Complex,
    /// Certified bound on `|approx - exact|`.
    pub radius: Float,
}

fn round_certified(x: &Complex, radius: &Float, what: &str) -> Result<Recognized> {
    let f = Float::with_val(x.prec().0, x.real().round_ref());
    let n = f.to_integer().ok_or_else(|| Error::AmbiguousRounding(format!("{what}: not finite")))?;
    let off = abs_c(&Complex::with_val(x.prec().0, x - &n));
    let half = Float::with_val(64, 0.5);
    if Float::with_val(64, &off + radius) >= half || *radius >= half {
        return Err(Error::AmbiguousRounding(format!(
            "{what}: distance {:.3e} plus radius {:.3e} reaches 1/2",
            off.to_f64(),
            radius.to_f64()
        )));
    }
    Ok(Recognized { value: n, approx: x.clone(), radius: radius.clone() })
}

pub fn recognize_j_certified(n: u32, ctx: PrecisionCtx) -> Result<Recognized> {
    let p = recognizable(n)?.qpoint(ctx)?;
    let cert = modular_j1728_certified(&p, ctx)?;
    round_certified(&cert.value, &cert.radius, &format!("j_{n}"))
}

/// `j_N = 1728 J(τ_N)`.
pub fn recognize_j(n: u32, ctx: PrecisionCtx) -> Result<Integer> {
    Ok(recognize_j_certified(n, ctx)?.value)
}

/// First of `1, -1, -2, 2, -3, 3, ...` making `c N (1728 - j)` a perfect square.
pub fn choose_c(n: u32, j: &Integer) -> Result<i64> {
    let base = Integer::from(1728 - j) * n;
    let mut order = vec![1i64, -1];
    for m in 2..=256i64 {
        order.push(-m);
        order.push(m);
    }
    for c in order {
        let v = Integer::from(&base * c);
        if v > 0 && v.is_perfect_square() {
            return Ok(c);
        }
    }
    Err(Error::NoSquareFound(n))
}

/// `b_N = √(c N (1728 - j)) · (AC)²`.
pub fn compute_b(n: u32, j: &Integer, c: i64, ac: i64) -> Result<Integer> {
    let v = Integer::from(1728 - j) * n * c;
    if v < 0 || !v.is_perfect_square() {
        return Err(Error::NotASquare);
    }
    Ok(v.sqrt() * Integer::from(ac).square())
}

#[derive(Clone, Debug)]
pub struct CoeffRow {
    pub n: u32,
    pub tau: (f64, f64),
    pub j: Integer,
    pub c: i64,
    pub b: Integer,
    pub a: Integer,
    pub s2: Rational,
    pub frac: Rational,
    pub j_radius: Float,
    pub a_radius: Float,
    /// `500|q|`, the coarse bound on `|1728J - 1728J~|`.
    pub coarse_j_radius: f64,
    /// `222000|q|³|b|`, the coarse bound on `|a - a~|`.
    pub coarse_a_radius: f64,
    pub approx_j: f64,
    pub approx_a: f64,
}

impl CoeffRow {
    /// The coarse truncated-expansion approximations land within their bounds,
    /// and those bounds are tight enough to pin down `j` and `a`.
    pub fn coarse_bounds_hold(&self) -> bool {
        let j = self.j.to_f64();
        let a = self.a.to_f64();
        let j_ok = (self.approx_j - j).abs() < self.coarse_j_radius * (1.0 + 1e-9) + 1e-9 * j.abs();
        let a_ok = (self.approx_a - a).abs() < self.coarse_a_radius * (1.0 + 1e-9) + 1e-12 * a.abs();
        j_ok && a_ok && self.coarse_j_radius < 0.2 && self.coarse_a_radius <= 0.01
    }
}

pub fn recognize_s2(n: u32, ctx: PrecisionCtx) -> Result<CoeffRow> {
    let cm = recognizable(n)?;
    let p = cm.qpoint(ctx)?;
    let jr = recognize_j_certified(n, ctx)?;
    let c = choose_c(n, &jr.value)?;
    let b = compute_b(n, &jr.value, c, cm.ac())?;
    let s2 = modular_s2_certified(&p, ctx)?;
    let a_approx = Complex::with_val(ctx.prec(), &s2.value * &b);
    let a_radius = Float::with_val(64, &s2.radius * Float::with_val(64, &b).abs());
    let ar = round_certified(&a_approx, &a_radius, &format!("a_{n}"))?;
    let s2q = Rational::from((ar.value.clone(), b.clone()));
    let frac = (1 - s2q.clone()) / 6u32;
    let aq = p.abs_q_bound.to_f64();
    let approx_a = Complex::with_val(ctx.prec(), approx_s2(&p, ctx) * &b).real().to_f64();
    let approx_j = Complex::with_val(ctx.prec(), approx_j(&p, ctx) * 1728u32).real().to_f64();
    Ok(CoeffRow {
        n,
        tau: (p.tau.real().to_f64(), p.tau.imag().to_f64()),
        j: jr.value,
        c,
        b: b.clone(),
        a: ar.value,
        s2: s2q,
        frac,
        j_radius: jr.radius,
        a_radius: ar.radius,
        coarse_j_radius: 500.0 * aq,
        coarse_a_radius: 222000.0 * aq.powi(3) * b.to_f64().abs(),
        approx_j,
        approx_a,
    })
}

/// Rows for every `N` that produces a series.
pub fn coefficient_table(ctx: PrecisionCtx) -> Result<Vec<CoeffRow>> {
    cm_table().iter().filter(|p| p.n >= 7).map(|p| recognize_s2(p.n, ctx)).collect()
}

/// The two relations on `L_τ` with `ω1 = 1`, `√D = i√N`:
/// `√D E2* π²/3 = Σ_{v ∈ DIV(Cτ)} ℘(v) / (Cτ)` and
/// `(Aη1 - Cτη2)/τ = -√D (π²/3) E2*` with both quasi-periods measured from ζ.
pub fn appendix_b_check(n: u32, ctx: PrecisionCtx) -> Result<Float> {
    let cm = recognizable(n)?;
    let prec = ctx.prec();
    let p = cm.qpoint(ctx)?;
    let e = Elliptic::new(&p, ctx)?;
    let sqrt_d = principal_sqrt(&ctx.complex(-(n as i64)), ctx);
    let pi2 = Float::with_val(prec, ctx.pi().square_ref());
    let lhs = Complex::with_val(prec, &sqrt_d * e2_star(&p, ctx)?) * &pi2 / 3u32;

    let pts = division_points_ctau(cm.a, cm.b, cm.c, &p)?;
    let mut sum = ctx.complex(0);
    for v in &pts.points {
        sum += e.wp(v)?;
    }
    let ctau = Complex::with_val(prec, &p.tau * cm.c);
    let trace = Complex::with_val(prec, &sum / &ctau);
    let r1 = rel_dist(&lhs, &trace);

    let z = ctx.complex((0.21, 0.13));
    let eta1 = e.measure_eta1(&z)?;
    let eta2 = e.measure_eta2()?;
    let kappa_def = (Complex::with_val(prec, &eta1 * cm.a) - Complex::with_val(prec, &ctau * &eta2)) / &p.tau;
    let kappa_lemma = -lhs;
    let r2 = rel_dist(&kappa_def, &kappa_lemma);
    Ok(r1.max(&r2))
}

/// `log2` of the trace and κ residual, for precision-scaling checks.
pub fn appendix_b_log2(n: u32, ctx: PrecisionCtx) -> Result<f64> {
    Ok(log2_f(&appendix_b_check(n, ctx)?))
}
