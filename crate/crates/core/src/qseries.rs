//! Divisor sums, Eisenstein q-series with analytic tail bounds, and the
//! modular functions built from them.
//!
//! Every truncated series carries a tail certificate from the remainder
//! estimate `|R_k^(l)| <= l^k |q|^l / (1 - (1+1/l)^k |q|)`, which relies on
//! `sigma_{k-1}(n) <= n^k`.

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::mpnum::{abs_c, exp_c, log2_f, PrecisionCtx};

/// A point of the upper half plane with its nome `q = e^{2πiτ}`.
#[derive(Clone, Debug)]
pub struct QPoint {
    pub tau: Complex,
    pub q: Complex,
    pub abs_q_bound: Float,
    pub ctx: PrecisionCtx,
}

impl QPoint {
    pub fn new(tau: Complex, ctx: PrecisionCtx) -> Result<Self> {
        if *tau.imag() <= 0 {
            return Err(Error::Domain("Im(tau) must be positive"));
        }
        let tau = Complex::with_val(ctx.prec(), tau);
        let q = exp_c(&Complex::with_val(ctx.prec(), ctx.two_pi_i() * &tau), ctx);
        let mut abs_q_bound = abs_c(&q);
        abs_q_bound *= Float::with_val(ctx.prec(), 1) + Float::with_val(64, Float::i_exp(1, 8 - ctx.prec() as i32));
        Ok(Self { tau, q, abs_q_bound, ctx })
    }

    pub fn from_f64(re: f64, im: f64, ctx: PrecisionCtx) -> Result<Self> {
        Self::new(ctx.complex((re, im)), ctx)
    }

    pub fn im_tau(&self) -> Float {
        self.tau.imag().clone()
    }

    /// The same τ evaluated at another precision.
    pub fn with_ctx(&self, ctx: PrecisionCtx) -> Self {
        Self::new(self.tau.clone(), ctx).expect("valid point")
    }

    /// τ + 1, which has the same q up to rounding.
    pub fn shifted(&self, n: i32) -> Self {
        Self::new(Complex::with_val(self.ctx.prec(), &self.tau + n), self.ctx).expect("valid point")
    }
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn divisor_sigma(k: u32, n: u64) -> Integer {
    assert!(n >= 1, "divisor_sigma needs n >= 1");
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `σ_k(n)` for `0 <= n < len` by sieving; entry 0 is 0.
pub fn sigma_sieve(k: u32, len: usize) -> Vec<u128> {
    assert!(len <= 1_000_000, "sieve limited to n < 10^6");
    let mut out = vec![0u128; len];
    for d in 1..len {
        let dk = (d as u128).pow(k);
        let mut m = d;
        while m < len {
            out[m] += dk;
            m += d;
        }
    }
    out
}

/// `σ_k(n) <= n^{k+1}` for k in {1, 3, 5} and all `n <= n_max`.
pub fn divisor_bound_holds(n_max: usize) -> bool {
    [1u32, 3, 5].iter().all(|&k| {
        let s = sigma_sieve(k, n_max + 1);
        (1..=n_max).all(|n| s[n] <= (n as u128).pow(k + 1))
    })
}

fn eis_coeff(k: u32) -> i32 {
    match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => panic!("weight {k} not supported"),
    }
}

#[derive(Clone, Debug)]
pub struct EisValue {
    pub k: u32,
    pub value: Complex,
    pub truncation_order: usize,
    pub tail_bound: Float,
}

/// `|c_k| l^k |q|^l / (1 - (1+1/l)^k |q|)`, or `None` when the ratio is not below 1.
pub fn eisenstein_tail_bound(k: u32, l: usize, abs_q: &Float) -> Option<Float> {
    const P: u32 = 96;
    if l == 0 {
        return None;
    }
    let lf = Float::with_val(P, l);
    let ratio = Float::with_val(P, Float::with_val(P, 1 + Float::with_val(P, 1 / &lf)).pow(k) * abs_q);
    if ratio >= 1 {
        return None;
    }
    let num = Float::with_val(P, lf.pow(k)) * Float::with_val(P, abs_q.pow(l as u32)) * eis_coeff(k).unsigned_abs();
    let den = Float::with_val(P, 1 - ratio);
    // Slack of 2^-60 absorbs the rounding of this low-precision evaluation.
    let slack = Float::with_val(P, 1) + Float::with_val(P, Float::i_exp(1, -60));
    Some(num / den * slack)
}

/// `Σ_{from <= n < to} σ_{k-1}(n) q^n` by Horner's rule.
fn sigma_series(k: u32, q: &Complex, from: usize, to: usize, ctx: PrecisionCtx) -> Complex {
    let sig = sigma_sieve(k - 1, to.max(1));
    let mut acc = ctx.complex(0);
    for n in (from.max(1)..to).rev() {
        acc += Integer::from(sig[n]);
        acc *= q;
    }
    if from > 1 {
        let qf = Complex::with_val(ctx.prec(), q.pow((from - 1) as u32));
        acc *= qf;
    }
    acc
}

/// `E_k = 1 + c_k Σ_{n<l} σ_{k-1}(n) q^n` with its tail certificate.
pub fn eisenstein(k: u32, p: &QPoint, l: usize, ctx: PrecisionCtx) -> Result<EisValue> {
    let tail_bound = eisenstein_tail_bound(k, l, &p.abs_q_bound).ok_or(Error::BoundUnavailable { k, l })?;
    let q = Complex::with_val(ctx.prec(), &p.q);
    let s = sigma_series(k, &q, 1, l, ctx);
    let value = Complex::with_val(ctx.prec(), s * eis_coeff(k)) + 1;
    Ok(EisValue { k, value, truncation_order: l, tail_bound })
}

/// Smallest truncation order whose certificate is below `2^{-bits-16} |E_k|`.
pub fn eisenstein_auto(k: u32, p: &QPoint, ctx: PrecisionCtx) -> Result<EisValue> {
    let target_log2 = -(ctx.bits as f64) - 16.0;
    let lq = log2_f(&p.abs_q_bound);
    if lq >= 0.0 {
        return Err(Error::BoundUnavailable { k, l: 0 });
    }
    // Start from the estimate l*log2|q| + k*log2(l) + 10 < target - 2.
    let mut l = 2usize;
    while (l as f64) * lq + (k as f64) * (l as f64).log2() + 10.0 > target_log2 - 2.0 {
        l += 1;
    }
    loop {
        match eisenstein(k, p, l, ctx) {
            Ok(v) => {
                let bound_ok = log2_f(&v.tail_bound) < target_log2 + log2_f(&abs_c(&v.value));
                if bound_ok {
                    return Ok(v);
                }
            }
            Err(Error::BoundUnavailable { .. }) if l < 1 << 20 => {}
            Err(e) => return Err(e),
        }
        l += 1;
    }
}

/// `Σ_{n >= from} σ_{k-1}(n) q^n`, summed to the certificate tolerance.
pub fn eisenstein_remainder(k: u32, p: &QPoint, from: usize, ctx: PrecisionCtx) -> Result<Complex> {
    let l = eisenstein_auto(k, p, ctx)?.truncation_order.max(from + 1);
    Ok(sigma_series(k, &p.q, from, l, ctx))
}

#[derive(Clone, Debug)]
pub struct Eisenstein {
    pub e2: EisValue,
    pub e4: EisValue,
    pub e6: EisValue,
}

pub fn eisenstein_all(p: &QPoint, ctx: PrecisionCtx) -> Result<Eisenstein> {
    Ok(Eisenstein {
        e2: eisenstein_auto(2, p, ctx)?,
        e4: eisenstein_auto(4, p, ctx)?,
        e6: eisenstein_auto(6, p, ctx)?,
    })
}

/// A value together with a certified radius.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: Complex,
    pub radius: Float,
}

fn rounding_radius(x: &Complex, ctx: PrecisionCtx) -> Float {
    abs_c(x) * ctx.eps()
}

fn low(x: &Complex) -> Float {
    Float::with_val(64, x.abs_ref())
}

/// `1728 J(τ)` with a first-order certificate from the E4, E6 tails.
pub fn modular_j1728_certified(p: &QPoint, ctx: PrecisionCtx) -> Result<Certified> {
    let e = eisenstein_all(p, ctx)?;
    let (e4, e6) = (&e.e4.value, &e.e6.value);
    let e4_2 = Complex::with_val(ctx.prec(), e4.square_ref());
    let e4_3 = Complex::with_val(ctx.prec(), &e4_2 * e4);
    let e6_2 = Complex::with_val(ctx.prec(), e6.square_ref());
    let d = Complex::with_val(ctx.prec(), &e4_3 - &e6_2);
    let (t4, t6) = (&e.e4.tail_bound, &e.e6.tail_bound);
    let d_pert = Float::with_val(64, low(&e4_2) * t4) * 3u32 + Float::with_val(64, low(e6) * t6) * 2u32;
    let scale = low(&e4_3);
    if low(&d) <= d_pert.clone() * 8u32 || low(&d) <= scale * ctx.eps() {
        return Err(Error::SingularDenominator);
    }
    let j = Complex::with_val(ctx.prec(), &e4_3 / &d) * 1728u32;
    // |dJ/dE4| = 3|E4|^2|E6|^2/|D|^2, |dJ/dE6| = 2|E4|^3|E6|/|D|^2.
    let d2 = Float::with_val(64, low(&d).square());
    let dj4 = Float::with_val(64, low(&e4_2) * low(&e6_2)) * 3u32 / &d2;
    let dj6 = Float::with_val(64, low(&e4_3) * low(e6)) * 2u32 / &d2;
    let radius = (dj4 * t4 + dj6 * t6) * 1728u32 * 2u32 + rounding_radius(&j, ctx);
    Ok(Certified { value: j, radius })
}

/// Klein's `J = E4^3 / (E4^3 - E6^2)`.
pub fn modular_j(p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Ok(modular_j1728_certified(p, ctx)?.value / 1728u32)
}

/// `3 / (π Im τ)`.
pub fn z_term(p: &QPoint, ctx: PrecisionCtx) -> Float {
    let d = Float::with_val(ctx.prec(), ctx.pi() * p.tau.imag());
    Float::with_val(ctx.prec(), 3 / d)
}

/// `E2* = E2 - 3/(π Im τ)`.
pub fn e2_star(p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    let e2 = eisenstein_auto(2, p, ctx)?;
    Ok(e2.value - z_term(p, ctx))
}

/// `s2 = (E4/E6) E2*` with a first-order certificate.
pub fn modular_s2_certified(p: &QPoint, ctx: PrecisionCtx) -> Result<Certified> {
    let e = eisenstein_all(p, ctx)?;
    let (e2, e4, e6) = (&e.e2.value, &e.e4.value, &e.e6.value);
    let (t2, t4, t6) = (&e.e2.tail_bound, &e.e4.tail_bound, &e.e6.tail_bound);
    let a6 = low(e6);
    if a6 <= Float::with_val(64, t6 * 2u32) || a6 <= ctx.eps() {
        return Err(Error::SingularDenominator);
    }
    let star = Complex::with_val(ctx.prec(), e2 - z_term(p, ctx));
    let s2 = Complex::with_val(ctx.prec(), e4 * &star) / e6;
    let a_star = low(&star);
    let a4 = low(e4);
    let ds4 = Float::with_val(64, &a_star / &a6);
    let ds6 = Float::with_val(64, &a4 * &a_star) / Float::with_val(64, a6.square_ref());
    let ds2 = Float::with_val(64, &a4 / &a6);
    let radius = (ds4 * t4 + ds6 * t6 + ds2 * t2) * 2u32 + rounding_radius(&s2, ctx);
    Ok(Certified { value: s2, radius })
}

pub fn modular_s2(p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Ok(modular_s2_certified(p, ctx)?.value)
}

/// `J~ = (1 + 240(q + 9q^2))^3 / (1728 q (1 - q - q^2)^24)`.
pub fn approx_j(p: &QPoint, ctx: PrecisionCtx) -> Complex {
    let prec = ctx.prec();
    let q = &p.q;
    let q2 = Complex::with_val(prec, q.square_ref());
    let x: Complex = (Complex::with_val(prec, &q2 * 9u32) + q) * 240u32 + 1;
    let y: Complex = 1 - Complex::with_val(prec, q + &q2);
    let num = Complex::with_val(prec, x.pow(3u32));
    let den = Complex::with_val(prec, y.pow(24u32)) * q * 1728u32;
    num / den
}

/// `s2~ = (1 + 240(q + 9q^2)) / (1 - 504(q + 33q^2)) · (1 - 24(q + 3q^2) - 3/(π Im τ))`.
pub fn approx_s2(p: &QPoint, ctx: PrecisionCtx) -> Complex {
    let prec = ctx.prec();
    let q = &p.q;
    let q2 = Complex::with_val(prec, q.square_ref());
    let x: Complex = (Complex::with_val(prec, &q2 * 9u32) + q) * 240u32 + 1;
    let y = 1 - (Complex::with_val(prec, &q2 * 33u32) + q) * 504u32;
    let z = 1 - (Complex::with_val(prec, &q2 * 3u32) + q) * 24u32 - z_term(p, ctx);
    x / y * z
}

/// `η^24 = (E4^3 - E6^2) / 1728`.
pub fn eta24(p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    let e4 = eisenstein_auto(4, p, ctx)?.value;
    let e6 = eisenstein_auto(6, p, ctx)?.value;
    let d = Complex::with_val(ctx.prec(), e4.pow(3u32)) - Complex::with_val(ctx.prec(), e6.square_ref());
    Ok(d / 1728u32)
}

/// Discriminant `Δ = (2π)^12 η^24` of the lattice `Z + Zτ`.
pub fn delta(p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    let two_pi = Float::with_val(ctx.prec(), ctx.pi() * 2u32);
    Ok(eta24(p, ctx)? * two_pi.pow(12u32))
}

#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct BoundRow {
    pub tau: (f64, f64),
    pub checks: Vec<BoundCheck>,
}

#[derive(Clone, Debug, Default)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.checks.iter().all(|c| c.holds))
    }

    pub fn failures(&self) -> Vec<(&BoundRow, &BoundCheck)> {
        self.rows
            .iter()
            .flat_map(|r| r.checks.iter().filter(|c| !c.holds).map(move |c| (r, c)))
            .collect()
    }
}

/// `lhs < rhs` with a margin of `2^-(bits-32)` relative to the larger side.
fn strictly_less(name: &'static str, lhs: &Float, rhs: &Float, ctx: PrecisionCtx) -> BoundCheck {
    let scale = Float::with_val(64, lhs.abs_ref()).max(&Float::with_val(64, rhs.abs_ref()));
    let cushion = scale * Float::with_val(64, Float::i_exp(1, 32 - ctx.bits as i32));
    let gap = Float::with_val(ctx.prec(), rhs - lhs);
    BoundCheck { name, lhs: lhs.to_f64(), rhs: rhs.to_f64(), holds: gap > cushion }
}

/// Checks the explicit estimates valid for `Im τ > 1.25` at each sample.
pub fn bound_suite(samples: &[QPoint], ctx: PrecisionCtx) -> Result<BoundReport> {
    let mut report = BoundReport::default();
    let prec = ctx.prec();
    let f = |v: f64| Float::with_val(prec, v);
    for p in samples {
        if *p.tau.imag() <= 1.25 {
            return Err(Error::Domain("bound suite needs Im(tau) > 1.25"));
        }
        let p = p.with_ctx(ctx);
        let aq = abs_c(&p.q);
        let aq3 = Float::with_val(prec, (&aq).pow(3u32));
        let j1728 = modular_j1728_certified(&p, ctx)?.value;
        let j = Complex::with_val(prec, &j1728 / 1728u32);
        let jt = approx_j(&p, ctx) * 1728u32;
        let s2 = modular_s2(&p, ctx)?;
        let s2t = approx_s2(&p, ctx);
        let e6 = eisenstein_auto(6, &p, ctx)?.value;
        let jq = abs_c(&Complex::with_val(prec, &j1728 * &p.q));
        let archimedes = Float::with_val(prec, f(-7.852).exp());
        let mut checks = vec![
            strictly_less("|J| > 1.096", &f(1.096), &abs_c(&j), ctx),
            strictly_less("|1728J q| > 0.737", &f(0.737), &jq, ctx),
            strictly_less("|1728J q| < 1.321", &jq, &f(1.321), ctx),
            strictly_less(
                "|1728J - 1728J~| < 500|q|",
                &abs_c(&Complex::with_val(prec, &j1728 - &jt)),
                &Float::with_val(prec, &aq * 500u32),
                ctx,
            ),
            strictly_less("500|q| < 0.2", &Float::with_val(prec, &aq * 500u32), &f(0.2), ctx),
            strictly_less(
                "|s2 - s2~| < 222000|q|^3",
                &abs_c(&Complex::with_val(prec, &s2 - &s2t)),
                &Float::with_val(prec, &aq3 * 222000u32),
                ctx,
            ),
            strictly_less("|E6| > 0.8", &f(0.8), &abs_c(&e6), ctx),
            strictly_less("|q| < e^-7.852", &p.abs_q_bound, &archimedes, ctx),
        ];
        for (k, name, c) in [
            (2u32, "|R2(3)| <= 4.007|q|^3", 4.007),
            (4, "|R4(3)| <= 28.1|q|^3", 28.1),
            (6, "|R6(3)| <= 245.6|q|^3", 245.6),
        ] {
            let r = eisenstein_remainder(k, &p, 3, ctx)?;
            checks.push(strictly_less(name, &abs_c(&r), &Float::with_val(prec, &aq3 * f(c)), ctx));
        }
        report.rows.push(BoundRow { tau: (p.tau.real().to_f64(), p.tau.imag().to_f64()), checks });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::{dist, rel_dist};

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256)
    }

    fn tau_sqrt(n: u32, half_real: bool, ctx: PrecisionCtx) -> QPoint {
        let im = Float::with_val(ctx.prec(), n).sqrt() / 2u32;
        let re = if half_real { 0.5 } else { 0.0 };
        QPoint::new(ctx.complex((re, im)), ctx).unwrap()
    }

    #[test]
    fn sigma_table_values() {
        let s1 = [1, 3, 4, 7, 6, 12, 8, 15];
        let s3 = [1, 9, 28, 73, 126, 252, 344, 585];
        let s5 = [1, 33, 244, 1057, 3126, 8052, 16808, 33825];
        for n in 1..=8u64 {
            assert_eq!(divisor_sigma(1, n), s1[n as usize - 1]);
            assert_eq!(divisor_sigma(3, n), s3[n as usize - 1]);
            assert_eq!(divisor_sigma(5, n), s5[n as usize - 1]);
        }
        assert_eq!(divisor_sigma(5, 1), 1);
        let sieve = sigma_sieve(3, 500);
        for n in 1..500u64 {
            assert_eq!(divisor_sigma(3, n), sieve[n as usize]);
        }
    }

    #[test]
    fn divisor_bound() {
        assert!(divisor_bound_holds(10_000));
    }

    #[test]
    fn e6_at_tau8() {
        let ctx = ctx();
        let p = tau_sqrt(8, false, ctx);
        for l in 3..8 {
            let v = eisenstein(6, &p, l, ctx).unwrap();
            assert!(abs_c(&v.value) > 0.8);
        }
    }

    #[test]
    fn q_to_zero_limit() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.0, 40.0, ctx).unwrap();
        let v = eisenstein_auto(4, &p, ctx).unwrap();
        assert!(log2_f(&dist(&v.value, &ctx.complex(1))) < -300.0);
        assert!(log2_f(&v.tail_bound) < -300.0);
    }

    #[test]
    fn bound_unavailable_for_large_q() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.0, 0.05, ctx).unwrap();
        assert_eq!(eisenstein(4, &p, 2, ctx).unwrap_err(), Error::BoundUnavailable { k: 4, l: 2 });
    }

    #[test]
    fn tail_bound_is_honest() {
        let ctx = ctx();
        for (re, im) in [(0.0, 1.26), (0.31, 1.4), (-0.45, 2.0), (0.5, 1.3)] {
            let p = QPoint::from_f64(re, im, ctx).unwrap();
            for k in [2, 4, 6] {
                let best = eisenstein(k, &p, 80, ctx).unwrap();
                for l in 2..12 {
                    let v = eisenstein(k, &p, l, ctx).unwrap();
                    assert!(dist(&best.value, &v.value) <= v.tail_bound, "k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn j_at_cm_points() {
        let ctx = ctx();
        let j8 = modular_j1728_certified(&tau_sqrt(8, false, ctx), ctx).unwrap();
        assert!(dist(&j8.value, &ctx.complex(8000)) < 0.2);
        assert!(j8.radius < 1e-60);
        let j163 = modular_j1728_certified(&tau_sqrt(163, true, ctx), ctx).unwrap();
        let target = -Integer::from(640320).pow(3);
        assert!(dist(&j163.value, &ctx.complex(&target)) < 0.2);
    }

    #[test]
    fn j_leading_coefficient() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.0, 10.0, ctx).unwrap();
        let jq = modular_j(&p, ctx).unwrap() * 1728u32 * &p.q;
        // 1728 J q = 1 + 744 q + ..., with |q| ~ 5e-28.
        assert!(dist(&jq, &ctx.complex(1)) < 1e-24);
    }

    #[test]
    fn s2_at_cm_points() {
        let ctx = ctx();
        let s7 = modular_s2(&tau_sqrt(7, true, ctx), ctx).unwrap();
        let r = rug::Rational::from((5, 21));
        assert!(log2_f(&dist(&s7, &crate::mpnum::rat_c(&r, ctx))) < -240.0);
        let s163 = modular_s2(&tau_sqrt(163, true, ctx), ctx).unwrap();
        let r = rug::Rational::from((77265280, 90856689));
        assert!(log2_f(&dist(&s163, &crate::mpnum::rat_c(&r, ctx))) < -240.0);
        let s12 = modular_s2(&QPoint::from_f64(0.0, 3.0f64.sqrt(), ctx).unwrap(), ctx).unwrap();
        assert!(s12.imag().is_zero() || s12.imag().clone().abs() < 1e-70);
    }

    #[test]
    fn approximants_match_listing() {
        let ctx = ctx();
        let p7 = tau_sqrt(7, true, ctx);
        let j7 = approx_j(&p7, ctx) * 1728u32;
        assert!((j7.real().to_f64() + 3375.00107).abs() < 5e-6);
        let expected: [(u32, bool, &str); 11] = [
            (7, true, "0.23809564791495822417"),
            (8, false, "0.35714272614825257875"),
            (11, true, "0.41558441699505054414"),
            (12, false, "0.45454545415223844453"),
            (16, false, "0.52380952380664189452"),
            (19, true, "0.56140350877203450431"),
            (27, true, "0.63241106719367593347"),
            (28, false, "0.63909774436090223748"),
            (43, true, "0.70874861572535991141"),
            (67, true, "0.76667354471880230185"),
            (163, true, "0.85040827318723886141"),
        ];
        for (n, half, s) in expected {
            let v = approx_s2(&tau_sqrt(n, half, ctx), ctx);
            let e = Float::with_val(ctx.prec(), Float::parse(s).unwrap());
            let err = Float::with_val(ctx.prec(), v.real() - &e).abs();
            assert!(err < 1e-20, "N={n}: {}", err.to_f64());
        }
    }

    #[test]
    fn approx_j_error_at_1_3i() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.0, 1.3, ctx).unwrap();
        let j = modular_j(&p, ctx).unwrap() * 1728u32;
        let jt = approx_j(&p, ctx) * 1728u32;
        assert!(dist(&j, &jt) < Float::with_val(64, abs_c(&p.q) * 500u32));
    }

    #[test]
    fn eta24_signs_and_limit() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.0, 10.0, ctx).unwrap();
        let r = eta24(&p, ctx).unwrap() / &p.q;
        assert!(dist(&r, &ctx.complex(1)) < 1e-20);
        let e8 = eta24(&tau_sqrt(8, false, ctx), ctx).unwrap();
        assert!(*e8.real() > 0 && e8.imag().clone().abs() < 1e-70);
        let e7 = eta24(&tau_sqrt(7, true, ctx), ctx).unwrap();
        assert!(*e7.real() < 0);
    }

    #[test]
    fn periodicity() {
        let ctx = ctx();
        let p = QPoint::from_f64(0.21, 1.37, ctx).unwrap();
        let p1 = p.shifted(1);
        let j = modular_j(&p, ctx).unwrap();
        let j1 = modular_j(&p1, ctx).unwrap();
        assert!(log2_f(&rel_dist(&j, &j1)) < -240.0);
        let s = modular_s2(&p, ctx).unwrap();
        let s1 = modular_s2(&p1, ctx).unwrap();
        assert!(log2_f(&rel_dist(&s, &s1)) < -240.0);
    }

    #[test]
    fn bound_suite_examples() {
        let ctx = ctx();
        let pts = vec![
            QPoint::from_f64(0.0, 1.26, ctx).unwrap(),
            QPoint::from_f64(0.5, 1.3, ctx).unwrap(),
            tau_sqrt(163, true, ctx),
        ];
        let rep = bound_suite(&pts, ctx).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        let jq = &rep.rows[2].checks[1];
        assert!(jq.rhs > 0.737 && jq.rhs < 1.321);
        assert!(bound_suite(&[QPoint::from_f64(0.0, 1.2, ctx).unwrap()], ctx).is_err());
    }
}
