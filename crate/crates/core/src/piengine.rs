//! The eleven rational Ramanujan-Chudnovsky series and their evaluation.
//!
//! Every row is normalized the same way:
//! `π = sqrt(j/(j-1728)) / (sqrt(N) · S)` with
//! `S = Σ (frac + n) · C(n) / j^n` and `C(n) = (6n)! / ((3n)! (n!)^3)`.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::Result;
use crate::mpnum::{abs_c, principal_sqrt, rel_dist, PrecisionCtx};
use crate::qseries::{modular_j, modular_s2, QPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSpec {
    pub n: u32,
    /// `1728 J(τ_N)`.
    pub j: Integer,
    /// `(1 - s2(τ_N)) / 6`.
    pub frac: Rational,
    pub label: String,
}

fn spec(n: u32, j: i64, p: i64, q: i64, label: &str) -> FormulaSpec {
    FormulaSpec { n, j: Integer::from(j), frac: Rational::from((p, q)), label: label.to_string() }
}

/// The eleven series, one per class-number-one discriminant with `|j| > 1728`.
pub fn formula_catalog() -> Vec<FormulaSpec> {
    vec![
        spec(7, -3375, 8, 63, "-15^3"),
        spec(8, 8000, 3, 28, "20^3"),
        spec(11, -32768, 15, 154, "-32^3"),
        spec(12, 54000, 1, 11, "2*30^3"),
        spec(16, 287496, 5, 63, "66^3"),
        spec(19, -884736, 25, 342, "-96^3"),
        spec(27, -12288000, 31, 506, "-3*160^3"),
        spec(28, 16581375, 8, 133, "255^3"),
        spec(43, -884736000, 263, 5418, "-960^3"),
        spec(67, -147197952000, 10177, 261702, "-5280^3"),
        spec(163, -262537412640768000, 13591409, 545140134, "-640320^3"),
    ]
}

pub fn find_formula(n: u32) -> Option<FormulaSpec> {
    formula_catalog().into_iter().find(|s| s.n == n)
}

/// `C(n) = (6n)! / ((3n)! (n!)^3)` by factorials.
pub fn central_coeff(n: u32) -> Integer {
    let f = |k: u32| Integer::from(Integer::factorial(k));
    f(6 * n) / (f(3 * n) * f(n).pow(3u32))
}

/// `C(n+1)/C(n) = 24(6n+1)(2n+1)(6n+5) / (n+1)^3` as (numerator, denominator).
pub fn coeff_ratio(n: u32) -> (Integer, Integer) {
    let n = Integer::from(n);
    let num = Integer::from(24) * (Integer::from(6 * &n) + 1) * (Integer::from(2 * &n) + 1) * (Integer::from(6 * &n) + 5);
    let den = (n + 1u32).pow(3u32);
    (num, den)
}

/// Exact term `(frac + n) C(n) / j^n`.
pub fn term(s: &FormulaSpec, n: u32) -> Rational {
    let lin = Rational::from(&s.frac + n);
    lin * Rational::from((central_coeff(n), Integer::from((&s.j).pow(n))))
}

/// Exact partial sum of the first `n_terms` terms.
pub fn sum_exact(s: &FormulaSpec, n_terms: u32) -> Rational {
    (0..n_terms).fold(Rational::new(), |acc, n| acc + term(s, n))
}

/// Float partial sum; terms follow the coefficient recurrence in extended precision.
pub fn sum_naive(s: &FormulaSpec, n_terms: u32, ctx: PrecisionCtx) -> Float {
    assert!(n_terms >= 1);
    let wp = ctx.prec() + 32 + 32 - n_terms.leading_zeros();
    let frac = Float::with_val(wp, &s.frac);
    let mut c = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 0);
    for n in 0..n_terms {
        sum += Float::with_val(wp, &frac + n) * &c;
        let (num, den) = coeff_ratio(n);
        c *= num;
        c /= den;
        c /= &s.j;
    }
    Float::with_val(ctx.prec(), sum)
}

/// Products over a term range `[lo, hi)`: `P = Π p(k)`, `Q = Π q(k)` and
/// `T = Σ a(k) Π_{lo<=i<=k} p(i) Π_{k<i<hi} q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSTriple {
    pub p: Integer,
    pub q: Integer,
    pub t: Integer,
}

pub fn combine(l: &BSTriple, r: &BSTriple) -> BSTriple {
    BSTriple {
        p: Integer::from(&l.p * &r.p),
        q: Integer::from(&l.q * &r.q),
        t: Integer::from(&l.t * &r.q) + Integer::from(&l.p * &r.t),
    }
}

fn leaf(s: &FormulaSpec, k: u32) -> BSTriple {
    let (p, q) = if k == 0 {
        (Integer::from(1), Integer::from(1))
    } else {
        let (num, den) = coeff_ratio(k - 1);
        (num, den * &s.j)
    };
    let a = s.frac.numer() + Integer::from(s.frac.denom() * k);
    let t = Integer::from(&a * &p);
    BSTriple { p, q, t }
}

const PARALLEL_CUTOFF: u32 = 512;

pub fn bs_range(s: &FormulaSpec, lo: u32, hi: u32) -> BSTriple {
    assert!(lo < hi);
    if hi - lo == 1 {
        return leaf(s, lo);
    }
    let mid = lo + (hi - lo) / 2;
    let (l, r) = if hi - lo >= PARALLEL_CUTOFF {
        rayon::join(|| bs_range(s, lo, mid), || bs_range(s, mid, hi))
    } else {
        (bs_range(s, lo, mid), bs_range(s, mid, hi))
    };
    combine(&l, &r)
}

/// Binary splitting over `[0, n_terms)`; the partial sum is `T / (Q · den(frac))`.
pub fn sum_binary_split(s: &FormulaSpec, n_terms: u32) -> BSTriple {
    assert!(n_terms >= 1);
    bs_range(s, 0, n_terms)
}

pub fn bs_exact(s: &FormulaSpec, b: &BSTriple) -> Rational {
    Rational::from((b.t.clone(), Integer::from(&b.q * s.frac.denom())))
}

pub fn bs_value(s: &FormulaSpec, b: &BSTriple, ctx: PrecisionCtx) -> Float {
    let den = Integer::from(&b.q * s.frac.denom());
    Float::with_val(ctx.prec(), &b.t) / den
}

/// `log10 |j / 1728|`.
pub fn digits_per_term(s: &FormulaSpec) -> Float {
    let r = Float::with_val(128, Rational::from((s.j.clone(), 1728)));
    r.abs().log10()
}

pub fn terms_needed(s: &FormulaSpec, digits: u64) -> u32 {
    let dpt = digits_per_term(s).to_f64();
    (digits as f64 / dpt).ceil() as u32 + 2
}

/// `sqrt(j/(j-1728)) / (sqrt(N) S)`.
pub fn pi_from_sum(s: &FormulaSpec, sum: &Float, ctx: PrecisionCtx) -> Float {
    let prec = ctx.prec();
    let ratio = Rational::from((s.j.clone(), Integer::from(&s.j - 1728)));
    let pre = principal_sqrt(&Complex::with_val(prec, (&ratio, 0)), ctx);
    let root_n = Float::with_val(prec, s.n).sqrt();
    let den = Float::with_val(prec, root_n * sum);
    Float::with_val(prec, pre.real() / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BinarySplit,
    Naive,
}

/// π from the first `n_terms` terms.
pub fn partial_pi(s: &FormulaSpec, n_terms: u32, method: Method, ctx: PrecisionCtx) -> Float {
    let sum = match method {
        Method::BinarySplit => bs_value(s, &sum_binary_split(s, n_terms), ctx),
        Method::Naive => sum_naive(s, n_terms, ctx),
    };
    pi_from_sum(s, &sum, ctx)
}

/// Decimal digits of `x` truncated after `digits` places, as "d.ddd…".
pub fn decimal_string(x: &Float, digits: u64) -> String {
    let scale = Integer::from(10).pow(digits as u32);
    let scaled = Float::with_val(x.prec(), x * &scale);
    let (int, _) = scaled.to_integer_round(rug::float::Round::Down).expect("finite");
    let s = int.to_string();
    let split = s.len() - digits as usize;
    format!("{}.{}", &s[..split], &s[split..])
}

/// Working context for `digits` decimals: `digits · log2(10) + 64` bits.
pub fn digits_ctx(digits: u64) -> PrecisionCtx {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64;
    PrecisionCtx::with_guard(bits.max(PrecisionCtx::MIN_BITS), 0)
}

/// π to `digits` decimals: "3." followed by exactly `digits` digits.
pub fn compute_pi(s: &FormulaSpec, digits: u64, method: Method) -> String {
    assert!(digits >= 1);
    let ctx = digits_ctx(digits);
    let pi = partial_pi(s, terms_needed(s, digits), method, ctx);
    decimal_string(&pi, digits)
}

/// Relative residual of
/// `sqrt(J/(J-1)) / (2π Im τ) = Σ ((1-s2)/6 + n) C(n) / (1728 J)^n`.
pub fn main_theorem_check(p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    if *p.tau.imag() <= 1.25 {
        return Err(crate::Error::Domain("main theorem check needs Im(tau) > 1.25"));
    }
    let prec = ctx.prec();
    let p = p.with_ctx(ctx);
    let j = modular_j(&p, ctx)?;
    let s2 = modular_s2(&p, ctx)?;
    let jm1 = Complex::with_val(prec, &j - 1u32);
    let root = principal_sqrt(&Complex::with_val(prec, &j / &jm1), ctx);
    let two_pi_im = Float::with_val(prec, ctx.pi() * p.tau.imag()) * 2u32;
    let lhs = root / two_pi_im;

    let frac = Complex::with_val(prec, 1 - s2) / 6u32;
    let j1728 = Complex::with_val(prec, &j * 1728u32);
    let r = Float::with_val(64, abs_c(&j).recip());
    let target = Float::with_val(64, Float::i_exp(1, -(ctx.bits as i32) - 16));
    let mut c = ctx.complex(1);
    let mut sum = ctx.complex(0);
    let mut n = 0u32;
    loop {
        let lin = Complex::with_val(prec, &frac + n);
        sum += Complex::with_val(prec, &lin * &c);
        let (num, den) = coeff_ratio(n);
        c *= num;
        c /= den;
        c /= &j1728;
        n += 1;
        // Tail from index n: |c_n| (|frac+n|/(1-r) + r/(1-r)^2), using C(m+1)/C(m) < 1728.
        let one_r = Float::with_val(64, 1 - &r);
        let lin = abs_c(&Complex::with_val(64, &frac + n));
        let tail = Float::with_val(64, abs_c(&c) * (lin / &one_r + Float::with_val(64, &r / one_r.clone().square())));
        if tail < Float::with_val(64, &target * abs_c(&sum)) {
            break;
        }
    }
    Ok(rel_dist(&lhs, &sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::{log2_f, ref_pi};

    const VAN_CEULEN: &str = "3.14159265358979323846264338327950288";

    #[test]
    fn catalog_examples() {
        let c = find_formula(163).unwrap();
        assert_eq!(c.frac, Rational::from((13591409, 545140134)));
        assert_eq!(c.j, -Integer::from(640320).pow(3));
        assert_eq!(find_formula(12).unwrap().frac, Rational::from((1, 11)));
        assert_eq!(find_formula(8).unwrap().frac, Rational::from((3, 28)));
        assert_eq!(formula_catalog().len(), 11);
        assert!(formula_catalog().iter().all(|s| s.j.clone().abs() > 1728));
    }

    #[test]
    fn ratio_matches_factorials() {
        for n in 0..=50u32 {
            let (num, den) = coeff_ratio(n);
            assert_eq!(
                Rational::from((central_coeff(n + 1), central_coeff(n))),
                Rational::from((num, den)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn term_examples() {
        let s = find_formula(163).unwrap();
        assert_eq!(term(&s, 0), s.frac);
        let expect = (Rational::from((13591409, 545140134)) + 1u32) * Rational::from((120, s.j.clone()));
        assert_eq!(term(&s, 1), expect);
    }

    #[test]
    fn binary_split_matches_exact() {
        let s = find_formula(163).unwrap();
        let b1 = sum_binary_split(&s, 1);
        assert_eq!(bs_exact(&s, &b1), s.frac);
        let b8 = sum_binary_split(&s, 8);
        assert_eq!(bs_exact(&s, &b8), sum_exact(&s, 8));
    }

    #[test]
    fn merge_is_associative() {
        let s = find_formula(43).unwrap();
        let (a, b, c) = (bs_range(&s, 0, 5), bs_range(&s, 5, 11), bs_range(&s, 11, 20));
        assert_eq!(combine(&combine(&a, &b), &c), combine(&a, &combine(&b, &c)));
        assert_eq!(combine(&combine(&a, &b), &c), bs_range(&s, 0, 20));
    }

    #[test]
    fn compute_pi_examples() {
        let s163 = find_formula(163).unwrap();
        assert_eq!(compute_pi(&s163, 35, Method::BinarySplit), VAN_CEULEN);
        let a = compute_pi(&s163, 100, Method::BinarySplit);
        let b = compute_pi(&find_formula(67).unwrap(), 100, Method::BinarySplit);
        assert_eq!(a, b);
        let ctx = PrecisionCtx::new(128);
        let one = partial_pi(&s163, 1, Method::BinarySplit, ctx);
        let err = Float::with_val(ctx.prec(), &one - ref_pi(ctx)).abs() / ref_pi(ctx);
        assert!(err < 1e-13);
        let s8 = find_formula(8).unwrap();
        assert_eq!(compute_pi(&s8, 50, Method::Naive), compute_pi(&s8, 50, Method::BinarySplit));
    }

    #[test]
    fn digits_per_term_examples() {
        let d = digits_per_term(&find_formula(163).unwrap()).to_f64();
        assert!((d - 14.1816).abs() < 1e-4, "{d}");
        let d8 = digits_per_term(&find_formula(8).unwrap()).to_f64();
        assert!((d8 - 0.6656).abs() < 1e-4);
        let d67 = digits_per_term(&find_formula(67).unwrap()).to_f64();
        // log10(5280^3 / 1728) = 7.9304...
        assert!((d67 - 7.9304).abs() < 1e-4, "{d67}");
        assert_eq!(terms_needed(&find_formula(163).unwrap(), 10_000), 708);
    }

    #[test]
    fn main_theorem_examples() {
        let ctx = PrecisionCtx::new(256);
        let s2 = Float::with_val(ctx.prec(), 2).sqrt();
        for p in [
            QPoint::new(ctx.complex((0, s2)), ctx).unwrap(),
            QPoint::from_f64(0.0, 1.3, ctx).unwrap(),
            QPoint::from_f64(0.25, 1.4, ctx).unwrap(),
        ] {
            let r = main_theorem_check(&p, ctx).unwrap();
            assert!(log2_f(&r) < -(ctx.bits as f64) + 32.0, "{}", r.to_f64());
        }
    }
}
