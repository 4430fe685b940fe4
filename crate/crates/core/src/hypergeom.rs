//! Generalized hypergeometric series: exact coefficients, float evaluation,
//! Clausen's formula, the ODE recursions, and the Kummer/Picard-Fuchs checks.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mpnum::{abs_c, log2_f, principal_root, PrecisionCtx};
use crate::qseries::{delta, modular_j, QPoint};

fn is_nonpositive_integer(r: &Rational) -> bool {
    *r.denom() == 1 && *r <= 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HG2F1 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl HG2F1 {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if is_nonpositive_integer(&c) {
            return Err(Error::Domain("lower parameter is a non-positive integer"));
        }
        Ok(Self { a, b, c })
    }

    fn upper(&self) -> Vec<Rational> {
        vec![self.a.clone(), self.b.clone()]
    }

    fn lower(&self) -> Vec<Rational> {
        vec![self.c.clone()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HG3F2 {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub eps: Rational,
}

impl HG3F2 {
    /// Equal upper and lower parameters cancel before validation.
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational, eps: Rational) -> Result<Self> {
        let p = Self { alpha, beta, gamma, delta, eps };
        let (_, lower) = cancel(&p.upper(), &p.lower());
        if lower.iter().any(is_nonpositive_integer) {
            return Err(Error::Domain("lower parameter is a non-positive integer"));
        }
        Ok(p)
    }

    fn upper(&self) -> Vec<Rational> {
        vec![self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }

    fn lower(&self) -> Vec<Rational> {
        vec![self.delta.clone(), self.eps.clone()]
    }
}

fn cancel(upper: &[Rational], lower: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut up = upper.to_vec();
    let mut lo = Vec::new();
    for l in lower {
        if let Some(i) = up.iter().position(|u| u == l) {
            up.remove(i);
        } else {
            lo.push(l.clone());
        }
    }
    (up, lo)
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..n {
        acc *= Rational::from(a + i);
    }
    acc
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Maclaurin coefficients `0..len` of `pFq(upper; lower; z)`, as `Π(u)_n / (Π(l)_n n!)`.
fn hyper_coeffs(upper: &[Rational], lower: &[Rational], len: usize) -> Vec<Rational> {
    let (up, lo) = cancel(upper, lower);
    (0..len as u32)
        .map(|n| {
            let num = up.iter().fold(Rational::from(1), |acc, u| acc * pochhammer(u, n));
            let den = lo.iter().fold(Rational::from(factorial(n)), |acc, l| acc * pochhammer(l, n));
            num / den
        })
        .collect()
}

pub fn coeff_2f1(p: &HG2F1, n: u32) -> Rational {
    hyper_coeffs(&p.upper(), &p.lower(), n as usize + 1).pop().unwrap()
}

pub fn coeff_3f2(p: &HG3F2, n: u32) -> Rational {
    hyper_coeffs(&p.upper(), &p.lower(), n as usize + 1).pop().unwrap()
}

pub fn coeffs_2f1(p: &HG2F1, len: usize) -> Vec<Rational> {
    hyper_coeffs(&p.upper(), &p.lower(), len)
}

pub fn coeffs_3f2(p: &HG3F2, len: usize) -> Vec<Rational> {
    hyper_coeffs(&p.upper(), &p.lower(), len)
}

/// Derivative of a truncated power series (coefficient list).
fn derive(f: &[Rational]) -> Vec<Rational> {
    f.iter().enumerate().skip(1).map(|(n, c)| Rational::from(c * n as u32)).collect()
}

fn coeff(f: &[Rational], n: isize) -> Rational {
    if n < 0 {
        Rational::new()
    } else {
        f.get(n as usize).cloned().unwrap_or_default()
    }
}

/// Applies `Σ_j P_j(z) f^{(j)}` to the series `f`; `ops[j]` lists `P_j` by ascending powers.
fn apply_operator(f: &[Rational], ops: &[Vec<Rational>], n_max: usize) -> Vec<Rational> {
    let mut derivs = vec![f.to_vec()];
    for _ in 1..ops.len() {
        let d = derive(derivs.last().unwrap());
        derivs.push(d);
    }
    (0..=n_max)
        .map(|n| {
            let mut s = Rational::new();
            for (j, poly) in ops.iter().enumerate() {
                for (e, c) in poly.iter().enumerate() {
                    s += c * coeff(&derivs[j], n as isize - e as isize);
                }
            }
            s
        })
        .collect()
}

fn r(x: i64) -> Rational {
    Rational::from(x)
}

/// Checks the ₂F₁ ODE `z(1-z)f'' + [c-(a+b+1)z]f' - ab f = 0` coefficient-wise
/// and the recursion `(c+n) A_{n+1} = (n^2+(a+b)n+ab) A_n` with `A_n = n! · coeff_n`.
pub fn ode_recursion_check_2f1(p: &HG2F1, n_max: usize) -> bool {
    let f = coeffs_2f1(p, n_max + 3);
    let (a, b, c) = (&p.a, &p.b, &p.c);
    let ab = Rational::from(a * b);
    let apb = Rational::from(a + b);
    let ops = vec![
        vec![-ab.clone()],
        vec![c.clone(), -(apb.clone() + 1u32)],
        vec![r(0), r(1), r(-1)],
    ];
    let ode_ok = apply_operator(&f, &ops, n_max).iter().all(|x| *x == 0);
    let a_n: Vec<Rational> = f.iter().enumerate().map(|(n, x)| x * Rational::from(factorial(n as u32))).collect();
    let rec_ok = (0..=n_max).all(|n| {
        let nn = Rational::from(n as u32);
        let lhs = (c + nn.clone()) * &a_n[n + 1];
        let poly = nn.clone() * &nn + apb.clone() * &nn + &ab;
        lhs == poly * &a_n[n]
    });
    ode_ok && rec_ok
}

/// Checks the ₃F₂ ODE coefficient-wise and `(δ+n)(ε+n) A_{n+1} = (α+n)(β+n)(γ+n) A_n`.
pub fn ode_recursion_check_3f2(p: &HG3F2, n_max: usize) -> bool {
    let f = coeffs_3f2(p, n_max + 4);
    let (al, be, ga, de, ep) = (&p.alpha, &p.beta, &p.gamma, &p.delta, &p.eps);
    let s = Rational::from(al + be) + ga;
    let pr = Rational::from(al * be) + Rational::from(al * ga) + Rational::from(be * ga);
    let abc = Rational::from(al * be) * ga;
    let de_ep = Rational::from(de * ep);
    let ops = vec![
        vec![abc],
        vec![-de_ep, s.clone() + pr + 1u32],
        vec![r(0), -(Rational::from(de + ep) + 1u32), s + 3u32],
        vec![r(0), r(0), r(-1), r(1)],
    ];
    let ode_ok = apply_operator(&f, &ops, n_max).iter().all(|x| *x == 0);
    let a_n: Vec<Rational> = f.iter().enumerate().map(|(n, x)| x * Rational::from(factorial(n as u32))).collect();
    let rec_ok = (0..=n_max).all(|n| {
        let nn = Rational::from(n as u32);
        let lhs = Rational::from(de + &nn) * Rational::from(ep + &nn) * &a_n[n + 1];
        let rhs = Rational::from(al + &nn) * Rational::from(be + &nn) * Rational::from(ga + &nn) * &a_n[n];
        lhs == rhs
    });
    ode_ok && rec_ok
}

/// `₂F₁(a,b;a+b+1/2;z)^2 = ₃F₂(2a,2b,a+b;2a+2b,a+b+1/2;z)` up to `z^{n_max}`.
pub fn clausen_check(a: &Rational, b: &Rational, n_max: usize) -> Result<bool> {
    let half = Rational::from((1, 2));
    let c = Rational::from(a + b) + &half;
    let f = HG2F1::new(a.clone(), b.clone(), c.clone())?;
    let g = HG3F2::new(
        Rational::from(a * 2u32),
        Rational::from(b * 2u32),
        Rational::from(a + b),
        Rational::from(a + b) * 2u32,
        c,
    )?;
    let lhs = coeffs_2f1(&f, n_max + 1);
    let rhs = coeffs_3f2(&g, n_max + 1);
    Ok((0..=n_max).all(|n| {
        let sq = (0..=n).fold(Rational::new(), |acc, i| acc + Rational::from(&lhs[i] * &lhs[n - i]));
        sq == rhs[n]
    }))
}

/// `(1/6)_n (5/6)_n (1/2)_n / (n!)^3`.
pub fn chud_coeff_pochhammer(n: u32) -> Rational {
    let p = pochhammer(&Rational::from((1, 6)), n) * pochhammer(&Rational::from((5, 6)), n) * pochhammer(&Rational::from((1, 2)), n);
    p / Rational::from(factorial(n).pow(3u32))
}

/// `(6n)! / ((3n)! (n!)^3 12^{3n})`; panics if the Pochhammer form disagrees.
pub fn chud_coeff(n: u32) -> Rational {
    let num = factorial(6 * n);
    let den = factorial(3 * n) * factorial(n).pow(3u32) * Integer::from(1728).pow(n);
    let v = Rational::from((num, den));
    assert_eq!(v, chud_coeff_pochhammer(n), "coefficient identity fails at n = {n}");
    v
}

struct Series {
    value: Complex,
    d1: Complex,
    d2: Complex,
}

fn abs_rat(r: &Rational) -> f64 {
    r.to_f64().abs()
}

/// Sums `pFq` and its first two derivatives term by term.
fn eval_series(upper: &[Rational], lower: &[Rational], z: &Complex, ctx: PrecisionCtx, with_derivs: bool) -> Result<Series> {
    let prec = ctx.prec();
    let margin = 1.0 - 2f64.powi(-20);
    let az = Float::with_val(64, z.abs_ref());
    if az >= margin {
        return Err(Error::OutOfDisc);
    }
    let azf = az.to_f64();
    let (up, lo) = cancel(upper, lower);
    let up_abs: Vec<f64> = up.iter().map(abs_rat).collect();
    let lo_abs: Vec<f64> = lo.iter().map(abs_rat).collect();
    let target = -(ctx.bits as f64) - 16.0;

    let mut term = ctx.complex(1);
    let mut value = ctx.complex(0);
    let mut d1 = ctx.complex(0);
    let mut d2 = ctx.complex(0);
    // d1 and d2 accumulate n c_n z^n and n(n-1) c_n z^n; divided by z, z^2 at the end.
    let mut n: u32 = 0;
    loop {
        value += &term;
        if with_derivs && n >= 1 {
            d1 += Complex::with_val(prec, &term * n);
            if n >= 2 {
                d2 += Complex::with_val(prec, &term * (n * (n - 1)));
            }
        }
        let mut ratio = Rational::from(1) / Rational::from(n + 1);
        for u in &up {
            ratio *= Rational::from(u + n);
        }
        for l in &lo {
            ratio /= Rational::from(l + n);
        }
        term *= Float::with_val(prec, &ratio);
        term *= z;
        n += 1;
        if term.is_zero() {
            break;
        }
        // Tail bound from the ratio estimate valid for all indices >= n.
        let nf = n as f64;
        if lo_abs.iter().all(|l| *l < nf / 2.0) {
            let mut rho = azf;
            for u in &up_abs {
                rho *= 1.0 + u / nf;
            }
            for l in &lo_abs {
                rho /= 1.0 - l / nf;
            }
            if with_derivs {
                rho *= (1.0 + 1.0 / nf).powi(2);
            }
            if rho < 1.0 {
                let mut t = log2_f(&abs_c(&term)) - (1.0 - rho).log2();
                if with_derivs {
                    t += 2.0 * nf.log2() - 2.0 * azf.log2().min(0.0);
                }
                let s = log2_f(&abs_c(&value));
                if t < target + s.min(0.0) {
                    break;
                }
            }
        }
    }
    if with_derivs && !z.is_zero() {
        d1 /= z;
        d2 /= Complex::with_val(prec, z.square_ref());
    }
    Ok(Series { value, d1, d2 })
}

pub fn eval_2f1(p: &HG2F1, z: &Complex, ctx: PrecisionCtx) -> Result<Complex> {
    Ok(eval_series(&p.upper(), &p.lower(), z, ctx, false)?.value)
}

pub fn eval_3f2(p: &HG3F2, z: &Complex, ctx: PrecisionCtx) -> Result<Complex> {
    Ok(eval_series(&p.upper(), &p.lower(), z, ctx, false)?.value)
}

/// `(f, f', f'')` of ₂F₁ at `z`.
pub fn eval_2f1_derivs(p: &HG2F1, z: &Complex, ctx: PrecisionCtx) -> Result<(Complex, Complex, Complex)> {
    let s = eval_series(&p.upper(), &p.lower(), z, ctx, true)?;
    Ok((s.value, s.d1, s.d2))
}

/// The parameters `(1/12, 5/12; 1)` of Kummer's solution.
pub fn kummer_params() -> HG2F1 {
    HG2F1::new(Rational::from((1, 12)), Rational::from((5, 12)), Rational::from(1)).unwrap()
}

/// Twelfth root of `x` closest in argument to `anchor`.
fn root12_near(x: &Complex, anchor: &Complex, ctx: PrecisionCtx) -> Complex {
    let prec = ctx.prec();
    let base = principal_root(x, 12, ctx);
    let unit = crate::mpnum::exp_c(&Complex::with_val(prec, ctx.two_pi_i() / 12u32), ctx);
    let mut best = base.clone();
    let mut best_score = Float::with_val(prec, f64::NEG_INFINITY);
    let mut w = base;
    for _ in 0..12 {
        let score = Complex::with_val(prec, &w * anchor.clone().conj()).real().clone();
        if score > best_score {
            best_score = score;
            best = w.clone();
        }
        w *= &unit;
    }
    best
}

/// Relative residual of `Δ^{1/12} = (2π / 12^{1/4}) J^{-1/12} ₂F₁(1/12, 5/12; 1; 1/J)`.
///
/// Both twelfth roots take the branch of their leading q-expansion term,
/// `Δ^{1/12} ~ 2π e^{2πiτ/12}` and `J^{-1/12} ~ 1728^{1/12} e^{2πiτ/12}`
/// with Re τ reduced to `[-1/2, 1/2)`.
pub fn kummer_check(p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    if *p.tau.imag() <= 1.25 {
        return Err(Error::Domain("Kummer check needs Im(tau) > 1.25"));
    }
    let prec = ctx.prec();
    let p = p.with_ctx(ctx);
    let j = modular_j(&p, ctx)?;
    let d = delta(&p, ctx)?;
    let inv_j = Complex::with_val(prec, 1 / &j);

    let shift = Float::with_val(prec, p.tau.real() + 0.5f64).floor();
    let tau_red = Complex::with_val(prec, &p.tau - &shift);
    let anchor = crate::mpnum::exp_c(&Complex::with_val(prec, ctx.two_pi_i() * &tau_red / 12u32), ctx);
    let two_pi = Float::with_val(prec, ctx.pi() * 2u32);

    let lhs = root12_near(&d, &anchor, ctx);
    let w = root12_near(&inv_j, &anchor, ctx);
    let f = eval_2f1(&kummer_params(), &inv_j, ctx)?;
    let twelfth_root_4 = Float::with_val(prec, 12).root(4);
    let rhs = Complex::with_val(prec, w * f) * two_pi / twelfth_root_4;
    Ok(crate::mpnum::rel_dist(&lhs, &rhs))
}

/// `|b'' + b'/J + (31J-4)/(144 J^2 (J-1)^2) b|` for `b = J^{-1/4} (1-J)^{1/4} ₂F₁(1/12,5/12;1;1/J)`.
pub fn picard_fuchs_residual(j: &Complex, ctx: PrecisionCtx) -> Result<Float> {
    let prec = ctx.prec();
    let z = Complex::with_val(prec, 1 / j);
    let (f, f1, f2) = eval_2f1_derivs(&kummer_params(), &z, ctx)?;
    let one_minus_j = Complex::with_val(prec, 1 - j);
    // p = J^{-1/4} (1-J)^{1/4}; any fixed branch gives a solution.
    let pj = Complex::with_val(prec, j.ln_ref()) / -4i32;
    let pm = Complex::with_val(prec, one_minus_j.ln_ref()) / 4u32;
    let p = Complex::with_val(prec, pj + pm).exp();
    let j2 = Complex::with_val(prec, j.square_ref());
    let j3 = Complex::with_val(prec, &j2 * j);
    let j4 = Complex::with_val(prec, j2.square_ref());
    let omj2 = Complex::with_val(prec, one_minus_j.square_ref());

    let l = -(Complex::with_val(prec, 4u32 * j).recip()) - Complex::with_val(prec, 4u32 * &one_minus_j).recip();
    let l1 = Complex::with_val(prec, 4u32 * &j2).recip() - Complex::with_val(prec, 4u32 * &omj2).recip();
    let big_f = f;
    let big_f1 = -Complex::with_val(prec, &f1 / &j2);
    let big_f2 = Complex::with_val(prec, &f2 / &j4) + Complex::with_val(prec, 2u32 * &f1) / &j3;

    let b = Complex::with_val(prec, &p * &big_f);
    let b1 = Complex::with_val(prec, &l * &big_f) + &big_f1;
    let b1 = b1 * &p;
    let l_sq = Complex::with_val(prec, l.square_ref());
    let b2 = Complex::with_val(prec, (l1 + l_sq) * &big_f)
        + Complex::with_val(prec, 2u32 * &l) * &big_f1
        + &big_f2;
    let b2 = b2 * &p;

    let jm1 = Complex::with_val(prec, j - 1u32);
    let coef_den = Complex::with_val(prec, jm1.square_ref()) * &j2 * 144u32;
    let coef = (Complex::with_val(prec, 31u32 * j) - 4u32) / coef_den;
    let res = b2 + Complex::with_val(prec, &b1 / j) + coef * b;
    Ok(abs_c(&res))
}
