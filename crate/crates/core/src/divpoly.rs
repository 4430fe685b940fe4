//! Division polynomials `P_m ∈ Z[h2, h3][x]` and numeric checks against σ and ℘.
//!
//! `F_m(z) = σ(mz)/σ(z)^{m²}` equals `P_m(℘(z))` for odd `m` and
//! `-℘'(z) P_m(℘(z))` for even `m`, with `h2 = g2/4`, `h3 = g3/4`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};
use crate::mpnum::{abs_c, PrecisionCtx};
use crate::qseries::QPoint;
use crate::weierstrass::{division_points, Elliptic};

pub const DEFAULT_BAKER_CAP: u32 = 6;

/// Sparse polynomial in `h2, h3` keyed by `(deg h2, deg h3)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HPoly {
    terms: BTreeMap<(u32, u32), Integer>,
}

impl HPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<Integer>, i: u32, j: u32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Integer)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Integer {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, key: (u32, u32), c: Integer) {
        let e = self.terms.entry(key).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn eval(&self, h2: &Complex, h3: &Complex, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for (&(i, j), c) in &self.terms {
            let t = Complex::with_val(prec, h2.pow(i)) * Complex::with_val(prec, h3.pow(j));
            acc += t * c;
        }
        acc
    }
}

impl Add for &HPoly {
    type Output = HPoly;
    fn add(self, o: &HPoly) -> HPoly {
        let mut r = self.clone();
        for (&k, c) in &o.terms {
            r.add_term(k, c.clone());
        }
        r
    }
}

impl Sub for &HPoly {
    type Output = HPoly;
    fn sub(self, o: &HPoly) -> HPoly {
        let mut r = self.clone();
        for (&k, c) in &o.terms {
            r.add_term(k, Integer::from(-c));
        }
        r
    }
}

impl Mul for &HPoly {
    type Output = HPoly;
    fn mul(self, o: &HPoly) -> HPoly {
        let mut r = HPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &o.terms {
                r.add_term((a + x, b + y), Integer::from(c * d));
            }
        }
        r
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly { terms: self.terms.iter().map(|(&k, c)| (k, Integer::from(-c))).collect() }
    }
}

/// Dense polynomial in `x`; `coeffs[i]` multiplies `x^i`, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivPoly {
    coeffs: Vec<HPoly>,
}

impl DivPoly {
    pub fn from_coeffs(mut coeffs: Vec<HPoly>) -> Self {
        while coeffs.last().is_some_and(HPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![HPoly::constant(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x`; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> HPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> HPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Each monomial `x^a h2^b h3^c` has weight `2a + 4b + 6c`.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(a, h)| h.terms().map(move |(&(b, c), _)| 2 * a as u32 + 4 * b + 6 * c))
            .collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn eval(&self, x: &Complex, h2: &Complex, h3: &Complex, prec: u32) -> Complex {
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c.eval(h2, h3, prec);
        }
        acc
    }

    /// Monomials sorted by (x, h2, h3) powers, all descending.
    pub fn canonical_text(&self) -> String {
        let mut mons: Vec<(usize, u32, u32, &Integer)> = Vec::new();
        for (a, h) in self.coeffs.iter().enumerate() {
            for (&(b, c), k) in h.terms() {
                mons.push((a, b, c, k));
            }
        }
        if mons.is_empty() {
            return "0".into();
        }
        mons.sort_by_key(|u| std::cmp::Reverse((u.0, u.1, u.2)));
        let mut out = String::new();
        for (idx, &(a, b, c, k)) in mons.iter().enumerate() {
            let neg = *k < 0;
            let mag = Integer::from(k.abs_ref());
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (name, p) in [("x", a as u32), ("h2", b), ("h3", c)] {
                match p {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(format!("{name}^{p}")),
                }
            }
            if mag != 1 || factors.is_empty() {
                factors.insert(0, mag.to_string());
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for DivPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl Add for &DivPoly {
    type Output = DivPoly;
    fn add(self, o: &DivPoly) -> DivPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        DivPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &DivPoly {
    type Output = DivPoly;
    fn sub(self, o: &DivPoly) -> DivPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        DivPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl Mul for &DivPoly {
    type Output = DivPoly;
    fn mul(self, o: &DivPoly) -> DivPoly {
        if self.is_zero() || o.is_zero() {
            return DivPoly::default();
        }
        let mut out = vec![HPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        DivPoly::from_coeffs(out)
    }
}

/// `x^3 - h2 x - h3`.
pub fn weierstrass_cubic() -> DivPoly {
    DivPoly::from_coeffs(vec![HPoly::monomial(-1, 0, 1), HPoly::monomial(-1, 1, 0), HPoly::zero(), HPoly::constant(1)])
}

fn p3() -> DivPoly {
    DivPoly::from_coeffs(vec![
        HPoly::monomial(-1, 2, 0),
        HPoly::monomial(-12, 0, 1),
        HPoly::monomial(-6, 1, 0),
        HPoly::zero(),
        HPoly::constant(3),
    ])
}

fn p4() -> DivPoly {
    let c0 = &HPoly::monomial(-16, 0, 2) + &HPoly::monomial(2, 3, 0);
    DivPoly::from_coeffs(vec![
        c0,
        HPoly::monomial(-8, 1, 1),
        HPoly::monomial(-10, 2, 0),
        HPoly::monomial(-40, 0, 1),
        HPoly::monomial(-10, 1, 0),
        HPoly::zero(),
        HPoly::constant(2),
    ])
}

fn memo() -> &'static Mutex<Vec<Arc<DivPoly>>> {
    static M: OnceLock<Mutex<Vec<Arc<DivPoly>>>> = OnceLock::new();
    M.get_or_init(|| {
        let v = vec![DivPoly::default(), DivPoly::one(), DivPoly::one(), p3(), p4()];
        Mutex::new(v.into_iter().map(Arc::new).collect())
    })
}

fn next_pm(p: &[Arc<DivPoly>], w16: &DivPoly) -> DivPoly {
    let m = p.len();
    let k = (m - 1) / 4;
    let q = |i: usize| -> &DivPoly { &p[i] };
    match m % 4 {
        1 => &(&(w16 * q(2 * k + 2)) * &q(2 * k).pow(3)) - &(q(2 * k - 1) * &q(2 * k + 1).pow(3)),
        2 => {
            let inner = &(q(2 * k + 3) * &q(2 * k).pow(2)) - &(q(2 * k - 1) * &q(2 * k + 2).pow(2));
            q(2 * k + 1) * &inner
        }
        3 => &(q(2 * k + 3) * &q(2 * k + 1).pow(3)) - &(&(w16 * q(2 * k)) * &q(2 * k + 2).pow(3)),
        _ => {
            let k = (m - 4) / 4;
            let inner = &(q(2 * k + 4) * &q(2 * k + 1).pow(2)) - &(q(2 * k) * &q(2 * k + 3).pow(2));
            q(2 * k + 2) * &inner
        }
    }
}

/// `P_m`, memoized process-wide.
pub fn pm(m: u32) -> Arc<DivPoly> {
    assert!(m >= 1, "P_m needs m >= 1");
    let mut table = memo().lock().unwrap();
    if table.len() <= m as usize {
        let w = weierstrass_cubic();
        let w16 = &(&w * &w) * &DivPoly::from_coeffs(vec![HPoly::constant(16)]);
        while table.len() <= m as usize {
            let next = next_pm(&table, &w16);
            table.push(Arc::new(next));
        }
    }
    table[m as usize].clone()
}

pub fn expected_degree(m: u32) -> usize {
    let m2 = (m * m) as usize;
    if m.is_multiple_of(2) {
        (m2 - 4) / 2
    } else {
        (m2 - 1) / 2
    }
}

pub fn expected_leading(m: u32) -> u32 {
    if m.is_multiple_of(2) {
        m / 2
    } else {
        m
    }
}

/// Degree, `|leading| = l_m`, vanishing second coefficient and weight
/// homogeneity for every `m <= m_max`.
pub fn structural_check(m_max: u32) -> bool {
    (1..=m_max).all(|m| {
        let p = pm(m);
        let d = expected_degree(m);
        let lead = p.leading();
        let lead_ok = lead.terms().count() == 1 && Integer::from(lead.coeff(0, 0).abs_ref()) == expected_leading(m);
        let second_ok = d == 0 || p.coeff(d - 1).is_zero();
        p.degree() == d && lead_ok && second_ok && p.weights().len() == 1
    })
}

/// `h2 = g2/4`, `h3 = g3/4` for a lattice.
pub fn h_values(e: &Elliptic) -> (Complex, Complex) {
    let prec = e.ctx.prec();
    (Complex::with_val(prec, &e.inv.g2 / 4u32), Complex::with_val(prec, &e.inv.g3 / 4u32))
}

pub fn eval_pm(m: u32, x: &Complex, e: &Elliptic) -> Complex {
    let (h2, h3) = h_values(e);
    pm(m).eval(x, &h2, &h3, e.ctx.prec())
}

/// `σ(mz)/σ(z)^{m²}`, with `F_0 = 0`.
pub fn fm_with(m: u32, z: &Complex, e: &Elliptic) -> Result<Complex> {
    let prec = e.ctx.prec();
    let s = e.sigma(z)?;
    let thr = Float::with_val(64, Float::i_exp(1, -(e.ctx.bits as i32) / 2));
    if abs_c(&s) < thr {
        return Err(Error::PoleProximity);
    }
    if m == 0 {
        return Ok(e.ctx.complex(0));
    }
    let num = e.sigma(&Complex::with_val(prec, z * m))?;
    Ok(num / s.pow(m * m))
}

pub fn fm_numeric(m: u32, z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    fm_with(m, z, &Elliptic::new(p, ctx)?)
}

/// `(-℘'(z))^{[m even]} P_m(℘(z))`.
pub fn fm_from_pm(m: u32, z: &Complex, e: &Elliptic) -> Result<Complex> {
    let x = e.wp(z)?;
    let v = eval_pm(m, &x, e);
    Ok(if m.is_multiple_of(2) { -(e.wp_prime(z)? * v) } else { v })
}

fn normalized(a: &Complex, b: &Complex) -> Float {
    let prec = a.prec().0;
    let scale = abs_c(a).max(&abs_c(b));
    let d = abs_c(&Complex::with_val(prec, a - b));
    if scale.is_zero() {
        d
    } else {
        d / scale
    }
}

pub fn bridge_residual(m: u32, z: &Complex, e: &Elliptic) -> Result<Float> {
    Ok(normalized(&fm_with(m, z, e)?, &fm_from_pm(m, z, e)?))
}

/// `m² Π_{u ∈ DIV(m)} (x - ℘(u))` against `4W P_m²` (even) or `P_m²` (odd).
pub fn baker_identity_check_with(m: u32, x: &Complex, e: &Elliptic, cap: u32) -> Result<Float> {
    if m < 2 || m > cap {
        return Err(Error::Domain("m outside the configured range for the Baker check"));
    }
    let prec = e.ctx.prec();
    let vals = division_values(m, e)?;
    let mut lhs = e.ctx.complex(m * m);
    for v in &vals {
        lhs *= Complex::with_val(prec, x - v);
    }
    let (h2, h3) = h_values(e);
    let pv = pm(m).eval(x, &h2, &h3, prec);
    let mut rhs = Complex::with_val(prec, pv.square_ref());
    if m.is_multiple_of(2) {
        let w = weierstrass_cubic().eval(x, &h2, &h3, prec);
        rhs *= w * 4u32;
    }
    Ok(normalized(&lhs, &rhs))
}

pub fn baker_identity_check(m: u32, x: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    baker_identity_check_with(m, x, &Elliptic::new(p, ctx)?, DEFAULT_BAKER_CAP)
}

/// `℘(u)` over the `m`-division points, evaluated in parallel.
pub fn division_values(m: u32, e: &Elliptic) -> Result<Vec<Complex>> {
    let set = division_points(m, &e.point);
    set.points.par_iter().map(|u| e.wp(u)).collect()
}

pub fn division_value_sum_with(m: u32, e: &Elliptic) -> Result<Float> {
    if m < 2 {
        return Err(Error::Domain("division value sum needs m >= 2"));
    }
    let mut s = e.ctx.complex(0);
    for v in division_values(m, e)? {
        s += v;
    }
    Ok(abs_c(&s))
}

pub fn division_value_sum_check(m: u32, p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    division_value_sum_with(m, &Elliptic::new(p, ctx)?)
}

/// Residuals of `F_{2n+1} = F_{n+2}F_n³ - F_{n-1}F_{n+1}³` and
/// `F_{2n}F_2 = F_n(F_{n+2}F_{n-1}² - F_{n-2}F_{n+1}²)`, each normalized by its largest term.
pub fn f_recursion_with(n: u32, z: &Complex, e: &Elliptic) -> Result<Float> {
    if n < 2 {
        return Err(Error::Domain("F recursion needs n >= 2"));
    }
    let prec = e.ctx.prec();
    let f = |k: u32| fm_with(k, z, e);
    let (fnm2, fnm1, fnn, fnp1, fnp2) = (f(n - 2)?, f(n - 1)?, f(n)?, f(n + 1)?, f(n + 2)?);
    let a = Complex::with_val(prec, &fnp2 * Complex::with_val(prec, (&fnn).pow(3u32)));
    let b = Complex::with_val(prec, &fnm1 * Complex::with_val(prec, (&fnp1).pow(3u32)));
    let odd_lhs = f(2 * n + 1)?;
    let odd_rhs = Complex::with_val(prec, &a - &b);
    let scale = abs_c(&odd_lhs).max(&abs_c(&a)).max(&abs_c(&b));
    let r1 = abs_c(&(odd_lhs - odd_rhs)) / scale;

    let c = Complex::with_val(prec, &fnp2 * Complex::with_val(prec, fnm1.square_ref()));
    let d = Complex::with_val(prec, &fnm2 * Complex::with_val(prec, fnp1.square_ref()));
    let even_lhs = f(2 * n)? * f(2)?;
    let t1 = Complex::with_val(prec, &fnn * &c);
    let t2 = Complex::with_val(prec, &fnn * &d);
    let scale = abs_c(&even_lhs).max(&abs_c(&t1)).max(&abs_c(&t2));
    let r2 = abs_c(&(even_lhs - t1 + t2)) / scale;
    Ok(r1.max(&r2))
}

pub fn f_recursion_check(n: u32, z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    f_recursion_with(n, z, &Elliptic::new(p, ctx)?)
}
