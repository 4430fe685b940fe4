//! Precision contexts and the elementary functions everything else is built on.
//!
//! All floating values are MPFR/MPC numbers. A [`PrecisionCtx`] fixes the
//! working precision `bits + guard_bits`; results are faithful at `bits`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Assign, Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub type BigReal = Float;
pub type BigComplex = Complex;
pub type Int = Integer;
pub type Rat = Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    pub bits: u32,
    pub guard_bits: u32,
}

impl PrecisionCtx {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT_GUARD: u32 = 32;

    /// Panics if `bits < 64`.
    pub fn new(bits: u32) -> Self {
        Self::with_guard(bits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Self {
        Self::try_new(bits, guard_bits).expect("precision below 64 bits")
    }

    pub fn try_new(bits: u32, guard_bits: u32) -> Option<Self> {
        (bits >= Self::MIN_BITS).then_some(Self { bits, guard_bits })
    }

    /// Working precision in bits.
    pub fn prec(&self) -> u32 {
        self.bits + self.guard_bits
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: Assign<T>,
    {
        Complex::with_val(self.prec(), v)
    }

    pub fn rat(&self, r: &Rational) -> Float {
        Float::with_val(self.prec(), r)
    }

    /// `2^-bits`.
    pub fn eps(&self) -> Float {
        Float::with_val(64, Float::i_exp(1, -(self.bits as i32)))
    }

    pub fn pi(&self) -> Float {
        ref_pi(*self)
    }

    /// `2πi` at working precision.
    pub fn two_pi_i(&self) -> Complex {
        let two_pi = Float::with_val(self.prec(), self.pi() * 2u32);
        Complex::with_val(self.prec(), (0, two_pi))
    }
}

fn arctan_inv_fixed(x: u32, scale: u32) -> Integer {
    let x2 = Integer::from(x) * x;
    let mut power = (Integer::from(1) << scale) / x;
    let mut sum = Integer::new();
    let mut k = 0u32;
    while power != 0 {
        let term = Integer::from(&power / (2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn machin_pi(prec: u32) -> Float {
    // pi/4 = 4 atan(1/5) - atan(1/239), in fixed point with 2^scale units.
    let scale = prec + 32;
    let a = arctan_inv_fixed(5, scale);
    let b = arctan_inv_fixed(239, scale);
    let fixed = a * 16u32 - b * 4u32;
    let mut pi = Float::with_val(prec, &fixed);
    pi >>= scale;
    pi
}

/// π from Machin's arctangent formula, independent of every series in the catalog.
pub fn ref_pi(ctx: PrecisionCtx) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let prec = ctx.prec();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let v = machin_pi(prec);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Square root with Re > 0, or Re = 0 and Im >= 0.
pub fn principal_sqrt(x: &Complex, ctx: PrecisionCtx) -> Complex {
    let mut w = Complex::with_val(ctx.prec(), x.sqrt_ref());
    if w.real().is_zero() && w.imag().is_sign_negative() {
        w = -w;
    }
    w
}

/// Principal `k`-th root, `exp(Log(x)/k)`.
pub fn principal_root(x: &Complex, k: u32, ctx: PrecisionCtx) -> Complex {
    let l = Complex::with_val(ctx.prec(), x.ln_ref());
    Complex::with_val(ctx.prec(), l / k).exp()
}

pub fn exp_c(z: &Complex, ctx: PrecisionCtx) -> Complex {
    Complex::with_val(ctx.prec(), z.exp_ref())
}

pub fn sin_c(z: &Complex, ctx: PrecisionCtx) -> Complex {
    Complex::with_val(ctx.prec(), z.sin_ref())
}

pub fn cos_c(z: &Complex, ctx: PrecisionCtx) -> Complex {
    Complex::with_val(ctx.prec(), z.cos_ref())
}

pub fn ln_r(x: &Float, ctx: PrecisionCtx) -> Result<Float> {
    if *x <= 0 || x.is_nan() {
        return Err(Error::Domain("logarithm of a non-positive number"));
    }
    Ok(Float::with_val(ctx.prec(), x.ln_ref()))
}

pub fn abs_c(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// `|a - b|` as a float at the precision of `a`.
pub fn dist(a: &Complex, b: &Complex) -> Float {
    let d = Complex::with_val(a.prec().0, a - b);
    abs_c(&d)
}

/// `|a - b| / max(|a|, |b|)`, or the absolute difference when both vanish.
pub fn rel_dist(a: &Complex, b: &Complex) -> Float {
    let d = dist(a, b);
    let s = abs_c(a).max(&abs_c(b));
    if s.is_zero() {
        d
    } else {
        d / s
    }
}

pub fn log2_f(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

pub fn log10_f(x: &Float) -> f64 {
    log2_f(x) * std::f64::consts::LOG10_2
}

/// Integer power of a complex number.
pub fn powu_c(z: &Complex, n: u32) -> Complex {
    Complex::with_val(z.prec().0, z.pow(n))
}

/// Nearest integer to a real float, ties away from zero.
pub fn round_to_int(x: &Float) -> Integer {
    x.to_integer().expect("finite value")
}

/// Float value of a rational converted at working precision.
pub fn rat_c(r: &Rational, ctx: PrecisionCtx) -> Complex {
    Complex::with_val(ctx.prec(), (r, 0))
}
