//! Weierstrass σ, ζ, ℘ for the lattice `L_τ = Z + Zτ` from their Fourier
//! expansions in `q = e^{2πiτ}`, plus lattice invariants, division points and
//! the classical identities as residual checks.
//!
//! Arguments are reduced modulo the lattice into the band
//! `|Im z| <= Im τ / 2`, where every Fourier series converges at least like
//! `|q|^{m/2}`.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mpnum::{abs_c, exp_c, log2_f, rel_dist, PrecisionCtx};
use crate::qseries::{eisenstein_auto, QPoint};

#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub g2: Complex,
    pub g3: Complex,
    pub eta1: Complex,
    pub eta2: Complex,
    pub delta: Complex,
}

impl LatticeInvariants {
    /// Invariants of `a·L`: weights -4, -6, -1, -1, -12.
    pub fn scaled(&self, a: &Complex) -> Self {
        let prec = a.prec().0;
        let inv = Complex::with_val(prec, a.recip_ref());
        let p = |k: u32| Complex::with_val(prec, (&inv).pow(k));
        Self {
            g2: Complex::with_val(prec, &self.g2 * p(4)),
            g3: Complex::with_val(prec, &self.g3 * p(6)),
            eta1: Complex::with_val(prec, &self.eta1 * &inv),
            eta2: Complex::with_val(prec, &self.eta2 * &inv),
            delta: Complex::with_val(prec, &self.delta * p(12)),
        }
    }
}

/// `L = Z ω1 + Z ω2 = ω1 · L_τ` with `τ = ω2 / ω1`.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub omega1: Complex,
    pub omega2: Complex,
}

impl Lattice {
    pub fn new(omega1: Complex, omega2: Complex) -> Result<Self> {
        let tau = Complex::with_val(omega1.prec().0, &omega2 / &omega1);
        if tau.imag().is_nan() || *tau.imag() <= 0 {
            return Err(Error::Domain("Im(omega2/omega1) must be positive"));
        }
        Ok(Self { omega1, omega2 })
    }

    pub fn tau(&self) -> Complex {
        Complex::with_val(self.omega1.prec().0, &self.omega2 / &self.omega1)
    }

    pub fn invariants(&self, ctx: PrecisionCtx) -> Result<LatticeInvariants> {
        let p = QPoint::new(self.tau(), ctx)?;
        Ok(invariants_of(&p, ctx)?.scaled(&self.omega1))
    }
}

/// `g2 = (4/3)π^4 E4`, `g3 = (8/27)π^6 E6`, `η1 = (π^2/3) E2`,
/// `η2 = η1 τ - 2πi`, `Δ = (2π)^12 (E4^3 - E6^2) / 1728` on `L_τ`.
pub fn invariants_of(p: &QPoint, ctx: PrecisionCtx) -> Result<LatticeInvariants> {
    let prec = ctx.prec();
    let pi = ctx.pi();
    let pi2 = Float::with_val(prec, pi.square_ref());
    let pi4 = Float::with_val(prec, pi2.square_ref());
    let pi6 = Float::with_val(prec, &pi4 * &pi2);
    let e2 = eisenstein_auto(2, p, ctx)?.value;
    let e4 = eisenstein_auto(4, p, ctx)?.value;
    let e6 = eisenstein_auto(6, p, ctx)?.value;
    let g2 = Complex::with_val(prec, &e4 * &pi4) * 4u32 / 3u32;
    let g3 = Complex::with_val(prec, &e6 * &pi6) * 8u32 / 27u32;
    let eta1 = Complex::with_val(prec, &e2 * &pi2) / 3u32;
    let eta2 = Complex::with_val(prec, &eta1 * &p.tau) - ctx.two_pi_i();
    let two_pi = Float::with_val(prec, &pi * 2u32);
    let disc = Complex::with_val(prec, e4.pow(3u32)) - Complex::with_val(prec, e6.square_ref());
    let delta = disc * two_pi.pow(12u32) / 1728u32;
    Ok(LatticeInvariants { g2, g3, eta1, eta2, delta })
}

#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

/// σ, ζ, ℘ and derivatives on a fixed `L_τ` with the invariants computed once.
#[derive(Clone, Debug)]
pub struct Elliptic {
    pub point: QPoint,
    pub ctx: PrecisionCtx,
    pub inv: LatticeInvariants,
    pi: Float,
}

/// `z = z0 + a + bτ` with `|Im z0| <= Im τ / 2` and `|Re z0| <= 1/2`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub z0: Complex,
    pub a: Integer,
    pub b: Integer,
}

impl Elliptic {
    pub fn new(p: &QPoint, ctx: PrecisionCtx) -> Result<Self> {
        let point = p.with_ctx(ctx);
        let inv = invariants_of(&point, ctx)?;
        Ok(Self { point, ctx, inv, pi: ctx.pi() })
    }

    fn prec(&self) -> u32 {
        self.ctx.prec()
    }

    fn tau(&self) -> &Complex {
        &self.point.tau
    }

    pub fn reduce(&self, z: &Complex) -> Result<Reduced> {
        let prec = self.prec();
        let im_tau = self.tau().imag();
        let bf = Float::with_val(prec, z.imag() / im_tau).round();
        let b = bf.to_integer().ok_or(Error::ReductionFailure)?;
        let z1 = Complex::with_val(prec, z - Complex::with_val(prec, self.tau() * &bf));
        let af = Float::with_val(prec, z1.real().round_ref());
        let a = af.to_integer().ok_or(Error::ReductionFailure)?;
        let z0 = z1 - af;
        let band = Float::with_val(prec, im_tau * 0.5001f64);
        if Float::with_val(prec, z0.imag().abs_ref()) > band {
            return Err(Error::ReductionFailure);
        }
        Ok(Reduced { z0, a, b })
    }

    /// Distance from a reduced point to the nearest lattice point.
    fn lattice_distance(&self, z0: &Complex) -> Float {
        let prec = self.prec();
        let mut best = abs_c(z0);
        for m in -1i32..=1 {
            for n in -1i32..=1 {
                let w = Complex::with_val(prec, self.tau() * n) + m;
                let d = abs_c(&Complex::with_val(prec, z0 - w));
                if d < best {
                    best = d;
                }
            }
        }
        best
    }

    fn check_pole(&self, z0: &Complex) -> Result<()> {
        let thr = Float::with_val(64, Float::i_exp(1, -(self.ctx.bits as i32) / 2));
        if self.lattice_distance(z0) < thr {
            return Err(Error::PoleProximity);
        }
        Ok(())
    }

    /// `Σ_{m>=1} m^k q^m/(1-q^m) · trig(2πmz)`, for `|Im z| < Im τ`.
    fn fourier(&self, z: &Complex, k: u32, trig: Trig, scale_log2: f64) -> Result<Complex> {
        let prec = self.prec();
        let q = &self.point.q;
        let aq = log2_f(&self.point.abs_q_bound);
        let two_pi = Float::with_val(prec, &self.pi * 2u32);
        let rho = Float::with_val(64, z.imag().abs_ref()) * &two_pi * std::f64::consts::LOG2_E;
        let lx = aq + rho.to_f64();
        if lx >= -1.0 {
            return Err(Error::ReductionFailure);
        }
        let x = lx.exp2();
        let one_q = -(1.0 - self.point.abs_q_bound.to_f64()).log2();
        let target = -(self.ctx.bits as f64) - 16.0 + scale_log2.max(0.0);
        let mut m_max = 1usize;
        loop {
            let mf = m_max as f64;
            let growth = (1.0 + 1.0 / mf).powi(k as i32) * x;
            if growth < 1.0 {
                let tail = 1.0 + k as f64 * mf.log2() + mf * lx + one_q - (1.0 - growth).log2();
                if tail < target {
                    break;
                }
            }
            m_max += 1;
        }
        let w = exp_c(&Complex::with_val(prec, self.ctx.two_pi_i() * z), self.ctx);
        let wi = Complex::with_val(prec, w.recip_ref());
        let mut qm = self.ctx.complex(1);
        let mut wm = self.ctx.complex(1);
        let mut wim = self.ctx.complex(1);
        let mut sum = self.ctx.complex(0);
        for m in 1..m_max {
            qm *= q;
            wm *= &w;
            wim *= &wi;
            let a = Complex::with_val(prec, &qm / Complex::with_val(prec, 1 - &qm));
            let t = match trig {
                Trig::Sin => Complex::with_val(prec, &wm - &wim) / self.ctx.complex((0, 2)),
                Trig::Cos => Complex::with_val(prec, &wm + &wim) / 2u32,
            };
            let weight = Integer::from(m).pow(k);
            sum += a * t * weight;
        }
        Ok(sum)
    }

    fn sin_cos_pi(&self, z: &Complex) -> (Complex, Complex) {
        let prec = self.prec();
        let pz = Complex::with_val(prec, z * &self.pi);
        let s = Complex::with_val(prec, pz.sin_ref());
        let c = Complex::with_val(prec, pz.cos_ref());
        (s, c)
    }

    /// `ζ(z) = η1 z + π cot(πz) + 4π Σ q^m/(1-q^m) sin(2πmz)` without lattice reduction.
    pub fn zeta_direct(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let (s, c) = self.sin_cos_pi(z);
        let main = Complex::with_val(prec, &c / &s) * &self.pi;
        let series = self.fourier(z, 0, Trig::Sin, log2_f(&abs_c(&main)))?;
        let series = series * Float::with_val(prec, &self.pi * 4u32);
        Ok(Complex::with_val(prec, &self.inv.eta1 * z) + main + series)
    }

    pub fn zeta(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let r = self.reduce(z)?;
        self.check_pole(&r.z0)?;
        let base = self.zeta_direct(&r.z0)?;
        let shift = Complex::with_val(prec, &self.inv.eta1 * &r.a) + Complex::with_val(prec, &self.inv.eta2 * &r.b);
        Ok(base + shift)
    }

    fn wp_reduced(&self, z0: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let (s, _) = self.sin_cos_pi(z0);
        let main = Complex::with_val(prec, Complex::with_val(prec, &self.pi / &s).square_ref());
        let series = self.fourier(z0, 1, Trig::Cos, log2_f(&abs_c(&main)))?;
        let pi2 = Float::with_val(prec, self.pi.square_ref());
        Ok(main - series * pi2 * 8u32 - &self.inv.eta1)
    }

    /// `℘(z) = -η1 + (π/sin πz)^2 - 8π^2 Σ m q^m/(1-q^m) cos(2πmz)`.
    pub fn wp(&self, z: &Complex) -> Result<Complex> {
        let r = self.reduce(z)?;
        self.check_pole(&r.z0)?;
        self.wp_reduced(&r.z0)
    }

    /// Term-wise derivative of the ℘ expansion.
    pub fn wp_prime(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let r = self.reduce(z)?;
        self.check_pole(&r.z0)?;
        let (s, c) = self.sin_cos_pi(&r.z0);
        let pi3 = Float::with_val(prec, (&self.pi).pow(3u32));
        let s3 = Complex::with_val(prec, s.pow(3u32));
        let main = Complex::with_val(prec, &c / &s3) * &pi3 * -2i32;
        let series = self.fourier(&r.z0, 2, Trig::Sin, log2_f(&abs_c(&main)))?;
        Ok(main + series * pi3 * 16u32)
    }

    /// `℘''(z)`, differentiating the ℘' expansion once more.
    pub fn wp_second(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let r = self.reduce(z)?;
        self.check_pole(&r.z0)?;
        let (s, c) = self.sin_cos_pi(&r.z0);
        let pi4 = Float::with_val(prec, (&self.pi).pow(4u32));
        let s2 = Complex::with_val(prec, s.square_ref());
        let c2 = Complex::with_val(prec, c.square_ref());
        let s4 = Complex::with_val(prec, s2.square_ref());
        let main = (Complex::with_val(prec, s2.recip_ref()) + Complex::with_val(prec, c2 * 3u32) / s4) * &pi4 * 2u32;
        let series = self.fourier(&r.z0, 3, Trig::Cos, log2_f(&abs_c(&main)))?;
        Ok(main + series * pi4 * 32u32)
    }

    /// `σ(z) = (1/π) e^{η1 z^2/2} sin(πz) Π (1-q^n w)(1-q^n/w)/(1-q^n)^2` on the band.
    fn sigma_reduced(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let q = &self.point.q;
        let aq = log2_f(&self.point.abs_q_bound);
        let two_pi = Float::with_val(prec, &self.pi * 2u32);
        let rho = (Float::with_val(64, z.imag().abs_ref()) * &two_pi * std::f64::consts::LOG2_E).to_f64();
        if aq + rho >= -1.0 {
            return Err(Error::ReductionFailure);
        }
        // |log of factor n| <= 4|q|^n e^{2π|Im z|} once that is below 1/2.
        let target = -(self.ctx.bits as f64) - 16.0;
        let mut n_max = 1usize;
        while 2.0 + n_max as f64 * aq + rho - (1.0 - aq.exp2()).log2() > target {
            n_max += 1;
        }
        let w = exp_c(&Complex::with_val(prec, self.ctx.two_pi_i() * z), self.ctx);
        let wi = Complex::with_val(prec, w.recip_ref());
        let mut prod = self.ctx.complex(1);
        let mut qn = self.ctx.complex(1);
        for _ in 1..n_max {
            qn *= q;
            let f1 = 1 - Complex::with_val(prec, &qn * &w);
            let f2 = 1 - Complex::with_val(prec, &qn * &wi);
            let d = Complex::with_val(prec, Complex::with_val(prec, 1 - &qn).square_ref());
            prod *= f1 * f2 / d;
        }
        let (s, _) = self.sin_cos_pi(z);
        let z2 = Complex::with_val(prec, z.square_ref());
        let ex = exp_c(&(Complex::with_val(prec, &self.inv.eta1 * z2) / 2u32), self.ctx);
        Ok(ex * s * prod / &self.pi)
    }

    /// σ with the translation law `σ(z + nω) = (-1)^n e^{nη(z + nω/2)} σ(z)`.
    pub fn sigma(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let r = self.reduce(z)?;
        let mut v = self.sigma_reduced(&r.z0)?;
        let bf = Float::with_val(prec, &r.b);
        let af = Float::with_val(prec, &r.a);
        let mut exponent = self.ctx.complex(0);
        // Step along τ from z0, then along 1 from z0 + bτ.
        let half_bt = Complex::with_val(prec, self.tau() * &bf) / 2u32;
        exponent += Complex::with_val(prec, &self.inv.eta2 * &bf) * (Complex::with_val(prec, &r.z0 + &half_bt));
        let z1 = Complex::with_val(prec, &r.z0 + Complex::with_val(prec, self.tau() * &bf));
        let half_a = Float::with_val(prec, &af / 2u32);
        exponent += Complex::with_val(prec, &self.inv.eta1 * &af) * (z1 + half_a);
        v *= exp_c(&exponent, self.ctx);
        let parity = Integer::from(&r.a + &r.b);
        if parity.is_odd() {
            v = -v;
        }
        Ok(v)
    }

    /// ℘ from its expansion without reduction, valid for `|Im z| < Im τ`.
    pub fn wp_strip(&self, z: &Complex) -> Result<Complex> {
        self.wp_reduced(z)
    }

    /// σ from its product without reduction, valid for `|Im z| < Im τ`.
    pub fn sigma_strip(&self, z: &Complex) -> Result<Complex> {
        self.sigma_reduced(z)
    }

    /// Maps the band onto `Im w ∈ [-0.6, -0.4]·Im τ`, so `w` and `w + τ` both stay inside the strip.
    fn strip_base(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let z0 = self.reduce(z)?.z0;
        let im_tau = self.tau().imag();
        let im = Float::with_val(prec, z0.imag() * 0.2f64) - Float::with_val(prec, im_tau * 0.5f64);
        Ok(Complex::with_val(prec, (z0.real(), &im)))
    }

    /// `σ(w+1) = -e^{η1(w+1/2)} σ(w)` and `σ(w+τ) = -e^{η2(w+τ/2)} σ(w)`, every σ from the unreduced product.
    pub fn sigma_translation_check(&self, z: &Complex) -> Result<Float> {
        let prec = self.prec();
        let w = self.strip_base(z)?;
        let s = self.sigma_strip(&w)?;
        let s1 = self.sigma_strip(&Complex::with_val(prec, &w + 1u32))?;
        let st = self.sigma_strip(&Complex::with_val(prec, &w + self.tau()))?;
        let f1 = exp_c(&Complex::with_val(prec, &self.inv.eta1 * Complex::with_val(prec, &w + 0.5f64)), self.ctx);
        let half = Complex::with_val(prec, self.tau() / 2u32) + &w;
        let ft = exp_c(&Complex::with_val(prec, &self.inv.eta2 * half), self.ctx);
        let r1 = rel_dist(&s1, &(-(f1 * &s)));
        let r2 = rel_dist(&st, &(-(ft * &s)));
        Ok(r1.max(&r2))
    }

    /// `℘(w+1)` and `℘(w+τ)` against `℘(w)`, all from the unreduced expansion.
    pub fn wp_periodicity_check(&self, z: &Complex) -> Result<Float> {
        let prec = self.prec();
        let w = self.strip_base(z)?;
        let p = self.wp_strip(&w)?;
        let p1 = self.wp_strip(&Complex::with_val(prec, &w + 1u32))?;
        let pt = self.wp_strip(&Complex::with_val(prec, &w + self.tau()))?;
        Ok(rel_dist(&p1, &p).max(&rel_dist(&pt, &p)))
    }

    /// `η2 = ζ(z + τ) - ζ(z)` from the unreduced expansion at a point inside the strip.
    pub fn measure_eta2(&self) -> Result<Complex> {
        let prec = self.prec();
        let im = Float::with_val(prec, self.tau().imag() * -0.45f64);
        let z = self.ctx.complex((0.3, im));
        let z1 = Complex::with_val(prec, &z + self.tau());
        Ok(self.zeta_direct(&z1)? - self.zeta_direct(&z)?)
    }

    /// `η1 = ζ(z + 1) - ζ(z)` from the unreduced expansion.
    pub fn measure_eta1(&self, z: &Complex) -> Result<Complex> {
        let prec = self.prec();
        let z1 = Complex::with_val(prec, z + 1u32);
        Ok(self.zeta_direct(&z1)? - self.zeta_direct(z)?)
    }

    /// `|η1 τ - η2 - 2πi|` with η2 measured, not taken from the closed form.
    pub fn legendre_residual(&self) -> Result<Float> {
        let prec = self.prec();
        let eta2 = self.measure_eta2()?;
        let lhs = Complex::with_val(prec, &self.inv.eta1 * self.tau()) - eta2;
        Ok(abs_c(&(lhs - self.ctx.two_pi_i())))
    }

    pub fn half_period_values(&self) -> Result<[Complex; 3]> {
        let prec = self.prec();
        let h1 = self.ctx.complex(0.5);
        let h2 = Complex::with_val(prec, self.tau() / 2u32);
        let h3 = Complex::with_val(prec, &h1 + &h2);
        Ok([self.wp(&h1)?, self.wp(&h2)?, self.wp(&h3)?])
    }

    /// Largest normalized mismatch between `4(x-e1)(x-e2)(x-e3)` and `4x^3 - g2 x - g3`.
    pub fn half_period_residual(&self) -> Result<Float> {
        let prec = self.prec();
        let [e1, e2, e3] = self.half_period_values()?;
        let s1 = Complex::with_val(prec, &e1 + &e2) + &e3;
        let s2 = Complex::with_val(prec, &e1 * &e2) + Complex::with_val(prec, &e1 * &e3) + Complex::with_val(prec, &e2 * &e3);
        let s3 = Complex::with_val(prec, &e1 * &e2) * &e3;
        let scale = abs_c(&e1).max(&abs_c(&e2)).max(&abs_c(&e3));
        let r1 = abs_c(&s1) / &scale;
        let r2 = rel_dist(&s2, &(Complex::with_val(prec, -&self.inv.g2) / 4u32));
        let r3 = rel_dist(&s3, &(Complex::with_val(prec, &self.inv.g3) / 4u32));
        Ok(r1.max(&r2).max(&r3))
    }

    /// `|℘'^2 - (4℘^3 - g2 ℘ - g3)|`, relative to `|℘'|^2`.
    pub fn de_residual(&self, z: &Complex) -> Result<Float> {
        let prec = self.prec();
        let x = self.wp(z)?;
        let y = self.wp_prime(z)?;
        let y2 = Complex::with_val(prec, y.square_ref());
        let rhs = Complex::with_val(prec, (&x).pow(3u32)) * 4u32 - Complex::with_val(prec, &self.inv.g2 * &x) - &self.inv.g3;
        Ok(rel_dist(&y2, &rhs))
    }

    /// Max of the residuals of `℘'' = 6℘^2 - g2/2` and `℘(2z) = (℘''/℘')^2/4 - 2℘`.
    pub fn duplication_check(&self, z: &Complex) -> Result<Float> {
        let prec = self.prec();
        let z2 = Complex::with_val(prec, z * 2u32);
        let x = self.wp(z)?;
        let y = self.wp_prime(z)?;
        let y2 = self.wp_second(z)?;
        let thr = Float::with_val(64, Float::i_exp(1, -(self.ctx.bits as i32) / 2));
        if abs_c(&y) < Float::with_val(64, &thr * abs_c(&y2).max(&Float::with_val(64, 1))) {
            return Err(Error::ZeroDerivative);
        }
        let x2 = self.wp(&z2)?;
        let de2 = Complex::with_val(prec, x.square_ref()) * 6u32 - Complex::with_val(prec, &self.inv.g2 / 2u32);
        let ratio = Complex::with_val(prec, &y2 / &y);
        let dup = Complex::with_val(prec, ratio.square_ref()) / 4u32 - Complex::with_val(prec, &x * 2u32);
        Ok(rel_dist(&y2, &de2).max(&rel_dist(&x2, &dup)))
    }

    /// `℘(v) - ℘(u) = σ(u+v)σ(u-v) / (σ(u)^2 σ(v)^2)`.
    pub fn sigma_addition_check(&self, u: &Complex, v: &Complex) -> Result<Float> {
        let prec = self.prec();
        let lhs = self.wp(v)? - self.wp(u)?;
        let up = Complex::with_val(prec, u + v);
        let um = Complex::with_val(prec, u - v);
        for w in [&up, &um] {
            self.check_pole(&self.reduce(w)?.z0)?;
        }
        let su = self.sigma(u)?;
        let sv = self.sigma(v)?;
        let den = Complex::with_val(prec, su.square_ref()) * Complex::with_val(prec, sv.square_ref());
        let rhs = self.sigma(&up)? * self.sigma(&um)? / den;
        Ok(rel_dist(&lhs, &rhs))
    }

    /// The three-term σ identity, normalized by the largest term.
    pub fn sigma_three_term_check(&self, u: &Complex, u1: &Complex, u2: &Complex, u3: &Complex) -> Result<Float> {
        let prec = self.prec();
        let pair = |a: &Complex, b: &Complex| -> Result<Complex> {
            let s = self.sigma(&Complex::with_val(prec, a + b))?;
            let d = self.sigma(&Complex::with_val(prec, a - b))?;
            Ok(s * d)
        };
        let t1 = pair(u, u1)? * pair(u2, u3)?;
        let t2 = pair(u, u2)? * pair(u3, u1)?;
        let t3 = pair(u, u3)? * pair(u1, u2)?;
        let scale = abs_c(&t1).max(&abs_c(&t2)).max(&abs_c(&t3));
        let sum = abs_c(&(t1 + t2 + t3));
        Ok(if scale.is_zero() { sum } else { sum / scale })
    }
}

pub fn sigma_w(z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Elliptic::new(p, ctx)?.sigma(z)
}

pub fn zeta_w(z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Elliptic::new(p, ctx)?.zeta(z)
}

pub fn wp(z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Elliptic::new(p, ctx)?.wp(z)
}

pub fn wp_prime(z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Complex> {
    Elliptic::new(p, ctx)?.wp_prime(z)
}

pub fn half_period_values(p: &QPoint, ctx: PrecisionCtx) -> Result<[Complex; 3]> {
    Elliptic::new(p, ctx)?.half_period_values()
}

pub fn duplication_check(z: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    Elliptic::new(p, ctx)?.duplication_check(z)
}

pub fn sigma_addition_check(u: &Complex, v: &Complex, p: &QPoint, ctx: PrecisionCtx) -> Result<Float> {
    Elliptic::new(p, ctx)?.sigma_addition_check(u, v)
}

pub fn sigma_three_term_check(
    u: &Complex,
    u1: &Complex,
    u2: &Complex,
    u3: &Complex,
    p: &QPoint,
    ctx: PrecisionCtx,
) -> Result<Float> {
    Elliptic::new(p, ctx)?.sigma_three_term_check(u, u1, u2, u3)
}

/// Division points `u = s + tτ` in the fundamental parallelogram, `s, t ∈ [0, 1)`.
#[derive(Clone, Debug)]
pub struct DivisionPointSet {
    pub coords: Vec<(Rational, Rational)>,
    pub points: Vec<Complex>,
}

impl DivisionPointSet {
    fn from_coords(coords: Vec<(Rational, Rational)>, p: &QPoint) -> Self {
        let prec = p.ctx.prec();
        let points = coords
            .iter()
            .map(|(s, t)| Complex::with_val(prec, &p.tau * Float::with_val(prec, t)) + Float::with_val(prec, s))
            .collect();
        Self { coords, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The `m^2 - 1` points `k/m + (l/m)τ`, `(k, l) ≠ (0, 0)`.
pub fn division_points(m: u32, p: &QPoint) -> DivisionPointSet {
    assert!(m >= 1);
    let mut coords = Vec::new();
    for l in 0..m {
        for k in 0..m {
            if (k, l) != (0, 0) {
                coords.push((Rational::from((k, m)), Rational::from((l, m))));
            }
        }
    }
    DivisionPointSet::from_coords(coords, p)
}

/// The `AC - 1` points `u = (k/A)τ + (lA + kB)/(AC)` with `0 <= (lA+kB)/(AC) < 1`,
/// the nonzero solutions of `Cτ u ∈ L_τ` for `A + Bτ + Cτ^2 = 0`.
pub fn division_points_ctau(a: i64, b: i64, c: i64, p: &QPoint) -> Result<DivisionPointSet> {
    let prec = p.ctx.prec();
    if a <= 0 || c <= 0 {
        return Err(Error::InvalidCm("A and C must be positive".into()));
    }
    let g = Integer::from(a).gcd(&Integer::from(b)).gcd(&Integer::from(c));
    if g != 1 {
        return Err(Error::InvalidCm("gcd(A, B, C) must be 1".into()));
    }
    let t = &p.tau;
    let rel = Complex::with_val(prec, t * b) + Complex::with_val(prec, Complex::with_val(prec, t.square_ref()) * c) + a;
    let thr = Float::with_val(64, Float::i_exp(1, -(p.ctx.bits as i32) / 2));
    if abs_c(&rel) > thr {
        return Err(Error::InvalidCm("A + Bτ + Cτ² ≠ 0".into()));
    }
    let ac = a * c;
    let mut coords = Vec::new();
    for k in 0..a {
        // 0 <= lA + kB < AC
        let lo = (-k * b).div_euclid(a) + i64::from((-k * b).rem_euclid(a) != 0);
        for l in lo.. {
            let num = l * a + k * b;
            if num >= ac {
                break;
            }
            if k == 0 && num == 0 {
                continue;
            }
            coords.push((Rational::from((num, ac)), Rational::from((k, a))));
        }
    }
    Ok(DivisionPointSet::from_coords(coords, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpnum::dist;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(256)
    }

    fn tau_i_sqrt2(ctx: PrecisionCtx) -> QPoint {
        let s = Float::with_val(ctx.prec(), 2).sqrt();
        QPoint::new(ctx.complex((0, s)), ctx).unwrap()
    }

    fn c(ctx: PrecisionCtx, re: f64, im: f64) -> Complex {
        ctx.complex((re, im))
    }

    #[test]
    fn discriminant_identity() {
        let ctx = ctx();
        let inv = invariants_of(&QPoint::from_f64(0.0, 1.5, ctx).unwrap(), ctx).unwrap();
        let d = Complex::with_val(ctx.prec(), inv.g2.pow(3u32)) - Complex::with_val(ctx.prec(), inv.g3.square_ref()) * 27u32;
        assert!(log2_f(&rel_dist(&d, &inv.delta)) < -240.0);
    }

    #[test]
    fn legendre_relation() {
        let ctx = ctx();
        let s7 = Float::with_val(ctx.prec(), 7).sqrt() / 2u32;
        for p in [tau_i_sqrt2(ctx), QPoint::from_f64(0.0, 3.0, ctx).unwrap(), QPoint::new(ctx.complex((0.5, s7)), ctx).unwrap()] {
            let e = Elliptic::new(&p, ctx).unwrap();
            assert!(e.legendre_residual().unwrap() < 1e-30);
            let m = e.measure_eta2().unwrap();
            assert!(log2_f(&rel_dist(&m, &e.inv.eta2)) < -240.0);
        }
    }

    #[test]
    fn sigma_near_zero_and_symmetries() {
        let ctx = ctx();
        let e = Elliptic::new(&tau_i_sqrt2(ctx), ctx).unwrap();
        let z = ctx.complex(1e-6);
        let r = e.sigma(&z).unwrap() / &z;
        assert!(dist(&r, &ctx.complex(1)) < 1e-20);
        let z = c(ctx, 0.37, 0.21);
        let s = e.sigma(&z).unwrap();
        let sm = e.sigma(&Complex::with_val(ctx.prec(), -&z)).unwrap();
        assert!(log2_f(&rel_dist(&s, &(-sm))) < -240.0);
        assert_eq!(e.sigma(&ctx.complex(0)).unwrap(), ctx.complex(0));
    }

    #[test]
    fn sigma_translation_law() {
        let ctx = ctx();
        let e = Elliptic::new(&QPoint::from_f64(0.0, 1.4, ctx).unwrap(), ctx).unwrap();
        let z = c(ctx, 0.21, -0.33);
        // σ(z+1) = -exp(η1 (z + 1/2)) σ(z), checked against the product at z + 1 directly.
        let lhs = e.sigma_reduced(&Complex::with_val(ctx.prec(), &z + 1u32)).unwrap();
        let f = exp_c(&Complex::with_val(ctx.prec(), &e.inv.eta1 * Complex::with_val(ctx.prec(), &z + 0.5f64)), ctx);
        let rhs = -(f * e.sigma(&z).unwrap());
        assert!(log2_f(&rel_dist(&lhs, &rhs)) < -240.0);
        // The same along τ, with both sides inside the convergence strip.
        let z = c(ctx, 0.1, -0.6);
        let zt = Complex::with_val(ctx.prec(), &z + &e.point.tau);
        let lhs = e.sigma_reduced(&zt).unwrap();
        let half = Complex::with_val(ctx.prec(), &e.point.tau / 2u32) + &z;
        let f = exp_c(&Complex::with_val(ctx.prec(), &e.inv.eta2 * half), ctx);
        let rhs = -(f * e.sigma_reduced(&z).unwrap());
        assert!(log2_f(&rel_dist(&lhs, &rhs)) < -230.0);
    }

    #[test]
    fn zeta_examples() {
        let ctx = ctx();
        let e = Elliptic::new(&tau_i_sqrt2(ctx), ctx).unwrap();
        let z = ctx.complex(1e-8);
        let d = e.zeta(&z).unwrap() - Complex::with_val(ctx.prec(), z.recip_ref());
        assert!(abs_c(&d) < 1e-6);
        let z = c(ctx, 0.3, 0.2);
        let s = e.zeta(&z).unwrap() + e.zeta(&Complex::with_val(ctx.prec(), -&z)).unwrap();
        assert!(abs_c(&s) < 1e-60);
        for z in [c(ctx, 0.3, 0.2), c(ctx, -0.1, 0.4)] {
            let m = e.measure_eta1(&z).unwrap();
            assert!(log2_f(&rel_dist(&m, &e.inv.eta1)) < -240.0);
        }
        assert_eq!(e.zeta(&ctx.complex(0)).unwrap_err(), Error::PoleProximity);
    }

    #[test]
    fn wp_examples() {
        let ctx = ctx();
        let e = Elliptic::new(&tau_i_sqrt2(ctx), ctx).unwrap();
        assert!(e.de_residual(&c(ctx, 0.31, 0.17)).unwrap() < 1e-30);
        let z = c(ctx, 0.23, -0.41);
        let a = e.wp(&z).unwrap();
        let b = e.wp(&Complex::with_val(ctx.prec(), -&z)).unwrap();
        assert!(log2_f(&rel_dist(&a, &b)) < -240.0);
        let d = e.wp_prime(&ctx.complex(0.5)).unwrap();
        assert!(abs_c(&d) < 1e-60);
        let shifted = e.wp(&Complex::with_val(ctx.prec(), &z + &e.point.tau)).unwrap();
        assert!(log2_f(&rel_dist(&a, &shifted)) < -240.0);
        let shifted = e.wp(&Complex::with_val(ctx.prec(), &z + 3u32)).unwrap();
        assert!(log2_f(&rel_dist(&a, &shifted)) < -240.0);
    }

    #[test]
    fn half_periods() {
        let ctx = ctx();
        let e = Elliptic::new(&tau_i_sqrt2(ctx), ctx).unwrap();
        assert!(e.half_period_residual().unwrap() < 1e-60);
        let [e1, e2, e3] = e.half_period_values().unwrap();
        assert!(dist(&e1, &e2) > 1e-3 && dist(&e1, &e3) > 1e-3 && dist(&e2, &e3) > 1e-3);
    }

    #[test]
    fn duplication_examples() {
        let ctx = ctx();
        let p = tau_i_sqrt2(ctx);
        assert!(duplication_check(&c(ctx, 0.3, 0.1), &p, ctx).unwrap() < 1e-30);
        let p15 = QPoint::from_f64(0.0, 1.5, ctx).unwrap();
        assert!(duplication_check(&ctx.complex(0.2), &p15, ctx).unwrap() < 1e-30);
        let near_half = Complex::with_val(ctx.prec(), ctx.complex(0.5) + Float::with_val(64, Float::i_exp(1, -200)));
        assert_eq!(duplication_check(&near_half, &p, ctx).unwrap_err(), Error::ZeroDerivative);
    }

    #[test]
    fn sigma_identities() {
        let ctx = ctx();
        let pts = [
            tau_i_sqrt2(ctx),
            QPoint::from_f64(0.0, 1.4, ctx).unwrap(),
            QPoint::from_f64(0.5, 1.5, ctx).unwrap(),
        ];
        let pairs = [(0.13, 0.27, 0.41, -0.18), (0.7, 0.9, -0.25, 0.33), (0.05, -0.6, 0.36, 0.52)];
        for p in &pts {
            let e = Elliptic::new(p, ctx).unwrap();
            for &(a, b, x, y) in &pairs {
                let r = e.sigma_addition_check(&c(ctx, a, b), &c(ctx, x, y)).unwrap();
                assert!(r < 1e-28, "{}", r.to_f64());
            }
            let u = [c(ctx, 0.1, 0.2), c(ctx, 0.33, -0.4), c(ctx, -0.27, 0.15), c(ctx, 0.6, 0.7)];
            assert!(e.sigma_three_term_check(&u[0], &u[1], &u[2], &u[3]).unwrap() < 1e-28);
            assert!(e.sigma_three_term_check(&u[0], &u[1], &u[2], &u[2]).unwrap() < 1e-60);
            assert!(e.sigma_three_term_check(&ctx.complex(0), &u[1], &u[2], &u[3]).unwrap() < 1e-60);
        }
    }

    #[test]
    fn division_point_counts() {
        let ctx = ctx();
        let p = tau_i_sqrt2(ctx);
        let d2 = division_points(2, &p);
        let expect = [(Rational::from((1, 2)), Rational::new()), (Rational::new(), Rational::from((1, 2))), (Rational::from((1, 2)), Rational::from((1, 2)))];
        assert_eq!(d2.coords.len(), 3);
        for e in &expect {
            assert!(d2.coords.contains(e));
        }
        assert_eq!(division_points(3, &p).len(), 8);
        let s7 = Float::with_val(ctx.prec(), 7).sqrt() / 2u32;
        let p7 = QPoint::new(ctx.complex((0.5, s7)), ctx).unwrap();
        let d = division_points_ctau(2, -1, 1, &p7).unwrap();
        assert_eq!(d.coords, vec![(Rational::from((1, 2)), Rational::from((1, 2)))]);
        assert!(division_points_ctau(2, -1, 1, &p).is_err());
    }

    #[test]
    fn scaling_law() {
        let ctx = ctx();
        let p = tau_i_sqrt2(ctx);
        let two = ctx.complex(2);
        let l = Lattice::new(two.clone(), Complex::with_val(ctx.prec(), &p.tau * 2u32)).unwrap();
        let inv = l.invariants(ctx).unwrap();
        let base = invariants_of(&p, ctx).unwrap();
        let expect = Complex::with_val(ctx.prec(), &base.g2 / 16u32);
        assert!(log2_f(&rel_dist(&inv.g2, &expect)) < -240.0);
    }
}
