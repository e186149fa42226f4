//! Certified root isolation: Sturm sequences for the real roots, Newton
//! with an a-posteriori inclusion disc for the complex pairs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Dyadic, Interval, Round};
use crate::poly::QPoly;

/// Whether an embedding is real or one member of a complex-conjugate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Real,
    /// Pair member with positive imaginary part.
    ComplexUpper,
    ComplexLower,
}

/// Position of an embedding in the canonical order (0-based): real roots
/// ascending, then complex pairs by ascending real part, upper member first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingIndex {
    pub index: usize,
    pub kind: EmbeddingKind,
}

impl EmbeddingIndex {
    pub fn is_real(&self) -> bool {
        self.kind == EmbeddingKind::Real
    }

    pub(crate) fn from_signature(index: usize, s: usize) -> Self {
        let kind = if index < s {
            EmbeddingKind::Real
        } else if (index - s) % 2 == 0 {
            EmbeddingKind::ComplexUpper
        } else {
            EmbeddingKind::ComplexLower
        };
        EmbeddingIndex { index, kind }
    }
}

/// Sign of an integer polynomial (ascending coefficients) at a dyadic point,
/// computed exactly.
pub(crate) fn sign_at(coeffs: &[BigInt], x: &Dyadic) -> i32 {
    let d = coeffs.len() - 1;
    let m = x.mantissa();
    let e = x.exponent();
    // sum c_i m^i 2^(e i), scaled by 2^(-e d) when e < 0
    let mut acc = BigInt::zero();
    if e >= 0 {
        let base = m << (e as u64);
        for c in coeffs.iter().rev() {
            acc = acc * &base + c;
        }
    } else {
        let s = (-e) as u64;
        for (k, c) in coeffs.iter().enumerate().rev() {
            acc = acc * m + (c << (s * (d - k) as u64));
        }
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

fn rational_sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

struct Sturm {
    seq: Vec<QPoly>,
}

impl Sturm {
    fn new(p: &QPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Sturm { seq }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in &self.seq {
            let v = rational_sign(&s.eval(x));
            if v != 0 {
                if last != 0 && v != last {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    /// Roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Power of two strictly above every root modulus.
fn root_bound_log2(p: &QPoly) -> i64 {
    let m = p.monic();
    let d = m.degree().unwrap_or(0);
    let mut bound = BigRational::one();
    for k in 0..d {
        let c = m.coeff(k).abs();
        if c > bound {
            bound = c;
        }
    }
    bound += BigRational::one();
    let mut e = 0i64;
    let two = BigRational::from_integer(2.into());
    let mut pow = BigRational::one();
    while pow <= bound {
        pow *= &two;
        e += 1;
    }
    e
}

#[derive(Clone, Debug)]
struct RealRoot {
    lo: Dyadic,
    hi: Dyadic,
    sign_lo: i32,
}

impl RealRoot {
    fn refine(&mut self, ints: &[BigInt], prec: u32) {
        let target = -(prec as i64);
        while self.lo != self.hi {
            let w = self.hi.add_exact(&self.lo.neg());
            if w.log2_floor().unwrap() < target {
                break;
            }
            let mid = Dyadic::midpoint(&self.lo, &self.hi);
            let s = sign_at(ints, &mid);
            if s == 0 {
                self.lo = mid.clone();
                self.hi = mid;
            } else if s == self.sign_lo {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }
}

/// Complex dyadic value used only for the (uncertified) Newton/Aberth phase.
#[derive(Clone, Debug)]
struct CDy {
    re: Dyadic,
    im: Dyadic,
}

impl CDy {
    fn from_f64(re: f64, im: f64) -> Self {
        CDy {
            re: f64_to_dyadic(re),
            im: f64_to_dyadic(im),
        }
    }
    fn round(&self, p: u32) -> Self {
        CDy {
            re: self.re.round(p, Round::Down),
            im: self.im.round(p, Round::Down),
        }
    }
    fn add(&self, o: &CDy, p: u32) -> Self {
        CDy {
            re: self.re.add_exact(&o.re),
            im: self.im.add_exact(&o.im),
        }
        .round(p)
    }
    fn sub(&self, o: &CDy, p: u32) -> Self {
        CDy {
            re: self.re.add_exact(&o.re.neg()),
            im: self.im.add_exact(&o.im.neg()),
        }
        .round(p)
    }
    fn mul(&self, o: &CDy, p: u32) -> Self {
        CDy {
            re: self
                .re
                .mul_exact(&o.re)
                .add_exact(&self.im.mul_exact(&o.im).neg()),
            im: self.re.mul_exact(&o.im).add_exact(&self.im.mul_exact(&o.re)),
        }
        .round(p)
    }
    fn norm_sqr(&self) -> Dyadic {
        self.re
            .mul_exact(&self.re)
            .add_exact(&self.im.mul_exact(&self.im))
    }
    fn div(&self, o: &CDy, p: u32) -> Option<Self> {
        let n = o.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let num_re = self.re.mul_exact(&o.re).add_exact(&self.im.mul_exact(&o.im));
        let num_im = self
            .im
            .mul_exact(&o.re)
            .add_exact(&self.re.mul_exact(&o.im).neg());
        Some(CDy {
            re: num_re.div(&n, p, Round::Down),
            im: num_im.div(&n, p, Round::Down),
        })
    }
    fn to_interval(&self, p: u32) -> ComplexInterval {
        ComplexInterval::new(
            Interval::point(self.re.clone(), p),
            Interval::point(self.im.clone(), p),
        )
    }
    fn approx(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn f64_to_dyadic(x: f64) -> Dyadic {
    if x == 0.0 || !x.is_finite() {
        return Dyadic::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), exp - 1075)
    };
    let m = if x < 0.0 { -m } else { m };
    Dyadic::new(BigInt::from(m), e)
}

fn horner_cdy(coeffs: &[Dyadic], z: &CDy, p: u32) -> (CDy, CDy) {
    // value and derivative
    let zero = CDy {
        re: Dyadic::zero(),
        im: Dyadic::zero(),
    };
    let mut v = zero.clone();
    let mut dv = zero;
    for c in coeffs.iter().rev() {
        dv = dv.mul(z, p).add(&v, p);
        v = v.mul(z, p).add(
            &CDy {
                re: c.clone(),
                im: Dyadic::zero(),
            },
            p,
        );
    }
    (v, dv)
}

fn horner_interval(coeffs: &[Interval], z: &ComplexInterval) -> (ComplexInterval, ComplexInterval) {
    let p = z.precision();
    let mut v = ComplexInterval::real(Interval::zero(p));
    let mut dv = v.clone();
    for c in coeffs.iter().rev() {
        dv = &(&dv * z) + &v;
        v = &(&v * z) + &ComplexInterval::real(c.clone());
    }
    (v, dv)
}

/// Upper bound for `sqrt(q)`, q >= 0, with about `prec` fractional bits.
fn sqrt_upper(q: &BigRational, prec: u32) -> Dyadic {
    let k = prec as u64 + 4;
    let scaled = q * BigRational::from_integer(BigInt::one() << (2 * k));
    let c = scaled.ceil().to_integer();
    let mut s = c.sqrt();
    if &s * &s < c {
        s += 1;
    }
    Dyadic::new(s, -(k as i64))
}

#[derive(Clone, Debug)]
struct ComplexRoot {
    center: CDy,
    radius: Dyadic,
}

/// Certified enclosures for all roots of a squarefree polynomial.
#[derive(Debug)]
pub(crate) struct RootSet {
    ints: Vec<BigInt>,
    monic: QPoly,
    real: Vec<RealRoot>,
    complex: Vec<ComplexRoot>,
    complex_prec: u32,
}

impl RootSet {
    pub(crate) fn isolate(p: &QPoly) -> Result<Self> {
        let monic = p.monic();
        let ints = monic.primitive_integer();
        let d = monic.degree().unwrap_or(0);
        let sturm = Sturm::new(&monic);
        let e = root_bound_log2(&monic);
        let b = BigRational::from_integer(BigInt::one() << (e as u64));
        let mut real = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((a, c)) = stack.pop() {
            let n = sturm.count(&a, &c);
            if n == 0 {
                continue;
            }
            if n == 1 {
                let lo = Dyadic::from_rational(&a, 4096, Round::Down);
                let hi = Dyadic::from_rational(&c, 4096, Round::Down);
                let sign_lo = sign_at(&ints, &lo);
                real.push(RealRoot { lo, hi, sign_lo });
                continue;
            }
            let two = BigRational::from_integer(2.into());
            let mut mid = (&a + &c) / &two;
            let mut k = 3u64;
            // avoid landing on a root so endpoints never vanish
            while monic.eval(&mid).is_zero() {
                mid += (&c - &a) / BigRational::from_integer(BigInt::one() << k);
                k += 1;
            }
            stack.push((mid.clone(), c));
            stack.push((a, mid));
        }
        real.sort_by(|x, y| x.lo.cmp(&y.lo));
        let s = real.len();
        if (d - s) % 2 != 0 {
            return Err(Error::RootIsolation("odd number of non-real roots".into()));
        }
        let mut set = RootSet {
            ints,
            monic,
            real,
            complex: Vec::new(),
            complex_prec: 0,
        };
        if d > s {
            set.isolate_complex((d - s) / 2)?;
        }
        Ok(set)
    }

    pub(crate) fn degree(&self) -> usize {
        self.ints.len() - 1
    }

    pub(crate) fn real_count(&self) -> usize {
        self.real.len()
    }

    fn dyadic_coeffs(&self, p: u32) -> Vec<Dyadic> {
        self.monic
            .coeffs()
            .iter()
            .map(|c| Dyadic::from_rational(c, p, Round::Down))
            .collect()
    }

    fn aberth(&self, p: u32) -> Vec<CDy> {
        let d = self.degree();
        let coeffs = self.dyadic_coeffs(p);
        let r = 2f64.powi(root_bound_log2(&self.monic) as i32) / 2.0;
        let mut z: Vec<CDy> = (0..d)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
                CDy::from_f64(r * th.cos(), r * th.sin())
            })
            .collect();
        let tol = Dyadic::new(BigInt::one(), -(p as i64 / 2));
        for _ in 0..400 {
            let mut worst = Dyadic::zero();
            for k in 0..d {
                let (v, dv) = horner_cdy(&coeffs, &z[k], p);
                let w = match v.div(&dv, p) {
                    Some(w) => w,
                    None => CDy::from_f64(1e-3, 1e-3),
                };
                let mut sum = CDy::from_f64(0.0, 0.0);
                for j in 0..d {
                    if j != k {
                        let diff = z[k].sub(&z[j], p);
                        if let Some(inv) = CDy::from_f64(1.0, 0.0).div(&diff, p) {
                            sum = sum.add(&inv, p);
                        }
                    }
                }
                let denom = CDy::from_f64(1.0, 0.0).sub(&w.mul(&sum, p), p);
                let step = w.div(&denom, p).unwrap_or(w);
                let n = step.norm_sqr();
                if n > worst {
                    worst = n;
                }
                z[k] = z[k].sub(&step, p);
            }
            if worst < tol {
                break;
            }
        }
        z
    }

    fn newton(&self, z: &CDy, p: u32) -> CDy {
        let coeffs = self.dyadic_coeffs(p + 16);
        let mut z = z.clone();
        let tol = Dyadic::new(BigInt::one(), -2 * (p as i64 + 8));
        for _ in 0..80 {
            let (v, dv) = horner_cdy(&coeffs, &z, p + 16);
            let step = match v.div(&dv, p + 16) {
                Some(s) => s,
                None => break,
            };
            z = z.sub(&step, p + 16);
            if step.norm_sqr() < tol {
                break;
            }
        }
        z
    }

    /// Inclusion radius `d |p(z)| / |p'(z)|`, rounded up.
    fn inclusion_radius(&self, z: &CDy, p: u32) -> Option<Dyadic> {
        let w = p + 32;
        let coeffs: Vec<Interval> = self
            .monic
            .coeffs()
            .iter()
            .map(|c| Interval::from_rational(c, w))
            .collect();
        let (v, dv) = horner_interval(&coeffs, &z.to_interval(w));
        let num = v.norm_sqr().upper_rational();
        let den = dv.norm_sqr().lower_rational();
        if !den.is_positive() {
            return None;
        }
        let d = BigRational::from_integer(BigInt::from(self.degree()));
        Some(sqrt_upper(&(num / den * &d * &d), p + 8))
    }

    fn certify(&self, centers: &[CDy], p: u32) -> Option<Vec<ComplexRoot>> {
        let mut out = Vec::with_capacity(centers.len());
        for c in centers {
            let r = self.inclusion_radius(c, p)?;
            // the disc must stay off the real axis
            if r.to_rational() >= c.im.to_rational().abs() {
                return None;
            }
            out.push(ComplexRoot {
                center: c.clone(),
                radius: r,
            });
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                let dre = out[i].center.re.to_rational() - out[j].center.re.to_rational();
                let dim = out[i].center.im.to_rational() - out[j].center.im.to_rational();
                let dist2 = &dre * &dre + &dim * &dim;
                let rs = out[i].radius.to_rational() + out[j].radius.to_rational();
                if dist2 <= &rs * &rs {
                    return None;
                }
            }
        }
        Some(out)
    }

    fn isolate_complex(&mut self, t: usize) -> Result<()> {
        let mut p = 128u32;
        while p <= 8192 {
            let mut approx = self.aberth(p);
            approx.sort_by(|a, b| {
                b.im.to_rational()
                    .abs()
                    .partial_cmp(&a.im.to_rational().abs())
                    .unwrap_or(Ordering::Equal)
            });
            let mut upper: Vec<CDy> = approx
                .into_iter()
                .take(2 * t)
                .filter(|z| z.im.signum() > 0)
                .map(|z| self.newton(&z, p))
                .collect();
            if upper.len() == t {
                upper.sort_by(|a, b| {
                    let (ar, ai) = a.approx();
                    let (br, bi) = b.approx();
                    ar.partial_cmp(&br)
                        .unwrap_or(Ordering::Equal)
                        .then(ai.partial_cmp(&bi).unwrap_or(Ordering::Equal))
                });
                if let Some(roots) = self.certify(&upper, p) {
                    self.complex = roots;
                    self.complex_prec = p;
                    return Ok(());
                }
            }
            p *= 2;
        }
        Err(Error::RootIsolation(
            "could not separate the complex roots".into(),
        ))
    }

    fn refine_complex(&mut self, prec: u32) -> Result<()> {
        let target = Dyadic::new(BigInt::one(), -(prec as i64) - 1);
        if self.complex.iter().all(|r| r.radius <= target) {
            return Ok(());
        }
        let mut p = self.complex_prec.max(prec + 8);
        for _ in 0..6 {
            let centers: Vec<CDy> = self
                .complex
                .iter()
                .map(|r| self.newton(&r.center, p))
                .collect();
            if let Some(roots) = self.certify(&centers, p) {
                if roots.iter().all(|r| r.radius <= target) {
                    self.complex = roots;
                    self.complex_prec = p;
                    return Ok(());
                }
            }
            p *= 2;
        }
        Err(Error::RootIsolation(format!(
            "complex root refinement to {prec} bits failed"
        )))
    }

    /// Enclosures in canonical embedding order, each of width at most `2^-prec`.
    pub(crate) fn enclosures(&mut self, prec: u32) -> Result<Vec<ComplexInterval>> {
        for r in &mut self.real {
            r.refine(&self.ints, prec);
        }
        if !self.complex.is_empty() {
            self.refine_complex(prec)?;
        }
        let mut out = Vec::with_capacity(self.degree());
        for r in &self.real {
            out.push(ComplexInterval::real(Interval::new(
                r.lo.clone(),
                r.hi.clone(),
                prec,
            )));
        }
        for c in &self.complex {
            let re = Interval::new(
                c.center.re.add_exact(&c.radius.neg()),
                c.center.re.add_exact(&c.radius),
                prec,
            );
            let im = Interval::new(
                c.center.im.add_exact(&c.radius.neg()),
                c.center.im.add_exact(&c.radius),
                prec,
            );
            let z = ComplexInterval::new(re, im);
            let lower = z.conj();
            out.push(z);
            out.push(lower);
        }
        Ok(out)
    }

    /// Rough floating values in canonical order.
    pub(crate) fn approximations(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .real
            .iter()
            .map(|r| (Dyadic::midpoint(&r.lo, &r.hi).to_f64(), 0.0))
            .collect();
        for c in &self.complex {
            let (re, im) = c.center.approx();
            out.push((re, im));
            out.push((re, -im));
        }
        out
    }
}
