//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! This is the certified comparison backend: every enclosure contains the
//! true value, and equality is never decided here (see [`crate::nfield`]).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, an exact dyadic rational.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shift_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let (q, r) = m.div_mod_floor(&(BigInt::one() << s));
    match dir {
        Round::Down => q,
        Round::Up if r.is_zero() => q,
        Round::Up => q + 1,
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            mant: n.into(),
            exp: 0,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic {
            mant: shift_round(&self.mant, s, dir),
            exp: self.exp + s as i64,
        }
    }

    /// Directed rounding of a rational to `prec` significant bits.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        // scale so the quotient carries about `prec` bits
        let k = prec as i64 + 2 - (nb - db);
        let (num, den) = if k >= 0 {
            (q.numer() << (k as u64), q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << ((-k) as u64))
        };
        let (quot, rem) = num.div_mod_floor(&den);
        let mant = match dir {
            Round::Down => quot,
            Round::Up if rem.is_zero() => quot,
            Round::Up => quot + 1,
        };
        Dyadic { mant, exp: -k }.round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as u64))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> (shift as u64)).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << ((self.exp - e) as u64),
            &other.mant << ((other.exp - e) as u64),
            e,
        )
    }

    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic { mant: a + b, exp: e }
    }

    pub fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// `self / other` rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        let q = self.to_rational() / other.to_rational();
        Dyadic::from_rational(&q, prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shift_round(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as u64)
        } else {
            shift_round(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    /// Midpoint of two dyadics (exact).
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let s = a.add_exact(b);
        Dyadic {
            mant: s.mant,
            exp: s.exp - 1,
        }
    }

    /// Integer `m` with `self` in `[m, m+1)` times a power of two: `floor(log2 |self|)`.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// A closed real interval `[lower, upper]` with dyadic endpoints.
///
/// `prec` is the working bit count used when results must be rounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Dyadic::zero(), prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        Self::point(Dyadic::from_int(n), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    pub fn lower(&self) -> &Dyadic {
        &self.lo
    }

    pub fn upper(&self) -> &Dyadic {
        &self.hi
    }

    pub fn lower_rational(&self) -> BigRational {
        self.lo.to_rational()
    }

    pub fn upper_rational(&self) -> BigRational {
        self.hi.to_rational()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg())
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Strictly positive / negative certification.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.signum() > 0 {
            Some(Ordering::Greater)
        } else if self.hi.signum() < 0 {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering of the enclosed values when the intervals are disjoint.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.compare(other).is_none()
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let hi = self.hi.clone().max(self.lo.neg());
            Interval::new(Dyadic::zero(), hi, self.prec)
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let p = self.prec;
        Interval {
            lo: a.lo.mul_exact(&a.lo).round(p, Round::Down),
            hi: a.hi.mul_exact(&a.hi).round(p, Round::Up),
            prec: p,
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec;
        let one = Dyadic::from_int(1);
        Some(Interval {
            lo: one.div(&self.hi, p, Round::Down),
            hi: one.div(&self.lo, p, Round::Up),
            prec: p,
        })
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| a.div(b, p, Round::Down))
            .min()
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.div(b, p, Round::Up))
            .max()
            .unwrap();
        Some(Interval { lo, hi, prec: p })
    }

    pub fn mul_int(&self, n: &BigInt) -> Interval {
        self * &Interval::from_int(n.clone(), self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Integer floor when the interval lies inside one unit cell.
    pub fn floor_if_decided(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        let b = self.hi.floor();
        (a == b).then_some(a)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        Interval {
            lo: self.lo.add_exact(&rhs.lo).round(p, Round::Down),
            hi: self.hi.add_exact(&rhs.hi).round(p, Round::Up),
            prec: p,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        self + &(-rhs)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        let prods = [
            self.lo.mul_exact(&rhs.lo),
            self.lo.mul_exact(&rhs.hi),
            self.hi.mul_exact(&rhs.lo),
            self.hi.mul_exact(&rhs.hi),
        ];
        let lo = prods.iter().min().unwrap().round(p, Round::Down);
        let hi = prods.iter().max().unwrap().round(p, Round::Up);
        Interval { lo, hi, prec: p }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rectangular complex enclosure `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.precision();
        ComplexInterval {
            re,
            im: Interval::zero(p),
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::real(Interval::from_rational(q, prec))
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sqr(&self) -> Interval {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.re.contains_rational(q) && self.im.contains_zero()
    }

    pub fn recip(&self) -> Option<ComplexInterval> {
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Some(ComplexInterval {
            re: &self.re * &inv,
            im: &(-&self.im) * &inv,
        })
    }
}

impl Add for &ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &ComplexInterval {
    type Output = ComplexInterval;
    fn neg(self) -> ComplexInterval {
        ComplexInterval {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

fn atanh_series(y: &BigRational, prec: u32) -> Interval {
    // 2 Σ y^(2n+1)/(2n+1) in fixed point at scale 2^w. Every truncation costs
    // under one unit, so after n terms the error, tail included, is below 4n + 8.
    debug_assert!(y.abs() < BigRational::new(1.into(), 2.into()));
    let w = prec as u64 + 32;
    let p = y.numer().abs();
    let q = y.denom();
    let p2 = &p * &p;
    let q2 = q * q;
    let mut t = (BigInt::one() << w) * &p / q;
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * n + 1);
        t = &t * &p2 / &q2;
        n += 1;
    }
    let err = BigInt::from(4 * n + 8);
    let mut lo: BigInt = (&sum - &err) * 2;
    let mut hi: BigInt = (&sum + &err) * 2;
    if y.is_negative() {
        (lo, hi) = (-hi, -lo);
    }
    let e = -(w as i64);
    Interval::new(
        Dyadic::new(lo, e).round(prec, Round::Down),
        Dyadic::new(hi, e).round(prec, Round::Up),
        prec,
    )
}

/// Certified natural logarithm of a positive rational.
pub fn ln_rational(x: &BigRational, prec: u32) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    // x = 2^e * m with m in [1, 2)
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = if e >= 0 {
        x / BigRational::from_integer(BigInt::one() << (e as u64))
    } else {
        x * BigRational::from_integer(BigInt::one() << ((-e) as u64))
    };
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    while m < one {
        m *= &two;
        e -= 1;
    }
    while m >= two {
        m /= &two;
        e += 1;
    }
    let y = (&m - &one) / (&m + &one);
    let ln_m = atanh_series(&y, prec + 8);
    let ln2 = ln2(prec + 8);
    let out = &ln_m + &ln2.mul_int(&BigInt::from(e));
    Some(out.with_precision(prec))
}

/// Certified `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> Interval {
    atanh_series(&BigRational::new(1.into(), 3.into()), prec)
}

/// Certified natural log of a positive interval.
pub fn ln_interval(x: &Interval) -> Option<Interval> {
    if x.lower().signum() <= 0 {
        return None;
    }
    let p = x.precision();
    let lo = ln_rational(&x.lower_rational(), p)?;
    let hi = ln_rational(&x.upper_rational(), p)?;
    Some(Interval::new(lo.lower().clone(), hi.upper().clone(), p))
}
