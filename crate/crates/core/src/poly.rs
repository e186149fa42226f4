//! Dense univariate polynomials with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial over the rationals, coefficients stored in ascending degree.
///
/// The coefficient vector never carries trailing zeros, so the zero polynomial
/// is the empty vector and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(ascending: I) -> Self {
        Self::new(
            ascending
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_bigints(ascending: &[BigInt]) -> Self {
        Self::new(
            ascending
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (dd..=nd).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * &lc_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = &rem[idx] - &q * dc;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            Some(lc) => {
                let inv = lc.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Resultant `Res(self, other)` by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &QPoly) -> BigRational {
        let (Some(_), Some(_)) = (self.degree(), other.degree()) else {
            return BigRational::zero();
        };
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = BigRational::one();
        loop {
            let da = a.degree().unwrap();
            let Some(db) = b.degree() else {
                return BigRational::zero();
            };
            if db == 0 {
                return acc * num_traits::pow(b.coeffs[0].clone(), da);
            }
            if da < db {
                if (da * db) % 2 == 1 {
                    acc = -acc;
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b);
            let Some(dr) = r.degree() else {
                return BigRational::zero();
            };
            // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.leading().unwrap().clone(), da - dr);
            a = b;
            b = r;
        }
    }

    /// Primitive integer polynomial with positive leading coefficient and the same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    pub fn compose(&self, inner: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &QPoly::constant(c.clone());
        }
        acc
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for QPoly {
    /// Descending-degree text in the variable `t`, e.g. `t^2 + t - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "t")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

pub(crate) fn write_poly(
    f: &mut impl fmt::Write,
    ascending: &[BigRational],
    var: &str,
) -> fmt::Result {
    if ascending.iter().all(|c| c.is_zero()) {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in ascending.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = mag.is_one();
        match k {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    if mag.is_integer() {
                        write!(f, "{mag}")?;
                    } else {
                        write!(f, "({mag})")?;
                    }
                }
                if k == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{k}")?;
                }
            }
        }
    }
    Ok(())
}
