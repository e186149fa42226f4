use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::max_bits;
use super::minpoly::MinimalPolynomial;
use super::roots::EmbeddingIndex;
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};
use crate::poly::{write_poly, QPoly};

/// An element of `Q(α)`: a polynomial in `α` of degree below `d`, fully
/// reduced modulo the minimal polynomial.
#[derive(Clone)]
pub struct FieldElement {
    field: MinimalPolynomial,
    rep: QPoly,
}

impl FieldElement {
    pub fn new(field: &MinimalPolynomial, rep: QPoly) -> Self {
        let rep = if rep.degree().is_some_and(|k| k >= field.degree()) {
            rep.rem(field.monic())
        } else {
            rep
        };
        FieldElement {
            field: field.clone(),
            rep,
        }
    }

    pub fn zero(field: &MinimalPolynomial) -> Self {
        Self::new(field, QPoly::zero())
    }

    pub fn one(field: &MinimalPolynomial) -> Self {
        Self::new(field, QPoly::one())
    }

    /// The generator `α`.
    pub fn generator(field: &MinimalPolynomial) -> Self {
        Self::new(field, QPoly::x())
    }

    pub fn from_rational(field: &MinimalPolynomial, q: BigRational) -> Self {
        Self::new(field, QPoly::constant(q))
    }

    pub fn from_int(field: &MinimalPolynomial, n: impl Into<BigInt>) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    /// `q(α)` reduced.
    pub fn from_poly(field: &MinimalPolynomial, q: &QPoly) -> Self {
        Self::new(field, q.clone())
    }

    pub fn field(&self) -> &MinimalPolynomial {
        &self.field
    }

    pub fn representative(&self) -> &QPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_constant() && self.rep.coeff(0).is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.rep.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rep.coeff(0))
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            rep: &self.rep + &other.rep,
        })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            rep: &self.rep - &other.rep,
        })
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(Self::new(&self.field, &self.rep * &other.rep))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let (g, s, _) = self.rep.ext_gcd(self.field.monic());
        if !g.is_constant() {
            // only reachable for unverified high-degree input
            return Err(Error::Reducible {
                factor: g.to_string(),
            });
        }
        Ok(Self::new(&self.field, s))
    }

    pub fn scale(&self, c: &BigRational) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            rep: self.rep.scale(c),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> FieldElement {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `self` on the power basis, `M[i][j]` the
    /// coefficient of `α^i` in `self · α^j`.
    pub fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let alpha = Self::generator(&self.field);
        for _ in 0..d {
            cols.push((0..d).map(|i| cur.rep.coeff(i)).collect::<Vec<_>>());
            cur = &cur * &alpha;
        }
        (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Product of all conjugates, computed as a resultant.
    pub fn norm(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        self.field.monic().resultant(&self.rep)
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mul_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Enclosure of the image under embedding `e`, evaluated with Horner's
    /// rule on a root enclosure of width `2^-prec`.
    pub fn enclose(&self, e: EmbeddingIndex, prec: u32) -> Result<ComplexInterval> {
        let root = self.field.root_enclosure(e, prec)?;
        Ok(self.enclose_at(&root, prec))
    }

    pub(crate) fn enclose_at(&self, root: &ComplexInterval, prec: u32) -> ComplexInterval {
        let mut acc = ComplexInterval::real(Interval::zero(prec));
        for c in self.rep.coeffs().iter().rev() {
            acc = &(&acc * root) + &ComplexInterval::from_rational(c, prec);
        }
        if acc.precision() < prec {
            acc = ComplexInterval::new(acc.re.with_precision(prec), acc.im.with_precision(prec));
        }
        acc
    }

    /// Real enclosure for a real embedding.
    pub fn enclose_real(&self, e: EmbeddingIndex, prec: u32) -> Result<Interval> {
        if !e.is_real() {
            return Err(Error::ComplexEmbedding(e.index));
        }
        let root = self.field.root_enclosure(e, prec)?;
        Ok(self.enclose_at(&root, prec).re)
    }

    /// Enclosures under every embedding at one precision.
    pub fn enclose_all(&self, prec: u32) -> Result<Vec<ComplexInterval>> {
        let roots = self.field.root_enclosures(prec)?;
        Ok(roots.iter().map(|r| self.enclose_at(r, prec)).collect())
    }

    /// Exact sign under a real embedding, refining up to `cap` bits.
    pub fn sign_real_capped(&self, e: EmbeddingIndex, cap: u32) -> Result<Ordering> {
        if !e.is_real() {
            return Err(Error::ComplexEmbedding(e.index));
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        let mut prec = 64;
        while prec <= cap {
            if let Some(s) = self.enclose_real(e, prec)?.sign() {
                return Ok(s);
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted(cap))
    }

    pub fn sign_real(&self, e: EmbeddingIndex) -> Result<Ordering> {
        self.sign_real_capped(e, max_bits())
    }

    /// `floor` of the image under a real embedding.
    pub fn floor_real_capped(&self, e: EmbeddingIndex, cap: u32) -> Result<BigInt> {
        if !e.is_real() {
            return Err(Error::ComplexEmbedding(e.index));
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.floor().to_integer());
        }
        // irrational, so never an integer: refinement terminates
        let mut prec = 64;
        while prec <= cap {
            if let Some(n) = self.enclose_real(e, prec)?.floor_if_decided() {
                return Ok(n);
            }
            prec *= 2;
        }
        Err(Error::PrecisionExhausted(cap))
    }

    pub fn floor_real(&self, e: EmbeddingIndex) -> Result<BigInt> {
        self.floor_real_capped(e, max_bits())
    }

    /// Floating approximation of the image under `e`.
    pub fn approx(&self, e: EmbeddingIndex) -> Result<(f64, f64)> {
        let z = self.enclose(e, 64)?;
        Ok((z.re.to_f64(), z.im.to_f64()))
    }
}

/// Exact ordering of two elements under a real embedding.
pub fn compare_real(a: &FieldElement, b: &FieldElement, e: EmbeddingIndex) -> Result<Ordering> {
    compare_real_capped(a, b, e, max_bits())
}

pub fn compare_real_capped(
    a: &FieldElement,
    b: &FieldElement,
    e: EmbeddingIndex,
    cap: u32,
) -> Result<Ordering> {
    a.checked_sub(b)?.sign_real_capped(e, cap)
}

/// `floor(a / b)` under a real embedding.
pub fn floor_quotient(
    a: &FieldElement,
    b: &FieldElement,
    e: EmbeddingIndex,
    cap: u32,
) -> Result<BigInt> {
    a.checked_div(b)?.floor_real_capped(e, cap)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.rep == other.rep
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.rep.coeffs().hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.rep.coeffs(), "a")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self} mod {})", self.field)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &FieldElement {
            type Output = FieldElement;
            /// # Panics
            /// On elements of different fields (and division by zero).
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field arithmetic")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            rep: -&self.rep,
        }
    }
}
