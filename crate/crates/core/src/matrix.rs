//! Square integer matrices and exact rational linear algebra.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::nfield::FieldElement;
use crate::poly::QPoly;

/// A square matrix of arbitrary-precision integers with its determinant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        let det = bareiss_det(&rows);
        Ok(IntegerMatrix { rows, det })
    }

    /// # Panics
    /// If the rows do not form a square matrix.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(rows).expect("square matrix")
    }

    pub fn from_vec_i64(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntegerMatrix {
            rows,
            det: BigInt::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn require_unimodular(&self) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(Error::NotUnimodular(self.det.to_string()))
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        IntegerMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
                .collect(),
            det: self.det.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        let rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        let det = if self.dim() % 2 == 0 {
            self.det.clone()
        } else {
            -&self.det
        };
        IntegerMatrix { rows, det }
    }

    pub fn checked_mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.dim(),
            });
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for k in 0..n {
                            if !self.rows[i][k].is_zero() {
                                s += &self.rows[i][k] * &other.rows[k][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        Ok(IntegerMatrix {
            rows,
            det: &self.det * &other.det,
        })
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntegerMatrix> {
        self.require_unimodular()?;
        let inv = rational_inverse(&self.to_rational())?;
        let rows: Vec<Vec<BigInt>> = inv
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| {
                        debug_assert!(x.is_integer());
                        x.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(IntegerMatrix {
            rows,
            det: self.det.clone(),
        })
    }

    /// `self^e`; negative exponents require a unimodular matrix.
    pub fn pow(&self, e: i64) -> Result<IntegerMatrix> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn commutes(&self, other: &IntegerMatrix) -> Result<bool> {
        Ok(self.checked_mul(other)? == other.checked_mul(self)?)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self · v` for a vector of field elements.
    pub fn apply_field(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let field = v[0].field();
        self.rows
            .iter()
            .map(|r| {
                let mut acc = QPoly::zero();
                for (a, x) in r.iter().zip(v) {
                    if !a.is_zero() {
                        acc = &acc + &x.representative().scale(&BigRational::from_integer(a.clone()));
                    }
                }
                FieldElement::new(field, acc)
            })
            .collect()
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect()
    }

    /// Characteristic polynomial `det(tI - A)`, ascending coefficients.
    pub fn char_poly(&self) -> QPoly {
        char_poly(&self.to_rational())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).sum()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|x| x.abs()))
            .max()
            .unwrap_or_default()
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;
    /// # Panics
    /// On a dimension mismatch.
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        self.checked_mul(rhs).expect("matrix dimensions")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        let w = cells
            .iter()
            .flat_map(|r| r.iter().map(|s| s.len()))
            .max()
            .unwrap_or(1);
        for (i, r) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, c) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c:>w$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::int_rows::serialize(&self.rows, s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = crate::serde_util::int_rows::deserialize(d)?;
        IntegerMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Fraction-free determinant.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let piv = match (k..n).find(|&i| !a[i][k].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn rational_inverse(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    gauss_jordan(&mut a, n);
    for i in 0..n {
        if a[i][i].is_zero() {
            return Err(Error::Singular);
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reduced row echelon form on the first `cols` columns; returns pivot columns.
fn gauss_jordan(a: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let width = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for j in c..width {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..width {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b` for a possibly non-square `A`; `None` if inconsistent.
/// Free variables are set to zero.
pub fn rational_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let pivots = gauss_jordan(&mut aug, cols);
    for row in aug.iter().skip(pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn rational_rank(a: &[Vec<BigRational>]) -> usize {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m = a.to_vec();
    gauss_jordan(&mut m, cols).len()
}

/// Characteristic polynomial by the Faddeev–LeVerrier recurrence.
pub fn char_poly(a: &[Vec<BigRational>]) -> QPoly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    if !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    QPoly::new(coeffs)
}

/// Product of two rational matrices.
pub fn rational_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for (k, brow) in b.iter().enumerate() {
                        if !a[i][k].is_zero() {
                            s += &a[i][k] * &brow[j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn determinant_and_inverse() {
        let m = IntegerMatrix::from_i64(&[&[5, -4, 3], &[-12, 9, -7], &[16, -12, 9]]);
        assert_eq!(m.det(), &BigInt::one());
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let s = IntegerMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn characteristic_polynomial() {
        let a = IntegerMatrix::from_i64(&[&[2, 5, -1], &[3, 6, 1], &[4, 7, 1]]);
        assert_eq!(a.char_poly(), QPoly::from_ints([-6, 2, -9, 1]));
        let c = IntegerMatrix::from_i64(&[&[0, 0, 4], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.char_poly(), QPoly::from_ints([-4, 0, 0, 1]));
    }

    #[test]
    fn shears_do_not_commute() {
        let a = IntegerMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let b = IntegerMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert!(!a.commutes(&b).unwrap());
        assert!(a.commutes(&IntegerMatrix::identity(2)).unwrap());
        assert_eq!(a.pow(-3).unwrap(), IntegerMatrix::from_i64(&[&[1, -3], &[0, 1]]));
    }

    #[test]
    fn solve_underdetermined() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(rational_solve(&a, &[q(3), q(6)]), Some(vec![q(3), q(0)]));
        assert_eq!(rational_solve(&a, &[q(3), q(5)]), None);
        assert_eq!(rational_rank(&a), 1);
    }

    proptest! {
        #[test]
        fn bareiss_matches_gauss(v in proptest::collection::vec(-9i64..10, 16)) {
            let rows: Vec<Vec<BigInt>> = v.chunks(4).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let rat: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
            prop_assert_eq!(BigRational::from_integer(bareiss_det(&rows)), rational_det(&rat));
        }

        #[test]
        fn det_is_multiplicative(a in proptest::collection::vec(-5i64..6, 9), b in proptest::collection::vec(-5i64..6, 9)) {
            let ma = IntegerMatrix::from_vec_i64(a.chunks(3).map(|c| c.to_vec()).collect()).unwrap();
            let mb = IntegerMatrix::from_vec_i64(b.chunks(3).map(|c| c.to_vec()).collect()).unwrap();
            let p = &ma * &mb;
            prop_assert_eq!(bareiss_det(p.rows()), ma.det() * mb.det());
        }
    }
}
