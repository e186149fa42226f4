use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::parse_poly;
use super::roots::{EmbeddingIndex, RootSet};
use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};
use crate::poly::{write_poly, QPoly};

/// Highest degree for which irreducibility is verified on construction.
pub const IRREDUCIBILITY_CHECK_MAX_DEGREE: usize = 4;

struct Inner {
    given: QPoly,
    monic: QPoly,
    checked: bool,
    real_count: usize,
    roots: Mutex<RootSet>,
}

/// An irreducible polynomial defining the number field `Q(α)`.
///
/// Cheap to clone; all clones share one root cache.
#[derive(Clone)]
pub struct MinimalPolynomial(Arc<Inner>);

impl MinimalPolynomial {
    /// Builds from a polynomial in any normalization; the given form is kept
    /// for display, arithmetic uses the monic associate.
    pub fn new(p: QPoly) -> Result<Self> {
        let d = p.degree().unwrap_or(0);
        if d < 2 {
            return Err(Error::DegreeTooSmall(d));
        }
        let monic = p.monic();
        let g = monic.gcd(&monic.derivative());
        if !g.is_constant() {
            return Err(Error::Reducible {
                factor: factor_string(&g),
            });
        }
        let mut roots = RootSet::isolate(&monic)?;
        let checked = d <= IRREDUCIBILITY_CHECK_MAX_DEGREE;
        if checked {
            if let Some(f) = find_factor(&monic, &mut roots)? {
                return Err(Error::Reducible {
                    factor: factor_string(&f),
                });
            }
        }
        let real_count = roots.real_count();
        Ok(MinimalPolynomial(Arc::new(Inner {
            given: p,
            monic,
            checked,
            real_count,
            roots: Mutex::new(roots),
        })))
    }

    /// Integer coefficients in descending order, e.g. `[1, 2, 1, 4]`.
    pub fn from_coeffs(descending: &[i64]) -> Result<Self> {
        Self::new(QPoly::from_ints(descending.iter().rev().copied()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (p, _) = parse_poly(text)?;
        Self::new(p)
    }

    pub fn degree(&self) -> usize {
        self.0.monic.degree().unwrap()
    }

    pub fn monic(&self) -> &QPoly {
        &self.0.monic
    }

    /// The polynomial exactly as supplied.
    pub fn original(&self) -> &QPoly {
        &self.0.given
    }

    /// Whether irreducibility was verified (degree at most 4).
    pub fn is_verified(&self) -> bool {
        self.0.checked
    }

    /// `(s, t)`: real roots and complex-conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        let s = self.0.real_count;
        (s, (self.degree() - s) / 2)
    }

    pub fn is_totally_real(&self) -> bool {
        self.0.real_count == self.degree()
    }

    pub fn embeddings(&self) -> Vec<EmbeddingIndex> {
        (0..self.degree())
            .map(|i| EmbeddingIndex::from_signature(i, self.0.real_count))
            .collect()
    }

    pub fn embedding(&self, index: usize) -> Result<EmbeddingIndex> {
        if index >= self.degree() {
            return Err(Error::EmbeddingOutOfRange {
                index,
                degree: self.degree(),
            });
        }
        Ok(EmbeddingIndex::from_signature(index, self.0.real_count))
    }

    pub fn real_embedding(&self, index: usize) -> Result<EmbeddingIndex> {
        let e = self.embedding(index)?;
        if !e.is_real() {
            return Err(Error::ComplexEmbedding(index));
        }
        Ok(e)
    }

    /// The smallest-index real embedding, if any.
    pub fn default_real_embedding(&self) -> Option<EmbeddingIndex> {
        (self.0.real_count > 0).then(|| EmbeddingIndex::from_signature(0, self.0.real_count))
    }

    /// Root enclosures in canonical order, each of width at most `2^-prec`.
    pub fn root_enclosures(&self, prec: u32) -> Result<Vec<ComplexInterval>> {
        let mut roots = self.0.roots.lock().unwrap_or_else(|e| e.into_inner());
        roots.enclosures(prec)
    }

    pub fn root_enclosure(&self, e: EmbeddingIndex, prec: u32) -> Result<ComplexInterval> {
        Ok(self.root_enclosures(prec)?.swap_remove(e.index))
    }

    pub fn real_root_enclosure(&self, e: EmbeddingIndex, prec: u32) -> Result<Interval> {
        if !e.is_real() {
            return Err(Error::ComplexEmbedding(e.index));
        }
        Ok(self.root_enclosure(e, prec)?.re)
    }

    /// Floating approximations of the roots, canonical order.
    pub fn approximate_roots(&self) -> Vec<(f64, f64)> {
        let roots = self.0.roots.lock().unwrap_or_else(|e| e.into_inner());
        roots.approximations()
    }

    pub fn same_field(&self, other: &MinimalPolynomial) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.monic == other.0.monic
    }

    /// Coefficients of the given form in descending order.
    pub fn descending_coeffs(&self) -> Vec<BigRational> {
        let mut c = self.0.given.coeffs().to_vec();
        c.reverse();
        c
    }
}

/// Disjoint isolating enclosures for every root, in canonical order.
pub fn isolate_roots(p: &MinimalPolynomial) -> Result<Vec<(EmbeddingIndex, ComplexInterval)>> {
    let enc = p.root_enclosures(64)?;
    Ok(p.embeddings().into_iter().zip(enc).collect())
}

fn factor_string(f: &QPoly) -> String {
    let ints = f.primitive_integer();
    let q = QPoly::from_bigints(&ints);
    let mut s = String::new();
    let _ = write_poly(&mut s, q.coeffs(), "x");
    s
}

/// Looks for a monic rational factor of degree `k <= d/2` by testing every
/// subset of roots: the factor's coefficients, scaled by the leading
/// coefficient of the primitive integer form, must be integers.
fn find_factor(monic: &QPoly, roots: &mut RootSet) -> Result<Option<QPoly>> {
    let d = monic.degree().unwrap();
    let ints = monic.primitive_integer();
    let lead = BigRational::from_integer(ints[d].clone());
    for k in 1..=d / 2 {
        for subset in subsets(d, k) {
            let mut prec = 64u32;
            loop {
                let enc = roots.enclosures(prec)?;
                match candidate(&enc, &subset, &lead, prec) {
                    Candidate::None => break,
                    Candidate::Refine => {
                        prec *= 2;
                        if prec > 1 << 16 {
                            return Err(Error::RootIsolation(
                                "irreducibility test did not converge".into(),
                            ));
                        }
                    }
                    Candidate::Found(ns) => {
                        let coeffs: Vec<BigRational> = ns
                            .into_iter()
                            .map(|n| BigRational::from_integer(n) / &lead)
                            .collect();
                        let f = QPoly::new(coeffs);
                        if monic.rem(&f).is_zero() {
                            return Ok(Some(f));
                        }
                        break;
                    }
                }
            }
        }
    }
    Ok(None)
}

enum Candidate {
    None,
    Refine,
    Found(Vec<BigInt>),
}

fn candidate(enc: &[ComplexInterval], subset: &[usize], lead: &BigRational, prec: u32) -> Candidate {
    // expand prod (x - r) with interval coefficients, ascending
    let w = prec + 16;
    let one = ComplexInterval::from_rational(&BigRational::from_integer(1.into()), w);
    let mut poly = vec![one];
    for &i in subset {
        let r = &enc[i];
        let mut next = vec![ComplexInterval::real(Interval::zero(w)); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = &next[j + 1] + c;
            next[j] = &next[j] - &(c * r);
        }
        poly = next;
    }
    let scale = ComplexInterval::from_rational(lead, w);
    let mut out = Vec::with_capacity(poly.len());
    let mut refine = false;
    for c in &poly {
        let c = &scale * c;
        if !c.im.contains_zero() {
            return Candidate::None;
        }
        let lo = c.re.lower().ceil();
        let hi = c.re.upper().floor();
        if lo > hi {
            return Candidate::None;
        }
        if lo != hi {
            refine = true;
        }
        out.push(lo);
    }
    if refine || poly.iter().any(|c| c.im.width().to_f64() >= 0.5) {
        return Candidate::Refine;
    }
    Candidate::Found(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl PartialEq for MinimalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for MinimalPolynomial {}

impl Hash for MinimalPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.monic.coeffs().hash(state);
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0.given.coeffs(), "x")
    }
}

impl fmt::Debug for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MinimalPolynomial({self})")
    }
}

impl Serialize for MinimalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::rational_vec::serialize(&self.descending_coeffs(), s)
    }
}

impl<'de> Deserialize<'de> for MinimalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut c = crate::serde_util::rational_vec::deserialize(d)?;
        c.reverse();
        MinimalPolynomial::new(QPoly::new(c)).map_err(serde::de::Error::custom)
    }
}

impl MinimalPolynomial {
    /// True when the leading coefficient of the given form is 1.
    pub fn given_is_monic(&self) -> bool {
        self.0
            .given
            .leading()
            .map(|c| c.is_integer() && c.numer() == &BigInt::from(1) && !c.is_negative())
            .unwrap_or(false)
    }
}
