//! Input forms accepted on the command line.

use hermite_core::nfield::{parse_poly, parse_rational};
use hermite_core::{EmbeddingIndex, Error, IntegerMatrix, MinimalPolynomial, QPoly, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A `--value` literal after compilation.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Rational(BigRational),
    /// A quadratic irrational: the generator of `field` under `embedding`.
    Quadratic {
        field: MinimalPolynomial,
        embedding: EmbeddingIndex,
    },
}

/// Parses `a`, `a+b*sqrt(c)`, `b*sqrt(c)`, `sqrt(c)` or any of these
/// wrapped as `(…)/d`, with rational `a`, `b`, `c` and `d`.
pub fn parse_value(text: &str) -> Result<Value> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, den) = split_denominator(&s)?;
    let (a, b, c) = match s.find("sqrt(") {
        None => (parse_rational(body)?, BigRational::zero(), BigRational::zero()),
        Some(_) => parse_surd(body, text)?,
    };
    let a = a / &den;
    let b = b / &den;
    if b.is_zero() || c.is_zero() {
        return Ok(Value::Rational(a));
    }
    if c.is_negative() {
        return Err(Error::Parse(format!("`{text}` is not real")));
    }
    if let Some(r) = rational_sqrt(&c) {
        return Ok(Value::Rational(a + b * r));
    }
    // (x - a)^2 = b^2 c
    let two = BigRational::from_integer(2.into());
    let p = QPoly::new(vec![&a * &a - &b * &b * &c, -(two * &a), BigRational::from_integer(1.into())]);
    let field = MinimalPolynomial::new(p)?;
    // real roots ascend, so b > 0 picks the larger one
    let embedding = field.real_embedding(if b.is_positive() { 1 } else { 0 })?;
    Ok(Value::Quadratic { field, embedding })
}

/// `p/q` with integer `p` and positive integer `q`, as written.
pub fn integer_pair(text: &str) -> Option<(BigInt, BigInt)> {
    let (p, q) = text.split_once('/')?;
    let q: BigInt = q.trim().parse().ok()?;
    q.is_positive().then_some(())?;
    Some((p.trim().parse().ok()?, q))
}

fn split_denominator(s: &str) -> Result<(&str, BigRational)> {
    if let Some(rest) = s.strip_prefix('(') {
        if let Some((inner, den)) = rest.rsplit_once(")/") {
            let d = parse_rational(den)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok((inner, d));
        }
        if let Some(inner) = rest.strip_suffix(')') {
            return Ok((inner, BigRational::from_integer(1.into())));
        }
    }
    Ok((s, BigRational::from_integer(1.into())))
}

fn parse_surd(s: &str, text: &str) -> Result<(BigRational, BigRational, BigRational)> {
    let bad = || Error::Parse(format!("cannot read `{text}` as a+b*sqrt(c)"));
    let at = s.find("sqrt(").ok_or_else(bad)?;
    let radicand = s[at + 5..].strip_suffix(')').ok_or_else(bad)?;
    let c = parse_rational(radicand)?;
    let head = &s[..at];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split `a±b` at the last sign that is not leading
    let cut = head
        .char_indices()
        .skip(1)
        .filter(|&(_, ch)| ch == '+' || ch == '-')
        .map(|(i, _)| i)
        .last();
    let (a, coef) = match cut {
        Some(i) => (parse_rational(&head[..i])?, &head[i..]),
        None => (BigRational::zero(), head),
    };
    let b = match coef {
        "" | "+" => BigRational::from_integer(1.into()),
        "-" => BigRational::from_integer((-1).into()),
        t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
    };
    Ok((a, b, c))
}

fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| BigRational::new(n, d))
}

/// A square integer matrix as JSON, e.g. `[[2,5,-1],[3,6,1],[4,7,1]]`.
pub fn parse_matrix(text: &str) -> Result<IntegerMatrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix `{text}`: {e}")))
}

/// The evaluation basis: power basis by default, `1, t, …, t^{d-2}, q` for a
/// single `q`, or `d` polynomials given in full.
pub fn parse_basis(d: usize, qs: &[String]) -> Result<Vec<QPoly>> {
    let polys: Vec<QPoly> = qs
        .iter()
        .map(|q| parse_poly(q).map(|(p, _)| p))
        .collect::<Result<_>>()?;
    match polys.len() {
        0 => Ok(hermite_core::conjugates::power_basis(d)),
        1 => Ok(hermite_core::conjugates::basis_with_last(d, polys[0].clone())),
        n if n == d => Ok(polys),
        n => Err(Error::Parse(format!("expected 1 or {d} basis polynomials, got {n}"))),
    }
}

/// `index` counts real embeddings only; `None` gives the smallest.
pub fn real_embedding(p: &MinimalPolynomial, index: Option<usize>) -> Result<EmbeddingIndex> {
    match index {
        Some(i) => p.real_embedding(i),
        None => p.default_real_embedding().ok_or(Error::ComplexEmbedding(0)),
    }
}
