//! Text forms of polynomials: `x^3+2x^2+x+4`, `t^2 + t`, `3/2 x - 1`, `[1,2,1,4]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;

fn syntax(input: &str, reason: impl Into<String>) -> Error {
    Error::PolynomialSyntax {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Parses a polynomial in one variable. Returns the polynomial and the
/// variable letter if one appeared.
pub fn parse_poly(input: &str) -> Result<(QPoly, Option<char>)> {
    let trimmed = input.trim();
    if trimmed.starts_with('[') {
        return parse_array(trimmed).map(|p| (p, None));
    }
    let chars: Vec<char> = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(syntax(input, "empty polynomial"));
    }
    let mut var: Option<char> = None;
    let mut terms: Vec<(BigRational, usize)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = BigRational::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if !terms.is_empty() {
            return Err(syntax(input, format!("expected `+` or `-` at offset {i}")));
        }
        let (coef, used) = read_rational(&chars[i..]);
        i += used;
        let has_coef = used > 0;
        if has_coef && i < chars.len() && chars[i] == '*' {
            i += 1;
        }
        let mut exp = 0usize;
        if i < chars.len() && chars[i].is_ascii_alphabetic() {
            let v = chars[i];
            match var {
                None => var = Some(v),
                Some(w) if w != v => {
                    return Err(syntax(input, format!("mixed variables `{w}` and `{v}`")))
                }
                _ => {}
            }
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(syntax(input, "missing exponent after `^`"));
                }
                let s: String = chars[start..i].iter().collect();
                exp = s
                    .parse()
                    .map_err(|_| syntax(input, format!("exponent `{s}` too large")))?;
            }
            // allow a trailing divisor such as `x^2/2`
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                let (d, used) = read_integer(&chars[i..]);
                if used == 0 || d.is_zero() {
                    return Err(syntax(input, "bad divisor"));
                }
                i += used;
                let c = coef.unwrap_or_else(BigRational::one);
                terms.push((sign * c / BigRational::from_integer(d), exp));
                continue;
            }
        } else if !has_coef {
            return Err(syntax(input, format!("unexpected character at offset {i}")));
        }
        let c = coef.unwrap_or_else(BigRational::one);
        terms.push((sign * c, exp));
    }
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    if deg > 64 {
        return Err(syntax(input, "degree above 64 is not supported"));
    }
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    Ok((QPoly::new(coeffs), var))
}

fn read_integer(s: &[char]) -> (BigInt, usize) {
    let n = s.iter().take_while(|c| c.is_ascii_digit()).count();
    if n == 0 {
        return (BigInt::zero(), 0);
    }
    let txt: String = s[..n].iter().collect();
    (txt.parse().expect("digits"), n)
}

fn read_rational(s: &[char]) -> (Option<BigRational>, usize) {
    let (num, n) = read_integer(s);
    if n == 0 {
        return (None, 0);
    }
    if n < s.len() && s[n] == '/' {
        let (den, m) = read_integer(&s[n + 1..]);
        if m > 0 && !den.is_zero() {
            return (Some(BigRational::new(num, den)), n + 1 + m);
        }
    }
    (Some(BigRational::from_integer(num)), n)
}

/// Parses a rational literal such as `-3`, `7/2`.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{input}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{input}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{input}`")));
    }
    Ok(BigRational::new(n, d))
}

/// `[1,2,1,4]` in descending degree order; entries may be quoted rationals.
fn parse_array(input: &str) -> Result<QPoly> {
    let inner = input
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(input, "unbalanced brackets"))?;
    let mut desc = Vec::new();
    for item in inner.split(',') {
        let item = item.trim().trim_matches('"');
        if item.is_empty() {
            return Err(syntax(input, "empty coefficient"));
        }
        desc.push(parse_rational(item).map_err(|_| syntax(input, format!("bad coefficient `{item}`")))?);
    }
    desc.reverse();
    Ok(QPoly::new(desc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_forms() {
        let (p, v) = parse_poly("x^3+2x^2+x+4").unwrap();
        assert_eq!(p, QPoly::from_ints([4, 1, 2, 1]));
        assert_eq!(v, Some('x'));
        let (p, _) = parse_poly("2x^3 - 4x^2 - 7x - 2").unwrap();
        assert_eq!(p, QPoly::from_ints([-2, -7, -4, 2]));
        let (p, v) = parse_poly("t^2+t").unwrap();
        assert_eq!(p, QPoly::from_ints([0, 1, 1]));
        assert_eq!(v, Some('t'));
        let (p, _) = parse_poly("x^2/2 - 3/4").unwrap();
        assert_eq!(p.coeff(2), BigRational::new(1.into(), 2.into()));
        assert_eq!(p.coeff(0), BigRational::new((-3).into(), 4.into()));
        let (p, _) = parse_poly("-x^3 + 3*x").unwrap();
        assert_eq!(p, QPoly::from_ints([0, 3, 0, -1]));
    }

    #[test]
    fn parses_array_form() {
        let (p, _) = parse_poly("[1, 2, 1, 4]").unwrap();
        assert_eq!(p, QPoly::from_ints([4, 1, 2, 1]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("x + y").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("3 x x").is_err());
    }
}
