//! Exact detection of eventual periodicity via projective proportionality.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::engines::{Algorithm, Element, ExpansionStep};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nfield::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Terminated,
    Periodic,
    Inconclusive,
}

/// An algorithm run: optional normalization steps, the numbered steps and
/// the detected (pre-period, period) decomposition.
///
/// For a periodic run, the state after step `preperiod` is proportional to
/// the state after step `preperiod + period`; both counts index `steps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub algorithm: Algorithm,
    pub input: String,
    /// Normalization applied before step 1 (APD Step 0, the sin² pre-pass).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normalization: Vec<ExpansionStep>,
    pub steps: Vec<ExpansionStep>,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub status: Status,
    /// Steps where a minimization tie was broken deterministically.
    pub tie_flags: Vec<usize>,
    /// Steps where the algorithm's dominance premise failed (reported only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub condition_flags: Vec<usize>,
    /// Pre-period and period of the emitted element sequence, which can be
    /// shorter than the state-level decomposition.
    pub element_preperiod: Option<usize>,
    pub element_period: Option<usize>,
    /// Proportionality scalar `c` with `state(pre + per) = c · state(pre)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_scalar: Option<String>,
    /// Coordinates of the last state reached.
    #[serde(default)]
    pub final_state: Vec<String>,
}

impl Expansion {
    pub fn elements(&self) -> Vec<&Element> {
        self.steps.iter().map(|s| &s.element).collect()
    }

    pub fn preperiod_steps(&self) -> &[ExpansionStep] {
        match self.preperiod {
            Some(n) => &self.steps[..n],
            None => &self.steps,
        }
    }

    pub fn period_steps(&self) -> &[ExpansionStep] {
        match (self.preperiod, self.period) {
            (Some(n), Some(m)) => &self.steps[n..n + m],
            _ => &[],
        }
    }

    /// Product of the normalization transforms (identity when there are none).
    pub fn normalization_matrix(&self) -> IntegerMatrix {
        let d = self.dimension();
        self.normalization
            .iter()
            .fold(IntegerMatrix::identity(d), |acc, s| &s.transform * &acc)
    }

    pub fn dimension(&self) -> usize {
        self.steps
            .first()
            .or(self.normalization.first())
            .map(|s| s.transform.dim())
            .unwrap_or(1)
    }

    pub fn is_periodic(&self) -> bool {
        self.status == Status::Periodic
    }
}

/// `c` with `v = c · u`, if it exists.
pub fn proportional(u: &[FieldElement], v: &[FieldElement]) -> Result<Option<FieldElement>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let k = u
        .iter()
        .position(|x| !x.is_zero())
        .ok_or(Error::ZeroVector)?;
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let c = v[k].checked_div(&u[k])?;
    for (a, b) in u.iter().zip(v) {
        if &(&c * a) != b {
            return Ok(None);
        }
    }
    Ok(Some(c))
}

/// The vector divided by its first nonzero coordinate.
pub fn canonical(v: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let k = v
        .iter()
        .position(|x| !x.is_zero())
        .ok_or(Error::ZeroVector)?;
    let inv = v[k].inv()?;
    Ok(v.iter().map(|x| x * &inv).collect())
}

/// Index of canonical forms seen so far.
#[derive(Default)]
pub struct PeriodDetector {
    seen: HashMap<Vec<FieldElement>, usize>,
}

impl PeriodDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers the state reached after step `i`; returns the earlier step
    /// with a proportional state, if any.
    pub fn observe(&mut self, coords: &[FieldElement], i: usize) -> Result<Option<usize>> {
        let key = canonical(coords)?;
        if let Some(&j) = self.seen.get(&key) {
            return Ok(Some(j));
        }
        self.seen.insert(key, i);
        Ok(None)
    }
}

/// First-revisit decomposition of a sequence of exact states.
pub fn detect(run: &[Vec<FieldElement>]) -> Result<Option<(usize, usize)>> {
    let mut det = PeriodDetector::new();
    for (i, s) in run.iter().enumerate() {
        if let Some(j) = det.observe(s, i)? {
            return Ok(Some((j, i - j)));
        }
    }
    Ok(None)
}

/// Minimal (pre-period, period) of an eventually periodic element sequence
/// whose state-level decomposition is `(pre, per)`.
pub fn element_period(elements: &[Element], pre: usize, per: usize) -> (usize, usize) {
    let block = &elements[pre..pre + per];
    let mut m = per;
    for cand in 1..=per {
        if per % cand == 0 && (0..per).all(|i| block[i] == block[i % cand]) {
            m = cand;
            break;
        }
    }
    let mut n = pre;
    while n > 0 && elements[n - 1] == elements[n - 1 + m] {
        n -= 1;
    }
    (n, m)
}

/// Checks a detected period: replaying its transforms maps the state after
/// step `pre` to a multiple of itself by a unit.
pub fn verify_period(
    start: &[FieldElement],
    period: &[ExpansionStep],
    expected: &[FieldElement],
) -> Result<FieldElement> {
    let mut cur = start.to_vec();
    for s in period {
        cur = s.transform.apply_field(&cur);
    }
    if cur != expected {
        return Err(Error::Degenerate("period replay diverged".into()));
    }
    let c = proportional(start, &cur)?
        .ok_or_else(|| Error::Degenerate("period states are not proportional".into()))?;
    let n = c.norm();
    if !(n.is_integer() && n.numer().abs() == BigInt::one()) {
        return Err(Error::Degenerate(format!("period scalar has norm {n}")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::MinimalPolynomial;
    use proptest::prelude::*;

    #[test]
    fn proportional_examples() {
        let k = MinimalPolynomial::parse("x^3-4").unwrap();
        let a = FieldElement::generator(&k);
        let one = FieldElement::one(&k);
        let v = vec![one.clone(), a.clone()];
        assert_eq!(proportional(&v, &v).unwrap(), Some(one.clone()));
        let w = vec![one.clone(), &a + &one];
        assert_eq!(proportional(&v, &w).unwrap(), None);
        let z = vec![FieldElement::zero(&k), FieldElement::zero(&k)];
        assert_eq!(proportional(&z, &v), Err(Error::ZeroVector));
    }

    #[test]
    fn element_period_shrinks() {
        let e = |v: &[i64]| -> Vec<Element> { v.iter().map(|&x| Element::scalar(x)).collect() };
        assert_eq!(element_period(&e(&[4, 2, 8, 2, 8]), 1, 4), (1, 2));
        assert_eq!(element_period(&e(&[1, 2, 1, 2, 1, 2]), 2, 2), (0, 2));
    }

    proptest! {
        #[test]
        fn canonical_iff_proportional(
            a in proptest::collection::vec(-20i64..20, 3),
            b in proptest::collection::vec(-20i64..20, 3),
            c in proptest::collection::vec(-5i64..5, 3),
            same in any::<bool>(),
        ) {
            let k = MinimalPolynomial::parse("x^3-3x-1").unwrap();
            let el = |v: &[i64]| FieldElement::from_poly(&k, &crate::poly::QPoly::from_ints(v.iter().copied()));
            let u = vec![el(&a), el(&b), el(&[1, 1])];
            let scalar = el(&c);
            prop_assume!(!scalar.is_zero());
            let v: Vec<FieldElement> = if same {
                u.iter().map(|x| x * &scalar).collect()
            } else {
                vec![el(&b), el(&a), el(&[1, 1])]
            };
            let p = proportional(&u, &v).unwrap().is_some();
            prop_assert_eq!(p, canonical(&u).unwrap() == canonical(&v).unwrap());
            if same { prop_assert!(p); }
        }
    }
}
