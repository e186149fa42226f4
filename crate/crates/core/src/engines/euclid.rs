use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Algorithm, Element, ExpansionStep, RunLimits, Runner, StepOutcome, VectorState};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nfield::{floor_quotient, EmbeddingIndex, FieldElement};
use crate::periodicity::{Expansion, Status};

/// `(p, q) ↦ (q, p - a q)`.
pub fn euclid_step_matrix(a: &BigInt) -> IntegerMatrix {
    IntegerMatrix::new(vec![
        vec![BigInt::zero(), BigInt::from(1)],
        vec![BigInt::from(1), -a],
    ])
    .expect("2x2")
}

/// Regular continued fraction of `p / q` under the real embedding `e`.
pub fn euclid_expand(
    p: &FieldElement,
    q: &FieldElement,
    e: EmbeddingIndex,
    limits: &RunLimits,
) -> Result<Expansion> {
    let cap = limits.max_precision_bits;
    if q.sign_real_capped(e, cap)?.is_le() {
        return Err(Error::Precondition("q0 must be positive".into()));
    }
    let runner = Runner {
        algorithm: Algorithm::Euclid,
        input: format!("({p}, {q}) mod {}", p.field()),
        normalization: Vec::new(),
        register_start: true,
    };
    let start = VectorState {
        coords: vec![p.clone(), q.clone()],
    };
    runner.run(
        start,
        limits,
        |s, i| {
            let (p, q) = (&s.coords[0], &s.coords[1]);
            if q.is_zero() {
                return Ok(StepOutcome::Terminated);
            }
            let a = floor_quotient(p, q, e, cap)?;
            let next = vec![q.clone(), p - &q.mul_int(&a)];
            Ok(StepOutcome::Step {
                step: ExpansionStep {
                    index: i,
                    element: Element::scalar(a.clone()),
                    transform: euclid_step_matrix(&a),
                },
                state: VectorState { coords: next },
                tie: false,
            })
        },
        |_, _| Ok(true),
    )
}

/// Euclid on a rational pair; always terminates.
pub fn euclid_expand_rational(
    p: &BigRational,
    q: &BigRational,
    limits: &RunLimits,
) -> Result<Expansion> {
    if !q.is_positive() {
        return Err(Error::Precondition("q0 must be positive".into()));
    }
    let input = format!("({p}, {q})");
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut steps = Vec::new();
    let mut status = Status::Inconclusive;
    for i in 1..=limits.max_steps {
        if q.is_zero() {
            status = Status::Terminated;
            break;
        }
        let a = (&p / &q).floor().to_integer();
        let r = &p - &q * BigRational::from_integer(a.clone());
        steps.push(ExpansionStep {
            index: i,
            element: Element::scalar(a.clone()),
            transform: euclid_step_matrix(&a),
        });
        p = std::mem::replace(&mut q, r);
    }
    if status == Status::Inconclusive && q.is_zero() {
        status = Status::Terminated;
    }
    Ok(Expansion {
        algorithm: Algorithm::Euclid,
        input,
        normalization: Vec::new(),
        steps,
        preperiod: None,
        period: None,
        status,
        tie_flags: Vec::new(),
        condition_flags: Vec::new(),
        element_preperiod: None,
        element_period: None,
        period_scalar: None,
        final_state: vec![p.to_string(), q.to_string()],
    })
}

/// Up to `max` partial quotients of `num / den` (integers, `den > 0`).
pub fn regular_cf(num: &BigInt, den: &BigInt, max: usize) -> Vec<BigInt> {
    let (mut p, mut q) = (num.clone(), den.clone());
    let mut out = Vec::new();
    while !q.is_zero() && out.len() < max {
        let (a, r) = p.div_mod_floor(&q);
        out.push(a);
        p = std::mem::replace(&mut q, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfield::MinimalPolynomial;

    fn ints(e: &Expansion) -> Vec<i64> {
        e.steps
            .iter()
            .map(|s| match &s.element {
                Element::Tuple(v) => i64::try_from(&v[0]).unwrap(),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn rational_pairs_terminate() {
        let q = |n: i64| BigRational::from_integer(n.into());
        let e = euclid_expand_rational(&q(21), &q(15), &RunLimits::default()).unwrap();
        assert_eq!(ints(&e), vec![1, 2, 2]);
        assert_eq!(e.status, Status::Terminated);
        assert_eq!(e.final_state, vec!["3", "0"]);
        let e = euclid_expand_rational(&q(7), &q(1), &RunLimits::default()).unwrap();
        assert_eq!(ints(&e), vec![7]);
    }

    #[test]
    fn two_root_five() {
        let k = MinimalPolynomial::parse("x^2-20").unwrap();
        let e = k.real_embedding(1).unwrap();
        let x = FieldElement::generator(&k);
        let exp = euclid_expand(&x, &FieldElement::one(&k), e, &RunLimits::default()).unwrap();
        assert_eq!(ints(&exp), vec![4, 2, 8]);
        assert_eq!((exp.preperiod, exp.period), (Some(1), Some(2)));
        assert_eq!((exp.element_preperiod, exp.element_period), (Some(1), Some(2)));
    }

    #[test]
    fn integer_cf() {
        let v = regular_cf(&BigInt::from(355), &BigInt::from(113), 10);
        assert_eq!(v, vec![3.into(), 7.into(), 16.into()]);
    }
}
