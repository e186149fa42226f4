use num_bigint::BigInt;

use super::{Algorithm, Element, ExpansionStep, RunLimits, Runner, StepOutcome, VectorState};
use crate::conjugates::{apply_transform, ConjugateSystem, SystemState};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nfield::{floor_quotient, EmbeddingIndex, FieldElement};
use crate::periodicity::Expansion;

/// `(x, y, z) ↦ (y, z - b y, x - a y)` with `a = ⌊x/y⌋`, `b = ⌊z/y⌋`.
pub fn jacobi_perron_transform(a: &BigInt, b: &BigInt) -> IntegerMatrix {
    let z = BigInt::from(0);
    let o = BigInt::from(1);
    IntegerMatrix::new(vec![
        vec![z.clone(), o.clone(), z.clone()],
        vec![z.clone(), -b, o.clone()],
        vec![o, -a, z],
    ])
    .expect("3x3")
}

/// The element `(⌊x/y⌋, ⌊z/y⌋)` and its transform, or `None` when `y = 0`.
fn jp_element(
    v: &[FieldElement],
    e: EmbeddingIndex,
    cap: u32,
) -> Result<Option<(BigInt, BigInt, IntegerMatrix)>> {
    if v.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: v.len(),
        });
    }
    if v[1].is_zero() {
        return Ok(None);
    }
    let a = floor_quotient(&v[0], &v[1], e, cap)?;
    let b = floor_quotient(&v[2], &v[1], e, cap)?;
    let t = jacobi_perron_transform(&a, &b);
    Ok(Some((a, b, t)))
}

/// One Jacobi–Perron step on a conjugate system.
pub fn jacobi_perron_step(state: &SystemState, index: usize, cap: u32) -> Result<StepOutcome> {
    let Some((a, b, t)) = jp_element(state.coords(), state.primary(), cap)? else {
        return Ok(StepOutcome::Terminated);
    };
    let next = apply_transform(state, &t)?;
    Ok(StepOutcome::Step {
        step: ExpansionStep {
            index,
            element: Element::pair(a, b),
            transform: t,
        },
        state: next,
        tie: false,
    })
}

/// Jacobi–Perron expansion of the primary vector of `system`.
pub fn jacobi_perron_expand(system: &ConjugateSystem, limits: &RunLimits) -> Result<Expansion> {
    if system.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: system.dim(),
        });
    }
    let cap = limits.max_precision_bits;
    let runner = Runner {
        algorithm: Algorithm::JacobiPerron,
        input: system.to_string(),
        normalization: Vec::new(),
        register_start: true,
    };
    runner.run(
        system.initial_state(),
        limits,
        |s, i| jacobi_perron_step(s, i, cap),
        |_, _| Ok(true),
    )
}

/// Jacobi–Perron on an explicit triple, which may be rational.
pub fn jacobi_perron_expand_vector(
    v: &[FieldElement],
    e: EmbeddingIndex,
    limits: &RunLimits,
) -> Result<Expansion> {
    let cap = limits.max_precision_bits;
    let runner = Runner {
        algorithm: Algorithm::JacobiPerron,
        input: format!(
            "({})",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        ),
        normalization: Vec::new(),
        register_start: true,
    };
    let start = VectorState { coords: v.to_vec() };
    runner.run(
        start,
        limits,
        |s, i| {
            let Some((a, b, t)) = jp_element(&s.coords, e, cap)? else {
                return Ok(StepOutcome::Terminated);
            };
            let coords = t.apply_field(&s.coords);
            Ok(StepOutcome::Step {
                step: ExpansionStep {
                    index: i,
                    element: Element::pair(a, b),
                    transform: t,
                },
                state: VectorState { coords },
                tie: false,
            })
        },
        |_, _| Ok(true),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugates::basis_with_last;
    use crate::nfield::MinimalPolynomial;
    use crate::periodicity::Status;
    use crate::poly::QPoly;

    fn pairs(e: &Expansion) -> Vec<(i64, i64)> {
        e.steps
            .iter()
            .map(|s| {
                let t = s.element.tuple().unwrap();
                (i64::try_from(&t[0]).unwrap(), i64::try_from(&t[1]).unwrap())
            })
            .collect()
    }

    #[test]
    fn ex_ok_is_periodic() {
        let p = MinimalPolynomial::parse("x^3+2x^2+x+4").unwrap();
        let sys = ConjugateSystem::new(&p, basis_with_last(3, QPoly::from_ints([0, 1, 1]))).unwrap();
        let e = jacobi_perron_expand(&sys, &RunLimits::default()).unwrap();
        assert_eq!(e.status, Status::Periodic);
        assert_eq!((e.preperiod, e.period), (Some(6), Some(2)));
        assert_eq!(
            pairs(&e),
            vec![(-1, -2), (1, 0), (1, 0), (1, 0), (2, 2), (6, 4), (3, 1), (7, 1)]
        );
    }

    #[test]
    fn integer_triple_terminates() {
        let k = MinimalPolynomial::parse("x^2-2").unwrap();
        let v: Vec<FieldElement> = [2, 1, 3].iter().map(|&n| FieldElement::from_int(&k, n)).collect();
        let e = jacobi_perron_expand_vector(&v, k.real_embedding(0).unwrap(), &RunLimits::default())
            .unwrap();
        assert_eq!(pairs(&e), vec![(2, 3)]);
        assert_eq!(e.status, Status::Terminated);
        assert_eq!(e.final_state, vec!["1", "0", "0"]);
    }
}
