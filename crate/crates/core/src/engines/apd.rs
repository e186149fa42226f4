//! The heuristic APD algorithm: each element minimizes the absolute
//! Markov–Davenport value over a floor-bounded box.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{normalization_step, Algorithm, Element, ExpansionStep, RunLimits, Runner, StepOutcome};
use crate::conjugates::{apply_transform, ConjugateSystem, SystemState};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nfield::{compare_real_capped, floor_quotient};
use crate::periodicity::Expansion;

/// Largest candidate box searched in one step.
pub const MAX_CANDIDATES: u64 = 2_000_000;

const PARALLEL_THRESHOLD: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApdOptions {
    /// Take `(0, …, 0)` whenever every floor vanishes, not only at Step 1.
    /// Off, such a state is reported as degenerate.
    pub repeat_exception: bool,
}

impl Default for ApdOptions {
    fn default() -> Self {
        ApdOptions {
            repeat_exception: true,
        }
    }
}

impl ApdOptions {
    /// The exception only at Step 1.
    pub fn strict() -> Self {
        ApdOptions {
            repeat_exception: false,
        }
    }
}

/// `(x_1, …, x_d) ↦ (x_2 - a_2 x_d, …, x_{d-1} - a_{d-1} x_d, x_d, x_1 - a_1 x_d)`.
pub fn md_apd_transform(a: &[BigInt]) -> IntegerMatrix {
    let d = a.len() + 1;
    let mut rows = vec![vec![BigInt::zero(); d]; d];
    for i in 0..d.saturating_sub(2) {
        rows[i][i + 1] = BigInt::from(1);
        rows[i][d - 1] = -&a[i + 1];
    }
    rows[d - 2][d - 1] = BigInt::from(1);
    rows[d - 1][0] = BigInt::from(1);
    rows[d - 1][d - 1] -= &a[0];
    IntegerMatrix::new(rows).expect("square")
}

fn require_dim(state: &SystemState, d: usize) -> Result<()> {
    if state.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: state.dim(),
        });
    }
    Ok(())
}

fn floors(state: &SystemState, cap: u32) -> Result<Vec<BigInt>> {
    let x = state.coords();
    let d = x.len();
    let e = state.primary();
    x[..d - 1]
        .iter()
        .map(|xi| floor_quotient(xi, &x[d - 1], e, cap))
        .collect()
}

/// Step 0: `x_i ↦ x_i - ⌊x_i / x_d⌋ x_d` for `i < d`.
pub fn md_apd_step0(state: &SystemState, cap: u32) -> Result<(ExpansionStep, SystemState)> {
    let d = state.dim();
    let last = &state.coords()[d - 1];
    if last.is_zero() || last.sign_real_capped(state.primary(), cap)? != Ordering::Greater {
        return Err(Error::Precondition("last coordinate must be positive".into()));
    }
    let f = floors(state, cap)?;
    let mut t = IntegerMatrix::identity(d).rows().to_vec();
    for (i, fi) in f.iter().enumerate() {
        t[i][d - 1] = -fi;
    }
    let t = IntegerMatrix::new(t)?;
    let next = apply_transform(state, &t)?;
    Ok((normalization_step(0, Element::Tuple(f), t), next))
}

pub fn apd_step0(state: &SystemState, cap: u32) -> Result<(ExpansionStep, SystemState)> {
    require_dim(state, 3)?;
    md_apd_step0(state, cap)
}

/// Mixed-radix decoding, first coordinate most significant.
fn decode(mut idx: u64, f: &[u64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len()];
    for i in (0..f.len()).rev() {
        let r = f[i] + 1;
        out[i] = BigInt::from(idx % r);
        idx /= r;
    }
    out
}

struct Box_ {
    bounds: Vec<u64>,
    size: u64,
    exception: bool,
}

fn candidate_box(
    state: &SystemState,
    index: usize,
    options: &ApdOptions,
    cap: u32,
) -> Result<Box_> {
    let f = floors(state, cap)?;
    if f.iter().any(|v| v.is_negative()) {
        return Err(Error::Degenerate(format!(
            "negative coordinate ratio at step {index}"
        )));
    }
    let mut size: u64 = 1;
    let mut bounds = Vec::with_capacity(f.len());
    for v in &f {
        let b = v
            .to_u64()
            .filter(|b| *b < MAX_CANDIDATES)
            .ok_or_else(|| too_many(index))?;
        size = size.checked_mul(b + 1).ok_or_else(|| too_many(index))?;
        if size > MAX_CANDIDATES {
            return Err(too_many(index));
        }
        bounds.push(b);
    }
    let exception = size == 1;
    if exception && index != 1 && !options.repeat_exception {
        return Err(Error::Degenerate(format!(
            "all floors vanish at step {index}, no admissible element"
        )));
    }
    Ok(Box_ {
        bounds,
        size,
        exception,
    })
}

fn too_many(index: usize) -> Error {
    Error::Precondition(format!(
        "candidate box at step {index} exceeds {MAX_CANDIDATES} points"
    ))
}

/// The admissible elements at step `index`, in lexicographic order.
pub fn md_apd_candidates(
    state: &SystemState,
    index: usize,
    options: &ApdOptions,
    cap: u32,
) -> Result<Vec<Vec<BigInt>>> {
    let b = candidate_box(state, index, options, cap)?;
    if b.exception {
        return Ok(vec![decode(0, &b.bounds)]);
    }
    Ok((1..b.size).map(|i| decode(i, &b.bounds)).collect())
}

pub fn apd_candidates(
    state: &SystemState,
    index: usize,
    options: &ApdOptions,
    cap: u32,
) -> Result<Vec<Vec<BigInt>>> {
    require_dim(state, 3)?;
    md_apd_candidates(state, index, options, cap)
}

/// `|χ̂(a_1, …, a_{d-1}, 1)|` on the current conjugate vectors.
pub fn apd_value(state: &SystemState, a: &[BigInt]) -> Result<BigRational> {
    let mut x = a.to_vec();
    x.push(BigInt::from(1));
    Ok(state.chi_hat(&x)?.abs())
}

/// Running minimum: value, first index attaining it, number attaining it.
type Best = Option<(BigRational, u64, u64)>;

fn merge(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(match a.0.cmp(&b.0) {
            Ordering::Less => a,
            Ordering::Greater => b,
            Ordering::Equal => (a.0, a.1.min(b.1), a.2 + b.2),
        }),
    }
}

fn minimize(state: &SystemState, b: &Box_) -> Result<(Vec<BigInt>, bool)> {
    if b.exception {
        return Ok((decode(0, &b.bounds), false));
    }
    let eval = |i: u64| -> Result<Best> {
        let a = decode(i, &b.bounds);
        Ok(Some((apd_value(state, &a)?, i, 1)))
    };
    let best = if b.size > PARALLEL_THRESHOLD {
        (1..b.size)
            .into_par_iter()
            .map(eval)
            .try_reduce(|| None, |x, y| Ok(merge(x, y)))?
    } else {
        let mut acc = None;
        for i in 1..b.size {
            acc = merge(acc, eval(i)?);
        }
        acc
    };
    let (_, idx, count) = best.expect("nonempty box");
    Ok((decode(idx, &b.bounds), count > 1))
}

/// One step: minimize over the box, then apply `T_i`.
pub fn md_apd_step(
    state: &SystemState,
    index: usize,
    options: &ApdOptions,
    cap: u32,
) -> Result<StepOutcome> {
    let d = state.dim();
    if state.coords()[d - 1].is_zero() {
        return Ok(StepOutcome::Terminated);
    }
    let b = candidate_box(state, index, options, cap)?;
    let (a, tie) = minimize(state, &b)?;
    let t = md_apd_transform(&a);
    let next = apply_transform(state, &t)?;
    Ok(StepOutcome::Step {
        step: ExpansionStep {
            index,
            element: Element::Tuple(a),
            transform: t,
        },
        state: next,
        tie,
    })
}

pub fn apd_step(
    state: &SystemState,
    index: usize,
    options: &ApdOptions,
    cap: u32,
) -> Result<StepOutcome> {
    require_dim(state, 3)?;
    md_apd_step(state, index, options, cap)
}

/// Whether `x_{d-1}` strictly dominates the other coordinates.
fn dominance(state: &SystemState, cap: u32) -> Result<bool> {
    let x = state.coords();
    let d = x.len();
    let e = state.primary();
    for (j, xj) in x.iter().enumerate() {
        if j != d - 2 && compare_real_capped(&x[d - 2], xj, e, cap)? != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

fn run(
    system: &ConjugateSystem,
    options: &ApdOptions,
    limits: &RunLimits,
    algorithm: Algorithm,
) -> Result<Expansion> {
    limits.validate()?;
    let cap = limits.max_precision_bits;
    let d = system.dim();
    let mut state = system.initial_state();
    let mut normalization = Vec::new();
    if state.coords()[d - 1].sign_real_capped(state.primary(), cap)? == Ordering::Less {
        let t = IntegerMatrix::identity(d).neg();
        state = apply_transform(&state, &t)?;
        normalization.push(normalization_step(0, Element::Matrix(t.clone()), t));
    }
    let (s0, state) = md_apd_step0(&state, cap)?;
    normalization.push(s0);
    let runner = Runner {
        algorithm,
        input: system.to_string(),
        normalization,
        register_start: false,
    };
    runner.run(
        state,
        limits,
        |s, i| md_apd_step(s, i, options, cap),
        |s, i| if i >= 2 && d >= 3 { dominance(s, cap) } else { Ok(true) },
    )
}

/// APD expansion of a cubic system, Step 0 included as normalization.
pub fn apd_expand(
    system: &ConjugateSystem,
    options: &ApdOptions,
    limits: &RunLimits,
) -> Result<Expansion> {
    if system.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: system.dim(),
        });
    }
    run(system, options, limits, Algorithm::Apd)
}

/// APD expansion in any dimension `d ≥ 2`.
pub fn md_apd_expand(
    system: &ConjugateSystem,
    options: &ApdOptions,
    limits: &RunLimits,
) -> Result<Expansion> {
    run(system, options, limits, Algorithm::MdApd)
}
