//! The sin² algorithm for totally real cubics.
//!
//! Each step applies a shear `N_{α,β,γ}` (or `N₀`) chosen by the plane-angle
//! functional on the transformed conjugate vectors, then the permutation
//! sorting the primary vector decreasingly. Candidate values are algebraic,
//! so comparisons refine only the candidates still in contention and declare
//! a tie at the precision cap.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::apd::MAX_CANDIDATES;
use super::{normalization_step, Algorithm, Element, ExpansionStep, RunLimits, Runner, StepOutcome};
use crate::conjugates::{apply_transform, sin2_planes, ConjugateSystem, SystemState};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::IntegerMatrix;
use crate::nfield::{compare_real_capped, floor_quotient, EmbeddingIndex, FieldElement};
use crate::periodicity::Expansion;

/// Pre-pass iterations before the input is rejected.
const PREPASS_LIMIT: usize = 1000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sin2Objective {
    /// Smallest sin², the literal reading; runs rarely recur.
    Minimize,
    /// Largest sin²; runs recur quickly on every cubic tried.
    #[default]
    Maximize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sin2Options {
    pub objective: Sin2Objective,
    /// Admit `N_{0,0,0}`, which makes no progress and stalls the run.
    pub include_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sin2Candidate {
    /// `(x, y, z) ↦ (x - αz - γ(y - βz), y - βz, z)`.
    Shear {
        alpha: BigInt,
        beta: BigInt,
        gamma: BigInt,
    },
    /// `(x, y, z) ↦ (x - y, y, z - (x - y))`.
    N0,
}

impl Sin2Candidate {
    pub fn matrix(&self) -> IntegerMatrix {
        match self {
            Sin2Candidate::Shear { alpha, beta, gamma } => {
                let one = BigInt::from(1);
                let zero = BigInt::zero();
                IntegerMatrix::new(vec![
                    vec![one.clone(), -gamma, gamma * beta - alpha],
                    vec![zero.clone(), one.clone(), -beta],
                    vec![zero.clone(), zero, one],
                ])
                .expect("3x3")
            }
            Sin2Candidate::N0 => IntegerMatrix::from_i64(&[&[1, -1, 0], &[0, 1, 0], &[-1, 1, 1]]),
        }
    }
}

impl fmt::Display for Sin2Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sin2Candidate::Shear { alpha, beta, gamma } => write!(f, "N({alpha},{beta},{gamma})"),
            Sin2Candidate::N0 => f.write_str("N0"),
        }
    }
}

fn require_cubic(state: &SystemState) -> Result<()> {
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: state.dim(),
        });
    }
    let field = state.system().field();
    if !field.is_totally_real() {
        let (s, t) = field.signature();
        return Err(Error::Precondition(format!(
            "sin² needs a totally real cubic, signature is ({s}, {t})"
        )));
    }
    Ok(())
}

fn other_embeddings(state: &SystemState) -> Vec<EmbeddingIndex> {
    let p = state.primary().index;
    state
        .system()
        .field()
        .embeddings()
        .into_iter()
        .filter(|e| e.index != p)
        .collect()
}

fn gt(a: &FieldElement, b: &FieldElement, e: EmbeddingIndex, cap: u32) -> Result<bool> {
    Ok(compare_real_capped(a, b, e, cap)? == Ordering::Greater)
}

/// `x > y > z > 0` and every other conjugate vector has coordinates of both signs.
fn input_conditions(state: &SystemState, cap: u32) -> Result<bool> {
    let x = state.coords();
    let e = state.primary();
    let zero = FieldElement::zero(state.system().field());
    if !(gt(&x[0], &x[1], e, cap)? && gt(&x[1], &x[2], e, cap)? && gt(&x[2], &zero, e, cap)?) {
        return Ok(false);
    }
    for k in other_embeddings(state) {
        let mut pos = false;
        let mut neg = false;
        for c in x {
            match c.sign_real_capped(k, cap)? {
                Ordering::Greater => pos = true,
                Ordering::Less => neg = true,
                Ordering::Equal => {}
            }
        }
        if !(pos && neg) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Permutation matrix sorting `v` decreasingly under `e` (stable).
fn sorting_permutation(v: &[FieldElement], e: EmbeddingIndex, cap: u32) -> Result<IntegerMatrix> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    // insertion sort keeps comparisons fallible and few
    for i in 1..n {
        let mut j = i;
        while j > 0 && gt(&v[idx[j]], &v[idx[j - 1]], e, cap)? {
            idx.swap(j, j - 1);
            j -= 1;
        }
    }
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(i64::from(j == idx[i])))
                .collect()
        })
        .collect();
    IntegerMatrix::new(rows)
}

/// Brings the primary vector to `x > y > z > 0` with mixed-sign conjugates.
///
/// A shear against the first positive coordinate makes every coordinate
/// nonnegative; then sorting alternates with `x ↦ x - ⌊x/y⌋ y` until the
/// conditions hold.
pub fn sin2_prepass(state: &SystemState, cap: u32) -> Result<(Vec<ExpansionStep>, SystemState)> {
    require_cubic(state)?;
    let e = state.primary();
    let mut steps = Vec::new();
    let mut state = state.clone();
    let push = |t: IntegerMatrix, state: &mut SystemState, steps: &mut Vec<ExpansionStep>| -> Result<()> {
        if !t.is_identity() {
            *state = apply_transform(state, &t)?;
            steps.push(normalization_step(0, Element::Matrix(t.clone()), t));
        }
        Ok(())
    };
    let signs: Vec<Ordering> = state
        .coords()
        .iter()
        .map(|c| c.sign_real_capped(e, cap))
        .collect::<Result<_>>()?;
    let w = match signs.iter().position(|s| s.is_gt()) {
        Some(w) => w,
        None => {
            push(IntegerMatrix::identity(3).neg(), &mut state, &mut steps)?;
            signs
                .iter()
                .position(|s| s.is_lt())
                .ok_or(Error::ZeroVector)?
        }
    };
    let mut t = IntegerMatrix::identity(3).rows().to_vec();
    for i in 0..3 {
        if i != w {
            t[i][w] = -floor_quotient(&state.coords()[i], &state.coords()[w], e, cap)?;
        }
    }
    push(IntegerMatrix::new(t)?, &mut state, &mut steps)?;
    for _ in 0..PREPASS_LIMIT {
        let p = sorting_permutation(state.coords(), e, cap)?;
        push(p, &mut state, &mut steps)?;
        if input_conditions(&state, cap)? {
            return Ok((steps, state));
        }
        let x = state.coords();
        if x[1].is_zero() {
            return Err(Error::Degenerate("pre-pass reached a zero coordinate".into()));
        }
        let f = floor_quotient(&x[0], &x[1], e, cap)?;
        let mut t = IntegerMatrix::identity(3).rows().to_vec();
        t[0][1] = -f;
        push(IntegerMatrix::new(t)?, &mut state, &mut steps)?;
    }
    Err(Error::Precondition(format!(
        "input conditions not reached after {PREPASS_LIMIT} pre-pass iterations"
    )))
}

/// The candidate transforms at the current state, `N₀` last.
pub fn sin2_candidates(
    state: &SystemState,
    options: &Sin2Options,
    cap: u32,
) -> Result<Vec<Sin2Candidate>> {
    require_cubic(state)?;
    let x = state.coords();
    let e = state.primary();
    let fa = floor_quotient(&x[0], &x[2], e, cap)?;
    let fb = floor_quotient(&x[1], &x[2], e, cap)?;
    if fa.is_negative() || fb.is_negative() {
        return Err(Error::Precondition("primary coordinates must be positive".into()));
    }
    let mut out = Vec::new();
    let mut alpha = BigInt::zero();
    while alpha <= fa {
        let xa = &x[0] - &x[2].mul_int(&alpha);
        let mut beta = BigInt::zero();
        while beta <= fb {
            let yb = &x[1] - &x[2].mul_int(&beta);
            let fg = if yb.is_zero() {
                BigInt::zero()
            } else {
                floor_quotient(&xa, &yb, e, cap)?
            };
            let mut gamma = BigInt::zero();
            while gamma <= fg {
                if options.include_identity || !(alpha.is_zero() && beta.is_zero() && gamma.is_zero()) {
                    out.push(Sin2Candidate::Shear {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        gamma: gamma.clone(),
                    });
                    if out.len() as u64 > MAX_CANDIDATES {
                        return Err(Error::Precondition(format!(
                            "sin² candidate grid exceeds {MAX_CANDIDATES} points"
                        )));
                    }
                }
                gamma += 1;
            }
            beta += 1;
        }
        alpha += 1;
    }
    let d = &x[0] - &x[1];
    let zero = FieldElement::zero(state.system().field());
    if gt(&x[2], &d, e, cap)? && gt(&d, &zero, e, cap)? {
        out.push(Sin2Candidate::N0);
    }
    Ok(out)
}

/// Real conjugate vectors `[ξ, ν, μ]`, primary first.
fn real_vectors(state: &SystemState, prec: u32) -> Result<Vec<Vec<Interval>>> {
    let all = state.conjugate_vectors(prec)?;
    let p = state.primary().index;
    let mut out = vec![all[p].iter().map(|z| z.re.clone()).collect::<Vec<_>>()];
    for (k, v) in all.iter().enumerate() {
        if k != p {
            out.push(v.iter().map(|z| z.re.clone()).collect());
        }
    }
    Ok(out)
}

fn apply_interval(m: &IntegerMatrix, v: &[Interval], prec: u32) -> Vec<Interval> {
    m.rows()
        .iter()
        .map(|row| {
            let mut acc = Interval::zero(prec);
            for (c, x) in row.iter().zip(v) {
                if !c.is_zero() {
                    acc = &acc + &x.mul_int(c);
                }
            }
            acc
        })
        .collect()
}

fn evaluate_on(vecs: &[Vec<Interval>], m: &IntegerMatrix, prec: u32) -> Option<Interval> {
    let w: Vec<Vec<Interval>> = vecs.iter().map(|v| apply_interval(m, v, prec)).collect();
    sin2_planes(&w[0], &w[1], &w[2]).ok()
}

/// Certified sin² after applying `candidate`; `None` when the enclosure is
/// too wide at this precision.
pub fn sin2_evaluate(
    state: &SystemState,
    candidate: &Sin2Candidate,
    prec: u32,
) -> Result<Option<Interval>> {
    require_cubic(state)?;
    let vecs = real_vectors(state, prec)?;
    Ok(evaluate_on(&vecs, &candidate.matrix(), prec))
}

fn start_precision(state: &SystemState) -> u32 {
    let bits = state.accumulated().max_abs_entry().bits() as u32;
    let mut prec = 64;
    while prec < 2 * bits + 64 {
        prec *= 2;
    }
    prec
}

/// Index of the optimal candidate and whether it was a declared tie.
fn select(
    state: &SystemState,
    cands: &[Sin2Candidate],
    objective: Sin2Objective,
    cap: u32,
) -> Result<(usize, bool)> {
    let mats: Vec<IntegerMatrix> = cands.iter().map(|c| c.matrix()).collect();
    let mut live: Vec<usize> = (0..cands.len()).collect();
    let mut prec = start_precision(state).min(cap.max(64));
    loop {
        let vecs = real_vectors(state, prec)?;
        let scores: Vec<Option<Interval>> = live
            .par_iter()
            .map(|&i| {
                evaluate_on(&vecs, &mats[i], prec).map(|v| match objective {
                    Sin2Objective::Maximize => v,
                    Sin2Objective::Minimize => -&v,
                })
            })
            .collect();
        let best_lo = scores.iter().flatten().map(|v| v.lower().clone()).max();
        live = live
            .iter()
            .zip(&scores)
            .filter(|(_, s)| match (s, &best_lo) {
                (Some(v), Some(lo)) => v.upper() >= lo,
                _ => true,
            })
            .map(|(&i, _)| i)
            .collect();
        if live.len() == 1 {
            return Ok((live[0], false));
        }
        if prec >= cap {
            return Ok((live[0], true));
        }
        prec = (prec * 2).min(cap);
    }
}

/// One step: choose `M`, sort, emit `Φ = T M`.
pub fn sin2_step(
    state: &SystemState,
    index: usize,
    options: &Sin2Options,
    cap: u32,
) -> Result<StepOutcome> {
    require_cubic(state)?;
    if state.coords()[2].is_zero() {
        return Ok(StepOutcome::Terminated);
    }
    if !input_conditions(state, cap)? {
        return Err(Error::Precondition(format!(
            "sin² input conditions fail before step {index}"
        )));
    }
    let cands = sin2_candidates(state, options, cap)?;
    if cands.is_empty() {
        return Err(Error::Degenerate(format!("no sin² candidate at step {index}")));
    }
    let (k, tie) = select(state, &cands, options.objective, cap)?;
    let m = cands[k].matrix();
    let moved = m.apply_field(state.coords());
    let t = sorting_permutation(&moved, state.primary(), cap)?;
    let phi = &t * &m;
    let next = apply_transform(state, &phi)?;
    Ok(StepOutcome::Step {
        step: ExpansionStep {
            index,
            element: Element::Matrix(phi.clone()),
            transform: phi,
        },
        state: next,
        tie,
    })
}

/// Pre-pass, then sin² steps until a period, termination or the limit.
pub fn sin2_expand(
    system: &ConjugateSystem,
    options: &Sin2Options,
    limits: &RunLimits,
) -> Result<Expansion> {
    limits.validate()?;
    let cap = limits.max_precision_bits;
    let (normalization, state) = sin2_prepass(&system.initial_state(), cap)?;
    let runner = Runner {
        algorithm: Algorithm::Sin2,
        input: system.to_string(),
        normalization,
        register_start: true,
    };
    runner.run(
        state,
        limits,
        |s, i| sin2_step(s, i, options, cap),
        |_, _| Ok(true),
    )
}
