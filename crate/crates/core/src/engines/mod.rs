//! Expansion algorithms as step machines over exact states.

mod apd;
mod euclid;
mod jacobi_perron;
mod sin2;
mod stats;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::conjugates::SystemState;
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::nfield::{max_bits, FieldElement};
use crate::periodicity::{element_period, verify_period, Expansion, PeriodDetector, Status};

pub use apd::{
    apd_candidates, apd_expand, ApdOptions, apd_step, apd_step0, apd_value, md_apd_candidates, md_apd_expand,
    md_apd_step, md_apd_step0, md_apd_transform, MAX_CANDIDATES,
};
pub use euclid::{euclid_expand, euclid_expand_rational, euclid_step_matrix, regular_cf};
pub use jacobi_perron::{
    jacobi_perron_expand, jacobi_perron_expand_vector, jacobi_perron_step, jacobi_perron_transform,
};
pub use sin2::{
    sin2_candidates, sin2_evaluate, sin2_expand, sin2_prepass, sin2_step, Sin2Candidate,
    Sin2Objective, Sin2Options,
};
pub use stats::{
    empirical_frequencies, frequencies, gauss_kuzmin_expected, monte_carlo_frequencies,
    MonteCarloReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Euclid,
    JacobiPerron,
    Apd,
    MdApd,
    Sin2,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Euclid => "euclid",
            Algorithm::JacobiPerron => "jacobi-perron",
            Algorithm::Apd => "apd",
            Algorithm::MdApd => "md-apd",
            Algorithm::Sin2 => "sin2",
        })
    }
}

/// The element emitted by one step: an integer tuple, or the full step
/// matrix for the sin² algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Tuple(#[serde(with = "crate::serde_util::int_vec")] Vec<BigInt>),
    Matrix(IntegerMatrix),
}

impl Element {
    pub fn scalar(n: impl Into<BigInt>) -> Self {
        Element::Tuple(vec![n.into()])
    }

    pub fn pair(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Element::Tuple(vec![a.into(), b.into()])
    }

    pub fn tuple(&self) -> Option<&[BigInt]> {
        match self {
            Element::Tuple(v) => Some(v),
            Element::Matrix(_) => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Tuple(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Tuple(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", s.join(","))
            }
            Element::Matrix(m) => write!(f, "{m:?}"),
        }
    }
}

/// One emitted element with the unimodular transform applied at that step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionStep {
    pub index: usize,
    pub element: Element,
    pub transform: IntegerMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLimits {
    pub max_steps: usize,
    pub max_precision_bits: u32,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_steps: 500,
            max_precision_bits: max_bits(),
        }
    }
}

impl RunLimits {
    pub fn steps(max_steps: usize) -> Self {
        RunLimits {
            max_steps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 || self.max_precision_bits < 64 {
            return Err(Error::Precondition(
                "limits must allow at least one step and 64 bits".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one step: the emitted step and new state, or termination
/// because the dividing coordinate vanished exactly.
#[derive(Clone, Debug)]
pub enum StepOutcome<S = SystemState> {
    Step {
        step: ExpansionStep,
        state: S,
        tie: bool,
    },
    Terminated,
}

/// Anything with exact coordinates that period detection can index.
pub trait ExactState: Clone {
    fn coords(&self) -> &[FieldElement];
}

impl ExactState for SystemState {
    fn coords(&self) -> &[FieldElement] {
        SystemState::coords(self)
    }
}

/// Bare coordinates, for runs that need no conjugate system.
#[derive(Clone, Debug)]
pub(crate) struct VectorState {
    pub coords: Vec<FieldElement>,
}

impl ExactState for VectorState {
    fn coords(&self) -> &[FieldElement] {
        &self.coords
    }
}

pub(crate) struct Runner {
    pub algorithm: Algorithm,
    pub input: String,
    pub normalization: Vec<ExpansionStep>,
    /// Whether the state before step 1 participates in period detection.
    pub register_start: bool,
}

impl Runner {
    /// Drives `step` until termination, a detected period or the step limit.
    pub fn run<S: ExactState>(
        self,
        start: S,
        limits: &RunLimits,
        mut step: impl FnMut(&S, usize) -> Result<StepOutcome<S>>,
        mut condition: impl FnMut(&S, usize) -> Result<bool>,
    ) -> Result<Expansion> {
        limits.validate()?;
        let mut det = PeriodDetector::new();
        let mut states = vec![start.coords().to_vec()];
        let mut state = start;
        let mut steps: Vec<ExpansionStep> = Vec::new();
        let mut ties = Vec::new();
        let mut flags = Vec::new();
        let mut status = Status::Inconclusive;
        let mut found = None;
        for i in 1..=limits.max_steps {
            if i == 1 && self.register_start {
                det.observe(state.coords(), 0)?;
            }
            if !condition(&state, i)? {
                flags.push(i);
            }
            match step(&state, i)? {
                StepOutcome::Terminated => {
                    status = Status::Terminated;
                    break;
                }
                StepOutcome::Step {
                    step: s,
                    state: next,
                    tie,
                } => {
                    debug_assert!(s.transform.is_unimodular());
                    if tie {
                        ties.push(i);
                    }
                    steps.push(s);
                    state = next;
                    states.push(state.coords().to_vec());
                    if let Some(j) = det.observe(state.coords(), i)? {
                        status = Status::Periodic;
                        found = Some((j, i - j));
                        break;
                    }
                }
            }
        }
        let mut exp = Expansion {
            algorithm: self.algorithm,
            input: self.input,
            normalization: self.normalization,
            steps,
            preperiod: None,
            period: None,
            status,
            tie_flags: ties,
            condition_flags: flags,
            element_preperiod: None,
            element_period: None,
            period_scalar: None,
            final_state: state.coords().iter().map(|c| c.to_string()).collect(),
        };
        if let Some((n, m)) = found {
            let c = verify_period(&states[n], &exp.steps[n..n + m], &states[n + m])?;
            let elems: Vec<Element> = exp.steps.iter().map(|s| s.element.clone()).collect();
            let (en, em) = element_period(&elems, n, m);
            exp.preperiod = Some(n);
            exp.period = Some(m);
            exp.element_preperiod = Some(en);
            exp.element_period = Some(em);
            exp.period_scalar = Some(c.to_string());
        }
        Ok(exp)
    }
}

pub(crate) fn normalization_step(index: usize, element: Element, t: IntegerMatrix) -> ExpansionStep {
    ExpansionStep {
        index,
        element,
        transform: t,
    }
}
