#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;

use hermite_core::conjugates::{apply_transform, chi_agrees, power_basis, build_system};
use hermite_core::engines::{
    apd_value, md_apd_candidates, sin2_candidates, sin2_evaluate, ApdOptions, Sin2Candidate,
    Sin2Objective, Sin2Options,
};
use hermite_core::engines::{euclid_expand, euclid_expand_rational};
use hermite_core::nfield::floor_quotient;
use hermite_core::{
    Algorithm, ConjugateSystem, Element, Expansion, FieldElement, IntegerMatrix,
    MinimalPolynomial, QPoly, RunLimits, Status, SystemState,
};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference continued fraction of π, integer part first.
pub const PI_REFERENCE: [i64; 31] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1,
    4, 2,
];

/// Jacobi–Perron on `(1, ∛4, ∛16)`: the first twelve reference columns.
pub const JP_CBRT4_COLUMNS: [(i64, i64); 12] = [
    (0, 1),
    (1, 1),
    (13, 9),
    (1, 1),
    (6, 2),
    (1, 0),
    (1, 0),
    (3, 2),
    (2, 0),
    (3, 1),
    (4, 1),
    (1, 1),
];

/// APD on the `∛4` system: Step 0, then pre-period steps 1..6 and the period.
pub const APD_CBRT4_STEP0: (i64, i64) = (0, 0);
pub const APD_CBRT4_PRE: [(i64, i64); 6] = [(0, 0), (1, 2), (0, 1), (0, 1), (0, 1), (1, 5)];
pub const APD_CBRT4_PERIOD: [(i64, i64); 4] = [(1, 0), (1, 1), (0, 1), (0, 6)];

pub fn pairs(steps: &[hermite_core::ExpansionStep]) -> Vec<(i64, i64)> {
    steps
        .iter()
        .map(|s| {
            let t = s.element.tuple().expect("tuple element");
            (i64::try_from(&t[0]).unwrap(), i64::try_from(&t[1]).unwrap())
        })
        .collect()
}

pub fn cbrt4_system() -> ConjugateSystem {
    let p = MinimalPolynomial::parse("x^3-4").unwrap();
    ConjugateSystem::new(&p, power_basis(3)).unwrap()
}

pub fn ex_ok_system() -> ConjugateSystem {
    let p = MinimalPolynomial::parse("x^3+2x^2+x+4").unwrap();
    ConjugateSystem::new(
        &p,
        hermite_core::conjugates::basis_with_last(3, QPoly::from_ints([0, 1, 1])),
    )
    .unwrap()
}

/// A random irreducible monic cubic with coefficients in `[-h, h]`.
pub fn random_cubic(rng: &mut ChaCha8Rng, h: i64, totally_real: bool) -> MinimalPolynomial {
    loop {
        let c: Vec<i64> = (0..3).map(|_| rng.random_range(-h..=h)).collect();
        if c[0] == 0 {
            continue;
        }
        let Ok(p) = MinimalPolynomial::new(QPoly::from_ints([c[0], c[1], c[2], 1])) else {
            continue;
        };
        if !totally_real || p.is_totally_real() {
            return p;
        }
    }
}

/// A random cubic system `{1, t, q(t)}` with a random real primary embedding.
pub fn random_cubic_system(rng: &mut ChaCha8Rng) -> ConjugateSystem {
    loop {
        let p = random_cubic(rng, 6, false);
        let q = QPoly::from_ints([
            rng.random_range(-3..=3),
            rng.random_range(-3..=3),
            rng.random_range(1..=2),
        ]);
        let basis = hermite_core::conjugates::basis_with_last(3, q);
        let (s, _) = p.signature();
        let e = p.real_embedding(rng.random_range(0..s)).unwrap();
        if let Ok(sys) = build_system(&p, basis, e) {
            return sys;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const CHECK_PREC: u32 = 128;

fn check_apd_step(state: &SystemState, index: usize, a: &[BigInt], tie: bool) -> Result<(), String> {
    let x = state.coords();
    let e = state.primary();
    let d = x.len();
    for (i, ai) in a.iter().enumerate() {
        let f = floor_quotient(&x[i], &x[d - 1], e, 4096).map_err(|e| e.to_string())?;
        if ai.is_negative() || ai > &f {
            return Err(format!("step {index}: element {ai} outside [0, {f}]"));
        }
    }
    let mut point = a.to_vec();
    point.push(BigInt::from(1));
    if !chi_agrees(state, &point, CHECK_PREC).map_err(|e| e.to_string())? {
        return Err(format!("step {index}: exact and interval χ disagree"));
    }
    let cands = md_apd_candidates(state, index, &ApdOptions::default(), 4096).map_err(|e| e.to_string())?;
    if cands.len() > 1 {
        let chosen = apd_value(state, a).map_err(|e| e.to_string())?;
        let mut attained = 0;
        for c in &cands {
            let v = apd_value(state, c).map_err(|e| e.to_string())?;
            match v.cmp(&chosen) {
                Ordering::Less => return Err(format!("step {index}: {c:?} beats the chosen element")),
                Ordering::Equal => attained += 1,
                Ordering::Greater => {}
            }
        }
        if attained > 1 && !tie {
            return Err(format!("step {index}: unflagged tie"));
        }
    }
    Ok(())
}

fn is_permutation(m: &IntegerMatrix) -> bool {
    m.rows().iter().all(|r| {
        r.iter().filter(|x| !x.is_zero()).count() == 1 && r.iter().all(|x| x.is_zero() || x == &BigInt::from(1))
    })
}

fn check_sin2_step(state: &SystemState, index: usize, phi: &IntegerMatrix, tie: bool) -> Result<(), String> {
    let cands = sin2_candidates(state, &Sin2Options::default(), 4096).map_err(|e| e.to_string())?;
    let chosen: Vec<&Sin2Candidate> = cands
        .iter()
        .filter(|c| is_permutation(&(phi * &c.matrix().inverse().unwrap())))
        .collect();
    let [chosen] = chosen[..] else {
        return Err(format!("step {index}: Φ matches {} candidates", chosen.len()));
    };
    let mut prec = 128;
    loop {
        let eval = |c: &Sin2Candidate| sin2_evaluate(state, c, prec).map_err(|e| e.to_string());
        let mine = eval(chosen)?;
        let others: Option<Vec<_>> = cands.iter().map(eval).collect::<Result<Vec<_>, _>>()?.into_iter().collect();
        if let (Some(mine), Some(others)) = (mine, others) {
            let beaten = others.iter().any(|o| match Sin2Objective::default() {
                Sin2Objective::Maximize => o.lower() > mine.upper(),
                Sin2Objective::Minimize => o.upper() < mine.lower(),
            });
            if beaten && !tie {
                return Err(format!("step {index}: {chosen} is not optimal"));
            }
            return Ok(());
        }
        if prec >= 4096 {
            return Err(format!("step {index}: enclosures never narrowed"));
        }
        prec *= 2;
    }
}

/// Replays `exp` on `system` and checks every step: unimodular transforms,
/// element bounds, minimizer soundness, χ agreement for APD, and that the
/// accumulated product maps the initial vector to each state exactly.
pub fn check_run(system: &ConjugateSystem, exp: &Expansion) -> Result<(), String> {
    let mut state = system.initial_state();
    let mut acc = IntegerMatrix::identity(system.dim());
    let advance = |state: &SystemState, acc: &IntegerMatrix, t: &IntegerMatrix| -> Result<(SystemState, IntegerMatrix), String> {
        if !t.is_unimodular() {
            return Err(format!("transform with determinant {}", t.det()));
        }
        let next = apply_transform(state, t).map_err(|e| e.to_string())?;
        let acc = t * acc;
        if acc.apply_field(system.vector()) != next.coords() || &acc != next.accumulated() {
            return Err("accumulated transform inconsistent with the state".into());
        }
        Ok((next, acc))
    };
    for s in &exp.normalization {
        (state, acc) = advance(&state, &acc, &s.transform)?;
    }
    for s in &exp.steps {
        let tie = exp.tie_flags.contains(&s.index);
        match (exp.algorithm, &s.element) {
            (Algorithm::Apd | Algorithm::MdApd, Element::Tuple(a)) => check_apd_step(&state, s.index, a, tie)?,
            (Algorithm::Sin2, Element::Matrix(phi)) => check_sin2_step(&state, s.index, phi, tie)?,
            (Algorithm::JacobiPerron, Element::Tuple(a)) => {
                let x = state.coords();
                let e = state.primary();
                let fa = floor_quotient(&x[0], &x[1], e, 4096).map_err(|e| e.to_string())?;
                let fb = floor_quotient(&x[2], &x[1], e, 4096).map_err(|e| e.to_string())?;
                if a[..] != [fa, fb] {
                    return Err(format!("step {}: element is not the floor pair", s.index));
                }
            }
            _ => return Err(format!("step {}: unexpected element shape", s.index)),
        }
        (state, acc) = advance(&state, &acc, &s.transform)?;
    }
    let last: Vec<String> = state.coords().iter().map(|x| x.to_string()).collect();
    if !exp.final_state.is_empty() && last != exp.final_state {
        return Err("final state differs from the replay".into());
    }
    Ok(())
}

/// Integer continued fraction of `(P + √D) / Q` by the classical recurrence,
/// returning elements and (pre-period, period) of the element sequence.
pub fn quadratic_oracle(p: i64, d: i64, q: i64) -> (Vec<i64>, usize, usize) {
    let (mut p, d, mut q) = (p * q.abs(), d * q * q, q * q.abs());
    let r = d.sqrt();
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    loop {
        if let Some(&k) = seen.get(&(p, q)) {
            return (out.clone(), k, out.len() - k);
        }
        seen.insert((p, q), out.len());
        let a = if q > 0 { (p + r).div_euclid(q) } else { (-p - r - 1).div_euclid(-q) };
        out.push(a);
        p = a * q - p;
        q = (d - p * p) / q;
    }
}

/// Euclid on `n` random `(P + √D) / Q` must find the oracle's period.
pub fn lagrange_quadratic_oracle(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    let mut done = 0;
    while done < n {
        let d: i64 = rng.random_range(2..200);
        if d.sqrt() * d.sqrt() == d {
            continue;
        }
        let p: i64 = rng.random_range(-20..20);
        let q: i64 = rng.random_range(1..15);
        let label = format!("({p}+√{d})/{q}");
        let k = MinimalPolynomial::new(QPoly::from_ints([-d, 0, 1])).unwrap();
        let e = k.real_embedding(1).unwrap();
        let num = FieldElement::new(&k, QPoly::from_ints([p, 1]));
        let den = FieldElement::from_int(&k, q);
        let exp = euclid_expand(&num, &den, e, &RunLimits::default()).map_err(|e| e.to_string())?;
        if exp.status != Status::Periodic {
            return Err(format!("{label}: no period"));
        }
        let (oracle, pre, per) = quadratic_oracle(p, d, q);
        let ours: Vec<i64> = exp
            .steps
            .iter()
            .map(|s| i64::try_from(&s.element.tuple().unwrap()[0]).unwrap())
            .collect();
        let m = ours.len().min(oracle.len());
        if ours[..m] != oracle[..m] {
            return Err(format!("{label}: elements differ"));
        }
        if (exp.element_preperiod, exp.element_period) != (Some(pre), Some(per)) {
            return Err(format!("{label}: period differs"));
        }
        done += 1;
    }
    Ok(())
}

/// Euclid on `n` random rationals must terminate, and folding the elements
/// back must give the input exactly.
pub fn lagrange_rational_oracle(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..n {
        let p = BigInt::from(rng.random_range(-10i64.pow(12)..10i64.pow(12)));
        let q = BigInt::from(rng.random_range(1..10i64.pow(9)));
        let x = BigRational::new(p.clone(), q.clone());
        let exp = euclid_expand_rational(
            &BigRational::from_integer(p),
            &BigRational::from_integer(q),
            &RunLimits::default(),
        )
        .map_err(|e| e.to_string())?;
        if exp.status != Status::Terminated {
            return Err(format!("{x}: did not terminate"));
        }
        let els: Vec<BigInt> = exp.steps.iter().map(|s| s.element.tuple().unwrap()[0].clone()).collect();
        let mut v: Option<BigRational> = None;
        for a in els.iter().rev() {
            let a = BigRational::from_integer(a.clone());
            v = Some(match v {
                None => a,
                Some(t) => a + t.recip(),
            });
        }
        if v.as_ref() != Some(&x) || els[1..].iter().any(|a| a <= &BigInt::zero()) {
            return Err(format!("{x}: elements do not fold back"));
        }
    }
    Ok(())
}
