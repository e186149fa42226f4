//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_DEVIATIONS` are expected to fail; the test fails if the set of
//! failures differs from that list in either direction.

mod common;

use std::time::{Duration, Instant};

use common::*;
use hermite_core::conjugates::power_basis;
use hermite_core::dirichlet::*;
use hermite_core::engines::*;
use hermite_core::periodicity::proportional;
use hermite_core::{
    Algorithm, ConjugateSystem, Element, FieldElement, IntegerMatrix, MinimalPolynomial, RunLimits, Status,
};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Failing criteria with the reason recorded in the decisions log:
/// 3, the reference π list holds twelve 1s, not ten;
/// 5, exact arithmetic gives (476, 338) at step 94, not the reference (476, 388).
const KNOWN_DEVIATIONS: [u32; 2] = [3, 5];

const EUCLID_BUDGET: Duration = Duration::from_millis(1);
const QUADRATIC_BUDGET: Duration = Duration::from_millis(10);
const EX_OK_BUDGET: Duration = Duration::from_secs(1);
const JP_CBRT4_BUDGET: Duration = Duration::from_secs(30);
const Q1_BUDGET: Duration = Duration::from_secs(60);
const MONTE_CARLO_BUDGET: Duration = Duration::from_secs(120);
const GK1_RANGE: (f64, f64) = (0.4150, 0.4151);
const MONTE_CARLO_TOLERANCE: f64 = 0.01;
const MONTE_CARLO_SAMPLES: usize = 100_000;
const MONTE_CARLO_ELEMENTS: usize = 100;
const MONTE_CARLO_BITS: u32 = 512;
const MONTE_CARLO_SEED: u64 = 0;
const SIN2_CUBICS: usize = 10;
const SIN2_MAX_STEPS: usize = 300;
const RANDOM_SYSTEMS: usize = 200;
const LAGRANGE_CASES: usize = 50;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn int_rows(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_i64(rows)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn criterion_1() -> Outcome {
    let run = || {
        euclid_expand_rational(
            &BigRational::from_integer(21.into()),
            &BigRational::from_integer(15.into()),
            &RunLimits::default(),
        )
        .unwrap()
    };
    run();
    let (e, dt) = timed(run);
    let els: Vec<String> = e.steps.iter().map(|s| s.element.to_string()).collect();
    let ok = els == ["1", "2", "2"] && e.final_state == ["3", "0"];
    outcome(ok && dt < EUCLID_BUDGET, format!("elements {els:?}, final {:?}, {dt:?}", e.final_state))
}

fn criterion_2() -> Outcome {
    let k = MinimalPolynomial::parse("x^2-20").unwrap();
    let e = k.real_embedding(1).unwrap();
    let run = || {
        euclid_expand(
            &FieldElement::generator(&k),
            &FieldElement::one(&k),
            e,
            &RunLimits::default(),
        )
        .unwrap()
    };
    run();
    let (x, dt) = timed(run);
    let els: Vec<String> = x.steps.iter().map(|s| s.element.to_string()).collect();
    let ok = els == ["4", "2", "8"]
        && (x.preperiod, x.period) == (Some(1), Some(2))
        && (x.element_preperiod, x.element_period) == (Some(1), Some(2));
    outcome(
        ok && dt < QUADRATIC_BUDGET,
        format!("[{}; period from step {:?}, length {:?}], {dt:?}", els.join(","), x.preperiod, x.period),
    )
}

fn criterion_3() -> Outcome {
    let xs: Vec<BigInt> = PI_REFERENCE[1..].iter().map(|&x| BigInt::from(x)).collect();
    let f = frequencies(&xs).unwrap();
    let f1 = f[&BigInt::from(1)].clone();
    let g = gauss_kuzmin_expected(1, 64).unwrap();
    let g_ok = g.lower().to_f64() >= GK1_RANGE.0 && g.upper().to_f64() <= GK1_RANGE.1;
    let want = BigRational::new(10.into(), 30.into());
    outcome(
        f1 == want && g_ok,
        format!("frequency(1) = {f1} over {} elements (expected 1/3), gauss_kuzmin(1) = {:.6}", xs.len(), g.to_f64()),
    )
}

fn criterion_4() -> Outcome {
    let sys = ex_ok_system();
    let (e, dt) = timed(|| jacobi_perron_expand(&sys, &RunLimits::default()).unwrap());
    let ok = pairs(e.preperiod_steps()) == [(-1, -2), (1, 0), (1, 0), (1, 0), (2, 2), (6, 4)]
        && pairs(e.period_steps()) == [(3, 1), (7, 1)]
        && (e.preperiod, e.period) == (Some(6), Some(2));
    outcome(ok && dt < EX_OK_BUDGET, format!("preperiod {:?}, period {:?}, {dt:?}", e.preperiod, e.period))
}

fn criterion_5() -> Outcome {
    let sys = cbrt4_system();
    let (r, dt) = timed(|| {
        let head = jacobi_perron_expand(&sys, &RunLimits::steps(93)).unwrap();
        let full = jacobi_perron_expand(&sys, &RunLimits::steps(94)).unwrap();
        (head, full)
    });
    let (head, full) = r;
    let columns = pairs(&head.steps[..12]) == JP_CBRT4_COLUMNS;
    let inconclusive = head.status == Status::Inconclusive && head.steps.len() == 93;
    let step94 = pairs(&full.steps[93..94])[0];
    outcome(
        columns && inconclusive && step94 == (476, 388) && dt < JP_CBRT4_BUDGET,
        format!("12 columns match: {columns}, inconclusive at 93: {inconclusive}, step 94 = {step94:?} (reference (476, 388)), {dt:?}"),
    )
}

fn criterion_6() -> Outcome {
    let e = apd_expand(&cbrt4_system(), &ApdOptions::default(), &RunLimits::default()).unwrap();
    let step0 = e.normalization.last().unwrap();
    let ok = step0.transform.is_identity()
        && pairs(e.preperiod_steps()) == APD_CBRT4_PRE
        && pairs(e.period_steps()) == APD_CBRT4_PERIOD
        && (e.preperiod, e.period) == (Some(6), Some(4));
    outcome(
        ok,
        format!("preperiod {:?}, period {:?}, tie-broken steps {:?}", e.preperiod, e.period, e.tie_flags),
    )
}

fn criterion_7() -> Outcome {
    let sys = ex_ok_system();
    let e = jacobi_perron_expand(&sys, &RunLimits::default()).unwrap();
    let a = assemble(&e, &sys, hermite_core::nfield::max_bits()).unwrap();
    let eigen = proportional(sys.vector(), &a.m.apply_field(sys.vector())).unwrap().is_some();
    let ok = a.m1 == int_rows(&[&[-22, -1, -3], &[51, 2, 7], &[-67, -3, -9]])
        && a.m2 == int_rows(&[&[22, 1, 3], &[7, 0, 1], &[8, 0, 1]])
        && a.m == int_rows(&[&[5, -4, 3], &[-12, 9, -7], &[16, -12, 9]])
        && eigen
        && a.dominant
        && !a.inverted;
    outcome(ok, format!("M = {:?}, eigenvector {eigen}, dominant {}", a.m.rows(), a.dominant))
}

fn criterion_8() -> Outcome {
    let p = MinimalPolynomial::parse("x^3-4").unwrap();
    let ans = answer_q2(&p, power_basis(3), p.real_embedding(0).unwrap(), &DirichletOptions::default()).unwrap();
    let reference = int_rows(&[&[5, 8, 12], &[3, 5, 8], &[2, 3, 5]]);
    let v = ans.system.vector();
    let right = proportional(v, &ans.matrix().apply_field(v)).unwrap().is_some();
    // v · reference = λ v: the reference matrix acts on row vectors
    let left = proportional(v, &reference.transpose().apply_field(v)).unwrap().is_some();
    let ok = ans.matrix() == &reference.transpose() && right && left && ans.assembly.dominant;
    outcome(
        ok,
        format!("M = {:?} = referenceᵀ (row-vector convention), right eigenvector {right}, reference left eigenvector {left}", ans.matrix().rows()),
    )
}

fn criterion_9() -> Outcome {
    let a = int_rows(&[&[2, 5, -1], &[3, 6, 1], &[4, 7, 1]]);
    let (ans, dt) = timed(|| answer_q1(&a, &DirichletOptions::default()).unwrap());
    let m = ans.matrix();
    let ours = commutes(&a, m).unwrap() && m.is_unimodular();
    let b = IntegerMatrix::new(
        [
            ["88778750433916", "1881948516620816", "-1642359549748757"],
            ["-77918418013751", "-849278651461089", "759124773173459"],
            ["534000559063825", "-721564227716990", "360094549931638"],
        ]
        .iter()
        .map(|r| r.iter().map(|x| x.parse().unwrap()).collect())
        .collect(),
    )
    .unwrap();
    let c: Vec<BigRational> = [-147205796095883i64, 1347947957556991, -399030223241821]
        .iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect();
    let reference = commutes(&a, &b).unwrap() && polynomial_in(&a, &b).unwrap() == Some(c);
    outcome(
        ours && reference && dt < Q1_BUDGET,
        format!("ours commutes and unimodular: {ours}, reference B commutes with matching polynomial: {reference}, {dt:?}"),
    )
}

fn criterion_10() -> Outcome {
    let a = int_rows(&[&[55, 210, 176], &[176, 671, 562], &[562, 2143, 1795]]);
    let b = int_rows(&[&[-497, -1122, 400], &[400, 903, -322], &[-322, -727, 259]]);
    let c = int_rows(&[&[185, 172, -72], &[-72, -67, 28], &[28, 26, -11]]);
    let identity = (&(&a.pow(3).unwrap() * &b.pow(5).unwrap()) * &c.pow(7).unwrap()).is_identity();
    let p = MinimalPolynomial::parse("2x^3-4x^2-7x-2").unwrap();
    let sys = ConjugateSystem::new(&p, power_basis(3)).unwrap();
    let opts = DirichletOptions {
        algorithm: Some(Algorithm::Apd),
        ..Default::default()
    };
    let builds: Vec<Answer> = rotation_builds(&sys, &opts).into_iter().filter_map(|(_, r)| r.ok()).collect();
    let eigen = builds.len() == 3
        && builds.iter().all(|x| {
            let v = x.system.vector();
            proportional(v, &x.matrix().apply_field(v)).unwrap().is_some()
        });
    let commute = builds
        .iter()
        .all(|x| builds.iter().all(|y| commutes(x.matrix(), y.matrix()).unwrap()));
    let same = builds.iter().map(|x| x.matrix().clone()).collect::<Vec<_>>() == [b, c, a];
    outcome(
        identity && eigen && commute,
        format!("A³B⁵C⁷ = I: {identity}, builds with eigenvector: {eigen}, pairwise commuting: {commute}, builds equal reference (B, C, A): {same}"),
    )
}

fn criterion_11() -> Outcome {
    let mut polys: Vec<MinimalPolynomial> = ["x^3-3x-1", "x^3-x^2-2x+1", "x^3-7x-7"]
        .iter()
        .map(|s| MinimalPolynomial::parse(s).unwrap())
        .collect();
    let mut rng = rng(21);
    while polys.len() < SIN2_CUBICS {
        let p = random_cubic(&mut rng, 8, true);
        if !polys.contains(&p) {
            polys.push(p);
        }
    }
    let mut failures = Vec::new();
    let mut longest = 0;
    for p in &polys {
        let sys = ConjugateSystem::new(p, power_basis(3)).unwrap();
        match sin2_expand(&sys, &Sin2Options::default(), &RunLimits::steps(SIN2_MAX_STEPS)) {
            Ok(e) if e.is_periodic() => {
                longest = longest.max(e.steps.len());
                let unimodular = e.steps.iter().all(|s| matches!(&s.element, Element::Matrix(m) if m.is_unimodular()));
                if !unimodular {
                    failures.push(format!("{p}: non-unimodular Φ"));
                } else if let Err(why) = check_run(&sys, &e) {
                    failures.push(format!("{p}: {why}"));
                }
            }
            Ok(_) => failures.push(format!("{p}: no period")),
            Err(err) => failures.push(format!("{p}: {err}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} cubics, longest run {longest} steps, failures {failures:?}", polys.len()),
    )
}

fn criterion_12() -> Outcome {
    let (r, dt) = timed(|| {
        monte_carlo_frequencies(MONTE_CARLO_SAMPLES, MONTE_CARLO_ELEMENTS, MONTE_CARLO_BITS, MONTE_CARLO_SEED).unwrap()
    });
    let f = num_traits::ToPrimitive::to_f64(&r.frequency(1)).unwrap();
    let g = gauss_kuzmin_expected(1, 64).unwrap().to_f64();
    outcome(
        (f - g).abs() < MONTE_CARLO_TOLERANCE && dt < MONTE_CARLO_BUDGET,
        format!("frequency(1) = {f:.5} over {} elements, expected {g:.5}, {dt:?}", r.total),
    )
}

fn criterion_13() -> Outcome {
    let mut rng = rng(31);
    let mut failures = Vec::new();
    let mut apd_runs = 0;
    for _ in 0..RANDOM_SYSTEMS {
        let sys = random_cubic_system(&mut rng);
        let jp = jacobi_perron_expand(&sys, &RunLimits::steps(25)).unwrap();
        if let Err(why) = check_run(&sys, &jp) {
            failures.push(format!("JP {sys}: {why}"));
        }
        match apd_expand(&sys, &ApdOptions::default(), &RunLimits::steps(12)) {
            Ok(e) => {
                apd_runs += 1;
                if let Err(why) = check_run(&sys, &e) {
                    failures.push(format!("APD {sys}: {why}"));
                }
            }
            // candidate boxes past the cap are a reported limit, not a violation
            Err(hermite_core::Error::Precondition(_)) => {}
            Err(err) => failures.push(format!("APD {sys}: {err}")),
        }
    }
    if let Err(why) = lagrange_quadratic_oracle(LAGRANGE_CASES, 41) {
        failures.push(why);
    }
    if let Err(why) = lagrange_rational_oracle(LAGRANGE_CASES, 42) {
        failures.push(why);
    }
    outcome(
        failures.is_empty(),
        format!("{RANDOM_SYSTEMS} systems ({apd_runs} APD runs), {LAGRANGE_CASES} quadratics, {LAGRANGE_CASES} rationals, failures {failures:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let o = f();
        println!("criterion {n:>2}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(n);
        }
    }
    assert_eq!(failed, KNOWN_DEVIATIONS, "failing criteria differ from the recorded deviations");
}

#[test]
fn jacobi_perron_step_94_is_exact() {
    // the criterion 5 mismatch is the second entry only
    let e = jacobi_perron_expand(&cbrt4_system(), &RunLimits::steps(94)).unwrap();
    assert_eq!(pairs(&e.steps[93..]), [(476, 338)]);
}
