mod common;

use common::*;
use hermite_core::engines::*;
use hermite_core::{Expansion, MinimalPolynomial, RunLimits, Status};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[test]
fn euclid_pair() {
    let e = euclid_expand_rational(&BigRational::from_integer(21.into()), &BigRational::from_integer(15.into()), &RunLimits::default()).unwrap();
    let els: Vec<String> = e.steps.iter().map(|s| s.element.to_string()).collect();
    assert_eq!(els, ["1", "2", "2"]);
    assert_eq!(e.final_state, ["3", "0"]);
    assert_eq!(e.status, Status::Terminated);
}

#[test]
fn jacobi_perron_ex_ok() {
    let e = jacobi_perron_expand(&ex_ok_system(), &RunLimits::default()).unwrap();
    assert_eq!(
        pairs(e.preperiod_steps()),
        [(-1, -2), (1, 0), (1, 0), (1, 0), (2, 2), (6, 4)]
    );
    assert_eq!(pairs(e.period_steps()), [(3, 1), (7, 1)]);
    check_run(&ex_ok_system(), &e).unwrap();
}

#[test]
fn jacobi_perron_cube_root_four() {
    let sys = cbrt4_system();
    let e = jacobi_perron_expand(&sys, &RunLimits::steps(93)).unwrap();
    assert_eq!(e.status, Status::Inconclusive);
    assert_eq!(pairs(&e.steps[..12]), JP_CBRT4_COLUMNS);
    check_run(&sys, &e).unwrap();
    let e = jacobi_perron_expand(&sys, &RunLimits::steps(94)).unwrap();
    // the reference second entry 388 disagrees with exact arithmetic
    assert_eq!(pairs(&e.steps[93..]), [(476, 338)]);
}

#[test]
fn apd_cube_root_four() {
    let sys = cbrt4_system();
    let e = apd_expand(&sys, &ApdOptions::default(), &RunLimits::default()).unwrap();
    let step0 = e.normalization.last().unwrap();
    assert!(step0.transform.is_identity());
    assert_eq!(step0.element.tuple().unwrap(), [BigInt::from(APD_CBRT4_STEP0.0), BigInt::from(APD_CBRT4_STEP0.1)]);
    assert_eq!(pairs(e.preperiod_steps()), APD_CBRT4_PRE);
    assert_eq!(pairs(e.period_steps()), APD_CBRT4_PERIOD);
    assert!(e.tie_flags.is_empty());
    check_run(&sys, &e).unwrap();
}

#[test]
fn lagrange_quadratics() {
    lagrange_quadratic_oracle(50, 11).unwrap();
}

#[test]
fn lagrange_rationals() {
    lagrange_rational_oracle(50, 12).unwrap();
}

#[test]
fn md_apd_quartic() {
    let p = MinimalPolynomial::parse("x^4-2").unwrap();
    let sys = hermite_core::ConjugateSystem::new(&p, hermite_core::conjugates::power_basis(4)).unwrap();
    let e = md_apd_expand(&sys, &ApdOptions::default(), &RunLimits::default()).unwrap();
    assert_eq!(e.status, Status::Periodic);
    check_run(&sys, &e).unwrap();
}

#[test]
fn sin2_classic_cubics() {
    for poly in ["x^3-3x-1", "x^3-x^2-2x+1", "x^3-7x-7"] {
        let p = MinimalPolynomial::parse(poly).unwrap();
        let sys = hermite_core::ConjugateSystem::new(&p, hermite_core::conjugates::power_basis(3)).unwrap();
        let e = sin2_expand(&sys, &Sin2Options::default(), &RunLimits::steps(300)).unwrap();
        assert_eq!(e.status, Status::Periodic, "{poly}");
        check_run(&sys, &e).unwrap();
    }
}

#[test]
fn random_systems_keep_invariants() {
    let mut rng = rng(13);
    for _ in 0..20 {
        let sys = random_cubic_system(&mut rng);
        let jp = jacobi_perron_expand(&sys, &RunLimits::steps(30)).unwrap();
        check_run(&sys, &jp).unwrap();
        match apd_expand(&sys, &ApdOptions::default(), &RunLimits::steps(15)) {
            Ok(e) => check_run(&sys, &e).unwrap(),
            Err(hermite_core::Error::Precondition(_)) => {}
            Err(e) => panic!("{sys}: {e}"),
        }
    }
}

#[test]
fn expansion_json_round_trip() {
    let e = apd_expand(&cbrt4_system(), &ApdOptions::default(), &RunLimits::default()).unwrap();
    let text = serde_json::to_string(&e).unwrap();
    let back: Expansion = serde_json::from_str(&text).unwrap();
    assert_eq!(back, e);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["algorithm", "input", "steps", "preperiod", "period", "status", "tie_flags"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn gauss_kuzmin_sums_to_one() {
    let mut s = BigRational::zero();
    let n = 400u64;
    for k in 1..=n {
        s += gauss_kuzmin_expected(k, 80).unwrap().midpoint().to_rational();
    }
    let tail = (2.0f64 * (n + 1) as f64 / (n + 2) as f64).log2();
    let total: f64 = num_traits::ToPrimitive::to_f64(&s).unwrap() + (1.0 - tail);
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}
