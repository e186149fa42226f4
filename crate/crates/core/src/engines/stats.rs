use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::euclid::regular_cf;
use super::{Element, ExpansionStep};
use crate::error::{Error, Result};
use crate::interval::{ln2, ln_rational, Interval};

/// Certified `log₂(1 + 1/(k(k+2)))`, the limiting frequency of `k`.
///
/// This is `log₂` of the cross-ratio `[-1, 0, k, k+1]`.
pub fn gauss_kuzmin_expected(k: u64, prec: u32) -> Result<Interval> {
    if k < 1 {
        return Err(Error::Precondition("element must be at least 1".into()));
    }
    let kk = BigInt::from(k);
    let x = BigRational::one() + BigRational::new(BigInt::one(), &kk * (&kk + 2u32));
    let ln = ln_rational(&x, prec + 16).expect("positive");
    let v = ln.div(&ln2(prec + 16)).expect("ln 2 > 0");
    Ok(v.with_precision(prec))
}

/// Exact relative frequencies of the values in `xs`.
pub fn frequencies(xs: &[BigInt]) -> Result<BTreeMap<BigInt, BigRational>> {
    if xs.is_empty() {
        return Err(Error::Precondition("no elements to count".into()));
    }
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    for x in xs {
        *counts.entry(x.clone()).or_default() += 1;
    }
    let n = BigInt::from(xs.len());
    Ok(counts
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(c.into(), n.clone())))
        .collect())
}

/// Frequencies of the scalar elements of a one-dimensional expansion.
pub fn empirical_frequencies(steps: &[ExpansionStep]) -> Result<BTreeMap<BigInt, BigRational>> {
    let xs = steps
        .iter()
        .map(|s| match &s.element {
            Element::Tuple(v) if v.len() == 1 => Ok(v[0].clone()),
            _ => Err(Error::Precondition("frequencies need scalar elements".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    frequencies(&xs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub samples: usize,
    pub elements_per_sample: usize,
    pub bits: u32,
    pub seed: u64,
    /// Elements counted; short expansions contribute fewer.
    pub total: u64,
    #[serde(with = "count_map")]
    pub counts: BTreeMap<BigInt, u64>,
}

impl MonteCarloReport {
    pub fn frequency(&self, k: u64) -> BigRational {
        let c = self.counts.get(&BigInt::from(k)).copied().unwrap_or(0);
        BigRational::new(c.into(), self.total.max(1).into())
    }
}

mod count_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<BigInt, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: BTreeMap<String, u64> = m.iter().map(|(k, c)| (k.to_string(), *c)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<BigInt, u64>, D::Error> {
        let v: BTreeMap<String, u64> = BTreeMap::deserialize(d)?;
        v.into_iter()
            .map(|(k, c)| {
                k.parse::<BigInt>()
                    .map(|k| (k, c))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// Continued-fraction elements of uniform random `bits`-bit rationals in
/// `(0, 1)`, counting the first `elements` partial quotients after the
/// integer part. Sample `i` uses stream `i` of the seeded generator.
pub fn monte_carlo_frequencies(
    samples: usize,
    elements: usize,
    bits: u32,
    seed: u64,
) -> Result<MonteCarloReport> {
    if samples == 0 || elements == 0 || bits < 8 {
        return Err(Error::Precondition(
            "need at least one sample, one element and 8 bits".into(),
        ));
    }
    let den = BigInt::one() << bits;
    let words = (bits as usize).div_ceil(32);
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut num;
            loop {
                let limbs: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
                num = BigInt::from(BigUint::from_slice(&limbs) % den.magnitude());
                if !num.is_zero() {
                    break;
                }
            }
            // x = num/den in (0, 1): the elements of 1/x
            regular_cf(&den, &num, elements)
        })
        .fold(BTreeMap::<BigInt, u64>::new, |mut m, cf| {
            for a in cf {
                *m.entry(a).or_default() += 1;
            }
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    let total = counts.values().sum();
    Ok(MonteCarloReport {
        samples,
        elements_per_sample: elements,
        bits,
        seed,
        total,
        counts,
    })
}
