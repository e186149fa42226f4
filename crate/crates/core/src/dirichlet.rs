//! Unimodular matrices from periodic expansions, and the eigenstructure
//! questions they answer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::conjugates::{build_system, ConjugateSystem};
use crate::engines::{
    apd_expand, jacobi_perron_expand, md_apd_expand, sin2_expand, Algorithm, ApdOptions, Element,
    RunLimits, Sin2Options,
};
use crate::error::{Error, Result};
use crate::interval::{ln_interval, Interval};
use crate::matrix::{rational_solve, IntegerMatrix};
use crate::nfield::{EmbeddingIndex, EmbeddingKind, FieldElement, MinimalPolynomial};
use crate::periodicity::{canonical, proportional, Expansion};
use crate::poly::QPoly;

/// The Jacobi–Perron generator `[[a,0,1],[1,0,0],[b,1,0]]`, the inverse of
/// the step transform for the element `(a, b)`.
pub fn step_matrix(a: &BigInt, b: &BigInt) -> IntegerMatrix {
    let z = BigInt::zero();
    let o = BigInt::one();
    IntegerMatrix::new(vec![
        vec![a.clone(), z.clone(), o.clone()],
        vec![o, z.clone(), z.clone()],
        vec![b.clone(), BigInt::one(), z],
    ])
    .expect("3x3")
}

fn generator_product(elements: &[&Element]) -> Result<IntegerMatrix> {
    let mut acc = IntegerMatrix::identity(3);
    for e in elements {
        match e.tuple() {
            Some([a, b]) => acc = &acc * &step_matrix(a, b),
            _ => return Err(Error::Precondition("expected Jacobi–Perron pairs".into())),
        }
    }
    Ok(acc)
}

/// `(M₁, M₂, M₁M₂M₁⁻¹)` from Jacobi–Perron pre-period and period elements.
pub fn assemble_elements(
    pre: &[&Element],
    per: &[&Element],
) -> Result<(IntegerMatrix, IntegerMatrix, IntegerMatrix)> {
    if per.is_empty() {
        return Err(Error::Precondition("empty period".into()));
    }
    let m1 = generator_product(pre)?;
    let m2 = generator_product(per)?;
    let m = &(&m1 * &m2) * &m1.inverse()?;
    Ok((m1, m2, m))
}

fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// An assembled matrix with the eigen-relation it was built to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assembly {
    pub m1: IntegerMatrix,
    pub m2: IntegerMatrix,
    pub m: IntegerMatrix,
    /// `λ` with `m · v = λ v` for the run's initial primary vector `v`.
    #[serde(serialize_with = "display")]
    pub eigenvalue: FieldElement,
    /// `λ` has strictly maximal modulus among its conjugates.
    pub dominant: bool,
    /// `m` was replaced by its inverse to put the dominant eigenvalue on `v`.
    pub inverted: bool,
}

/// Assembles `M = M₁M₂M₁⁻¹` from a periodic expansion of `system`.
///
/// Jacobi–Perron runs use the generator form; every other algorithm uses
/// `M₁ = Q⁻¹`, `M₂ = P⁻¹` where `Q` is the accumulated pre-period transform
/// (normalization included) and `P` the accumulated period transform.
pub fn assemble(expansion: &Expansion, system: &ConjugateSystem, cap: u32) -> Result<Assembly> {
    let per = expansion.period_steps();
    if !expansion.is_periodic() || per.is_empty() {
        return Err(Error::Precondition("expansion has no period".into()));
    }
    let (m1, m2, m) = if expansion.algorithm == Algorithm::JacobiPerron {
        let pre: Vec<&Element> = expansion.preperiod_steps().iter().map(|s| &s.element).collect();
        let per: Vec<&Element> = per.iter().map(|s| &s.element).collect();
        assemble_elements(&pre, &per)?
    } else {
        let q = expansion
            .preperiod_steps()
            .iter()
            .fold(expansion.normalization_matrix(), |acc, s| &s.transform * &acc);
        let p = per
            .iter()
            .fold(IntegerMatrix::identity(system.dim()), |acc, s| &s.transform * &acc);
        let m1 = q.inverse()?;
        let m2 = p.inverse()?;
        let m = &(&m1 * &m2) * &q;
        (m1, m2, m)
    };
    let v = system.vector();
    let lambda = proportional(v, &m.apply_field(v))?
        .ok_or_else(|| Error::Degenerate("assembled matrix does not fix the vector".into()))?;
    let e = system.primary();
    if dominant_embedding(&lambda, cap)? == Some(e) {
        return Ok(Assembly { m1, m2, m, eigenvalue: lambda, dominant: true, inverted: false });
    }
    let inv = lambda.inv()?;
    if dominant_embedding(&inv, cap)? == Some(e) {
        let m = m.inverse()?;
        return Ok(Assembly { m1, m2, m, eigenvalue: inv, dominant: true, inverted: true });
    }
    Ok(Assembly { m1, m2, m, eigenvalue: lambda, dominant: false, inverted: false })
}

fn partner(e: EmbeddingIndex, all: &[EmbeddingIndex]) -> Option<usize> {
    match e.kind {
        EmbeddingKind::Real => None,
        EmbeddingKind::ComplexUpper => Some(e.index + 1),
        EmbeddingKind::ComplexLower => Some(e.index - 1),
    }
    .filter(|&k| k < all.len())
}

/// The embedding where `|σ(x)|` is strictly largest, certified by interval
/// refinement up to `cap` bits. A dominant complex pair reports its upper
/// member. `None` if the maximum is shared or stays undecided.
pub fn dominant_embedding(x: &FieldElement, cap: u32) -> Result<Option<EmbeddingIndex>> {
    let all = x.field().embeddings();
    let mut prec = 64;
    loop {
        let mods: Vec<Interval> = x.enclose_all(prec)?.iter().map(|c| c.norm_sqr()).collect();
        let best = (0..mods.len())
            .max_by(|&i, &j| mods[i].upper().cmp(mods[j].upper()))
            .expect("nonempty");
        let mate = partner(all[best], &all);
        let separated = (0..mods.len())
            .filter(|&j| j != best && Some(j) != mate)
            .all(|j| mods[best].lower() > mods[j].upper());
        if separated {
            let top = match all[best].kind {
                EmbeddingKind::ComplexLower => all[best - 1],
                _ => all[best],
            };
            return Ok(Some(top));
        }
        if prec >= cap {
            return Ok(None);
        }
        prec = (prec * 2).min(cap);
    }
}

#[derive(Clone, Debug)]
pub struct EigenData {
    pub char_poly: MinimalPolynomial,
    pub signature: (usize, usize),
    /// The eigenvalue as the generator of `Q(λ)`.
    pub eigenvalue: FieldElement,
    /// Generic eigenvector over `Q(λ)`, first nonzero coordinate 1. Its image
    /// under embedding `σ` is the eigenvector for `σ(λ)`.
    pub eigenvector: Vec<FieldElement>,
    pub dominant: Option<EmbeddingIndex>,
}

impl EigenData {
    /// Rank `s + t - 1` of the free part of the unit group.
    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }

    pub fn embeddings(&self) -> Vec<EmbeddingIndex> {
        self.char_poly.embeddings()
    }

    /// The eigenvector basis as polynomials in `λ`.
    pub fn basis(&self) -> Vec<QPoly> {
        self.eigenvector.iter().map(|x| x.representative().clone()).collect()
    }

    /// The eigenvector system with primary embedding `e`.
    pub fn system(&self, e: EmbeddingIndex) -> Result<ConjugateSystem> {
        build_system(&self.char_poly, self.basis(), e)
    }
}

/// A nonzero kernel vector of a rank-deficient square matrix over a field.
fn kernel_vector(mut m: Vec<Vec<FieldElement>>) -> Result<Vec<FieldElement>> {
    let n = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv()?;
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..n)
        .find(|c| !pivots.contains(c))
        .ok_or_else(|| Error::Degenerate("eigenvalue has trivial eigenspace".into()))?;
    let field = m[0][0].field().clone();
    let mut v = vec![FieldElement::zero(&field); n];
    v[free] = FieldElement::one(&field);
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = -&m[row][free];
    }
    Ok(v)
}

/// Characteristic polynomial, signature and exact eigenvector of `a`.
pub fn eigen_data(a: &IntegerMatrix, cap: u32) -> Result<EigenData> {
    let char_poly = match MinimalPolynomial::new(a.char_poly()) {
        Ok(p) => p,
        Err(Error::Reducible { factor }) => return Err(Error::ReducibleCharPoly(factor)),
        Err(e) => return Err(e),
    };
    let lambda = FieldElement::generator(&char_poly);
    let d = a.dim();
    let shifted: Vec<Vec<FieldElement>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let x = FieldElement::from_int(&char_poly, a.get(i, j).clone());
                    if i == j {
                        &x - &lambda
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let eigenvector = canonical(&kernel_vector(shifted)?)?;
    let dominant = dominant_embedding(&lambda, cap)?;
    Ok(EigenData {
        signature: char_poly.signature(),
        char_poly,
        eigenvalue: lambda,
        eigenvector,
        dominant,
    })
}

pub fn commutes(a: &IntegerMatrix, b: &IntegerMatrix) -> Result<bool> {
    a.commutes(b)
}

/// Rational `(c_{d-1}, …, c_0)` with `b = Σ c_k a^k`, if they exist.
pub fn polynomial_in(a: &IntegerMatrix, b: &IntegerMatrix) -> Result<Option<Vec<BigRational>>> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
    }
    let mut powers = vec![IntegerMatrix::identity(d)];
    for k in 1..d {
        powers.push(&powers[k - 1] * a);
    }
    let mut rows = Vec::with_capacity(d * d);
    let mut rhs = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            rows.push(
                powers
                    .iter()
                    .map(|p| BigRational::from_integer(p.get(i, j).clone()))
                    .collect(),
            );
            rhs.push(BigRational::from_integer(b.get(i, j).clone()));
        }
    }
    Ok(rational_solve(&rows, &rhs).map(|mut c| {
        c.reverse();
        c
    }))
}

/// Which algorithm the answers run; `None` picks sin² for totally real
/// cubics, APD for other cubics and md-APD in higher degree.
#[derive(Clone, Debug, Default)]
pub struct DirichletOptions {
    pub limits: RunLimits,
    pub algorithm: Option<Algorithm>,
    pub apd: ApdOptions,
    pub sin2: Sin2Options,
}

fn run(system: &ConjugateSystem, algorithm: Algorithm, opts: &DirichletOptions) -> Result<Expansion> {
    match algorithm {
        Algorithm::JacobiPerron => jacobi_perron_expand(system, &opts.limits),
        Algorithm::Apd => apd_expand(system, &opts.apd, &opts.limits),
        Algorithm::MdApd => md_apd_expand(system, &opts.apd, &opts.limits),
        Algorithm::Sin2 => sin2_expand(system, &opts.sin2, &opts.limits),
        Algorithm::Euclid => Err(Error::Precondition("Euclid runs are one-dimensional".into())),
    }
}

fn expand_auto(system: &ConjugateSystem, opts: &DirichletOptions) -> Result<Expansion> {
    if let Some(a) = opts.algorithm {
        return run(system, a, opts);
    }
    if system.dim() != 3 {
        return run(system, Algorithm::MdApd, opts);
    }
    if system.field().is_totally_real() {
        match run(system, Algorithm::Sin2, opts) {
            Ok(e) if e.is_periodic() => return Ok(e),
            _ => {}
        }
    }
    run(system, Algorithm::Apd, opts)
}

/// A matrix together with the expansion it was assembled from.
#[derive(Clone, Debug, Serialize)]
pub struct Answer {
    pub system: ConjugateSystem,
    pub expansion: Expansion,
    pub assembly: Assembly,
}

impl Answer {
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.assembly.m
    }
}

/// Expands `system` and assembles a unimodular matrix with its vector as an
/// eigenvector.
pub fn answer_for_system(system: &ConjugateSystem, opts: &DirichletOptions) -> Result<Answer> {
    let expansion = expand_auto(system, opts)?;
    if !expansion.is_periodic() {
        return Err(Error::Inconclusive(expansion.steps.len()));
    }
    let assembly = assemble(&expansion, system, opts.limits.max_precision_bits)?;
    Ok(Answer {
        system: system.clone(),
        expansion,
        assembly,
    })
}

/// A unimodular matrix commuting with `a`.
pub fn answer_q1(a: &IntegerMatrix, opts: &DirichletOptions) -> Result<Answer> {
    let eig = eigen_data(a, opts.limits.max_precision_bits)?;
    let e = eig
        .char_poly
        .default_real_embedding()
        .ok_or(Error::ComplexEmbedding(0))?;
    let ans = answer_for_system(&eig.system(e)?, opts)?;
    if !a.commutes(ans.matrix())? {
        return Err(Error::Degenerate("assembled matrix does not commute".into()));
    }
    Ok(ans)
}

/// A unimodular matrix with `(q_1(α), …, q_d(α))` as an eigenvector.
pub fn answer_q2(
    p: &MinimalPolynomial,
    q_basis: Vec<QPoly>,
    primary: EmbeddingIndex,
    opts: &DirichletOptions,
) -> Result<Answer> {
    answer_for_system(&build_system(p, q_basis, primary)?, opts)
}

/// One build per real embedding taken as primary, run concurrently.
/// Failed builds are kept as errors.
pub fn rotation_builds(
    system: &ConjugateSystem,
    opts: &DirichletOptions,
) -> Vec<(EmbeddingIndex, Result<Answer>)> {
    let reals: Vec<EmbeddingIndex> = system
        .field()
        .embeddings()
        .into_iter()
        .filter(|e| e.is_real())
        .collect();
    reals
        .into_par_iter()
        .map(|e| {
            let r = system.with_primary(e).and_then(|s| answer_for_system(&s, opts));
            (e, r)
        })
        .collect()
}

#[derive(Debug)]
pub struct Q3Answer {
    pub builds: Vec<(EmbeddingIndex, Result<Answer>)>,
    /// Dominant embeddings of `a` and of `a⁻¹`.
    pub excluded: (EmbeddingIndex, EmbeddingIndex),
    /// Position in `builds` of the returned matrix.
    pub chosen: usize,
}

impl Q3Answer {
    pub fn matrix(&self) -> &IntegerMatrix {
        match &self.builds[self.chosen].1 {
            Ok(a) => a.matrix(),
            Err(_) => unreachable!("chosen build succeeded"),
        }
    }
}

/// A unimodular matrix commuting with `a` that is not a power of `a`.
///
/// Each real embedding is tried as primary; the build whose dominant
/// eigenline belongs neither to `a` nor to `a⁻¹` is returned.
pub fn answer_q3(a: &IntegerMatrix, opts: &DirichletOptions) -> Result<Q3Answer> {
    let cap = opts.limits.max_precision_bits;
    let eig = eigen_data(a, cap)?;
    let (s, t) = eig.signature;
    if t != 0 {
        return Err(Error::NotTotallyReal { s, t, rank: eig.unit_rank() });
    }
    let up = eig
        .dominant
        .ok_or_else(|| Error::Degenerate("no dominant eigenvalue".into()))?;
    let down = dominant_embedding(&eig.eigenvalue.inv()?, cap)?
        .ok_or_else(|| Error::Degenerate("no dominant eigenvalue of the inverse".into()))?;
    let primary = eig.char_poly.default_real_embedding().ok_or(Error::ComplexEmbedding(0))?;
    let builds = rotation_builds(&eig.system(primary)?, opts);
    let mut chosen = None;
    for (k, (e, r)) in builds.iter().enumerate() {
        if *e == up || *e == down {
            continue;
        }
        let ans = match r {
            Ok(ans) => ans,
            Err(err) => return Err(err.clone()),
        };
        let m = ans.matrix();
        if !ans.assembly.dominant || !a.commutes(m)? {
            return Err(Error::Degenerate(format!("build for embedding {} is unusable", e.index)));
        }
        if is_power(m, a, cap)?.is_some() {
            return Err(Error::Degenerate(format!("build for embedding {} is a power", e.index)));
        }
        chosen = Some(k);
    }
    let chosen = chosen.ok_or_else(|| Error::Degenerate("no independent embedding".into()))?;
    Ok(Q3Answer {
        builds,
        excluded: (up, down),
        chosen,
    })
}

/// Certified `max_σ ln|σ(x)|`.
fn max_log_modulus(x: &FieldElement, cap: u32) -> Result<Interval> {
    let mut prec = 128;
    loop {
        let logs: Option<Vec<Interval>> = x
            .enclose_all(prec)?
            .iter()
            .map(|c| ln_interval(&c.norm_sqr()))
            .collect();
        if let Some(logs) = logs {
            let best = logs.iter().max_by(|a, b| a.upper().cmp(b.upper())).expect("nonempty");
            let lo = logs.iter().map(|l| l.lower()).max().expect("nonempty").clone();
            let half = Interval::from_rational(&BigRational::new(1.into(), 2.into()), prec);
            return Ok(&Interval::new(lo, best.upper().clone(), prec) * &half);
        }
        if prec >= cap {
            return Err(Error::PrecisionExhausted(cap));
        }
        prec = (prec * 2).min(cap);
    }
}

/// Search bound for `n` given the growth rates: `ceil(m / l) + 1`.
fn bound(m: &Interval, l: &Interval) -> Option<i64> {
    if l.lower().signum() <= 0 {
        return None;
    }
    let q = m.upper_rational().max(BigRational::zero()) / l.lower_rational();
    q.ceil().to_integer().to_i64().map(|n| n + 1)
}

/// Nonzero `n` with `base^n = target`, for `|base| ≠ 1`.
fn norm_exponent(base: &BigRational, target: &BigRational) -> Option<i64> {
    let one = BigRational::one();
    let grow = target.abs() > one;
    for (b, sign) in [(base.clone(), 1), (base.recip(), -1)] {
        if (b.abs() > one) != grow {
            continue;
        }
        let mut x = b.clone();
        let mut n = 1;
        loop {
            if &x == target {
                return Some(sign * n);
            }
            if (grow && x.abs() > target.abs()) || (!grow && x.abs() < target.abs()) {
                break;
            }
            x *= &b;
            n += 1;
        }
    }
    None
}

/// `n` with `m = aⁿ`, searched within a bound set by certified eigenvalue
/// growth. `-aⁿ` is not a power.
pub fn is_power(m: &IntegerMatrix, a: &IntegerMatrix, cap: u32) -> Result<Option<i64>> {
    if m.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: m.dim() });
    }
    if !a.commutes(m)? {
        return Ok(None);
    }
    let eig = eigen_data(a, cap)?;
    let v = &eig.eigenvector;
    let Some(mu) = proportional(v, &m.apply_field(v))? else {
        return Ok(None);
    };
    if mu.is_one() {
        return Ok(Some(0));
    }
    let lambda = &eig.eigenvalue;
    let nl = lambda.norm();
    if nl.abs() != BigRational::one() {
        // det m = (det a)ⁿ pins n down exactly
        let Some(n) = norm_exponent(&nl, &mu.norm()) else {
            return Ok(None);
        };
        let x = if n > 0 { lambda.pow(n as u32) } else { lambda.inv()?.pow((-n) as u32) };
        return Ok((x == mu).then_some(n));
    }
    let grow = max_log_modulus(&mu, cap)?;
    // |σ(λⁿ)| peaks at max|σλ|ⁿ for n > 0 and at (min|σλ|)ⁿ for n < 0
    let up = bound(&grow, &max_log_modulus(lambda, cap)?);
    let down = bound(&grow, &max_log_modulus(&lambda.inv()?, cap)?);
    // all conjugates on the unit circle: λ is a root of unity of small order
    let (up, down) = match (up, down) {
        (None, None) => (64, 64),
        (u, d) => (u.unwrap_or(0), d.unwrap_or(0)),
    };
    let mut x = lambda.clone();
    for n in 1..=up {
        if x == mu {
            return Ok(Some(n));
        }
        x = &x * lambda;
    }
    let inv = lambda.inv()?;
    let mut x = inv.clone();
    for n in 1..=down {
        if x == mu {
            return Ok(Some(-n));
        }
        x = &x * &inv;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugates::{basis_with_last, power_basis};
    use crate::nfield::max_bits;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows)
    }

    fn exercise_a() -> IntegerMatrix {
        m(&[&[2, 5, -1], &[3, 6, 1], &[4, 7, 1]])
    }

    #[test]
    fn generator_is_step_inverse() {
        let (a, b) = (BigInt::from(6), BigInt::from(4));
        let t = crate::engines::jacobi_perron_transform(&a, &b);
        assert!((&t * &step_matrix(&a, &b)).is_identity());
        assert_eq!(step_matrix(&a, &b).det(), &BigInt::from(1));
    }

    #[test]
    fn ex_ok_assembly() {
        let p = MinimalPolynomial::parse("x^3+2x^2+x+4").unwrap();
        let sys = ConjugateSystem::new(&p, basis_with_last(3, QPoly::from_ints([0, 1, 1]))).unwrap();
        let e = jacobi_perron_expand(&sys, &RunLimits::default()).unwrap();
        let a = assemble(&e, &sys, max_bits()).unwrap();
        assert_eq!(a.m1, m(&[&[-22, -1, -3], &[51, 2, 7], &[-67, -3, -9]]));
        assert_eq!(a.m2, m(&[&[22, 1, 3], &[7, 0, 1], &[8, 0, 1]]));
        assert_eq!(a.m, m(&[&[5, -4, 3], &[-12, 9, -7], &[16, -12, 9]]));
        assert!(a.dominant && !a.inverted);
    }

    #[test]
    fn cube_root_four_apd_assembly() {
        let p = MinimalPolynomial::parse("x^3-4").unwrap();
        let sys = ConjugateSystem::new(&p, power_basis(3)).unwrap();
        let e = apd_expand(&sys, &ApdOptions::default(), &RunLimits::default()).unwrap();
        let a = assemble(&e, &sys, max_bits()).unwrap();
        assert_eq!(a.m, m(&[&[5, 3, 2], &[8, 5, 3], &[12, 8, 5]]));
        assert!(a.dominant);
    }

    #[test]
    fn companion_eigenvector() {
        let c = m(&[&[0, 1, 0], &[0, 0, 1], &[4, 0, 0]]);
        let eig = eigen_data(&c, max_bits()).unwrap();
        let l = &eig.eigenvalue;
        assert_eq!(eig.eigenvector, vec![FieldElement::one(l.field()), l.clone(), l * l]);
        assert_eq!(eig.signature, (1, 1));
    }

    #[test]
    fn reducible_char_poly_is_rejected() {
        let e = eigen_data(&IntegerMatrix::identity(3), max_bits()).unwrap_err();
        assert!(matches!(e, Error::ReducibleCharPoly(_)));
    }

    #[test]
    fn exercise_one_char_poly() {
        let a = exercise_a();
        let eig = eigen_data(&a, max_bits()).unwrap();
        assert_eq!(eig.char_poly.monic(), &QPoly::from_ints([-6, 2, -9, 1]));
        assert_eq!(eig.signature, (1, 1));
        assert_eq!(eig.unit_rank(), 1);
    }

    #[test]
    fn polynomial_in_trivial() {
        let a = exercise_a();
        let c = |xs: [i64; 3]| xs.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(polynomial_in(&a, &a).unwrap(), Some(c([0, 1, 0])));
        assert_eq!(polynomial_in(&a, &IntegerMatrix::identity(3)).unwrap(), Some(c([0, 0, 1])));
        assert_eq!(polynomial_in(&a, &a.transpose()).unwrap(), None);
    }

    #[test]
    fn powers_are_found() {
        let a = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let cap = max_bits();
        assert_eq!(is_power(&a.pow(2).unwrap(), &a, cap).unwrap(), Some(2));
        assert_eq!(is_power(&a.pow(-3).unwrap(), &a, cap).unwrap(), Some(-3));
        assert_eq!(is_power(&IntegerMatrix::identity(3), &a, cap).unwrap(), Some(0));
        assert_eq!(is_power(&a.pow(2).unwrap().neg(), &a, cap).unwrap(), None);
        let b = m(&[&[2, 5, -1], &[3, 6, 1], &[4, 7, 1]]);
        assert_eq!(is_power(&b.pow(3).unwrap(), &b, cap).unwrap(), Some(3));
        assert_eq!(is_power(&(&b.pow(2).unwrap() * &a), &b, cap).unwrap(), None);
    }

    #[test]
    fn shears_do_not_commute() {
        assert!(!commutes(&m(&[&[1, 1], &[0, 1]]), &m(&[&[1, 0], &[1, 1]])).unwrap());
    }

    #[test]
    fn q3_rejects_complex_case() {
        let c = m(&[&[0, 1, 0], &[0, 0, 1], &[4, 0, 0]]);
        let e = answer_q3(&c, &DirichletOptions::default()).unwrap_err();
        assert_eq!(e, Error::NotTotallyReal { s: 1, t: 1, rank: 1 });
    }
}
