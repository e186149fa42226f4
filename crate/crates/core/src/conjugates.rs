//! Conjugate-vector systems, the Markov–Davenport form and the plane-angle
//! functional.
//!
//! With `V` the matrix whose rows are the conjugate vectors `σ_k(q)`, the
//! form is `χ(x) = ∏_k det(V with row k replaced by x)`. Expanding each
//! determinant along the replaced row gives `det V · σ_k(γ(x))`, where
//! `γ(x) = Σ x_j q*_j` and `q*` is the trace-dual basis. Hence
//! `χ(x) = det(V)^d · N(γ(x))`, and `N(γ(x))` is rational. This normalized
//! value is what [`md_characteristic`] returns; `det(V)^2` is the rational
//! Gram determinant `det Tr(q_i q_j)`, so `|χ|` and `|N(γ)|` order points
//! identically.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{ComplexInterval, Interval};
use crate::matrix::{bareiss_det, rational_det, rational_inverse, rational_rank, IntegerMatrix};
use crate::nfield::{EmbeddingIndex, FieldElement, MinimalPolynomial};
use crate::poly::QPoly;

struct SystemData {
    p: MinimalPolynomial,
    q_basis: Vec<QPoly>,
    primary: EmbeddingIndex,
    vector: Vec<FieldElement>,
    dual: Vec<FieldElement>,
    /// `L · M(q*_j)`: integer multiplication matrices of the dual basis.
    dual_mul: Vec<Vec<Vec<BigInt>>>,
    dual_scale: BigInt,
    gram_det: BigRational,
}

/// A minimal polynomial with a basis of evaluation polynomials; the k-th
/// conjugate vector is `(q_1(r_k), …, q_d(r_k))`.
#[derive(Clone)]
pub struct ConjugateSystem(Arc<SystemData>);

/// `(1, t, …, t^{d-1})`.
pub fn power_basis(d: usize) -> Vec<QPoly> {
    (0..d)
        .map(|k| QPoly::monomial(BigRational::one(), k))
        .collect()
}

/// `{1, t, q(t)}` for cubics, generalizing to `{1, t, …, t^{d-2}, q(t)}`.
pub fn basis_with_last(d: usize, q: QPoly) -> Vec<QPoly> {
    let mut b = power_basis(d);
    b[d - 1] = q;
    b
}

pub fn build_system(
    p: &MinimalPolynomial,
    q_basis: Vec<QPoly>,
    primary: EmbeddingIndex,
) -> Result<ConjugateSystem> {
    let d = p.degree();
    if q_basis.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: q_basis.len(),
        });
    }
    let primary = p.real_embedding(primary.index)?;
    let vector: Vec<FieldElement> = q_basis.iter().map(|q| FieldElement::from_poly(p, q)).collect();
    let coeffs: Vec<Vec<BigRational>> = vector
        .iter()
        .map(|v| (0..d).map(|k| v.representative().coeff(k)).collect())
        .collect();
    if rational_rank(&coeffs) < d {
        return Err(Error::DependentBasis);
    }
    let gram: Vec<Vec<BigRational>> = (0..d)
        .map(|i| (0..d).map(|j| (&vector[i] * &vector[j]).trace()).collect())
        .collect();
    let gram_det = rational_det(&gram);
    let ginv = rational_inverse(&gram)?;
    let dual: Vec<FieldElement> = (0..d)
        .map(|j| {
            let mut acc = FieldElement::zero(p);
            for i in 0..d {
                acc = &acc + &vector[i].scale(&ginv[j][i]);
            }
            acc
        })
        .collect();
    let mats: Vec<Vec<Vec<BigRational>>> = dual.iter().map(|x| x.mul_matrix()).collect();
    let mut scale = BigInt::one();
    for m in &mats {
        for r in m {
            for x in r {
                scale = scale.lcm(x.denom());
            }
        }
    }
    let sr = BigRational::from_integer(scale.clone());
    let dual_mul = mats
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(|x| (x * &sr).to_integer()).collect())
                .collect()
        })
        .collect();
    Ok(ConjugateSystem(Arc::new(SystemData {
        p: p.clone(),
        q_basis,
        primary,
        vector,
        dual,
        dual_mul,
        dual_scale: scale,
        gram_det,
    })))
}

impl ConjugateSystem {
    /// Convenience constructor for the default real embedding.
    pub fn new(p: &MinimalPolynomial, q_basis: Vec<QPoly>) -> Result<Self> {
        let e = p
            .default_real_embedding()
            .ok_or(Error::ComplexEmbedding(0))?;
        build_system(p, q_basis, e)
    }

    pub fn field(&self) -> &MinimalPolynomial {
        &self.0.p
    }

    pub fn dim(&self) -> usize {
        self.0.vector.len()
    }

    pub fn q_basis(&self) -> &[QPoly] {
        &self.0.q_basis
    }

    pub fn primary(&self) -> EmbeddingIndex {
        self.0.primary
    }

    /// The same basis with a different primary real embedding.
    pub fn with_primary(&self, e: EmbeddingIndex) -> Result<Self> {
        build_system(&self.0.p, self.0.q_basis.clone(), e)
    }

    /// The generic conjugate vector `(q_1(α), …, q_d(α))`.
    pub fn vector(&self) -> &[FieldElement] {
        &self.0.vector
    }

    /// The trace-dual basis `q*`.
    pub fn dual(&self) -> &[FieldElement] {
        &self.0.dual
    }

    /// `det Tr(q_i q_j) = det(V)^2`.
    pub fn gram_det(&self) -> &BigRational {
        &self.0.gram_det
    }

    /// Normalized Markov–Davenport value `N(Σ x_j q*_j)`.
    pub fn chi_hat(&self, x: &[BigInt]) -> Result<BigRational> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        if x.iter().all(|v| v.is_zero()) {
            return Ok(BigRational::zero());
        }
        let m: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for (k, xk) in x.iter().enumerate() {
                            if !xk.is_zero() {
                                s += xk * &self.0.dual_mul[k][i][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let det = bareiss_det(&m);
        Ok(BigRational::new(det, self.0.dual_scale.pow(d as u32)))
    }

    /// Enclosures of all conjugate vectors, `out[k][i] = σ_k(q_i)`.
    pub fn conjugate_vectors(&self, prec: u32) -> Result<Vec<Vec<ComplexInterval>>> {
        conjugate_enclosures(&self.0.vector, prec)
    }

    pub fn initial_state(&self) -> SystemState {
        let d = self.dim();
        SystemState {
            system: self.clone(),
            accumulated: IntegerMatrix::identity(d),
            inverse: IntegerMatrix::identity(d),
            coords: self.0.vector.clone(),
        }
    }
}

pub(crate) fn conjugate_enclosures(
    coords: &[FieldElement],
    prec: u32,
) -> Result<Vec<Vec<ComplexInterval>>> {
    let per_coord: Vec<Vec<ComplexInterval>> = coords
        .iter()
        .map(|c| c.enclose_all(prec))
        .collect::<Result<_>>()?;
    let d = per_coord.first().map(|v| v.len()).unwrap_or(0);
    Ok((0..d)
        .map(|k| per_coord.iter().map(|v| v[k].clone()).collect())
        .collect())
}

impl fmt::Debug for ConjugateSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.0.q_basis.iter().map(|q| q.to_string()).collect();
        write!(
            f,
            "ConjugateSystem(p = {}, q = [{}], primary = {})",
            self.0.p,
            q.join(", "),
            self.0.primary.index
        )
    }
}

impl fmt::Display for ConjugateSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.0.q_basis.iter().map(|q| q.to_string()).collect();
        write!(f, "p = {}, q = ({}), embedding {}", self.0.p, q.join(", "), self.0.primary.index)
    }
}

impl PartialEq for ConjugateSystem {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
            && self.0.q_basis == other.0.q_basis
            && self.0.primary == other.0.primary
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    p: MinimalPolynomial,
    q_basis: Vec<String>,
    primary_embedding: usize,
}

impl Serialize for ConjugateSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemJson {
            p: self.0.p.clone(),
            q_basis: self.0.q_basis.iter().map(|q| q.to_string()).collect(),
            primary_embedding: self.0.primary.index,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConjugateSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SystemJson::deserialize(d)?;
        let basis = j
            .q_basis
            .iter()
            .map(|s| crate::nfield::parse_poly(s).map(|x| x.0))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let e = j
            .p
            .embedding(j.primary_embedding)
            .map_err(D::Error::custom)?;
        build_system(&j.p, basis, e).map_err(D::Error::custom)
    }
}

/// The system after a sequence of unimodular transforms: the primary vector
/// is `accumulated · q(α)`, and every conjugate moves by the same matrix.
#[derive(Clone, Debug)]
pub struct SystemState {
    system: ConjugateSystem,
    accumulated: IntegerMatrix,
    inverse: IntegerMatrix,
    coords: Vec<FieldElement>,
}

impl SystemState {
    pub fn system(&self) -> &ConjugateSystem {
        &self.system
    }

    pub fn accumulated(&self) -> &IntegerMatrix {
        &self.accumulated
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn primary(&self) -> EmbeddingIndex {
        self.system.primary()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Markov–Davenport value of the current conjugate vectors at `x`,
    /// normalized as in [`ConjugateSystem::chi_hat`]. Since the current
    /// vectors are `T · σ_k(q)`, this is `chi_hat(T^{-1} x)`.
    pub fn chi_hat(&self, x: &[BigInt]) -> Result<BigRational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        self.system.chi_hat(&self.inverse.apply(x))
    }

    /// Enclosures of the current conjugate vectors, `out[k]` for embedding k.
    pub fn conjugate_vectors(&self, prec: u32) -> Result<Vec<Vec<ComplexInterval>>> {
        conjugate_enclosures(&self.coords, prec)
    }

    /// Checks `coords == accumulated · q(α)` exactly.
    pub fn verify(&self) -> bool {
        self.accumulated.is_unimodular()
            && self.accumulated.apply_field(self.system.vector()) == self.coords
            && (&self.accumulated * &self.inverse).is_identity()
    }
}

/// Applies `t` to the state: `coords ← t · coords`, `accumulated ← t · accumulated`.
pub fn apply_transform(state: &SystemState, t: &IntegerMatrix) -> Result<SystemState> {
    if t.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: t.dim(),
        });
    }
    t.require_unimodular()?;
    let tinv = t.inverse()?;
    Ok(SystemState {
        system: state.system.clone(),
        accumulated: t * &state.accumulated,
        inverse: &state.inverse * &tinv,
        coords: t.apply_field(&state.coords),
    })
}

/// `N(Σ x_j q*_j)` for the system; see the module notes.
pub fn md_characteristic(system: &ConjugateSystem, point: &[BigInt]) -> Result<BigRational> {
    system.chi_hat(point)
}

/// `∏_k det(rows with row k replaced by point)` for explicit rational rows.
pub fn md_characteristic_rows(rows: &[Vec<BigRational>], point: &[BigRational]) -> Result<BigRational> {
    let d = rows.len();
    if point.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: point.len(),
        });
    }
    let mut prod = BigRational::one();
    for k in 0..d {
        let mut m = rows.to_vec();
        m[k] = point.to_vec();
        prod *= rational_det(&m);
        if prod.is_zero() {
            break;
        }
    }
    Ok(prod)
}

fn complex_det(m: &[Vec<ComplexInterval>]) -> ComplexInterval {
    // cofactor expansion, fine for the small sizes in use
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let prec = m[0][0].precision();
    let mut acc = ComplexInterval::real(Interval::zero(prec));
    for j in 0..n {
        let minor: Vec<Vec<ComplexInterval>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &complex_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Certified enclosure of the unnormalized product of determinants, and of
/// `det(V)^d`, for the current conjugate vectors of `state`.
pub fn md_characteristic_enclosure(
    state: &SystemState,
    point: &[BigInt],
    prec: u32,
) -> Result<(ComplexInterval, ComplexInterval)> {
    let vecs = state.conjugate_vectors(prec)?;
    let d = vecs.len();
    let x: Vec<ComplexInterval> = point
        .iter()
        .map(|v| ComplexInterval::from_rational(&BigRational::from_integer(v.clone()), prec))
        .collect();
    let mut prod = ComplexInterval::from_rational(&BigRational::one(), prec);
    for k in 0..d {
        let mut m = vecs.clone();
        m[k] = x.clone();
        prod = &prod * &complex_det(&m);
    }
    let dv = complex_det(&vecs);
    let mut dvd = ComplexInterval::from_rational(&BigRational::one(), prec);
    for _ in 0..d {
        dvd = &dvd * &dv;
    }
    Ok((prod, dvd))
}

/// Whether the exact normalized value is consistent with the interval
/// product at the given precision.
pub fn chi_agrees(state: &SystemState, point: &[BigInt], prec: u32) -> Result<bool> {
    let exact = state.chi_hat(point)?;
    let (prod, dvd) = md_characteristic_enclosure(state, point, prec)?;
    let scaled = &dvd * &ComplexInterval::from_rational(&exact, prec);
    let diff = &prod - &scaled;
    Ok(diff.contains_zero())
}

fn cross(a: &[Interval], b: &[Interval]) -> [Interval; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn norm_sqr(v: &[Interval]) -> Interval {
    let mut s = v[0].sqr();
    for x in &v[1..] {
        s = &s + &x.sqr();
    }
    s
}

/// Certified `sin²` of the angle between `span(a, b)` and `span(a, c)`.
pub fn sin2_planes(a: &[Interval], b: &[Interval], c: &[Interval]) -> Result<Interval> {
    if a.len() != 3 || b.len() != 3 || c.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: a.len().min(b.len()).min(c.len()),
        });
    }
    let n1 = cross(a, b);
    let n2 = cross(a, c);
    let n = cross(&n1, &n2);
    let d1 = norm_sqr(&n1);
    let d2 = norm_sqr(&n2);
    if d1.contains_zero() || d2.contains_zero() {
        return Err(Error::Degenerate("collinear vectors span no plane".into()));
    }
    let v = norm_sqr(&n)
        .div(&(&d1 * &d2))
        .ok_or_else(|| Error::Degenerate("collinear vectors span no plane".into()))?;
    // the true value lies in [0, 1]
    let prec = v.precision();
    let zero = crate::interval::Dyadic::zero();
    let one = crate::interval::Dyadic::from_int(1);
    let lo = v.lower().clone().max(zero).min(one.clone());
    let hi = v.upper().clone().min(one).max(lo.clone());
    Ok(Interval::new(lo, hi, prec))
}

/// Exact `sin²` for rational vectors.
pub fn sin2_planes_exact(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> Result<BigRational> {
    let cr = |x: &[BigRational], y: &[BigRational]| -> [BigRational; 3] {
        [
            &x[1] * &y[2] - &x[2] * &y[1],
            &x[2] * &y[0] - &x[0] * &y[2],
            &x[0] * &y[1] - &x[1] * &y[0],
        ]
    };
    let ns = |v: &[BigRational]| -> BigRational { v.iter().map(|x| x * x).sum() };
    let n1 = cr(a, b);
    let n2 = cr(a, c);
    let d = ns(&n1) * ns(&n2);
    if d.is_zero() {
        return Err(Error::Degenerate("collinear vectors span no plane".into()));
    }
    Ok(ns(&cr(&n1, &n2)) / d)
}

/// Whether a rational vector has entries of both signs (or a zero).
pub fn has_mixed_signs(v: &[Interval]) -> Option<bool> {
    let signs: Option<Vec<_>> = v.iter().map(|x| x.sign()).collect();
    let signs = signs?;
    let pos = signs.iter().all(|s| s.is_gt());
    let neg = signs.iter().all(|s| s.is_lt());
    Some(!(pos || neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cube_root_system() -> ConjugateSystem {
        let p = MinimalPolynomial::parse("x^3-4").unwrap();
        ConjugateSystem::new(&p, power_basis(3)).unwrap()
    }

    #[test]
    fn dual_basis_is_dual() {
        let s = cube_root_system();
        for i in 0..3 {
            for j in 0..3 {
                let t = (&s.vector()[i] * &s.dual()[j]).trace();
                assert_eq!(t, if i == j { q(1) } else { q(0) });
            }
        }
    }

    #[test]
    fn chi_matches_interval_product() {
        let s = cube_root_system();
        let st = s.initial_state();
        for pt in [[1, 1, 1], [2, -1, 3], [0, 0, 1], [5, 7, -2]] {
            assert!(chi_agrees(&st, &ints(&pt), 128).unwrap());
        }
        assert!(s.chi_hat(&ints(&[0, 0, 0])).unwrap().is_zero());
    }

    #[test]
    fn chi_hat_value_at_ones() {
        // N(q*_0 + q*_1 + q*_2) for x^3 - 4: the dual basis is
        // (1/3, α²/12, α/12), so γ = 1/3 + α/12 + α²/12
        let s = cube_root_system();
        let got = s.chi_hat(&ints(&[1, 1, 1])).unwrap();
        let p = s.field();
        let gamma = FieldElement::from_poly(
            p,
            &QPoly::new(vec![
                BigRational::new(1.into(), 3.into()),
                BigRational::new(1.into(), 12.into()),
                BigRational::new(1.into(), 12.into()),
            ]),
        );
        assert_eq!(got, gamma.norm());
    }

    #[test]
    fn rows_form_vanishes_on_planes() {
        let rows = vec![vec![q(1), q(2), q(0)], vec![q(0), q(1), q(3)], vec![q(2), q(0), q(1)]];
        let on_plane: Vec<BigRational> = (0..3).map(|i| &rows[0][i] * q(3) - &rows[1][i] * q(2)).collect();
        assert!(md_characteristic_rows(&rows, &on_plane).unwrap().is_zero());
        assert!(!md_characteristic_rows(&rows, &[q(1), q(1), q(1)]).unwrap().is_zero());
    }

    #[test]
    fn sin2_examples() {
        let e = |v: [i64; 3]| -> Vec<BigRational> { v.iter().map(|&x| q(x)).collect() };
        assert_eq!(sin2_planes_exact(&e([1, 0, 0]), &e([0, 1, 0]), &e([0, 1, 0])).unwrap(), q(0));
        assert_eq!(sin2_planes_exact(&e([1, 0, 0]), &e([0, 1, 0]), &e([0, 0, 1])).unwrap(), q(1));
        assert_eq!(
            sin2_planes_exact(&e([1, 0, 0]), &e([0, 1, 0]), &e([0, 1, 1])).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let iv = |v: [i64; 3]| -> Vec<Interval> { v.iter().map(|&x| Interval::from_int(x, 64)).collect() };
        let s = sin2_planes(&iv([1, 0, 0]), &iv([0, 1, 0]), &iv([0, 1, 1])).unwrap();
        assert!(s.contains_rational(&BigRational::new(1.into(), 2.into())));
        assert!(sin2_planes(&iv([1, 0, 0]), &iv([2, 0, 0]), &iv([0, 1, 1])).is_err());
    }

    #[test]
    fn transforms_accumulate() {
        let s = cube_root_system();
        let st = s.initial_state();
        let t1 = IntegerMatrix::from_i64(&[&[0, 1, -2], &[0, 0, 1], &[1, 0, -1]]);
        let t2 = IntegerMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let s1 = apply_transform(&st, &t1).unwrap();
        let s2 = apply_transform(&s1, &t2).unwrap();
        assert_eq!(s2.accumulated(), &(&t2 * &t1));
        assert!(s2.verify());
        let same = apply_transform(&st, &IntegerMatrix::identity(3)).unwrap();
        assert_eq!(same.coords(), st.coords());
        let bad = IntegerMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(apply_transform(&st, &bad), Err(Error::NotUnimodular(_))));
        // equivariance: chi of the moved system at T x equals chi at x
        let x = ints(&[3, -1, 2]);
        assert_eq!(s2.chi_hat(&s2.accumulated().apply(&x)).unwrap(), st.chi_hat(&x).unwrap());
    }

    #[test]
    fn dependent_basis_rejected() {
        let p = MinimalPolynomial::parse("x^3-4").unwrap();
        let b = vec![QPoly::one(), QPoly::x(), QPoly::from_ints([1, 1])];
        assert!(matches!(ConjugateSystem::new(&p, b), Err(Error::DependentBasis)));
    }

    #[test]
    fn serde_round_trip() {
        let p = MinimalPolynomial::parse("x^3+2x^2+x+4").unwrap();
        let s = ConjugateSystem::new(&p, basis_with_last(3, QPoly::from_ints([0, 1, 1]))).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: ConjugateSystem = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
