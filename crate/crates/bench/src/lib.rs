//! Fixed inputs shared by the benchmarks.

use hermite_core::conjugates::{basis_with_last, power_basis};
use hermite_core::{ConjugateSystem, IntegerMatrix, MinimalPolynomial, QPoly};

fn system(poly: &str, basis: Vec<QPoly>) -> ConjugateSystem {
    let p = MinimalPolynomial::parse(poly).expect("fixture polynomial");
    ConjugateSystem::new(&p, basis).expect("fixture system")
}

/// `(1, ξ, ξ² + ξ)` for the real root of `x³ + 2x² + x + 4`.
pub fn ex_ok() -> ConjugateSystem {
    system("x^3+2x^2+x+4", basis_with_last(3, QPoly::from_ints([0, 1, 1])))
}

/// `(1, ∛4, ∛16)`.
pub fn cube_root_four() -> ConjugateSystem {
    system("x^3-4", power_basis(3))
}

/// The totally real cubic field of `x³ - 3x - 1` in its power basis.
pub fn simplest_cubic() -> ConjugateSystem {
    system("x^3-3x-1", power_basis(3))
}

pub fn exercise_matrix() -> IntegerMatrix {
    IntegerMatrix::from_i64(&[&[2, 5, -1], &[3, 6, 1], &[4, 7, 1]])
}
