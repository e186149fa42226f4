//! Exact arithmetic in `Q(α)` and certified evaluation of its embeddings.

mod element;
mod minpoly;
mod parse;
mod roots;

use std::sync::OnceLock;

pub use element::{compare_real, compare_real_capped, floor_quotient, FieldElement};
pub use minpoly::{isolate_roots, MinimalPolynomial, IRREDUCIBILITY_CHECK_MAX_DEGREE};
pub use parse::{parse_poly, parse_rational};
pub use roots::{EmbeddingIndex, EmbeddingKind};

/// Default cap on working precision for certified comparisons.
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Precision cap: `HERMITE_MAX_BITS` if set, otherwise [`DEFAULT_MAX_BITS`].
pub fn max_bits() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("HERMITE_MAX_BITS")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&b: &u32| b >= 64)
            .unwrap_or(DEFAULT_MAX_BITS)
    })
}
