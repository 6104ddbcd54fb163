//! ptlab: a verification and discovery toolkit for permutation trinomials of
//! the shape X^r (X^(a(q-1)) + X^(b(q-1)) + 1) over GF(2^(2m)), q = 2^m.
//!
//! The crate provides:
//!
//! - [`gf2m`]: bit-packed GF(2^n) arithmetic for 1 <= n <= 40 (Frobenius,
//!   relative traces, multiplicative orders, subfield tests);
//! - [`poly`]: univariate and sparse bivariate polynomial arithmetic, root
//!   finding, and points at infinity;
//! - [`circle`]: the unit circle mu_(q+1) inside GF(q^2) and the rational
//!   parametrization phi between GF(q) and mu_(q+1) \ {1};
//! - [`perm`]: permutation testing, both by exhaustive image scan and by the
//!   reduced criterion on the unit circle;
//! - [`family`]: the trinomial families under study, their difference
//!   polynomials, factorization certificates, and per-degree verdicts;
//! - [`qm`]: quasi-multiplicative equivalence machinery (exponent matching,
//!   coefficient solving, witness search, congruence audits);
//! - [`curve`]: rational point counting for the degree-16 plane curve that
//!   settles the nonexistence family, with exact bound arithmetic;
//! - [`catalog`]: the built-in table of known permutation trinomial classes.

pub mod arith;
pub mod catalog;
pub mod circle;
pub mod curve;
pub mod family;
pub mod gf2m;
pub mod perm;
pub mod poly;
pub mod qm;

pub use circle::CircleCtx;
pub use family::{TheoremId, TheoremVerdict, TrinomialFamily};
pub use gf2m::{Elem, FieldCtx};
pub use perm::ExpPoly;
pub use poly::{BiPoly, UniPoly};
pub use qm::QMWitness;

/// Errors across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 1..=40")]
    DegreeOutOfRange(u32),
    #[error("0x{modulus:x} is not an irreducible polynomial of degree {n}")]
    NotIrreducible { n: u32, modulus: u64 },
    #[error("bad modulus table: {0}")]
    BadModulusTable(String),
    #[error("{sub} does not divide {top}")]
    NonDivisibleDegrees { sub: u32, top: u32 },
    #[error("the multiplicative order of zero is undefined")]
    ZeroHasNoOrder,
    #[error("the zero polynomial has no root list")]
    ZeroPolynomial,
    #[error("field with 2^{0} elements is too large for this scan")]
    FieldTooLarge(u32),
    #[error("phi requires odd m: omega lies in GF(q) when m = {0} is even")]
    OmegaUnavailable(u32),
    #[error("element {0} is outside the GF(q) subfield")]
    NotInSubfield(Elem),
    #[error("element {0} is not on the unit circle")]
    NotOnCircle(Elem),
    #[error("phi_inv has a pole at u = 1")]
    PhiInvPole,
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u128, u128),
    #[error("invalid family: need alpha > beta >= 1 and r >= 1, got r={r}, alpha={alpha}, beta={beta}")]
    InvalidFamily { r: u64, alpha: u64, beta: u64 },
    #[error("root exclusion inconclusive for (alpha={alpha}, beta={beta}) at m={m}: no gcd condition holds")]
    RootExclusionFailed { alpha: u64, beta: u64, m: u32 },
    #[error("trace certificate requires gcd(5, m) = 1, got m = {0}")]
    TraceCertificateDegree(u32),
    #[error("classification is defined only for m in {{1, 2}}, got m = {0}")]
    ClassifyDegree(u32),
    #[error("the map does not permute the field, so the operation is undefined")]
    NotAPermutation,
    #[error("witness search requires both inputs to permute the field")]
    InputsNotPermutations,
    #[error("d = {0} does not match the exponent sets")]
    NotAStep1Match(u64),
    #[error("equivalence witness construction failed: {0}")]
    ConjectureFailed(String),
    #[error("{0} is not a prime power")]
    NotAPrimePower(u128),
    #[error("gcd(r, q-1) != 1, so r has no inverse modulo q-1")]
    RNotInvertible,
}

pub type Result<T> = std::result::Result<T, Error>;
