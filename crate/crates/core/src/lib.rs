//! Exact computation of link invariants in quasi-cylinders.
//!
//! A quasi-cylinder is an oriented 3-manifold `M` together with a submodule
//! `V` of `H_1(∂M)` mapping isomorphically onto `H_1(M)`; the prototype is
//! `Σ × [0,1]` for a surface `Σ` with `V = H_1(Σ × 0)`. Links in such a
//! manifold carry generalized linking numbers, Seifert forms with an extra
//! homomorphism `d : H → V`, and invariants derived from them. This crate
//! computes those invariants exactly:
//!
//! * [`ring`] — exact multivariate Laurent polynomial arithmetic (with half
//!   powers of `t` via an internal variable `u`, `t = u²`) and exact
//!   determinants of polynomial matrices;
//! * [`seifert`] — Seifert triples `(H, θ, d)`, bilinear form families, the
//!   move calculus (elementary, trivial and φ-enlargements), restriction;
//! * [`alexander`] — Alexander module presentations and the extended
//!   Alexander–Conway polynomial `Δ_{L,ψ₁..ψₙ}(t, s₁..sₙ)`;
//! * [`signatures`] — extended Murasugi–Tristram–Levine signatures
//!   `σ(ω, λ)` and derived signatures via restriction;
//! * [`colored`] — colored Seifert triples, the extended Conway function
//!   `Ω` in the localized ring, multivariable signatures;
//! * [`concordance`] — Fox–Milnor style obstructions: difference triples,
//!   metabolizer verification, the factorization identity, signature
//!   certificates;
//! * [`diagram`] — links presented by diagrams on a disc with holes:
//!   generalized linking numbers, the generalized Seifert algorithm,
//!   extraction of `(Θ, d)`, and an independent skein-recursion oracle.

pub mod ring;
pub mod mat;
pub mod seifert;
pub mod alexander;
pub mod eigen;
pub mod signatures;
pub mod colored;
pub mod concordance;
pub mod diagram;
pub mod io;
pub mod fuzz;
pub mod corpus;

pub use ring::{GroundRing, LaurentPoly, LocalizedPoly, PolyMatrix, RingError};
pub use mat::Matrix;
pub use seifert::{
    AmbientSpec, BilinearFamily, LinkMeta, MoveKind, MoveRecord, SeifertError, SeifertTriple,
    Symmetry,
};
pub use alexander::{AlexanderPresentation, ConwayPolynomial};
pub use signatures::{EvalPoint, SignatureResult};
pub use colored::{ColoredMove, ColoredSeifertTriple, SignVector};
pub use concordance::{DifferenceTriple, Metabolizer};
pub use diagram::{CombSeifertSurface, DiagramError, SurfaceDiagram};

/// Rational scalar used throughout: exact arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// Shorthand for an exact integer scalar.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for an exact rational scalar `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
