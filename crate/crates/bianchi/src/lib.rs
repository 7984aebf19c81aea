//! Finite presentations of the singly-cusped Bianchi groups
//! `PSL2(O_d)`, `d in {-2, -7, -11, -19, -43, -67, -163}`, computed in
//! exact arithmetic.
//!
//! The construction works with the horoball `V = {lambda >= h}` in the
//! upper half-space model of hyperbolic 3-space. Group elements move `V`
//! to Euclidean balls tangent to the boundary plane; once the discs these
//! balls cut on the horosphere `lambda = h` cover a fundamental domain of
//! `C / O_d`, every element whose ball meets `V` is a generator, and every
//! triple overlap of balls yields a relation. The crate certifies the
//! covering on a grid, enumerates the generators and relations, verifies
//! each relation as an exact matrix identity, and post-processes the
//! resulting presentation (abelianization by Smith normal form, Tietze
//! cleanup, CAS export).
//!
//! Entry points:
//! - [`ring`]: exact arithmetic in `Z[omega]`.
//! - [`geometry`]: horoball images, intersection discs, tangency and apex
//!   predicates, all decided on exact rationals.
//! - [`coverage`]: the grid covering certificate and its SVG rendering.
//! - [`enumeration`]: generator and relation search.
//! - [`algebra`]: relator words, abelianization, Tietze moves.
//! - [`io`]: the versioned presentation file format and CAS export.
//! - [`pipeline`]: one-call runs wired to the `bianchi` CLI.

pub mod algebra;
pub mod coverage;
pub mod enumeration;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod ring;

pub use ring::{QuadInt, Rational, RingParams};

// The guide under book/ embeds runnable snippets; compiling them as
// doctests keeps the book in sync with the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/ring.md")]
    mod ring {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/coverage.md")]
    mod coverage {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/presentations.md")]
    mod presentations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
