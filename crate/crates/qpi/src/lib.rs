//! Exact-arithmetic verification engine for a pair of three-colored
//! (mod 10) partition identities.
//!
//! The crate machine-checks, with exact rational arithmetic throughout, the
//! chain of facts behind two partition theorems and one conjecture:
//!
//! * a class of three-colored partitions with color-dependent minimum gaps,
//!   whose generating functions satisfy a coupled system of functional
//!   equations ([`partitions`]);
//! * a pair of triple multisums over q-trinomial coefficients that satisfy
//!   the same functional equations ([`multisum`]);
//! * linear-combination certificates over a family of atomic contiguous
//!   relations, which reduce every needed functional equation to checkable
//!   algebra ([`certificates`]);
//! * infinite-product sides and classical single-sum identities that pin
//!   down the final equalities ([`qseries`]).
//!
//! [`pipeline`] strings these into end-to-end verdicts, and [`exactmath`]
//! supplies the exact polynomial and rational-function arithmetic that
//! everything else is built on.

pub mod exactmath;
pub mod certificates;
pub mod multisum;
pub mod partitions;
pub mod pipeline;
pub mod qseries;
