//! Executable witnesses of ordinal-bounded chain conditions on concrete
//! rings.
//!
//! The library provides:
//!
//! - [`ordinal`]: Cantor-normal-form ordinals below `w^w` with comparison,
//!   ordinal and natural (Hessenberg) arithmetic, and an order-preserving
//!   tuple codec for `[0, w^n)`.
//! - [`chomp`]: staircase positions of transfinite chomp on `w x alpha`
//!   boards and an ordinal size measure that strictly shrinks with the
//!   position.
//! - [`algebra`]: exact arithmetic over ring descriptors (integers,
//!   rationals, prime fields, modular integers, truncated and full
//!   polynomial towers), plus parsers and canonical printers.
//! - [`noether`]: the good-list witness interface. A witness state consumes
//!   ring elements one at a time and either emits a membership certificate
//!   for the newest element or a strictly smaller ordinal bound, so every
//!   input stream is forced to produce a certificate in finitely many steps.
//! - [`hilbert`]: lifts a witness for a ring `A` to one for `A[X]` with
//!   bound `w (x) alpha`, tracking describing sets scored by the chomp
//!   measure.
//! - [`krull`]: drives a witness along monomial streams indexed by ordinals
//!   below `w^n` to extract collapse certificates bounding the Krull
//!   dimension, with an arithmetic-only verifier and a boundary-ideal check.
//! - [`cert`]: deterministic JSON documents for runs and collapse
//!   certificates, and a standalone verifier that depends only on the
//!   ordinal and algebra modules.

pub mod algebra;
pub mod cert;
pub mod chomp;
pub mod hilbert;
pub mod krull;
pub mod noether;
pub mod ordinal;
