//! Exact computations in group algebras `k[G]` over fields of characteristic 2.
//!
//! The crate covers four connected topics:
//!
//! - [`group`]: finite groups given by Cayley tables, with the involution set
//!   `G_2`, a half-set `Σ` of the non-involutions, the subgroup `G_0` generated
//!   by squares and involutions, and the essential characters `G -> Z/2`.
//! - [`field`]: arithmetic in `GF(2^n)` for `n <= 16`, Artin-Schreier classes
//!   `k / ℘(k)`, subfield embeddings, relative traces and Arf invariants.
//! - [`algebra`]: the algebra `k[G]` with its canonical involution, hermitian
//!   elements, the invariants `h_ε`, and hermitian equivalence.
//! - [`unitary`]: the unitary group `U_G(F_q) = { x : x x* = 1 }`, its point
//!   counts `2^c q^d` and Jacobian ranks.
//! - [`galois`]: Galois algebras over finite fields, their trace forms, and
//!   self-dual normal bases.
//!
//! Everything here is `no_std` (with `alloc`). File formats, the command line
//! and the multi-threaded search drivers live in the `unitrace` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod field;
pub mod galois;
pub mod group;
pub mod linalg;
pub mod unitary;

pub use algebra::{AlgebraElement, GroupAlgebra, HermitianElement};
pub use error::{Error, Result};
pub use field::{FieldElement, Gf2nField};
pub use galois::{GFormGram, GaloisAlgebra};
pub use group::{EssentialCharacter, FiniteGroup};
pub use unitary::{ComponentEstimate, PointCountReport, UnitaryEnumerator};
