//! Exact computations with reflection factorizations in finite and affine
//! Weyl groups.
//!
//! Roots are integer vectors over the simple roots, coroots integer vectors
//! over the simple coroots. Affine group elements are kept in the normal form
//! `w_0 · tr(λ)` with `λ` in the coroot lattice.

pub mod checks;
pub mod error;
pub mod hurwitz;
pub mod intlattice;
pub mod linalg;
pub mod quasicox;
pub mod rootsys;
pub mod weyl_aff;
pub mod weyl_fin;

pub use error::{Error, Result};
pub use intlattice::{IntegerLattice, LatticeIndex};
pub use rootsys::{CartanType, CorootVector, Family, Root, RootSystem};
pub use weyl_aff::{AffineReflection, AffineWeylElement};
pub use weyl_fin::FiniteWeylElement;
