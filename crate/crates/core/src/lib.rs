//! Exact periodic and generic Kazhdan–Lusztig polynomials for extended affine
//! Weyl groups.

pub mod error;
pub mod hecke;
pub mod laurent;
pub mod multiplicity;
pub mod notation;
pub mod orders;
pub mod periodic;
pub mod rootdata;
pub mod table;
pub mod weyl;

pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement};
pub use laurent::{Coeff, LaurentPoly};
pub use multiplicity::{enumerate_blocks, select_omega_s, BlockLabel, Multiplicities};
pub use orders::{SemiInfOutcome, SemiInfinitePoset, Window};
pub use periodic::{PeriodicModule, PolyKind};
pub use rootdata::{CartanType, Family, RootDatum, Weight};
pub use table::{DatumSpec, Table, TableKind};
pub use weyl::{AffineGen, AffineWeylGroup, ExtAffineElement, FiniteElement, WeylGroup};
