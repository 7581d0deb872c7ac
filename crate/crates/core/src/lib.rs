//! Finite-dimensional algebras over finite fields, their Frobenius twists,
//! perverse-equivalence data, and (sigma-)Morita Frobenius numbers.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — exact `F_{p^m}` arithmetic with canonical moduli and the
//!   Frobenius automorphism;
//! * [`linalg`] / [`intmat`] — dense exact linear algebra over the field
//!   and over the integers (Smith normal form);
//! * [`algebra`] — structure-constant algebras: radicals, idempotents,
//!   splitting fields, Cartan matrices, basic algebras;
//! * [`modrep`] — modules as matrix representations: MeatAxe splitting,
//!   composition factors, Hom spaces, twists, bimodules;
//! * [`derived`] — bounded complexes, homology, Grothendieck-group
//!   bookkeeping, perversity data and the perversity checker;
//! * [`morita`] — sigma-Morita checks, Morita and sigma-Morita Frobenius
//!   numbers, subfield-form bounds, and the transfer certificates;
//! * [`groupalg`] — finite groups by multiplication table, (twisted) group
//!   algebras, central extensions, blocks, defects;
//! * [`iso`] — bounded isomorphism search for algebras;
//! * [`samples`] — the small zoo of fields, groups and algebras used by
//!   tests, the CLI corpus and the demo.

pub mod algebra;
pub mod derived;
pub mod error;
pub mod field;
pub mod groupalg;
pub mod intmat;
pub mod iso;
pub mod linalg;
pub mod modrep;
pub mod morita;
pub mod quiver;
pub mod samples;

pub use error::{Error, Result};
