//! Exact Littelmann path crystals for level-zero extremal weights of affine
//! Kac–Moody algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`rootsys`]: affine Cartan data, weights, the invariant form, real roots.
//! * [`weyl`]: Weyl group orbits, the cover order on an orbit, a-chains.
//! * [`path`] and [`operators`]: paths modulo reparametrization and the root
//!   operators `e_i`, `f_i`.
//! * [`ls`]: Lakshmibai–Seshadri paths and generation of finite crystals.
//! * [`explorer`]: bounded exploration of path crystals as colored graphs.
//! * [`verify`]: windowed verification campaigns with JSON reports.
//!
//! All arithmetic is exact over ℚ.

pub mod error;
pub mod explorer;
pub mod ls;
pub mod operators;
pub mod path;
pub mod rational;
pub mod rootsys;
pub mod verify;
pub mod weight;
pub mod weyl;

pub use error::{Error, Result};
pub use explorer::{Character, CrystalGraph, ExploreLimits, WeightWindow};
pub use ls::LsPath;
pub use operators::{Fault, OpKind, OpLetter, OpWord, RootOperators};
pub use path::{Path, Segment};
pub use rational::Q;
pub use rootsys::{AffineData, AlgebraSpec, CartanMatrix, RealRoot};
pub use weight::Weight;
pub use weyl::{CoverGraph, OrbitWindow, WeylWord};
