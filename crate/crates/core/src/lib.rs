//! Exact rational toolkit for cones of numerical cycle classes.
//!
//! The crate is organised bottom-up:
//!
//! - [`rational`], [`linalg`], [`lp`]: exact scalars, dense linear algebra
//!   and a phase-one simplex.
//! - [`cone`], [`polytope`]: polyhedral cones in double description and
//!   bounded polyhedra with vertex enumeration.
//! - [`ring`]: presented graded intersection rings with exact rewriting and
//!   pairings.
//! - [`projbundle`]: cones and closed-form decompositions on projective
//!   bundles over curves, from Harder-Narasimhan data.
//! - [`negdef`]: surface-type decompositions against a Gram matrix.
//! - [`zariski`]: decompositions over explicit cone data, with a
//!   domination-maximum (directedness) certificate.
//! - [`fixtures`]: embedded example geometries and their claim checks.
//!
//! Everything is exact; no floating point value enters or leaves a public
//! operation.

pub mod certificate;
pub mod cone;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod lp;
pub mod negdef;
pub mod polytope;
pub mod projbundle;
pub mod rational;
pub mod ring;
pub mod zariski;

pub use certificate::Certificate;
pub use cone::PolyCone;
pub use decomposition::Decomposition;
pub use error::{Error, ErrorKind, Result};
pub use polytope::RationalPolytope;
pub use rational::{ClassVector, Rational};
