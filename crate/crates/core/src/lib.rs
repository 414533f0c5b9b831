//! Exact Newton-polygon machinery for plane Jacobian pairs: lattice geometry,
//! Laurent polynomial algebra, homogeneous bracket equations `[G,R] = R^i`,
//! edge obstructions and the enumeration of admissible corner chains.

pub mod chains;
pub mod factor;
pub mod homogform;
pub mod lattice;
pub mod laurentpoly;
pub mod obstruction;
pub mod report;
pub mod text;
pub mod univariate;

pub use lattice::{Direction, Exp, LatticePoint};
pub use laurentpoly::{Axis, LaurentPoly, PolyError};
pub use text::{parse_poly, ParseError};
pub use univariate::UniPoly;
