//! Exact algebra for rational parametric surfaces: moving planes and
//! mu-bases, base points, and the order of singular points computed
//! directly from the parametrization, with an implicitization oracle for
//! the classical derivative-based order.

pub mod error;
pub mod groebner;
pub mod linalg;
pub mod localmult;
pub mod movplanes;
pub mod oracle;
pub mod poly;
pub mod singular;
pub mod surface;

pub use error::Error;
pub use poly::{parse_poly, Monomial, Polynomial, Rational, Var};
pub use surface::{ProjPoint, SurfaceParam};
