//! Genus-2 theta constants, theta gradients and Jacobian determinants, together with
//! the characteristic calculus, the level group they descend to, and the relation
//! catalogs among them.

pub mod chars;
pub mod config;
pub mod error;
pub mod gradmap;
pub mod jacobi;
pub mod linalg;
pub mod numeric;
pub mod relcat;
pub mod riemann;
pub mod sympl;
pub mod theta;

pub use chars::{classify_set, Char2, CharSet, OrbitClass, OrbitKind, EVEN, ODD, PUBLISHED_ORBIT_COUNTS};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use jacobi::OddPair;
pub use relcat::{Family, Monomial, Relation};
pub use sympl::{GVector, SpMatrix};
pub use theta::{ApproxValue, GradientValue, SiegelPoint, ThetaEvaluator};
