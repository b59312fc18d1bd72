//! Distance-squared Morse functions on matrix homogeneous spaces.
//!
//! The crate models O(n;F), SO(n), complex Grassmannians, the Lagrangian
//! Grassmannian, the space of complex structures on R^{2n} and the complete
//! flag manifold U(n)/Tⁿ as embedded submanifolds of matrix spaces, and
//! studies the function `f_a(x) = ‖x − a‖²` on them: critical points and
//! indices, gradient flows, Bott-Samelson cycles and the symmetric-function
//! description of the resulting Schubert classes.

pub mod config;
pub mod error;
pub mod flow;
pub mod linalg;
pub mod manifold;
pub mod morse;
pub mod resolution;
pub mod rng;
pub mod symfunc;

pub use error::{Error, Result};
pub use linalg::{inner, Field, Matrix, Scalar};
pub use manifold::{Manifold, ManifoldKind, ManifoldPoint};
pub use morse::{CriticalPoint, Label, MorseSetup, PoincarePolynomial, Ring};
