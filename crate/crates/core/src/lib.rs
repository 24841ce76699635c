//! Exact computations with finite rings, 2-dimensional pseudorepresentations,
//! Cayley-Hamilton algebras, generalized matrix algebras, ordinary quotients
//! and Wiles-Lenstra style numerical criteria.

pub mod algebra;
pub mod criterion;
pub mod dvr;
pub mod error;
pub mod gma;
pub mod group;
pub mod literal;
pub mod howell;
pub mod module;
pub mod oracle;
pub mod ordinary;
pub mod psrep;
pub mod ring;
pub mod zmod;

pub use algebra::{Algebra, Elem, Hom};
pub use error::{Error, Result};
pub use howell::Span;
pub use ring::{FiniteRing, Ideal};
pub use zmod::Zmod;
