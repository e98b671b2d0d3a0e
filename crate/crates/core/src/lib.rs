pub mod calculus;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod lawgen;
pub mod linsolve;
pub mod model;

pub use error::{Error, Result};
pub use expr::{Atom, Context, Expr, JetCoord, MultiIndex};
