//! Construction and certification of degree-n points on superelliptic curves `y^m = f(x)`.

pub mod arith;
pub mod constraints;
pub mod exponents;
pub mod family;
pub mod galois;
pub mod newton;
pub mod pipeline;
pub mod planner;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
