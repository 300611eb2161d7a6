//! Exact heights, convex bodies, Hankel constructions and conjugate
//! approximation experiments over ℚ.

pub mod construct;
pub mod convexbody;
pub mod error;
pub mod exactnum;
pub mod gelfond;
pub mod hankel;
pub mod heights;
pub mod report;

pub use error::{Error, Result};
