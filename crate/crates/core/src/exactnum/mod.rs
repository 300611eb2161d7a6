//! Exact scalars, polynomials and certified real arithmetic.

pub mod dyadic;
pub mod factor;
pub mod interval;
pub mod linalg;
pub mod poly;
pub mod primes;
pub mod rational;
pub mod roots;
pub mod real;
pub mod sturm;
pub mod resultant;

pub use poly::RatPoly;
pub use rational::{Place, Rational};
