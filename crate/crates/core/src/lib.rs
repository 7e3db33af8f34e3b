//! Exact computations attached to the definite quaternion algebra over Q
//! ramified at {∞, 23}: its class set and Brandt matrices, ternary theta
//! series with quadratic characters, fixed-point counts on the 2-adic
//! Bruhat–Tits tree, Fourier analysis on M₂(Z/2^N), and 2-adic local integrals.

#![allow(clippy::needless_range_loop)]

pub mod class_graph;
pub mod constants;
pub mod error;
pub mod finite_fourier;
pub mod linalg;
pub mod quat_core;
pub mod report;
pub mod theta_q;
pub mod tree_fix;

pub use error::{Error, Result};
