//! Exact computer algebra for connections on bimodules over finite-dimensional
//! algebras over the rationals.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod calculus;
pub mod connection;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod linalg;
pub mod model;
pub mod pipeline;
pub mod rational;
pub mod report;
pub mod tensor;
pub mod tensor_product;
pub mod universal;
pub mod verdict;

pub use error::{Error, Result};
pub use rational::{q, Rational};
