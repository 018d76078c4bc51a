//! Minimal lifts, quotient norms and Finsler geodesics on unitary orbits of
//! compact Hermitian diagonals.

pub mod cli;
pub mod error;
pub mod factory;
pub mod geodesics;
pub mod io;
pub mod linalg;
pub mod minimality;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod tolerances;
