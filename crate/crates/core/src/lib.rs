//! Basic and reduced cohomology of finite Lie conformal algebras with a
//! Virasoro element, computed exactly over the rationals.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod cochain;
pub mod cohomology;
pub mod exactpoly;
pub mod linalg;
pub mod presets;
