//! Exact-arithmetic constructions attached to surfaces with finite-group
//! bundle decorations: gluing-pattern combinatorics, twisted representation
//! varieties over finite groups, the twisted Fock-Rosly Poisson structure,
//! and its first-order reflection-equation quantisation, all verified as
//! polynomial identities over the rationals.

pub mod cli;
pub mod lie;
pub mod par;
pub mod pattern;
pub mod poisson;
pub mod rea;
pub mod report;
pub mod repvar;
pub mod ring;
pub mod suite;
