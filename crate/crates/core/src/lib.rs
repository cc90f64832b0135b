//! Numerical verification of the differential identities of analytic
//! Moufang loops and of their transformation actions.
//!
//! The crate instantiates concrete loops (abelian, unit quaternions, unit
//! octonions) in a chart around the identity, computes translation frames
//! and their brackets with forward-mode automatic differentiation, and
//! certifies each identity — Maurer-Cartan relations, Yamaguti
//! decompositions, the generalized Lie equations and their integrability
//! conditions — to a configurable tolerance at seeded sample points.

pub mod actions;
pub mod harness;
pub mod integrability;
pub mod jets;
pub mod loops;
pub mod report;
