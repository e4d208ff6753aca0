//! Numerical toolkit for plank covers of convex bodies.
//!
//! A plank is the region between two parallel hyperplanes; its relative
//! width with respect to a body K is the plank width divided by K's width
//! in the plank's normal direction. For any plank cover of a convex body
//! in R^d the total relative width is at least 2/(1 + sqrt(d)), and this
//! crate evaluates and certifies every ingredient of that bound on
//! V-represented polytopes:
//!
//! - [`geometry`]: support functions, directional widths, difference
//!   bodies and minimal-width search.
//! - [`lp`]: a dense two-phase simplex kernel powering membership tests,
//!   radial functions and chord lengths.
//! - [`john`]: minimum-volume enclosing ellipsoids and John-position
//!   normalization with a verified sandwich certificate.
//! - [`planks`]: planks, relative widths, cover generation and a
//!   one-sided cover verifier whose refutations are rigorous.
//! - [`bounds`]: the closed-form chord/width ratio bound, its sharpness
//!   witness, and end-to-end certification reports.
//! - [`cli`]: the `plankbound` command-line front end.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod john;
pub mod lp;
pub mod planks;
pub mod sphere;

pub use error::{Error, Result};
