//! Simple closed geodesics on regular tetrahedra in hyperbolic space.
//!
//! A regular tetrahedron in hyperbolic space has four congruent regular
//! triangular faces with a common face angle `alpha in (0, pi/3)`; its
//! intrinsic geometry depends on `alpha`, unlike the Euclidean case. This
//! crate constructs the simple closed geodesics on that surface, validates
//! their structure, measures them, and counts them by length:
//!
//! * [`hyp`] - hyperbolic-plane kernel (hyperboloid model, Lorentz
//!   isometries, distances and angles);
//! * [`formulas`] - the closed-form trigonometric quantities of the
//!   tetrahedron, each with independent evaluation routes for testing;
//! * [`tetra`] - the surface itself: face charts, edge gluings, vertex
//!   clearance bounds, and the ambient Klein-ball embedding;
//! * [`tiling`] - exact rational edge-crossing combinatorics on the
//!   Euclidean triangular tiling (types (p, q), midpoint traces);
//! * [`develop`] - laying face copies out along a face sequence;
//! * [`geodesic`] - the geodesic builder plus its validation suite
//!   (simplicity, closure, midpoint property, per-segment bounds);
//! * [`count`] - totient/coprime-pair census and the length-counting table
//!   `N(L) ~ c(alpha) L^2`;
//! * [`shoot`] - an independent shooting oracle that rediscovers closed
//!   geodesics without the construction pipeline;
//! * [`render`] - SVG export of developments in the Poincare/Klein disk.
//!
//! Batch drivers (counting tables, oracle scans) are data-parallel via
//! rayon when the default `parallel` feature is on and fall back to
//! sequential loops otherwise; outputs are deterministic either way.

pub mod count;
pub mod develop;
pub mod error;
pub mod exec;
pub mod formulas;
pub mod geodesic;
pub mod hyp;
pub mod render;
pub mod shoot;
pub mod tetra;
pub mod tiling;

pub use error::{Error, Result};
