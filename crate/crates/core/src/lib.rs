//! Patches and strips on multigraphs.
//!
//! A patch is a thickening of a connected multigraph into a surface with
//! boundary. Combinatorially it is a rotation system (cyclic order of edge
//! ends at every vertex) plus one twist bit per edge. A strip is a patch with
//! a single boundary circle. This crate enumerates every patch on small
//! graphs, classifies each one (boundary count, orientability, surface type)
//! and checks the counting bounds relating strips to the cycle space of the
//! graph.
//!
//! Module map:
//! - [`multigraph`]: graphs with loops and parallel edges, bridges,
//!   contraction, cyclic part, vertex expansion, brute-force isomorphism.
//! - [`cycle_space`]: GF(2) edge sets and fundamental cycle bases.
//! - [`intersection`]: the extended intersection graph of a cycle basis and
//!   its tuples of disjoint simple paths.
//! - [`ribbon`]: rotation systems, twists, boundary tracing, surfaces.
//! - [`census`]: exhaustive patch enumeration and the bound checks.
//! - [`catalog`]: small cyclic multigraphs up to isomorphism, and sweeps.
//! - [`cli`]: the `clc` command-line front end.

pub mod catalog;
pub mod census;
pub mod cli;
pub mod cycle_space;
pub mod error;
pub mod intersection;
pub mod multigraph;
pub mod ribbon;

pub use error::{Error, Result};
pub use multigraph::{Dart, MultiGraph};
pub use ribbon::{Patch, RotationSystem, TwistVector};
