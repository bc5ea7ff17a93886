//! Exact-arithmetic toolkit for persistence modules on finite index windows.
//!
//! A persistence module here is a grid of finite-dimensional rational vector
//! spaces connected by linear structure maps, indexed either by a closed
//! integer interval (`Module1d`) or by a closed integer rectangle
//! (`Module2d`). The crate provides:
//!
//! - [`ratmat`]: arbitrary-precision rational scalars and dense matrices,
//!   including a canonical reduced-row-echelon kernel that records the row
//!   transform and an operation count;
//! - [`pmod`]: the module data model, validation, and a canonical JSON
//!   serialization;
//! - [`basis1d`] / [`basis2d`]: freeness criteria checks and extraction of an
//!   explicit homogeneous basis when the criteria hold;
//! - [`oracle`]: brute-force reference computations (decomposable subspaces,
//!   Betti counts, birth sets, basis verification, unique representation) and
//!   a deterministic random free-module fixture generator;
//! - [`posetcheck`]: a symbolic classifier for indicator modules on unions of
//!   principal upsets and staircase regions of the plane.
//!
//! All arithmetic is exact; there are no tolerances anywhere.

pub mod basis1d;
pub mod basis2d;
pub mod oracle;
pub mod pmod;
pub mod posetcheck;
pub mod ratmat;
