//! Exact integral cohomology of rational cut-and-project tiling spaces.

pub mod arrangement;
pub mod exact_linalg;
pub mod exterior;
pub mod scheme;
pub mod cohomology;
pub mod torus_mv;
