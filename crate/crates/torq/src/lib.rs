//! Exact machinery for lattice polytopes and the toric varieties they encode:
//! retraction sequences, orbifold data along a retraction, divisiveness, and
//! membership checks for piecewise polynomial and piecewise Laurent algebras.

pub mod cohomology;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod polytope;
pub mod retraction;
pub mod singularity;
