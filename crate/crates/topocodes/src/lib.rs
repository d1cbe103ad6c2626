//! Surface and color codes on two-dimensional cell complexes.
//!
//! Lattices come from [`builders`], their Z2 homology from [`complex2d`],
//! codes from [`stab`]. [`decode`] has the matching and exact
//! maximum-likelihood decoders, [`ising`] the random-bond Ising mappings and
//! [`mc`] the threshold sweeps.

pub mod builders;
pub mod complex2d;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod ising;
pub mod matching;
pub mod mc;
mod patches;
pub mod rng;
pub mod stab;

pub mod cli;

pub use builders::{build, Family, LatticeSpec};
pub use complex2d::{CellComplex2D, Color};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use stab::{PauliOp, StabilizerCode};
