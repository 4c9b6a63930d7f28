//! Exact classical simulation of the coset-state distinguishing problems over
//! the symmetric group, and the quantum public-key schemes built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, the key classes K_n and K_n^m, samplers.
//! * [`qstate`]: sparse amplitude vectors over `Z_m × S_n`.
//! * [`ff`] and [`cyc`]: state generators, the sign conversion and the
//!   trapdoor decoders.
//! * [`graph`]: graphs, automorphism search, label gadgets, the
//!   UniqueGA_ff oracle, the GA → UniqueGA_ff reduction and coset sampling.
//! * [`reductions`]: worst-to-average randomisation, the GA attack pipeline,
//!   the hybrid distinguisher and advantage estimation.
//! * [`pkc`]: the single-bit and multi-bit encryption protocols.
//! * [`selftest`]: the end-to-end acceptance checks.

pub mod cyc;
pub mod distinguisher;
mod error;
pub mod ff;
pub mod graph;
pub mod perm;
pub mod pkc;
pub mod qstate;
pub mod reductions;
pub mod sample;
pub mod seed;
pub mod selftest;
pub mod stats;

pub use error::{Error, Result};
pub use perm::{Permutation, SecurityParam};
pub use qstate::SparseState;
pub use sample::{PureSample, SampleTuple};
