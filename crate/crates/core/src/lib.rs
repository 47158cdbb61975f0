//! Exact diagnostics for mixed-state topological order at desk scale.
//!
//! The crate works on stabilizer mixed states `ρ ∝ ∏(1+S_i)/2` with bit-packed
//! GF(2) algebra, and falls back to dense density matrices where an
//! independent check or a convex-roof optimization is needed.
//!
//! | module | contents |
//! |---|---|
//! | [`gf2`] | rank, rref, nullspace, span membership |
//! | [`pauli`] | phase-tracked Pauli operators, Clifford conjugation |
//! | [`lattice`] | square/honeycomb geometry, paths, region partitions |
//! | [`stabmix`] | stabilizer mixed states, entropies, CMI, symmetry status |
//! | [`cssnoise`] | Pauli noise at any strength via syndrome pushforward |
//! | [`anomaly`] | string operators, braiding, statistics, pullback, memory |
//! | [`negativity`] | commutation-matrix negativity, CZ-model negativity |
//! | [`convexroof`] | dense states, partial trace/transpose, convex roofs |
//! | [`config`] | JSON experiment configs and the batch runner |
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run -p topomix --example negativity_tables
//! cargo run -p topomix --example levin_wen_cmi
//! cargo run -p topomix --example noise_decoupling
//! cargo run -p topomix --example anyon_data
//! cargo run -p topomix --example symmetry_pullback
//! cargo run -p topomix --example memory_classes
//! cargo run -p topomix --example tee_witness
//! cargo run -p topomix --example ghz_roof --release
//! cargo run -p topomix --example cz_negativity --release
//! ```
//!
//! Entropies are in bits throughout.

pub mod anomaly;
pub mod config;
pub mod convexroof;
pub mod cssnoise;
pub mod gf2;
pub mod lattice;
pub mod negativity;
pub mod pauli;
pub mod stabmix;

mod error;

pub use error::Error;
pub use gf2::{BitMatrix, BitVec};
pub use lattice::{Boundary, Lattice, LatticeKind, Partition, Path};
pub use pauli::{CliffordCircuit, Direction, Gate, PauliOp, Phase};
pub use stabmix::{StabilizerMixedState, SymmetryStatus};
