//! Symmetric multiqubit random induced states.
//!
//! Generation of random induced states of `N` symmetric qubits by tracing
//! an ancilla (qubits or a qudit), classification of each state as NPT, PPT
//! bound entangled, separable or undecided across every `k | N-k` cut, and
//! the statistics built on top of that: occurrence probabilities, phase
//! boundaries and Hilbert–Schmidt geometry.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are what the batch tooling uses.

pub mod coherent;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod phases;
pub mod real;
pub mod sampling;
pub mod septest;
pub mod spectra;
pub mod symspace;

pub use error::{Error, Result};
pub use real::{CMatrix, Real};
pub use sampling::{Method, MethodParams, RisGenerator, RngStream};
pub use septest::{Certifier, SepConfig, Verdict};
pub use spectra::{PartitionFlags, PptAnalyzer, PptFlag};
pub use symspace::{BipartiteEmbedding, DickeIndex, SymState};

pub type SymState64 = SymState<f64>;
pub type SymState32 = SymState<f32>;
pub type Embedding64 = BipartiteEmbedding<f64>;
pub type PartitionFlags64 = PartitionFlags<f64>;
pub type Certifier64 = Certifier<f64>;
pub type Classifier64 = montecarlo::Classifier<f64>;
pub type RisGenerator64 = RisGenerator<f64>;
pub type Matrix64 = CMatrix<f64>;

/// Version string written next to every output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
