//! Young diagrams, King tableaux and Proctor's sampling algorithm.

mod bijection;
mod diagram;
mod insertion;
mod proctor;
mod sampler;
pub mod tableau;

pub use bijection::{validate_bijection, BijectionReport, EXHAUSTIVE_LIMIT};
pub use diagram::YoungDiagram;
pub use insertion::{berele_insert, Insertion};
pub use proctor::{proctor_from_matrix, BinaryMatrix, ProctorPair};
pub use sampler::{sample_diagram, sample_rng, Sampler};
pub use tableau::{KingTableau, Letter};
