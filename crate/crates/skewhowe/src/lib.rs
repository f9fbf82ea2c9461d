//! Random Young diagrams from the symplectic skew Howe duality
//! `Sp_{2n} × Sp_{2k}` acting on `Λ(ℂ^{2n} ⊗ ℂ^{k})`.
//!
//! The crate covers the whole chain from exact combinatorics to asymptotics:
//!
//! * [`combinatorics`]: King tableaux, Berele insertion, Proctor's algorithm and the sampler;
//! * [`measure`]: exact probabilities via Weyl dimensions and the product formula;
//! * [`orthopoly`]: Krawtchouk polynomials, their Christoffel transform by `u²`, norms and the QR step;
//! * [`kernel`]: the Christoffel–Darboux correlation kernel on the lattice;
//! * [`asymptotics`]: saddle-point asymptotics, limit density and the discrete sine kernel;
//! * [`harness`]: Monte Carlo estimation of the kernel and comparison tables.

pub mod asymptotics;
pub mod combinatorics;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod measure;
pub mod orthopoly;
pub mod params;

pub use error::{Error, Result};
pub use params::EnsembleParams;
