//! Classical/quantum information ledgers, LOCC protocol simulation and
//! restricted commutators for small bipartite quantum systems.
//!
//! Every entropy is measured in bits, and subsystem 0 is always Alice (the
//! leftmost tensor factor).

pub mod commutators;
pub mod error;
pub mod ledger;
pub mod ops;
pub mod protocols;
pub mod qmat;
pub mod random;
pub mod sausage;

pub use error::{Error, Result};
pub use qmat::{BipartiteState, ComplexMatrix, Party, SchmidtForm, SpectralDecomposition, C64};
