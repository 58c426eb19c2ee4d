//! The Weil representation of `SL_2(F_p)` on `C(F_p)`, the canonical
//! eigenbasis of the prime-length DFT it produces, and the discrete
//! oscillator transform with its fast split-torus variant.

pub mod bench;
pub mod error;
pub mod fft;
pub mod heisenberg;
pub mod linalg;
pub mod modp;
pub mod oscillator;
pub mod spectral;
pub mod symplectic;
pub mod tolerances;
pub mod weil;

pub use error::{Error, Result};
pub use linalg::Operator;
pub use modp::PrimeContext;
