//! Quaternionic coherent, squeezed and fermionic states on a truncated right
//! quaternionic Fock space with a basis-relative left scalar multiplication.

pub mod error;
pub mod exec;
pub mod fock;
pub mod integrate;
pub mod observables;
pub mod qop;
pub mod quat;
pub mod slicekit;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use fock::{BasisTag, FockVector};
pub use qop::{EmbeddedOperator, FockOperator};
pub use quat::{ComplexMatrix2, PolarForm, Quaternion, SliceElement};
