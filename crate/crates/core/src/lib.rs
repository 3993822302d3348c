//! Quaternionic linear algebra, tetraplectic 4-forms on `Sp(n)`-orbits of
//! quaternionic hermitian matrices, tri-momentum maps and quaternary
//! Nambu-type brackets, with numerical certificates for each construction.

pub mod error;
pub mod exterior;
pub mod orbit;
pub mod qlinalg;
pub mod quat;
pub mod rng;
pub mod s4;
pub mod trimomentum;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{AltForm, MultiVector};
pub use qlinalg::{HermitianQ, QMatrix, SpNElement};
pub use quat::{ImQuaternion, Quaternion, UnitQuaternion};
